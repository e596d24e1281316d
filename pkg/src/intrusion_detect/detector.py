"""Trend classification of ``I_n`` and ``B_n`` and the rule-of-thumb verdict.

Decisions
---------
* ``I_n`` clearly away from 1/2 means no intrusion.
* ``I_n`` near 1/2 with ``B_n`` growing like ``sqrt(n)`` means intrusion.
* ``I_n`` near 1/2 with bounded ``B_n`` means no intrusion.
* ``I_n`` near 1/2 with an unclear ``B_n`` trend depends on ``h(a)`` vs
  ``h(b)``: if they differ the limit 1/2 can only come from intrusions;
  if they agree the run must be repeated with deterministic grid inputs.

The qualitative words "decisive" and "vague" are pinned down by
:class:`TrendParams`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core_stats import Trajectory
from .errors import BadParameters, EndpointInfoRequired, InsufficientData


@dataclass(frozen=True)
class TrendParams:
    tail_fraction: float = 0.25
    half_band: float = 0.05
    decisive_band: float = 0.02
    growth_ratio_hi: float = 1.3
    growth_ratio_lo: float = 1.05
    min_tail_points: int = 20

    def __post_init__(self):
        if not 0 < self.tail_fraction <= 1:
            raise BadParameters(f"tail_fraction must be in (0, 1], got {self.tail_fraction}")
        if not 0 < self.decisive_band < self.half_band:
            raise BadParameters("need 0 < decisive_band < half_band")
        if not 0 < self.growth_ratio_lo < self.growth_ratio_hi:
            raise BadParameters("need 0 < growth_ratio_lo < growth_ratio_hi")
        if self.min_tail_points < 1:
            raise BadParameters("min_tail_points must be positive")

    def describe(self) -> str:
        return " ".join(f"{k}={v}" for k, v in asdict(self).items())


class ILabel(enum.Enum):
    TO_HALF_DECISIVE = "ToHalfDecisive"
    TO_HALF_VAGUE = "ToHalfVague"
    AWAY_DECISIVE = "AwayDecisive"
    AWAY_VAGUE = "AwayVague"

    @property
    def toward_half(self) -> bool:
        return self in (ILabel.TO_HALF_DECISIVE, ILabel.TO_HALF_VAGUE)


class BLabel(enum.Enum):
    GROWING_DECISIVE = "GrowingDecisive"
    BOUNDED_DECISIVE = "BoundedDecisive"
    AMBIGUOUS = "Ambiguous"


class Decision(enum.Enum):
    ABSENT = "IntrusionAbsent"
    PRESENT = "IntrusionPresent"
    RERUN = "InterruptAndRerunDeterministic"

    @property
    def exit_code(self) -> int:
        return {"IntrusionAbsent": 0, "IntrusionPresent": 10,
                "InterruptAndRerunDeterministic": 20}[self.value]


CASE_DECISIONS = {
    "1i": Decision.ABSENT,
    "1ii": Decision.ABSENT,
    "2i": Decision.PRESENT,
    "2ii": Decision.ABSENT,
    "2iii_present": Decision.PRESENT,
    "2iii_rerun": Decision.RERUN,
}


@dataclass(frozen=True)
class ITrend:
    label: ILabel
    tail_mean_deviation: float

    def describe(self) -> str:
        return f"I-trend {self.label.value}: mean |I_k - 1/2| over tail = {self.tail_mean_deviation:.6g}"


@dataclass(frozen=True)
class BTrend:
    label: BLabel
    ratio: float
    slope: float

    def describe(self) -> str:
        return (f"B-trend {self.label.value}: late/mid window mean ratio = {self.ratio:.6g}, "
                f"slope on sqrt(n) = {self.slope:.6g}")


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    fired_case: str
    rationale: str
    i_dev: Optional[float] = None
    b_ratio: Optional[float] = None
    endpoint_differs: Optional[bool] = None

    def __post_init__(self):
        if CASE_DECISIONS.get(self.fired_case) is not self.decision:
            raise ValueError(f"case {self.fired_case} does not yield {self.decision}")

    @property
    def exit_code(self) -> int:
        return self.decision.exit_code

    def record(self) -> str:
        """Single-line machine-readable form."""
        fmt = lambda v: "n/a" if v is None else f"{v:.12g}"  # noqa: E731
        endpoint = "n/a" if self.endpoint_differs is None else str(self.endpoint_differs).lower()
        return (f"decision={self.decision.value} case={self.fired_case} "
                f"i_dev={fmt(self.i_dev)} b_ratio={fmt(self.b_ratio)} endpoint={endpoint}")

    def render(self) -> str:
        return self.record() + "\n" + self.rationale + "\n"


def parse_verdict_record(line: str) -> dict[str, str]:
    return dict(tok.split("=", 1) for tok in line.split())


def _tail_size(count: int, p: TrendParams) -> int:
    return max(p.min_tail_points, math.ceil(p.tail_fraction * count))


def assess_I_trend(traj: Trajectory, p: TrendParams = TrendParams()) -> ITrend:
    """Classify how close ``I_n`` stays to 1/2 over the tail of the trajectory.

    Undefined points are skipped.  The tail holds the last
    ``max(min_tail_points, ceil(tail_fraction * N))`` defined points.
    """
    values = [pt.i for pt in traj.points if pt.i is not None]
    if len(values) < p.min_tail_points:
        raise InsufficientData(
            f"{len(values)} defined I_n points, need at least {p.min_tail_points}")
    tail = np.asarray(values[-_tail_size(len(values), p):])
    d = float(np.mean(np.abs(tail - 0.5)))
    if d <= p.decisive_band:
        label = ILabel.TO_HALF_DECISIVE
    elif d <= p.half_band:
        label = ILabel.TO_HALF_VAGUE
    elif d >= 2 * p.half_band:
        label = ILabel.AWAY_DECISIVE
    else:
        label = ILabel.AWAY_VAGUE
    return ITrend(label, d)


def b_windows(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays of the last quarter and of the quarter ending at the midpoint."""
    m = len(traj)
    q = max(1, m // 4)
    half = m // 2
    return np.arange(m - q, m), np.arange(half - q, half)


def assess_B_trend(traj: Trajectory, p: TrendParams = TrendParams()) -> BTrend:
    """Decide whether ``B_n`` grows like ``sqrt(n)`` or stays bounded.

    The primary signal is the ratio of ``B`` averaged over the last quarter
    to ``B`` averaged over the quarter ending at ``N/2``; the least-squares
    slope of ``B_k`` on ``sqrt(k)`` over the tail guards the sign.
    """
    if len(traj) < 2 * p.min_tail_points:
        raise InsufficientData(
            f"{len(traj)} trajectory points, need at least {2 * p.min_tail_points}")
    B = traj.B
    n = traj.n.astype(float)
    late, mid = b_windows(traj)
    mid_mean = float(np.mean(B[mid]))
    late_mean = float(np.mean(B[late]))
    ratio = late_mean / mid_mean if mid_mean > 0 else (math.inf if late_mean > 0 else 1.0)
    tail = np.arange(len(traj) - _tail_size(len(traj), p), len(traj))
    r = np.sqrt(n[tail])
    rc = r - r.mean()
    denom = float(np.dot(rc, rc))
    slope = float(np.dot(rc, B[tail] - B[tail].mean()) / denom) if denom > 0 else 0.0
    if ratio >= p.growth_ratio_hi and slope > 0:
        label = BLabel.GROWING_DECISIVE
    elif ratio <= p.growth_ratio_lo:
        label = BLabel.BOUNDED_DECISIVE
    else:
        label = BLabel.AMBIGUOUS
    return BTrend(label, ratio, slope)


def rule_of_thumb(
    it: ITrend,
    bt: BTrend,
    endpoint_differs: Optional[bool] = None,
    p: TrendParams = TrendParams(),
) -> Verdict:
    """Map the two trend assessments (and, if needed, ``h(a) != h(b)``) to a verdict.

    Raises
    ------
    EndpointInfoRequired
        ``I_n`` approaches 1/2, ``B_n`` is ambiguous and ``endpoint_differs``
        was not supplied.
    InsufficientData
        ``I_n`` is vaguely away from 1/2 but ``B_n`` is not bounded, so the
        doubtful case cannot be settled either way.
    """
    lines = [it.describe(), bt.describe()]

    def verdict(case: str, endpoint: Optional[bool] = None) -> Verdict:
        return Verdict(
            decision=CASE_DECISIONS[case], fired_case=case, rationale="\n".join(lines),
            i_dev=it.tail_mean_deviation, b_ratio=bt.ratio, endpoint_differs=endpoint,
        )

    toward_half = it.label.toward_half
    if it.label is ILabel.AWAY_DECISIVE:
        lines.append("Case 1(i): I_n decisively tends to a limit other than 1/2.")
        return verdict("1i")
    if it.label is ILabel.AWAY_VAGUE:
        if bt.label is BLabel.BOUNDED_DECISIVE:
            lines.append("Case 1(ii): I_n seems away from 1/2 and B_n is bounded.")
            return verdict("1ii")
        # unspecified branch: only fall through to Case 2 when the deviation is
        # still inside the half band
        lines.append("Case 1(ii) with unbounded B_n: escalation to Case 2 (design choice).")
        if it.tail_mean_deviation > p.half_band:
            raise InsufficientData(
                "I_n vaguely away from 1/2 while B_n is not bounded; collect more data\n"
                + "\n".join(lines))
        toward_half = True
    assert toward_half
    if bt.label is BLabel.GROWING_DECISIVE:
        lines.append("Case 2(i): I_n approaches 1/2 and B_n decisively grows.")
        return verdict("2i")
    if bt.label is BLabel.BOUNDED_DECISIVE:
        lines.append("Case 2(ii): I_n approaches 1/2 but B_n is bounded.")
        return verdict("2ii")
    if endpoint_differs is None:
        raise EndpointInfoRequired(
            "I_n approaches 1/2 and the B_n trend is ambiguous; h(a) and h(b) are needed\n"
            + "\n".join(lines))
    if endpoint_differs:
        lines.append("Case 2(iii): B_n ambiguous, h(a) != h(b), so the limit 1/2 means intrusion.")
        return verdict("2iii_present", True)
    lines.append("Case 2(iii): B_n ambiguous and h(a) == h(b); rerun with deterministic inputs.")
    return verdict("2iii_rerun", False)


def detect(
    traj: Trajectory,
    endpoint_differs: Optional[bool] = None,
    p: TrendParams = TrendParams(),
) -> Verdict:
    """Assess both trends of ``traj`` and apply :func:`rule_of_thumb`."""
    return rule_of_thumb(assess_I_trend(traj, p), assess_B_trend(traj, p), endpoint_differs, p)
