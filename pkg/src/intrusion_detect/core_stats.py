"""Concomitant-difference statistics.

For pairs ``(x_i, y_i)`` sorted by ``x`` the concomitants ``y_(1), ..., y_(n)``
are the ``y`` values carried along by the sort.  From their successive
differences ``d_k = y_(k) - y_(k-1)`` we form

    A_n = sum(max(d_k, 0)) / sqrt(n)
    B_n = sum(|d_k|) / sqrt(n)
    I_n = A_n / B_n

Two routes to a trajectory over growing prefixes are provided: batch
recomputation (:func:`prefix_trajectory`) and an incremental sorted-insertion
state (:class:`IncrementalState`).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from sortedcontainers import SortedDict

from .errors import DomainViolation, DuplicateInput, NoVariation, TooShort

# above this many terms sums switch to compensated accumulation
COMPENSATED_THRESHOLD = 10_000


@dataclass(frozen=True)
class PairedSample:
    """Arrival-ordered ``(x, y)`` observations."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if x.shape != y.shape:
            raise ValueError(f"x and y lengths differ: {x.size} != {y.size}")
        if x.size < 1:
            raise TooShort("a paired sample needs at least one observation")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "PairedSample":
        pairs = list(pairs)
        if not pairs:
            raise TooShort("a paired sample needs at least one observation")
        xs, ys = zip(*pairs)
        return cls(np.array(xs, dtype=float), np.array(ys, dtype=float))

    def __len__(self) -> int:
        return self.x.size

    def prefix(self, n: int) -> "PairedSample":
        return PairedSample(self.x[:n], self.y[:n])


@dataclass(frozen=True)
class ConcomitantSeries:
    """``y`` values reordered by ascending ``x``."""

    y_ordered: np.ndarray
    x_sorted: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.y_ordered)


@dataclass(frozen=True)
class StatTriple:
    """``A_n``, ``B_n`` and ``I_n`` for one sample size.

    ``i`` is ``None`` when ``b == 0``; such points are kept in trajectories
    but carry no trend information.
    """

    a: float
    b: float
    i: Optional[float]
    n: int

    @property
    def defined(self) -> bool:
        return self.i is not None


@dataclass
class Trajectory:
    points: list[StatTriple] = field(default_factory=list)

    def __post_init__(self):
        ns = [p.n for p in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("trajectory points must have strictly increasing n")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, k):
        return self.points[k]

    @property
    def n(self) -> np.ndarray:
        return np.array([p.n for p in self.points], dtype=int)

    @property
    def A(self) -> np.ndarray:
        return np.array([p.a for p in self.points])

    @property
    def B(self) -> np.ndarray:
        return np.array([p.b for p in self.points])

    @property
    def I(self) -> np.ndarray:  # noqa: E743
        """I values with NaN where undefined (for plotting only)."""
        return np.array([np.nan if p.i is None else p.i for p in self.points])

    def defined_points(self) -> list[StatTriple]:
        return [p for p in self.points if p.defined]

    @property
    def final(self) -> StatTriple:
        return self.points[-1]


def _accumulate(values: np.ndarray) -> float:
    """Left-to-right sum, compensated once the term count is large."""
    if values.size == 0:
        return 0.0
    if values.size > COMPENSATED_THRESHOLD:
        return math.fsum(values.tolist())
    return float(np.cumsum(values)[-1])


def concomitant_sort(sample: PairedSample) -> ConcomitantSeries:
    """Sort ``y`` by its paired ``x``.

    Raises
    ------
    DuplicateInput
        If two ``x`` values are equal; the concomitant order would then
        depend on an arbitrary tie-break.
    """
    order = np.argsort(sample.x, kind="stable")
    xs = sample.x[order]
    if xs.size > 1:
        ties = np.flatnonzero(xs[1:] == xs[:-1])
        if ties.size:
            raise DuplicateInput(float(xs[ties[0]]))
    return ConcomitantSeries(y_ordered=sample.y[order], x_sorted=xs)


def _triple(pos_sum: float, abs_sum: float, n: int) -> StatTriple:
    root = math.sqrt(n)
    a = pos_sum / root
    b = abs_sum / root
    i = a / b if b > 0 else None
    return StatTriple(a=a, b=b, i=i, n=n)


def _raw_sums(y: np.ndarray) -> tuple[float, float]:
    d = np.diff(y)
    return _accumulate(np.maximum(d, 0.0)), _accumulate(np.abs(d))


def compute_stats(series: ConcomitantSeries | Sequence[float]) -> StatTriple:
    """Compute ``A_n``, ``B_n`` and ``I_n`` from a concomitant series.

    Raises :class:`TooShort` for fewer than two values and
    :class:`NoVariation` when all values are equal.
    """
    y = series.y_ordered if isinstance(series, ConcomitantSeries) else series
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 2:
        raise TooShort(f"need at least 2 observations, got {n}")
    triple = _triple(*_raw_sums(y), n)
    if triple.i is None:
        raise NoVariation("all concomitant differences are zero; I_n is undefined")
    return triple


def _stats_or_undefined(series: ConcomitantSeries) -> StatTriple:
    try:
        return compute_stats(series)
    except NoVariation:
        return StatTriple(a=0.0, b=0.0, i=None, n=len(series))


def compute_B0(h, x_sorted: Sequence[float]) -> float:
    """Reasonable-order diagnostic ``sum |h(x_k) - h(x_{k-1})| / sqrt(n)``.

    ``h`` is a :class:`~intrusion_detect.transfer.TransferFunction`; the
    inputs must be strictly increasing and lie inside its domain.
    """
    x = np.asarray(x_sorted, dtype=float).reshape(-1)
    n = x.size
    if n == 0:
        raise TooShort("need at least one input value")
    if np.any(x < h.a) or np.any(x > h.b):
        bad = x[(x < h.a) | (x > h.b)][0]
        raise DomainViolation(f"x={bad!r} outside [{h.a}, {h.b}]")
    if n > 1 and np.any(np.diff(x) <= 0):
        raise ValueError("x_sorted must be strictly increasing")
    if n == 1:
        return 0.0
    hx = np.array([h(v) for v in x])
    return _accumulate(np.abs(np.diff(hx))) / math.sqrt(n)


def prefix_trajectory(sample: PairedSample) -> Trajectory:
    """Statistics of every prefix ``n = 2, ..., N`` of the arrival stream.

    Each point is an independent batch recomputation, so the result is
    bit-identical to calling :func:`concomitant_sort` and
    :func:`compute_stats` on the prefix.  Prefixes with no variation are
    kept with ``i=None``.
    """
    if len(sample) < 2:
        raise TooShort(f"need at least 2 observations, got {len(sample)}")
    # fail on ties up front rather than at the first prefix that contains them
    concomitant_sort(sample)
    points = [
        _stats_or_undefined(concomitant_sort(sample.prefix(n)))
        for n in range(2, len(sample) + 1)
    ]
    return Trajectory(points)


class IncrementalState:
    """Running ``sum (d)_+`` and ``sum |d|`` under sorted insertion.

    Inserting ``x`` between neighbours ``l`` and ``r`` removes the bridged
    difference ``y_r - y_l`` and adds ``y_x - y_l`` and ``y_r - y_x``.  The
    sums are kept with Neumaier compensation because terms are subtracted
    as well as added; counts of positive and nonzero differences make an
    all-zero sum come out as exactly 0.
    """

    def __init__(self):
        self._tree: SortedDict = SortedDict()
        self._pos = [0.0, 0.0]  # (sum, compensation)
        self._abs = [0.0, 0.0]
        self._n_pos = 0
        self._n_nonzero = 0

    @staticmethod
    def _add(acc: list, v: float) -> None:
        s, c = acc
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        acc[0], acc[1] = t, c

    def _add_diff(self, d: float, sign: int) -> None:
        if d > 0:
            self._add(self._pos, sign * d)
            self._n_pos += sign
        if d != 0:
            self._add(self._abs, sign * abs(d))
            self._n_nonzero += sign

    @property
    def n(self) -> int:
        return len(self._tree)

    @property
    def pos_sum(self) -> float:
        return self._pos[0] + self._pos[1] if self._n_pos else 0.0

    @property
    def abs_sum(self) -> float:
        return self._abs[0] + self._abs[1] if self._n_nonzero else 0.0

    def series(self) -> ConcomitantSeries:
        return ConcomitantSeries(
            y_ordered=np.fromiter(self._tree.values(), float, len(self._tree)),
            x_sorted=np.fromiter(self._tree.keys(), float, len(self._tree)),
        )

    def triple(self) -> Optional[StatTriple]:
        """Current statistics, or ``None`` while fewer than two points exist."""
        if self.n < 2:
            return None
        abs_sum = self.abs_sum
        if abs_sum <= 0:
            return StatTriple(a=0.0, b=0.0, i=None, n=self.n)
        return _triple(self.pos_sum, abs_sum, self.n)

    def insert(self, x: float, y: float) -> Optional[StatTriple]:
        x, y = float(x), float(y)
        tree = self._tree
        if x in tree:
            raise DuplicateInput(x)
        k = tree.bisect_left(x)
        left = tree.peekitem(k - 1)[1] if k > 0 else None
        right = tree.peekitem(k)[1] if k < len(tree) else None
        if left is not None and right is not None:
            self._add_diff(right - left, -1)
        if left is not None:
            self._add_diff(y - left, 1)
        if right is not None:
            self._add_diff(right - y, 1)
        tree[x] = y
        return self.triple()


def incremental_insert(
    state: IncrementalState, x: float, y: float
) -> tuple[IncrementalState, Optional[StatTriple]]:
    """Insert one pair into ``state`` (mutated in place) and return the new triple."""
    return state, state.insert(x, y)


def incremental_trajectory(sample: PairedSample) -> Trajectory:
    state = IncrementalState()
    points = []
    for x, y in zip(sample.x, sample.y):
        t = state.insert(x, y)
        if t is not None:
            points.append(t)
    return Trajectory(points)


def format_value(v: float) -> str:
    return f"{v:.12g}"


def trajectory_to_csv(traj: Trajectory, comments: Sequence[str] = ()) -> str:
    """Render ``n,A,B,I`` rows; ``I`` is blank where undefined.

    ``comments`` become leading ``# `` lines ahead of the header row.
    """
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "A", "B", "I"])
    for p in traj.points:
        writer.writerow(
            [p.n, format_value(p.a), format_value(p.b), "" if p.i is None else format_value(p.i)]
        )
    return buf.getvalue()


def trajectory_from_csv(text: str) -> Trajectory:
    rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.reader(rows)
    header = next(reader)
    if header != ["n", "A", "B", "I"]:
        raise ValueError(f"unexpected trajectory header {header!r}")
    points = []
    for n, a, b, i in reader:
        points.append(StatTriple(a=float(a), b=float(b), i=float(i) if i else None, n=int(n)))
    return Trajectory(points)
