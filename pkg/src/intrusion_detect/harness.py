"""Scenario presets, replication studies and on-disk artifacts.

Random-input scenarios use nested prefixes of one arrival stream.  Grid
scenarios cannot be nested (the grid for ``n`` points is not a prefix of
the grid for ``n + 1``), so each ``n`` gets its own grid while the
intrusions are the first ``n`` draws of a single stream.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core_stats import (
    PairedSample,
    StatTriple,
    Trajectory,
    _stats_or_undefined,
    concomitant_sort,
    prefix_trajectory,
    trajectory_to_csv,
)
from .detector import TrendParams, Verdict, detect
from .errors import BadParameters, DetectionError
from .stochastic import (
    InputModel,
    IntrusionModel,
    generate_outputs,
    grid_inputs,
    sample_inputs,
    sample_intrusions,
)
from .transfer import TransferFunction, endpoint_equal, get_transfer


@dataclass(frozen=True)
class Scenario:
    """One experiment; each entry of ``inputs`` is a panel run independently."""

    name: str
    inputs: tuple[InputModel, ...]
    transfer: str
    a: float
    b: float
    intrusion: IntrusionModel
    n_max: int = 300
    seed: int = 0
    replications: int = 1
    coeffs: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if not self.inputs:
            raise BadParameters("scenario needs at least one input panel")
        if self.n_max < 2:
            raise BadParameters("n_max must be at least 2")
        if self.replications < 1:
            raise BadParameters("replications must be at least 1")
        for m in self.inputs:
            if m.support != (self.a, self.b):
                raise BadParameters(
                    f"input support {m.support} does not match transfer window "
                    f"[{self.a}, {self.b}]")

    def transfer_function(self) -> TransferFunction:
        return get_transfer(self.transfer, self.a, self.b, self.coeffs)

    def to_config(self) -> str:
        return dump_config(self)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.to_config().encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# config format: flat ``key=value`` lines, ``#`` comments

def dump_config(s: Scenario) -> str:
    kinds = {m.kind for m in s.inputs}
    if len(kinds) != 1:
        raise BadParameters("all panels of a scenario must share an input kind")
    kind = kinds.pop()
    lines = [
        f"scenario.name={s.name}",
        f"scenario.n_max={s.n_max}",
        f"scenario.seed={s.seed}",
        f"scenario.replications={s.replications}",
        f"input.kind={kind}",
    ]
    if kind == "scaled_beta":
        scales = {m.scale for m in s.inputs}
        if len(scales) != 1:
            raise BadParameters("all Beta panels must share a scale")
        lines.append("input.shapes=" + ",".join(f"{m.alpha!r}:{m.beta!r}" for m in s.inputs))
        lines.append(f"input.scale={scales.pop()!r}")
    elif kind == "grid":
        lines += [f"input.a={s.inputs[0].a!r}", f"input.b={s.inputs[0].b!r}"]
    lines += [f"transfer.name={s.transfer}", f"transfer.a={s.a!r}", f"transfer.b={s.b!r}"]
    if s.coeffs is not None:
        lines.append("transfer.coeffs=" + ",".join(repr(c) for c in s.coeffs))
    if s.intrusion.kind == "custom":
        raise BadParameters("custom intrusion models cannot be serialized")
    lines.append(f"intrusion.kind={s.intrusion.kind}")
    if s.intrusion.kind == "gaussian":
        lines.append(f"intrusion.sigma2={s.intrusion.sigma2!r}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> Scenario:
    kv: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadParameters(f"malformed config line {raw!r}")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    try:
        kind = kv["input.kind"]
        if kind == "scaled_beta":
            scale = float(kv.get("input.scale", "1"))
            inputs = tuple(
                InputModel.scaled_beta(float(al), float(be), scale)
                for al, be in (pair.split(":") for pair in kv["input.shapes"].split(","))
            )
        elif kind == "uniform":
            inputs = (InputModel.uniform(),)
        elif kind == "grid":
            inputs = (InputModel.grid(float(kv["input.a"]), float(kv["input.b"])),)
        else:
            raise BadParameters(f"unknown input.kind {kind!r}")
        ikind = kv.get("intrusion.kind", "degenerate")
        if ikind == "gaussian":
            intrusion = IntrusionModel.gaussian(float(kv["intrusion.sigma2"]))
        elif ikind == "degenerate":
            intrusion = IntrusionModel.degenerate()
        else:
            raise BadParameters(f"intrusion.kind {ikind!r} is not configurable")
        coeffs = kv.get("transfer.coeffs")
        return Scenario(
            name=kv["scenario.name"],
            inputs=inputs,
            transfer=kv["transfer.name"],
            a=float(kv["transfer.a"]),
            b=float(kv["transfer.b"]),
            intrusion=intrusion,
            n_max=int(kv.get("scenario.n_max", "300")),
            seed=int(kv.get("scenario.seed", "0")),
            replications=int(kv.get("scenario.replications", "1")),
            coeffs=None if coeffs is None else tuple(float(c) for c in coeffs.split(",")),
        )
    except KeyError as exc:
        raise BadParameters(f"missing config key {exc.args[0]}") from None
    except ValueError as exc:
        if isinstance(exc, DetectionError):
            raise
        raise BadParameters(f"bad config value: {exc}") from None


# ---------------------------------------------------------------------------
# presets

BETA_SHAPES = ((2.0, 3.0), (2.0, 2.0), (3.0, 2.0))
FIG_SIGMA2 = 0.01


def _beta_panels(scale: float) -> tuple[InputModel, ...]:
    return tuple(InputModel.scaled_beta(al, be, scale) for al, be in BETA_SHAPES)


def _presets() -> dict[str, Scenario]:
    noisy = IntrusionModel.gaussian(FIG_SIGMA2)
    clean = IntrusionModel.degenerate()
    wide = 1.6
    q = "quadratic"
    # seeds are arbitrary and fixed; they only make runs replayable
    return {
        "fig3": Scenario("fig3", _beta_panels(1.0), q, 0.0, 1.0, clean, seed=3),
        "fig4": Scenario("fig4", _beta_panels(1.0), q, 0.0, 1.0, noisy, seed=4),
        "fig5": Scenario("fig5", _beta_panels(wide), q, 0.0, wide, noisy, seed=5),
        "fig6": Scenario("fig6", _beta_panels(wide), q, 0.0, wide, clean, seed=6),
        "fig7_noisy": Scenario("fig7_noisy", (InputModel.grid(0.0, wide),), q, 0.0, wide,
                               noisy, seed=7),
        "fig7_clean": Scenario("fig7_clean", (InputModel.grid(0.0, wide),), q, 0.0, wide,
                               clean, seed=7),
        "fig8_rand": Scenario("fig8_rand", (InputModel.uniform(),), q, 0.0, 1.0, noisy, seed=8),
        "fig8_grid": Scenario("fig8_grid", (InputModel.grid(0.0, 1.0),), q, 0.0, 1.0, noisy,
                              seed=8),
    }


PRESETS = _presets()


def list_presets() -> dict[str, Scenario]:
    return dict(PRESETS)


def get_preset(name: str, **overrides) -> Scenario:
    if name not in PRESETS:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(PRESETS)}")
    s = PRESETS[name]
    return replace(s, **overrides) if overrides else s


# ---------------------------------------------------------------------------
# running

@dataclass
class PanelRun:
    scenario: str
    panel: InputModel
    replication: int
    sample: PairedSample
    trajectory: Trajectory
    verdict: Optional[Verdict]
    error: Optional[str] = None

    @property
    def stem(self) -> str:
        return f"{self.scenario}_{self.panel.label}_rep{self.replication}"


def grid_trajectory(h: TransferFunction, model: InputModel, eps: np.ndarray) -> Trajectory:
    """Trajectory where the ``n``-th point uses a fresh ``n``-point grid."""
    points = []
    for n in range(2, eps.size + 1):
        x = grid_inputs(model.a, model.b, n)
        y = np.array([h(v) for v in x]) + eps[:n]
        points.append(_stats_or_undefined(concomitant_sort(PairedSample(x, y))))
    return Trajectory(points)


def simulate_panel(
    s: Scenario, panel: int, replication: int = 0, n_max: Optional[int] = None
) -> tuple[PairedSample, Trajectory]:
    """Sample and trajectory for one panel of one replication."""
    n_max = s.n_max if n_max is None else n_max
    h = s.transfer_function()
    model = s.inputs[panel]
    key = (replication, panel)
    if model.is_deterministic:
        eps = sample_intrusions(s.intrusion, n_max, s.seed, key)
        traj = grid_trajectory(h, model, eps)
        x = grid_inputs(model.a, model.b, n_max)
        sample = PairedSample(x, np.array([h(v) for v in x]) + eps)
        return sample, traj
    x = sample_inputs(model, n_max, s.seed, key)
    sample = generate_outputs(h, x, s.intrusion, s.seed, key)
    return sample, prefix_trajectory(sample)


def run_panel(s: Scenario, panel: int, replication: int = 0,
              params: TrendParams = TrendParams()) -> PanelRun:
    sample, traj = simulate_panel(s, panel, replication)
    differs = not endpoint_equal(s.transfer_function())
    try:
        verdict, error = detect(traj, differs, params), None
    except DetectionError as exc:
        verdict, error = None, type(exc).__name__
    return PanelRun(s.name, s.inputs[panel], replication, sample, traj, verdict, error)


def replay_header(s: Scenario, replication: int, params: TrendParams) -> list[str]:
    return [
        f"scenario={s.name} seed={s.seed} replication={replication} scenario_hash={s.digest}",
        f"params: {params.describe()}",
    ]


def sample_to_csv(sample: PairedSample, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments] + ["x,y"]
    lines += [f"{x!r},{y!r}" for x, y in zip(sample.x.tolist(), sample.y.tolist())]
    return "\n".join(lines) + "\n"


def write_panel(run: PanelRun, s: Scenario, out_dir: Path,
                params: TrendParams = TrendParams()) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = replay_header(s, run.replication, params)
    paths = {
        "trajectory": out_dir / f"{run.stem}.csv",
        "verdict": out_dir / f"{run.stem}_verdict.txt",
        "sample": out_dir / f"{run.stem}_xy.csv",
    }
    paths["trajectory"].write_text(trajectory_to_csv(run.trajectory, header))
    paths["sample"].write_text(sample_to_csv(run.sample, header))
    body = run.verdict.render() if run.verdict else f"decision=error error={run.error}\n"
    paths["verdict"].write_text("# " + "\n# ".join(header) + "\n" + body)
    return paths


def run_scenario(s: Scenario, out_dir: Optional[Path] = None,
                 params: TrendParams = TrendParams(), replication: int = 0) -> list[PanelRun]:
    """Run every panel once; write trajectory, sample and verdict files if ``out_dir``."""
    runs = [run_panel(s, k, replication, params) for k in range(len(s.inputs))]
    if out_dir is not None:
        for run in runs:
            write_panel(run, s, out_dir, params)
    return runs


@dataclass
class ReplicationReport:
    scenario: str
    panel: InputModel
    finals: list[StatTriple] = field(default_factory=list)
    verdicts: list[Optional[Verdict]] = field(default_factory=list)
    frequencies: dict[str, int] = field(default_factory=dict)
    growth_constants: list[float] = field(default_factory=list)
    expected_growth_constant: Optional[float] = None

    @property
    def replications(self) -> int:
        return len(self.finals)

    @property
    def growth_constant(self) -> Optional[float]:
        return float(np.mean(self.growth_constants)) if self.growth_constants else None

    @property
    def mean_final_I(self) -> float:
        vals = [t.i for t in self.finals if t.i is not None]
        return float(np.mean(vals)) if vals else math.nan

    def count(self, decision: str) -> int:
        return self.frequencies.get(decision, 0)

    def summary(self) -> str:
        lines = [
            f"scenario={self.scenario} panel={self.panel.label} replications={self.replications}",
            f"mean_final_I={self.mean_final_I:.12g}",
        ]
        for k in sorted(self.frequencies):
            lines.append(f"verdict[{k}]={self.frequencies[k]}")
        if self.growth_constant is not None:
            lines.append(f"growth_constant={self.growth_constant:.12g} "
                         f"expected={self.expected_growth_constant:.12g}")
        return "\n".join(lines)


def fit_growth_constant(traj: Trajectory) -> float:
    """Least-squares ``c`` in ``B_n ~ c sqrt(n)`` over ``n`` in ``[N/2, N]``."""
    n = traj.n.astype(float)
    B = traj.B
    keep = n >= n[-1] / 2
    return float(np.sum(B[keep] * np.sqrt(n[keep])) / np.sum(n[keep]))


def _one_replication(args) -> list[PanelRun]:
    s, r, params = args
    return [run_panel(s, k, r, params) for k in range(len(s.inputs))]


def run_replications(s: Scenario, k: Optional[int] = None,
                     params: TrendParams = TrendParams(), workers: int = 1,
                     out_dir: Optional[Path] = None) -> list[ReplicationReport]:
    """Run ``k`` replications (derived seeds) and aggregate one report per panel."""
    k = s.replications if k is None else k
    if k < 1:
        raise BadParameters("need at least one replication")
    jobs = [(s, r, params) for r in range(k)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_replication, jobs))
    else:
        results = [_one_replication(j) for j in jobs]
    expected = s.intrusion.mean_abs_difference() if s.intrusion.kind == "gaussian" else None
    reports = []
    for panel, model in enumerate(s.inputs):
        rep = ReplicationReport(s.name, model, expected_growth_constant=expected)
        counts: Counter = Counter()
        for runs in results:
            run = runs[panel]
            rep.finals.append(run.trajectory.final)
            rep.verdicts.append(run.verdict)
            counts[run.verdict.decision.value if run.verdict else f"error:{run.error}"] += 1
            if expected is not None:
                rep.growth_constants.append(fit_growth_constant(run.trajectory))
            if out_dir is not None:
                write_panel(run, s, out_dir, params)
        rep.frequencies = dict(counts)
        reports.append(rep)
    if out_dir is not None:
        text = "\n\n".join(r.summary() for r in reports) + "\n"
        header = f"# seed={s.seed} scenario_hash={s.digest}\n"
        (Path(out_dir) / f"{s.name}_report.txt").write_text(header + text)
    return reports
