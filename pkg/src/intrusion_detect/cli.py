"""Command-line front end.

Exit codes: 0 absent, 10 present, 20 rerun with deterministic inputs,
64 usage, 65 bad input data, 66 endpoint information required,
67 degenerate transfer function.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .core_stats import PairedSample, format_value, prefix_trajectory, trajectory_to_csv
from .detector import TrendParams, detect
from .errors import (
    BadParameters,
    DegenerateTransfer,
    DetectionError,
    DuplicateInput,
    EndpointInfoRequired,
)
from .harness import PRESETS, dump_config, get_preset, parse_config, run_replications, run_scenario
from .transfer import REGISTRY, endpoint_equal, get_transfer, limit_I

EX_USAGE = 64
EX_DATAERR = 65
EX_ENDPOINT = 66
EX_DEGENERATE = 67


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EX_USAGE)


def _add_trend_flags(p: argparse.ArgumentParser) -> None:
    d = TrendParams()
    g = p.add_argument_group("trend parameters")
    g.add_argument("--tail-fraction", type=float, default=d.tail_fraction,
                   help="share of the trajectory forming the tail window (default %(default)s)")
    g.add_argument("--half-band", type=float, default=d.half_band,
                   help="mean |I - 1/2| up to which I approaches 1/2 (default %(default)s)")
    g.add_argument("--decisive-band", type=float, default=d.decisive_band,
                   help="mean |I - 1/2| up to which the approach is decisive (default %(default)s)")
    g.add_argument("--growth-hi", type=float, default=d.growth_ratio_hi,
                   help="B window ratio at or above which B grows (default %(default)s)")
    g.add_argument("--growth-lo", type=float, default=d.growth_ratio_lo,
                   help="B window ratio at or below which B is bounded (default %(default)s)")
    g.add_argument("--min-tail-points", type=int, default=d.min_tail_points,
                   help="minimum number of tail points (default %(default)s)")


def _trend_params(args) -> TrendParams:
    try:
        return TrendParams(
            tail_fraction=args.tail_fraction,
            half_band=args.half_band,
            decisive_band=args.decisive_band,
            growth_ratio_hi=args.growth_hi,
            growth_ratio_lo=args.growth_lo,
            min_tail_points=args.min_tail_points,
        )
    except BadParameters as exc:
        raise UsageError(str(exc)) from None


def read_sample(path: str) -> PairedSample:
    """Read an ``x,y`` CSV; lines starting with ``#`` are ignored."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    reader = csv.reader(rows)
    header = [c.strip() for c in next(reader, [])]
    if header != ["x", "y"]:
        raise ValueError(f"expected header 'x,y', got {','.join(header)!r}")
    xs, ys = [], []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 2:
            raise ValueError(f"line {lineno}: expected 2 fields, got {len(row)}")
        xs.append(float(row[0]))
        ys.append(float(row[1]))
    if len(xs) < 2:
        raise ValueError(f"need at least 2 data rows, got {len(xs)}")
    return PairedSample(xs, ys)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    p = _trend_params(args)
    traj = prefix_trajectory(read_sample(args.csv))
    comments = [f"source: {args.csv}", f"params: {p.describe()}"]
    f = traj.final
    final = (f"final n={f.n} A={format_value(f.a)} B={format_value(f.b)} "
             f"I={'undefined' if f.i is None else format_value(f.i)}")
    if args.out:
        _emit(trajectory_to_csv(traj, comments), args.out)
        print(final)
    else:
        sys.stdout.write(trajectory_to_csv(traj, comments))
        print(f"# {final}")
    return 0


def _endpoint_differs(args) -> Optional[bool]:
    if args.transfer is not None:
        if args.a is None or args.b is None:
            raise UsageError("--transfer needs --a and --b")
        h = get_transfer(args.transfer, args.a, args.b, args.coeffs)
        return not endpoint_equal(h)
    if (args.ha is None) != (args.hb is None):
        raise UsageError("--ha and --hb must be given together")
    if args.ha is not None:
        tol = 1e-9 * max(1.0, abs(args.ha))
        return abs(args.ha - args.hb) > tol
    return None


def cmd_detect(args) -> int:
    p = _trend_params(args)
    differs = _endpoint_differs(args)
    traj = prefix_trajectory(read_sample(args.csv))
    verdict = detect(traj, differs, p)
    print(f"# params: {p.describe()}")
    sys.stdout.write(verdict.render())
    return verdict.exit_code


def cmd_limit(args) -> int:
    h = get_transfer(args.transfer, args.a, args.b, args.coeffs)
    value = limit_I(h)
    print(f"I(h)={value:.10f}")
    print(f"endpoints_equal={str(endpoint_equal(h)).lower()}")
    return 0


def cmd_simulate(args) -> int:
    p = _trend_params(args)
    if args.config:
        s = parse_config(Path(args.config).read_text(encoding="utf-8"))
    else:
        try:
            s = get_preset(args.scenario)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.n_max is not None:
        overrides["n_max"] = args.n_max
    if overrides:
        s = replace(s, **overrides)
    out = Path(args.out)
    k = args.replications if args.replications is not None else s.replications
    if k > 1:
        reports = run_replications(s, k, p, workers=args.workers, out_dir=out)
        for rep in reports:
            print(rep.summary())
        return 0
    for run in run_scenario(s, out, p):
        status = run.verdict.record() if run.verdict else f"decision=error error={run.error}"
        print(f"{run.stem}: {status}")
    return 0


def cmd_scenarios(args) -> int:
    for name, s in PRESETS.items():
        if args.verbose:
            print(dump_config(s))
        else:
            panels = ",".join(m.label for m in s.inputs)
            print(f"{name}\tinputs={s.inputs[0].kind}[{panels}] window=[{s.a:g},{s.b:g}] "
                  f"intrusion={s.intrusion.kind}:{s.intrusion.sigma2:g} seed={s.seed}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="intrusion-detect", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="trajectory of A_n, B_n, I_n for an x,y CSV")
    p.add_argument("csv")
    p.add_argument("--out", help="write the trajectory CSV here instead of stdout")
    _add_trend_flags(p)
    p.set_defaults(func=cmd_analyze)

    transfer_names = sorted(REGISTRY)

    p = sub.add_parser("detect", help="apply the rule of thumb to an x,y CSV")
    p.add_argument("csv")
    p.add_argument("--ha", type=float, help="h(a), with --hb")
    p.add_argument("--hb", type=float, help="h(b), with --ha")
    p.add_argument("--transfer", choices=transfer_names)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--coeffs", type=float, nargs="+", help="polynomial coefficients, ascending")
    _add_trend_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("limit", help="no-intrusion limit I(h) and the endpoint check")
    p.add_argument("--transfer", choices=transfer_names, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--coeffs", type=float, nargs="+", help="polynomial coefficients, ascending")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("simulate", help="run a preset or configured scenario")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario")
    src.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=".")
    _add_trend_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scenarios", help="list the built-in scenarios")
    p.add_argument("-v", "--verbose", action="store_true", help="print full configs")
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8", line_buffering=True)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except EndpointInfoRequired as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_ENDPOINT
    except DegenerateTransfer as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DEGENERATE
    except BadParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except DuplicateInput as exc:
        print(f"error: duplicate input x={exc.x!r}", file=sys.stderr)
        return EX_DATAERR
    except (DetectionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
