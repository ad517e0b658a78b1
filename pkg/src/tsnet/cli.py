"""Command-line entry point: ``tsnet generate|check|discrepancy|witness|report``.

Exit codes: 0 when every assertion of the run passed, 1 when one failed,
2 for invalid configuration or refused input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from tsnet import _kernels
from tsnet.badic import DigitVector, Point, PreconditionError, digits_needed
from tsnet.discrepancy import DEFAULT_BUDGET, Box, BudgetExceeded, local_discrepancy, star_discrepancy_exact
from tsnet.generators import GeneratorSystem, PointSet, build_niederreiter
from tsnet.gfpoly import PrimeFieldPoly, is_prime, parse_poly, split_poly_list
from tsnet.io import FORMATS, PointFileError, emit_points, load_points
from tsnet.report import dumps, rational
from tsnet.verify import (
    default_jobs,
    is_admissible_net,
    is_admissible_sequence_prefix,
    is_net,
    is_sequence_prefix,
)
from tsnet.witness import (
    ConstructionError,
    Theorem2Witness,
    WitnessParamError,
    theorem3_params,
    verify_theorem1,
)

PROPERTIES = ("net", "sequence", "admissible-net", "admissible-seq")


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    subcommand: str
    base: int = 2
    polys: list[PrimeFieldPoly] = field(default_factory=list)
    m: int | None = None
    d: int | None = None
    t: int | None = None
    u: int = 0
    e: list[int] | None = None
    Q: str | None = None
    fmt: str = "digits"
    output: str | None = None
    jobs: int = 1
    budget: int = DEFAULT_BUDGET
    extra: dict[str, Any] = field(default_factory=dict)

    def echo(self) -> dict:
        out = {"subcommand": self.subcommand, "base": self.base,
               "polys": [{"human": p.human(), "coeffs": list(p.coeffs)} for p in self.polys],
               "m": self.m, "d": self.d, "t": self.t, "u": self.u, "e": self.e, "Q": self.Q,
               "budget": self.budget}
        out.update(self.extra)
        return out


@dataclass
class Report:
    config: dict
    result: Any
    passed: bool
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"config": self.config, "result": self.result, "passed": self.passed,
                "timings": self.timings}


def _polys(text: str | None, base: int) -> list[PrimeFieldPoly]:
    if not text:
        return []
    try:
        return [parse_poly(t, base) for t in split_poly_list(text)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config(args: argparse.Namespace) -> ExperimentConfig:
    base = args.base
    if not is_prime(base):
        raise UsageError(f"--base must be prime, got {base}")
    if getattr(args, "m", None) is not None and args.m < 1:
        raise UsageError("--m must be >= 1")
    if args.budget <= 0:
        raise UsageError("--budget must be positive")
    e = None
    if getattr(args, "e", None):
        e = [int(x) for x in args.e.split(",")]
    return ExperimentConfig(
        subcommand=args.command, base=base, polys=_polys(getattr(args, "polys", None), base),
        m=getattr(args, "m", None), d=getattr(args, "d", None), t=getattr(args, "t", None),
        u=getattr(args, "u", 0) or 0, e=e, Q=getattr(args, "Q", None),
        fmt=getattr(args, "format", "digits"), output=args.output, jobs=args.jobs,
        budget=args.budget)


def _system(cfg: ExperimentConfig, precision: int) -> GeneratorSystem:
    if not cfg.polys:
        raise UsageError("--polys is required unless --input is given")
    return build_niederreiter(cfg.base, cfg.polys, precision)


def _shift_point(text: str, ps: PointSet) -> Point:
    coords = tuple(DigitVector.parse(c) for c in text.split(","))
    w = Point(coords)
    if w.precision < ps.m:
        w = Point(tuple(c.padded(ps.m) for c in w))
    if w.base != ps.base or w.precision != ps.m or w.dim != ps.dim:
        raise UsageError("--shift must have one base-b coordinate per dimension with at most m digits")
    return w


def cmd_generate(cfg: ExperimentConfig, args) -> tuple[Any, bool]:
    if cfg.m is None:
        raise UsageError("--m is required")
    sysm = _system(cfg, cfg.m)
    count = args.count if args.count is not None else cfg.base**cfg.m
    ps = sysm.generate(0, count)
    if args.shift:
        ps = ps.shift(_shift_point(args.shift, ps))
    text = emit_points(ps, cfg.fmt, cfg.output)
    if cfg.output is None:
        sys.stdout.write(text)
    return {"points": len(ps), "format": cfg.fmt, "output": cfg.output,
            "e": list(sysm.e), "t": sysm.t}, True


def _check_source(cfg: ExperimentConfig, args, precision: int, count: int) -> PointSet:
    if args.input:
        return load_points(args.input)
    return _system(cfg, precision).generate(0, count)


def cmd_check(cfg: ExperimentConfig, args) -> tuple[Any, bool]:
    prop = args.property
    b = cfg.base
    e = cfg.e
    if e is None:
        e = [p.degree for p in cfg.polys] if cfg.polys else None
    if prop in ("net", "sequence") and e is None:
        raise UsageError("--e is required for net checks on loaded points")
    if prop == "net":
        if cfg.m is None:
            raise UsageError("--m is required")
        ps = _check_source(cfg, args, cfg.m, b**cfg.m)
        res = is_net(PointSet(ps.base, ps.m, ps.coords[: b**cfg.m]), cfg.u, e, cfg.m)
    elif prop == "sequence":
        if cfg.m is None:
            raise UsageError("--m is required")
        kmax = args.kmax
        precision = cfg.m + digits_needed(kmax + 1, b) if kmax > 0 else cfg.m
        ps = _check_source(cfg, args, precision, (kmax + 1) * b**cfg.m)
        res = is_sequence_prefix(ps, cfg.u, e, cfg.m, kmax)
    elif prop == "admissible-net":
        if cfg.d is None or cfg.m is None:
            raise UsageError("--d and --m are required")
        ps = _check_source(cfg, args, cfg.m, b**cfg.m)
        res = is_admissible_net(PointSet(ps.base, ps.m, ps.coords[: b**cfg.m]), cfg.d, cfg.m, jobs=cfg.jobs)
    else:
        if cfg.d is None or cfg.m is None:
            raise UsageError("--d and --m are required")
        N = args.N or b**cfg.m
        ps = _check_source(cfg, args, cfg.m, N)
        res = is_admissible_sequence_prefix(ps, cfg.d, N, jobs=cfg.jobs)
    return {"property": prop, **res.to_dict()}, bool(res)


def cmd_discrepancy(cfg: ExperimentConfig, args) -> tuple[Any, bool]:
    if args.input:
        ps = load_points(args.input)
    else:
        if cfg.m is None:
            raise UsageError("--input or (--polys and --m) is required")
        ps = _system(cfg, cfg.m).generate()
    if args.mode == "box":
        if not args.box:
            raise UsageError("--box is required in box mode")
        J = Box.parse(args.box, ps.base)
        delta = local_discrepancy(ps, J)
        value = abs(delta) / len(ps)
        return {"mode": "box", "value_num": str(value.numerator), "value_den": str(value.denominator),
                "delta": rational(delta), "witness_box": J.to_dict()}, True
    res = star_discrepancy_exact(ps, budget=cfg.budget)
    return {"mode": "exact", "value_num": str(res.value.numerator),
            "value_den": str(res.value.denominator), "witness_box": res.to_dict()["witness_box"]}, True


def _witness_source(cfg: ExperimentConfig, args) -> tuple[PointSet, int, int]:
    if cfg.m is None:
        raise UsageError("--m is required")
    if args.input:
        ps = load_points(args.input)
    else:
        ps = _system(cfg, cfg.m).generate()
    d, t = cfg.d, cfg.t
    if d is None or t is None:
        if not cfg.polys:
            raise UsageError("--d and --t are required without --polys")
        d0, t0 = theorem3_params(cfg.polys)
        d = d0 if d is None else d
        t = t0 if t is None else t
    cfg.d, cfg.t = d, t
    return ps, d, t


def cmd_witness(cfg: ExperimentConfig, args) -> tuple[Any, bool]:
    ps, d, t = _witness_source(cfg, args)
    if args.theorem == 1:
        rep = verify_theorem1(ps, d, t, cfg.m)
        return rep.to_dict(), rep.passed
    w = Theorem2Witness(ps, d, t, cfg.m)
    q = cfg.Q or "all"
    if q == "all":
        scan = w.scan(jobs=cfg.jobs)
        return scan.to_dict(per_q=not args.summary), scan.passed
    try:
        Q = int(q)
    except ValueError:
        raise UsageError(f"--Q must be an integer or 'all', got {q!r}") from None
    if not 0 <= Q < cfg.base**cfg.m:
        raise UsageError(f"--Q must lie in [0, {cfg.base}**{cfg.m})")
    rep = w.for_Q(Q)
    return rep.to_dict(), rep.passed


DEFAULT_BATTERY = [
    ["check", "--property", "net", "--base", "2", "--polys", "x,x+1", "--m", "8"],
    ["check", "--property", "sequence", "--base", "2", "--polys", "x,x+1", "--m", "6", "--kmax", "3"],
    ["check", "--property", "admissible-seq", "--base", "2", "--polys", "x,x+1", "--m", "10", "--d", "2"],
    ["witness", "--theorem", "1", "--base", "2", "--polys", "x,x+1", "--m", "18", "--d", "2", "--t", "0"],
    ["witness", "--theorem", "2", "--base", "2", "--polys", "x", "--m", "12", "--d", "1", "--t", "0",
     "--Q", "all", "--summary"],
]


def cmd_report(cfg: ExperimentConfig, args) -> tuple[Any, bool]:
    if args.config:
        runs = json.loads(Path(args.config).read_text())
        if not isinstance(runs, list) or not all(isinstance(r, list) for r in runs):
            raise UsageError("report config must be a JSON list of argument lists")
    else:
        runs = DEFAULT_BATTERY
    parser = build_parser()
    items = []
    for argv in runs:
        if argv and argv[0] == "report":
            raise UsageError("report runs cannot nest")
        sub = parser.parse_args([str(a) for a in argv] + ["--jobs", str(cfg.jobs)])
        rep = run(sub)
        items.append({"argv": [str(a) for a in argv], **rep.to_dict()})
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["run", "subcommand", "passed", "seconds"])
            for i, it in enumerate(items):
                w.writerow([i, it["config"]["subcommand"], int(it["passed"]), it["timings"]["wall_seconds"]])
    return {"runs": items}, all(it["passed"] for it in items)


COMMANDS = {"generate": cmd_generate, "check": cmd_check, "discrepancy": cmd_discrepancy,
            "witness": cmd_witness, "report": cmd_report}


def run(args: argparse.Namespace) -> Report:
    """Execute one parsed command; raises ``UsageError`` on invalid configuration."""
    cfg = _config(args)
    t0 = time.perf_counter()
    result, passed = COMMANDS[args.command](cfg, args)
    elapsed = round(time.perf_counter() - t0, 6)
    return Report(cfg.echo(), result, bool(passed),
                  {"wall_seconds": elapsed, "backend": _kernels.BACKEND})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tsnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, polys=True):
        sp.add_argument("--base", type=int, default=2)
        if polys:
            sp.add_argument("--polys", help="comma-separated, e.g. 'x,x+1' or '[1,1],[1,1,1]'")
        sp.add_argument("--output", help="write the report (or points) here instead of stdout")
        sp.add_argument("--jobs", type=int, default=default_jobs(),
                        help="worker threads (default from TSNET_JOBS)")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    g = sub.add_parser("generate", help="emit points of a Niederreiter sequence")
    common(g)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--count", type=int)
    g.add_argument("--shift", help="digital shift, e.g. '2:0101,2:1100'")
    g.add_argument("--format", choices=FORMATS, default="digits")

    c = sub.add_parser("check", help="net / sequence / admissibility checks")
    common(c)
    c.add_argument("--property", choices=PROPERTIES, required=True)
    c.add_argument("--input")
    c.add_argument("--m", type=int)
    c.add_argument("--u", type=int, default=0)
    c.add_argument("--e")
    c.add_argument("--d", type=int)
    c.add_argument("--kmax", type=int, default=0)
    c.add_argument("--N", type=int)

    dsc = sub.add_parser("discrepancy", help="exact star or local discrepancy")
    common(dsc)
    dsc.add_argument("--input")
    dsc.add_argument("--m", type=int)
    dsc.add_argument("--mode", choices=("exact", "box"), default="exact")
    dsc.add_argument("--box", help="box bounds, e.g. '2:11,1'")

    w = sub.add_parser("witness", help="build and evaluate a lower-bound witness")
    common(w)
    w.add_argument("--theorem", type=int, choices=(1, 2), required=True)
    w.add_argument("--input")
    w.add_argument("--m", type=int)
    w.add_argument("--d", type=int)
    w.add_argument("--t", type=int)
    w.add_argument("--Q", help="integer or 'all' (theorem 2)")
    w.add_argument("--summary", action="store_true", help="omit per-Q rows")

    r = sub.add_parser("report", help="run a battery of experiments")
    common(r, polys=False)
    r.add_argument("--config", help="JSON list of argument lists; default battery otherwise")
    r.add_argument("--csv", help="plot-ready summary CSV")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = run(args)
    except (UsageError, PreconditionError, WitnessParamError, PointFileError, BudgetExceeded,
            ValueError) as exc:
        print(f"tsnet: error: {exc}", file=sys.stderr)
        return 2
    except ConstructionError as exc:
        print(f"tsnet: internal construction failure: {exc}", file=sys.stderr)
        return 1
    text = dumps(rep.to_dict())
    if args.command == "generate":
        # points went to stdout or --output; the report goes to stderr
        print(text, file=sys.stderr)
    elif args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
