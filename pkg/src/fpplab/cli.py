"""Command-line entry point.

Exit codes: 0 success or verdict consistent, 2 verdict violated,
3 verdict inconclusive, 1 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .experiments import REGISTRY, ConfigError, load_config, run_experiment, write_report
from .geodesics import geodesic
from .lattice import point
from .percolation import (BoxParams, PercConfig, b1_violation, box_geometry, good_barrier, default_barrier_threshold,
                          pilot_delta)
from .weights import DistributionSpec, Environment

EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
VERDICT_CODES = {"consistent": EXIT_OK, "violated": EXIT_VIOLATED, "inconclusive": EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which is reserved for violations
        raise UsageError(f"{self.prog}: {message}")


def _point(text: str) -> tuple:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not re.fullmatch(r"\s*-?\d+(\s*,\s*-?\d+)+\s*", s):
        raise argparse.ArgumentTypeError(f"expected an integer point like 3,4 or (3,4), got {text!r}")
    return point(int(c) for c in s.split(","))


def _dist(text: str) -> DistributionSpec:
    try:
        return DistributionSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fpplab", description="First-passage percolation experiments and inspection tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a named experiment and write its report")
    r.add_argument("experiment", choices=sorted(REGISTRY))
    r.add_argument("--config", help="configuration file (defaults are used when omitted)")
    r.add_argument("--seed", type=_nonneg, help="override master_seed")
    r.add_argument("--replicas", type=_positive, help="override replicas")
    r.add_argument("--out", help="output directory (default: $FPP_LAB_OUT or ./fpp-out)")
    r.add_argument("--workers", type=_positive, default=1, help="worker processes; never changes results")

    g = sub.add_parser("geodesic", help="passage time and selected geodesic between two sites")
    g.add_argument("--from", dest="src", type=_point, required=True)
    g.add_argument("--to", dest="dst", type=_point, required=True)
    g.add_argument("--dist", type=_dist, default=DistributionSpec.exponential(1.0))
    g.add_argument("--seed", type=_nonneg, default=0)
    g.add_argument("--padding", type=float, default=1.0)

    b = sub.add_parser("inspect-box", help="geometry of a thin box, and optionally its blackness in one environment")
    b.add_argument("--l", type=_point, required=True, help="cube label")
    b.add_argument("--m", type=_positive, required=True, help="box scale")
    b.add_argument("--j", type=int, required=True, help="signed axis, ±1..±d")
    b.add_argument("--m1", type=_positive, help="inner scale (default m // 8)")
    b.add_argument("--rho", type=_positive, default=2)
    b.add_argument("--seed", type=_nonneg, help="check the black-box conditions in this environment")
    b.add_argument("--dist", type=_dist, default=DistributionSpec.exponential(1.0))
    b.add_argument("--open-prob", type=float, help="open-edge probability defining the barrier threshold")
    b.add_argument("--delta", type=float, help="cheap-crossing margin (default: pilot estimate)")
    b.add_argument("--strict", action="store_true", help="use the strict shell-diameter limit")

    sub.add_parser("list-experiments", help="list the named experiments")

    v = sub.add_parser("validate-config", help="parse and validate a configuration file")
    v.add_argument("file")
    return p


def _cmd_run(a, out) -> int:
    cfg = load_config(a.config, REGISTRY) if a.config else REGISTRY[a.experiment].default_config()
    if cfg.name != a.experiment:
        raise ConfigError(f"config names experiment {cfg.name!r}, not {a.experiment!r}")
    if a.seed is not None:
        cfg = cfg.replace(master_seed=a.seed)
    if a.replicas is not None:
        cfg = cfg.replace(replicas=a.replicas)
    rep = run_experiment(cfg, a.workers)
    target = a.out or os.environ.get("FPP_LAB_OUT") or "fpp-out"
    write_report(rep, target)
    print(rep.summary(), file=out)
    print(f"  artifacts: {os.path.join(target, rep.name)}", file=out)
    return VERDICT_CODES[rep.verdict]


def _cmd_geodesic(a, out) -> int:
    if len(a.src) != len(a.dst) or len(a.src) < 2:
        raise UsageError("--from and --to must be points of the same dimension d >= 2")
    res = geodesic(Environment(a.seed, a.dist, len(a.src)), a.src, a.dst, a.padding)
    doc = {"from": list(a.src), "to": list(a.dst), "dist": str(a.dist), "seed": a.seed,
           "T": res.T, "edges": len(res.geodesic), "vertices": [list(v) for v in res.geodesic.vertices],
           "boundary_touched": res.boundary_touched, "attempts": res.attempts}
    print(json.dumps(doc), file=out)
    return EXIT_OK


def _cmd_inspect(a, out) -> int:
    m1 = a.m1 if a.m1 is not None else max(1, a.m // 8)
    params = BoxParams(a.l, a.j, a.m, m1)
    geom = box_geometry(params, a.rho)
    doc = {"geometry": geom.summary()}
    if a.seed is not None:
        d = params.d
        env = Environment(a.seed, a.dist, d)
        mbar = float(a.dist.quantile(a.open_prob)) if a.open_prob is not None else default_barrier_threshold(a.dist, d)
        delta = a.delta if a.delta is not None else pilot_delta(a.dist, d)
        cfg = PercConfig(d, a.rho, delta, mbar, strict=a.strict)
        bad = b1_violation(env, params, delta, cfg.pair_budget)
        doc["cheap_crossing_free"] = bad is None
        doc["delta"] = delta
        doc["barrier_threshold"] = mbar
        if geom.degenerate:
            doc["good_barrier"] = None
        else:
            res = good_barrier(env, params, cfg, geom)
            doc["good_barrier"] = res.ok
            doc["barrier_size"] = len(res.G)
            if not res.ok:
                doc["barrier_failure"] = res.reason
        doc["black"] = bool(doc["cheap_crossing_free"] and doc["good_barrier"])
    print(json.dumps(doc, indent=2, default=str), file=out)
    return EXIT_OK


def _cmd_list(out) -> int:
    for name, spec in REGISTRY.items():
        print(f"{name:<18} {spec.summary}", file=out)
    return EXIT_OK


def _cmd_validate(a, out) -> int:
    cfg = load_config(a.file, REGISTRY)
    print(f"ok: {cfg.name} (config {cfg.hash()[:12]})", file=out)
    return EXIT_OK


def execute(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        if a.command == "run":
            return _cmd_run(a, out)
        if a.command == "geodesic":
            return _cmd_geodesic(a, out)
        if a.command == "inspect-box":
            return _cmd_inspect(a, out)
        if a.command == "list-experiments":
            return _cmd_list(out)
        return _cmd_validate(a, out)
    except (UsageError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE


def main() -> None:
    sys.exit(execute())


if __name__ == "__main__":
    main()
