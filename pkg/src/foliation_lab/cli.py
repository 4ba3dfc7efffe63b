"""Command-line entry point: ``foliation-lab {verify,invariant,sweep,flow,sphere}``.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import suites
from .calculus import make_grid
from .conformal import TransverseGeometry
from .errors import FoliationLabError
from .flow import CONVERGED, FlowConfig, FlowTrace, run_flow
from .invariants import compute_invariant, invariance_sweep
from .report import dumps, envelope, write_csv, write_json
from .sasakian import Weights, invariant_closed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FLOW_NODES = 32
INVARIANT_TOLERANCE = 1e-8


@dataclass
class RunConfig:
    command: str
    a1: float = 2.0
    a2: float = 1.0
    nodes: Optional[int] = None
    seed: int = 42
    trials: int = 25
    dt: Optional[float] = None
    max_steps: int = 12000
    json: Optional[str] = None
    csv: Optional[str] = None
    u_coeffs: tuple[float, ...] = ()
    dim: Optional[int] = None

    @property
    def weights(self) -> Weights:
        return Weights(self.a1, self.a2)

    def resolved_nodes(self) -> int:
        if self.nodes is not None:
            return self.nodes
        return FLOW_NODES if self.command == "flow" else 128

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "a1": self.a1,
            "a2": self.a2,
            "nodes": self.resolved_nodes(),
            "seed": self.seed,
            "trials": self.trials,
            "dt": self.dt,
            "max_steps": self.max_steps,
            "u_coeffs": list(self.u_coeffs),
            "dim": self.dim,
        }


def _coeffs(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError("coefficients must be finite")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a1", type=float, default=2.0, help="first weight (default 2)")
    common.add_argument("--a2", type=float, default=1.0, help="second weight (default 1)")
    common.add_argument("--nodes", type=int, default=None, help="collocation nodes (default 128; 32 for flow)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=25)
    common.add_argument("--json", metavar="PATH", help="write the JSON report here as well as to stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="foliation-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every verification suite")
    p = sub.add_parser("invariant", parents=[common], help="compute I_{Z2} for one metric")
    p.add_argument("--u-coeffs", type=_coeffs, default=(), help="conformal factor as power-series coefficients in t")
    p.add_argument("--csv", metavar="PATH", help="export the curvature profile (t, value)")
    sub.add_parser("sweep", parents=[common], help="invariance over random conformal factors")
    p = sub.add_parser("flow", parents=[common], help="normalized transverse Yamabe flow")
    p.add_argument("--dt", type=float, default=None, help="initial step (default: half the stability limit)")
    p.add_argument("--max-steps", type=int, default=12000)
    p.add_argument("--csv", metavar="PATH", help="write the per-step trace")
    p = sub.add_parser("sphere", parents=[common], help="Kazdan-Warner / Bourguignon-Ezin suites on S^2, S^3")
    p.add_argument("--dim", type=int, choices=(2, 3), default=None)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> tuple[RunConfig, argparse.Namespace]:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig(
        command=ns.command,
        a1=ns.a1,
        a2=ns.a2,
        nodes=ns.nodes,
        seed=ns.seed,
        trials=ns.trials,
        dt=getattr(ns, "dt", None),
        max_steps=getattr(ns, "max_steps", 12000),
        json=ns.json,
        csv=getattr(ns, "csv", None),
        u_coeffs=getattr(ns, "u_coeffs", ()),
        dim=getattr(ns, "dim", None),
    )
    if not (cfg.a1 > 0 and cfg.a2 > 0 and math.isfinite(cfg.a1) and math.isfinite(cfg.a2)):
        parser.error("weights must be positive reals")
    if cfg.nodes is not None and cfg.nodes < 8:
        parser.error("--nodes must be at least 8")
    if cfg.trials < 1:
        parser.error("--trials must be at least 1")
    if cfg.dt is not None and not cfg.dt > 0:
        parser.error("--dt must be positive")
    if cfg.max_steps < 1:
        parser.error("--max-steps must be at least 1")
    return cfg, ns


def _emit(cfg: RunConfig, report: dict) -> None:
    text = dumps(report)
    sys.stdout.write(text)
    if cfg.json:
        write_json(cfg.json, report)


def cmd_verify(cfg: RunConfig) -> int:
    checks = suites.run_all(cfg.weights, cfg.resolved_nodes(), cfg.seed, cfg.trials)
    ok = all(c.passed for c in checks)
    _emit(cfg, envelope("verify", cfg.to_dict(), passed=ok, checks=[c.to_dict() for c in checks]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_invariant(cfg: RunConfig) -> int:
    grid = make_grid(cfg.resolved_nodes())
    u = grid.polynomial(cfg.u_coeffs)
    geom = TransverseGeometry(cfg.weights, u)
    value = compute_invariant(geom)
    closed = invariant_closed(cfg.weights)
    diff = abs(value - closed)
    ok = diff <= INVARIANT_TOLERANCE * max(1.0, abs(closed))
    if cfg.csv:
        write_csv(cfg.csv, ("t", "value"), zip(grid.nodes.tolist(), geom.curvature.values.tolist()))
    _emit(cfg, envelope("invariant", cfg.to_dict(), invariant=value, closed_form=closed, abs_difference=diff, passed=ok))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(cfg: RunConfig) -> int:
    rep = invariance_sweep(cfg.weights, cfg.trials, cfg.seed, cfg.resolved_nodes())
    if rep.max_rel_deviation is None:
        ok = rep.max_abs_deviation <= INVARIANT_TOLERANCE
    else:
        ok = rep.max_rel_deviation <= INVARIANT_TOLERANCE
    _emit(cfg, envelope("sweep", cfg.to_dict(), passed=ok, report=rep.to_dict()))
    return EXIT_OK if ok else EXIT_FAIL


def trace_rows(trace: FlowTrace):
    return [tuple(getattr(rec, c) for c in FlowTrace.CSV_COLUMNS) for rec in trace.records]


def cmd_flow(cfg: RunConfig) -> int:
    fc = FlowConfig(cfg.weights, n=cfg.resolved_nodes(), dt=cfg.dt, max_steps=cfg.max_steps, seed=cfg.seed)
    trace = run_flow(fc)
    if cfg.csv:
        write_csv(cfg.csv, FlowTrace.CSV_COLUMNS, trace_rows(trace))
    inv = trace.column("invariant")
    closed = invariant_closed(cfg.weights)
    summary = {
        "termination": trace.termination,
        "converged": trace.termination == CONVERGED,
        "steps": trace.final.step,
        "final_sup_residual": trace.final.sup_residual,
        "final_r": trace.final.r,
        "final_J2": trace.final.J2,
        "final_dt": trace.final.dt,
        "invariant_closed": closed,
        "invariant_max_abs_drift": float(abs(inv - closed).max()),
        "resolved_dt": fc.dt,
    }
    _emit(cfg, envelope("flow", cfg.to_dict(), summary=summary))
    return EXIT_OK


def cmd_sphere(cfg: RunConfig) -> int:
    n = cfg.resolved_nodes()
    dims = (cfg.dim,) if cfg.dim else (2, 3)
    checks = [suites.bourguignon_ezin(d, cfg.trials, cfg.seed, n) for d in dims]
    if 2 in dims:
        checks += [suites.kazdan_warner(cfg.trials, cfg.seed, n), suites.gauss_bonnet(cfg.trials, cfg.seed, n)]
    ok = all(c.passed for c in checks)
    _emit(cfg, envelope("sphere", cfg.to_dict(), passed=ok, checks=[c.to_dict() for c in checks]))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "invariant": cmd_invariant,
    "sweep": cmd_sweep,
    "flow": cmd_flow,
    "sphere": cmd_sphere,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg, ns = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[cfg.command](cfg)
    except FoliationLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
