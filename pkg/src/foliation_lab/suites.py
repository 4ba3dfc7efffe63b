"""Verification suites aggregating the property checks of every module.

Each suite returns ``Check`` records: a measured deviation, the bound it is
held to, and whether it passed. Randomness is keyed on ``(seed, trial)``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .calculus import SYMMETRIC, BasicFunction, make_grid, random_basic
from .conformal import TransverseGeometry, conformal_laplacian
from .invariants import (
    compute_invariant,
    invariance_sweep,
    lichnerowicz_residual,
    lichnerowicz_scale,
    q3_vanishing_check,
)
from .sasakian import Weights, invariant_closed, total_curvature_closed, transverse_scalar_closed
from .sphere import SphereGeometry, bourguignon_ezin_integral, kazdan_warner_integral

CURVATURE_FAMILY = (Weights(1, 1), Weights(2, 1), Weights(3, 2), Weights(1, 5))
# per-suite stream offsets, so suites sharing one seed draw independent factors
_STREAM = {"lich": 1, "div_u": 2, "div_f": 3, "total": 4, "q3": 5, "be": 6, "kw": 7, "gb": 8}


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    passed: bool

    @classmethod
    def at_most(cls, name: str, measured: float, bound: float) -> "Check":
        measured = float(measured)
        return cls(name, measured, bound, bool(np.isfinite(measured) and measured <= bound))

    def to_dict(self) -> dict:
        return asdict(self)


def _factor(grid, seed: int, stream: str, k: int, degree: int = 8, amplitude: float = 0.5) -> BasicFunction:
    return random_basic(grid, (seed, _STREAM[stream], k), degree, amplitude)


def invariant_value(w: Weights, n: int = 64) -> Check:
    closed = invariant_closed(w)
    value = compute_invariant(TransverseGeometry.base(w, n))
    dev = abs(value - closed) / abs(closed) if closed else abs(value)
    return Check.at_most(f"invariant_value{w.as_tuple()}", dev, 1e-10)


def invariance(w: Weights, trials: int, seed: int, n: int) -> Check:
    rep = invariance_sweep(w, trials, seed, n)
    if rep.max_rel_deviation is None:
        return Check.at_most(f"invariance_abs{w.as_tuple()}", rep.max_abs_deviation, 1e-8)
    return Check.at_most(f"invariance_rel{w.as_tuple()}", rep.max_rel_deviation, 1e-8)


def curvature_recovery(n: int, family: Iterable[Weights] = CURVATURE_FAMILY) -> Check:
    worst = 0.0
    for w in family:
        geom = TransverseGeometry.base(w, n)
        t = geom.grid.nodes[1:-1]
        exact = transverse_scalar_closed(w, t)
        err = np.abs(geom.curvature.values[1:-1] - exact) / np.max(np.abs(exact))
        worst = max(worst, float(err.max()))
    return Check.at_most("curvature_recovery", worst, 1e-9)


def lichnerowicz(w: Weights, trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n)
    worst = 0.0
    for k in range(trials):
        geom = TransverseGeometry(w, _factor(grid, seed, "lich", k))
        worst = max(worst, lichnerowicz_residual(geom).sup() / lichnerowicz_scale(geom))
    return Check.at_most(f"lichnerowicz{w.as_tuple()}", worst, 1e-7)


def divergence_theorem(w: Weights, trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n)
    worst = 0.0
    for k in range(trials):
        geom = TransverseGeometry(w, _factor(grid, seed, "div_u", k))
        f = _factor(grid, seed, "div_f", k, amplitude=1.0)
        lhs = abs(geom.integrate(conformal_laplacian(geom, f)))
        worst = max(worst, lhs / (1.0 + geom.integrate(f.abs())))
    return Check.at_most(f"divergence_theorem{w.as_tuple()}", worst, 1e-10)


def total_curvature(w: Weights, trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n)
    closed = total_curvature_closed(w)
    worst = 0.0
    for k in range(trials):
        geom = TransverseGeometry(w, _factor(grid, seed, "total", k))
        worst = max(worst, abs(geom.integrate(geom.curvature) - closed) / closed)
    return Check.at_most(f"total_curvature{w.as_tuple()}", worst, 1e-8)


def integrated_identity(w: Weights, trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n)
    worst = 0.0
    for k in range(trials):
        worst = max(worst, abs(q3_vanishing_check(TransverseGeometry(w, _factor(grid, seed, "q3", k)))))
    return Check.at_most(f"integrated_identity{w.as_tuple()}", worst, 1e-7)


def bourguignon_ezin(dim: int, trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n, SYMMETRIC)
    worst = 0.0
    for k in range(trials):
        u = _factor(grid, seed, "be", k)
        worst = max(worst, abs(bourguignon_ezin_integral(dim, u)) / SphereGeometry(dim, u).scale())
    return Check.at_most(f"bourguignon_ezin_S{dim}", worst, 1e-8)


def kazdan_warner(trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n, SYMMETRIC)
    worst = 0.0
    for k in range(trials):
        phi = _factor(grid, seed, "kw", k)
        worst = max(worst, abs(kazdan_warner_integral(phi)) / SphereGeometry(2, -phi).scale())
    return Check.at_most("kazdan_warner_S2", worst, 1e-8)


def gauss_bonnet(trials: int, seed: int, n: int) -> Check:
    grid = make_grid(n, SYMMETRIC)
    worst = 0.0
    for k in range(trials):
        geom = SphereGeometry(2, _factor(grid, seed, "gb", k))
        worst = max(worst, abs(geom.total_curvature() / (8.0 * np.pi) - 1.0))
    return Check.at_most("gauss_bonnet_S2", worst, 1e-9)


def run_all(w: Weights, nodes: int = 128, seed: int = 42, trials: int = 25) -> list[Check]:
    """Every suite, on the given weights plus the round case (1,1)."""
    round_w = Weights(1, 1)
    family = [w] if w == round_w else [w, round_w]
    checks = [invariant_value(w, nodes) if w != round_w else invariant_value(Weights(2, 1), nodes)]
    for v in family:
        checks.append(invariance(v, trials, seed, nodes))
    checks.append(curvature_recovery(nodes))
    for v in family:
        checks += [
            lichnerowicz(v, trials, seed, nodes),
            divergence_theorem(v, trials, seed, nodes),
            total_curvature(v, trials, seed, nodes),
            integrated_identity(v, trials, seed, nodes),
        ]
    checks += [
        bourguignon_ezin(2, trials, seed, nodes),
        bourguignon_ezin(3, trials, seed, nodes),
        kazdan_warner(trials, seed, nodes),
        gauss_bonnet(trials, seed, nodes),
    ]
    return checks
