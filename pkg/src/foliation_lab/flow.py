"""Variational side of the transverse Yamabe problem in codimension 2.

The flow is the normalized curvature flow ``du/ds = r - R^T_u`` with
``r = int R^T_u dmu_u / vol_u``. It is the L^2(dmu_u) gradient flow of J2:
``dJ2/ds = -int (R^T_u - r)^2 dmu_u``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .calculus import BasicFunction, basic_laplacian, make_grid, random_basic
from .conformal import TransverseGeometry
from .invariants import compute_invariant
from .sasakian import Weights

log = logging.getLogger(__name__)

CONVERGED = "converged"
STEP_LIMIT = "step-limit"
DIVERGED = "diverged"

DIVERGENCE_BOUND = 50.0
MAX_HALVINGS = 10
# explicit Euler needs dt * (spectral radius of e^-u Delta_B) below 2
STABILITY_LIMIT = 1.5
# J2 comparisons tolerate rounding; the decrease per step near convergence is below 1e-14.
J2_SLACK = 1e-12


def functional_J2(w: Weights, u: BasicFunction) -> float:
    """``int (-u Delta_B u / 2 + u R0) dmu0 - (int R0 dmu0) log int e^u dmu0``."""
    base = TransverseGeometry(w, u * 0.0)
    R0 = base.curvature
    quadratic = -0.5 * u * basic_laplacian(w, u) + u * R0
    return base.integrate(quadratic) - base.integrate(R0) * math.log(base.integrate(u.exp()))


def yamabe_residual(geom: TransverseGeometry, c: float) -> BasicFunction:
    """``-Delta_B u + R0 - c e^u`` in the base metric; zero iff ``R^T_u = c``."""
    return -basic_laplacian(geom.w, geom.u) + geom.base_curvature - c * geom.u.exp()


def average_curvature(geom: TransverseGeometry) -> float:
    return geom.integrate(geom.curvature) / geom.volume()


@dataclass
class FlowConfig:
    w: Weights
    n: int = 32
    dt: Optional[float] = None
    max_steps: int = 12000
    residual_target: float = 1e-6
    seed: int = 1
    amplitude: float = 0.2
    degree: int = 8
    record_every: int = 1

    def __post_init__(self):
        if self.dt is None:
            self.dt = default_step(self.w, self.n)
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not self.residual_target > 0:
            raise ValueError("residual_target must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    def initial_factor(self) -> BasicFunction:
        return random_basic(make_grid(self.n), self.seed, self.degree, self.amplitude)


def laplacian_radius(w: Weights, n: int) -> float:
    """Upper estimate ``4 max(a) N (N+1)`` of the spectral radius of the collocated basic Laplacian."""
    N = n - 1
    return 4.0 * max(w.a1, w.a2) * N * (N + 1)


def default_step(w: Weights, n: int) -> float:
    """Half the explicit-Euler limit for the base Laplacian."""
    return 1.0 / laplacian_radius(w, n)


@dataclass
class FlowRecord:
    step: int
    J2: float
    sup_residual: float
    r: float
    invariant: float
    total_curvature: float
    volume: float
    dt: float


@dataclass
class FlowTrace:
    config: FlowConfig
    records: list[FlowRecord] = field(default_factory=list)
    termination: str = STEP_LIMIT
    final_u: Optional[BasicFunction] = None

    CSV_COLUMNS = ("step", "J2", "sup_residual", "r", "invariant")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records])

    @property
    def final(self) -> FlowRecord:
        return self.records[-1]


def normalize_volume(w: Weights, u: BasicFunction) -> BasicFunction:
    """Shift u by a constant so that ``vol(e^u g_a) = vol(g_a)``.

    The flow preserves volume, so this fixes the limiting average curvature
    at ``4 (a1 + a2)``. J2 is unchanged by the shift.
    """
    base = TransverseGeometry(w, u * 0.0)
    return u - math.log(base.integrate(u.exp()) / base.volume())


def _record(step: int, geom: TransverseGeometry, J2: float, dt: float) -> FlowRecord:
    total = geom.integrate(geom.curvature)
    vol = geom.volume()
    r = total / vol
    return FlowRecord(
        step=step,
        J2=J2,
        sup_residual=float(np.max(np.abs(geom.curvature.values - r))),
        r=r,
        invariant=compute_invariant(geom),
        total_curvature=total,
        volume=vol,
        dt=dt,
    )


def _try_geometry(w: Weights, grid, values: np.ndarray) -> Optional[TransverseGeometry]:
    if not np.all(np.isfinite(values)) or np.max(np.abs(values)) > DIVERGENCE_BOUND:
        return None
    try:
        geom = TransverseGeometry(w, normalize_volume(w, BasicFunction(grid, values)))
    except ValueError:
        return None
    if not np.all(np.isfinite(geom.curvature.values)):
        return None
    return geom


def run_flow(cfg: FlowConfig, u0: Optional[BasicFunction] = None) -> FlowTrace:
    """Explicit Euler on ``du/ds = r - R^T_u``.

    The exact flow preserves volume; after every step u is shifted back to the
    base volume so the discrete r cannot drift from ``4 (a1 + a2)``. The step is halved whenever J2 would increase or the current conformal
    factor makes the step unstable; it is never increased again. Needing more
    than ``MAX_HALVINGS`` halvings of ``cfg.dt`` counts as divergence.
    """
    w = cfg.w
    u = normalize_volume(w, cfg.initial_factor() if u0 is None else u0)
    grid = u.grid
    trace = FlowTrace(cfg)
    geom = TransverseGeometry(w, u)
    J2 = functional_J2(w, u)
    dt = cfg.dt
    dt_floor = cfg.dt / 2 ** MAX_HALVINGS
    radius = laplacian_radius(w, grid.n)

    for step in range(cfg.max_steps + 1):
        rec = None
        if step % cfg.record_every == 0:
            rec = _record(step, geom, J2, dt)
            trace.records.append(rec)
        r = average_curvature(geom)
        speed = r - geom.curvature.values
        if np.max(np.abs(speed)) <= cfg.residual_target:
            if rec is None:
                trace.records.append(_record(step, geom, J2, dt))
            trace.termination = CONVERGED
            break
        if step == cfg.max_steps:
            if rec is None:
                trace.records.append(_record(step, geom, J2, dt))
            break

        stiffness = radius * float(np.exp(-geom.u.values.min()))
        while dt * stiffness > STABILITY_LIMIT and dt >= dt_floor:
            dt *= 0.5
        while dt >= dt_floor:
            candidate = _try_geometry(w, grid, geom.u.values + dt * speed)
            J2_new = functional_J2(w, candidate.u) if candidate is not None else math.inf
            if J2_new <= J2 + J2_SLACK * max(1.0, abs(J2)):
                break
            dt *= 0.5
        else:
            candidate = None
        if candidate is None:
            log.info("flow diverged at step %d (dt=%g)", step, dt)
            trace.termination = DIVERGED
            break
        geom, J2 = candidate, J2_new

    trace.final_u = geom.u
    return trace
