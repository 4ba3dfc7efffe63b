"""Conformal change inside the basic conformal class of a minimal foliation.

The mean curvature of the leaves is zero throughout: minimality is preserved
by basic conformal changes, so no mean-curvature term is ever carried.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .calculus import (
    BasicFunction,
    CollocationGrid,
    basic_gradient_sq,
    basic_laplacian,
    make_grid,
    measure_weight,
    recovered_curvature,
    same_grid,
    sigma_profile,
    z2_apply,
    z2_log_lambda,
)
from .errors import ParameterError
from .sasakian import Weights

Operator = Callable[[BasicFunction], BasicFunction]


def conformal_scalar(q: int, R0: BasicFunction, u: BasicFunction, lap: Operator, gradsq: Operator) -> BasicFunction:
    """Scalar curvature of ``e^u g`` from that of ``g``.

    ``e^-u [-(q-1) lap(u) - (q-1)(q-2)/4 |grad u|^2 + R0]``; ``lap`` and
    ``gradsq`` are the operators of the background metric ``g``.
    """
    if q < 2:
        raise ParameterError(f"codimension must be >= 2, got {q}")
    grid = same_grid(R0, u)
    bracket = R0.values - (q - 1) * lap(u).values
    if q > 2:
        bracket = bracket - 0.25 * (q - 1) * (q - 2) * gradsq(u).values
    return BasicFunction(grid, np.exp(-u.values) * bracket)


@dataclass(frozen=True, eq=False)
class TransverseGeometry:
    """The metric ``e^u g_a^T`` on S^3_a, with its profiles cached at construction."""

    w: Weights
    u: BasicFunction
    q: int = field(default=2, init=False)
    sigma: np.ndarray = field(init=False, repr=False)
    base_curvature: BasicFunction = field(init=False, repr=False)
    curvature: BasicFunction = field(init=False, repr=False)
    measure: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        grid = self.grid
        R0 = recovered_curvature(self.w, grid)
        R = conformal_scalar(
            self.q,
            R0,
            self.u,
            lambda f: basic_laplacian(self.w, f),
            lambda f: basic_gradient_sq(self.w, f),
        )
        dens = measure_weight(self.w, self.u, grid)
        dens.setflags(write=False)
        sig = sigma_profile(self.w, grid)
        sig.setflags(write=False)
        object.__setattr__(self, "sigma", sig)
        object.__setattr__(self, "base_curvature", R0)
        object.__setattr__(self, "curvature", R)
        object.__setattr__(self, "measure", dens)

    @property
    def grid(self) -> CollocationGrid:
        return self.u.grid

    @classmethod
    def base(cls, w: Weights, n: int = 128) -> "TransverseGeometry":
        grid = make_grid(n)
        return cls(w, BasicFunction(grid, np.zeros(grid.n)))

    def with_factor(self, u: BasicFunction) -> "TransverseGeometry":
        return TransverseGeometry(self.w, u)

    def integrate(self, f: BasicFunction) -> float:
        """``int f dmu_u``."""
        same_grid(self.u, f)
        return float(self.grid.quad @ (f.values * self.measure))

    def volume(self) -> float:
        return float(self.grid.quad @ self.measure)


def scalar_curvature(geom: TransverseGeometry) -> BasicFunction:
    return geom.curvature


def divergence_Z2(geom: TransverseGeometry) -> BasicFunction:
    """Transverse divergence of Z2 in ``e^u g_a^T``: ``Z2 log lambda + Z2 u``."""
    return z2_log_lambda(geom.w, geom.grid) + z2_apply(geom.w, geom.u)


def conformal_factor_Z2(geom: TransverseGeometry) -> BasicFunction:
    """``f_{Z2}`` with ``L_{Z2} g^T = 2 f_{Z2} g^T`` in codimension 2."""
    return 0.5 * divergence_Z2(geom)


def conformal_laplacian(geom: TransverseGeometry, f: BasicFunction) -> BasicFunction:
    """Basic Laplacian of ``e^u g_a^T``; in transverse dimension 2 it is ``e^-u Delta_B``."""
    same_grid(geom.u, f)
    return BasicFunction(f.grid, np.exp(-geom.u.values) * basic_laplacian(geom.w, f).values)


def conformal_gradient_sq(geom: TransverseGeometry, f: BasicFunction) -> BasicFunction:
    same_grid(geom.u, f)
    return BasicFunction(f.grid, np.exp(-geom.u.values) * basic_gradient_sq(geom.w, f).values)


def rescale(geom: TransverseGeometry, v: BasicFunction) -> BasicFunction:
    """Curvature of ``e^v`` times the metric of ``geom``, computed relative to ``geom``."""
    return conformal_scalar(
        geom.q,
        geom.curvature,
        v,
        lambda f: conformal_laplacian(geom, f),
        lambda f: conformal_gradient_sq(geom, f),
    )
