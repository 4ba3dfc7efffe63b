"""Axisymmetric conformal metrics ``e^u g_round`` on S^2 and S^3.

Profiles are functions of the height ``x = cos(theta)`` on [-1, 1]. The
conformal field is ``Y = grad x`` (round metric), acting as ``(1 - x^2) d/dx``.
The trivial foliation by points has codimension n, which makes S^3 a
codimension-3 test case for the vanishing of the invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import SYMMETRIC, BasicFunction, CollocationGrid, make_grid, same_grid
from .conformal import conformal_scalar
from .errors import OperandError, ParameterError

# area of the unit (n-1)-sphere swept by the axisymmetric level sets
_LEVEL_AREA = {2: 2.0 * math.pi, 3: 4.0 * math.pi}
SPHERE_VOLUME = {2: 4.0 * math.pi, 3: 2.0 * math.pi ** 2}


def _check_dim(n: int) -> int:
    if n not in _LEVEL_AREA:
        raise ParameterError(f"sphere dimension must be 2 or 3, got {n}")
    return n


def _height_grid(*fns: BasicFunction) -> CollocationGrid:
    grid = same_grid(*fns)
    if grid.interval != SYMMETRIC:
        raise OperandError("sphere profiles need a grid on [-1, 1]")
    return grid


def measure_weights(n: int, grid: CollocationGrid) -> np.ndarray:
    """Quadrature weights for ``int f dmu_round`` with f sampled at the nodes.

    Even n: Clenshaw-Curtis against the polynomial factor ``(1-x^2)^((n-2)/2)``.
    Odd n: the factor has a square root at the poles, so the rule is the
    trapezoid rule in theta, which is spectral for the smooth periodic
    integrand ``f(cos theta) sin^(n-1) theta``.
    """
    _check_dim(n)
    x = grid.nodes
    if n % 2 == 0:
        return _LEVEL_AREA[n] * grid.quad * (1.0 - x * x) ** ((n - 2) // 2)
    N = grid.n - 1
    theta = np.pi * np.arange(grid.n) / N
    ends = np.ones(grid.n)
    ends[0] = ends[-1] = 0.5
    return _LEVEL_AREA[n] * (np.pi / N) * ends * np.sin(theta) ** (n - 1)


def sphere_laplacian(n: int, f: BasicFunction) -> BasicFunction:
    """``(1 - x^2) f'' - n x f'``."""
    _check_dim(n)
    grid = _height_grid(f)
    x = grid.nodes
    return BasicFunction(grid, (1.0 - x * x) * (grid.diff2 @ f.values) - n * x * (grid.diff @ f.values))


def sphere_gradient_sq(f: BasicFunction) -> BasicFunction:
    grid = _height_grid(f)
    df = grid.diff @ f.values
    return BasicFunction(grid, (1.0 - grid.nodes ** 2) * df * df)


def apply_Y(f: BasicFunction) -> BasicFunction:
    """``Y f`` for ``Y = grad_round x``."""
    grid = _height_grid(f)
    return BasicFunction(grid, (1.0 - grid.nodes ** 2) * (grid.diff @ f.values))


def sphere_scalar(n: int, u: BasicFunction) -> BasicFunction:
    """Scalar curvature of ``e^u g_round``, through the same conformal-change law as the foliated case."""
    _check_dim(n)
    grid = _height_grid(u)
    R0 = BasicFunction(grid, np.full(grid.n, float(n * (n - 1))))
    return conformal_scalar(n, R0, u, lambda f: sphere_laplacian(n, f), sphere_gradient_sq)


@dataclass(frozen=True, eq=False)
class SphereGeometry:
    n: int
    u: BasicFunction
    curvature: BasicFunction = field(init=False, repr=False)
    measure: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _check_dim(self.n)
        grid = _height_grid(self.u)
        dens = measure_weights(self.n, grid) * np.exp(0.5 * self.n * self.u.values)
        dens.setflags(write=False)
        object.__setattr__(self, "curvature", sphere_scalar(self.n, self.u))
        object.__setattr__(self, "measure", dens)

    @property
    def grid(self) -> CollocationGrid:
        return self.u.grid

    @classmethod
    def round(cls, n: int, nodes: int = 192) -> "SphereGeometry":
        grid = make_grid(nodes, SYMMETRIC)
        return cls(n, BasicFunction(grid, np.zeros(grid.n)))

    def integrate(self, f: BasicFunction) -> float:
        same_grid(self.u, f)
        return float(self.measure @ f.values)

    def volume(self) -> float:
        return float(self.measure.sum())

    def total_curvature(self) -> float:
        return self.integrate(self.curvature)

    def scale(self) -> float:
        """``max|R| vol``, the reference size for the vanishing bounds."""
        return self.curvature.sup() * self.volume()


def bourguignon_ezin_integral(n: int, u: BasicFunction) -> float:
    """``int Y(R_g) dmu_g`` for ``g = e^u g_round``; vanishes for every u."""
    geom = SphereGeometry(n, u)
    return geom.integrate(apply_Y(geom.curvature))


def prescribed_curvature(phi: BasicFunction) -> BasicFunction:
    """The h for which phi solves ``Delta phi + 2 - h e^-phi = 0`` on S^2."""
    return BasicFunction(phi.grid, np.exp(phi.values) * (2.0 + sphere_laplacian(2, phi).values))


def kazdan_warner_integral(phi: BasicFunction) -> float:
    """``int g(grad F, grad h) e^-phi dmu_round`` with ``F = x``."""
    grid = _height_grid(phi)
    h = prescribed_curvature(phi)
    integrand = (1.0 - grid.nodes ** 2) * (grid.diff @ h.values) * np.exp(-phi.values)
    return float(measure_weights(2, grid) @ integrand)


def yamabe_quotient(n: int, u: BasicFunction) -> float:
    """``int R dmu / vol^((n-2)/n)`` for n >= 3."""
    if n < 3:
        raise ParameterError("the Yamabe quotient needs n >= 3; use the q = 2 functional on S^2")
    geom = SphereGeometry(n, u)
    return geom.total_curvature() / geom.volume() ** ((n - 2) / n)
