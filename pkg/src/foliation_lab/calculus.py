"""Spectral collocation for basic functions of the coordinate t.

Chebyshev-Gauss-Lobatto nodes with a dense differentiation matrix and
Clenshaw-Curtis weights. A basic function on S^3_a is torus invariant and
therefore a function of ``t = |z1|^2`` alone; Z1 annihilates it and only the
Z2 direction carries derivatives.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, OperandError
from .sasakian import PI2, Weights

UNIT = (0.0, 1.0)
SYMMETRIC = (-1.0, 1.0)

SeedLike = Union[int, Sequence[int]]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def cheb_lobatto(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Ascending Lobatto nodes on [-1, 1] and the matching differentiation matrix."""
    N = n - 1
    j = np.arange(n)
    x = -np.cos(np.pi * j / N)
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** j
    dx = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(n))
    # negative sum trick: rows of D must annihilate constants
    D -= np.diag(D.sum(axis=1))
    return x, D


def clenshaw_curtis(n: int) -> np.ndarray:
    """Clenshaw-Curtis weights on [-1, 1] for the Lobatto nodes of ``cheb_lobatto``."""
    N = n - 1
    theta = np.pi * np.arange(n) / N
    w = np.zeros(n)
    interior = slice(1, N)
    v = np.ones(N - 1)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N * N - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2 * k * theta[interior]) / (4 * k * k - 1)
        v -= np.cos(N * theta[interior]) / (N * N - 1)
    else:
        w[0] = w[N] = 1.0 / (N * N)
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[interior]) / (4 * k * k - 1)
    w[interior] = 2.0 * v / N
    # symmetric in theta, so the ascending reordering leaves it unchanged
    return w


@dataclass(frozen=True, eq=False)
class CollocationGrid:
    n: int
    interval: tuple[float, float]
    nodes: np.ndarray = field(repr=False)
    diff: np.ndarray = field(repr=False)
    diff2: np.ndarray = field(repr=False)
    quad: np.ndarray = field(repr=False)

    def compatible(self, other: "CollocationGrid") -> bool:
        return self is other or (self.n == other.n and self.interval == other.interval)

    def ones(self) -> "BasicFunction":
        return BasicFunction(self, np.ones(self.n))

    def sample(self, fn: Callable[[np.ndarray], np.ndarray]) -> "BasicFunction":
        return BasicFunction(self, np.broadcast_to(fn(self.nodes), (self.n,)))

    def polynomial(self, coeffs: Sequence[float]) -> "BasicFunction":
        """Power series ``sum c_k s^k`` in the node variable."""
        return BasicFunction(self, np.polynomial.polynomial.polyval(self.nodes, list(coeffs) or [0.0]))


@functools.lru_cache(maxsize=None)
def make_grid(n: int, interval: tuple[float, float] = UNIT) -> CollocationGrid:
    if not isinstance(n, (int, np.integer)) or n < 8:
        raise ConfigError(f"need at least 8 collocation nodes, got {n!r}")
    interval = (float(interval[0]), float(interval[1]))
    if interval not in (UNIT, SYMMETRIC):
        raise ConfigError(f"interval must be [0,1] or [-1,1], got {interval}")
    x, D = cheb_lobatto(int(n))
    w = clenshaw_curtis(int(n))
    lo, hi = interval
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    nodes[0], nodes[-1] = lo, hi
    D = D / half
    return CollocationGrid(
        n=int(n),
        interval=interval,
        nodes=_readonly(nodes),
        diff=_readonly(D),
        diff2=_readonly(D @ D),
        quad=_readonly(w * half),
    )


@dataclass(frozen=True, eq=False)
class BasicFunction:
    """Samples of a smooth basic function at the nodes of ``grid``."""

    grid: CollocationGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise OperandError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("basic function has non-finite samples")
        object.__setattr__(self, "values", _readonly(v))

    def _coerce(self, other):
        if isinstance(other, BasicFunction):
            same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return BasicFunction(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return BasicFunction(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return BasicFunction(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        return BasicFunction(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return BasicFunction(self.grid, -self.values)

    def exp(self) -> "BasicFunction":
        return BasicFunction(self.grid, np.exp(self.values))

    def abs(self) -> "BasicFunction":
        return BasicFunction(self.grid, np.abs(self.values))

    def derivative(self) -> "BasicFunction":
        return BasicFunction(self.grid, self.grid.diff @ self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


def same_grid(*fns: BasicFunction) -> CollocationGrid:
    grid = fns[0].grid
    for f in fns[1:]:
        if not grid.compatible(f.grid):
            raise OperandError(f"grid mismatch: {grid} vs {f.grid}")
    return grid


def _unit_grid(*fns: BasicFunction) -> CollocationGrid:
    grid = same_grid(*fns)
    if grid.interval != UNIT:
        raise OperandError("basic calculus on S^3_a needs a grid on [0, 1]")
    return grid


def sigma_profile(w: Weights, grid: CollocationGrid) -> np.ndarray:
    t = grid.nodes
    return w.a1 * t + w.a2 * (1.0 - t)


def z2_coefficient(w: Weights, grid: CollocationGrid) -> np.ndarray:
    """``Z2(t) = 2 sigma^-1 t (1 - t)``."""
    t = grid.nodes
    return 2.0 * t * (1.0 - t) / sigma_profile(w, grid)


def z2_apply(w: Weights, f: BasicFunction) -> BasicFunction:
    """Derivative of a basic function along Z2."""
    grid = _unit_grid(f)
    return BasicFunction(grid, z2_coefficient(w, grid) * (grid.diff @ f.values))


def basic_laplacian(w: Weights, f: BasicFunction) -> BasicFunction:
    """Basic Laplacian of ``g_a`` on a function of t.

    Equals ``lambda^-1 Z2(Z2 f)`` but is evaluated in the expanded form
    ``4 sigma t(1-t) f'' + (4 sigma (1-2t) - 4 sigma' t(1-t)) f'``, which stays
    regular where lambda vanishes.
    """
    grid = _unit_grid(f)
    t = grid.nodes
    s = sigma_profile(w, grid)
    tt = t * (1.0 - t)
    v = f.values
    return BasicFunction(
        grid,
        4.0 * s * tt * (grid.diff2 @ v) + (4.0 * s * (1.0 - 2.0 * t) - 4.0 * w.delta * tt) * (grid.diff @ v),
    )


def measure_weight(w: Weights, u: Optional[BasicFunction], grid: CollocationGrid) -> np.ndarray:
    """Coarea density ``2 pi^2 e^u sigma^-2`` of the conformal measure in t."""
    dens = 2.0 * PI2 / sigma_profile(w, grid) ** 2
    if u is not None:
        dens = dens * np.exp(u.values)
    return dens


def integrate(w: Weights, u: Optional[BasicFunction], f: BasicFunction) -> float:
    """``int_{S^3} f dmu_u`` reduced to a quadrature in t; ``u=None`` is the base metric."""
    grid = _unit_grid(f) if u is None else _unit_grid(f, u)
    return float(grid.quad @ (f.values * measure_weight(w, u, grid)))


def random_basic(grid: CollocationGrid, seed: SeedLike, degree: int, amplitude: float) -> BasicFunction:
    """Seeded polynomial of the node variable with coefficients uniform in ``[-amplitude, amplitude]``."""
    if not 0 <= degree <= 10:
        raise ConfigError("degree must be in [0, 10]")
    if not 0 <= amplitude <= 1:
        raise ConfigError("amplitude must be in [0, 1]")
    coeffs = random_coefficients(seed, degree, amplitude)
    return grid.polynomial(coeffs)


def random_coefficients(seed: SeedLike, degree: int, amplitude: float) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-amplitude, amplitude, size=degree + 1)


def basic_gradient_sq(w: Weights, f: BasicFunction) -> BasicFunction:
    """``|grad f|^2`` in ``g_a^T``: ``lambda^-1 (Z2 f)^2 = 4 sigma t(1-t) f'^2``."""
    grid = _unit_grid(f)
    t = grid.nodes
    df = grid.diff @ f.values
    return BasicFunction(grid, 4.0 * sigma_profile(w, grid) * t * (1.0 - t) * df * df)


def inverse_lambda_z2(w: Weights, f: BasicFunction) -> BasicFunction:
    """``lambda^-1 Z2 f``, i.e. ``2 sigma^2 f'`` (regular at the endpoints)."""
    grid = _unit_grid(f)
    return BasicFunction(grid, 2.0 * sigma_profile(w, grid) ** 2 * (grid.diff @ f.values))


def z2_log_lambda(w: Weights, grid: CollocationGrid) -> BasicFunction:
    """``Z2 log lambda`` with ``lambda = sigma^-3 t (1-t)``.

    The ``log t(1-t)`` part is differentiated by hand (it is singular at the
    nodes 0 and 1); only ``-3 log sigma`` goes through the collocation matrix.
    """
    t = grid.nodes
    s = sigma_profile(w, grid)
    smooth = z2_apply(w, BasicFunction(grid, -3.0 * np.log(s)))
    return smooth + 2.0 * (1.0 - 2.0 * t) / s


def recovered_curvature(w: Weights, grid: CollocationGrid) -> BasicFunction:
    """``-lambda^-1 Z2 Z2 log lambda``: the transverse scalar curvature of ``g_a``."""
    return -inverse_lambda_z2(w, z2_log_lambda(w, grid))
