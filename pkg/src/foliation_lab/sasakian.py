"""Closed-form scalar data of the weighted Sasakian 3-sphere.

Everything is written in the single coordinate ``t = |z1|^2`` in ``[0, 1]``;
on the unit sphere ``|z2|^2 = 1 - t``. Functions accept scalars or arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

PI2 = math.pi ** 2


@dataclass(frozen=True)
class Weights:
    """The weight pair ``(a1, a2)`` of the structure S^3_a."""

    a1: float
    a2: float

    def __post_init__(self):
        for name in ("a1", "a2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive real, got {value!r}")

    @property
    def delta(self) -> float:
        """``a1 - a2``, the slope of sigma in t."""
        return self.a1 - self.a2

    def swapped(self) -> "Weights":
        return Weights(self.a2, self.a1)

    def scaled(self, s: float) -> "Weights":
        return Weights(s * self.a1, s * self.a2)

    def as_tuple(self) -> tuple[float, float]:
        return (self.a1, self.a2)


def _check_t(t):
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("t must lie in [0, 1]")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def sigma(w: Weights, t):
    """``a1 t + a2 (1 - t)``."""
    t = _check_t(t)
    return _out(w.a1 * t + w.a2 * (1.0 - t))


def lambda_base(w: Weights, t):
    """Squared length ``sigma^-3 t (1-t)`` of Z1 and Z2 in the transverse metric."""
    t = _check_t(t)
    s = w.a1 * t + w.a2 * (1.0 - t)
    return _out(t * (1.0 - t) / s ** 3)


def transverse_scalar_closed(w: Weights, t):
    """Transverse scalar curvature of ``g_a``."""
    t = _check_t(t)
    d = w.delta
    s = w.a1 * t + w.a2 * (1.0 - t)
    return _out(-24.0 * d * d * t * (1.0 - t) / s - 16.0 * d * (2.0 * t - 1.0) + 8.0 * s)


def z2_scalar_closed(w: Weights, t):
    """``Z2(R^T)`` for the base metric."""
    t = _check_t(t)
    s = w.a1 * t + w.a2 * (1.0 - t)
    return _out(-48.0 * w.delta * w.a1 * w.a2 * t * (1.0 - t) / s ** 3)


def conformal_factor_closed(w: Weights, t):
    """``f_{Z2} = 1/2 Z2 log(lambda)`` in its endpoint-regular form."""
    t = _check_t(t)
    s = w.a1 * t + w.a2 * (1.0 - t)
    return _out((1.0 - 2.0 * t) / s - 3.0 * w.delta * t * (1.0 - t) / s ** 2)


def invariant_closed(w: Weights) -> float:
    """``I_{Z2} = -8 pi^2 (a1^2 - a2^2) / (a1^2 a2^2)``."""
    a1, a2 = w.a1, w.a2
    return -8.0 * PI2 * (a1 * a1 - a2 * a2) / (a1 * a1 * a2 * a2)


def total_curvature_closed(w: Weights) -> float:
    """``int R^T dmu = 8 pi^2 (a1 + a2) / (a1 a2)``; the same for every metric of the class."""
    return 8.0 * PI2 * (w.a1 + w.a2) / (w.a1 * w.a2)


def volume_closed(w: Weights) -> float:
    """Total volume ``2 pi^2 / (a1 a2)`` of ``g_a``."""
    return 2.0 * PI2 / (w.a1 * w.a2)
