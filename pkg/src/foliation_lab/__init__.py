"""Numerical laboratory for the conformal integral invariant of minimal Riemannian foliations."""
from .calculus import BasicFunction, CollocationGrid, basic_laplacian, integrate, make_grid, random_basic, z2_apply
from .conformal import TransverseGeometry, conformal_laplacian, conformal_scalar, divergence_Z2, scalar_curvature
from .flow import FlowConfig, FlowTrace, functional_J2, run_flow, yamabe_residual
from .invariants import (
    InvariantReport,
    compute_invariant,
    invariance_sweep,
    lichnerowicz_residual,
    q3_vanishing_check,
)
from .sasakian import (
    Weights,
    conformal_factor_closed,
    invariant_closed,
    lambda_base,
    sigma,
    total_curvature_closed,
    transverse_scalar_closed,
    volume_closed,
    z2_scalar_closed,
)

__version__ = "0.1.0"
