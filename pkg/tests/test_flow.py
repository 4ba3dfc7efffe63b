import math

import mpmath
import numpy as np
import pytest

from foliation_lab.calculus import make_grid, random_basic
from foliation_lab.conformal import TransverseGeometry
from foliation_lab.flow import (
    CONVERGED,
    DIVERGED,
    J2_SLACK,
    STEP_LIMIT,
    FlowConfig,
    FlowTrace,
    functional_J2,
    normalize_volume,
    run_flow,
    yamabe_residual,
)
from foliation_lab.sasakian import Weights, invariant_closed, total_curvature_closed, volume_closed

PI2 = math.pi ** 2


def j2_oracle(a1, a2, slope):
    """J2 for u = slope * t by adaptive mpmath quadrature of the analytic integrands."""
    a1, a2, c = mpmath.mpf(a1), mpmath.mpf(a2), mpmath.mpf(slope)
    d = a1 - a2
    s = lambda t: a1 * t + a2 * (1 - t)
    R0 = lambda t: -24 * d * d * t * (1 - t) / s(t) - 16 * d * (2 * t - 1) + 8 * s(t)
    lap_u = lambda t: c * (4 * s(t) * (1 - 2 * t) - 4 * d * t * (1 - t))
    dmu = lambda t: 2 * mpmath.pi ** 2 / s(t) ** 2
    with mpmath.workdps(30):
        quad = mpmath.quad(lambda t: (-0.5 * c * t * lap_u(t) + c * t * R0(t)) * dmu(t), [0, 1])
        total = mpmath.quad(lambda t: R0(t) * dmu(t), [0, 1])
        vol_u = mpmath.quad(lambda t: mpmath.exp(c * t) * dmu(t), [0, 1])
        return float(quad - total * mpmath.log(vol_u))


def test_j2_base_round(grid64):
    assert functional_J2(Weights(1, 1), grid64.ones() * 0.0) == pytest.approx(-16 * PI2 * math.log(2 * PI2), rel=1e-12)


def test_j2_shift_invariant(grid64):
    w = Weights(2, 1)
    u = random_basic(grid64, 3, 8, 0.5)
    assert functional_J2(w, u + 0.9) == pytest.approx(functional_J2(w, u), rel=1e-12)
    assert functional_J2(Weights(1, 1), grid64.ones() * 2.5) == pytest.approx(functional_J2(Weights(1, 1), grid64.ones() * 0.0), rel=1e-12)


def test_j2_matches_quadrature_oracle(grid64):
    got = functional_J2(Weights(2, 1), grid64.sample(lambda t: 0.1 * t))
    assert got == pytest.approx(j2_oracle(2, 1, 0.1), rel=1e-10)


def test_yamabe_residual_examples(grid64):
    base = TransverseGeometry(Weights(1, 1), grid64.ones() * 0.0)
    assert yamabe_residual(base, 8.0).sup() <= 1e-10
    assert yamabe_residual(TransverseGeometry(Weights(2, 1), grid64.ones() * 0.0), 12.0).sup() > 1


@pytest.mark.parametrize("w", [Weights(2, 1), Weights(1, 1), Weights(1, 5)])
def test_yamabe_residual_consistent_with_conformal_law(w, grid64):
    geom = TransverseGeometry(w, random_basic(grid64, 8, 8, 0.5))
    lhs = yamabe_residual(geom, 0.0).values
    rhs = np.exp(geom.u.values) * geom.curvature.values
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-9 * np.abs(rhs).max())


def test_normalize_volume(grid64):
    w = Weights(2, 1)
    u = normalize_volume(w, random_basic(grid64, 4, 8, 0.5))
    assert TransverseGeometry(w, u).volume() == pytest.approx(volume_closed(w), rel=1e-13)


def test_config_validation():
    w = Weights(1, 1)
    with pytest.raises(ValueError):
        FlowConfig(w, dt=-1.0)
    with pytest.raises(ValueError):
        FlowConfig(w, max_steps=0)
    with pytest.raises(ValueError):
        FlowConfig(w, residual_target=0.0)
    assert FlowConfig(w).dt > 0


def test_flow_round_already_constant():
    cfg = FlowConfig(Weights(1, 1), n=32)
    trace = run_flow(cfg, u0=make_grid(32).ones() * 0.0)
    assert trace.termination == CONVERGED
    assert trace.final.step == 0
    assert len(trace.records) == 1


@pytest.fixture(scope="module")
def round_trace():
    return run_flow(FlowConfig(Weights(1, 1), seed=1))


def test_flow_round_converges(round_trace):
    assert round_trace.termination == CONVERGED
    R = TransverseGeometry(Weights(1, 1), round_trace.final_u).curvature.values
    assert np.max(np.abs(R - 8.0)) <= 1e-6


def test_flow_trace_invariants(round_trace):
    J = round_trace.column("J2")
    assert np.all(np.diff(J) <= J2_SLACK * np.abs(J[:-1]))
    assert J[-1] < J[0]
    tot = round_trace.column("total_curvature")
    np.testing.assert_allclose(tot, total_curvature_closed(Weights(1, 1)), rtol=1e-8)
    np.testing.assert_allclose(round_trace.column("r"), tot / round_trace.column("volume"), rtol=1e-14)
    assert np.max(np.abs(round_trace.column("invariant"))) <= 1e-8


def test_flow_records_subsampled():
    trace = run_flow(FlowConfig(Weights(2, 1), max_steps=50, record_every=10))
    assert [r.step for r in trace.records] == [0, 10, 20, 30, 40, 50]
    assert trace.termination == STEP_LIMIT


def test_flow_obstructed_short_run():
    w = Weights(2, 1)
    trace = run_flow(FlowConfig(w, max_steps=600, seed=2))
    assert trace.termination == STEP_LIMIT
    assert trace.column("sup_residual").min() > 0.1
    np.testing.assert_allclose(trace.column("invariant"), invariant_closed(w), rtol=1e-6)


def test_flow_huge_step_diverges():
    trace = run_flow(FlowConfig(Weights(2, 1), dt=10.0, max_steps=100))
    assert trace.termination == DIVERGED
    assert trace.records and trace.final_u is not None


def test_csv_columns():
    assert FlowTrace.CSV_COLUMNS == ("step", "J2", "sup_residual", "r", "invariant")
