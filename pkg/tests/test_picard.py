import numpy as np
import pytest

from streamuniq import (DomainError, HypothesisReport, ModelValidationError,
                        NonConvergenceError, RadialGrid, VorticityModel,
                        WindowCollapseError, picard_solve, residual, weighted_norm,
                        zero_vorticity)


@pytest.fixture(scope="module")
def solved(classical_model):
    grid = RadialGrid.geometric(1.0, 1.5, 1025)
    traj, diag = picard_solve(classical_model, 1.0, 1.0, grid, tol=1e-11)
    return traj, diag


def test_converges_in_few_iterations(solved):
    traj, diag = solved
    assert diag.converged
    assert diag.iterations == 5
    deltas = diag.weighted_deltas
    assert deltas[-1] <= 1e-11
    # each sweep contracts the weighted update by about three decades
    for before, after in zip(deltas, deltas[1:]):
        assert after < 0.01 * before


def test_endpoint_values_frozen(solved):
    traj, _ = solved
    np.testing.assert_allclose(traj.psi[-1], 0.42876226653654, rtol=1e-12)
    np.testing.assert_allclose(traj.u[-1], 1.1419835036933215, rtol=1e-12)
    np.testing.assert_allclose(traj.window_end, 1.2722952260625808, rtol=1e-12)


def test_initial_conditions_exact(solved):
    traj, _ = solved
    assert traj.psi[0] == 0.0
    assert traj.u[0] == 1.0
    assert traj.r0psi1 == 1.0
    assert traj.method_tag == "picard"


def test_fixed_point_defect_small(classical_model, solved):
    traj, _ = solved
    assert residual(classical_model, traj) < 1e-13
    assert residual(classical_model, traj, weighted=True) < 1e-13


def test_monotone_increasing_solution(solved):
    traj, _ = solved
    assert np.all(np.diff(traj.psi) > 0.0)
    assert np.all(traj.u > 0.0)


def test_reflection_is_exact(classical_model, solved):
    traj, _ = solved
    grid = traj.grid
    neg, _ = picard_solve(classical_model, 1.0, -1.0, grid, tol=1e-11)
    assert np.array_equal(neg.psi, -traj.psi)
    assert np.array_equal(neg.u, -traj.u)
    assert neg.window_end == traj.window_end


def test_zero_vorticity_reproduces_log_exactly():
    model = VorticityModel.custom(zero_vorticity, holder_C=1.0)
    grid = RadialGrid.uniform(1.0, 2.0, 257)
    traj, diag = picard_solve(model, 1.0, 1.0, grid, allow_unvalidated=True)
    assert np.array_equal(traj.psi, grid.log_weights)
    assert np.array_equal(traj.u, np.ones(grid.n))
    assert diag.iterations == 1
    assert diag.weighted_deltas == [0.0]
    # the log profile leaves (0, 0.25] just past exp(0.25)
    assert traj.window_end == 1.28125


def test_validation_gate(classical_model):
    grid = RadialGrid.uniform(1.0, 2.0, 65)
    zero = VorticityModel.custom(zero_vorticity, holder_C=1.0)
    with pytest.raises(ModelValidationError, match="allow_unvalidated"):
        picard_solve(zero, 1.0, 1.0, grid)
    # a supplied report takes precedence over re-sampling
    ok = HypothesisReport(sign_margin=1.0, holder_sup=0.0, samples_used=1, verdict=True)
    picard_solve(zero, 1.0, 1.0, grid, validation=ok)
    bad = HypothesisReport(sign_margin=-1.0, holder_sup=0.0, samples_used=1, verdict=False)
    with pytest.raises(ModelValidationError):
        picard_solve(classical_model, 1.0, 1.0, grid, validation=bad)


def test_window_collapse_on_coarse_grid(classical_model):
    # log(1.5) > delta already at the first interior node
    grid = RadialGrid.uniform(1.0, 2.0, 3)
    with pytest.raises(WindowCollapseError, match="refine the grid"):
        picard_solve(classical_model, 1.0, 1.0, grid)


def test_non_convergence_carries_diagnostics(classical_model):
    grid = RadialGrid.geometric(1.0, 1.5, 257)
    with pytest.raises(NonConvergenceError) as err:
        picard_solve(classical_model, 1.0, 1.0, grid, tol=1e-16, max_iter=1)
    diag = err.value.diagnostics
    assert diag.iterations == 1
    assert not diag.converged
    assert len(diag.weighted_deltas) == 1


def test_non_finite_iterate_detected():
    blowup = VorticityModel.custom(lambda p: np.inf if p > 0.1 else 0.0, holder_C=1.0)
    grid = RadialGrid.geometric(1.0, 1.5, 257)
    with pytest.raises(NonConvergenceError, match="non-finite"):
        picard_solve(blowup, 1.0, 1.0, grid, allow_unvalidated=True)


@pytest.mark.parametrize("kwargs", [
    dict(r0=0.5, psi1=1.0),
    dict(r0=np.inf, psi1=1.0),
    dict(r0=1.0, psi1=0.0),
    dict(r0=1.0, psi1=np.nan),
    dict(r0=1.0, psi1=1.0, tol=0.0),
    dict(r0=1.0, psi1=1.0, max_iter=0),
])
def test_argument_validation(classical_model, kwargs):
    grid = RadialGrid.geometric(max(kwargs["r0"], 1.0) if np.isfinite(kwargs["r0"]) else 1.0,
                                2.0, 65)
    with pytest.raises(DomainError):
        picard_solve(classical_model, grid=grid, **kwargs)


def test_grid_must_start_at_r0(classical_model):
    grid = RadialGrid.geometric(1.5, 2.0, 65)
    with pytest.raises(DomainError, match="start exactly"):
        picard_solve(classical_model, 1.0, 1.0, grid)


def test_weighted_norm_basics():
    grid = RadialGrid.uniform(1.0, 2.0, 5)
    val, r_at = weighted_norm(np.zeros(5), grid)
    assert (val, r_at) == (0.0, 1.25)
    x = np.array([0.0, 0.2, 0.3, 0.45, 0.6])
    val, r_at = weighted_norm(x, grid)
    np.testing.assert_allclose(val, 0.89628402354491, rtol=1e-13)
    assert r_at == 1.25
    with pytest.raises(DomainError):
        weighted_norm(np.ones(5), grid)
    with pytest.raises(DomainError):
        weighted_norm(np.zeros(4), grid)


def test_weighted_norm_tie_is_leftmost():
    grid = RadialGrid.uniform(1.0, 2.0, 5)
    x = 0.7 * grid.log_weights
    val, r_at = weighted_norm(x, grid)
    np.testing.assert_allclose(val, 0.7, rtol=1e-15)
    assert r_at == 1.25
