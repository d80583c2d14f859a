import numpy as np
import pytest
import scipy.sparse as sp

from tlscool import polariton as pol
from tlscool.liouvillian import Liouvillian, build_liouvillian, lindblad_term
from tlscool.model import ModelVariant, SystemParams
from tlscool.polariton import PLUS, state_index
from tlscool.rates import bare_steady_occupation, bose_occupation
from tlscool.steady import (
    DegenerateSteadyState,
    SteadyStateError,
    convergence_check,
    observables,
    partial_trace_last,
    solve_steady,
    steady_state,
)

from conftest import random_params


def two_level(matrix):
    return Liouvillian(
        matrix=sp.csr_matrix(matrix, dtype=complex),
        variant=ModelVariant.ELIMINATED,
        basis_labels=["0", "1"],
        params_hash="",
        dims=(2,),
        number_op=np.diag([0.0, 1.0]),
        sigma_z_op=np.diag([-1.0, 1.0]),
    )


@pytest.mark.parametrize("method", ["lu", "regularized", "inverse"])
def test_pure_decay(method):
    L = two_level(lindblad_term(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.2))
    ss = solve_steady(L, method=method)
    np.testing.assert_allclose(ss.rho, np.diag([1.0, 0.0]), atol=1e-12)
    assert ss.n_ss == pytest.approx(0.0, abs=1e-12)
    assert ss.sigma_z_ss == pytest.approx(-1.0, abs=1e-12)


def test_degenerate_null_space_is_reported():
    # pure dephasing keeps every diagonal state stationary
    L = two_level(lindblad_term(np.diag([1.0, -1.0]), 0.1))
    with pytest.raises(DegenerateSteadyState, match="degenerate"):
        solve_steady(L)


def test_unknown_method(base):
    with pytest.raises(KeyError):
        solve_steady(build_liouvillian(base, ModelVariant.ELIMINATED), method="svd")


def test_thermal_state_without_cavity():
    p = SystemParams(g0=0.0, lambda_bar=0.0, n_exc=300)
    ss = steady_state(p, ModelVariant.ELIMINATED, check_degeneracy=False)
    assert ss.n_ss == pytest.approx(bose_occupation(1.0, 10.0), rel=1e-8)
    assert ss.n_ss == pytest.approx(9.5083, abs=5e-5)
    assert ss.sigma_z_ss == pytest.approx(-np.tanh(1.0 / 20.0), rel=1e-8)


@pytest.mark.parametrize("omega_z", [0.7, 1.0, 1.3])
def test_uncoupled_matches_bare_formula(base, omega_z):
    p = base.replace(lambda_bar=0.0, omega_z=omega_z)
    ss = steady_state(p, ModelVariant.ELIMINATED)
    assert ss.n_ss == pytest.approx(bare_steady_occupation(p), rel=1e-10)
    assert ss.n_ss == pytest.approx(1.549e-3, abs=5e-7)


def test_observables_on_basis_states(base):
    L = build_liouvillian(base, ModelVariant.ELIMINATED)
    ground = np.zeros((L.dim, L.dim))
    ground[0, 0] = 1.0
    assert observables(ground, L)[:2] == (0.0, -1.0)
    upper = np.zeros((L.dim, L.dim))
    k = state_index(1, PLUS)
    upper[k, k] = 1.0
    n, sz, _ = observables(upper, L)
    assert n == pytest.approx(0.5, abs=1e-15)
    assert sz == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError, match="does not match"):
        observables(np.eye(3), L)


@pytest.mark.parametrize("variant", list(ModelVariant))
def test_state_invariants(small, variant):
    ss = steady_state(small, variant)
    rho = ss.rho
    assert abs(np.trace(rho) - 1) < 1e-10
    assert np.abs(rho - rho.conj().T).max() < 1e-10
    assert np.linalg.eigvalsh(rho).min() >= -1e-8
    d = ss.diagnostics
    assert d["residual"] <= 1e-10
    assert d["trace_err"] < 1e-10
    assert d["gap"] > 0
    np.testing.assert_allclose(ss.populations, np.real(np.diag(rho)))


@pytest.mark.parametrize("variant", list(ModelVariant))
@pytest.mark.parametrize("seed", range(3))
def test_solver_independence(variant, seed):
    rng = np.random.default_rng(100 + seed)
    p = random_params(rng, n_exc=12, n_mech=7, n_cav=2)
    L = build_liouvillian(p, variant)
    lu = solve_steady(L, method="lu", check_degeneracy=False).rho
    reg = solve_steady(L, method="regularized", check_degeneracy=False).rho
    inv = solve_steady(L, method="inverse", check_degeneracy=False).rho
    assert np.abs(reg - inv).max() < 1e-8
    assert np.abs(lu - reg).max() < 1e-8


def test_eliminated_state_is_diagonal(base):
    rho = steady_state(base, ModelVariant.ELIMINATED).rho
    off = rho - np.diag(np.diag(rho))
    assert np.abs(off).sum() < 1e-6


def test_full_reduced_state_matches_eliminated_ordering(base):
    full = steady_state(base, ModelVariant.FULL, check_degeneracy=False)
    elim = steady_state(base, ModelVariant.ELIMINATED)
    assert full.rho_reduced.shape == (2 * base.n_mech, 2 * base.n_mech)
    assert np.trace(full.rho_reduced) == pytest.approx(1.0, abs=1e-12)
    basis = pol.build_basis(base, base.n_mech - 1)
    v = basis.eigenvectors_bare(base.n_mech)
    pops_full = np.real(np.diag(v.T @ full.rho_reduced @ v))
    pops_elim = elim.populations[: basis.dim]
    np.testing.assert_array_equal(np.argsort(-pops_full)[:5], np.argsort(-pops_elim)[:5])


def test_partial_trace():
    a = np.diag([0.25, 0.75])
    b = np.diag([0.1, 0.9])
    np.testing.assert_allclose(partial_trace_last(np.kron(a, b), (2, 2)), a)


def test_negative_state_is_an_error():
    # trace-preserving population generator whose null vector is diag(1.5, -0.5)
    m = np.zeros((4, 4))
    m[np.ix_([0, 3], [0, 3])] = [[-1.0, -3.0], [1.0, 3.0]]
    m[1, 1] = m[2, 2] = -1.0
    with pytest.raises(SteadyStateError, match="eigenvalue"):
        solve_steady(two_level(m), check_degeneracy=False)


def test_convergence_reference_point(base):
    report = convergence_check(base, ModelVariant.ELIMINATED)
    assert report.passed and report.status == "PASS"
    assert report.refined == {"n_exc": 80}


def test_convergence_detects_under_truncation():
    report = convergence_check(SystemParams(g0=0.0, n_exc=2), ModelVariant.ELIMINATED)
    assert not report.passed and report.status == "FAIL"


def test_convergence_cold_bath():
    assert convergence_check(SystemParams(kT=0.1, n_exc=4), ModelVariant.ELIMINATED).passed


def test_convergence_simple(base):
    assert convergence_check(base, ModelVariant.SIMPLE).passed
