import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlscool.model import (
    ModelVariant,
    ParamError,
    RegimeWarning,
    SystemParams,
    build_bare_operators,
    build_hamiltonian,
    eliminated_valid,
    validate_params,
)


def test_reference_point_has_no_warnings(base):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        p = validate_params(base)
    assert p == base
    assert eliminated_valid(p)


def test_double_well_path_3_4_5():
    p = validate_params(SystemParams.from_double_well(0.6, 0.8, 0.05))
    assert p.omega_z == pytest.approx(1.0, abs=1e-15)
    assert p.lambda_bar == pytest.approx(0.04, abs=1e-15)
    assert p.delta_z is None and p.lam is None


def test_validation_is_idempotent():
    p = validate_params(SystemParams.from_double_well(0.3, 0.9, 0.07))
    assert validate_params(p) == p


@given(
    dz=st.floats(-2, 2, allow_nan=False),
    dx=st.floats(0.05, 2, allow_nan=False),
    lam=st.floats(0, 0.2, allow_nan=False),
)
def test_double_well_round_trip(dz, dx, lam):
    p = validate_params(SystemParams.from_double_well(dz, dx, lam))
    wz = math.sqrt(dz**2 + dx**2)
    assert p.omega_z == pytest.approx(wz, rel=1e-15)
    assert p.lambda_bar == pytest.approx(lam * dx / wz, rel=1e-14, abs=1e-300)


def test_adiabatic_warning():
    with pytest.warns(RegimeWarning, match="adiabatic"):
        p = validate_params(SystemParams(g0=0.2))
    assert not eliminated_valid(p)


def test_resolved_sideband_warning():
    with pytest.warns(RegimeWarning, match="resolved-sideband"):
        validate_params(SystemParams(kappa0=1.5))


@pytest.mark.parametrize(
    "kw, match",
    [
        (dict(kappa0=0.0), "kappa0"),
        (dict(kT=-1.0), "kT"),
        (dict(omega_z=0.0), "omega_z"),
        (dict(gamma_tau=-1e-4), "gamma_tau"),
        (dict(n_exc=1), "n_exc"),
        (dict(n_cav=2.5), "n_cav"),
        (dict(delta_z=0.6, delta_x=0.8, lam=0.05), "not both"),
        (dict(omega_z=None, lambda_bar=None), "missing"),
        (dict(omega_z=None, lambda_bar=None, delta_z=0.6, delta_x=0.8), "all of"),
    ],
)
def test_invalid_params(kw, match):
    with pytest.raises(ParamError, match=match):
        validate_params(SystemParams(**kw))


def test_from_dict_rejects_unknown_keys(base):
    assert SystemParams.from_dict(base.to_dict()) == base
    with pytest.raises(ParamError, match="unknown"):
        SystemParams.from_dict({"omega_z": 1.0, "lamda_bar": 0.05})


def test_fingerprint_tracks_values(base):
    assert base.fingerprint() == SystemParams().fingerprint()
    assert base.fingerprint() != base.replace(g0=0.051).fingerprint()


def test_two_level_ladder_in_simple_space():
    ops = build_bare_operators(SystemParams(n_mech=2), ModelVariant.SIMPLE)
    a = ops.a.toarray()
    # layout (mech, TLS): index = 2*m + s
    expected = np.zeros((4, 4))
    expected[0, 2] = expected[1, 3] = 1.0
    np.testing.assert_array_equal(a, expected)
    assert ops.dims == (2, 2)


def test_full_dimension_and_commutator():
    ops = build_bare_operators(SystemParams(n_mech=3, n_cav=2), ModelVariant.FULL)
    assert ops.dims == (3, 2, 2) and ops.dim == 12
    comm = (ops.a @ ops.a_dag - ops.a_dag @ ops.a).toarray()
    mech_index = np.repeat(np.arange(3), 4)
    below_top = mech_index < 2
    np.testing.assert_allclose(np.diag(comm)[below_top], 1.0)
    off = comm - np.diag(np.diag(comm))
    assert np.abs(off).max() == 0.0
    # the truncation artifact is confined to the top Fock level
    np.testing.assert_allclose(np.diag(comm)[~below_top], -2.0)


@pytest.mark.parametrize("variant", [ModelVariant.FULL, ModelVariant.SIMPLE])
def test_pauli_algebra(variant):
    ops = build_bare_operators(SystemParams(n_mech=3, n_cav=2), variant)
    sz = ops.sigma_z_bar.toarray()
    eye = np.eye(ops.dim)
    np.testing.assert_allclose(sz @ sz, eye)
    anti = (ops.sigma_plus_bar @ ops.sigma_minus_bar + ops.sigma_minus_bar @ ops.sigma_plus_bar).toarray()
    np.testing.assert_allclose(anti, eye)
    vals = np.linalg.eigvalsh(sz)
    assert np.sum(vals > 0) == np.sum(vals < 0) == ops.dim // 2
    np.testing.assert_allclose(np.abs(vals), 1.0)


def test_operators_act_as_identity_elsewhere():
    ops = build_bare_operators(SystemParams(n_mech=3, n_cav=2), ModelVariant.FULL)
    # a commutes with every TLS and cavity operator
    for other in (ops.sigma_minus_bar, ops.sigma_plus_bar, ops.b, ops.b_dag):
        assert abs(ops.a @ other - other @ ops.a).max() == 0.0
    assert abs(ops.b @ ops.sigma_minus_bar - ops.sigma_minus_bar @ ops.b).max() == 0.0


def test_eliminated_has_no_bare_operators(base):
    with pytest.raises(ValueError):
        build_bare_operators(base, ModelVariant.ELIMINATED)


def test_uncoupled_simple_spectrum():
    p = SystemParams(n_mech=2, lambda_bar=0.0, omega_z=0.7)
    ops = build_bare_operators(p, ModelVariant.SIMPLE)
    h = build_hamiltonian(p, ops, ModelVariant.SIMPLE).toarray()
    np.testing.assert_array_equal(h, np.diag(np.diag(h)))
    np.testing.assert_allclose(sorted(np.diag(h)), sorted([-0.35, 0.35, 1 - 0.35, 1 + 0.35]))


def test_resonant_single_excitation_splitting():
    p = SystemParams(n_mech=2, lambda_bar=0.05, omega_z=1.0)
    ops = build_bare_operators(p, ModelVariant.SIMPLE)
    h = build_hamiltonian(p, ops, ModelVariant.SIMPLE).toarray()
    # one excitation: |1, down> (index 2) and |0, up> (index 1); drop the -w_z/2 offset
    block = h[np.ix_([1, 2], [1, 2])] + 0.5 * p.omega_z * np.eye(2)
    np.testing.assert_allclose(np.linalg.eigvalsh(block), [0.95, 1.05], atol=1e-14)


@pytest.mark.parametrize("variant", [ModelVariant.FULL, ModelVariant.SIMPLE])
def test_hamiltonian_exactly_hermitian(variant):
    p = SystemParams(n_mech=4, n_cav=3, lambda_bar=0.07, omega_z=0.8, delta_b=-1.1)
    h = build_hamiltonian(p, build_bare_operators(p, variant), variant)
    assert abs(h - h.conj().T).max() == 0.0


@settings(max_examples=25, deadline=None)
@given(
    wz=st.floats(0.5, 1.5),
    lb=st.floats(0.0, 0.1),
)
def test_excitation_number_conserved(wz, lb):
    p = SystemParams(n_mech=5, omega_z=wz, lambda_bar=lb)
    ops = build_bare_operators(p, ModelVariant.SIMPLE)
    h = build_hamiltonian(p, ops, ModelVariant.SIMPLE).toarray()
    number = (ops.a_dag @ ops.a + ops.sigma_plus_bar @ ops.sigma_minus_bar).toarray()
    comm = h @ number - number @ h
    np.testing.assert_allclose(comm, 0.0, atol=1e-13)
