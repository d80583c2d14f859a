import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tlscool import polariton as pol
from tlscool.model import SystemParams
from tlscool.polariton import MINUS, PLUS
from tlscool.rates import (
    DispersiveGateError,
    bare_rates,
    bare_steady_occupation,
    bose_occupation,
    cavity_rates,
    dispersive_predictions,
    polariton_rates,
)


@pytest.mark.parametrize("omega, kT, expected", [(1.0, 10.0, 9.5083), (0.5, 10.0, 19.5042)])
def test_bose_values(omega, kT, expected):
    assert bose_occupation(omega, kT) == pytest.approx(expected, abs=5e-5)
    assert bose_occupation(omega, kT) == pytest.approx(1 / np.expm1(omega / kT), rel=1e-14)


def test_bose_zero_temperature_limit():
    assert bose_occupation(1.0, 1e-3) == 0.0
    assert bose_occupation(1.0, 1e-6) == 0.0


@pytest.mark.parametrize("omega, kT", [(0.0, 10.0), (-0.1, 10.0), (1.0, 0.0)])
def test_bose_rejects_bad_input(omega, kT):
    with pytest.raises(ValueError):
        bose_occupation(omega, kT)


@given(w=st.floats(1e-3, 50.0), kT=st.floats(0.05, 50.0))
def test_detailed_balance_identity(w, kT):
    n = bose_occupation(w, kT)
    if w / kT < 600:
        assert n * np.exp(w / kT) == pytest.approx(n + 1, rel=1e-12)


def test_bare_rates_reference(base):
    cool, heat = bare_rates(base)
    assert cool == pytest.approx(4 * base.g0**2 / base.kappa0, rel=1e-14)
    assert cool == pytest.approx(0.066667, abs=5e-7)
    assert heat == pytest.approx(0.000375 / 4.005625, rel=1e-14)
    assert heat == pytest.approx(9.362e-5, abs=5e-8)


def test_symmetric_detuning(base):
    cool, heat = bare_rates(base.replace(delta_b=0.0))
    assert cool == heat


def test_bare_steady_occupation_reference(base):
    assert bare_steady_occupation(base) == pytest.approx(1.549e-3, abs=5e-7)


def test_ideal_cooling_limit(base):
    # no intrinsic damping and a far-away heating sideband
    p = base.replace(gamma_m=0.0, kappa0=1e-6)
    assert bare_steady_occupation(p) < 1e-12


def test_balanced_rates_limit(base):
    p = base.replace(delta_b=0.0)
    cool, _ = bare_rates(p)
    n_th = bose_occupation(1.0, p.kT)
    assert bare_steady_occupation(p) == pytest.approx(cool / p.gamma_m + n_th, rel=1e-12)


def test_net_heating_rejected(base):
    with pytest.raises(ValueError, match="net heating"):
        bare_steady_occupation(base.replace(delta_b=1.0))


def test_polariton_rates_reduce_to_bare():
    p = SystemParams(omega_z=0.7, lambda_bar=0.0)
    table = pol.build_transitions(pol.build_basis(p))
    rates = polariton_rates(p, table)
    phonon = (table.alpha == PLUS) & ((table.beta == PLUS) | (table.beta == -1))
    cool, heat = bare_rates(p)
    assert np.abs(rates.gamma_cool[phonon] - cool).max() == 0.0
    assert np.abs(rates.gamma_heat[phonon] - heat).max() == 0.0


def test_resonant_first_doublet_rates(base):
    table = pol.build_transitions(pol.build_basis(base))
    rates = polariton_rates(base, table)
    expected = base.g0**2 * base.kappa0 / (base.kappa0**2 / 4 + 0.05**2)
    for alpha in (MINUS, PLUS):
        k = table.lookup(1, alpha, -1)
        assert rates.gamma_cool[k] == pytest.approx(expected, rel=1e-12)
        assert rates.gamma_cool[k] == pytest.approx(4.615e-2, abs=5e-6)
        assert rates.gamma0[k] == pytest.approx(0.5 * 1e-6 + 0.5 * 2.5e-4, rel=1e-12)
        assert rates.gamma0[k] == pytest.approx(1.255e-4, abs=5e-8)


def test_rate_set_invariants(base):
    table = pol.build_transitions(pol.build_basis(base))
    rates = polariton_rates(base, table)
    for arr in (rates.gamma_cool, rates.gamma_heat, rates.gamma0, rates.nth):
        assert np.all(arr >= 0)
    assert np.all(rates.gamma_cool >= rates.gamma_heat)
    peak = np.argmax(rates.gamma_cool)
    assert peak == np.argmin(np.abs(table.omega + base.delta_b))
    np.testing.assert_allclose(rates.intrinsic_down - rates.intrinsic_up, rates.gamma0)


def test_lorentzian_monotone(base):
    w = 1.0 + np.linspace(0, 0.8, 50)
    cool, _ = cavity_rates(w, base)
    assert np.all(np.diff(cool) < 0)
    cool, _ = cavity_rates(2.0 - w, base)
    assert np.all(np.diff(cool) < 0)


def test_inverted_transition_propagates():
    p = SystemParams(lambda_bar=0.1)
    table = pol.build_transitions(pol.build_basis(p))
    with pytest.raises(ValueError, match="inversion"):
        polariton_rates(p, table)


def test_dispersive_tls_cooling_rate(base):
    pred = dispersive_predictions(base.replace(omega_z=0.7))
    assert pred.mixing == pytest.approx(1 / 6, rel=1e-14)
    assert pred.tls_cooling_rate == pytest.approx(0.066667 / 36, rel=1e-4)
    assert pred.tls_cooling_rate == pytest.approx(1.85e-3, abs=5e-6)
    assert pred.n_ss == bare_steady_occupation(base.replace(omega_z=0.7))
    assert -1 < pred.sigma_z < 0


def test_dispersive_decoupled_limit(base):
    p = base.replace(omega_z=0.99, lambda_bar=0.0)
    pred = dispersive_predictions(p)
    assert pred.tls_cooling_rate == 0.0
    assert pred.n_ss == bare_steady_occupation(p)
    n_z = bose_occupation(0.99, p.kT)
    assert pred.sigma_z == pytest.approx(-1 / (2 * n_z + 1), rel=1e-14)


def test_dispersive_gate(base):
    with pytest.raises(DispersiveGateError, match="not dispersive"):
        dispersive_predictions(base.replace(omega_z=0.99))
    dispersive_predictions(base.replace(omega_z=0.75))


def test_dispersive_tls_frequency_option(base):
    p = base.replace(omega_z=0.7)
    at_tls = dispersive_predictions(p, cavity_frequency="tls")
    at_mech = dispersive_predictions(p, cavity_frequency="mechanical")
    assert at_tls.tls_cooling_rate < at_mech.tls_cooling_rate
    with pytest.raises(ValueError):
        dispersive_predictions(p, cavity_frequency="cavity")
