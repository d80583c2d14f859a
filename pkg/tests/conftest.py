import numpy as np
import pytest

from tlscool.model import SystemParams


@pytest.fixture
def base():
    """Reference operating point: resonant TLS, red-sideband drive, kT = 10."""
    return SystemParams()


@pytest.fixture
def small():
    """Reduced truncations for FULL/SIMPLE checks that do not need convergence."""
    return SystemParams(n_exc=8, n_mech=6, n_cav=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, **fixed) -> SystemParams:
    """A draw across the operating ranges used in the sweeps."""
    kw = dict(
        omega_z=rng.uniform(0.5, 1.5),
        lambda_bar=rng.uniform(0.01, 0.08),
        g0=rng.uniform(0.01, 0.06),
        kappa0=rng.uniform(0.1, 0.3),
        delta_b=rng.uniform(-1.3, -0.7),
        gamma_m=10 ** rng.uniform(-7, -5),
        gamma_tau=10 ** rng.uniform(-7, -3.5),
        kT=rng.uniform(0.5, 10.0),
    )
    kw.update(fixed)
    return SystemParams(**kw)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in module.RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
