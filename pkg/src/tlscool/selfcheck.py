"""Fast invariant checks over every module, run by ``tlscool self-check``."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import polariton as pol
from .liouvillian import build_liouvillian, trace_functional, unvec, vec
from .model import ModelVariant, RegimeWarning, SystemParams, build_bare_operators, build_hamiltonian
from .rates import bare_rates, bare_steady_occupation, bose_occupation, polariton_rates
from .steady import solve_steady, steady_state


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _small(**kw) -> SystemParams:
    base = dict(n_exc=8, n_mech=5, n_cav=2)
    base.update(kw)
    return SystemParams(**base)


def check_commutator() -> tuple[bool, str]:
    ops = build_bare_operators(_small(), ModelVariant.FULL)
    comm = (ops.a @ ops.a_dag - ops.a_dag @ ops.a).toarray()
    top = np.kron(np.kron(np.eye(5)[4:5].T @ np.eye(5)[4:5], np.eye(2)), np.eye(2))
    err = np.abs(comm - (np.eye(ops.dim) - 5 * top)).max()
    return err < 1e-12, f"max deviation {err:.2e}"


def check_hermitian() -> tuple[bool, str]:
    p = _small()
    worst = 0.0
    for variant in (ModelVariant.FULL, ModelVariant.SIMPLE):
        h = build_hamiltonian(p, build_bare_operators(p, variant), variant)
        worst = max(worst, abs(h - h.conj().T).max())
    return worst == 0.0, f"max |H - H^dag| = {worst:.1e}"


def check_spectrum_oracle() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(3):
        p = SystemParams(omega_z=rng.uniform(0.5, 1.5), lambda_bar=rng.uniform(0.01, 0.1))
        basis = pol.build_basis(p, 10)
        table = pol.build_transitions(basis)
        energies, a, sm = pol.oracle_operators(p, 12, 10)
        worst = max(
            worst,
            np.abs(energies - basis.energies).max(),
            np.abs(a - pol.mechanical_operator_in_eigenbasis(table)).max(),
            np.abs(sm - pol.sigma_minus_in_eigenbasis(table)).max(),
        )
    return worst < 1e-10, f"max deviation {worst:.2e}"


def check_rate_reduction() -> tuple[bool, str]:
    p = SystemParams(omega_z=0.7, lambda_bar=0.0)
    table = pol.build_transitions(pol.build_basis(p, 10))
    rates = polariton_rates(p, table)
    phonon = np.isclose(table.omega, p.omega_m)
    cool, heat = bare_rates(p)
    err = max(np.abs(rates.gamma_cool[phonon] - cool).max(), np.abs(rates.gamma_heat[phonon] - heat).max())
    return err < 1e-15, f"max deviation {err:.1e}"


def check_detailed_balance() -> tuple[bool, str]:
    w = np.linspace(0.1, 3.0, 30)
    n = bose_occupation(w, 10.0)
    err = np.abs(n * np.exp(w / 10.0) - (n + 1)).max()
    return err < 1e-12, f"max deviation {err:.1e}"


def check_superoperators() -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    p = _small(gamma_tau=1e-4, omega_z=0.9)
    worst_trace = worst_herm = 0.0
    for variant in ModelVariant:
        L = build_liouvillian(p, variant)
        t = trace_functional(L.dim)
        worst_trace = max(worst_trace, np.abs(t @ L.matrix).max())
        x = rng.normal(size=(L.dim, L.dim)) + 1j * rng.normal(size=(L.dim, L.dim))
        lhs = L.apply(x.conj().T)
        rhs = L.apply(x).conj().T
        worst_herm = max(worst_herm, np.abs(lhs - rhs).max())
    ok = worst_trace < 1e-12 and worst_herm < 1e-12
    return ok, f"trace {worst_trace:.1e}, hermiticity {worst_herm:.1e}"


def check_bare_limit() -> tuple[bool, str]:
    p = SystemParams(omega_z=0.7, lambda_bar=0.0)
    n = steady_state(p, ModelVariant.ELIMINATED).n_ss
    ref = bare_steady_occupation(p)
    rel = abs(n - ref) / ref
    return rel < 1e-4, f"n_ss={n:.6e} vs analytic {ref:.6e} (rel {rel:.1e})"


def check_gibbs() -> tuple[bool, str]:
    p = SystemParams(g0=0.0, n_exc=20)
    L = build_liouvillian(p, ModelVariant.ELIMINATED)
    pops = solve_steady(L).populations
    basis = pol.build_basis(p)
    gibbs = np.exp(-basis.energies / p.kT)
    gibbs /= gibbs.sum()
    err = np.abs(pops - gibbs).max()
    return err < 1e-8, f"max population deviation {err:.1e}"


def check_two_solvers() -> tuple[bool, str]:
    worst = 0.0
    for variant in ModelVariant:
        L = build_liouvillian(_small(), variant)
        a = solve_steady(L, method="regularized", check_degeneracy=False).rho
        b = solve_steady(L, method="inverse", check_degeneracy=False).rho
        worst = max(worst, np.abs(a - b).max())
    return worst < 1e-8, f"max |rho_reg - rho_inv| = {worst:.1e}"


def check_vectorization() -> tuple[bool, str]:
    x = np.arange(12.0).reshape(3, 4)[:, :3]
    ok = np.array_equal(unvec(vec(x)), x) and vec(x)[1] == x[1, 0]
    return bool(ok), "column stacking round trip"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "model.commutator": check_commutator,
    "model.hermitian": check_hermitian,
    "polariton.oracle": check_spectrum_oracle,
    "rates.reduction": check_rate_reduction,
    "rates.detailed_balance": check_detailed_balance,
    "liouvillian.vectorization": check_vectorization,
    "liouvillian.invariants": check_superoperators,
    "steady.bare_limit": check_bare_limit,
    "steady.gibbs": check_gibbs,
    "steady.two_solvers": check_two_solvers,
}


def run_checks() -> list[CheckResult]:
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        for name, fn in CHECKS.items():
            try:
                passed, detail = fn()
            except Exception as exc:  # a crashing check is a failed check
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            out.append(CheckResult(name, bool(passed), detail))
    return out
