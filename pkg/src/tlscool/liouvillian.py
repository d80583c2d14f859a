"""Sparse Liouvillian superoperators for the three master-equation variants.

Density matrices are vectorized by column stacking, ``vec(rho) =
rho.ravel(order="F")``, so that ``vec(A rho B) = (B.T kron A) vec(rho)``.
The Lindblad form used throughout is

    L(o) rho = 2 o rho o^dag - rho o^dag o - o^dag o rho

and a channel with rate ``r`` contributes ``(r/2) L(o)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import polariton as pol
from .model import (
    BareOperators,
    ModelVariant,
    SystemParams,
    build_bare_operators,
    build_hamiltonian,
)
from .rates import RateSet, bare_rates, bose_occupation, polariton_rates

DROP_TOL = 1e-15


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).ravel(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape((d, d), order="F")


def trace_functional(d: int) -> np.ndarray:
    """Row vector ``t`` with ``t @ vec(rho) = tr(rho)``."""
    return vec(np.eye(d))


def spre(op) -> sp.csr_matrix:
    d = op.shape[0]
    return sp.kron(sp.identity(d), sp.csr_matrix(op), format="csr")


def spost(op) -> sp.csr_matrix:
    d = op.shape[0]
    return sp.kron(sp.csr_matrix(op).T, sp.identity(d), format="csr")


def hamiltonian_term(h) -> sp.csr_matrix:
    """Superoperator of ``-i [h, rho]``."""
    return (-1j * (spre(h) - spost(h))).tocsr()


def lindblad_term(op, rate: float) -> sp.csr_matrix:
    """Superoperator of ``(rate/2) L(op)``."""
    if rate < 0:
        raise ValueError(f"negative Lindblad rate {rate}")
    op = sp.csr_matrix(op)
    d = op.shape[0]
    if rate == 0:
        return sp.csr_matrix((d * d, d * d), dtype=complex)
    opd = op.conj().T
    ndo = (opd @ op).tocsr()
    jump = sp.kron(op.conj(), op, format="csr")
    out = 0.5 * rate * (2 * jump - spre(ndo) - spost(ndo))
    return out.tocsr()


def rate_matrix_term(energies: np.ndarray, jump_rates: np.ndarray) -> sp.csr_matrix:
    """Liouvillian of a diagonal Hamiltonian plus incoherent jumps between its eigenstates.

    ``jump_rates[i, j]`` is the rate of ``|j> -> |i>``.  Equivalent to
    ``hamiltonian_term(diag(energies)) + sum_ij lindblad_term(|i><j|, W_ij)``
    but assembled directly: populations follow the classical rate equation
    and each coherence ``rho_kl`` decays at ``(out_k + out_l)/2``.
    """
    d = len(energies)
    w = np.array(jump_rates, dtype=float)
    np.fill_diagonal(w, 0.0)
    out_rate = w.sum(axis=0)
    k = np.tile(np.arange(d), d)
    l = np.repeat(np.arange(d), d)
    diag = -0.5 * (out_rate[k] + out_rate[l]) - 1j * (energies[k] - energies[l])
    rows, cols = np.nonzero(w)
    pop = lambda i: i * (d + 1)  # noqa: E731
    jumps = sp.csr_matrix((w[rows, cols], (pop(rows), pop(cols))), shape=(d * d, d * d))
    return (sp.diags(diag, format="csr") + jumps).tocsr()


@dataclass(frozen=True)
class Liouvillian:
    matrix: sp.csr_matrix
    variant: ModelVariant
    basis_labels: list[str]
    params_hash: str
    dims: tuple[int, ...]
    # for FULL these act on the cavity-traced resonator-TLS state
    number_op: np.ndarray | sp.spmatrix
    sigma_z_op: np.ndarray | sp.spmatrix
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))

    def triplets(self) -> np.ndarray:
        """``(row, col, re, im)`` rows for dumping."""
        m = self.matrix.tocoo()
        return np.column_stack([m.row, m.col, m.data.real, m.data.imag])


def _finish(matrix) -> sp.csr_matrix:
    m = sp.csr_matrix(matrix, dtype=complex)
    m.data[np.abs(m.data) < DROP_TOL] = 0
    m.eliminate_zeros()
    return m


def build_eliminated(
    p: SystemParams,
    basis: pol.PolaritonBasis,
    table: pol.TransitionTable,
    rates: RateSet,
) -> Liouvillian:
    """Cooling master equation on the polariton ladder.

    Every channel is a jump ``|n a> <-> |n-1 b>``: the intrinsic baths with
    rates ``Gamma0 (n_th + 1)`` down and ``Gamma0 n_th`` up, and the cavity
    with ``|A|^2 cool`` down and ``|A|^2 heat`` up.  The coherent part uses
    the unshifted polariton energies.
    """
    if table.dim != basis.dim or len(rates.gamma0) != len(table):
        raise ValueError("basis, transition table and rates are built for different ladders")
    weight = table.A**2
    down = rates.gamma0 * (rates.nth + 1) + weight * rates.gamma_cool
    up = rates.gamma0 * rates.nth + weight * rates.gamma_heat
    w = np.zeros((basis.dim, basis.dim))
    np.add.at(w, (table.lower, table.upper), down)
    np.add.at(w, (table.upper, table.lower), up)
    return Liouvillian(
        matrix=_finish(rate_matrix_term(basis.energies, w)),
        variant=ModelVariant.ELIMINATED,
        basis_labels=basis.labels,
        params_hash=p.fingerprint(),
        dims=(basis.dim,),
        number_op=pol.number_operator_in_eigenbasis(basis),
        sigma_z_op=pol.sigma_z_in_eigenbasis(basis),
        metadata={"modified_polariton_frequencies": "unshifted"},
    )


def _bare_labels(dims) -> list[str]:
    names = ["m", "s", "c"]
    grids = np.indices(dims).reshape(len(dims), -1).T
    tls = {0: "d", 1: "u"}
    out = []
    for idx in grids:
        parts = [f"{names[k]}{v}" if k != 1 else tls[int(v)] for k, v in enumerate(idx)]
        out.append(",".join(parts))
    return out


def intrinsic_channels(p: SystemParams, n_mech: int):
    """Intrinsic-bath jump operators between neighbouring excitation sectors.

    Projectors are built from numerically diagonalized eigenvectors on
    mech(n_mech) x TLS(2); matrix elements come from the same vectors, so the
    truncated top state is handled consistently.  Returns a list of
    ``(op, rate_down, rate_up)`` with ``op = |lower><upper|``.
    """
    energies, vecs, sector = pol.bare_eigensystem(p, n_mech)
    ops = build_bare_operators(p.replace(n_mech=n_mech), ModelVariant.SIMPLE)
    a = vecs.T @ ops.a.toarray() @ vecs
    sm = vecs.T @ ops.sigma_minus_bar.toarray() @ vecs
    channels = []
    for upper in range(len(energies)):
        for lower in np.flatnonzero(sector == sector[upper] - 1):
            gamma0 = a[lower, upper] ** 2 * p.gamma_m + sm[lower, upper] ** 2 * p.gamma_tau
            if gamma0 == 0:
                continue
            nth = bose_occupation(energies[upper] - energies[lower], p.kT)
            op = np.outer(vecs[:, lower], vecs[:, upper])
            channels.append((op, gamma0 * (nth + 1), gamma0 * nth))
    return channels


def build_full(p: SystemParams, ops: BareOperators) -> Liouvillian:
    """Resonator, TLS and linearized cavity with a zero-temperature cavity bath."""
    if ops.variant is not ModelVariant.FULL or ops.dims != (p.n_mech, 2, p.n_cav):
        raise ValueError(f"operators with dims {ops.dims} do not match FULL params")
    h = build_hamiltonian(p, ops, ModelVariant.FULL)
    # observables act on the resonator-TLS state left after tracing out the cavity
    reduced = build_bare_operators(p, ModelVariant.SIMPLE)
    total = hamiltonian_term(h) + lindblad_term(ops.b, p.kappa0)
    eye_cav = sp.identity(p.n_cav, format="csr")
    for op, down, up in intrinsic_channels(p, p.n_mech):
        o = sp.kron(sp.csr_matrix(op), eye_cav, format="csr")
        total = total + lindblad_term(o, down) + lindblad_term(o.T.tocsr(), up)
    return Liouvillian(
        matrix=_finish(total),
        variant=ModelVariant.FULL,
        basis_labels=_bare_labels(ops.dims),
        params_hash=p.fingerprint(),
        dims=ops.dims,
        number_op=(reduced.a_dag @ reduced.a).tocsr(),
        sigma_z_op=reduced.sigma_z_bar,
        metadata={"cavity_bath": "zero temperature"},
    )


def build_simple(p: SystemParams, ops: BareOperators) -> Liouvillian:
    """Bare-resonator cooling equation with the TLS and its coupling added by hand."""
    if ops.variant is not ModelVariant.SIMPLE:
        raise ValueError("build_simple needs SIMPLE operators")
    h = build_hamiltonian(p, ops, ModelVariant.SIMPLE)
    cool, heat = bare_rates(p)
    n_m = bose_occupation(p.omega_m, p.kT)
    n_z = bose_occupation(p.omega_z, p.kT)
    a, ad = ops.a, ops.a_dag
    sm, spl = ops.sigma_minus_bar, ops.sigma_plus_bar
    total = (
        hamiltonian_term(h)
        + lindblad_term(a, cool + p.gamma_m * (n_m + 1))
        + lindblad_term(ad, heat + p.gamma_m * n_m)
        + lindblad_term(sm, p.gamma_tau * (n_z + 1))
        + lindblad_term(spl, p.gamma_tau * n_z)
    )
    return Liouvillian(
        matrix=_finish(total),
        variant=ModelVariant.SIMPLE,
        basis_labels=_bare_labels(ops.dims),
        params_hash=p.fingerprint(),
        dims=ops.dims,
        number_op=(ad @ a).tocsr(),
        sigma_z_op=ops.sigma_z_bar,
    )


def build_liouvillian(p: SystemParams, variant: ModelVariant) -> Liouvillian:
    variant = ModelVariant(variant)
    if variant is ModelVariant.ELIMINATED:
        basis = pol.build_basis(p)
        table = pol.build_transitions(basis)
        return build_eliminated(p, basis, table, polariton_rates(p, table))
    ops = build_bare_operators(p, variant)
    if variant is ModelVariant.FULL:
        return build_full(p, ops)
    return build_simple(p, ops)
