"""Jaynes-Cummings polariton ladder of the resonator-TLS pair.

State ordering is ``[G, (1,-), (1,+), (2,-), (2,+), ...]`` with
``G = |0, down>``.  Branch index ``0`` means ``-`` and ``1`` means ``+``.
Energies are measured from the ground state.

Doublet n is spanned by ``|n, down>`` and ``|n-1, up>``::

    |n+> = cos(d/2) |n, down> + sin(d/2) |n-1, up>
    |n-> = sin(d/2) |n, down> - cos(d/2) |n-1, up>

with ``cos(d/2) = sqrt((w_t + dw) / 2 w_t)``, ``dw = omega_m - omega_z`` and
``w_t = sqrt(dw**2 + 4 lambda_bar**2 n)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelVariant, SystemParams, build_bare_operators, build_hamiltonian

MINUS, PLUS = 0, 1
BRANCH_SIGN = np.array([-1.0, 1.0])


def state_index(n: int, alpha: int) -> int:
    """Position of ``|n alpha>`` in the ordered basis (``n = 0`` is the ground state)."""
    if n == 0:
        return 0
    return 2 * n - 1 + alpha


@dataclass(frozen=True)
class PolaritonBasis:
    n_exc: int
    delta_omega: float
    omega_m: float
    lambda_bar: float
    # arrays indexed by doublet n = 0..n_exc; row 0 is the ground-state convention
    omega_t: np.ndarray
    c: np.ndarray  # c[n, alpha], coefficient on |n, down>
    s: np.ndarray  # s[n, alpha], coefficient on |n-1, up>
    energies: np.ndarray  # length 1 + 2 n_exc, ordered like the basis

    @property
    def dim(self) -> int:
        return 1 + 2 * self.n_exc

    @property
    def labels(self) -> list[str]:
        out = ["G"]
        for n in range(1, self.n_exc + 1):
            out += [f"{n}-", f"{n}+"]
        return out

    @property
    def n_of_state(self) -> np.ndarray:
        return np.concatenate([[0], np.repeat(np.arange(1, self.n_exc + 1), 2)])

    @property
    def branch_of_state(self) -> np.ndarray:
        return np.concatenate([[-1], np.tile([MINUS, PLUS], self.n_exc)])

    def eigenvectors_bare(self, n_mech: int) -> np.ndarray:
        """Columns are the basis states expressed on mech(n_mech) x TLS(2)."""
        if n_mech < self.n_exc + 1:
            raise ValueError(f"n_mech={n_mech} cannot hold {self.n_exc} doublets")
        v = np.zeros((2 * n_mech, self.dim))
        down = lambda m: 2 * m  # noqa: E731
        up = lambda m: 2 * m + 1  # noqa: E731
        v[down(0), 0] = 1.0
        for n in range(1, self.n_exc + 1):
            for alpha in (MINUS, PLUS):
                k = state_index(n, alpha)
                v[down(n), k] = self.c[n, alpha]
                v[up(n - 1), k] = self.s[n, alpha]
        return v


def _mixing(delta_omega: float, lambda_bar: float, n: np.ndarray):
    """cos(d_n/2), sin(d_n/2) and w_tn, free of cancellation for either sign of dw."""
    coupling2 = 4.0 * lambda_bar**2 * n
    omega_t = np.sqrt(delta_omega**2 + coupling2)
    cos_half = np.empty_like(omega_t)
    sin_half = np.empty_like(omega_t)
    degenerate = omega_t == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if delta_omega >= 0:
            plus = omega_t + delta_omega
            minus = np.where(plus > 0, coupling2 / plus, 0.0)
        else:
            minus = omega_t - delta_omega
            plus = np.where(minus > 0, coupling2 / minus, 0.0)
        cos_half = np.sqrt(plus / (2 * omega_t))
        sin_half = np.sqrt(minus / (2 * omega_t))
    # w_t = 0 only without coupling at dw = 0; any basis diagonalizes H there and
    # the uncoupled one (d = 0, the dw -> 0+ limit) keeps the bare dissipators exact
    cos_half[degenerate] = 1.0
    sin_half[degenerate] = 0.0
    return cos_half, sin_half, omega_t


def build_basis(p: SystemParams, n_exc: int | None = None) -> PolaritonBasis:
    n_exc = p.n_exc if n_exc is None else n_exc
    n = np.arange(0, n_exc + 1, dtype=float)
    dw = p.omega_m - p.omega_z
    cos_half, sin_half, omega_t = _mixing(dw, p.lambda_bar, n)

    c = np.empty((n_exc + 1, 2))
    s = np.empty((n_exc + 1, 2))
    c[:, PLUS], s[:, PLUS] = cos_half, sin_half
    c[:, MINUS], s[:, MINUS] = sin_half, -cos_half
    # doublet 0 is the ground state alone
    c[0, :], s[0, :] = 1.0, 0.0
    omega_t[0] = 0.0

    energies = np.zeros(1 + 2 * n_exc)
    for alpha in (MINUS, PLUS):
        energies[1 + alpha :: 2] = n[1:] * p.omega_m + (BRANCH_SIGN[alpha] * omega_t[1:] - dw) / 2
    return PolaritonBasis(
        n_exc=n_exc,
        delta_omega=dw,
        omega_m=p.omega_m,
        lambda_bar=p.lambda_bar,
        omega_t=omega_t,
        c=c,
        s=s,
        energies=energies,
    )


@dataclass(frozen=True)
class TransitionTable:
    """All downward transitions ``|n alpha> -> |(n-1) beta>``.

    One entry per transition; for ``n = 1`` the only lower state is G and
    ``beta`` is recorded as -1.
    """

    n: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    upper: np.ndarray  # basis index of |n alpha>
    lower: np.ndarray  # basis index of |(n-1) beta>
    A: np.ndarray
    sigma: np.ndarray
    omega: np.ndarray
    dim: int

    def __len__(self) -> int:
        return len(self.n)

    def lookup(self, n: int, alpha: int, beta: int) -> int:
        """Row of the transition; ``beta`` is ignored for ``n = 1``."""
        mask = (self.n == n) & (self.alpha == alpha)
        if n > 1:
            mask &= self.beta == beta
        (idx,) = np.flatnonzero(mask)
        return int(idx)

    def to_rows(self) -> list[dict]:
        sign = {-1: "G", MINUS: "-", PLUS: "+"}
        return [
            {
                "n": int(self.n[k]),
                "alpha": sign[int(self.alpha[k])],
                "beta": sign[int(self.beta[k])],
                "A": float(self.A[k]),
                "sigma": float(self.sigma[k]),
                "omega": float(self.omega[k]),
            }
            for k in range(len(self))
        ]


def build_transitions(basis: PolaritonBasis) -> TransitionTable:
    rows = []
    for n in range(1, basis.n_exc + 1):
        betas = [-1] if n == 1 else [MINUS, PLUS]
        for alpha in (MINUS, PLUS):
            for beta in betas:
                lower_beta = MINUS if beta == -1 else beta
                c_lo, s_lo = basis.c[n - 1, lower_beta], basis.s[n - 1, lower_beta]
                A = np.sqrt(n) * c_lo * basis.c[n, alpha] + np.sqrt(n - 1) * s_lo * basis.s[n, alpha]
                sig = c_lo * basis.s[n, alpha]
                upper = state_index(n, alpha)
                lower = state_index(n - 1, lower_beta)
                omega = basis.energies[upper] - basis.energies[lower]
                rows.append((n, alpha, beta, upper, lower, A, sig, omega))
    cols = list(zip(*rows))
    as_int = lambda x: np.array(x, dtype=int)  # noqa: E731
    return TransitionTable(
        n=as_int(cols[0]),
        alpha=as_int(cols[1]),
        beta=as_int(cols[2]),
        upper=as_int(cols[3]),
        lower=as_int(cols[4]),
        A=np.array(cols[5]),
        sigma=np.array(cols[6]),
        omega=np.array(cols[7]),
        dim=basis.dim,
    )


def _operator_from_table(table: TransitionTable, values: np.ndarray) -> np.ndarray:
    op = np.zeros((table.dim, table.dim))
    op[table.lower, table.upper] = values
    return op


def mechanical_operator_in_eigenbasis(table: TransitionTable) -> np.ndarray:
    """Matrix of ``a`` in the polariton basis."""
    return _operator_from_table(table, table.A)


def sigma_minus_in_eigenbasis(table: TransitionTable) -> np.ndarray:
    return _operator_from_table(table, table.sigma)


def number_operator_in_eigenbasis(basis: PolaritonBasis) -> np.ndarray:
    """``a^dag a`` in the polariton basis, including within-doublet off-diagonals."""
    return np.diag(basis.n_of_state.astype(float)) - tls_up_projector_in_eigenbasis(basis)


def sigma_z_in_eigenbasis(basis: PolaritonBasis) -> np.ndarray:
    return 2.0 * tls_up_projector_in_eigenbasis(basis) - np.eye(basis.dim)


def tls_up_projector_in_eigenbasis(basis: PolaritonBasis) -> np.ndarray:
    """``sigma_plus sigma_minus``: <n a|up><up|n a'> = s_a s_a'."""
    out = np.zeros((basis.dim, basis.dim))
    for n in range(1, basis.n_exc + 1):
        idx = [state_index(n, MINUS), state_index(n, PLUS)]
        sv = basis.s[n]
        out[np.ix_(idx, idx)] = np.outer(sv, sv)
    return out


# --- dense diagonalization oracle ------------------------------------------


def bare_eigensystem(p: SystemParams, n_mech: int):
    """Diagonalize the resonator-TLS Hamiltonian on mech(n_mech) x TLS(2) numerically.

    Returns ``(energies, vectors, sector)`` for all ``2 n_mech`` states, sorted
    by excitation number and then energy, with the ground-state energy at zero.
    Complete doublets are phase-fixed to the analytic convention
    (``c >= 0`` on both branches).  The last sector holds only the truncated
    state ``|n_mech - 1, up>``.
    """
    q = p.replace(n_mech=n_mech)
    ops = build_bare_operators(q, ModelVariant.SIMPLE)
    h = build_hamiltonian(q, ops, ModelVariant.SIMPLE).toarray()
    number = (ops.a_dag @ ops.a + ops.sigma_plus_bar @ ops.sigma_minus_bar).toarray()
    # separate excitation-number sectors so eigh cannot mix accidental degeneracies
    shift = 10.0 * np.sqrt(2.0) * p.omega_m
    vals, vecs = np.linalg.eigh(h + shift * number)
    sector = np.rint(np.einsum("ij,ik,kj->j", vecs, number, vecs)).astype(int)
    vals = vals - shift * sector
    order = np.lexsort((vals, sector))
    vals, vecs, sector = vals[order], vecs[:, order], sector[order]

    for k in range(len(vals)):
        n = sector[k]
        v = vecs[:, k]
        if n == 0 or n == n_mech:
            ref = v[np.argmax(np.abs(v))]
        else:
            down, up = v[2 * n], v[2 * (n - 1) + 1]
            is_plus = k > 0 and sector[k - 1] == n
            # c_+ >= 0, s_+ >= 0 ; c_- >= 0, s_- <= 0
            ref = down if abs(down) > abs(up) else (up if is_plus else -up)
        vecs[:, k] = v * np.sign(ref)
    return vals - vals[0], vecs, sector


def diagonalize_bare(p: SystemParams, n_mech: int, n_exc: int | None = None):
    """Numerical counterpart of :func:`build_basis`: ``(energies, vectors)``
    for the ground state and doublets ``1..n_exc`` (default ``n_mech - 1``)."""
    n_exc = n_mech - 1 if n_exc is None else n_exc
    if n_exc > n_mech - 1:
        raise ValueError("doublets above n_mech - 1 are truncated")
    energies, vectors, _ = bare_eigensystem(p, n_mech)
    dim = 1 + 2 * n_exc
    return energies[:dim], vectors[:, :dim]


def oracle_operators(p: SystemParams, n_mech: int, n_exc: int):
    """``(a, sigma_minus)`` projected onto numerically found eigenvectors."""
    energies, v = diagonalize_bare(p, n_mech, n_exc)
    ops = build_bare_operators(p.replace(n_mech=n_mech), ModelVariant.SIMPLE)
    a = v.T @ ops.a.toarray() @ v
    sm = v.T @ ops.sigma_minus_bar.toarray() @ v
    return energies, a, sm


__all__ = [
    "MINUS",
    "PLUS",
    "PolaritonBasis",
    "TransitionTable",
    "build_basis",
    "bare_eigensystem",
    "build_transitions",
    "diagonalize_bare",
    "mechanical_operator_in_eigenbasis",
    "number_operator_in_eigenbasis",
    "oracle_operators",
    "sigma_minus_in_eigenbasis",
    "sigma_z_in_eigenbasis",
    "state_index",
    "tls_up_projector_in_eigenbasis",
]
