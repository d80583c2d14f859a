"""Steady states of a Liouvillian and the observables derived from them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .liouvillian import Liouvillian, build_liouvillian, trace_functional, unvec
from .model import ModelVariant, SystemParams

NEGATIVITY_TOL = 1e-8
DEGENERACY_TOL = 1e-10
RESIDUAL_TOL = 1e-10


class SteadyStateError(RuntimeError):
    pass


class DegenerateSteadyState(SteadyStateError):
    pass


@dataclass
class SteadyState:
    rho: np.ndarray
    n_ss: float
    sigma_z_ss: float
    populations: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    variant: ModelVariant | None = None

    @property
    def rho_reduced(self) -> np.ndarray:
        """Resonator-TLS state (cavity traced out for FULL)."""
        return self.diagnostics.get("rho_reduced", self.rho)


def _frob(m: sp.spmatrix) -> float:
    return float(np.sqrt(np.sum(np.abs(m.data) ** 2)))


def _scale(m: sp.spmatrix) -> float:
    return float(np.abs(m.diagonal()).max()) or 1.0


def solve_lu(mat: sp.csr_matrix, d: int) -> tuple[np.ndarray, int]:
    """Sparse LU with the first population equation replaced by the trace condition."""
    t = sp.csr_matrix(trace_functional(d)[None, :])
    # row 0 is the d/dt rho_00 equation, redundant given trace preservation
    system = sp.vstack([t, mat[1:]], format="csc")
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    try:
        x = spla.splu(system).solve(rhs)
    except RuntimeError as exc:
        raise DegenerateSteadyState(f"trace-constrained system is singular: {exc}") from exc
    return x, 1


def solve_regularized(mat: sp.csr_matrix, d: int) -> tuple[np.ndarray, int]:
    """Solve ``(L + s |u>><<1|) x = s |u>>`` with ``u = vec(I)/d``; ``<<1|x>> = 1`` follows."""
    t = trace_functional(d)
    u = t / d
    s = _scale(mat)
    idx = np.flatnonzero(t)
    rank_one = sp.csr_matrix(
        (np.full(idx.size**2, s / d), (np.repeat(idx, idx.size), np.tile(idx, idx.size))),
        shape=mat.shape,
    )
    x = spla.splu((mat + rank_one).tocsc()).solve(s * u.astype(complex))
    return x, 1


def solve_inverse_iteration(mat: sp.csr_matrix, d: int, max_iter: int = 50, tol: float = 1e-14):
    """Null vector by inverse iteration with a small negative shift."""
    shift = -1e-9 * _scale(mat)
    lu = spla.splu((mat - shift * sp.identity(mat.shape[0], format="csc")).tocsc())
    t = trace_functional(d)
    x = t.astype(complex) / d
    for it in range(1, max_iter + 1):
        y = lu.solve(x)
        y /= t @ y
        if np.linalg.norm(y - x) <= tol * np.linalg.norm(y):
            return y, it
        x = y
    return x, max_iter


SOLVERS = {
    "lu": solve_lu,
    "regularized": solve_regularized,
    "inverse": solve_inverse_iteration,
}


def null_space_gap(mat: sp.csr_matrix) -> tuple[float, float]:
    """Magnitudes of the two eigenvalues of ``mat`` closest to zero."""
    shift = -1e-9 * _scale(mat)
    vals = spla.eigs(mat.tocsc(), k=2, sigma=shift, which="LM", return_eigenvectors=False, tol=1e-10)
    mags = np.sort(np.abs(vals))
    return float(mags[0]), float(mags[1])


def _positive_part(rho: np.ndarray) -> tuple[np.ndarray, float]:
    w, v = np.linalg.eigh(rho)
    min_eig = float(w.min())
    if min_eig < -NEGATIVITY_TOL:
        raise SteadyStateError(f"steady state has eigenvalue {min_eig:.3g} below -{NEGATIVITY_TOL:g}")
    if min_eig < 0:
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho /= np.trace(rho).real
    return rho, min_eig


def partial_trace_last(rho: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    keep = int(np.prod(dims[:-1]))
    last = dims[-1]
    r = rho.reshape(keep, last, keep, last)
    return np.einsum("ikjk->ij", r)


def solve_steady(
    L: Liouvillian,
    method: str = "lu",
    check_degeneracy: bool = True,
) -> SteadyState:
    """Unit-trace steady state of ``L`` with observables and diagnostics.

    ``method`` selects the linear algebra ("lu", "regularized" or
    "inverse"); when "lu" leaves a residual above tolerance the inverse
    iteration is tried before giving up.
    """
    mat = L.matrix
    d = L.dim
    diagnostics: dict = {"method": method}
    if check_degeneracy:
        first, second = null_space_gap(mat)
        diagnostics["gap"] = second
        if second < DEGENERACY_TOL * _scale(mat):
            raise DegenerateSteadyState(
                f"null space is degenerate: two eigenvalues |{first:.3g}|, |{second:.3g}| near zero"
            )

    x, iterations = SOLVERS[method](mat, d)
    norm_l = _frob(mat)
    residual = np.linalg.norm(mat @ x) / norm_l
    if not residual <= RESIDUAL_TOL and method == "lu":
        x, iterations = solve_inverse_iteration(mat, d)
        diagnostics["method"] = "inverse"
        residual = np.linalg.norm(mat @ x) / norm_l
    if not residual <= RESIDUAL_TOL:
        raise SteadyStateError(f"solver did not converge: residual {residual:.3g}")

    rho = unvec(x)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)
    rho, min_eig = _positive_part(rho)

    diagnostics.update(
        residual=float(np.linalg.norm(mat @ rho.ravel(order="F")) / norm_l),
        min_eig=min_eig,
        trace_err=float(abs(np.trace(rho) - 1)),
        iterations=iterations,
    )
    n_ss, sigma_z_ss, reduced = observables(rho, L)
    if L.variant is ModelVariant.FULL:
        diagnostics["rho_reduced"] = reduced
    return SteadyState(
        rho=rho,
        n_ss=n_ss,
        sigma_z_ss=sigma_z_ss,
        populations=np.real(np.diag(rho)).copy(),
        diagnostics=diagnostics,
        variant=L.variant,
    )


def expectation(rho: np.ndarray, op) -> float:
    """``Re tr(rho op)``."""
    if sp.issparse(op):
        op = op.toarray()
    return float(np.real(np.sum(op.T * rho)))


def observables(rho: np.ndarray, L: Liouvillian):
    """``(n_ss, sigma_z_ss, reduced_rho)`` with operators in the basis of ``rho``.

    For FULL the cavity is traced out first and the resonator-TLS operators
    act on the reduced state.
    """
    if rho.shape != (L.dim, L.dim):
        raise ValueError(f"state of shape {rho.shape} does not match Liouvillian dim {L.dim}")
    reduced = partial_trace_last(rho, L.dims) if L.variant is ModelVariant.FULL else rho
    return expectation(reduced, L.number_op), expectation(reduced, L.sigma_z_op), reduced


def steady_state(p: SystemParams, variant: ModelVariant, **kw) -> SteadyState:
    return solve_steady(build_liouvillian(p, variant), **kw)


@dataclass
class ConvergenceReport:
    variant: ModelVariant
    base: dict
    refined: dict
    rel_change_n: float
    rel_change_sz: float
    tol: float = 1e-3

    @property
    def passed(self) -> bool:
        return self.rel_change_n < self.tol and self.rel_change_sz < self.tol

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def convergence_check(p: SystemParams, variant: ModelVariant, tol: float = 1e-3) -> ConvergenceReport:
    """Re-solve with doubled truncations and report the relative change."""
    variant = ModelVariant(variant)
    if variant is ModelVariant.ELIMINATED:
        base = {"n_exc": p.n_exc}
        refined = {"n_exc": 2 * p.n_exc}
    elif variant is ModelVariant.FULL:
        base = {"n_mech": p.n_mech, "n_cav": p.n_cav}
        refined = {"n_mech": 2 * p.n_mech, "n_cav": 2 * p.n_cav}
    else:
        base = {"n_mech": p.n_mech}
        refined = {"n_mech": 2 * p.n_mech}
    coarse = steady_state(p.replace(**base), variant, check_degeneracy=False)
    fine = steady_state(p.replace(**refined), variant, check_degeneracy=False)
    return ConvergenceReport(
        variant=variant,
        base=base,
        refined=refined,
        rel_change_n=_rel(coarse.n_ss, fine.n_ss),
        rel_change_sz=_rel(coarse.sigma_z_ss, fine.sigma_z_ss),
        tol=tol,
    )
