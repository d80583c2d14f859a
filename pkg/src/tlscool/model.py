"""Physical parameters and bare operators for the resonator-TLS-cavity system.

Units: hbar = 1 and every frequency or rate is expressed in units of the
mechanical frequency, so ``omega_m`` is 1.0 unless deliberately changed.

Tensor ordering of the bare product space is fixed as (mech, TLS, cav).  The
TLS basis is (down, up) in the rotated frame, so ``sigma_z_bar = diag(-1, +1)``.
"""
from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


class ModelVariant(str, enum.Enum):
    FULL = "full"
    ELIMINATED = "eliminated"
    SIMPLE = "simple"


class ParamError(ValueError):
    """Raised for parameter sets that cannot be simulated."""


class RegimeWarning(UserWarning):
    """Parameters are accepted but outside a regime an approximation assumes."""


MIN_TRUNCATION = 2


@dataclass(frozen=True)
class SystemParams:
    """All inputs of a single simulation point.

    The TLS is specified either by ``(omega_z, lambda_bar)`` or by the
    double-well path ``(delta_z, delta_x, lam)``; ``validate_params`` derives
    the former from the latter.
    """

    omega_z: float | None = 1.0
    lambda_bar: float | None = 0.05
    delta_z: float | None = None
    delta_x: float | None = None
    lam: float | None = None
    g0: float = 0.05
    kappa0: float = 0.15
    delta_b: float = -1.0
    gamma_m: float = 1e-6
    gamma_tau: float = 2.5e-4
    kT: float = 10.0
    n_exc: int = 40
    n_mech: int = 12
    n_cav: int = 3
    omega_m: float = 1.0
    omega_m_hz: float = 200e6

    @classmethod
    def from_double_well(cls, delta_z: float, delta_x: float, lam: float, **kw) -> "SystemParams":
        return cls(omega_z=None, lambda_bar=None, delta_z=delta_z, delta_x=delta_x, lam=lam, **kw)

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @property
    def delta_omega(self) -> float:
        return self.omega_m - self.omega_z

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParamError(f"unknown parameter(s): {sorted(unknown)}")
        return cls(**data)

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def validate_params(raw: SystemParams) -> SystemParams:
    """Check ``raw`` and return normalized parameters.

    Emits :class:`RegimeWarning` when the adiabatic-elimination condition
    (kappa0 larger than g0, gamma_m and gamma_tau) or the resolved-sideband
    condition (kappa0 < omega_m) is violated.
    """
    double_well = [raw.delta_z, raw.delta_x, raw.lam]
    direct = [raw.omega_z, raw.lambda_bar]
    has_double_well = any(v is not None for v in double_well)
    has_direct = any(v is not None for v in direct)
    if has_double_well and has_direct:
        raise ParamError(
            "give the TLS either as (omega_z, lambda_bar) or as (delta_z, delta_x, lam), not both"
        )
    if not (has_double_well or has_direct):
        raise ParamError("TLS parameters missing: need (omega_z, lambda_bar) or (delta_z, delta_x, lam)")

    if has_double_well:
        if any(v is None for v in double_well):
            raise ParamError("double-well path needs all of delta_z, delta_x, lam")
        omega_z = math.hypot(raw.delta_z, raw.delta_x)
        if omega_z <= 0:
            raise ParamError("delta_z and delta_x are both zero")
        if raw.lam < 0:
            raise ParamError("lam must be non-negative")
        lambda_bar = raw.lam * raw.delta_x / omega_z
        # normalized params carry the direct pair only, so validation is idempotent
        p = raw.replace(omega_z=omega_z, lambda_bar=abs(lambda_bar), delta_z=None, delta_x=None, lam=None)
    else:
        if any(v is None for v in direct):
            raise ParamError("direct path needs both omega_z and lambda_bar")
        p = raw

    for name in ("omega_m", "omega_z", "kappa0", "kT"):
        value = getattr(p, name)
        if not value > 0:
            raise ParamError(f"{name} must be positive, got {value}")
    for name in ("lambda_bar", "g0", "gamma_m", "gamma_tau"):
        value = getattr(p, name)
        if not value >= 0:
            raise ParamError(f"{name} must be non-negative, got {value}")
    for name in ("n_exc", "n_mech", "n_cav"):
        value = getattr(p, name)
        if int(value) != value or value < MIN_TRUNCATION:
            raise ParamError(f"{name} must be an integer >= {MIN_TRUNCATION}, got {value}")

    for w in regime_warnings(p):
        warnings.warn(w, RegimeWarning, stacklevel=2)
    return p


def regime_warnings(p: SystemParams) -> list[str]:
    out = []
    slow = {"g0": p.g0, "gamma_m": p.gamma_m, "gamma_tau": p.gamma_tau}
    for name, value in slow.items():
        if not p.kappa0 > value:
            out.append(f"kappa0={p.kappa0} does not exceed {name}={value}; adiabatic elimination is not valid")
    if not p.kappa0 < p.omega_m:
        out.append(f"kappa0={p.kappa0} >= omega_m: outside the resolved-sideband regime")
    return out


def eliminated_valid(p: SystemParams) -> bool:
    return p.kappa0 > max(p.g0, p.gamma_m, p.gamma_tau)


def destroy(n: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n, dtype=float)), 1, shape=(n, n), format="csr")


@dataclass(frozen=True)
class BareOperators:
    a: sp.csr_matrix
    sigma_minus_bar: sp.csr_matrix
    dims: tuple[int, ...]
    b: sp.csr_matrix | None = None
    variant: ModelVariant = ModelVariant.SIMPLE

    @property
    def a_dag(self):
        return self.a.conj().T.tocsr()

    @property
    def sigma_plus_bar(self):
        return self.sigma_minus_bar.conj().T.tocsr()

    @property
    def sigma_z_bar(self):
        sp_sm = self.sigma_plus_bar @ self.sigma_minus_bar
        return (2 * sp_sm - sp.identity(self.dim, format="csr")).tocsr()

    @property
    def b_dag(self):
        return None if self.b is None else self.b.conj().T.tocsr()

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))


def _kron_all(ops: list) -> sp.csr_matrix:
    out = None
    for op in ops:
        out = op if out is None else sp.kron(out, op, format="csr")
    return out.tocsr()


def build_bare_operators(p: SystemParams, variant: ModelVariant) -> BareOperators:
    variant = ModelVariant(variant)
    if variant is ModelVariant.ELIMINATED:
        raise ValueError("the eliminated variant lives in the polariton basis; use polariton.build_basis")
    # TLS basis (down, up): sigma_minus = |down><up|
    sm = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    dims = [p.n_mech, 2] + ([p.n_cav] if variant is ModelVariant.FULL else [])
    eye = [sp.identity(d, format="csr") for d in dims]

    def place(op, slot):
        ops = list(eye)
        ops[slot] = op
        return _kron_all(ops)

    a = place(destroy(p.n_mech), 0)
    sigma_minus = place(sm, 1)
    b = place(destroy(p.n_cav), 2) if variant is ModelVariant.FULL else None
    return BareOperators(a=a, sigma_minus_bar=sigma_minus, b=b, dims=tuple(dims), variant=variant)


def build_hamiltonian(p: SystemParams, ops: BareOperators, variant: ModelVariant) -> sp.csr_matrix:
    """Resonator-TLS Jaynes-Cummings Hamiltonian, plus the linearized cavity for FULL."""
    variant = ModelVariant(variant)
    a, ad = ops.a, ops.a_dag
    sm, spl = ops.sigma_minus_bar, ops.sigma_plus_bar
    h = p.omega_m * (ad @ a) + 0.5 * p.omega_z * ops.sigma_z_bar + p.lambda_bar * (a @ spl + ad @ sm)
    if variant is ModelVariant.FULL:
        if ops.b is None:
            raise ValueError("FULL Hamiltonian needs cavity operators")
        b, bd = ops.b, ops.b_dag
        h = h - p.delta_b * (bd @ b) + p.g0 * ((a + ad) @ (b + bd))
    elif variant is not ModelVariant.SIMPLE:
        raise ValueError(f"no bare Hamiltonian for variant {variant}")
    return sp.csr_matrix(h)
