"""Closed-form rates and occupations.

Cavity-induced rates are Lorentzians in the transition frequency ``w``::

    cool(w) = g0**2 kappa0 / (kappa0**2/4 + (w + delta_b)**2)
    heat(w) = g0**2 kappa0 / (kappa0**2/4 + (w - delta_b)**2)

so that with the red-detuned drive (``delta_b = -omega_m``) cooling peaks at
``w = omega_m``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemParams
from .polariton import TransitionTable

DISPERSIVE_GATE = 4.0


def bose_occupation(omega, kT: float):
    """Thermal occupation ``1/(exp(omega/kT) - 1)``; ``omega`` must be positive."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError(f"non-positive transition frequency {omega.min()} (level inversion)")
    if not kT > 0:
        raise ValueError(f"kT must be positive, got {kT}")
    x = omega / kT
    # exp(-x)/(1-exp(-x)) stays finite as kT -> 0
    with np.errstate(over="ignore"):
        out = np.exp(-x) / -np.expm1(-x)
    return out if out.ndim else float(out)


def cavity_rates(omega, p: SystemParams):
    """(cooling, heating) rates of a transition at frequency ``omega``."""
    omega = np.asarray(omega, dtype=float)
    num = p.g0**2 * p.kappa0
    half_width2 = p.kappa0**2 / 4
    cool = num / (half_width2 + (omega + p.delta_b) ** 2)
    heat = num / (half_width2 + (omega - p.delta_b) ** 2)
    if cool.ndim == 0:
        return float(cool), float(heat)
    return cool, heat


def bare_rates(p: SystemParams) -> tuple[float, float]:
    return cavity_rates(p.omega_m, p)


def bare_steady_occupation(p: SystemParams) -> float:
    """Phonon number of a bare resonator under cavity cooling."""
    cool, heat = bare_rates(p)
    n_th = bose_occupation(p.omega_m, p.kT)
    denom = (cool - heat) + p.gamma_m
    if not denom > 0:
        raise ValueError(f"net heating: (cool - heat) + gamma_m = {denom}")
    return (heat + p.gamma_m * n_th) / denom


@dataclass(frozen=True)
class RateSet:
    """Per-transition rates, aligned with the rows of a TransitionTable."""

    gamma_cool: np.ndarray  # cavity rate before the |A|^2 weight
    gamma_heat: np.ndarray
    gamma0: np.ndarray
    nth: np.ndarray

    @property
    def intrinsic_down(self) -> np.ndarray:
        return self.gamma0 * (self.nth + 1)

    @property
    def intrinsic_up(self) -> np.ndarray:
        return self.gamma0 * self.nth


def polariton_rates(p: SystemParams, table: TransitionTable) -> RateSet:
    cool, heat = cavity_rates(table.omega, p)
    gamma0 = table.A**2 * p.gamma_m + table.sigma**2 * p.gamma_tau
    nth = bose_occupation(table.omega, p.kT)
    return RateSet(gamma_cool=cool, gamma_heat=heat, gamma0=gamma0, nth=nth)


@dataclass(frozen=True)
class DispersiveSummary:
    mixing: float  # lambda_bar / delta_omega
    tls_cooling_rate: float
    n_ss: float
    sigma_z: float
    note: str = "first-order dispersive estimate; sigma_z from two-level rate balance"


class DispersiveGateError(ValueError):
    pass


def dispersive_predictions(p: SystemParams, cavity_frequency: str = "mechanical") -> DispersiveSummary:
    """Analytic steady state deep in the dispersive regime.

    The TLS picks up a cavity cooling channel of strength
    ``cool(w) * (lambda_bar/delta_omega)**2`` and otherwise relaxes through
    its own bath, which gives the polarization
    ``-(G + gamma_tau) / (G + gamma_tau (2 n_z + 1))``.  The resonator keeps
    its bare occupation.

    ``cavity_frequency`` picks where the cavity Lorentzian is evaluated:
    ``"mechanical"`` (w = omega_m, the peak rate) or ``"tls"`` (w = omega_z,
    the frequency the dressed TLS actually emits at).
    """
    dw = p.omega_m - p.omega_z
    if abs(dw) < DISPERSIVE_GATE * p.lambda_bar:
        raise DispersiveGateError(
            f"|omega_m - omega_z| = {abs(dw):.4g} < {DISPERSIVE_GATE:g} * lambda_bar = "
            f"{DISPERSIVE_GATE * p.lambda_bar:.4g}: not dispersive"
        )
    eps = p.lambda_bar / dw if p.lambda_bar else 0.0
    if cavity_frequency == "mechanical":
        cool, _ = bare_rates(p)
    elif cavity_frequency == "tls":
        cool, _ = cavity_rates(p.omega_z, p)
    else:
        raise ValueError(f"cavity_frequency must be 'mechanical' or 'tls', got {cavity_frequency!r}")
    rate = cool * eps**2
    n_z = bose_occupation(p.omega_z, p.kT)
    sigma_z = -(rate + p.gamma_tau) / (rate + p.gamma_tau * (2 * n_z + 1))
    return DispersiveSummary(
        mixing=eps,
        tls_cooling_rate=rate,
        n_ss=bare_steady_occupation(p),
        sigma_z=sigma_z,
    )
