"""Adiabatic and order-2 superadiabatic frame diagnostics.

The instantaneous eigenbasis of the RWA Hamiltonian is parameterized by the
mixing angle theta1 = (1/2) atan2(Omega, Delta); its time derivative is the
nonadiabatic coupling.  One further diagonalization layer gives the
superadiabatic splitting eps2 and coupling theta2_dot, which localize the
strongly nonadiabatic regions of a drive envelope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .shapes import PulseShape, envelope, envelope_derivatives

__all__ = [
    "FrameDiagnostics",
    "MidpointAsymptotic",
    "DegeneratePointError",
    "mixing_angle",
    "splitting",
    "nonadiabatic_coupling",
    "superadiabatic_quantities",
    "theta2_dot_chirp_free",
    "midpoint_asymptotic",
    "diagnose",
]

# gamma1 above this marks the curvature-controlled asymptotic regime.
REGIME_GAMMA = 10.0

# |Omega(T/2)| / |Delta| must stay below this for the midpoint asymptotic
# expansion to be trusted.
ASYMPTOTIC_RATIO = 0.1


class DegeneratePointError(ValueError):
    """Frame quantities requested at Omega = Delta = 0 where the frame is singular."""


def mixing_angle(omega, delta):
    """theta1 = (1/2) atan2(Omega, Delta); lies in [0, pi/4] for Omega, Delta >= 0."""
    return 0.5 * np.arctan2(omega, delta)


def splitting(omega, delta):
    """Adiabatic splitting eps1 = sqrt(Omega^2 + Delta^2) = eps+ - eps-."""
    return np.hypot(omega, delta)


def nonadiabatic_coupling(omega, omega_dot, delta, delta_dot=0.0):
    """theta1_dot = (Omega' Delta - Omega Delta') / (2 (Omega^2 + Delta^2)).

    Returns 0 by convention at the degenerate point Omega = Delta = 0.
    """
    omega = np.asarray(omega, dtype=float)
    den = 2.0 * (omega**2 + np.asarray(delta, dtype=float) ** 2)
    num = np.asarray(omega_dot) * delta - omega * np.asarray(delta_dot)
    out = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def superadiabatic_quantities(eps1, eps1_dot, theta1_dot, theta1_ddot):
    """Order-2 splitting and coupling from the adiabatic-frame quantities.

    eps2 = sqrt(eps1^2 + 4 theta1_dot^2)
    theta2_dot = (2 theta1_ddot eps1 + 2 theta1_dot eps1_dot) / eps2^2
    """
    eps1 = np.asarray(eps1, dtype=float)
    theta1_dot = np.asarray(theta1_dot, dtype=float)
    eps2_sq = eps1**2 + 4.0 * theta1_dot**2
    if np.any(eps2_sq == 0):
        raise DegeneratePointError(
            "eps1 and theta1_dot both vanish: superadiabatic frame undefined"
        )
    theta2_dot = (2.0 * np.asarray(theta1_ddot) * eps1
                  + 2.0 * theta1_dot * np.asarray(eps1_dot)) / eps2_sq
    eps2 = np.sqrt(eps2_sq)
    if eps2.ndim == 0:
        return float(eps2), float(theta2_dot)
    return eps2, theta2_dot


def theta2_dot_chirp_free(omega, omega_dot, omega_ddot, delta):
    """Chirp-free closed form: Delta (eps1^2 Omega'' - Omega Omega'^2) / (eps1^3 eps2^2)."""
    omega = np.asarray(omega, dtype=float)
    eps1_sq = omega**2 + np.asarray(delta, dtype=float) ** 2
    theta1_dot = nonadiabatic_coupling(omega, omega_dot, delta)
    num = delta * (eps1_sq * np.asarray(omega_ddot) - omega * np.asarray(omega_dot) ** 2)
    out = num / (eps1_sq**1.5 * (eps1_sq + 4.0 * np.asarray(theta1_dot) ** 2))
    return float(out) if out.ndim == 0 else out


def _chirp_free_frame(omega, omega_dot, omega_ddot, delta):
    """(eps1, eps1_dot, theta1_dot, theta1_ddot) for constant detuning."""
    eps1 = splitting(omega, delta)
    eps1_sq = eps1 * eps1
    eps1_dot = omega * omega_dot / eps1
    theta1_dot = nonadiabatic_coupling(omega, omega_dot, delta)
    theta1_ddot = delta * (eps1_sq * omega_ddot - 2.0 * omega * omega_dot**2) / (
        2.0 * eps1_sq * eps1_sq)
    return eps1, eps1_dot, theta1_dot, theta1_ddot


@dataclass(frozen=True)
class MidpointAsymptotic:
    """Midpoint estimate of the superadiabatic coupling and its regime."""

    theta2_dot: float
    regime: str                  # "curvature_controlled" or "slope_suppressed"
    gamma1: float                # adiabatic margin eps1/|theta1_dot| at T/2
    omega_over_delta: float      # |Omega(T/2)| / |Delta|
    in_asymptotic_regime: bool   # omega_over_delta < ASYMPTOTIC_RATIO


def suppression_factor(gamma1: float) -> float:
    """gamma1^2 / (gamma1^2 + 4); tends to 1 in the curvature-controlled regime."""
    if math.isinf(gamma1):
        return 1.0
    return gamma1**2 / (gamma1**2 + 4.0)


def midpoint_asymptotic(shape: PulseShape, delta: float) -> MidpointAsymptotic:
    """Near-center estimate theta2_dot ~ sgn(D) [O'' - (O/D^2) O'^2] / D^2 * g^2/(g^2+4).

    Valid where |Omega(T/2)| << |Delta|; the returned flag reports whether
    the ratio check (< 0.1) held.
    """
    if delta == 0:
        raise ValueError("midpoint asymptotic undefined at zero detuning")
    t_mid = shape.duration / 2.0
    om = float(envelope(shape, t_mid))
    d1, d2 = envelope_derivatives(shape, t_mid)
    ratio = abs(om) / abs(delta)
    theta1_dot = nonadiabatic_coupling(om, d1, delta)
    gamma1 = math.inf if theta1_dot == 0 else float(
        splitting(om, delta) / abs(theta1_dot))
    value = (math.copysign(1.0, delta)
             * (d2 - om * d1**2 / delta**2) / delta**2
             * suppression_factor(gamma1))
    regime = "curvature_controlled" if gamma1 > REGIME_GAMMA else "slope_suppressed"
    return MidpointAsymptotic(value, regime, gamma1, ratio,
                              ratio < ASYMPTOTIC_RATIO)


@dataclass(frozen=True)
class FrameDiagnostics:
    """Frame quantities tabulated on a uniform interior time grid.

    Angles in rad, rates in rad/ns; gamma1 = eps1/|theta1_dot| is
    dimensionless and +inf where the coupling vanishes.  ``degenerate``
    marks grids containing singular frame points (Omega = Delta = 0),
    where all couplings are reported as 0 by convention.
    """

    t: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    eps1: np.ndarray
    theta1: np.ndarray
    theta1_dot: np.ndarray
    eps2: np.ndarray
    theta2_dot: np.ndarray
    gamma1: np.ndarray
    edge_discontinuity: bool
    degenerate: bool = False
    shape_id: str = ""


def diagnose(shape: PulseShape, delta: float, n_points: int = 801) -> FrameDiagnostics:
    """Tabulate all frame quantities for a shape at constant detuning.

    The grid holds the midpoints of n_points equal slots, so the
    discontinuous edges of the rectangular and power-law families are
    excluded; those families are flagged with ``edge_discontinuity``.
    """
    if n_points < 16:
        raise ValueError("n_points must be at least 16")
    T = shape.duration
    t = (np.arange(n_points) + 0.5) * (T / n_points)
    om = envelope(shape, t)
    d1, d2 = envelope_derivatives(shape, t)
    eps1 = splitting(om, delta)
    theta1 = mixing_angle(om, delta)
    theta1_dot = nonadiabatic_coupling(om, d1, delta)
    ok = eps1 > 0
    eps1_safe = np.where(ok, eps1, 1.0)
    eps1_dot = om * d1 / eps1_safe
    theta1_ddot = delta * (eps1_safe**2 * d2 - 2.0 * om * d1**2) / (2.0 * eps1_safe**4)
    eps2_sq = eps1**2 + 4.0 * theta1_dot**2
    eps2 = np.sqrt(eps2_sq)
    theta2_dot = np.where(
        ok,
        (2.0 * theta1_ddot * eps1 + 2.0 * theta1_dot * eps1_dot)
        / np.where(eps2_sq > 0, eps2_sq, 1.0),
        0.0,
    )
    gamma1 = np.where(np.abs(theta1_dot) > 0,
                      eps1 / np.where(np.abs(theta1_dot) > 0,
                                      np.abs(theta1_dot), 1.0),
                      np.inf)
    return FrameDiagnostics(
        t=t,
        eps_plus=0.5 * eps1,
        eps_minus=-0.5 * eps1,
        eps1=eps1,
        theta1=theta1,
        theta1_dot=theta1_dot,
        eps2=eps2,
        theta2_dot=theta2_dot,
        gamma1=gamma1,
        edge_discontinuity=shape.family in ("rectangular", "powerlaw"),
        degenerate=bool(np.any(~ok)),
        shape_id=shape.describe(),
    )
