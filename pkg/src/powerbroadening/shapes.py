"""Parametric drive envelopes: families, closed-form areas and derivatives,
and sampling to discrete schedules.

All envelopes are real and non-negative, live on [0, duration] with center
duration/2, and vanish outside that window.  ``omega0`` is the edge value for
the quadratic and power-law families (so a quadratic pulse with beta < 0
peaks above omega0 mid-pulse) and the peak value for the bell-shaped ones.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .units import mhz_to_rad_ns, rad_ns_to_mhz

__all__ = [
    "PulseShape",
    "DriveSchedule",
    "ShapeError",
    "EdgeDerivativeError",
    "envelope",
    "envelope_derivatives",
    "pulse_area",
    "amplitude_for_area",
    "with_area",
    "sample",
    "shape_to_dict",
    "shape_from_dict",
    "load_shape",
    "save_shape",
]

ANALYTIC_FAMILIES = ("rectangular", "quadratic", "powerlaw", "gaussian", "sech")
FAMILIES = ANALYTIC_FAMILIES + ("sampled",)

# Maximum fraction of the full-line area a truncated Gaussian/sech may lose
# to its tails outside [0, T]; enforced at construction.
TRUNCATION_TAIL_LIMIT = 1e-4

QUADRATURE_REL_TOL = 1e-10


class ShapeError(ValueError):
    """Invalid pulse-shape parameters."""


class EdgeDerivativeError(ValueError):
    """Derivative requested at a discontinuous envelope edge."""


def _gaussian_tail_fraction(sigma: float, duration: float) -> float:
    return math.erfc(duration / (2.0 * sigma * math.sqrt(2.0)))


def _sech_tail_fraction(tau: float, duration: float) -> float:
    # integral of sech is the gudermannian; full-line area is pi*tau
    gd = math.atan(math.sinh(duration / (2.0 * tau)))
    return 1.0 - 2.0 * gd / math.pi


@dataclass(frozen=True)
class PulseShape:
    """A parametric drive envelope.

    Attributes
    ----------
    family : str
        One of "rectangular", "quadratic", "powerlaw", "gaussian", "sech",
        "sampled".
    omega0 : float
        Peak parameter in rad/ns (edge value for quadratic/powerlaw; scale
        factor for sampled values).
    duration : float
        Pulse duration T in ns.
    beta : float, optional
        Concavity parameter of the quadratic family, beta <= 1.
    p : int, optional
        Half the time exponent of the power-law family, p >= 0.
    sigma, tau : float, optional
        Width parameters (ns) of the Gaussian and sech families.
    values : ndarray, optional
        Unit-amplitude samples of the "sampled" family, one per equal slot.
    """

    family: str
    omega0: float
    duration: float
    beta: Optional[float] = None
    p: Optional[int] = None
    sigma: Optional[float] = None
    tau: Optional[float] = None
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ShapeError(f"unknown family {self.family!r}")
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise ShapeError(f"duration must be positive, got {self.duration}")
        if not (self.omega0 >= 0 and math.isfinite(self.omega0)):
            raise ShapeError(f"omega0 must be non-negative, got {self.omega0}")
        if self.family == "quadratic":
            if self.beta is None or not math.isfinite(self.beta):
                raise ShapeError("quadratic family requires beta")
            if self.beta > 1:
                raise ShapeError(
                    f"beta={self.beta} > 1 would make the envelope negative mid-pulse"
                )
        if self.family == "powerlaw":
            if self.p is None or self.p != int(self.p) or self.p < 0:
                raise ShapeError("powerlaw family requires a non-negative integer p")
            object.__setattr__(self, "p", int(self.p))
        if self.family == "gaussian":
            if self.sigma is None or self.sigma <= 0:
                raise ShapeError("gaussian family requires sigma > 0")
            tail = _gaussian_tail_fraction(self.sigma, self.duration)
            if tail > TRUNCATION_TAIL_LIMIT:
                raise ShapeError(
                    f"gaussian truncation tails carry {tail:.2e} of the area "
                    f"(limit {TRUNCATION_TAIL_LIMIT:.0e}); use sigma <= duration/7.8"
                )
        if self.family == "sech":
            if self.tau is None or self.tau <= 0:
                raise ShapeError("sech family requires tau > 0")
            tail = _sech_tail_fraction(self.tau, self.duration)
            if tail > TRUNCATION_TAIL_LIMIT:
                raise ShapeError(
                    f"sech truncation tails carry {tail:.2e} of the area "
                    f"(limit {TRUNCATION_TAIL_LIMIT:.0e}); use tau <= duration/19"
                )
        if self.family == "sampled":
            if self.values is None or len(self.values) == 0:
                raise ShapeError("sampled family requires a non-empty value array")
            vals = np.asarray(self.values, dtype=float)
            if not np.all(np.isfinite(vals)) or np.any(vals < 0):
                raise ShapeError("sampled values must be finite and non-negative")
            vals.setflags(write=False)
            object.__setattr__(self, "values", vals)

    # --- constructors -----------------------------------------------------

    @classmethod
    def rectangular(cls, omega0: float, duration: float) -> "PulseShape":
        return cls("rectangular", omega0, duration)

    @classmethod
    def quadratic(cls, omega0: float, duration: float, beta: float) -> "PulseShape":
        return cls("quadratic", omega0, duration, beta=beta)

    @classmethod
    def powerlaw(cls, omega0: float, duration: float, p: int) -> "PulseShape":
        return cls("powerlaw", omega0, duration, p=p)

    @classmethod
    def gaussian(cls, omega0: float, duration: float, sigma: float) -> "PulseShape":
        return cls("gaussian", omega0, duration, sigma=sigma)

    @classmethod
    def sech(cls, omega0: float, duration: float, tau: float) -> "PulseShape":
        return cls("sech", omega0, duration, tau=tau)

    @classmethod
    def sampled(cls, values: Sequence[float], duration: float,
                omega0: float = 1.0) -> "PulseShape":
        return cls("sampled", omega0, duration, values=np.asarray(values, float))

    def describe(self) -> str:
        if self.family == "quadratic":
            return f"quadratic(beta={self.beta:g})"
        if self.family == "powerlaw":
            return f"powerlaw(p={self.p})"
        if self.family == "gaussian":
            return f"gaussian(sigma={self.sigma:g} ns)"
        if self.family == "sech":
            return f"sech(tau={self.tau:g} ns)"
        if self.family == "sampled":
            return f"sampled(n={len(self.values)})"
        return self.family


@dataclass(frozen=True)
class DriveSchedule:
    """Time-discretized drive: per-slot Rabi frequency and detuning (rad/ns).

    Slot k covers [k*step, (k+1)*step); the arrays are read-only and may be
    shared freely across workers.
    """

    step: float
    omega: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        om = np.atleast_1d(np.asarray(self.omega, dtype=float))
        de = np.asarray(self.delta, dtype=float)
        if de.ndim == 0:
            de = np.full_like(om, float(de))
        if om.shape != de.shape:
            raise ValueError("omega and delta arrays must have equal length")
        if not np.all(np.isfinite(om)) or np.any(om < 0):
            raise ValueError("schedule omega samples must be finite and non-negative")
        if not np.all(np.isfinite(de)):
            raise ValueError("schedule delta samples must be finite")
        om.setflags(write=False)
        de.setflags(write=False)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "delta", de)

    def __len__(self) -> int:
        return len(self.omega)

    @property
    def duration(self) -> float:
        return self.step * len(self.omega)


# --- envelope evaluation --------------------------------------------------

def _unit_envelope(shape: PulseShape, t: np.ndarray) -> np.ndarray:
    """Envelope at omega0 = 1, zero outside [0, T]."""
    T = shape.duration
    inside = (t >= 0.0) & (t <= T)
    s = (t - T / 2.0) / (T / 2.0)
    if shape.family == "rectangular":
        f = np.ones_like(t)
    elif shape.family == "quadratic":
        f = 1.0 + shape.beta * (s * s - 1.0)
    elif shape.family == "powerlaw":
        f = s ** (2 * shape.p)
    elif shape.family == "gaussian":
        f = np.exp(-0.5 * ((t - T / 2.0) / shape.sigma) ** 2)
    elif shape.family == "sech":
        f = 1.0 / np.cosh((t - T / 2.0) / shape.tau)
    else:  # sampled: piecewise-constant slots
        n = len(shape.values)
        slot = np.clip((t / (T / n)).astype(int), 0, n - 1)
        f = shape.values[slot]
    return np.where(inside, f, 0.0)


def envelope(shape: PulseShape, t) -> np.ndarray:
    """Rabi frequency Omega(t) in rad/ns; zero outside [0, duration]."""
    t_arr = np.asarray(t, dtype=float)
    out = shape.omega0 * _unit_envelope(shape, np.atleast_1d(t_arr))
    return out[0] if t_arr.ndim == 0 else out


def envelope_derivatives(shape: PulseShape, t):
    """First and second time derivatives of the envelope, rad/ns^2 and rad/ns^3.

    Only defined strictly inside (0, duration); the envelope jumps at the
    window edges.  For the sampled family a central finite-difference
    stencil at the slot resolution is used: f' ~ (v[k+1]-v[k-1])/(2h),
    f'' ~ (v[k+1]-2v[k]+v[k-1])/h^2.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    T = shape.duration
    if np.any(t_arr <= 0.0) or np.any(t_arr >= T):
        raise EdgeDerivativeError(
            "edge derivative undefined: t must lie strictly inside (0, duration)"
        )
    s = (t_arr - T / 2.0) / (T / 2.0)
    ds = 2.0 / T
    om = shape.omega0
    if shape.family == "rectangular":
        d1 = np.zeros_like(t_arr)
        d2 = np.zeros_like(t_arr)
    elif shape.family == "quadratic":
        d1 = om * shape.beta * 2.0 * s * ds
        d2 = np.full_like(t_arr, om * shape.beta * 2.0 * ds * ds)
    elif shape.family == "powerlaw":
        p2 = 2 * shape.p
        if p2 == 0:
            d1 = np.zeros_like(t_arr)
            d2 = np.zeros_like(t_arr)
        else:
            d1 = om * p2 * s ** (p2 - 1) * ds
            d2 = (om * p2 * (p2 - 1) * s ** (p2 - 2) * ds * ds
                  if p2 >= 2 else np.zeros_like(t_arr))
    elif shape.family == "gaussian":
        u = (t_arr - T / 2.0) / shape.sigma
        g = om * np.exp(-0.5 * u * u)
        d1 = -g * u / shape.sigma
        d2 = g * (u * u - 1.0) / shape.sigma**2
    elif shape.family == "sech":
        u = (t_arr - T / 2.0) / shape.tau
        sech_u = 1.0 / np.cosh(u)
        tanh_u = np.tanh(u)
        d1 = -om * sech_u * tanh_u / shape.tau
        d2 = om * sech_u * (tanh_u * tanh_u - sech_u * sech_u) / shape.tau**2
    else:  # sampled
        n = len(shape.values)
        h = T / n
        slot = np.clip((t_arr / h).astype(int), 0, n - 1)
        if np.any(slot < 1) or np.any(slot > n - 2):
            raise EdgeDerivativeError(
                "edge derivative undefined: sampled stencil needs an interior slot"
            )
        v = om * shape.values
        d1 = (v[slot + 1] - v[slot - 1]) / (2.0 * h)
        d2 = (v[slot + 1] - 2.0 * v[slot] + v[slot - 1]) / (h * h)
    if np.asarray(t).ndim == 0:
        return d1[0], d2[0]
    return d1, d2


# --- areas ------------------------------------------------------------------

def pulse_area(shape: PulseShape) -> float:
    """Drive integral A = int Omega(t) dt over [0, duration], dimensionless."""
    T = shape.duration
    if shape.family == "rectangular":
        return shape.omega0 * T
    if shape.family == "quadratic":
        return shape.omega0 * T * (1.0 - 2.0 * shape.beta / 3.0)
    if shape.family == "powerlaw":
        return shape.omega0 * T / (2 * shape.p + 1)
    if shape.family == "sampled":
        # exact integral of the piecewise-constant envelope
        return shape.omega0 * float(np.sum(shape.values)) * T / len(shape.values)
    # gaussian / sech: adaptive quadrature
    val, _ = quad(lambda t: float(envelope(shape, t)), 0.0, T,
                  points=[T / 2.0], epsabs=0.0, epsrel=QUADRATURE_REL_TOL,
                  limit=200)
    return val


def amplitude_for_area(shape: PulseShape, area: float) -> float:
    """Peak parameter omega0 (rad/ns) that makes pulse_area equal ``area``.

    Area is linear in omega0 for every family, so this is exact division.
    """
    if area <= 0:
        raise ShapeError(f"target area must be positive, got {area}")
    unit = pulse_area(replace(shape, omega0=1.0))
    if unit <= 0:
        raise ShapeError(f"{shape.describe()} has zero area per unit amplitude")
    return area / unit


def with_area(shape: PulseShape, area: float) -> PulseShape:
    """Copy of ``shape`` rescaled to the requested pulse area."""
    return replace(shape, omega0=amplitude_for_area(shape, area))


# --- sampling ---------------------------------------------------------------

def sample(shape: PulseShape, step: float, delta: float = 0.0) -> DriveSchedule:
    """Discretize to N = round(duration/step) slots, envelope at slot midpoints.

    A constant detuning channel (rad/ns) is attached; per-sample detunings
    can be built directly through DriveSchedule.
    """
    if step <= 0:
        raise ShapeError(f"sample step must be positive, got {step}")
    if step > shape.duration:
        raise ShapeError(
            f"sample step {step} ns exceeds pulse duration {shape.duration} ns"
        )
    n = int(round(shape.duration / step))
    t_mid = (np.arange(n) + 0.5) * step
    om = envelope(shape, t_mid)
    return DriveSchedule(step, om, np.full(n, float(delta)))


# --- serialization ------------------------------------------------------------

def shape_to_dict(shape: PulseShape) -> dict:
    """JSON-ready dict: {family, beta|p|sigma|tau|values, omega0_mhz, duration_ns}."""
    d = {
        "family": shape.family,
        "omega0_mhz": rad_ns_to_mhz(shape.omega0),
        "duration_ns": shape.duration,
    }
    if shape.family == "quadratic":
        d["beta"] = shape.beta
    elif shape.family == "powerlaw":
        d["p"] = shape.p
    elif shape.family == "gaussian":
        d["sigma"] = shape.sigma
    elif shape.family == "sech":
        d["tau"] = shape.tau
    elif shape.family == "sampled":
        d["values"] = [float(v) for v in shape.values]
    return d


def shape_from_dict(d: dict) -> PulseShape:
    try:
        family = d["family"]
        omega0 = mhz_to_rad_ns(float(d["omega0_mhz"]))
        duration = float(d["duration_ns"])
    except KeyError as exc:
        raise ShapeError(f"shape spec missing field {exc}") from exc
    if family == "quadratic":
        return PulseShape.quadratic(omega0, duration, float(d["beta"]))
    if family == "powerlaw":
        return PulseShape.powerlaw(omega0, duration, int(d.get("p", d.get("P"))))
    if family == "gaussian":
        return PulseShape.gaussian(omega0, duration, float(d["sigma"]))
    if family == "sech":
        return PulseShape.sech(omega0, duration, float(d["tau"]))
    if family == "sampled":
        return PulseShape.sampled(d["values"], duration, omega0)
    if family == "rectangular":
        return PulseShape.rectangular(omega0, duration)
    raise ShapeError(f"unknown family {family!r}")


def save_shape(shape: PulseShape, path) -> None:
    with open(path, "w") as fh:
        json.dump(shape_to_dict(shape), fh, indent=2)
        fh.write("\n")


def load_shape(path) -> PulseShape:
    with open(path) as fh:
        return shape_from_dict(json.load(fh))
