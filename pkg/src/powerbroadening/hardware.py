"""Emulation of the pulse-level execution constraints of the reference
transmon backend: sample granularity, amplitude/duration limits, per-day
coherence records, and readout error.

Amplitudes are expressed in the backend's arbitrary units through a
configurable calibration (MHz of Rabi frequency at amplitude 1.0).  The
built-in calibration constant is a placeholder; every quantitative check in
the package fixes Rabi frequencies in MHz directly and is independent of it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import dynamics
from .dynamics import DensityMatrix, propagate_lindblad, propagate_schedule
from .shapes import DriveSchedule, PulseShape, sample
from .units import DT_HW, rad_ns_to_mhz

__all__ = [
    "DayRecord",
    "HardwareProfile",
    "ConstraintError",
    "ProfileError",
    "SHERBROOKE_Q46",
    "load_profile",
    "save_profile",
    "clamp_and_discretize",
    "decoherence_impact",
    "apply_readout_error",
    "t2_limited_linewidth_khz",
]


class ConstraintError(ValueError):
    """A pulse violates the backend's duration or amplitude limits."""


class ProfileError(ValueError):
    """A hardware profile failed to load or validate."""


@dataclass(frozen=True)
class DayRecord:
    """One calibration-day snapshot: coherence times (us) and readout error."""

    label: str
    t1_us: float
    t2_us: float
    readout_error: float

    def __post_init__(self):
        if self.t1_us <= 0 or self.t2_us <= 0:
            raise ProfileError(f"day {self.label!r}: T1 and T2 must be positive")
        if self.t2_us > 2.0 * self.t1_us * (1.0 + dynamics.T1T2_TOLERANCE):
            raise ProfileError(
                f"day {self.label!r}: T2 = {self.t2_us} us exceeds 2*T1 beyond "
                f"the {dynamics.T1T2_TOLERANCE:.0%} measurement allowance"
            )
        if not 0.0 <= self.readout_error < 0.5:
            raise ProfileError(
                f"day {self.label!r}: readout error must lie in [0, 0.5)")


@dataclass(frozen=True)
class HardwareProfile:
    dt: float                    # system time unit, ns
    max_amplitude: float         # arbitrary units
    amp_calibration: float       # MHz of Omega0/2pi at amplitude 1.0
    max_duration: float          # ns, soft upper pulse-duration limit
    qubit_frequency: float       # GHz
    anharmonicity: float         # GHz
    day_records: Tuple[DayRecord, ...]

    def __post_init__(self):
        if self.dt <= 0:
            raise ProfileError("dt must be positive")
        if self.max_amplitude <= 0:
            raise ProfileError("max_amplitude must be positive")
        if self.amp_calibration <= 0:
            raise ProfileError("amp_calibration must be positive")
        if self.max_duration <= 0:
            raise ProfileError("max_duration must be positive")
        object.__setattr__(self, "day_records", tuple(self.day_records))

    def day(self, label: str) -> DayRecord:
        for rec in self.day_records:
            if rec.label == label:
                return rec
        known = ", ".join(r.label for r in self.day_records)
        raise ProfileError(f"no day record {label!r}; profile has: {known}")


# Qubit 46 of the reference 127-qubit backend; five service-day records.
SHERBROOKE_Q46 = HardwareProfile(
    dt=DT_HW,
    max_amplitude=1.0,
    amp_calibration=40.0,
    max_duration=10_000.0,
    qubit_frequency=4.6741,
    anharmonicity=-0.3134,
    day_records=(
        DayRecord("27 Nov", 393.66, 596.88, 0.0066),
        DayRecord("29 Nov", 321.33, 697.45, 0.0076),
        DayRecord("1 Dec", 316.42, 492.27, 0.0058),
        DayRecord("3 Dec", 256.01, 287.59, 0.0205),
        DayRecord("5 Dec", 347.80, 468.87, 0.0158),
    ),
)

PRESETS = {"sherbrooke-q46": SHERBROOKE_Q46}


def _profile_to_dict(profile: HardwareProfile) -> dict:
    return {
        "dt_ns": profile.dt,
        "max_amplitude": profile.max_amplitude,
        "amp_calibration_mhz": profile.amp_calibration,
        "max_duration_ns": profile.max_duration,
        "qubit_frequency_ghz": profile.qubit_frequency,
        "anharmonicity_ghz": profile.anharmonicity,
        "days": [
            {"label": r.label, "t1_us": r.t1_us, "t2_us": r.t2_us,
             "readout_error": r.readout_error}
            for r in profile.day_records
        ],
    }


def _profile_from_dict(d: dict) -> HardwareProfile:
    try:
        days = tuple(
            DayRecord(rec["label"], float(rec["t1_us"]), float(rec["t2_us"]),
                      float(rec["readout_error"]))
            for rec in d["days"]
        )
        return HardwareProfile(
            dt=float(d["dt_ns"]),
            max_amplitude=float(d["max_amplitude"]),
            amp_calibration=float(d["amp_calibration_mhz"]),
            max_duration=float(d["max_duration_ns"]),
            qubit_frequency=float(d["qubit_frequency_ghz"]),
            anharmonicity=float(d["anharmonicity_ghz"]),
            day_records=days,
        )
    except KeyError as exc:
        raise ProfileError(f"profile missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ProfileError):
            raise
        raise ProfileError(f"malformed profile: {exc}") from exc


def load_profile(source) -> HardwareProfile:
    """Load a profile from a preset name or a JSON file path."""
    if isinstance(source, str) and source in PRESETS:
        return PRESETS[source]
    try:
        with open(source) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProfileError(f"cannot read profile {source!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProfileError(f"profile {source!r} is not valid JSON: {exc}") from exc
    return _profile_from_dict(data)


def save_profile(profile: HardwareProfile, path) -> None:
    with open(path, "w") as fh:
        json.dump(_profile_to_dict(profile), fh, indent=2)
        fh.write("\n")


def clamp_and_discretize(shape: PulseShape, profile: HardwareProfile,
                         delta: float = 0.0) -> DriveSchedule:
    """Discretize a pulse at the backend's dt under its hard limits.

    Amplitude violations raise rather than clip: silent clipping would
    change the pulse family under test.  The worst offending sample is
    reported in backend units.
    """
    if shape.duration > profile.max_duration:
        raise ConstraintError(
            f"duration {shape.duration:g} ns exceeds the backend limit "
            f"{profile.max_duration:g} ns"
        )
    schedule = sample(shape, profile.dt, delta=delta)
    amp_units = rad_ns_to_mhz(schedule.omega) / profile.amp_calibration
    worst = int(np.argmax(amp_units))
    if amp_units[worst] > profile.max_amplitude:
        t_worst = (worst + 0.5) * profile.dt
        raise ConstraintError(
            f"amplitude {amp_units[worst]:.4f} a.u. at t = {t_worst:.3f} ns "
            f"(sample {worst}) exceeds the backend limit "
            f"{profile.max_amplitude:g} a.u."
        )
    return schedule


def decoherence_impact(shape: PulseShape, delta: float,
                       profile: HardwareProfile, day: str,
                       t1_override: Optional[float] = None,
                       t2_override: Optional[float] = None) -> float:
    """|P2(unitary) - P2(Lindblad)| for one day's T1/T2 on the dt schedule."""
    rec = profile.day(day)
    t1 = rec.t1_us if t1_override is None else t1_override
    t2 = rec.t2_us if t2_override is None else t2_override
    schedule = sample(shape, profile.dt, delta=delta)
    unitary = propagate_schedule(schedule)
    open_sys = propagate_lindblad(schedule, t1, t2, DensityMatrix.ground())
    return abs(unitary.p2 - open_sys.p2)


def apply_readout_error(p2, epsilon: float):
    """Symmetric readout-flip model: p_meas = p2 (1 - eps) + (1 - p2) eps."""
    if not 0.0 <= epsilon < 0.5:
        raise ValueError("readout error must lie in [0, 0.5)")
    p2 = np.asarray(p2, dtype=float)
    out = p2 * (1.0 - epsilon) + (1.0 - p2) * epsilon
    return float(out) if out.ndim == 0 else out


def t2_limited_linewidth_khz(t2_us: float) -> float:
    """Coherence-limited linewidth 1/(pi T2) in kHz."""
    return 1.0 / (math.pi * t2_us * 1e-6) / 1e3
