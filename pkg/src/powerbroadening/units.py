"""Unit conventions shared across the package.

Durations are in nanoseconds.  Rabi frequencies and detunings are stored
internally as angular frequencies in rad/ns.  All I/O (CLI, files, reports)
uses ordinary frequencies Omega/2pi and Delta/2pi in MHz.
"""
from __future__ import annotations

import math

# rad/ns per MHz of ordinary frequency: 1 MHz = 2*pi*1e-3 rad/ns
RAD_NS_PER_MHZ = 2.0 * math.pi * 1e-3

# Hardware sample granularity of the emulated backend, ns.
DT_HW = 2.0 / 9.0

# Durations of the two reference pulse families, chosen as exact multiples
# of DT_HW (800 and 1600 samples; displayed as 177.8 ns and 355.6 ns).
QUADRATIC_DURATION = 800 * DT_HW
POWERLAW_DURATION = 1600 * DT_HW


def mhz_to_rad_ns(f_mhz):
    """Ordinary frequency in MHz -> angular frequency in rad/ns."""
    return f_mhz * RAD_NS_PER_MHZ


def rad_ns_to_mhz(w_rad_ns):
    """Angular frequency in rad/ns -> ordinary frequency in MHz."""
    return w_rad_ns / RAD_NS_PER_MHZ
