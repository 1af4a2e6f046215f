"""Observables of excitation slices: operational linewidths, fringe
structure, and broadening factors.

The operational linewidth of a fixed-area slice is the distance between the
outermost detunings where the profile crosses a visibility threshold;
interior sub-threshold gaps (fringe minima) count as part of the line.  The
threshold is a fraction of the slice's own maximum.  The default fraction is
0.15: fringes fainter than that are treated as invisible, which calibrates
the convention against reference linewidths read off measured landscapes
(an absolute half-max convention undercounts fringed lines badly).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .landscape import AreaSlice

__all__ = [
    "LinewidthReport",
    "BroadeningRatio",
    "DEFAULT_THRESHOLD",
    "operational_linewidth",
    "linewidth_of_slice",
    "broadening_factor",
    "detect_fringes",
    "count_visible_fringes",
]

DEFAULT_THRESHOLD = 0.15

# A minimum is "dark" when it dips below this fraction of the mean of its
# two flanking maxima.
DARK_FRINGE_RATIO = 0.5


@dataclass(frozen=True)
class LinewidthReport:
    """Operational linewidth of one fixed-area slice.

    Widths and edges in MHz.  ``clipped`` marks profiles still above
    threshold at the range edge (the width is then a lower bound);
    ``no_line`` marks profiles that never reach the threshold.
    """

    shape_id: str
    area: float                 # radians
    amplitude: float            # MHz
    threshold: float            # fraction of the slice maximum
    left_edge: float
    right_edge: float
    width: float
    n_fringes: int
    fringe_spacings: Tuple[float, ...]
    clipped: bool = False
    no_line: bool = False

    def as_dict(self) -> dict:
        return {
            "shape": self.shape_id,
            "area_rad": self.area,
            "amplitude_mhz": self.amplitude,
            "threshold_of_max": self.threshold,
            "left_edge_mhz": self.left_edge,
            "right_edge_mhz": self.right_edge,
            "width_mhz": self.width,
            "n_fringes": self.n_fringes,
            "fringe_spacings_mhz": list(self.fringe_spacings),
            "clipped": self.clipped,
            "no_line": self.no_line,
        }


@dataclass(frozen=True)
class BroadeningRatio:
    """width_a / width_b at equal pulse area; a bound when either is clipped."""

    ratio: float
    is_lower_bound: bool


def _local_maxima(p2: np.ndarray) -> List[int]:
    return [i for i in range(1, len(p2) - 1)
            if p2[i] >= p2[i - 1] and p2[i] > p2[i + 1]]


def _local_minima(p2: np.ndarray) -> List[int]:
    return [i for i in range(1, len(p2) - 1)
            if p2[i] <= p2[i - 1] and p2[i] < p2[i + 1]]


def _outer_crossings(det: np.ndarray, p2: np.ndarray, thr: float):
    """Outermost threshold crossings with linear interpolation.

    Returns (left, right, clipped_left, clipped_right) or None when the
    profile never reaches the threshold.
    """
    above = np.nonzero(p2 >= thr)[0]
    if len(above) == 0:
        return None
    i0, i1 = above[0], above[-1]
    if i0 == 0:
        left, cl = det[0], True
    else:
        f = (thr - p2[i0 - 1]) / (p2[i0] - p2[i0 - 1])
        left, cl = det[i0 - 1] + f * (det[i0] - det[i0 - 1]), False
    if i1 == len(p2) - 1:
        right, cr = det[-1], True
    else:
        f = (thr - p2[i1 + 1]) / (p2[i1] - p2[i1 + 1])
        right, cr = det[i1 + 1] - f * (det[i1 + 1] - det[i1]), False
    return left, right, cl, cr


def operational_linewidth(detunings: np.ndarray, p2: np.ndarray,
                          threshold: float = DEFAULT_THRESHOLD,
                          shape_id: str = "", area: float = math.nan,
                          amplitude: float = math.nan) -> LinewidthReport:
    """Full excitation width of a detuning profile, all visible fringes included.

    ``threshold`` is a fraction of the profile's maximum, in (0, 1).
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be a fraction in (0, 1)")
    det = np.asarray(detunings, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if det.shape != p2.shape or det.ndim != 1:
        raise ValueError("detunings and profile must be equal-length 1-d arrays")
    peak = float(p2.max())
    if peak <= 0.0:
        return LinewidthReport(shape_id, area, amplitude, threshold,
                               0.0, 0.0, 0.0, 0, (), no_line=True)
    thr = threshold * peak
    crossings = _outer_crossings(det, p2, thr)
    if crossings is None:
        return LinewidthReport(shape_id, area, amplitude, threshold,
                               0.0, 0.0, 0.0, 0, (), no_line=True)
    left, right, cl, cr = crossings
    n_fringes = count_visible_fringes(det, p2, threshold)
    minima, spacings = detect_fringes(det, p2)
    inside = [m for m in minima if left <= m <= right]
    sp = tuple(np.diff(inside)) if len(inside) >= 2 else ()
    return LinewidthReport(shape_id, area, amplitude, threshold,
                           left, right, right - left, n_fringes, sp,
                           clipped=cl or cr)


def linewidth_of_slice(slc: AreaSlice,
                       threshold: float = DEFAULT_THRESHOLD) -> LinewidthReport:
    return operational_linewidth(slc.detunings, slc.p2, threshold,
                                 shape_id=slc.shape_id, area=slc.area,
                                 amplitude=slc.amplitude)


def broadening_factor(a: LinewidthReport, b: LinewidthReport) -> BroadeningRatio:
    """width_a / width_b for two reports at the same pulse area.

    Clipped inputs make the result a bound rather than an exact ratio,
    mirroring lines wider than the measured scope.
    """
    if not math.isclose(a.area, b.area, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(
            f"reports compare different areas: {a.area!r} vs {b.area!r}")
    if b.width == 0.0:
        raise ValueError("baseline width is zero: broadening factor undefined")
    return BroadeningRatio(a.width / b.width, a.clipped or b.clipped)


def detect_fringes(detunings: np.ndarray, p2: np.ndarray,
                   dark_ratio: float = DARK_FRINGE_RATIO):
    """Locate dark fringe minima and their spacings (MHz).

    A local minimum counts when it dips below ``dark_ratio`` times the mean
    of its two flanking maxima; locations are refined by a parabola through
    the three grid points around each minimum.
    """
    det = np.asarray(detunings, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    maxima = _local_maxima(p2)
    minima_mhz = []
    for i in _local_minima(p2):
        left = [j for j in maxima if j < i]
        right = [j for j in maxima if j > i]
        if not left or not right:
            continue
        flank = 0.5 * (p2[left[-1]] + p2[right[0]])
        if flank <= 0 or p2[i] >= dark_ratio * flank:
            continue
        curv = p2[i - 1] - 2.0 * p2[i] + p2[i + 1]
        off = 0.5 * (p2[i - 1] - p2[i + 1]) / curv if curv != 0 else 0.0
        minima_mhz.append(det[i] + off * (det[min(i + 1, len(det) - 1)] - det[i]))
    spacings = np.diff(minima_mhz) if len(minima_mhz) >= 2 else np.array([])
    return np.asarray(minima_mhz), spacings


def count_visible_fringes(detunings: np.ndarray, p2: np.ndarray,
                          threshold: float = DEFAULT_THRESHOLD) -> int:
    """Local maxima above threshold*max; these all lie within the outer edges."""
    p2 = np.asarray(p2, dtype=float)
    peak = float(p2.max())
    if peak <= 0:
        return 0
    thr = threshold * peak
    return sum(1 for i in _local_maxima(p2) if p2[i] >= thr)
