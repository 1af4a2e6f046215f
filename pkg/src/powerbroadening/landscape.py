"""Excitation landscapes P2(Delta, Omega0) by parallel parameter sweeps.

Grid cells are independent propagations from the ground state; the result is
bit-identical for any worker count because every cell runs the same
floating-point sequence regardless of how rows are chunked.  Axes are stored
in MHz (ordinary frequency); propagation happens in rad/ns.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .dynamics import DEFAULT_SUBSTEPS, excitation_grid
from .shapes import PulseShape, amplitude_for_area
from .units import mhz_to_rad_ns, rad_ns_to_mhz

__all__ = [
    "LandscapeGrid",
    "AreaSlice",
    "SweepError",
    "axis",
    "sweep",
    "slice_at_area",
    "add_shot_noise",
    "grid_to_csv",
    "grid_from_csv",
    "write_grid_csv",
    "read_grid_csv",
    "grid_to_svg",
    "QUADRATIC_GRID",
    "POWERLAW_GRID",
]

# Default grid extents mirroring the reference figures: chosen to contain
# every quoted spectral feature, since exact plot axes are not published.
# (detuning lo, hi, nx), (amplitude lo, hi, ny)
QUADRATIC_GRID = ((-60.0, 60.0, 241), (0.0, 25.0, 101))
POWERLAW_GRID = ((-35.0, 35.0, 241), (0.0, 40.0, 101))


class SweepError(RuntimeError):
    """A landscape cell failed to propagate."""


def axis(lo: float, hi: float, n: int) -> np.ndarray:
    """Uniform axis lo + k*(hi-lo)/(n-1); grid doubling to 2n-1 points keeps
    the shared coordinates bit-identical."""
    if n < 2:
        raise ValueError("axis needs at least 2 points")
    return lo + np.arange(n) * ((hi - lo) / (n - 1))


@dataclass(frozen=True)
class LandscapeGrid:
    """Final excited-state populations over (amplitude x detuning) in MHz."""

    detunings: np.ndarray    # MHz, strictly increasing
    amplitudes: np.ndarray   # MHz, strictly increasing
    p2: np.ndarray           # [amplitude][detuning], values in [0, 1]
    shape_id: str
    duration: float          # ns

    def __post_init__(self):
        det = np.asarray(self.detunings, dtype=float)
        amp = np.asarray(self.amplitudes, dtype=float)
        p2 = np.asarray(self.p2, dtype=float)
        if np.any(np.diff(det) <= 0) or np.any(np.diff(amp) <= 0):
            raise ValueError("grid axes must be strictly increasing")
        if p2.shape != (len(amp), len(det)):
            raise ValueError(
                f"p2 shape {p2.shape} does not match axes ({len(amp)}, {len(det)})"
            )
        if np.any(p2 < -1e-12) or np.any(p2 > 1 + 1e-12):
            raise ValueError("p2 entries must lie in [0, 1]")
        for arr in (det, amp, p2):
            arr.setflags(write=False)
        object.__setattr__(self, "detunings", det)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "p2", p2)


@dataclass(frozen=True)
class AreaSlice:
    """Fixed-area detuning profile, the raw material of linewidth reports."""

    detunings: np.ndarray    # MHz
    p2: np.ndarray
    amplitude: float         # MHz, the exact amplitude realizing the area
    area: float              # radians
    shape_id: str
    duration: float          # ns


def _sweep_rows(shape: PulseShape, amp_rows_mhz: np.ndarray,
                detunings_mhz: np.ndarray, substeps: int) -> np.ndarray:
    return excitation_grid(shape,
                           mhz_to_rad_ns(amp_rows_mhz),
                           mhz_to_rad_ns(detunings_mhz),
                           substeps=substeps)


def sweep(shape: PulseShape,
          detuning_range: Tuple[float, float] = None,
          amplitude_range: Tuple[float, float] = None,
          nx: int = None, ny: int = None,
          substeps: int = DEFAULT_SUBSTEPS,
          workers: int = 1) -> LandscapeGrid:
    """Propagate every (amplitude, detuning) cell from the ground state.

    Parameters
    ----------
    shape : PulseShape
        Family/duration template; its own omega0 is ignored (one row per
        amplitude value).
    detuning_range, amplitude_range : (lo, hi) in MHz
        Default to the family's reference grid.
    nx, ny : int
        Axis point counts (detuning, amplitude), >= 2.
    workers : int
        Row-chunk process count; the output is bit-identical for any value.
    """
    default = POWERLAW_GRID if shape.family == "powerlaw" else QUADRATIC_GRID
    (dlo, dhi, dn), (alo, ahi, an) = default
    if detuning_range is None:
        detuning_range = (dlo, dhi)
    if amplitude_range is None:
        amplitude_range = (alo, ahi)
    nx = dn if nx is None else nx
    ny = an if ny is None else ny
    if nx < 2 or ny < 2:
        raise ValueError("grid needs nx, ny >= 2")
    if not (np.isfinite(detuning_range).all() and np.isfinite(amplitude_range).all()):
        raise ValueError("grid ranges must be finite")
    det = axis(detuning_range[0], detuning_range[1], nx)
    amp = axis(amplitude_range[0], amplitude_range[1], ny)

    if workers <= 1:
        p2 = _sweep_rows(shape, amp, det, substeps)
    else:
        bounds = np.linspace(0, ny, workers + 1).astype(int)
        chunks = [(amp[a:b]) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sweep_rows,
                                  [shape] * len(chunks),
                                  chunks,
                                  [det] * len(chunks),
                                  [substeps] * len(chunks)))
        p2 = np.vstack(parts)

    bad = ~np.isfinite(p2) | (p2 < -1e-9) | (p2 > 1 + 1e-9)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SweepError(
            f"cell ({i}, {j}) at Omega0/2pi = {amp[i]:g} MHz, "
            f"Delta/2pi = {det[j]:g} MHz produced P2 = {p2[i, j]!r}"
        )
    return LandscapeGrid(det, amp, np.clip(p2, 0.0, 1.0),
                         shape.describe(), shape.duration)


def slice_at_area(shape: PulseShape, area: float,
                  detunings: Optional[np.ndarray] = None,
                  substeps: int = DEFAULT_SUBSTEPS,
                  amplitude_limit: Optional[float] = None) -> AreaSlice:
    """Detuning profile at the exact amplitude realizing ``area``.

    Computed by fresh propagation, not nearest-row interpolation.  When
    ``amplitude_limit`` (MHz) is given, amplitudes beyond it are rejected
    (the fixed-area row would fall outside the requested grid).
    """
    if detunings is None:
        default = POWERLAW_GRID if shape.family == "powerlaw" else QUADRATIC_GRID
        (dlo, dhi, dn), _ = default
        detunings = axis(dlo, dhi, dn)
    detunings = np.asarray(detunings, dtype=float)
    om0 = amplitude_for_area(shape, area)
    om0_mhz = rad_ns_to_mhz(om0)
    if amplitude_limit is not None and om0_mhz > amplitude_limit:
        raise ValueError(
            f"area {area:g} rad needs Omega0/2pi = {om0_mhz:.3f} MHz, beyond "
            f"the {amplitude_limit:g} MHz amplitude range"
        )
    scaled = replace(shape, omega0=om0)
    p2 = excitation_grid(scaled, np.array([om0]),
                         mhz_to_rad_ns(detunings), substeps=substeps)[0]
    return AreaSlice(detunings, p2, om0_mhz, area, shape.describe(),
                     shape.duration)


def add_shot_noise(grid: LandscapeGrid, shots: int, seed: int) -> LandscapeGrid:
    """Replace each cell by k/shots with k ~ Binomial(shots, P2).

    Draws come from a counter-based Philox generator keyed by
    (seed, row, column), so noisy grids are reproducible across platforms
    and independent of evaluation order.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    noisy = np.empty_like(grid.p2)
    ny, nx = grid.p2.shape
    for i in range(ny):
        for j in range(nx):
            bg = np.random.Philox(key=seed, counter=[0, 0, i, j])
            noisy[i, j] = np.random.Generator(bg).binomial(
                shots, float(grid.p2[i, j])) / shots
    return LandscapeGrid(grid.detunings, grid.amplitudes, noisy,
                         grid.shape_id, grid.duration)


# --- grid file format -------------------------------------------------------

def grid_to_csv(grid: LandscapeGrid, header_comment: str = "") -> str:
    """CSV: first row = detunings (MHz), first column = amplitudes (MHz),
    body = P2 at 9 significant digits; optional '#' comment lines on top."""
    lines = []
    if header_comment:
        for ln in header_comment.splitlines():
            lines.append(f"# {ln}")
    lines.append("," + ",".join(f"{d:.9g}" for d in grid.detunings))
    for i, a in enumerate(grid.amplitudes):
        lines.append(f"{a:.9g}," + ",".join(f"{v:.9g}" for v in grid.p2[i]))
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str, shape_id: str = "", duration: float = 0.0) -> LandscapeGrid:
    rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    det = np.array([float(x) for x in rows[0].split(",")[1:]])
    amp, body = [], []
    for ln in rows[1:]:
        cells = ln.split(",")
        amp.append(float(cells[0]))
        body.append([float(x) for x in cells[1:]])
    return LandscapeGrid(det, np.array(amp), np.array(body), shape_id, duration)


def write_grid_csv(grid: LandscapeGrid, path, header_comment: str = "") -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(grid_to_csv(grid, header_comment))


def read_grid_csv(path) -> LandscapeGrid:
    with open(path) as fh:
        return grid_from_csv(fh.read())


# --- SVG heatmap -------------------------------------------------------------

# 256-step perceptual ramp (viridis), P2 in [0, 1] mapped linearly.
_RAMP_HEX = (
    "44015444025645045745055946075a46085c460a5d460b5e470d60470e61471063471164471365481467481668481769"
    "48186a481a6c481b6d481c6e481d6f481f70482071482173482374482475482576482677482878482979472a7a472c7a"
    "472d7b472e7c472f7d46307e46327e46337f463480453581453781453882443983443a83443b84433d84433e85423f85"
    "4240864241864142874144874045884046883f47883f48893e49893e4a893e4c8a3d4d8a3d4e8a3c4f8a3c508b3b518b"
    "3b528b3a538b3a548c39558c39568c38588c38598c375a8c375b8d365c8d365d8d355e8d355f8d34608d34618d33628d"
    "33638d32648e32658e31668e31678e31688e30698e306a8e2f6b8e2f6c8e2e6d8e2e6e8e2e6f8e2d708e2d718e2c718e"
    "2c728e2c738e2b748e2b758e2a768e2a778e2a788e29798e297a8e297b8e287c8e287d8e277e8e277f8e27808e26818e"
    "26828e26828e25838e25848e25858e24868e24878e23888e23898e238a8d228b8d228c8d228d8d218e8d218f8d21908d"
    "21918c20928c20928c20938c1f948c1f958b1f968b1f978b1f988b1f998a1f9a8a1e9b8a1e9c891e9d891f9e891f9f88"
    "1fa0881fa1881fa1871fa28720a38620a48621a58521a68522a78522a88423a98324aa8325ab8225ac8226ad8127ad81"
    "28ae8029af7f2ab07f2cb17e2db27d2eb37c2fb47c31b57b32b67a34b67935b77937b87838b9773aba763bbb753dbc74"
    "3fbc7340bd7242be7144bf7046c06f48c16e4ac16d4cc26c4ec36b50c46a52c56954c56856c66758c7655ac8645cc863"
    "5ec96260ca6063cb5f65cb5e67cc5c69cd5b6ccd5a6ece5870cf5773d05675d05477d1537ad1517cd2507fd34e81d34d"
    "84d44b86d54989d5488bd6468ed64590d74393d74195d84098d83e9bd93c9dd93ba0da39a2da37a5db36a8db34aadc32"
    "addc30b0dd2fb2dd2db5de2bb8de29bade28bddf26c0df25c2df23c5e021c8e020cae11fcde11dd0e11cd2e21bd5e21a"
    "d8e219dae319dde318dfe318e2e418e5e419e7e419eae51aece51befe51cf1e51df4e61ef6e620f8e621fbe723fde725"
)
_RAMP = [_RAMP_HEX[6 * i: 6 * i + 6] for i in range(256)]


def grid_to_svg(grid: LandscapeGrid, title: str = "",
                width: int = 720, height: int = 480) -> str:
    """Render the landscape as a standalone SVG heatmap with MHz-labeled axes.

    Cells with equal color are merged into horizontal runs; output bytes are
    deterministic for a given grid.
    """
    ml, mr, mt, mb = 70, 20, 30, 50
    pw, ph = width - ml - mr, height - mt - mb
    ny, nx = grid.p2.shape
    cw, ch = pw / nx, ph / ny
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>')
    idx = np.clip((grid.p2 * 255.0).astype(int), 0, 255)
    for i in range(ny):
        # amplitude axis increases upward
        y = mt + ph - (i + 1) * ch
        row = idx[i]
        j = 0
        while j < nx:
            k = j
            while k + 1 < nx and row[k + 1] == row[j]:
                k += 1
            out.append(
                f'<rect x="{ml + j * cw:.2f}" y="{y:.2f}" '
                f'width="{(k - j + 1) * cw + 0.05:.2f}" height="{ch + 0.05:.2f}" '
                f'fill="#{_RAMP[row[j]]}"/>')
            j = k + 1
    # axes
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="black" stroke-width="1"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        d = grid.detunings[0] + frac * (grid.detunings[-1] - grid.detunings[0])
        a = grid.amplitudes[0] + frac * (grid.amplitudes[-1] - grid.amplitudes[0])
        x = ml + frac * pw
        y = mt + ph - frac * ph
        out.append(f'<text x="{x:.1f}" y="{mt + ph + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{d:g}</text>')
        out.append(f'<text x="{ml - 8}" y="{y + 4:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{a:g}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">detuning / 2&#960; (MHz)</text>')
    out.append(f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {mt + ph / 2:.1f})">'
               f'Rabi amplitude / 2&#960; (MHz)</text>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
