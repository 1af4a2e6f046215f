"""Command-line entry point: reproducible sweeps, slices, and diagnostics.

Every subcommand is deterministic given its flags and seed; data files carry
a metadata comment (tool version, config hash) and re-runs are
byte-identical.  Exit codes: 0 success, 2 usage error, 3 constraint
violation, 4 numeric failure, 5 success with a clipped (lower-bound)
linewidth.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import re
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .analysis import (DEFAULT_THRESHOLD, broadening_factor, linewidth_of_slice)
from .dynamics import IntegratorError, propagate, propagate_schedule
from .frames import diagnose
from .hardware import (ConstraintError, ProfileError, apply_readout_error,
                       load_profile)
from .landscape import (add_shot_noise, grid_to_csv, grid_to_svg,
                        read_grid_csv, slice_at_area, sweep)
from .shapes import (PulseShape, ShapeError, envelope, load_shape, pulse_area,
                     amplitude_for_area, with_area)
from .units import DT_HW, QUADRATIC_DURATION, POWERLAW_DURATION, mhz_to_rad_ns, rad_ns_to_mhz

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSTRAINT = 3
EXIT_NUMERIC = 4
EXIT_CLIPPED = 5

# Fixed default seed so noisy outputs reproduce out of the box.
DEFAULT_SEED = 20241127


class UsageError(ValueError):
    pass


# output-path flags are excluded: the data must not depend on where it lands
_NON_CONFIG_KEYS = {"func", "out", "render", "meta", "trajectory_out"}


def _config_hash(args: argparse.Namespace) -> str:
    blob = json.dumps({k: repr(v) for k, v in sorted(vars(args).items())
                       if k not in _NON_CONFIG_KEYS}, sort_keys=True)
    return hashlib.sha1(blob.encode()).hexdigest()[:12]


def _header(args: argparse.Namespace) -> str:
    return f"powerbroadening {__version__} config={_config_hash(args)}"


def _parse_area(text: str) -> float:
    """'pi', '3pi', '0.5pi', or a plain number in radians."""
    t = text.strip().lower()
    if t.endswith("pi"):
        mult = t[:-2]
        return (float(mult) if mult else 1.0) * math.pi
    return float(t)


def _parse_floats(text: str):
    return [float(x) for x in text.split(",") if x.strip() != ""]


def _default_duration(family: str) -> float:
    return POWERLAW_DURATION if family == "powerlaw" else QUADRATIC_DURATION


def _shape_from_args(args, family=None, beta=None, p=None) -> PulseShape:
    """Build a shape from --shape-file or inline flags."""
    if getattr(args, "shape_file", None):
        return load_shape(args.shape_file)
    family = family or args.family
    if family is None:
        raise UsageError("specify --family or --shape-file")
    duration = args.duration_ns or _default_duration(family)
    omega0 = mhz_to_rad_ns(args.omega0_mhz) if args.omega0_mhz is not None else 1.0
    if family == "rectangular":
        shape = PulseShape.rectangular(omega0, duration)
    elif family == "quadratic":
        b = beta if beta is not None else args.beta
        if b is None:
            raise UsageError("quadratic family needs --beta")
        shape = PulseShape.quadratic(omega0, duration, float(b))
    elif family == "powerlaw":
        pp = p if p is not None else args.p
        if pp is None:
            raise UsageError("powerlaw family needs --p")
        shape = PulseShape.powerlaw(omega0, duration, int(pp))
    elif family == "gaussian":
        if args.sigma_ns is None:
            raise UsageError("gaussian family needs --sigma-ns")
        shape = PulseShape.gaussian(omega0, duration, args.sigma_ns)
    elif family == "sech":
        if args.tau_ns is None:
            raise UsageError("sech family needs --tau-ns")
        shape = PulseShape.sech(omega0, duration, args.tau_ns)
    else:
        raise UsageError(f"unknown family {family!r}")
    if getattr(args, "area", None) is not None:
        shape = with_area(shape, _parse_area(args.area))
    return shape


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


# --- subcommands --------------------------------------------------------------


def cmd_shapes(args) -> int:
    family = args.family
    if family is None:
        raise UsageError("shapes needs --family")
    if family == "quadratic":
        params = _parse_floats(args.beta) if args.beta else []
        build = lambda v: _shape_from_args(args, family, beta=v)
        label = "beta"
    elif family == "powerlaw":
        params = [int(x) for x in _parse_floats(args.p)] if args.p else []
        build = lambda v: _shape_from_args(args, family, p=v)
        label = "p"
    else:
        params = [None]
        build = lambda v: _shape_from_args(args, family)
        label = family
    if not params:
        raise UsageError(f"shapes needs a non-empty --{label} list")
    step = args.step_ns or DT_HW
    shapes = [build(v) for v in params]
    n = int(round(shapes[0].duration / step))
    t = (np.arange(n) + 0.5) * step
    cols = [rad_ns_to_mhz(envelope(s, t)) for s in shapes]
    names = [f"omega_over_2pi_mhz[{label}={v}]" if v is not None
             else "omega_over_2pi_mhz" for v in params]
    lines = [f"# {_header(args)}", "t_ns," + ",".join(names)]
    for k in range(n):
        lines.append(f"{t[k]:.9g}," + ",".join(f"{c[k]:.9g}" for c in cols))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_area(args) -> int:
    shape = _shape_from_args(args)
    out = {"shape": shape.describe(), "duration_ns": shape.duration,
           "area_rad": pulse_area(shape),
           "omega0_mhz": rad_ns_to_mhz(shape.omega0)}
    if args.solve is not None:
        target = _parse_area(args.solve)
        out["target_area_rad"] = target
        out["omega0_for_target_mhz"] = rad_ns_to_mhz(
            amplitude_for_area(shape, target))
    _write(args.out, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_propagate(args) -> int:
    shape = _shape_from_args(args)
    delta = mhz_to_rad_ns(args.delta_mhz)
    result = {"shape": shape.describe(), "delta_mhz": args.delta_mhz,
              "area_rad": pulse_area(shape)}
    profile = load_profile(args.profile) if args.profile else None
    if profile is not None:
        from .hardware import clamp_and_discretize
        schedule = clamp_and_discretize(shape, profile, delta=delta)
        final, (t, states) = propagate_schedule(schedule, return_trajectory=True)
    else:
        final = propagate(shape, delta, substeps=args.substeps)
        t = states = None
        if args.trajectory_out:
            from .shapes import sample
            schedule = sample(shape, DT_HW, delta=delta)
            _, (t, states) = propagate_schedule(schedule, return_trajectory=True)
    p2 = final.p2
    if args.trajectory_out and t is not None:
        lines = [f"# {_header(args)}", "t_ns,p1,p2,re_c2,im_c2"]
        for k, st in enumerate(states):
            lines.append(f"{t[k]:.9g},{st.p1:.9g},{st.p2:.9g},"
                         f"{st.c2.real:.9g},{st.c2.imag:.9g}")
        _write(args.trajectory_out, "\n".join(lines) + "\n")
    result["p2"] = p2
    if args.day:
        from .dynamics import propagate_lindblad
        from .hardware import apply_readout_error as readout
        prof = profile or load_profile("sherbrooke-q46")
        rec = prof.day(args.day)
        from .shapes import sample
        schedule = sample(shape, prof.dt, delta=delta)
        open_p2 = propagate_lindblad(schedule, rec.t1_us, rec.t2_us).p2
        result["day"] = rec.label
        result["p2_lindblad"] = open_p2
        result["decoherence_impact"] = abs(open_p2 - p2)
        result["p2_after_readout"] = readout(open_p2, rec.readout_error)
        p2 = result["p2_after_readout"]
    if args.shots:
        noisy = np.random.Generator(
            np.random.Philox(key=args.seed)).binomial(args.shots, p2) / args.shots
        result["p2_measured"] = float(noisy)
        result["shots"] = args.shots
    _write(args.out, json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def _parse_with_noise(text: str) -> int:
    for part in text.split(","):
        key, _, val = part.partition("=")
        if key.strip() == "shots":
            return int(val)
    raise UsageError("--with-noise expects shots=<N>")


def cmd_sweep(args) -> int:
    shape = _shape_from_args(args)
    det_range = tuple(_parse_floats(args.detuning_range)) if args.detuning_range else None
    amp_range = tuple(_parse_floats(args.amplitude_range)) if args.amplitude_range else None
    substeps = args.substeps or 16
    profile = load_profile(args.profile) if args.profile else None
    if profile is not None:
        # hardware-emulation path: drive at the backend's dt resolution and
        # enforce its limits at the hottest amplitude row before computing
        from .hardware import clamp_and_discretize
        if amp_range is None:
            amp_range = (0.0, 40.0) if shape.family == "powerlaw" else (0.0, 25.0)
        top = replace(shape, omega0=mhz_to_rad_ns(amp_range[1]))
        clamp_and_discretize(top, profile)
        substeps = 1
    grid = sweep(shape, det_range, amp_range, args.nx, args.ny,
                 substeps=substeps, workers=args.workers)
    shots = args.shots
    readout = None
    if args.with_noise:
        shots = _parse_with_noise(args.with_noise)
        prof = profile or load_profile("sherbrooke-q46")
        readout = prof.day(args.day).readout_error if args.day else \
            prof.day_records[0].readout_error
    if readout is not None:
        grid = replace(grid, p2=apply_readout_error(grid.p2, readout))
    if shots:
        grid = add_shot_noise(grid, shots, args.seed)
    _write(args.out, grid_to_csv(grid, header_comment=_header(args)))
    if args.render:
        _write(args.render, grid_to_svg(grid, title=grid.shape_id))
    if args.meta:
        import time
        meta = {"shape": grid.shape_id, "duration_ns": grid.duration,
                "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
                "shots": shots, "seed": args.seed if shots else None}
        _write(args.meta, json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def _slice_from_args(args, shape: PulseShape):
    area = _parse_area(args.area)
    if args.detuning_range:
        lo, hi = _parse_floats(args.detuning_range)
    elif shape.family == "powerlaw":
        lo, hi = -35.0, 35.0
    else:
        lo, hi = -90.0, 90.0
    n = args.nx or max(2, int(round((hi - lo) / 0.25)) + 1)
    from .landscape import axis
    return slice_at_area(shape, area, axis(lo, hi, n),
                         substeps=args.substeps or 16)


def cmd_linewidth(args) -> int:
    shape = _shape_from_args(args)
    slc = _slice_from_args(args, shape)
    report = linewidth_of_slice(slc, threshold=args.threshold)
    _write(args.out, json.dumps(report.as_dict(), indent=2) + "\n")
    return EXIT_CLIPPED if report.clipped else EXIT_OK


def cmd_compare(args) -> int:
    family = args.family
    if family == "quadratic":
        params = _parse_floats(args.beta or "-1,0,0.25,0.5,0.75,1")
        baseline_value = 0.0
        build = lambda v: _shape_from_args(args, family, beta=v)
    elif family == "powerlaw":
        params = [int(x) for x in _parse_floats(args.p or "0,1,2,3")]
        baseline_value = 0
        build = lambda v: _shape_from_args(args, family, p=v)
    else:
        raise UsageError("compare supports --family quadratic or powerlaw")
    reports = {}
    for v in params:
        slc = _slice_from_args(args, build(v))
        reports[v] = linewidth_of_slice(slc, threshold=args.threshold)
    if baseline_value not in reports:
        slc = _slice_from_args(args, build(baseline_value))
        reports[baseline_value] = linewidth_of_slice(slc, threshold=args.threshold)
    base = reports[baseline_value]
    rows = []
    for v in params:
        rep = reports[v]
        ratio = broadening_factor(rep, base)
        rows.append({"param": v, "width_mhz": rep.width,
                     "clipped": rep.clipped, "n_fringes": rep.n_fringes,
                     "ratio_vs_baseline": ratio.ratio,
                     "ratio_is_lower_bound": ratio.is_lower_bound})
    out = {"family": family, "area_rad": _parse_area(args.area),
           "threshold_of_max": args.threshold,
           "baseline_param": baseline_value, "rows": rows}
    _write(args.out, json.dumps(out, indent=2) + "\n")
    if args.table:
        print(f"{'param':>8} {'width (MHz)':>12} {'ratio':>8} {'fringes':>8}")
        for r in rows:
            mark = ">=" if r["ratio_is_lower_bound"] else "  "
            print(f"{r['param']:>8} {r['width_mhz']:>12.2f} "
                  f"{mark}{r['ratio_vs_baseline']:>6.2f} {r['n_fringes']:>8}")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    shape = _shape_from_args(args)
    diag = diagnose(shape, mhz_to_rad_ns(args.delta_mhz),
                    n_points=args.n_points)
    lines = [f"# {_header(args)}",
             "t_ns,eps1,eps2,theta1,theta1_dot,theta2_dot,gamma1"]
    for k in range(len(diag.t)):
        g = diag.gamma1[k]
        gtxt = "inf" if math.isinf(g) else f"{g:.9g}"
        lines.append(
            f"{diag.t[k]:.9g},{diag.eps1[k]:.9g},{diag.eps2[k]:.9g},"
            f"{diag.theta1[k]:.9g},{diag.theta1_dot[k]:.9g},"
            f"{diag.theta2_dot[k]:.9g},{gtxt}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    grid = read_grid_csv(args.grid)
    _write(args.out, grid_to_svg(grid, title=args.title or ""))
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def _add_shape_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["rectangular", "quadratic", "powerlaw",
                                        "gaussian", "sech"])
    p.add_argument("--beta", help="quadratic concavity (list allowed where noted)")
    p.add_argument("--p", help="powerlaw exponent parameter")
    p.add_argument("--sigma-ns", type=float, help="gaussian width (ns)")
    p.add_argument("--tau-ns", type=float, help="sech width (ns)")
    p.add_argument("--omega0-mhz", type=float, help="peak parameter, MHz")
    p.add_argument("--duration-ns", type=float,
                   help="pulse duration (default: family reference duration)")
    p.add_argument("--area", help="rescale to this pulse area ('pi', '3pi', rad)")
    p.add_argument("--shape-file", help="JSON shape spec (overrides flags)")


# let values like "-1,0,0.25,1" or "-35,35" pass as option arguments; none
# of our option strings are numeric, so this cannot shadow a real flag
_NEGATIVE_LIST = re.compile(r"^-[\d.,]+$")


class _SubParser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self._negative_number_matcher = _NEGATIVE_LIST


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="powerbroadening",
        description="Two-level excitation landscapes and linewidths under "
                    "shaped drive pulses.")
    ap._negative_number_matcher = _NEGATIVE_LIST
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_SubParser)

    p = sub.add_parser("shapes", help="emit sampled envelopes as CSV")
    _add_shape_flags(p)
    p.add_argument("--step-ns", type=float, help=f"sample step (default {DT_HW:g})")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_shapes)

    p = sub.add_parser("area", help="pulse area and amplitude-for-area")
    _add_shape_flags(p)
    p.add_argument("--solve", help="print omega0 that reaches this area")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_area)

    p = sub.add_parser("propagate", help="propagate one shape at one detuning")
    _add_shape_flags(p)
    p.add_argument("--delta-mhz", type=float, default=0.0)
    p.add_argument("--substeps", type=int)
    p.add_argument("--profile", help="hardware preset name or JSON path")
    p.add_argument("--day", help="profile day record label")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trajectory-out")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("sweep", help="excitation landscape over (delta, omega0)")
    _add_shape_flags(p)
    p.add_argument("--detuning-range", help="lo,hi in MHz")
    p.add_argument("--amplitude-range", help="lo,hi in MHz")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--substeps", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--shots", type=int, help="binomial shot noise per cell")
    p.add_argument("--with-noise", help="shots=<N>: shot noise + readout error")
    p.add_argument("--profile")
    p.add_argument("--day")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--render", help="also write an SVG heatmap here")
    p.add_argument("--meta", help="write a JSON metadata sidecar here")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("linewidth", help="fixed-area slice linewidth report")
    _add_shape_flags(p)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--detuning-range", help="lo,hi in MHz")
    p.add_argument("--nx", type=int)
    p.add_argument("--substeps", type=int)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_linewidth, area="pi")

    p = sub.add_parser("compare", help="broadening factors across a family")
    _add_shape_flags(p)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--detuning-range", help="lo,hi in MHz")
    p.add_argument("--nx", type=int)
    p.add_argument("--substeps", type=int)
    p.add_argument("--table", action="store_true", help="print a text table")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_compare, area="pi")

    p = sub.add_parser("diagnose", help="adiabatic/superadiabatic frame CSV")
    _add_shape_flags(p)
    p.add_argument("--delta-mhz", type=float, required=True)
    p.add_argument("--n-points", type=int, default=801)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("render", help="grid CSV -> SVG heatmap")
    p.add_argument("--grid", required=True)
    p.add_argument("--title")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_render)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ShapeError, ConstraintError, ProfileError, ValueError) as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except IntegratorError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
