"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Linewidth criteria use the package default visibility threshold
(0.15 of the slice maximum) unless a criterion states its own convention.
"""
import math
import time

import numpy as np
import pytest

import powerbroadening as pb
from powerbroadening.landscape import grid_to_csv
from powerbroadening.units import DT_HW, QUADRATIC_DURATION, POWERLAW_DURATION

T8 = QUADRATIC_DURATION
T16 = POWERLAW_DURATION

PAPER_BETAS = (-1.0, 0.0, 0.25, 0.5, 0.75, 1.0)
PAPER_PS = (0, 1, 2, 3)


def report(num, ok, text):
    print(f"ACCEPTANCE {num:>2} {'PASS' if ok else 'FAIL'}: {text}")
    return ok


def quad_slice(beta, area, n=721, span=90.0, substeps=16):
    shape = pb.PulseShape.quadratic(1.0, T8, beta=beta)
    return pb.slice_at_area(shape, area, pb.axis(-span, span, n),
                            substeps=substeps)


def pow_slice(p, area, n=481, span=60.0, substeps=16):
    shape = pb.PulseShape.powerlaw(1.0, T16, p=p)
    return pb.slice_at_area(shape, area, pb.axis(-span, span, n),
                            substeps=substeps)


@pytest.fixture(scope="module")
def quad_3pi_reports():
    out = {}
    for beta in (-1.0, 0.0, 1.0):
        out[beta] = pb.linewidth_of_slice(quad_slice(beta, 3 * math.pi))
    return out


def test_criterion_1_oracle_equivalence():
    shape = pb.PulseShape.rectangular(1.0, T8)
    t0 = time.monotonic()
    grid = pb.sweep(shape)  # default 241 x 101, +-60 MHz x [0, 25] MHz
    elapsed = time.monotonic() - t0
    om = pb.mhz_to_rad_ns(grid.amplitudes)[:, None]
    de = pb.mhz_to_rad_ns(grid.detunings)[None, :]
    err = float(np.max(np.abs(grid.p2 - pb.rabi_closed_form(om, de, T8))))
    ok = report(1, err < 1e-8 and elapsed < 60.0,
                f"rectangular grid vs closed form: max|dP2| = {err:.2e} "
                f"(tol 1e-8), runtime {elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_2_area_law():
    shapes = ([pb.PulseShape.quadratic(1.0, T8, beta=b)
               for b in (-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0)]
              + [pb.PulseShape.powerlaw(1.0, T16, p=p) for p in PAPER_PS]
              + [pb.PulseShape.gaussian(1.0, T8, sigma=T8 / 8),
                 pb.PulseShape.sech(1.0, T8, tau=T8 / 20)])
    areas = np.linspace(0.0, 4 * math.pi, 20)
    worst = 0.0
    for shape in shapes:
        unit_area = pb.pulse_area(shape)
        om0s = areas / unit_area
        p2 = pb.excitation_grid(shape, om0s, np.array([0.0]), substeps=16)[:, 0]
        worst = max(worst, float(np.max(np.abs(p2 - np.sin(areas / 2) ** 2))))
    ok = report(2, worst < 1e-6,
                f"on-resonance P2 = sin^2(A/2) for {len(shapes)} shapes x "
                f"20 areas in [0, 4pi]: worst |err| = {worst:.2e} (tol 1e-6)")
    assert ok


def test_criterion_3_sech_non_broadening():
    tau = T8 / 20
    det = pb.axis(-60.0, 60.0, 961)
    # skip areas within 0.2 pi of even multiples, where the line blanks out
    area_mults = (1.0, 1.5, 2.5, 3.0, 3.5, 4.5, 5.0, 5.5, 6.5, 7.0)
    sech = pb.PulseShape.sech(1.0, T8, tau=tau)
    unit = pb.pulse_area(sech)
    om0s = np.array([m * math.pi / unit for m in area_mults])
    p2 = pb.excitation_grid(sech, om0s, pb.mhz_to_rad_ns(det), substeps=16)
    widths = np.array([
        pb.operational_linewidth(det, p2[k], threshold=0.5).width
        for k in range(len(area_mults))])
    spread = float((widths.max() - widths.min()) / widths.mean())

    rect = pb.PulseShape.rectangular(1.0, T8)
    om_r = np.array([math.pi / T8, 7 * math.pi / T8])
    p2_r = pb.excitation_grid(rect, om_r, pb.mhz_to_rad_ns(det), substeps=4)
    w_pi = pb.operational_linewidth(det, p2_r[0], threshold=0.5).width
    w_7pi = pb.operational_linewidth(det, p2_r[1], threshold=0.5).width
    growth = w_7pi / w_pi
    ok = report(3, spread < 0.05 and growth > 2.0,
                f"sech half-max width spread over pi..7pi = {spread:.2%} "
                f"(< 5%); rectangular grows x{growth:.2f} (> 2)")
    assert ok


def test_criterion_4_quadratic_superbroadening(quad_3pi_reports):
    w = {b: quad_3pi_reports[b].width for b in (-1.0, 0.0, 1.0)}
    ratio = w[1.0] / w[0.0]
    ordering = w[-1.0] < w[0.0] < w[1.0]
    b0_ok = 30.0 * 0.6 <= w[0.0] <= 30.0 * 1.4
    bm1_ok = 20.0 * 0.6 <= w[-1.0] <= 20.0 * 1.4
    ok = report(4, ordering and 2.5 <= ratio <= 4.0 and b0_ok and bm1_ok,
                f"3pi widths (MHz): beta=-1 {w[-1.0]:.1f} (12..28), "
                f"beta=0 {w[0.0]:.1f} (18..42), beta=1 {w[1.0]:.1f}; "
                f"ratio {ratio:.2f} (2.5..4.0); ordering {ordering}")
    assert ok


def test_criterion_5_powerlaw_superbroadening():
    rep0 = pb.linewidth_of_slice(pow_slice(0, math.pi))
    rep3 = pb.linewidth_of_slice(pow_slice(3, math.pi))
    ratio = pb.broadening_factor(rep3, rep0)
    ratio_ok = 3.0 <= ratio.ratio <= 4.5 and not ratio.is_lower_bound

    rep3_3pi = pb.linewidth_of_slice(pow_slice(3, 3 * math.pi, n=561,
                                               span=35.0))
    clip_ok = rep3_3pi.width >= 70.0 or (rep3_3pi.clipped
                                         and rep3_3pi.width >= 70.0 - 1e-9)
    report(5, clip_ok,
           f"3pi p=3 line on the 70 MHz scope: width {rep3_3pi.width:.1f} "
           f"MHz, clipped={rep3_3pi.clipped} (lower bound >= 70)")
    report(5, ratio_ok,
           f"pi-area width(p=3)/width(p=0) = {rep3.width:.1f}/{rep0.width:.1f}"
           f" = {ratio.ratio:.2f}, required within [3.0, 4.5]")
    assert clip_ok
    # Known red: at any single visibility threshold the simulated ratio
    # stays >= ~5.9 (the p=0 pi line is ~3.5 MHz at the default convention
    # while the p=3 Ramsey comb spans tens of MHz).  The reference values
    # 30 MHz and 8 MHz come from reading color maps with inconsistent
    # visibility floors.  Asserted as stated; see the test output line.
    assert ratio_ok, (
        f"width(P=3)/width(P=0) = {ratio.ratio:.2f} outside [3.0, 4.5] "
        f"(P0 = {rep0.width:.2f} MHz, P3 = {rep3.width:.2f} MHz)")


def test_criterion_6_fringe_structure(quad_3pi_reports):
    slc = pow_slice(3, 3 * math.pi, n=561, span=35.0)
    minima, spacings = pb.detect_fringes(slc.detunings, slc.p2)
    mean_sp = float(np.mean(spacings)) if len(spacings) else math.nan
    fr_ok = len(minima) >= 4 and abs(mean_sp - 2.81) <= 0.5

    n_vis = quad_3pi_reports[1.0].n_fringes
    vis_ok = n_vis >= 5
    ok = report(6, fr_ok and vis_ok,
                f"p=3 3pi: {len(minima)} dark minima, mean spacing "
                f"{mean_sp:.2f} MHz (2.81 +- 0.5); beta=1 3pi: {n_vis} "
                f"visible fringes (>= 5)")
    assert ok


def test_criterion_7_superadiabatic_contrast():
    om0 = pb.mhz_to_rad_ns(30.0)
    contrast_ok = True
    details = []
    for dmhz in (10.0, 20.0, 40.0):
        d = pb.mhz_to_rad_ns(dmhz)
        mx = {}
        for beta in (1.0, -1.0):
            shape = pb.PulseShape.quadratic(om0, T8, beta=beta)
            mx[beta] = float(np.max(np.abs(
                pb.diagnose(shape, d, n_points=4001).theta2_dot)))
        contrast_ok &= mx[1.0] > mx[-1.0]
        details.append(f"D={dmhz:g}: {mx[1.0] / mx[-1.0]:.2f}x")

    rect = pb.PulseShape.rectangular(om0, T8)
    diag = pb.diagnose(rect, pb.mhz_to_rad_ns(20.0), n_points=512)
    rect_ok = np.all(diag.theta1_dot == 0.0) and np.all(diag.theta2_dot == 0.0)

    asym_ok = True
    worst_rel = 0.0
    for beta, om_mhz, dmhz in [(1.0, 10.0, 20.0), (1.0, 30.0, 40.0),
                               (-1.0, 1.0, 30.0), (-1.0, 0.5, 25.0)]:
        shape = pb.PulseShape.quadratic(pb.mhz_to_rad_ns(om_mhz), T8,
                                        beta=beta)
        d = pb.mhz_to_rad_ns(dmhz)
        est = pb.midpoint_asymptotic(shape, d)
        assert est.gamma1 > 10
        om = pb.envelope(shape, T8 / 2)
        d1, d2 = pb.envelope_derivatives(shape, T8 / 2)
        exact = pb.theta2_dot_chirp_free(om, d1, d2, d)
        rel = abs(est.theta2_dot - exact) / abs(exact)
        worst_rel = max(worst_rel, rel)
        asym_ok &= rel < 0.05
    ok = report(7, contrast_ok and rect_ok and asym_ok,
                f"max|theta2_dot| beta contrast ({', '.join(details)}); "
                f"rectangular couplings exactly 0: {bool(rect_ok)}; midpoint "
                f"asymptotic worst rel err {worst_rel:.2%} (< 5%)")
    assert ok


def test_criterion_8_decoherence_negligibility():
    prof = pb.load_profile("sherbrooke-q46")
    shapes = ([pb.PulseShape.quadratic(1.0, T8, beta=b) for b in PAPER_BETAS]
              + [pb.PulseShape.powerlaw(1.0, T16, p=p) for p in PAPER_PS])
    worst = 0.0
    for base in shapes:
        shape = pb.with_area(base, math.pi)
        worst = max(worst, pb.decoherence_impact(shape, 0.0, prof, "3 Dec"))
    lw_khz = pb.t2_limited_linewidth_khz(prof.day("3 Dec").t2_us)
    ok = report(8, worst < 1e-2 and 1.0 < lw_khz < 2.0,
                f"3 Dec record: worst |P2(Lindblad) - P2(unitary)| = "
                f"{worst:.2e} over {len(shapes)} pi-area shapes (tol 1e-2); "
                f"T2-limited linewidth {lw_khz:.2f} kHz (several-kHz scale)")
    assert ok


def test_criterion_9_discretization_fidelity():
    worst = 0.0
    for family, param, T in [("quadratic", 1.0, T8), ("powerlaw", 3, T16)]:
        if family == "quadratic":
            shape = pb.PulseShape.quadratic(1.0, T, beta=param)
        else:
            shape = pb.PulseShape.powerlaw(1.0, T, p=param)
        # the dt-grid kernel is the sampled-schedule propagation: verify the
        # equivalence pointwise, then sweep the full grid with it
        probe = pb.with_area(shape, 3 * math.pi)
        d = pb.mhz_to_rad_ns(20.0)
        sched = pb.sample(probe, DT_HW, delta=d)
        p_sched = pb.propagate_schedule(sched).p2
        p_grid = pb.excitation_grid(probe, np.array([probe.omega0]),
                                    np.array([d]), substeps=1)[0, 0]
        assert abs(p_sched - p_grid) < 1e-12

        default = (pb.landscape.POWERLAW_GRID if family == "powerlaw"
                   else pb.landscape.QUADRATIC_GRID)
        (dlo, dhi, nx), (alo, ahi, ny) = default
        om = pb.mhz_to_rad_ns(pb.axis(alo, ahi, ny))
        de = pb.mhz_to_rad_ns(pb.axis(dlo, dhi, nx))
        coarse = pb.excitation_grid(shape, om, de, substeps=1)
        fine = pb.excitation_grid(shape, om, de, substeps=16)
        worst = max(worst, float(np.max(np.abs(coarse - fine))))
    ok = report(9, worst < 1e-4,
                f"2/9 ns schedules vs continuous envelopes across both "
                f"default grids: worst |dP2| = {worst:.2e} (tol 1e-4)")
    assert ok


def test_criterion_10_property_suite(quad_3pi_reports):
    # norm conservation
    norms_ok = True
    for beta in PAPER_BETAS:
        shape = pb.with_area(pb.PulseShape.quadratic(1.0, T8, beta=beta),
                             2.3 * math.pi)
        st = pb.propagate(shape, pb.mhz_to_rad_ns(17.0), substeps=16)
        norms_ok &= abs(st.norm - 1.0) < 1e-9

    # detuning symmetry on a real grid
    shape = pb.PulseShape.quadratic(1.0, T8, beta=0.75)
    grid = pb.sweep(shape, (-40.0, 40.0), (0.0, 20.0), nx=33, ny=9,
                    substeps=4)
    sym = float(np.max(np.abs(grid.p2 - grid.p2[:, ::-1])))

    # sweep determinism across worker counts
    kw = dict(detuning_range=(-30.0, 30.0), amplitude_range=(0.0, 15.0),
              nx=11, ny=7, substeps=2)
    det_ok = np.array_equal(pb.sweep(shape, workers=1, **kw).p2,
                            pb.sweep(shape, workers=2, **kw).p2)

    # shot-noise reproducibility, byte level
    noisy1 = grid_to_csv(pb.add_shot_noise(grid, 200, seed=7))
    noisy2 = grid_to_csv(pb.add_shot_noise(grid, 200, seed=7))
    noise_ok = noisy1 == noisy2

    # threshold monotonicity of the linewidth
    slc = quad_slice(0.0, 3 * math.pi, n=361, substeps=4)
    widths = [pb.linewidth_of_slice(slc, threshold=t).width
              for t in (0.1, 0.2, 0.35, 0.5, 0.75)]
    mono_ok = all(a >= b for a, b in zip(widths, widths[1:]))

    ok = report(10, norms_ok and sym < 1e-9 and det_ok and noise_ok
                and mono_ok,
                f"norm drift < 1e-9: {norms_ok}; detuning mirror asymmetry "
                f"{sym:.1e} (< 1e-9); worker determinism: {det_ok}; "
                f"seeded noise byte-identical: {noise_ok}; width monotone "
                f"in threshold: {mono_ok}")
    assert ok
