"""Gallery of the two drive-envelope families.

The quadratic family bends a flat pulse with a parabola: beta < 0 bulges
upward mid-pulse, beta = 0 is the plain rectangle, and beta = 1 pinches the
midpoint down to zero.  The power-law family digs a pit of tunable width
into the rectangle; for large p it degenerates into two narrow horns at the
pulse edges.  Both keep the envelope non-negative and mirror-symmetric.

Writes pulse_shape_gallery.png next to this script.
"""
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import powerbroadening as pb
from powerbroadening.units import QUADRATIC_DURATION, POWERLAW_DURATION

OUT = pathlib.Path(__file__).with_name("pulse_shape_gallery.png")

fig, (ax_q, ax_p) = plt.subplots(1, 2, figsize=(10, 4), sharey=True)

om0 = pb.mhz_to_rad_ns(10.0)
t_q = np.linspace(0, QUADRATIC_DURATION, 801)
for beta in (-1.0, 0.0, 0.25, 0.5, 0.75, 1.0):
    shape = pb.PulseShape.quadratic(om0, QUADRATIC_DURATION, beta=beta)
    ax_q.plot(t_q, pb.rad_ns_to_mhz(pb.envelope(shape, t_q)),
              label=f"$\\beta={beta:g}$")
ax_q.set_title("quadratic family (edge value fixed)")
ax_q.set_xlabel("t (ns)")
ax_q.set_ylabel("$\\Omega/2\\pi$ (MHz)")
ax_q.legend(fontsize=8)

t_p = np.linspace(0, POWERLAW_DURATION, 801)
for p in (0, 1, 2, 3):
    shape = pb.PulseShape.powerlaw(om0, POWERLAW_DURATION, p=p)
    ax_p.plot(t_p, pb.rad_ns_to_mhz(pb.envelope(shape, t_p)),
              label=f"$p={p}$")
ax_p.set_title("power-law family (pit widens with p)")
ax_p.set_xlabel("t (ns)")
ax_p.legend(fontsize=8)

for shape, label in [
    (pb.PulseShape.quadratic(om0, QUADRATIC_DURATION, beta=1.0), "beta=1"),
    (pb.PulseShape.powerlaw(om0, POWERLAW_DURATION, p=3), "p=3"),
]:
    area = pb.pulse_area(shape)
    om_pi = pb.rad_ns_to_mhz(pb.amplitude_for_area(shape, np.pi))
    print(f"{label}: area at 10 MHz edge = {area:.3f} rad; "
          f"pi-area amplitude = {om_pi:.4f} MHz")

fig.tight_layout()
fig.savefig(OUT, dpi=150)
print(f"wrote {OUT}")
