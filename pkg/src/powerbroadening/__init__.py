"""Numerical laboratory for power broadening of two-level spectral lines
under shaped drive envelopes: Schrodinger/Lindblad propagation, adiabatic and
superadiabatic diagnostics, excitation landscapes, and operational
linewidths."""

__version__ = "0.1.0"

from .units import (DT_HW, QUADRATIC_DURATION, POWERLAW_DURATION,
                    mhz_to_rad_ns, rad_ns_to_mhz)
from .shapes import (PulseShape, DriveSchedule, ShapeError,
                     EdgeDerivativeError, envelope, envelope_derivatives,
                     pulse_area, amplitude_for_area, with_area, sample,
                     shape_to_dict, shape_from_dict, load_shape, save_shape)
from .dynamics import (QubitState, DensityMatrix, IntegratorError, propagate,
                       propagate_schedule, excitation_grid, rabi_closed_form,
                       rosen_zener_closed_form, propagate_lindblad)
from .frames import (FrameDiagnostics, MidpointAsymptotic,
                     DegeneratePointError, mixing_angle, splitting,
                     nonadiabatic_coupling, superadiabatic_quantities,
                     theta2_dot_chirp_free, midpoint_asymptotic, diagnose)
from .landscape import (LandscapeGrid, AreaSlice, SweepError, axis, sweep,
                        slice_at_area, add_shot_noise, grid_to_csv,
                        grid_from_csv, write_grid_csv, read_grid_csv,
                        grid_to_svg)
from .analysis import (LinewidthReport, BroadeningRatio, DEFAULT_THRESHOLD,
                       operational_linewidth, linewidth_of_slice,
                       broadening_factor, detect_fringes,
                       count_visible_fringes)
from .hardware import (DayRecord, HardwareProfile, ConstraintError,
                       ProfileError, SHERBROOKE_Q46, load_profile,
                       save_profile, clamp_and_discretize, decoherence_impact,
                       apply_readout_error, t2_limited_linewidth_khz)
