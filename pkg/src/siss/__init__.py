"""Sampling and reconstruction in shift-invariant spaces."""

from .constants import krein_favard, table_constant, wirtinger_constant
from .gabor import TimeFrequencyGrid, gabor_frame_ratio, stft, window_cover
from .generators import Generator, eval_deriv, make_generator, verify_admissibility
from .hermite import hermite_coeff, hermite_interpolate, patch_weight, quasi_interpolant
from .reconstruct import (Signal, apply_T, contraction_ratio, finite_section_bounds,
                          iterate_reconstruct, project)
from .sampling import (SamplingSet, density_report, gap_threshold,
                       gap_threshold_bandlimited, make_sampling_set)
from .spectral import bernstein_constant, bernstein_constant_closed, riesz_bounds
from .tables import TableSpec, render_table

__all__ = [
    "Generator", "SamplingSet", "Signal", "TableSpec", "TimeFrequencyGrid",
    "apply_T", "bernstein_constant", "bernstein_constant_closed", "contraction_ratio",
    "density_report", "eval_deriv", "finite_section_bounds", "gabor_frame_ratio",
    "gap_threshold", "gap_threshold_bandlimited", "hermite_coeff", "hermite_interpolate",
    "iterate_reconstruct", "krein_favard", "make_generator", "make_sampling_set",
    "patch_weight", "project", "quasi_interpolant", "render_table", "riesz_bounds",
    "stft", "table_constant", "verify_admissibility", "window_cover", "wirtinger_constant",
]
