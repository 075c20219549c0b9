"""Numerical laboratory for the discrete-time split-step Fourier model of
optical fiber.

The package simulates the segmented fiber channel (Kerr nonlinearity with
inner signal-noise mixing, chromatic dispersion, loss), its multiplicative
fading and per-sample phase-noise limits, and the statistics connecting them:
entry laws of the random channel matrices, off-diagonal decay rates,
conditional output-norm densities, histogram mutual information and
achievable-rate sweeps, and the closed-form capacity bounds.
"""

from .bounds import (
    BoundSet,
    bounds_table,
    compute_rho,
    fading_lower_constant,
    loss_factor_a,
    lower_bound_asymptotic,
    phase_noise_capacity,
    prelog_r,
    upper_bound,
    upsilon_theory,
)
from .fading import (
    ChannelMatrix,
    diagonal_limit_output,
    eta_factor,
    fading_output,
    norm_conditional_logpdf,
    norm_conditional_pdf,
    sample_MK,
    sample_ZK,
)
from .info import (
    AIRCurve,
    Constellation,
    air_sweep,
    build_constellation,
    estimate_mi,
    ring_decomposed_mi,
    scatter_capture,
)
from .matrixlab import (
    DecayFit,
    EmpiricalDistribution,
    UpsilonEstimate,
    convergence_rate_upsilon,
    haar_entry_conditional_pdf,
    haar_entry_marginal_cdf,
    haar_entry_marginal_pdf,
    haar_unitary,
    ks_statistic,
    ks_two_sample,
    max_offdiag,
    offdiag_decay_fit,
)
from .presets import PRESETS, air_segment_rule, get_preset
from .rng import RngStream
from .spectral import (
    ChannelConfig,
    DispersionProfile,
    apply_dispersion,
    dft,
    dispersion_multipliers,
    fixed_profile,
    idft,
)
from .ssfm import SegmentTrace, back_propagate, nonlinear_noise_step, propagate

__version__ = "0.1.0"

__all__ = [
    "AIRCurve",
    "PRESETS",
    "BoundSet",
    "ChannelConfig",
    "ChannelMatrix",
    "Constellation",
    "DecayFit",
    "DispersionProfile",
    "EmpiricalDistribution",
    "RngStream",
    "SegmentTrace",
    "UpsilonEstimate",
    "air_segment_rule",
    "air_sweep",
    "apply_dispersion",
    "back_propagate",
    "bounds_table",
    "build_constellation",
    "compute_rho",
    "convergence_rate_upsilon",
    "dft",
    "diagonal_limit_output",
    "dispersion_multipliers",
    "estimate_mi",
    "eta_factor",
    "fading_lower_constant",
    "fading_output",
    "fixed_profile",
    "get_preset",
    "haar_entry_conditional_pdf",
    "haar_entry_marginal_cdf",
    "haar_entry_marginal_pdf",
    "haar_unitary",
    "idft",
    "ks_statistic",
    "ks_two_sample",
    "loss_factor_a",
    "lower_bound_asymptotic",
    "max_offdiag",
    "nonlinear_noise_step",
    "norm_conditional_logpdf",
    "norm_conditional_pdf",
    "offdiag_decay_fit",
    "phase_noise_capacity",
    "prelog_r",
    "propagate",
    "ring_decomposed_mi",
    "sample_MK",
    "sample_ZK",
    "scatter_capture",
    "upper_bound",
    "upsilon_theory",
]
