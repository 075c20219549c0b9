"""Closed-form capacity bounds and convergence-exponent tables for the
discrete-time fiber model and its phase-noise limit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import DispersionProfile

__all__ = [
    "upper_bound",
    "loss_factor_a",
    "lower_bound_asymptotic",
    "prelog_r",
    "phase_noise_capacity",
    "upsilon_theory",
    "compute_rho",
    "fading_lower_constant",
    "BoundSet",
    "bounds_table",
]


def upper_bound(snr: float) -> float:
    """Coherent-channel ceiling log2(1 + snr) in bits per complex sample."""
    return float(np.log2(1.0 + snr))


def loss_factor_a(zeta: float) -> float:
    """Rate-loss factor a = zeta e^{2 zeta} / (e^{2 zeta} - 1); a(0) = 1/2.

    Continuous at zeta = 0 (the lossless limit), computed with expm1 so the
    limit is hit to full precision for small |zeta|.
    """
    if zeta == 0.0:
        return 0.5
    return float(zeta * np.exp(2.0 * zeta) / np.expm1(2.0 * zeta))


def lower_bound_asymptotic(snr: float, zeta: float = 0.0) -> float:
    """High-power achievable rate (1/2)log2(1+snr) + (1/2)log2 a(zeta).

    Asymptotic: the o(1)-in-snr remainder is dropped.  At zeta = 0 this is
    exactly (1/2)log2(1+snr) - 1/2.
    """
    return float(0.5 * np.log2(1.0 + snr) + 0.5 * np.log2(loss_factor_a(zeta)))


def prelog_r(delta: float) -> float:
    """Capacity pre-log when the segment count grows as K = snr^delta.

    1/2 up to delta = 3/2, then (3 - delta)/(2 delta) down to delta = 2,
    then 1/(2 delta).  Continuous and non-increasing past 3/2.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta <= 1.5:
        return 0.5
    if delta <= 2.0:
        return (3.0 - delta) / (2.0 * delta)
    return 1.0 / (2.0 * delta)


def phase_noise_capacity(snr: float) -> float:
    """Capacity of the memoryless phase-noise channel, (1/2)log2(1 + snr/2),
    up to an o(1) term dropped here."""
    return float(0.5 * np.log2(1.0 + 0.5 * snr))


def upsilon_theory(delta: float, regime: str = "general") -> float:
    """Theoretical convergence exponent of the off-diagonal partial sums.

    ``regime="general"``: 5 delta/6 on (0,1], 1 - delta/6 on [1, 3/2],
    3/2 - delta/2 on [3/2, 2], then 1/2.
    ``regime="low-noise-iid"``: delta on [0,1], 3/2 - delta/2 on [1,2]
    (arbitrarily small slack dropped), then 1/2.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if regime == "general":
        if delta <= 1.0:
            return 5.0 * delta / 6.0
        if delta <= 1.5:
            return 1.0 - delta / 6.0
        if delta <= 2.0:
            return 1.5 - delta / 2.0
        return 0.5
    if regime == "low-noise-iid":
        if delta <= 1.0:
            return delta
        if delta <= 2.0:
            return 1.5 - delta / 2.0
        return 0.5
    raise ValueError(f"unknown regime {regime!r}")


def compute_rho(profile: DispersionProfile) -> float:
    """Spectral flatness functional of the total loss/dispersion profile:

        rho = sqrt( sum_r | sum_s (zeta_s + j d_s) e^{-j 2 pi r s / n} |^4 )

    evaluated exactly with an FFT (index origin only shifts bin phases, which
    the magnitude discards).
    """
    x = profile.total_loss + 1j * profile.total_dispersion
    spec = np.fft.fft(x)  # plain (non-unitary) DFT, as in the definition
    return float(np.sqrt(np.sum(np.abs(spec) ** 4)))


def fading_lower_constant(zeta: float, rho: float, n: int) -> float:
    """Additive constant (1/2)log2(e^{2 zeta + 1} / (rho * pi * sqrt(8 n)))
    of the refined fading lower bound.  Annotation only; requires rho > 0."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return float(0.5 * np.log2(np.exp(2.0 * zeta + 1.0) / (rho * np.pi * np.sqrt(8.0 * n))))


@dataclass
class BoundSet:
    """Bounds evaluated at one SNR point.  All rates in bits per complex
    sample; ``lower_asymptotic`` and ``phase_noise`` drop o(1) terms
    (``note`` records that)."""

    snr: float
    zeta: float
    a: float
    upper: float
    lower_asymptotic: float
    phase_noise: float
    note: str = "lower_asymptotic and phase_noise are high-power asymptotes (o(1) dropped)"


def bounds_table(snr_values, zeta: float = 0.0) -> list[BoundSet]:
    """Evaluate all closed-form bounds on a grid of SNR values (linear)."""
    rows = []
    for snr in np.asarray(snr_values, dtype=float):
        rows.append(
            BoundSet(
                snr=float(snr),
                zeta=zeta,
                a=loss_factor_a(zeta),
                upper=upper_bound(snr),
                lower_asymptotic=lower_bound_asymptotic(snr, zeta),
                phase_noise=phase_noise_capacity(snr),
            )
        )
    return rows
