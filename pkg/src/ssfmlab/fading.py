"""Multiplicative fading limit of the split-step model: random-phase walks,
accumulated noise, the diagonal phase-noise channel, and the conditional
output-norm law."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .rng import RngStream
from .spectral import DispersionProfile, apply_dispersion

__all__ = [
    "ChannelMatrix",
    "eta_factor",
    "sample_MK",
    "sample_ZK",
    "fading_output",
    "diagonal_limit_output",
    "norm_conditional_pdf",
    "norm_conditional_logpdf",
]

_MAX_DENSE_N = 256


@dataclass
class ChannelMatrix:
    """Dense realizations of the random channel matrix M_K.

    ``matrices`` has shape (trials, n, n); entry [t, l, r] maps input sample
    r to output sample l.
    """

    matrices: np.ndarray
    K: int
    mode: str

    @property
    def n(self) -> int:
        return self.matrices.shape[-1]

    @property
    def trials(self) -> int:
        return self.matrices.shape[0]

    @property
    def first(self) -> np.ndarray:
        return self.matrices[0]


def eta_factor(zeta: float) -> float:
    """Noise-variance inflation (e^{2 zeta} - 1) / (2 zeta); 1 when lossless."""
    if zeta == 0.0:
        return 1.0
    return float(np.expm1(2.0 * zeta) / (2.0 * zeta))


def sample_MK(profile: DispersionProfile, rng: RngStream, trials: int = 1) -> ChannelMatrix:
    """Realize M_K = prod_{i=K..1} D*R(theta_i) on stacked identity matrices.

    The product is built by K successive applications of a diagonal phase
    screen followed by the linear step (column-wise FFTs); no dense
    matrix-matrix product is ever formed.
    """
    n = profile.n
    if n > _MAX_DENSE_N:
        raise ValueError(f"dense channel matrices are capped at n <= {_MAX_DENSE_N}, got {n}")
    state = np.broadcast_to(np.eye(n, dtype=np.complex128), (trials, n, n)).copy()
    for _ in range(profile.K):
        theta = rng.uniform_phases((trials, n))
        state *= np.exp(1j * theta)[:, :, None]  # R(theta): scales row l
        state = apply_dispersion(state, profile, axis=-2)
    return ChannelMatrix(matrices=state, K=profile.K, mode=profile.mode)


def sample_ZK(
    profile: DispersionProfile,
    sigma2: float,
    length: float,
    rng: RngStream,
    trials: int = 1,
    shortcut: bool = False,
) -> np.ndarray:
    """Accumulated end-to-end noise: segment i's injection passes through the
    (D*R) factors of segments i..K inclusive.

    With ``shortcut=True`` and a lossless profile, draws N_C(0, sigma^2*L I)
    directly (the exact law, since unitary factors preserve it).
    """
    n, K = profile.n, profile.K
    eps = length / K
    if shortcut:
        if not profile.is_lossless:
            raise ValueError("the exact shortcut only applies to lossless profiles")
        return rng.normal_complex((trials, n), var=sigma2 * length)
    z = np.zeros((trials, n), dtype=np.complex128)
    for _ in range(K):
        z += rng.normal_complex((trials, n), var=sigma2 * eps)
        theta = rng.uniform_phases((trials, n))
        z *= np.exp(1j * theta)
        z = apply_dispersion(z, profile, axis=-1)
    return z


def fading_output(
    x: np.ndarray,
    profile: DispersionProfile,
    sigma2: float,
    length: float,
    rng: RngStream,
    trials: int = 1,
) -> np.ndarray:
    """Y = M_K x + Z_K with M_K and Z_K driven by the same phase screens.

    Implemented as the single recursion v <- (D*R_i)(v + zbar_i) started at
    v = x, which expands exactly to M_K x + Z_K.
    """
    x = np.asarray(x, dtype=np.complex128)
    n, K = profile.n, profile.K
    if x.shape != (n,):
        raise ValueError(f"x must have shape ({n},)")
    eps = length / K
    v = np.broadcast_to(x, (trials, n)).copy()
    for _ in range(K):
        if sigma2 > 0.0:
            v += rng.normal_complex((trials, n), var=sigma2 * eps)
        theta = rng.uniform_phases((trials, n))
        v *= np.exp(1j * theta)
        v = apply_dispersion(v, profile, axis=-1)
    return v


def diagonal_limit_output(
    x: np.ndarray,
    zeta: float,
    sigma2L: float,
    rng: RngStream,
    trials: int = 1,
) -> np.ndarray:
    """Per-sample phase-noise channel: Y_l = e^{zeta + j theta_l} X_l + Z_l,
    theta_l i.i.d. uniform, Z_l ~ N_C(0, eta * sigma^2 L)."""
    x = np.asarray(x, dtype=np.complex128)
    theta = rng.uniform_phases((trials,) + x.shape)
    noise_var = eta_factor(zeta) * sigma2L
    z = rng.normal_complex((trials,) + x.shape, var=noise_var) if noise_var > 0 else 0.0
    return np.exp(zeta) * np.exp(1j * theta) * x + z


def norm_conditional_logpdf(y_norm, x_norm: float, n: int, sigma2L: float):
    """log of the conditional output-norm density p(||y|| | ||x||) for the
    lossless isotropic channel: a noncentral-chi law with 2n real degrees of
    freedom, evaluated in the log domain via the scaled Bessel function."""
    scalar = np.isscalar(y_norm) or np.ndim(y_norm) == 0
    r = np.atleast_1d(np.asarray(y_norm, dtype=float))
    s = float(x_norm)
    v = float(sigma2L)
    if v <= 0:
        raise ValueError("sigma2L must be positive")
    out = np.full(r.shape, -np.inf)
    pos = r > 0
    rp = r[pos]
    if s == 0.0:
        # central chi with 2n real dimensions of variance sigma2L/2 each
        out[pos] = (
            np.log(2.0)
            + (2 * n - 1) * np.log(rp)
            - n * np.log(v)
            - special.gammaln(n)
            - rp**2 / v
        )
        return float(out[0]) if scalar else out
    arg = 2.0 * rp * s / v
    log_bessel = np.log(special.ive(n - 1, arg)) + arg
    out[pos] = (
        np.log(2.0)
        + n * np.log(rp)
        - np.log(v)
        - (n - 1) * np.log(s)
        - (rp**2 + s**2) / v
        + log_bessel
    )
    return float(out[0]) if scalar else out


def norm_conditional_pdf(y_norm, x_norm: float, n: int, sigma2L: float):
    """Conditional output-norm density p(||y|| | ||x||); see the log version."""
    return np.exp(norm_conditional_logpdf(y_norm, x_norm, n, sigma2L))
