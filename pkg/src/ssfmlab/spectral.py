"""Unitary DFT pair and per-segment dispersion/loss multipliers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

__all__ = [
    "ChannelConfig",
    "DispersionProfile",
    "dft",
    "idft",
    "dispersion_multipliers",
    "fixed_profile",
    "apply_dispersion",
]


def dft(v: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unitary DFT (1/sqrt(n) normalization both ways)."""
    return np.fft.fft(v, axis=axis, norm="ortho")


def idft(v: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unitary inverse DFT."""
    return np.fft.ifft(v, axis=axis, norm="ortho")


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ChannelConfig:
    """Physical and numerical parameters of one fiber simulation.

    All values are SI: ``length`` in m, ``dt`` in s, ``gamma`` in 1/(W*m),
    ``sigma2`` in W/m (noise power per unit length within the simulation
    bandwidth), ``beta2`` in s^2/m, ``alpha`` in 1/m (power attenuation,
    scalar or one value per frequency bin).
    """

    n: int
    K: int
    length: float
    dt: float
    gamma: float = 0.0
    sigma2: float = 0.0
    beta2: float = 0.0
    alpha: float | Sequence[float] = 0.0
    inner_steps: int = 64
    seed: int | None = None

    def __post_init__(self):
        if not _is_power_of_two(self.n):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.length <= 0 or self.dt <= 0:
            raise ValueError("length and dt must be positive")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")
        if self.inner_steps < 1:
            raise ValueError("inner_steps must be >= 1")
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        if alpha.size not in (1, self.n):
            raise ValueError(f"alpha must be scalar or length n={self.n}, got {alpha.size}")

    @property
    def epsilon(self) -> float:
        """Segment length L/K in m."""
        return self.length / self.K

    @property
    def mu(self) -> float:
        """Inner Wiener step epsilon/M in m."""
        return self.epsilon / self.inner_steps

    @property
    def bandwidth(self) -> float:
        """Simulation bandwidth 1/dt in Hz."""
        return 1.0 / self.dt

    def snr(self, power: float) -> float:
        """P / (sigma^2 L) for launch power P in W."""
        return power / (self.sigma2 * self.length)

    def with_K(self, K: int) -> "ChannelConfig":
        return replace(self, K=int(K))


def _alpha_array(cfg: ChannelConfig) -> np.ndarray:
    alpha = np.atleast_1d(np.asarray(cfg.alpha, dtype=float))
    if alpha.size == 1:
        alpha = np.full(cfg.n, alpha[0])
    return alpha


@dataclass(frozen=True)
class DispersionProfile:
    """Per-segment linear-step multipliers exp(a + j*b) on the DFT grid.

    ``mode`` is "finite" when b scales as 1/K (fixed total dispersion
    d = K*b) and "fixed" when b is held constant as K grows.
    """

    n: int
    K: int
    a: np.ndarray
    b: np.ndarray
    mode: str = "finite"
    _mult: np.ndarray = field(init=False, repr=False)
    _inv_mult: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != (self.n,) or b.shape != (self.n,):
            raise ValueError("a and b must have shape (n,)")
        if self.mode not in ("finite", "fixed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "_mult", np.exp(a + 1j * b))
        object.__setattr__(self, "_inv_mult", np.exp(-a - 1j * b))

    @property
    def total_loss(self) -> np.ndarray:
        """Per-frequency end-to-end log-amplitude zeta_l = K*a_l."""
        return self.K * self.a

    @property
    def total_dispersion(self) -> np.ndarray:
        """Per-frequency end-to-end phase d_l = K*b_l."""
        return self.K * self.b

    @property
    def mean_loss(self) -> float:
        """zeta = average of K*a_l (0 for a lossless profile)."""
        return float(np.mean(self.total_loss))

    @property
    def is_lossless(self) -> bool:
        return bool(np.all(self.a == 0.0))


def dispersion_multipliers(cfg: ChannelConfig) -> DispersionProfile:
    """Finite-dispersion profile: quadratic phase b_l ~ 1/K, loss a_l = -L*alpha_l/(2K).

    The quadratic phase uses the symmetric DFT frequency index
    min(k, n-k), so bin 0 carries zero dispersion and the profile is
    symmetric about the band center.
    """
    n, K = cfg.n, cfg.K
    k = np.arange(n)
    ksym = np.minimum(k, n - k).astype(float)
    coef = cfg.length * cfg.beta2 * (2.0 * np.pi) ** 2 / (2.0 * K * (n * cfg.dt) ** 2)
    b = -coef * ksym**2
    a = -cfg.length * _alpha_array(cfg) / (2.0 * K)
    return DispersionProfile(n=n, K=K, a=a, b=b, mode="finite")


def fixed_profile(
    n: int, K: int, b: Sequence[float], a: Sequence[float] | float = 0.0
) -> DispersionProfile:
    """Fixed per-segment multiplier profile: b does not shrink with K."""
    b = np.asarray(b, dtype=float)
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    if a_arr.size == 1:
        a_arr = np.full(n, a_arr[0])
    return DispersionProfile(n=n, K=K, a=a_arr, b=b, mode="fixed")


def apply_dispersion(
    v: np.ndarray, profile: DispersionProfile, inverse: bool = False, axis: int = -1
) -> np.ndarray:
    """One linear step: DFT, multiply by exp(+-(a + j*b)), inverse DFT."""
    mult = profile._inv_mult if inverse else profile._mult
    V = dft(v, axis=axis)
    shape = [1] * V.ndim
    shape[axis] = profile.n
    V *= mult.reshape(shape)
    return idft(V, axis=axis)
