"""Statistics of the walk matrices: Haar-unitary entry laws, KS distances,
off-diagonal decay rates, and the empirical convergence-rate estimator."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fading import ChannelMatrix, sample_MK
from .rng import RngStream
from .spectral import ChannelConfig, dispersion_multipliers
from .ssfm import propagate

__all__ = [
    "EmpiricalDistribution",
    "haar_unitary",
    "haar_entry_marginal_pdf",
    "haar_entry_marginal_cdf",
    "haar_entry_conditional_pdf",
    "ks_statistic",
    "ks_two_sample",
    "max_offdiag",
    "DecayFit",
    "offdiag_decay_fit",
    "UpsilonEstimate",
    "convergence_rate_upsilon",
]


class EmpiricalDistribution:
    """Sorted sample set with empirical-CDF evaluation and KS distances."""

    def __init__(self, samples):
        s = np.sort(np.asarray(samples, dtype=float).ravel())
        if s.size == 0:
            raise ValueError("need at least one sample")
        self.samples = s

    def __len__(self) -> int:
        return self.samples.size

    def cdf(self, x):
        """Empirical CDF: fraction of samples <= x."""
        return np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right") / len(self)

    def ks(self, cdf) -> float:
        """One-sample KS distance sup |F_emp - F| against a reference CDF."""
        N = len(self)
        F = np.asarray(cdf(self.samples), dtype=float)
        i = np.arange(1, N + 1)
        d_plus = np.max(i / N - F)
        d_minus = np.max(F - (i - 1) / N)
        return float(max(d_plus, d_minus))

    def ks_two_sample(self, other: "EmpiricalDistribution") -> float:
        """Two-sample KS distance sup |F_a - F_b|."""
        grid = np.concatenate([self.samples, other.samples])
        return float(np.max(np.abs(self.cdf(grid) - other.cdf(grid))))


def ks_statistic(samples, cdf) -> float:
    """One-sample KS distance of ``samples`` against a reference CDF callable."""
    return EmpiricalDistribution(samples).ks(cdf)


def ks_two_sample(a, b) -> float:
    """Two-sample KS distance between two sample sets."""
    return EmpiricalDistribution(a).ks_two_sample(EmpiricalDistribution(b))


def haar_unitary(n: int, rng: RngStream, trials: int = 1) -> np.ndarray:
    """Haar-distributed unitary matrices via Ginibre + QR with phase fix."""
    z = rng.normal_complex((trials, n, n), var=1.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[..., None, :]
    return q


def haar_entry_marginal_pdf(w, n: int):
    """Density of |U_11| for Haar U in U(n): 2(n-1) w (1-w^2)^{n-2} on [0,1]."""
    w = np.asarray(w, dtype=float)
    inside = (w >= 0) & (w <= 1)
    out = np.zeros_like(w, dtype=float)
    ws = np.where(inside, w, 0.0)
    out = np.where(inside, 2.0 * (n - 1) * ws * (1.0 - ws**2) ** (n - 2), 0.0)
    return out if out.ndim else float(out)


def haar_entry_marginal_cdf(w, n: int):
    """CDF of |U_11| for Haar U in U(n): 1 - (1-w^2)^{n-1} on [0,1]."""
    w = np.asarray(w, dtype=float)
    wc = np.clip(w, 0.0, 1.0)
    out = 1.0 - (1.0 - wc**2) ** (n - 1)
    return out if out.ndim else float(out)


def haar_entry_conditional_pdf(w, prev, n: int):
    """Density of |U_{1,l}| given |U_{1,1..l-1}| = prev for Haar U in U(n).

    Equals the first-entry marginal of U(n - l + 1) rescaled to the sphere of
    remaining radius sqrt(1 - sum(prev^2)).
    """
    prev = np.asarray(prev, dtype=float).ravel()
    rem = 1.0 - np.sum(prev**2)
    if rem <= 0:
        raise ValueError("previous magnitudes already exhaust the unit norm")
    scale = np.sqrt(rem)
    m = n - prev.size
    if m < 2:
        raise ValueError("conditional needs at least two remaining coordinates")
    return haar_entry_marginal_pdf(np.asarray(w) / scale, m) / scale


def max_offdiag(matrices: np.ndarray) -> np.ndarray:
    """Per-trial max |off-diagonal entry|; input (trials, n, n) or (n, n)."""
    m = np.asarray(matrices)
    if m.ndim == 2:
        m = m[None]
    if m.ndim != 3 or m.shape[-1] != m.shape[-2]:
        raise ValueError("expected square matrices")
    a = np.abs(m)
    idx = np.arange(a.shape[-1])
    a[:, idx, idx] = 0.0
    return a.reshape(a.shape[0], -1).max(axis=1)


@dataclass
class DecayFit:
    """Least-squares fit of log(median max-off-diagonal) against log K."""

    slope: float
    stderr: float
    K_values: np.ndarray
    medians: np.ndarray
    degenerate: bool = False


def offdiag_decay_fit(
    cfg: ChannelConfig,
    K_values,
    trials: int,
    rng: RngStream,
    n_boot: int = 200,
) -> DecayFit:
    """Estimate the off-diagonal decay exponent of M_K over a grid of K.

    For each K the finite-dispersion profile is rebuilt (total dispersion held
    fixed), ``trials`` matrices are sampled, and the median of the per-trial
    max off-diagonal magnitude is recorded.  The slope of log(median) vs
    log(K) estimates the decay exponent; its standard error comes from a
    bootstrap over trials.
    """
    K_values = np.asarray(K_values, dtype=int)
    per_K = []
    for j, K in enumerate(K_values):
        profile = dispersion_multipliers(cfg.with_K(int(K)))
        mk = sample_MK(profile, rng.child(j), trials=trials)
        per_K.append(max_offdiag(mk.matrices))
    per_K = np.asarray(per_K)  # (len(K), trials)
    medians = np.median(per_K, axis=1)
    # Unitary-matrix entries are O(1), so medians at round-off scale mean the
    # off-diagonals are numerically zero and a log-log fit would chase noise.
    if np.any(medians <= 1e-12):
        return DecayFit(
            slope=float("nan"), stderr=float("nan"),
            K_values=K_values, medians=medians, degenerate=True,
        )
    logK = np.log(K_values.astype(float))

    def _slope(meds):
        return float(np.polyfit(logK, np.log(meds), 1)[0])

    slope = _slope(medians)
    boot_rng = rng.child(len(K_values)).generator
    boot = np.empty(n_boot)
    for b in range(n_boot):
        idx = boot_rng.integers(0, trials, size=trials)
        boot[b] = _slope(np.median(per_K[:, idx], axis=1))
    return DecayFit(
        slope=slope, stderr=float(np.std(boot, ddof=1)),
        K_values=K_values, medians=medians, degenerate=False,
    )


@dataclass
class UpsilonEstimate:
    """Median and interquartile range of the per-trial convergence exponent."""

    delta: float
    K: int
    median: float
    iqr: tuple[float, float]
    per_trial: np.ndarray


def convergence_rate_upsilon(
    cfg: ChannelConfig,
    delta: float,
    trials: int,
    rng: RngStream,
    P0: float = 1.0,
    pair_difference: bool = False,
) -> UpsilonEstimate:
    """Empirical convergence exponent of the phase partial sums.

    Runs the split-step channel with power P = P0 * K^delta and input samples
    i.i.d. sqrt(P/1.5) * (U(0,1) + 0.7), harvests the per-segment nonlinear
    phase of the first time sample, and evaluates per trial::

        ups = -log_K | (1/K) * sum_i exp(j * sum_{s=i..K} Phi_s) |

    With ``pair_difference=True`` the summand uses Phi_{s,1} - Phi_{s,2}
    (the phase difference entering the off-diagonal matrix elements) instead
    of Phi_{s,1}.
    """
    K = cfg.K
    P = P0 * float(K) ** delta
    gen = rng.generator
    u = gen.uniform(0.0, 1.0, size=(trials, cfg.n))
    x = np.sqrt(P / 1.5) * (u + 0.7)  # real-valued input, E|X|^2 ~ P

    coords = (0, 1) if pair_difference else (0,)
    _, trace = propagate(x, cfg, rng=rng, trace=True, trace_coords=coords)
    if pair_difference:
        phi = trace.phases[..., 0] - trace.phases[..., 1]  # (K, trials)
    else:
        phi = trace.phases[..., 0]
    tail = np.cumsum(phi[::-1], axis=0)[::-1]  # C_i = sum_{s=i..K}
    S = np.mean(np.exp(1j * tail), axis=0)
    ups = -np.log(np.abs(S)) / np.log(K)
    q25, q75 = np.percentile(ups, [25, 75])
    return UpsilonEstimate(
        delta=delta, K=K, median=float(np.median(ups)),
        iqr=(float(q25), float(q75)), per_trial=ups,
    )
