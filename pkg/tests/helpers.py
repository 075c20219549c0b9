"""Independent reference implementations used as test oracles.

Everything here is deliberately naive (quadratic loops, dense quadrature):
slow but easy to audit, so the fast library code is checked against
implementations that share none of its structure.
"""

from __future__ import annotations

import numpy as np


def naive_ks_statistic(samples, cdf) -> float:
    """One-sample KS by direct max over both one-sided gaps at each point."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    best = 0.0
    for i in range(n):
        f = float(cdf(s[i]))
        best = max(best, abs((i + 1) / n - f), abs(i / n - f))
    return best


def naive_ks_two_sample(a, b) -> float:
    """Two-sample KS by evaluating both empirical CDFs on the pooled grid."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    best = 0.0
    for t in grid:
        fa = np.sum(a <= t) / a.size
        fb = np.sum(b <= t) / b.size
        best = max(best, abs(fa - fb))
    return float(best)


def quadrature_mi_awgn(points, probs, noise_var: float, span: float = 6.0, grid: int = 801) -> float:
    """MI of a discrete complex constellation over AWGN by 2D quadrature.

    I(X;Y) = h(Y) - h(Y|X) with h(Y|X) = log2(pi e sigma^2) for circular
    Gaussian noise of total variance sigma^2; h(Y) is integrated numerically
    on a Cartesian grid covering every symbol plus ``span`` noise deviations.
    """
    points = np.asarray(points, dtype=complex)
    probs = np.asarray(probs, dtype=float)
    sigma = np.sqrt(noise_var / 2.0)  # per real dimension
    lo_re = points.real.min() - span * sigma
    hi_re = points.real.max() + span * sigma
    lo_im = points.imag.min() - span * sigma
    hi_im = points.imag.max() + span * sigma
    re = np.linspace(lo_re, hi_re, grid)
    im = np.linspace(lo_im, hi_im, grid)
    RE, IM = np.meshgrid(re, im, indexing="ij")
    Y = RE + 1j * IM
    density = np.zeros_like(RE)
    norm = 1.0 / (np.pi * noise_var)
    for pt, pr in zip(points, probs):
        density += pr * norm * np.exp(-np.abs(Y - pt) ** 2 / noise_var)
    mass = np.trapezoid(np.trapezoid(density, im, axis=1), re)
    entropy_y = np.trapezoid(
        np.trapezoid(np.where(density > 0, -density * np.log2(density), 0.0), im, axis=1), re
    )
    entropy_y_given_x = np.log2(np.pi * np.e * noise_var)
    if abs(mass - 1.0) > 1e-6:
        raise RuntimeError(f"quadrature grid too small: mass={mass}")
    return float(entropy_y - entropy_y_given_x)
