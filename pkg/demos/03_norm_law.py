"""Conditional law of the output norm.

In the fading regime the channel matrix is unitary, so the output norm
carries all the amplitude information that survives:  ||y||^2 given ||x||
is a noncentral chi-square in disguise.  The package ships the closed-form
conditional density of ||y|| given ||x||; this demo checks it against a
Monte-Carlo histogram of actual fading-channel outputs and verifies that
the density integrates to one.
"""

import math

import numpy as np

from ssfmlab import (
    RngStream,
    fading_output,
    fixed_profile,
    norm_conditional_pdf,
)

rng = RngStream(2024)
n = 8
K = 300
sigma2, length = 5e-4, 1.0

x = rng.normal_complex((n,), var=1.0)
x *= math.sqrt(n) / np.linalg.norm(x)        # ||x||^2 = n exactly
x_norm = float(np.linalg.norm(x))

b = (math.pi / 3.0) * (np.arange(1, n + 1) / n)
profile = fixed_profile(n, K, b)
y = fading_output(x, profile, sigma2, length, rng, trials=40000)
norms = np.linalg.norm(y, axis=-1)

# Histogram vs closed form.
edges = np.linspace(norms.min() * 0.9, norms.max() * 1.1, 60)
hist, _ = np.histogram(norms, bins=edges, density=True)
centers = 0.5 * (edges[:-1] + edges[1:])
pdf = norm_conditional_pdf(centers, x_norm, n, sigma2 * length)

worst = np.max(np.abs(hist - pdf)) / np.max(pdf)
print(f"||x|| = {x_norm:.4f}, {len(norms)} fading-channel draws")
print(f"max |histogram - closed form| / peak over 60 bins: {worst:.3f}")

# The density must integrate to one.
grid = np.linspace(1e-9, x_norm + 40 * math.sqrt(sigma2 * length * n), 20001)
mass = np.trapezoid(norm_conditional_pdf(grid, x_norm, n, sigma2 * length), grid)
print(f"density mass on a wide grid: {mass:.8f} (should be 1)")

# Mean-square norm: E||y||^2 = ||x||^2 + n * eta * sigma2 * L (lossless: eta=1).
expected = x_norm ** 2 + n * sigma2 * length
print(f"E||y||^2 = {np.mean(norms ** 2):.4f}, theory {expected:.4f}")
