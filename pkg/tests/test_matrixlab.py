"""Empirical distributions, unitary-ensemble references, decay and rate fits."""

import numpy as np
import pytest
from scipy import integrate, stats

from helpers import naive_ks_statistic, naive_ks_two_sample
from ssfmlab.matrixlab import (
    EmpiricalDistribution,
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
from ssfmlab.rng import RngStream
from ssfmlab.spectral import ChannelConfig

RNG = np.random.default_rng(31337)


def _cfg(**kw):
    base = dict(n=8, K=100, length=0.25, dt=6.25, gamma=1.0, sigma2=5e-5,
                beta2=-2.0, alpha=0.0, inner_steps=1, seed=7)
    base.update(kw)
    return ChannelConfig(**base)


# ----------------------------------------------------------------------
# Kolmogorov-Smirnov machinery vs naive oracles
# ----------------------------------------------------------------------

def test_ks_one_sample_matches_naive_oracle():
    samples = RNG.uniform(size=400)
    cdf = lambda x: np.clip(x, 0.0, 1.0)  # noqa: E731
    fast = ks_statistic(samples, cdf)
    slow = naive_ks_statistic(samples, cdf)
    assert abs(fast - slow) < 1e-12


def test_ks_one_sample_nonuniform_reference():
    samples = RNG.standard_normal(300)
    fast = ks_statistic(samples, stats.norm.cdf)
    slow = naive_ks_statistic(samples, stats.norm.cdf)
    assert abs(fast - slow) < 1e-12
    # and scipy agrees too
    assert abs(fast - stats.kstest(samples, "norm").statistic) < 1e-12


def test_ks_two_sample_matches_naive_oracle():
    a = RNG.standard_normal(250)
    b = RNG.standard_normal(180) + 0.3
    fast = ks_two_sample(a, b)
    slow = naive_ks_two_sample(a, b)
    assert abs(fast - slow) < 1e-12


def test_ks_two_sample_with_ties():
    a = np.repeat([0.0, 1.0, 2.0], 30)
    b = np.repeat([0.5, 1.0, 2.5], 25)
    assert abs(ks_two_sample(a, b) - naive_ks_two_sample(a, b)) < 1e-12


def test_empirical_distribution_cdf_steps():
    emp = EmpiricalDistribution(np.array([1.0, 2.0, 2.0, 4.0]))
    assert emp.cdf(0.5) == 0.0
    assert emp.cdf(1.0) == 0.25
    assert emp.cdf(2.0) == 0.75
    assert emp.cdf(10.0) == 1.0


def test_ks_detects_wrong_distribution():
    samples = RNG.uniform(size=2000) ** 2  # not uniform
    assert ks_statistic(samples, lambda x: np.clip(x, 0, 1)) > 0.2


# ----------------------------------------------------------------------
# Haar ensemble references
# ----------------------------------------------------------------------

def test_haar_unitary_is_unitary():
    mats = haar_unitary(6, RngStream(1), trials=5)
    for u in mats:
        np.testing.assert_allclose(u.conj().T @ u, np.eye(6), atol=1e-10)


def test_haar_entry_distribution_matches_marginal():
    mats = haar_unitary(4, RngStream(2), trials=20_000)
    w = np.abs(mats[:, 0, 0])
    assert ks_statistic(w, lambda x: haar_entry_marginal_cdf(x, 4)) < 0.02


def test_haar_marginal_pdf_normalizes():
    for n in (2, 4, 8, 32):
        mass, _ = integrate.quad(lambda w: haar_entry_marginal_pdf(w, n), 0, 1)
        assert abs(mass - 1.0) < 1e-10


def test_haar_marginal_matches_beta_law():
    # |U_11|^2 ~ Beta(1, n-1); transform to the |U_11| density
    n = 8
    w = np.linspace(0.01, 0.99, 37)
    expected = stats.beta.pdf(w**2, 1, n - 1) * 2 * w
    np.testing.assert_allclose(haar_entry_marginal_pdf(w, n), expected, rtol=1e-10)


def test_haar_marginal_cdf_is_pdf_integral():
    n = 8
    for w in (0.2, 0.5, 0.9):
        mass, _ = integrate.quad(lambda t: haar_entry_marginal_pdf(t, n), 0, w)
        assert abs(mass - haar_entry_marginal_cdf(w, n)) < 1e-10
    assert haar_entry_marginal_cdf(0.0, n) == 0.0
    assert haar_entry_marginal_cdf(1.0, n) == 1.0


def test_haar_conditional_pdf_normalizes_and_validates():
    prev = np.array([0.5, 0.3])
    scale = np.sqrt(1 - np.sum(prev**2))
    mass, _ = integrate.quad(lambda w: haar_entry_conditional_pdf(w, prev, 8), 0, scale)
    assert abs(mass - 1.0) < 1e-10
    with pytest.raises(ValueError):
        haar_entry_conditional_pdf(0.1, np.array([1.0]), 8)  # exhausted norm
    with pytest.raises(ValueError):
        haar_entry_conditional_pdf(0.1, np.ones(7) * 0.1, 8)  # nothing left


# ----------------------------------------------------------------------
# Off-diagonal statistics
# ----------------------------------------------------------------------

def test_max_offdiag_hand_computed():
    m = np.array([[1.0, 0.25j], [-0.5, 2.0]], dtype=complex)
    assert abs(max_offdiag(m)[0] - 0.5) < 1e-15
    batch = np.stack([m, np.eye(2, dtype=complex)])
    np.testing.assert_allclose(max_offdiag(batch), [0.5, 0.0], atol=1e-15)


def test_max_offdiag_does_not_mutate_input():
    m = np.full((2, 2), 3.0 + 0j)
    m_copy = m.copy()
    max_offdiag(m)
    np.testing.assert_array_equal(m, m_copy)


def test_max_offdiag_validates_shape():
    with pytest.raises(ValueError):
        max_offdiag(np.zeros((3, 2)))


def test_offdiag_decay_slope_near_half():
    fit = offdiag_decay_fit(_cfg(), [100, 1000], trials=60, rng=RngStream(3))
    assert not fit.degenerate
    assert -0.8 < fit.slope < -0.2
    assert fit.stderr > 0
    assert fit.medians.shape == (2,)


def test_offdiag_decay_degenerate_when_no_dispersion():
    # beta2 = 0 keeps M_K diagonal, so every off-diagonal is exactly zero
    fit = offdiag_decay_fit(_cfg(beta2=0.0), [10, 100], trials=10, rng=RngStream(4))
    assert fit.degenerate
    assert np.all(fit.medians < 1e-12)  # numerically zero (FFT round-off)
    assert np.isnan(fit.slope)


# ----------------------------------------------------------------------
# Convergence-rate estimator
# ----------------------------------------------------------------------

def test_upsilon_estimate_fields_and_range():
    est = convergence_rate_upsilon(_cfg(n=32, K=512, length=1.0, dt=1.5625,
                                        inner_steps=16),
                                   delta=0.6, trials=50, rng=RngStream(5))
    assert est.delta == 0.6 and est.K == 512
    assert est.per_trial.shape == (50,)
    assert est.iqr[0] <= est.median <= est.iqr[1]
    assert 0.2 < est.median < 1.0  # small-noise low-range law ~ delta = 0.6


def test_upsilon_deterministic_given_stream():
    kw = dict(delta=1.0, trials=10, P0=1.0)
    a = convergence_rate_upsilon(_cfg(K=128), rng=RngStream(6), **kw)
    b = convergence_rate_upsilon(_cfg(K=128), rng=RngStream(6), **kw)
    np.testing.assert_array_equal(a.per_trial, b.per_trial)


def test_upsilon_pair_difference_variant_runs():
    est = convergence_rate_upsilon(_cfg(K=128), delta=0.6, trials=10,
                                   rng=RngStream(7), pair_difference=True)
    assert np.all(np.isfinite(est.per_trial))
