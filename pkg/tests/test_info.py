"""Constellations, histogram MI estimation, rate sweeps, scatter capture."""

import math
import warnings

import numpy as np
import pytest

from ssfmlab.bounds import lower_bound_asymptotic, upper_bound
from ssfmlab.info import (
    air_sweep,
    build_constellation,
    estimate_mi,
    ring_decomposed_mi,
    scatter_capture,
)
from ssfmlab.rng import RngStream
from ssfmlab.spectral import ChannelConfig, dispersion_multipliers
from ssfmlab.ssfm import back_propagate, propagate

from helpers import quadrature_mi_awgn

RNG = np.random.default_rng(999)


# ----------------------------------------------------------------------
# Constellation
# ----------------------------------------------------------------------

def test_constellation_power_and_layout():
    const = build_constellation(4, 2.5, n_phases=8)
    assert const.size == 32
    assert abs(np.mean(np.abs(const.points) ** 2) - 2.5) < 1e-12
    # radii proportional to 1..m_A
    radii = np.unique(np.round(np.abs(const.points), 12))
    assert radii.size == 4
    np.testing.assert_allclose(radii / radii[0], [1, 2, 3, 4], rtol=1e-10)


def test_constellation_index_maps():
    const = build_constellation(3, 1.0, n_phases=4)
    s = np.arange(const.size)
    a, p = const.amp_index(s), const.phase_index(s)
    rebuilt = np.abs(const.points[a * 4]) * np.exp(1j * const.phase_angles[p])
    np.testing.assert_allclose(rebuilt, const.points[s], atol=1e-12)


def test_constellation_validation():
    with pytest.raises(ValueError):
        build_constellation(0, 1.0)
    with pytest.raises(ValueError):
        build_constellation(4, -1.0)


# ----------------------------------------------------------------------
# estimate_mi: exact cases and oracle comparison
# ----------------------------------------------------------------------

def test_mi_exact_for_noiseless_distinct_symbols():
    const = build_constellation(1, 1.0, n_phases=8)
    s = RNG.integers(0, 8, size=20000)
    y = const.points[s]
    assert abs(estimate_mi(s, y, bins=64, n_symbols=8) - 3.0) < 0.02


def test_mi_awgn_qpsk_matches_quadrature_oracle():
    const = build_constellation(1, 1.0, n_phases=4)
    snr = 10.0
    noise_var = 1.0 / snr
    s = RNG.integers(0, 4, size=200000)
    noise = (RNG.standard_normal(s.size) + 1j * RNG.standard_normal(s.size)) * math.sqrt(
        noise_var / 2
    )
    y = const.points[s] + noise
    est = estimate_mi(s, y, bins=64, n_symbols=4)
    oracle = quadrature_mi_awgn(const.points, np.full(4, 0.25), noise_var)
    assert abs(est - oracle) < 0.05


def test_mi_independent_pairs_near_zero():
    s = RNG.integers(0, 4, size=100000)
    y = RNG.standard_normal(s.size) + 1j * RNG.standard_normal(s.size)
    assert estimate_mi(s, y, bins=64, n_symbols=4) < 0.05


def test_mi_doubling_samples_is_stable():
    const = build_constellation(1, 1.0, n_phases=4)
    rng = np.random.default_rng(42)
    vals = []
    for n in (30000, 60000):
        s = rng.integers(0, 4, size=n)
        noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * math.sqrt(0.05)
        vals.append(estimate_mi(s, const.points[s] + noise, bins=64, n_symbols=4))
    assert abs(vals[1] - vals[0]) < 0.05


def test_mi_validation_and_warnings():
    with pytest.raises(ValueError):
        estimate_mi([0, 1], [1 + 0j])
    with pytest.raises(ValueError):
        estimate_mi([], [])
    with pytest.raises(ValueError):
        estimate_mi([0, 5], [0j, 1j], n_symbols=4)
    with pytest.warns(UserWarning, match="fewer than 8"):
        estimate_mi([0, 1, 1], [0j, 1j, 1j + 1])
    with pytest.warns(UserWarning, match="zero spread"):
        assert estimate_mi([0] * 10 + [1] * 10, [1j] * 20) == 0.0
    with pytest.warns(UserWarning, match="single bin"):
        spread = np.arange(20) * (1 + 1j) / 20  # nonzero spread in both dims
        assert estimate_mi([0] * 10 + [1] * 10, spread, bins=1) == 0.0


def test_mi_bounded_by_class_entropy():
    # plug-in estimate never exceeds log2(#classes), never goes negative
    for seed in range(5):
        rng = np.random.default_rng(seed)
        m_A = int(rng.integers(1, 5))
        const = build_constellation(m_A, 1.0)
        s = rng.integers(0, const.size, size=4000)
        y = const.points[s] + 0.3 * (rng.standard_normal(4000) + 1j * rng.standard_normal(4000))
        mi = estimate_mi(s, y, bins=32, n_symbols=const.size)
        assert 0.0 <= mi <= math.log2(const.size) + 1e-9


# ----------------------------------------------------------------------
# Ring decomposition
# ----------------------------------------------------------------------

def test_ring_decomposition_identity_channel():
    const = build_constellation(4, 1.0, n_phases=8)
    s = RNG.integers(0, const.size, size=40000)
    total, i_phase, i_amp = ring_decomposed_mi(s, const.points[s], const)
    assert abs(i_phase - 3.0) < 0.02
    assert abs(i_amp - 2.0) < 0.02
    assert abs(total - (i_phase + i_amp)) < 1e-12


def test_ring_decomposition_phase_scrambled_channel():
    # uniform phase rotation kills the phase term, leaves the amplitude term
    const = build_constellation(4, 1.0, n_phases=8)
    s = RNG.integers(0, const.size, size=100000)
    y = np.abs(const.points[s]) * np.exp(1j * RNG.uniform(0, 2 * np.pi, s.size))
    total, i_phase, i_amp = ring_decomposed_mi(s, y, const)
    assert i_phase < 0.05
    assert abs(i_amp - 2.0) < 0.02


def test_amp_bins_sets_amplitude_resolution():
    # 64 rings; 16 amplitude bins alias four rings per cell (caps the term at
    # ~4 bits), while 512 bins resolve every ring (full 6 bits)
    const = build_constellation(64, 1.0, n_phases=1)
    s = RNG.integers(0, 64, size=50000)
    spacing = np.abs(const.points[1]) - np.abs(const.points[0])
    y = const.points[s] + 0.01 * spacing * (
        RNG.standard_normal(s.size) + 1j * RNG.standard_normal(s.size)
    )
    _, _, coarse = ring_decomposed_mi(s, y, const, amp_bins=16)
    _, _, fine = ring_decomposed_mi(s, y, const, amp_bins=512)
    assert coarse <= 4.05
    assert fine > 5.95


# ----------------------------------------------------------------------
# air_sweep
# ----------------------------------------------------------------------

def _tiny_cfg(**kw):
    base = dict(
        n=16, K=20, length=1.0, dt=0.5, gamma=1.0, sigma2=1e-3,
        beta2=-1.0, alpha=0.0, inner_steps=2, seed=0,
    )
    base.update(kw)
    return ChannelConfig(**base)


def test_air_sweep_thread_invariance_and_fields():
    cfg = _tiny_cfg()
    powers = [0.5, 2.0]
    curves = [
        air_sweep(cfg, powers, 2, 4096, RngStream(7), bins=32, amp_bins=128, threads=t)
        for t in (1, 2)
    ]
    np.testing.assert_array_equal(curves[0].mi, curves[1].mi)
    np.testing.assert_array_equal(curves[0].mi_amp, curves[1].mi_amp)
    c = curves[0]
    assert c.m_A == 2 and c.bins == 32 and c.amp_bins == 128
    assert c.samples_per_point == 4096 and c.method == "ring"
    np.testing.assert_allclose(c.snr, np.array(powers) / (cfg.sigma2 * cfg.length))
    np.testing.assert_allclose(c.upper, [upper_bound(s) for s in c.snr])
    np.testing.assert_allclose(c.lower, [lower_bound_asymptotic(s) for s in c.snr])
    np.testing.assert_allclose(c.snr_db, 10 * np.log10(c.snr))
    np.testing.assert_allclose(c.power_dbm, 10 * np.log10(np.array(powers) / 1e-3))


def test_air_sweep_linear_channel_saturates_at_constellation_entropy():
    # gamma = 0: back-propagation undoes the linear channel exactly, and at
    # 60 dB the residual noise cannot blur 16 symbols
    cfg = _tiny_cfg(gamma=0.0, sigma2=1e-6)
    curve = air_sweep(cfg, [1.0], 2, 20000, RngStream(11))
    assert abs(curve.mi[0] - math.log2(2 * 8)) < 0.02


def test_air_sweep_joint_method_and_bad_method():
    cfg = _tiny_cfg()
    curve = air_sweep(cfg, [1.0], 2, 4096, RngStream(3), method="joint")
    assert np.isnan(curve.mi_phase[0]) and curve.mi[0] >= 0
    with pytest.raises(ValueError):
        air_sweep(cfg, [1.0], 2, 4096, RngStream(3), method="bogus")


def test_back_propagation_does_not_lose_information():
    # sigma = 0 makes BP a bijection, so per-sample MI after BP must be at
    # least the raw-output MI (up to estimator noise)
    cfg = _tiny_cfg(sigma2=0.0)
    const = build_constellation(2, 4.0)
    stream = RngStream(21)
    symbols = stream.generator.integers(0, const.size, size=(640, cfg.n))
    profile = dispersion_multipliers(cfg)
    x = const.points[symbols]
    y = propagate(x, cfg, profile, None)
    y_hat = back_propagate(y, cfg, profile)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # raw-y clouds may underfill some classes
        mi_raw = estimate_mi(symbols.ravel(), y.ravel(), bins=48, n_symbols=const.size)
    mi_bp = estimate_mi(symbols.ravel(), y_hat.ravel(), bins=48, n_symbols=const.size)
    assert mi_bp >= mi_raw - 0.05


# ----------------------------------------------------------------------
# scatter_capture
# ----------------------------------------------------------------------

def test_scatter_capture_normalization_and_fields():
    cfg = _tiny_cfg(sigma2=1e-4)
    records = scatter_capture(cfg, [0.5, 4.0], 2, 64, RngStream(5))
    assert len(records) == 2
    for rec, power in zip(records, (0.5, 4.0)):
        assert rec["power"] == power
        assert abs(rec["snr"] - power / (cfg.sigma2 * cfg.length)) < 1e-9
        assert rec["x"].shape == (64 * cfg.n,)
        assert rec["y"].shape == (64 * cfg.n,)
        # normalized by sqrt(P): unit mean square
        assert abs(np.mean(np.abs(rec["x"]) ** 2) - 1.0) < 0.05


def test_scatter_noiseless_linear_is_exact():
    cfg = _tiny_cfg(sigma2=0.0, gamma=0.0)
    rec = scatter_capture(cfg, [1.0], 2, 16, RngStream(9))[0]
    np.testing.assert_allclose(rec["y"], rec["x"], atol=1e-10)


def test_scatter_strong_nonlinearity_scrambles_phase_not_amplitude():
    # medium power: conditional phase spread far beyond 1 rad; the amplitude
    # stays localized around |x| once the segment count is high enough
    cfg = ChannelConfig(
        n=32, K=2000, length=1.0, dt=math.pi / math.sqrt(77.5), gamma=1.0,
        sigma2=0.03, beta2=-2.0, alpha=0.0, inner_steps=2, seed=0,
    )
    rec = scatter_capture(cfg, [2000.0], 4, 40, RngStream(13))[0]
    x, y = rec["x"], rec["y"]
    dphi = np.angle(y) - np.angle(x)
    circ = np.abs(np.mean(np.exp(1j * dphi)))
    circular_std = math.sqrt(max(0.0, -2.0 * math.log(max(circ, 1e-300))))
    assert circular_std > 1.0
    rel_amp = np.abs(np.abs(y) - np.abs(x)) / np.abs(x)
    assert np.median(rel_amp) < 0.05
