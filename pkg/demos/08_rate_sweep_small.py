"""A miniature achievable-rate sweep (the double-ascent curve, desk-lite).

Sweeping launch power through the noisy nonlinear channel produces the
package's headline curve: rates climb toward the AWGN bound at low power,
collapse in a medium-power window where the accumulated nonlinear phase
noise randomizes the phase AND the stochastic inter-sample mixing destroys
the amplitudes, then recover along the half-prelog asymptote once the
per-point segment count (K = snr^(2/3)) pushes the channel back to its
diagonal limit.

The full curve ships as the `air-desk` preset (n=256, ~1 h of CPU; run
`ssfmlab air-sweep --preset air-desk --svg`).  This demo runs a coarse
five-point miniature at n=32 in a few minutes.
"""

import math

import numpy as np

from ssfmlab import ChannelConfig, RngStream, air_sweep
from ssfmlab.presets import air_segment_rule

sigma2 = 0.03
cfg0 = ChannelConfig(n=32, K=200, length=1.0, dt=math.pi / math.sqrt(20.0),
                     gamma=1.0, sigma2=sigma2, beta2=-2.0, alpha=0.0,
                     inner_steps=4, seed=777)
root = RngStream(777)

rows = [
    # snr_db, m_A, bins, amp_bins, samples
    (10.0, 16, 32, 64, 20000),
    (25.0, 16, 64, 64, 20000),
    (31.0, 16, 64, 64, 20000),
    (45.0, 128, 256, 1024, 40000),
    (55.0, 512, 512, 4096, 60000),
]

print(f"{'snr_db':>7} {'K':>6} {'MI':>7} {'phase':>7} {'amp':>7} {'upper':>7} {'lower':>7}")
for i, (snr_db, m_a, bins, amp_bins, samples) in enumerate(rows):
    snr = 10.0 ** (snr_db / 10.0)
    power = snr * sigma2 * cfg0.length
    cfg = cfg0.with_K(air_segment_rule(snr))
    curve = air_sweep(cfg, [power], m_a, samples, root.child(i),
                      bins=bins, amp_bins=amp_bins)
    print(f"{snr_db:7.1f} {cfg.K:6d} {curve.mi[0]:7.3f} {curve.mi_phase[0]:7.3f} "
          f"{curve.mi_amp[0]:7.3f} {curve.upper[0]:7.3f} {curve.lower[0]:7.3f}")

print("""
Reading the curve: near the upper bound at 10 dB; collapsed (< 1 bit) near
31 dB; recovering through 45 dB; at 55 dB back within a bit of the
half-prelog lower asymptote.  (n=32 here, so levels sit slightly above the
n=256 preset: less inter-sample mixing at shorter block length.)""")
