"""Closed-form capacity bounds and the convergence-law prelog.

Three closed forms bracket the channel rates:

* upper bound     log2(1 + snr)  -- the AWGN cap;
* lower asymptote (1/2) log2(1 + a*snr) - 1/2, with a <= 1 a loss-dependent
  factor (a = 1 when attenuation is perfectly compensated);
* phase-noise cap (1/2) log2(1 + snr/2) for the diagonal limit channel.

On top of these, the convergence law assigns a prelog r(delta) to segment
counts growing like K = snr^(1/delta).  This demo prints the bounds table
for a lossy span and the prelog staircase.
"""

from ssfmlab import bounds_table, loss_factor_a, prelog_r, upsilon_theory

zeta = -1.35  # half the total attenuation exponent of the span
print(f"loss factor a(zeta={zeta}) = {loss_factor_a(zeta):.6f}\n")

print(f"{'snr_db':>7} {'upper':>8} {'lower':>8} {'phase-cap':>9}")
for snr_db in (0, 10, 20, 30, 40, 60, 80):
    row = bounds_table([10.0 ** (snr_db / 10.0)], zeta=zeta)[0]
    print(f"{snr_db:7d} {row.upper:8.3f} {row.lower_asymptotic:8.3f} {row.phase_noise:9.3f}")
print("(lower/phase-cap are high-power asymptotes; small-snr rows go negative)\n")

print(f"{'delta':>6} {'prelog r':>9} {'upsilon':>8}")
for delta in (0.5, 1.0, 1.5, 2.0, 3.0, 4.0):
    print(f"{delta:6.1f} {prelog_r(delta):9.4f} {upsilon_theory(delta):8.4f}")
print("""
r(delta) is the capacity prelog when K = snr^delta: 1/2 up to delta = 3/2,
(3 - delta)/(2 delta) down to 1/4 at delta = 2, then 1/(2 delta) — slower
segment growth relative to power costs prelog.""")
