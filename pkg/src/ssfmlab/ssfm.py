"""Split-step propagation: nonlinear step with inner signal-noise mixing,
linear dispersion step, and deterministic back-propagation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RngStream
from .spectral import ChannelConfig, DispersionProfile, apply_dispersion, dispersion_multipliers

__all__ = ["SegmentTrace", "nonlinear_noise_step", "propagate", "back_propagate"]

# Inner Wiener steps are drawn in chunks of this many sub-steps to bound
# temporary memory at (chunk, *field shape) while keeping few Python loops.
_CHUNK = 16


@dataclass
class SegmentTrace:
    """Opt-in per-segment record of the propagation.

    ``phases[i]`` is the nonlinear phase applied in segment ``i`` (shape of
    the field, or restricted to ``coords`` time samples when given).
    ``fields[i]``, when recorded, is the field entering segment ``i``
    (``fields[K]`` is the channel output before any receiver processing).
    """

    phases: np.ndarray
    fields: np.ndarray | None = None
    coords: tuple[int, ...] | None = None


def nonlinear_noise_step(
    v: np.ndarray,
    cfg: ChannelConfig,
    rng: RngStream | None = None,
    return_phase: bool = False,
):
    """One nonlinear segment step.

    Adds an inner discrete Wiener walk ``W(1..M)`` with per-step variance
    ``sigma2 * mu`` to the field and rotates by the Kerr phase accumulated
    along the walk::

        phi = gamma * mu * sum_r |v + W(r)|^2
        u   = (v + W(M)) * exp(j * phi)

    With ``sigma2 == 0`` this reduces exactly to ``u = v * exp(j*gamma*eps*|v|^2)``
    and consumes no randomness.  ``v`` may carry arbitrary leading batch axes.
    """
    v = np.asarray(v, dtype=np.complex128)
    eps = cfg.epsilon
    if cfg.sigma2 == 0.0:
        phi = cfg.gamma * eps * (v.real**2 + v.imag**2)
        u = v * np.exp(1j * phi)
        return (u, phi) if return_phase else u

    if rng is None:
        raise ValueError("rng is required when sigma2 > 0")
    M = cfg.inner_steps
    mu = cfg.mu
    W = np.zeros_like(v)
    acc = np.zeros(v.shape, dtype=np.float64)
    done = 0
    while done < M:
        m = min(_CHUNK, M - done)
        steps = rng.normal_complex((m,) + v.shape, var=cfg.sigma2 * mu)
        np.cumsum(steps, axis=0, out=steps)
        steps += W  # partial sums W(done+1) .. W(done+m)
        W = steps[-1].copy()
        walked = steps + v
        acc += (walked.real**2 + walked.imag**2).sum(axis=0)
        done += m
    phi = cfg.gamma * mu * acc
    u = (v + W) * np.exp(1j * phi)
    return (u, phi) if return_phase else u


def propagate(
    x: np.ndarray,
    cfg: ChannelConfig,
    profile: DispersionProfile | None = None,
    rng: RngStream | None = None,
    trace: bool = False,
    trace_fields: bool = False,
    trace_coords: tuple[int, ...] | None = None,
):
    """Propagate ``x`` through K segments (nonlinear step, then linear step).

    Returns the output field, or ``(y, SegmentTrace)`` when ``trace`` is
    true.  ``trace_coords`` restricts the recorded phases to the given time
    samples, which keeps long traces small.  Raises ``FloatingPointError``
    naming the segment if the field stops being finite.
    """
    if profile is None:
        profile = dispersion_multipliers(cfg)
    v = np.array(x, dtype=np.complex128, copy=True)
    if v.shape[-1] != cfg.n:
        raise ValueError(f"field length {v.shape[-1]} != n = {cfg.n}")

    phases = None
    fields = None
    if trace:
        pshape = v.shape[:-1] + (len(trace_coords),) if trace_coords is not None else v.shape
        phases = np.empty((cfg.K,) + pshape, dtype=np.float64)
        if trace_fields:
            fields = np.empty((cfg.K + 1,) + v.shape, dtype=np.complex128)

    for i in range(cfg.K):
        if fields is not None:
            fields[i] = v
        u, phi = nonlinear_noise_step(v, cfg, rng, return_phase=True)
        if phases is not None:
            phases[i] = phi[..., list(trace_coords)] if trace_coords is not None else phi
        v = apply_dispersion(u, profile)
        if not np.all(np.isfinite(v)):
            raise FloatingPointError(f"non-finite field after segment {i + 1} of {cfg.K}")
    if fields is not None:
        fields[cfg.K] = v

    if trace:
        return v, SegmentTrace(phases=phases, fields=fields, coords=trace_coords)
    return v


def back_propagate(
    y: np.ndarray, cfg: ChannelConfig, profile: DispersionProfile | None = None
) -> np.ndarray:
    """Deterministic inverse of the noiseless channel.

    Repeats K times: undo the linear step, then remove the deterministic
    Kerr rotation ``exp(-j*gamma*eps*|u|^2)``.  Exact inverse when
    ``sigma2 == 0``; the standard receiver-side compensation otherwise.
    """
    if profile is None:
        profile = dispersion_multipliers(cfg)
    eps = cfg.epsilon
    v = np.array(y, dtype=np.complex128, copy=True)
    for _ in range(cfg.K):
        u = apply_dispersion(v, profile, inverse=True)
        v = u * np.exp(-1j * cfg.gamma * eps * (u.real**2 + u.imag**2))
    return v
