"""Deterministic random streams for trial-parallel Monte Carlo."""

from __future__ import annotations

import numpy as np

__all__ = ["RngStream"]


class RngStream:
    """Seeded random stream that spawns independent child streams by index.

    Children are derived from ``(root entropy, index path)``, so trial ``i``
    always sees the same stream regardless of worker count or completion
    order.  Draw order inside one stream is the caller's responsibility.
    """

    def __init__(self, seed: int | None = 0, _seq: np.random.SeedSequence | None = None):
        self._seq = np.random.SeedSequence(seed) if _seq is None else _seq
        self.generator = np.random.Generator(np.random.PCG64(self._seq))

    @property
    def spawn_key(self) -> tuple:
        return tuple(self._seq.spawn_key)

    def child(self, index: int) -> "RngStream":
        """Independent stream for sub-task ``index`` (trial, sweep point, ...)."""
        seq = np.random.SeedSequence(
            entropy=self._seq.entropy, spawn_key=self._seq.spawn_key + (int(index),)
        )
        return RngStream(_seq=seq)

    def children(self, count: int) -> list["RngStream"]:
        return [self.child(i) for i in range(count)]

    def normal_complex(self, shape: tuple[int, ...] | int, var: float = 1.0) -> np.ndarray:
        """Circularly symmetric complex Gaussian with E|z|^2 = var."""
        if isinstance(shape, int):
            shape = (shape,)
        z = self.generator.standard_normal(size=tuple(shape) + (2,))
        z *= np.sqrt(var / 2.0)
        return z.view(np.complex128)[..., 0]

    def uniform_phases(self, shape: tuple[int, ...] | int) -> np.ndarray:
        """Phases theta ~ U[0, 2*pi)."""
        return self.generator.uniform(0.0, 2.0 * np.pi, size=shape)
