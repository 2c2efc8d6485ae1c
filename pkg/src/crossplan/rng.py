"""Deterministic, splittable random streams built on the splitmix64 generator.

Every run, evaluation, and planner invocation owns an independent stream
derived from a master seed by a fixed label schedule, so whole experiments
replay exactly from one integer. The generator is defined by its published
constants and uses only integer arithmetic, which keeps sequences identical
across platforms and processes.
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15  # splitmix64 increment
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# 2^-53; a 53-bit mantissa keeps next_uniform() exactly representable
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(z: int) -> int:
    """splitmix64 finalizer: a 64-bit avalanche permutation."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


class RngStream:
    """A value-like random stream; state advances by the splitmix64 step.

    Streams are cheap to create and must not be shared across owners:
    derive a child per run / evaluation / phase instead.
    """

    __slots__ = ("key", "_state")

    def __init__(self, seed: int):
        self.key = seed & _MASK64
        self._state = self.key

    def derive(self, label: int) -> "RngStream":
        """Child stream for `label`; a pure function of (key, label)."""
        return RngStream(_mix64(self.key ^ ((_GOLDEN * ((label & _MASK64) + 1)) & _MASK64)))

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def next_uniform(self) -> float:
        """Next double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n). Uses rejection to avoid modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)  # largest multiple of n in range
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_uniform()


def derive(parent: RngStream, label: int) -> RngStream:
    """Module-level alias for RngStream.derive."""
    return parent.derive(label)
