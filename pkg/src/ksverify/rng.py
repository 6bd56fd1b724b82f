"""SplitMix64, the pinned generator behind every randomized result.

The state advances by the golden-ratio increment and each output is the state
passed through the standard finalizer::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    return z ^ (z >> 31)

Seeded with 0, the first three outputs are 0xE220A8397B1DCDAF,
0x6E789E6AA1B965F4 and 0x06C45D188009454F.

Bounded draws use the multiply-shift map ``(x * n) >> 64``, so a draw from
``range(n)`` always consumes exactly one 64-bit output.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in ``range(n)``."""
        if n < 1:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def bits(self, count: int) -> tuple[int, ...]:
        """``count`` <= 64 bits taken from the low end of one output."""
        if not 0 < count <= 64:
            raise ValueError("count must be in 1..64")
        x = self.next_u64()
        return tuple((x >> i) & 1 for i in range(count))

    def __repr__(self) -> str:
        return f"SplitMix64(state=0x{self.state:016X})"


def splitmix64_block(seed: int, n: int, start: int = 0) -> np.ndarray:
    """Outputs ``start .. start+n-1`` of ``SplitMix64(seed)`` as a uint64 array."""
    steps = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + steps * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def random_bit_matrix(seed: int, n: int, width: int) -> np.ndarray:
    """``n`` rows of ``width`` bits; row ``i`` is ``SplitMix64(seed)`` output ``i``
    read low bit first, the same bits :meth:`SplitMix64.bits` yields."""
    if not 0 < width <= 64:
        raise ValueError("width must be in 1..64")
    words = splitmix64_block(seed, n)
    shifts = np.arange(width, dtype=np.uint64)
    return ((words[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
