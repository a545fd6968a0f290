"""Deterministic 64-bit mixing primitives shared by every sampling backend.

The package derives one independent substream per Monte Carlo replicate by
mixing (master seed, replicate index) through the SplitMix64 finalizer, so
results never depend on evaluation order or thread count.  The compiled
kernel and the pure-Python/NumPy kernel implement exactly the same integer
arithmetic (verified bit-for-bit in the test suite); this module holds the
scalar reference implementation used for single draws.

Bounded integers come from the high 64 bits of a 64x64 multiply (Lemire's
multiply-shift).  The residual range bias is O(2^-64) and irrelevant here.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # SplitMix64 state increment
SUBSTREAM_MULT = 0xC2B2AE3D27D4EB4F  # odd constant separating substreams


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return z


def substream_state(master_seed: int, index: int) -> int:
    """Initial state of substream ``index`` under ``master_seed``."""
    return mix64(mix64(master_seed) + ((index & MASK64) * SUBSTREAM_MULT))


def next_u64(state: int) -> tuple[int, int]:
    """Advance a substream one step; returns (value, new_state)."""
    state = (state + GOLDEN) & MASK64
    return mix64(state), state


def mulhi64(a: int, b: int) -> int:
    """High 64 bits of the 128-bit product a*b (both < 2^64).

    Written with 32-bit limbs so the compiled kernel can use the very
    same formula; equals ``(a * b) >> 64`` in unbounded arithmetic.
    """
    ah, al = a >> 32, a & 0xFFFFFFFF
    bh, bl = b >> 32, b & 0xFFFFFFFF
    ll = al * bl
    m1 = ah * bl
    m2 = al * bh
    carry = ((ll >> 32) + (m1 & 0xFFFFFFFF) + (m2 & 0xFFFFFFFF)) >> 32
    return (ah * bh + (m1 >> 32) + (m2 >> 32) + carry) & MASK64


def bounded(value: int, k: int) -> int:
    """Map a uniform 64-bit value onto {0, ..., k-1}."""
    return mulhi64(value, k)


def sample_indices(pop_size: int, n: int, state: int) -> tuple[list[int], int]:
    """Draw n distinct indices from range(pop_size) by partial Fisher-Yates.

    Every size-n subset is equally likely; the returned list is the
    shuffled prefix (order is part of the deterministic contract).
    """
    pool = list(range(pop_size))
    for j in range(n):
        value, state = next_u64(state)
        r = j + bounded(value, pop_size - j)
        pool[j], pool[r] = pool[r], pool[j]
    return pool[:n], state
