"""The one source of randomness used by every engine.

Sessions own a ``random.Random`` (Mersenne Twister) seeded with a 64-bit
integer and only ever call :func:`rand_below` on it.
"""

import random

SEED_LIMIT = 1 << 64


def make_rng(seed: int) -> random.Random:
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(seed)


def rand_below(rng: random.Random, bound: int) -> int:
    """Uniform integer in ``[0, bound)``, exact for any ``bound``.

    Draws ``bound.bit_length()`` random bits and retries on overflow, so
    every outcome has probability exactly ``1/bound``.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    k = bound.bit_length()
    r = rng.getrandbits(k)
    while r >= bound:
        r = rng.getrandbits(k)
    return r
