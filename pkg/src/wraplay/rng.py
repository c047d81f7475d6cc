"""Portable seeded randomness.

Every stochastic routine in this package draws from xoshiro256** seeded
through splitmix64, implemented here rather than taken from the platform,
so that corpora and layouts are bit-reproducible across Python versions,
operating systems and (re)implementations.

Algorithms, both public domain:

* splitmix64 -- Steele, Lea & Flood; used only to expand a 64-bit seed
  into generator state.
* xoshiro256** -- Blackman & Vigna (https://prng.di.unimi.it/); the
  output stream.

Doubles are produced from the top 53 bits (``next_u64() >> 11`` times
2^-53), bounded integers by rejection sampling (no modulo bias), and
shuffles by Fisher-Yates from the end of the sequence.  Substreams for
independent purposes are derived by hashing a label into the seed, so
e.g. layout initialisation and pair shuffling never share a stream.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64_next(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, (z ^ (z >> 31)) & MASK64


def seed_state(seed: int) -> list[int]:
    """Expand a 64-bit seed into a 4-word xoshiro256** state.

    splitmix64 guarantees a non-zero state for every seed.
    """
    s = seed & MASK64
    state = []
    for _ in range(4):
        s, out = splitmix64_next(s)
        state.append(out)
    return state


def derive_seed(seed: int, label: str) -> int:
    """Deterministic substream seed for (seed, label).

    Mixes the label bytes into the seed with splitmix64 so distinct
    labels give statistically independent streams.
    """
    s = seed & MASK64
    for b in label.encode("utf-8"):
        s, out = splitmix64_next(s ^ b)
        s = out
    s, out = splitmix64_next(s)
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Rng:
    """xoshiro256** generator with convenience draws.

    All methods consume a documented number of raw 64-bit outputs so a
    sequence of calls is reproducible from the seed alone.
    """

    __slots__ = ("s",)

    def __init__(self, seed: int, label: str = ""):
        if label:
            seed = derive_seed(seed, label)
        self.s = seed_state(seed)

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = MASK64 - (MASK64 + 1) % n
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def shuffle(self, xs: list) -> None:
        """In-place Fisher-Yates, iterating from the last element down."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), by partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def unit_vector3(self) -> tuple[float, float, float]:
        """Uniform point on the unit sphere (z uniform, longitude uniform)."""
        import math

        z = 2.0 * self.random() - 1.0
        phi = 2.0 * math.pi * self.random()
        r = math.sqrt(max(0.0, 1.0 - z * z))
        return (r * math.cos(phi), r * math.sin(phi), z)
