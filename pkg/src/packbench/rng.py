"""SplitMix64 pseudo-random generator.

Every piece of harness randomness (instance generation, mock provider
ordering, exemplar picks) flows through this one generator so that runs
are reproducible bit-for-bit from a single 64-bit seed, in any language
that implements the same well-known algorithm (Steele, Lea & Flood's
SplitMix64, as used for seeding the xoshiro family).
"""

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit generator with a one-word state.

    next_u64: state += GAMMA; z = state; z = (z ^ z>>30) * MIX1;
    z = (z ^ z>>27) * MIX2; return z ^ z>>31  (all mod 2^64).
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Unbiased draw from {0, ..., n-1} by rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def uniform_int(self, lo: int, hi: int) -> int:
        """Unbiased integer from the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
