"""Deterministic PRNG for random self-play: xoshiro256** over splitmix64.

Both algorithms are the published reference constructions (Blackman/Vigna);
the four 64-bit words of xoshiro state are produced by applying splitmix64
four times to the game seed.  The compiled engine kernel carries a C twin
seeded identically, and golden-vector tests pin both to outputs of a
straight C transcription of the reference code.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def splitmix64_stream(seed: int):
    """Infinite splitmix64 output stream; used only for seeding."""
    x = seed & _MASK64
    while True:
        x = (x + 0x9E3779B97F4A7C15) & _MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


class Xoshiro256StarStar:
    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        stream = splitmix64_stream(seed)
        self.s0 = next(stream)
        self.s1 = next(stream)
        self.s2 = next(stream)
        self.s3 = next(stream)

    def next_u64(self) -> int:
        s1 = self.s1
        x = (s1 * 5) & _MASK64
        result = ((((x << 7) | (x >> 57)) & _MASK64) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 = self.s2 ^ self.s0
        s3 = self.s3 ^ s1
        self.s1 = s1 ^ s2
        self.s0 = self.s0 ^ s3
        self.s2 = s2 ^ t
        self.s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        return result

    def below(self, n: int) -> int:
        """Uniform index in [0, n) as next_u64() % n.

        The modulo bias is negligible here: n never exceeds 218 (the known
        maximum legal-move count), against a 2^64 range.
        """
        return self.next_u64() % n
