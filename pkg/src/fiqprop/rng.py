"""Seeded exact samplers.

All stochastic decisions in the package go through :class:`ExactSampler`, which
compares a uniform integer draw against a rational threshold. No floating point
enters a sampling decision, so any run is replayable bit-for-bit from its seed.
"""
import hashlib
import random
from fractions import Fraction


def split_seed(seed: int, index: int) -> int:
    """Derive the seed of sub-stream ``index`` from a master ``seed``.

    The rule is ``int(sha256(f"{seed}:{index}")[:8])`` (big endian), stable
    across platforms and Python versions.
    """
    digest = hashlib.sha256(f"{seed}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


class ExactSampler:
    """Uniform-integer sampler over a Mersenne Twister stream.

    ``draws`` counts how many uniform integers were consumed. Thresholds equal
    to 0 or 1 are decided without consuming randomness.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)
        self.draws = 0

    def below(self, b: int) -> int:
        """Uniform integer in ``[0, b)`` by rejection on ``bit_length(b-1)`` bits."""
        if b < 1:
            raise ValueError("upper bound must be positive")
        k = (b - 1).bit_length()
        getrandbits = self._rng.getrandbits
        r = getrandbits(k)
        while r >= b:
            r = getrandbits(k)
        self.draws += 1
        return r

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability exactly ``p``."""
        a, b = p.numerator, p.denominator
        if a == 0:
            return False
        if a == b:
            return True
        return self.below(b) < a

    def count_successes(self, p: Fraction, n: int) -> int:
        """Number of successes in ``n`` independent ``bernoulli(p)`` trials."""
        a, b = p.numerator, p.denominator
        if a == 0:
            return 0
        if a == b:
            return n
        k = (b - 1).bit_length()
        getrandbits = self._rng.getrandbits
        hits = 0
        for _ in range(n):
            r = getrandbits(k)
            while r >= b:
                r = getrandbits(k)
            if r < a:
                hits += 1
        self.draws += n
        return hits
