"""Deterministic 64-bit PRNG used by all instance generators.

The generator is xorshift64* with fully pinned integer semantics so any
reimplementation can reproduce instance streams bit for bit:

    state = (seed ^ 0x9E3779B97F4A7C15) mod 2^64, replaced by
            0x2545F4914F6CDD1D when that is zero
    step:  x ^= x >> 12
           x ^= (x << 25) mod 2^64
           x ^= x >> 27
           state = x
           output = (x * 0x2545F4914F6CDD1D) mod 2^64

All derived draws (bounded ints, rationals, unit floats) are defined in
terms of that output stream and nothing else.
"""

from fractions import Fraction

from shortedop._kernels import QQi

_MASK = (1 << 64) - 1
_SCRAMBLE = 0x9E3779B97F4A7C15
_MULT = 0x2545F4914F6CDD1D


class Stream:
    """Stateful deterministic stream; fork() derives an independent child."""

    __slots__ = ("_state",)

    def __init__(self, seed):
        s = (int(seed) ^ _SCRAMBLE) & _MASK
        self._state = s if s else _MULT

    def u64(self):
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & _MASK

    def fork(self):
        return Stream(self.u64())

    def int_between(self, lo, hi):
        """Uniform-ish integer in [lo, hi] (modulo reduction; fixture-grade)."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.u64() % (hi - lo + 1)

    def fraction(self, max_numerator=10, max_denominator=10):
        return Fraction(self.int_between(-max_numerator, max_numerator),
                        self.int_between(1, max_denominator))

    def qqi(self, max_numerator=10, max_denominator=10):
        return QQi(self.fraction(max_numerator, max_denominator),
                   self.fraction(max_numerator, max_denominator))

    def unit(self):
        """Float in [0, 1) with 53 random bits."""
        return (self.u64() >> 11) * (2.0**-53)

    def sym(self):
        """Float in [-1, 1]."""
        return 2.0 * self.unit() - 1.0

    def cnum(self):
        """Complex with independent real and imaginary parts in [-1, 1]."""
        return complex(self.sym(), self.sym())
