"""Seeded random elements for the sampled property checks.

Coefficients are rationals with numerator and denominator bounded by 20,
supports use at most 3 variables and total degrees stay at most 3.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact_algebra import ModP, MultiPoly, RatFunc, UPoly
from .exact_algebra.polys import var_pos


@dataclass(frozen=True)
class SampleBounds:
    coeff_bound: int = 20
    max_vars: int = 3
    max_degree: int = 3
    max_terms: int = 3
    t_degree: int = 2
    zero_rate: float = 0.15


class Sampler:
    def __init__(self, generators, seed: int = 0, bounds: SampleBounds | None = None, modulus=None):
        self.generators = [var_pos(g) if isinstance(g, str) else g for g in generators]
        self.rng = random.Random(seed)
        self.bounds = bounds or SampleBounds()
        self.modulus = modulus

    def rational(self):
        b = self.bounds.coeff_bound
        n = 0
        while n == 0:
            n = self.rng.randint(-b, b)
        d = self.rng.randint(1, b)
        if self.modulus is not None:
            return ModP(n, self.modulus) * ModP(d, self.modulus) ** (self.modulus - 2) if d % self.modulus else ModP(n, self.modulus)
        return Fraction(n, d)

    def _poly(self, variables, max_terms, allow_const=True):
        terms = {}
        for _ in range(self.rng.randint(1, max_terms)):
            deg = self.rng.randint(0 if allow_const else 1, self.bounds.max_degree)
            exps = {}
            for _ in range(deg):
                v = self.rng.choice(variables)
                exps[v] = exps.get(v, 0) + 1
            width = max(exps) + 1 if exps else 0
            m = tuple(exps.get(i, 0) for i in range(width))
            terms[m] = self.rational()
        p = MultiPoly(terms)
        return p if p else MultiPoly.const(self.rational())

    def ratfunc(self, allow_zero: bool = True) -> RatFunc:
        if allow_zero and self.rng.random() < self.bounds.zero_rate:
            return RatFunc.zero()
        k = self.rng.randint(1, min(self.bounds.max_vars, len(self.generators)))
        variables = self.rng.sample(self.generators, k)
        num = self._poly(variables, self.bounds.max_terms)
        if self.rng.random() < 0.5:
            return RatFunc(num)
        den = self._poly(variables, 2)
        return RatFunc(num, den)

    def nonzero_ratfunc(self) -> RatFunc:
        return self.ratfunc(allow_zero=False)

    def a_elem(self, ring, allow_zero: bool = True) -> UPoly:
        """Element of A; degree in t up to the bound when A = K[t]."""
        if not ring.has_t:
            return ring.from_k(self.ratfunc(allow_zero))
        if allow_zero and self.rng.random() < self.bounds.zero_rate:
            return ring.zero
        deg = self.rng.randint(0, self.bounds.t_degree)
        coeffs = [self.ratfunc() for _ in range(deg)] + [self.nonzero_ratfunc()]
        return UPoly(coeffs, RatFunc.zero(), "t")

    def ring_elem(self, corner, allow_zero: bool = True):
        a = self.a_elem(corner.coeffs, allow_zero)
        m = self.ratfunc(allow_zero)
        return corner.elem(a, m)

    def choice(self, seq):
        return self.rng.choice(seq)

    def randint(self, lo, hi):
        return self.rng.randint(lo, hi)

    def random(self):
        return self.rng.random()
