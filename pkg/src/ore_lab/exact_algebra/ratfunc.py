"""Reduced rational functions: elements of K = F(x0, x1, ...)."""

from __future__ import annotations

from fractions import Fraction

from .polys import ModP, MultiPoly, REGISTRY, VarId, poly_cofactors, var_pos

__all__ = ["RatFunc", "rf_arith", "substitute"]


def _is_one(p: MultiPoly) -> bool:
    return p.is_one()


class RatFunc:
    """num/den with gcd(num, den) = 1 and den monic (deglex leading term).

    Instances are immutable; equality is equality of normalized parts.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, _reduced=False):
        if den is None:
            den = MultiPoly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = MultiPoly.const(1)
            elif not _is_one(den):
                _, num, den = poly_cofactors(num, den)
                den, lc = den.monic()
                if lc != 1:
                    num = num.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c) -> "RatFunc":
        if isinstance(c, int):
            c = Fraction(c)
        return cls(MultiPoly.const(c), _reduced=True)

    @classmethod
    def zero(cls) -> "RatFunc":
        return _ZERO

    @classmethod
    def one(cls) -> "RatFunc":
        return _ONE

    @classmethod
    def var(cls, name, power: int = 1) -> "RatFunc":
        return cls(MultiPoly.var(name, power), _reduced=True)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p, _reduced=True)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MultiPoly):
            return cls.from_poly(x)
        if isinstance(x, (int, Fraction, ModP)):
            return cls.const(x)
        if isinstance(x, str):
            from .parser import parse_expr

            return parse_expr(x)
        raise TypeError(f"cannot make a rational function from {x!r}")

    # predicates
    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return _is_one(self.den)

    def is_constant(self) -> bool:
        return self.num.is_constant() and _is_one(self.den)

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if _is_one(self.den) and _is_one(other.den):
            return RatFunc(self.num + other.num, self.den, _reduced=True)
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RatFunc(a + c, b) if not _is_one(b) else RatFunc(a + c, b, _reduced=True)
        if _is_one(b):
            return RatFunc(a * d + c, d, _reduced=True)
        if _is_one(d):
            return RatFunc(a + c * b, b, _reduced=True)
        # Henrici: with g = gcd(b, d) only g can share factors with the new numerator
        g, b1, d1 = poly_cofactors(b, d)
        num = a * d1 + c * b1
        if num.is_zero():
            return _ZERO
        if g.is_constant():
            return RatFunc(num, b * d1, _reduced=True)
        _, num, g1 = poly_cofactors(num, g)
        den, lc = (b1 * d1 * g1).monic()
        if lc != 1:
            num = num.scale(1 / lc)
        return RatFunc(num, den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return _ZERO
        a, b, c, d = self.num, self.den, other.num, other.den
        if _is_one(b) and _is_one(d):
            return RatFunc(a * c, b, _reduced=True)
        # cross-cancel so the product is already reduced
        if not _is_one(d):
            _, a, d = poly_cofactors(a, d)
        if not _is_one(b):
            _, c, b = poly_cofactors(c, b)
        den, lc = (b * d).monic()
        num = a * c
        if lc != 1:
            num = num.scale(1 / lc)
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        den, lc = self.num.monic()
        return RatFunc(self.den.scale(1 / lc), den, _reduced=True)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, _reduced=True)

    def diff(self, var) -> "RatFunc":
        """Partial derivative with respect to ``var`` (name, VarId or position)."""
        pos = _pos(var)
        n, d = self.num, self.den
        dn, dd = n.diff(pos), d.diff(pos)
        if dd.is_zero():
            return RatFunc(dn, d)
        return RatFunc(dn * d - n * dd, d * d)

    # comparison
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, ModP, MultiPoly)):
            return self == RatFunc.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        from .render import render_ratfunc

        return render_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self})"


_ZERO = RatFunc(MultiPoly(), _reduced=True)
_ONE = RatFunc(MultiPoly.const(1), _reduced=True)


def _pos(var) -> int:
    if isinstance(var, VarId):
        return var.pos
    if isinstance(var, str):
        return var_pos(var)
    return int(var)


def rf_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Field operation ``op`` in {add, sub, mul, div} on two rational functions."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by the zero function")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: RatFunc, assignment: dict) -> RatFunc:
    """Image of ``f`` under x -> assignment[x]; unassigned variables are fixed.

    Keys may be names, VarIds or positions; values anything RatFunc.coerce takes.
    """
    images = {}
    for k, v in assignment.items():
        images[_pos(k)] = RatFunc.coerce(v)
    for pos in f.variables():
        if pos not in images:
            images[pos] = RatFunc.from_poly(MultiPoly.var(pos))
            REGISTRY.touch(pos)
    num = f.num.evaluate_monomials(images, _ONE)
    den = f.den.evaluate_monomials(images, _ONE)
    if not den:
        raise ZeroDivisionError("substituted denominator is identically zero")
    return num / den
