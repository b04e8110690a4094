"""Sparse multivariate polynomials with exact coefficients.

Monomials are dense exponent tuples indexed by variable position, with
trailing zeros trimmed, so ``()`` is the constant monomial.  Positions come
from :class:`Registry`: the Asano generator ``x`` sits at 0, the A-variable
``t`` at 1 and ``x<i>`` at ``i + 2``.  Arithmetic and gcds run in
python-flint; "leading term" means its deglex leading term, which fixes the
monic normal form of denominators.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from functools import lru_cache

import flint

__all__ = [
    "ModP",
    "MultiPoly",
    "Registry",
    "REGISTRY",
    "VarId",
    "poly_gcd",
    "poly_cofactors",
    "var_pos",
    "var_name",
]

Monomial = tuple

_X_NAME = re.compile(r"^x(\d+)$")

T_POS = 1
ASANO_POS = 0


class ModP:
    """Element of the prime field F_p.

    Mixes with ``int`` and ``Fraction`` operands by reducing them mod p, so
    constants created without knowledge of the base field are absorbed.
    """

    __slots__ = ("v", "p")

    def __init__(self, v, p: int):
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise ZeroDivisionError(f"{v} has no image in F_{p}")
            v = v.numerator * pow(v.denominator, -1, p)
        self.v = int(v) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, (int, Fraction)):
            return ModP(other, self.p).v
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pow__(self, e: int):
        return ModP(pow(self.v, e, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.v == o

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


def var_pos(name: str) -> int:
    """Position of a named indeterminate (``x``, ``t`` or ``x<i>``)."""
    if name == "x":
        return ASANO_POS
    if name == "t":
        return T_POS
    m = _X_NAME.match(name)
    if m is None:
        raise ValueError(f"not a variable name: {name!r}")
    return int(m.group(1)) + 2


def var_name(pos: int) -> str:
    if pos == ASANO_POS:
        return "x"
    if pos == T_POS:
        return "t"
    return f"x{pos - 2}"


class VarId:
    """Handle on an indeterminate; equal positions are the same variable."""

    __slots__ = ("pos",)

    def __init__(self, pos: int):
        self.pos = pos

    @classmethod
    def named(cls, name: str) -> "VarId":
        return cls(var_pos(name))

    @classmethod
    def x(cls, index: int) -> "VarId":
        return cls(index + 2)

    @property
    def name(self) -> str:
        return var_name(self.pos)

    @property
    def index(self):
        """``i`` for ``x<i>``; None for ``t`` and ``x``."""
        return self.pos - 2 if self.pos >= 2 else None

    def __eq__(self, other):
        return isinstance(other, VarId) and other.pos == self.pos

    def __hash__(self):
        return hash(("VarId", self.pos))

    def __lt__(self, other):
        return self.pos < other.pos

    def __repr__(self):
        return f"VarId({self.name})"


class Registry:
    """Append-only record of the indeterminates touched so far."""

    def __init__(self):
        self._lock = threading.Lock()
        self._seen: list[int] = []
        self._known: set[int] = set()

    def touch(self, name_or_pos) -> VarId:
        pos = var_pos(name_or_pos) if isinstance(name_or_pos, str) else int(name_or_pos)
        if pos not in self._known:
            with self._lock:
                if pos not in self._known:
                    self._seen.append(pos)
                    self._known.add(pos)
        return VarId(pos)

    def seen(self) -> list[VarId]:
        return [VarId(p) for p in list(self._seen)]

    def fresh(self) -> VarId:
        """An ``x<i>`` with index above every ``x<j>`` touched so far."""
        with self._lock:
            top = max((p for p in self._seen if p >= 2), default=1)
            pos = top + 1
            self._seen.append(pos)
            self._known.add(pos)
        return VarId(pos)


REGISTRY = Registry()


def _mono_key(m: Monomial):
    return (sum(m), m)


_BASE_CAP = 16


def _cap_for(width: int) -> int:
    cap = _BASE_CAP
    while cap < width:
        cap *= 2
    return cap


@lru_cache(maxsize=64)
def _ctx(cap: int, modulus):
    names = tuple(f"g{i}" for i in range(cap))
    if modulus is None:
        return flint.fmpq_mpoly_ctx.get(names, ordering="deglex")
    if modulus < 2 ** 63:
        return flint.nmod_mpoly_ctx.get(names, ordering="deglex", modulus=modulus)
    return flint.fmpz_mod_mpoly_ctx.get(names, ordering="deglex", modulus=modulus)


def _scalar(c, modulus):
    """Coefficient in the form flint expects for the given base field."""
    if modulus is None:
        if isinstance(c, ModP):
            raise ValueError("F_p coefficient in a polynomial over Q")
        if isinstance(c, int):
            return flint.fmpq(c)
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, ModP):
        if c.p != modulus:
            raise ValueError(f"mixing F_{c.p} and F_{modulus}")
        return c.v
    return ModP(c, modulus).v


def _modulus_of(c):
    return c.p if isinstance(c, ModP) else None


class MultiPoly:
    """Immutable sparse polynomial over Q or F_p, backed by a flint mpoly.

    ``terms`` is a lazily built view {monomial: coefficient} with trimmed
    exponent tuples and Fraction (or ModP) coefficients.
    """

    __slots__ = ("_f", "_mod", "_cap", "_terms", "_hash")

    def __init__(self, terms=None, _clean=False):
        mod = None
        width = 0
        if terms:
            for m, c in terms.items():
                if isinstance(c, ModP):
                    mod = c.p
                if len(m) > width:
                    width = len(m)
        cap = _cap_for(width)
        ctx = _ctx(cap, mod)
        if terms:
            d = {}
            pad = (0,) * cap
            for m, c in terms.items():
                if not c:
                    continue
                key = tuple(m) + pad[len(m):]
                v = _scalar(c, mod)
                d[key] = d[key] + v if key in d else v
            self._f = ctx.from_dict(d)
        else:
            self._f = ctx.from_dict({})
        self._mod = mod
        self._cap = cap
        self._terms = None
        self._hash = None

    @classmethod
    def _wrap(cls, f, mod, cap) -> "MultiPoly":
        out = cls.__new__(cls)
        out._f = f
        out._mod = mod
        out._cap = cap
        out._terms = None
        out._hash = None
        return out

    # constructors
    @classmethod
    def const(cls, c) -> "MultiPoly":
        mod = _modulus_of(c)
        ctx = _ctx(_BASE_CAP, mod)
        return cls._wrap(ctx.constant(_scalar(c, mod)), mod, _BASE_CAP)

    @classmethod
    def var(cls, v, power: int = 1) -> "MultiPoly":
        pos = v.pos if isinstance(v, VarId) else (var_pos(v) if isinstance(v, str) else v)
        REGISTRY.touch(pos)
        cap = _cap_for(pos + 1)
        return cls._wrap(_ctx(cap, None).gen(pos) ** power, None, cap)

    # views
    @property
    def terms(self) -> dict:
        if self._terms is None:
            out = {}
            q = self._mod is None
            for e, c in self._f.terms():
                m = [int(k) for k in e]
                while m and m[-1] == 0:
                    m.pop()
                out[tuple(m)] = Fraction(int(c.p), int(c.q)) if q else ModP(int(c), self._mod)
            self._terms = out
        return self._terms

    def _coeff(self, c):
        if self._mod is None:
            return Fraction(int(c.p), int(c.q))
        return ModP(int(c), self._mod)

    # predicates
    def is_zero(self) -> bool:
        return self._f.is_zero()

    def __bool__(self):
        return not self._f.is_zero()

    def is_constant(self) -> bool:
        return self._f.is_constant()

    def is_one(self) -> bool:
        return self._f.is_one()

    def is_monomial(self) -> bool:
        return len(self._f) == 1

    def __len__(self):
        return len(self._f)

    def constant_value(self):
        if self._f.is_zero():
            return Fraction(0) if self._mod is None else ModP(0, self._mod)
        if self._f.is_constant():
            return self._coeff(self._f.leading_coefficient())
        return self.terms.get((), Fraction(0) if self._mod is None else ModP(0, self._mod))

    # structure
    def lead(self):
        """(monomial, coefficient) of the leading term in deglex order."""
        if self._f.is_zero():
            raise ValueError("zero polynomial has no leading term")
        e, c = next(iter(self._f.terms()))
        m = [int(k) for k in e]
        while m and m[-1] == 0:
            m.pop()
        return tuple(m), self._coeff(c)

    def variables(self) -> set[int]:
        if self._f.is_constant():
            return set()
        return {i for i, d in enumerate(self._f.degrees()) if d > 0}

    def total_degree(self) -> int:
        if self._f.is_zero():
            return -1
        return int(self._f.total_degree())

    def degree_in(self, pos: int) -> int:
        if self._f.is_zero():
            return -1
        if pos >= self._cap:
            return 0
        return int(self._f.degrees()[pos])

    def coefficient_domain(self):
        """The prime p for polynomials over F_p, else None."""
        return self._mod

    # arithmetic plumbing
    def _lift(self, cap: int, mod) -> "MultiPoly":
        if cap == self._cap and mod == self._mod:
            return self
        if mod != self._mod:
            if self._mod is not None:
                raise ValueError(f"mixing F_{self._mod} and F_{mod}")
            terms = {m: ModP(c, mod) for m, c in self.terms.items()}
            out = MultiPoly(terms)
            if out._cap != cap:
                out = out._lift(cap, mod)
            return out
        f = self._f.project_to_context(_ctx(cap, mod))
        return MultiPoly._wrap(f, mod, cap)

    def _pair(self, other: "MultiPoly"):
        if other._cap == self._cap and other._mod == self._mod:
            return self._f, other._f, self._cap, self._mod
        cap = max(self._cap, other._cap)
        mod = self._mod if self._mod is not None else other._mod
        return self._lift(cap, mod)._f, other._lift(cap, mod)._f, cap, mod

    def _as_poly(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other):
        other = self._as_poly(other)
        a, b, cap, mod = self._pair(other)
        return MultiPoly._wrap(a + b, mod, cap)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._wrap(-self._f, self._mod, self._cap)

    def __sub__(self, other):
        other = self._as_poly(other)
        a, b, cap, mod = self._pair(other)
        return MultiPoly._wrap(a - b, mod, cap)

    def __rsub__(self, other):
        return MultiPoly.const(other) - self

    def scale(self, c) -> "MultiPoly":
        mod = self._mod if self._mod is not None else _modulus_of(c)
        src = self if mod == self._mod else self._lift(self._cap, mod)
        return MultiPoly._wrap(src._f * _scalar(c, mod), mod, src._cap)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        a, b, cap, mod = self._pair(other)
        return MultiPoly._wrap(a * b, mod, cap)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        return MultiPoly._wrap(self._f ** e, self._mod, self._cap)

    def monic(self):
        """(self / lc, lc); the zero polynomial is returned unchanged with lc 1."""
        one = Fraction(1) if self._mod is None else ModP(1, self._mod)
        if self._f.is_zero():
            return self, one
        lc = self._coeff(self._f.leading_coefficient())
        if lc == 1:
            return self, lc
        return self.scale(1 / lc), lc

    def exact_div(self, q: "MultiPoly"):
        """Quotient of exact division by ``q``, or None if ``q`` does not divide."""
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a, b, cap, mod = self._pair(q)
        quot, rem = divmod(a, b)
        if not rem.is_zero():
            return None
        return MultiPoly._wrap(quot, mod, cap)

    def diff(self, pos: int) -> "MultiPoly":
        if pos >= self._cap:
            return MultiPoly._wrap(self._f - self._f, self._mod, self._cap)
        return MultiPoly._wrap(self._f.derivative(pos), self._mod, self._cap)

    def compose(self, images: dict) -> "MultiPoly":
        """Substitute polynomials for variables: {position: MultiPoly}."""
        if self._f.is_constant():
            return self
        cap = self._cap
        mod = self._mod
        for img in images.values():
            cap = max(cap, img._cap)
            if img._mod is not None:
                mod = img._mod
        src = self._lift(cap, mod)
        ctx = _ctx(cap, mod)
        gens = list(ctx.gens())
        for pos, img in images.items():
            gens[pos] = img._lift(cap, mod)._f
        return MultiPoly._wrap(src._f.compose(*gens), mod, cap)

    def evaluate_monomials(self, images: dict, one):
        """Sum of c * prod(images[pos] ** e); ``images`` values support + and *."""
        total = None
        cache: dict = {}
        for m, c in self.terms.items():
            term = None
            for pos, e in enumerate(m):
                if not e:
                    continue
                key = (pos, e)
                f = cache.get(key)
                if f is None:
                    f = images[pos] ** e
                    cache[key] = f
                term = f if term is None else term * f
            term = one * c if term is None else term * c
            total = term if total is None else total + term
        return total if total is not None else one * 0

    def split_by(self, pos: int) -> dict:
        """Coefficients with respect to variable ``pos``: {degree: MultiPoly}."""
        out: dict = {}
        for m, c in self.terms.items():
            e = m[pos] if pos < len(m) else 0
            if e:
                nm = list(m)
                nm[pos] = 0
                while nm and nm[-1] == 0:
                    nm.pop()
                nm = tuple(nm)
            else:
                nm = m
            out.setdefault(e, {})[nm] = c
        return {e: MultiPoly(t) for e, t in out.items()}

    # comparison
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other._cap == self._cap and other._mod == self._mod:
                return self._f == other._f
            if (self._mod is None) != (other._mod is None):
                return self.terms == other.terms
            a, b, _, _ = self._pair(other)
            return a == b
        if isinstance(other, (int, Fraction, ModP)):
            return self == MultiPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]), reverse=True)

    def __str__(self):
        from .render import render_poly

        return render_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"


def poly_cofactors(p: MultiPoly, q: MultiPoly):
    """(g, p/g, q/g) with g = gcd(p, q) monic; gcd(0, 0) = 0."""
    if p.is_zero() and q.is_zero():
        return MultiPoly(), p, q
    if p.is_zero():
        g, lc = q.monic()
        return g, p, MultiPoly.const(lc)
    if q.is_zero():
        g, lc = p.monic()
        return g, MultiPoly.const(lc), q
    if p.is_constant() or q.is_constant():
        return MultiPoly.const(1 if p._mod is None and q._mod is None else ModP(1, p._mod or q._mod)), p, q
    a, b, cap, mod = p._pair(q)
    g = a.gcd(b)
    if g.is_one():
        return MultiPoly._wrap(g, mod, cap), MultiPoly._wrap(a, mod, cap), MultiPoly._wrap(b, mod, cap)
    gp = MultiPoly._wrap(g, mod, cap)
    gp, lc = gp.monic()
    pa = MultiPoly._wrap(a / g, mod, cap)
    pb = MultiPoly._wrap(b / g, mod, cap)
    if lc != 1:
        pa, pb = pa.scale(lc), pb.scale(lc)
    return gp, pa, pb


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Monic greatest common divisor; gcd(p, 0) is p made monic."""
    return poly_cofactors(p, q)[0]
