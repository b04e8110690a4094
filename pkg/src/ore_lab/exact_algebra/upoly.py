"""Dense univariate polynomials over an exact coefficient ring.

Used for K[t] (the coefficient ring A), K[X] and A[X].  Coefficients only
need ``+ - *``, ``==`` and truthiness; the ring's zero travels with the value.
"""

from __future__ import annotations

import re

__all__ = ["UPoly", "exact_divide"]

_ATOMIC = re.compile(r"-?[A-Za-z0-9_^*]+")


class UPoly:
    __slots__ = ("coeffs", "zero", "var", "_hash")

    def __init__(self, coeffs, zero, var: str = "X"):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.zero = zero
        self.var = var
        self._hash = None

    @classmethod
    def constant(cls, c, zero, var: str = "X") -> "UPoly":
        return cls([c], zero, var)

    def _like(self, coeffs) -> "UPoly":
        return UPoly(coeffs, self.zero, self.var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.zero

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.zero

    def map(self, fn) -> "UPoly":
        """Coefficientwise image; the caller supplies the new zero via fn(zero)."""
        return UPoly([fn(c) for c in self.coeffs], fn(self.zero), self.var)

    def __add__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self) -> "UPoly":
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like([self.coeff(k) - other.coeff(k) for k in range(n)])

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly) or other.var != self.var:
            return self._like([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return self._like([])
        out = [self.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._like(out)

    def scale_left(self, c) -> "UPoly":
        return self._like([c * a for a in self.coeffs])

    def shift(self, k: int) -> "UPoly":
        """Multiply by var**k."""
        if not self.coeffs:
            return self
        return self._like([self.zero] * k + list(self.coeffs))

    def __pow__(self, e: int) -> "UPoly":
        out = None
        base = self
        while e:
            if e & 1:
                out = base if out is None else out * base
            e >>= 1
            if e:
                base = base * base
        if out is None:
            raise ValueError("zeroth power needs the coefficient unit; build it explicitly")
        return out

    def evaluate(self, x, one=None):
        """Horner evaluation at ``x``."""
        acc = self.zero if one is None else one * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            ctext = str(c)
            if not mono:
                part = ctext if _ATOMIC.fullmatch(ctext) else f"({ctext})"
            elif ctext in ("1", "-1"):
                part = mono if ctext == "1" else f"-{mono}"
            elif _ATOMIC.fullmatch(ctext):
                part = f"{ctext}*{mono}"
            else:
                part = f"({ctext})*{mono}"
            if not out:
                out = part
            elif part.startswith("-"):
                out += " - " + part[1:]
            else:
                out += " + " + part
        return out

    def __repr__(self):
        return f"UPoly[{self.var}]({self})"


def _coeff_exact_div(a, b):
    if isinstance(a, UPoly):
        return exact_divide(a, b)
    return a / b


def exact_divide(p: UPoly, q: UPoly):
    """g with p = q*g, or None when q does not divide p.

    Works over any integral domain whose coefficient division is exact:
    fields directly, and polynomial coefficients recursively.
    """
    if not q.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p.coeffs:
        return p._like([])
    if p.degree < q.degree:
        return None
    rem = list(p.coeffs)
    dq = q.degree
    lq = q.coeffs[-1]
    quot = [p.zero] * (p.degree - dq + 1)
    for k in range(p.degree - dq, -1, -1):
        top = rem[k + dq]
        if not top:
            continue
        c = _coeff_exact_div(top, lq)
        if c is None:
            return None
        quot[k] = c
        for j, b in enumerate(q.coeffs):
            if b:
                rem[k + j] = rem[k + j] - c * b
    if any(rem[:dq]):
        return None
    return p._like(quot)
