"""Independent reference computations built on sympy."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from ore_lab.exact_algebra.polys import var_name

VARS = ("x0", "x1", "x2")


def sym(name: str) -> sympy.Symbol:
    return sympy.Symbol(name)


def from_text(text: str):
    return sympy.sympify(text.replace("^", "**"), locals={n: sym(n) for n in ("x", "t", "v", "X")})


def poly_to_sympy(p):
    out = sympy.Integer(0)
    for exps, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for pos, e in enumerate(exps):
            if e:
                term *= sym(var_name(pos)) ** e
        out += term
    return out


def rf_to_sympy(f):
    return poly_to_sympy(f.num) / poly_to_sympy(f.den)


def same(a, b) -> bool:
    return sympy.cancel(sympy.together(a - b)) == 0


@st.composite
def poly_texts(draw, names=VARS, max_terms=3, max_exp=3, allow_zero=True):
    n = draw(st.integers(0 if allow_zero else 1, max_terms))
    parts = []
    for _ in range(n):
        c = draw(st.integers(-20, 20).filter(lambda c: allow_zero or c))
        d = draw(st.integers(1, 20))
        exps = [draw(st.integers(0, max_exp)) for _ in names]
        mono = "*".join(f"{v}^{e}" for v, e in zip(names, exps) if e)
        parts.append(f"({c}/{d})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts) if parts else "0"


@st.composite
def ratfunc_texts(draw, names=VARS, max_terms=3, max_exp=2):
    num = draw(poly_texts(names, max_terms, max_exp))
    den = draw(poly_texts(names, max_terms, max_exp, allow_zero=False).filter(
        lambda s: sympy.expand(from_text(s)) != 0))
    return f"({num})/({den})"
