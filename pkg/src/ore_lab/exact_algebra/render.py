"""Text rendering that ``parse_expr`` reads back unchanged."""

from __future__ import annotations

from fractions import Fraction

from .polys import var_name


def _coeff_text(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _mono_text(m) -> str:
    parts = []
    for pos, e in enumerate(m):
        if e == 1:
            parts.append(var_name(pos))
        elif e:
            parts.append(f"{var_name(pos)}^{e}")
    return "*".join(parts)


def render_poly(p) -> str:
    if not p.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        mono = _mono_text(m)
        if not mono:
            body = _coeff_text(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_text(mag)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _wrapped(p) -> str:
    """Parenthesize unless the text is a single factor (one variable power or
    a nonnegative integer), so ``a/b`` parses back as written."""
    text = render_poly(p)
    if len(p.terms) == 1:
        (m, c), = p.terms.items()
        simple = not (isinstance(c, Fraction) and (c < 0 or c.denominator != 1))
        factors = sum(1 for e in m if e)
        if simple and ((c == 1 and factors == 1) or not m):
            return text
    return f"({text})"


def render_ratfunc(f) -> str:
    if f.den.is_constant() and f.den.constant_value() == 1:
        return render_poly(f.num)
    return f"{_wrapped(f.num)}/{_wrapped(f.den)}"
