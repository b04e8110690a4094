"""The endomorphism phi: A -> K, the bar map A -> A/P = K and phi_omega.

A is either K itself or K[t] with P = (t).  phi is given by substitution
rules on indeterminates; an indexed family such as ``x{i} -> x{i+1}^{i+1}``
covers infinitely many variables, instantiated on demand.

Image membership and transcendence questions are answered with a
certificate only inside the monomial-substitution class (every rule image is
``c * y^e`` for a single variable ``y``, targets pairwise distinct).  Outside
that class the answer is ``UNKNOWN`` unless a fresh-variable argument applies.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .exact_algebra import MultiPoly, RatFunc, UPoly, parse_expr
from .exact_algebra.polys import ModP, T_POS, var_name, var_pos

__all__ = [
    "Certificate",
    "CoefficientRing",
    "EndoSpec",
    "ImageMembershipResult",
    "TranscendenceResult",
    "INJECTIVE_CERTIFIED",
    "UNKNOWN",
    "apply_phi",
    "bar",
    "check_injectivity",
    "image_membership",
    "phi_omega",
    "transcendence_over_image",
    "verify_certificate",
]

INJECTIVE_CERTIFIED = "InjectiveCertified"
UNKNOWN = "Unknown"

_PLACEHOLDER = re.compile(r"x\{([^{}]*)\}")
_BRACE = re.compile(r"\{([^{}]*)\}")
_LITERAL_VAR = re.compile(r"\b(x\d*|t)\b")
_MONO_TEMPLATE = re.compile(
    r"^\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?x\{([^{}]+)\}\s*(?:\^\s*(?:\{([^{}]+)\}|(\d+)))?\s*$"
)


def _affine(text: str, i: int) -> int:
    """Evaluate an integer expression in ``i`` using +, -, * only."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id == "i":
            return i
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            return a * b
        raise ValueError(f"unsupported index expression {text!r}")

    return ev(ast.parse(text.strip(), mode="eval"))


def _affine_coeffs(text: str) -> tuple[int, int]:
    """(slope, offset) of an index expression, checked affine at a third point."""
    b = _affine(text, 0)
    a = _affine(text, 1) - b
    if _affine(text, 5) != 5 * a + b:
        raise ValueError(f"index expression {text!r} is not affine in i")
    return a, b


@dataclass(frozen=True)
class _Mono:
    """Image c * y^e of a source variable; positions are registry positions."""

    source: int
    target: int
    coef: Fraction
    exp: int


class _Concrete:
    def __init__(self, pattern: str, image_text: str, modulus):
        self.pattern = pattern
        self.pos = var_pos(pattern)
        self.image_text = image_text
        self.image = parse_expr(image_text, modulus)
        if not self.image:
            raise ValueError(f"rule {pattern} -> {image_text}: image must be nonzero")
        self.mono = None
        num, den = self.image.num, self.image.den
        if den.is_constant() and num.is_monomial():
            (m, c), = num.terms.items()
            nz = [(p, e) for p, e in enumerate(m) if e]
            if len(nz) == 1 and nz[0][1] >= 1:
                self.mono = _Mono(self.pos, nz[0][0], c / den.constant_value(), nz[0][1])

    def covers(self, pos: int) -> bool:
        return pos == self.pos

    def support_contains(self, pos: int) -> bool:
        return pos in self.image.variables()


class _Family:
    def __init__(self, image_text: str, modulus):
        self.image_text = image_text
        self.modulus = modulus
        self.index_fns = [_affine_coeffs(t) for t in _PLACEHOLDER.findall(image_text)]
        stripped = _BRACE.sub(" ", _PLACEHOLDER.sub(" ", image_text))
        self.literal_vars = {var_pos(n) for n in _LITERAL_VAR.findall(stripped)}
        self.mono_shape = None
        m = _MONO_TEMPLATE.match(image_text)
        if m:
            coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            slope, offset = _affine_coeffs(m.group(2))
            if m.group(3) is not None:
                eslope, eoffset = _affine_coeffs(m.group(3))
            else:
                eslope, eoffset = 0, int(m.group(4) or 1)
            self.mono_shape = (coef, slope, offset, eslope, eoffset)

    def covers(self, pos: int) -> bool:
        return pos >= 2

    def instantiate(self, i: int) -> RatFunc:
        text = _PLACEHOLDER.sub(lambda mm: f"x{_affine(mm.group(1), i)}", self.image_text)
        text = _BRACE.sub(lambda mm: str(_affine(mm.group(1), i)), text)
        return parse_expr(text, self.modulus)

    def mono_for(self, i: int):
        if self.mono_shape is None:
            return None
        coef, a, b, ea, eb = self.mono_shape
        return _Mono(i + 2, a * i + b + 2, coef, ea * i + eb)

    def support_contains(self, pos: int) -> bool:
        if pos in self.literal_vars:
            return True
        if pos < 2:
            return False
        j = pos - 2
        for a, b in self.index_fns:
            if a == 0:
                if j == b:
                    return True
            elif (j - b) % a == 0 and (j - b) // a >= 0:
                return True
        return False

    def source_of_target(self, pos: int):
        """i with target(i) = pos in the monomial shape, or None."""
        if self.mono_shape is None or pos < 2:
            return None
        _, a, b, _, _ = self.mono_shape
        j = pos - 2
        if a == 0:
            return 0 if j == b else None
        if (j - b) % a or (j - b) // a < 0:
            return None
        return (j - b) // a


class EndoSpec:
    """phi given by rules ``[{"pattern": ..., "image": ...}, ...]``.

    Patterns are a concrete variable (``x``, ``t``, ``x3``) or the family
    ``x{i}``.  Every variable has at most one applicable rule.
    """

    def __init__(self, rules, modulus: int | None = None):
        self.rules = [dict(r) for r in rules]
        self.modulus = modulus
        self.concrete: dict[int, _Concrete] = {}
        self.family: list[_Family] = []
        for r in self.rules:
            pattern, image = r["pattern"].strip(), r["image"]
            if pattern == "x{i}":
                self.family.append(_Family(image, modulus))
            elif "{" in pattern:
                raise ValueError(f"unsupported rule pattern {pattern!r}")
            else:
                rule = _Concrete(pattern, image, modulus)
                if rule.pos in self.concrete:
                    raise ValueError(f"two rules for {pattern}")
                self.concrete[rule.pos] = rule
        if len(self.family) > 1:
            raise ValueError("at most one indexed family rule is supported")
        if self.family:
            clash = [var_name(p) for p in self.concrete if p >= 2]
            if clash:
                raise ValueError(f"variables {clash} are covered by both a concrete and the family rule")
        self._image_cache: dict[int, RatFunc] = {}
        self.apply = lru_cache(maxsize=8192)(self._apply)

    @property
    def has_t(self) -> bool:
        return T_POS in self.concrete

    def covers(self, pos: int) -> bool:
        return pos in self.concrete or any(f.covers(pos) for f in self.family)

    def image_of(self, pos: int) -> RatFunc:
        img = self._image_cache.get(pos)
        if img is not None:
            return img
        if pos in self.concrete:
            img = self.concrete[pos].image
        elif self.family and self.family[0].covers(pos):
            img = self.family[0].instantiate(pos - 2)
            if not img:
                raise ValueError(f"image of {var_name(pos)} is zero")
        else:
            raise KeyError(f"phi does not cover the variable {var_name(pos)}")
        self._image_cache[pos] = img
        return img

    def _apply(self, f: RatFunc) -> RatFunc:
        images = {pos: self.image_of(pos) for pos in f.variables()}
        if all(img.is_polynomial() for img in images.values()):
            polys = {pos: img.num for pos, img in images.items()}
            num = f.num.compose(polys)
            if f.den.is_constant():
                return RatFunc(num.scale(1 / f.den.constant_value()), _reduced=True)
            return RatFunc(num, f.den.compose(polys))
        one = RatFunc.one()
        num = f.num.evaluate_monomials(images, one)
        if f.den.is_constant():
            return num * RatFunc.const(1 / f.den.constant_value()) if f.den.constant_value() != 1 else num
        den = f.den.evaluate_monomials(images, one)
        return num / den

    # support and monomial structure
    def support_contains(self, pos: int) -> bool:
        """Does ``pos`` occur in the image of some variable?"""
        if any(r.support_contains(pos) for r in self.concrete.values()):
            return True
        return any(f.support_contains(pos) for f in self.family)

    def is_monomial_class(self) -> bool:
        if any(r.mono is None for r in self.concrete.values()):
            return False
        for f in self.family:
            if f.mono_shape is None:
                return False
            coef, a, b, ea, eb = f.mono_shape
            if a <= 0 or b < 0 or ea < 0 or eb < 1 or coef == 0:
                return False
        targets = [r.mono.target for r in self.concrete.values()]
        if len(set(targets)) != len(targets):
            return False
        if self.family:
            fam = self.family[0]
            if any(fam.source_of_target(t) is not None for t in targets):
                return False
        return True

    def mono_for_target(self, pos: int):
        """The rule whose image is c * (var pos)^e, in the monomial class."""
        for r in self.concrete.values():
            if r.mono is not None and r.mono.target == pos:
                return r.mono
        for f in self.family:
            i = f.source_of_target(pos)
            if i is not None:
                return f.mono_for(i)
        return None

    def to_json(self):
        return [dict(r) for r in self.rules]

    def __repr__(self):
        return f"EndoSpec({self.rules})"


def check_injectivity(spec: EndoSpec) -> str:
    """INJECTIVE_CERTIFIED when the images are monomials in distinct variables."""
    return INJECTIVE_CERTIFIED if spec.is_monomial_class() else UNKNOWN


class CoefficientRing:
    """A = K (``has_t`` False) or A = K[t] with P = (t).

    Elements of A are always ``UPoly`` in ``t`` over RatFunc; when A = K
    they have degree at most 0.
    """

    def __init__(self, spec: EndoSpec, has_t: bool | None = None):
        self.spec = spec
        phi = spec
        self.has_t = phi.has_t if has_t is None else has_t
        if self.has_t and not phi.has_t:
            raise ValueError("A = K[t] needs a rule for t")
        if not self.has_t and phi.has_t:
            raise ValueError("a rule for t was given but A = K")
        self.zero = UPoly([], RatFunc.zero(), "t")
        self.one = UPoly([RatFunc.one()], RatFunc.zero(), "t")
        self.t = UPoly([RatFunc.zero(), RatFunc.one()], RatFunc.zero(), "t") if self.has_t else None

    def from_k(self, k: RatFunc) -> UPoly:
        return UPoly([k], RatFunc.zero(), "t")

    def coerce(self, x) -> UPoly:
        """Element of A from a RatFunc (possibly containing t), text or UPoly."""
        if isinstance(x, UPoly):
            if not self.has_t and x.degree > 0:
                raise ValueError("A = K has no element involving t")
            return x
        if isinstance(x, str):
            x = parse_expr(x, self.spec.modulus)
        x = RatFunc.coerce(x)
        if T_POS in x.den.variables():
            raise ValueError(f"{x} is not a polynomial in t")
        if T_POS not in x.num.variables():
            return self.from_k(x)
        if not self.has_t:
            raise ValueError("A = K has no element involving t")
        parts = x.num.split_by(T_POS)
        top = max(parts)
        inv_den = RatFunc(MultiPoly.const(1), x.den)
        coeffs = [RatFunc.from_poly(parts[k]) * inv_den if k in parts else RatFunc.zero() for k in range(top + 1)]
        return UPoly(coeffs, RatFunc.zero(), "t")

    def as_ratfunc(self, a: UPoly) -> RatFunc:
        """a with t read as the indeterminate t of the ambient rational functions."""
        if a.degree <= 0:
            return a.coeff(0)
        return a.evaluate(RatFunc.var("t"), RatFunc.one())

    def bar(self, a: UPoly) -> RatFunc:
        return a.coeff(0)

    def phi(self, a: UPoly) -> RatFunc:
        spec = self.spec
        if a.degree <= 0:
            return spec.apply(a.coeff(0))
        acc = RatFunc.zero()
        pt = spec.image_of(T_POS)
        for c in reversed(a.coeffs):
            acc = acc * pt + spec.apply(c)
        return acc

    def exact_div(self, a: UPoly, b: UPoly):
        from .exact_algebra import exact_divide

        return exact_divide(a, b)

    def in_p(self, a: UPoly) -> bool:
        """a lies in P: zero when A = K, divisible by t when A = K[t]."""
        return not a.coeff(0)


def apply_phi(spec: EndoSpec, a) -> RatFunc:
    """phi(a) for a in A (RatFunc, text, or UPoly in t)."""
    if isinstance(a, UPoly):
        return CoefficientRing(spec).phi(a)
    if isinstance(a, str):
        a = parse_expr(a, spec.modulus)
    a = RatFunc.coerce(a)
    missing = [var_name(p) for p in a.variables() if not spec.covers(p)]
    if missing:
        raise KeyError(f"phi does not cover {', '.join(sorted(missing))}")
    return spec.apply(a)


def bar(a, has_t: bool = True) -> RatFunc:
    """Image of a in K = A/P: identity when A = K, t -> 0 when A = K[t]."""
    if isinstance(a, UPoly):
        return a.coeff(0)
    a = RatFunc.coerce(a)
    if not has_t or T_POS not in a.variables():
        return a
    from .exact_algebra import substitute

    return substitute(a, {T_POS: RatFunc.zero()})


def phi_omega(f: UPoly, omega: RatFunc, ring: CoefficientRing) -> RatFunc:
    """sum phi(a_k) omega^k for f = sum a_k X^k in A[X]."""
    acc = RatFunc.zero()
    for c in reversed(f.coeffs):
        acc = acc * omega + ring.phi(c)
    return acc


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable reason; ``kind`` is one of
    ``fresh_variable``, ``exponent_lattice``, ``pole_in_t_image``,
    ``monomial_order`` (algebraic degree), ``pure_power``."""

    kind: str
    variable: str | None = None
    exponent: int | None = None
    modulus: int | None = None
    detail: str = ""

    def to_json(self):
        return {k: v for k, v in self.__dict__.items() if v is not None and v != ""}


@dataclass
class ImageMembershipResult:
    verdict: str  # "InImage" | "NotInImage" | "Unknown"
    preimage: UPoly | None = None
    certificate: Certificate | None = None

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.preimage is not None:
            out["preimage"] = str(self.preimage)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


@dataclass
class TranscendenceResult:
    verdict: str  # "Transcendental" | "AlgebraicWitness" | "Unknown"
    degree: int | None = None
    annihilator: UPoly | None = None
    minimal: bool = False
    certificate: Certificate | None = None
    notes: list = field(default_factory=list)

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.degree is not None:
            out["degree"] = self.degree
            out["minimal_degree_certified"] = self.minimal
        if self.annihilator is not None:
            out["annihilator"] = str(self.annihilator)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _fresh_variable(spec: EndoSpec, k: RatFunc):
    for pos in sorted(k.variables()):
        if not spec.support_contains(pos):
            return var_name(pos)
    return None


def _lattice_violation(spec: EndoSpec, k: RatFunc):
    """First (variable, exponent, modulus) with exponent not a multiple of the
    image exponent, scanning numerator then denominator; None if all fit."""
    for poly in (k.num, k.den):
        for m in poly.terms:
            for pos, e in enumerate(m):
                if not e:
                    continue
                mono = spec.mono_for_target(pos)
                if mono is None:
                    return (var_name(pos), e, 0)
                if e % mono.exp:
                    return (var_name(pos), e, mono.exp)
    return None


def _pull_back_poly(spec: EndoSpec, p: MultiPoly, ring: CoefficientRing) -> RatFunc:
    """Preimage of a lattice-compatible polynomial, as a RatFunc possibly in t."""
    images = {}
    for pos in p.variables():
        mono = spec.mono_for_target(pos)
        images[pos] = mono
    total = RatFunc.zero()
    for m, c in p.terms.items():
        term = RatFunc.const(c)
        for pos, e in enumerate(m):
            if e:
                mono = images[pos]
                src = RatFunc.var(var_name(mono.source)) / RatFunc.const(mono.coef)
                term = term * src ** (e // mono.exp)
        total = total + term
    return total


def image_membership(spec: EndoSpec, k) -> ImageMembershipResult:
    """Decide k in phi(A) (phi(K) when A = K, phi(K)[phi(t)] when A = K[t])."""
    k = RatFunc.coerce(k)
    ring = CoefficientRing(spec)
    fresh = _fresh_variable(spec, k)
    if fresh is not None:
        return ImageMembershipResult(
            "NotInImage",
            certificate=Certificate("fresh_variable", fresh, detail=f"{fresh} occurs in no rule image"),
        )
    if not spec.is_monomial_class():
        return ImageMembershipResult("Unknown")
    bad = _lattice_violation(spec, k)
    if bad is not None:
        name, e, mod = bad
        return ImageMembershipResult(
            "NotInImage",
            certificate=Certificate(
                "exponent_lattice", name, e, mod,
                detail=f"{name}^{e} in the reduced form; image exponents are multiples of {mod}",
            ),
        )
    if spec.has_t:
        t_target = spec.concrete[T_POS].mono.target
        if t_target in k.den.variables():
            name = var_name(t_target)
            return ImageMembershipResult(
                "NotInImage",
                certificate=Certificate(
                    "pole_in_t_image", name,
                    detail=f"denominator involves {name} = phi(t) up to a constant; phi(A) is polynomial in phi(t)",
                ),
            )
    pre = _pull_back_poly(spec, k.num, ring) / _pull_back_poly(spec, k.den, ring)
    preimage = ring.coerce(pre)
    if ring.phi(preimage) != k:
        raise AssertionError(f"preimage {pre} does not reproduce {k}")
    return ImageMembershipResult("InImage", preimage=preimage)


def verify_certificate(spec: EndoSpec, k, cert: Certificate) -> bool:
    """Re-check a NotInImage certificate from scratch."""
    k = RatFunc.coerce(k)
    if cert.kind == "fresh_variable":
        pos = var_pos(cert.variable)
        return pos in k.variables() and not spec.support_contains(pos)
    if cert.kind == "exponent_lattice":
        pos = var_pos(cert.variable)
        if not spec.is_monomial_class():
            return False
        present = any(
            (m[pos] if pos < len(m) else 0) == cert.exponent for p in (k.num, k.den) for m in p.terms
        )
        mono = spec.mono_for_target(pos)
        mod = 0 if mono is None else mono.exp
        return present and mod == cert.modulus and (mod == 0 or cert.exponent % mod != 0)
    if cert.kind == "pole_in_t_image":
        pos = var_pos(cert.variable)
        return (
            spec.has_t
            and spec.is_monomial_class()
            and spec.concrete[T_POS].mono.target == pos
            and pos in k.den.variables()
        )
    return False


def _monomial_order(spec: EndoSpec, omega: RatFunc):
    """Least d with omega^d in the subfield generated by phi(A), for monomial omega."""
    if not (omega.num.is_monomial() and omega.den.is_monomial()):
        return None
    (mn,), (md,) = omega.num.terms, omega.den.terms
    width = max(len(mn), len(md))
    order = 1
    for pos in range(width):
        a = (mn[pos] if pos < len(mn) else 0) - (md[pos] if pos < len(md) else 0)
        if a == 0:
            continue
        mono = spec.mono_for_target(pos)
        if mono is None:
            return None
        need = mono.exp // gcd(mono.exp, abs(a))
        order = order * need // gcd(order, need)
    return order


def transcendence_over_image(spec: EndoSpec, omega, degree_bound: int) -> TranscendenceResult:
    """Is omega transcendental over the subfield generated by phi(A)?

    Transcendental comes with a fresh-variable certificate.  Otherwise a
    pure-power relation omega^d in phi(A) is searched for d <= degree_bound
    and reported as the annihilator b X^d - a in A[X].
    """
    if degree_bound < 1:
        raise ValueError("degree_bound must be at least 1")
    omega = RatFunc.coerce(omega)
    ring = CoefficientRing(spec)
    fresh = _fresh_variable(spec, omega)
    if fresh is not None:
        return TranscendenceResult(
            "Transcendental",
            certificate=Certificate(
                "fresh_variable", fresh,
                detail=f"phi(A) lies in the rational functions without {fresh}",
            ),
        )
    if not spec.is_monomial_class():
        return TranscendenceResult("Unknown", notes=["phi outside the monomial-substitution class"])
    order = _monomial_order(spec, omega)
    power = RatFunc.one()
    for d in range(1, degree_bound + 1):
        power = power * omega
        if _lattice_violation(spec, power) is not None:
            continue
        top = ring.coerce(_pull_back_poly(spec, power.num, ring))
        bottom = ring.coerce(_pull_back_poly(spec, power.den, ring))
        if not ring.has_t:
            top = ring.from_k(top.coeff(0) / bottom.coeff(0))
            bottom = ring.one
        zero_a = ring.zero
        annihilator = UPoly([-top] + [zero_a] * (d - 1) + [bottom], zero_a, "X")
        if phi_omega(annihilator, omega, ring):
            raise AssertionError("annihilator does not vanish at omega")
        minimal = order is not None and order == d
        cert = Certificate("monomial_order" if minimal else "pure_power", detail=f"omega^{d} lies in phi(A)")
        return TranscendenceResult("AlgebraicWitness", d, annihilator, minimal, cert)
    notes = []
    if order is not None:
        notes.append(f"omega is algebraic of degree {order} > bound {degree_bound}")
    return TranscendenceResult("Unknown", notes=notes)
