"""The split corner ring R = A + vK and its sigma-derivations.

Elements are pairs (a, m) standing for a + v*m with a in A and m in K.  The
bimodule vK has left action a.vk = v phi(a) k and right action vk.a = vk bar(a),
so (vK)^2 = 0 and

    (a + v l)(b + v m) = ab + v(phi(a) m + l bar(b)).

sigma projects onto A and every derivation handled here lands in vK.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact_algebra import RatFunc, UPoly, parse_expr, solve_linear
from .exact_algebra.polys import T_POS, var_name, var_pos
from .maps import (
    CoefficientRing,
    EndoSpec,
    ImageMembershipResult,
    check_injectivity,
    image_membership,
    verify_certificate,
    INJECTIVE_CERTIFIED,
)
from .sampling import Sampler

__all__ = [
    "CommutativeField",
    "CornerRing",
    "Custom",
    "DeltaOmega",
    "DerivationClassification",
    "DuoProbeReport",
    "Inner",
    "LeftDuoWitness",
    "LeibnizReport",
    "MembershipVerdict",
    "NotSigmaDerivation",
    "RingElem",
    "Sum",
    "apply_derivation",
    "check_sigma_derivation",
    "check_sigma_derivations",
    "classify_derivation",
    "derivation_from_json",
    "left_duo_counterexample",
    "principal_right_ideal_membership",
    "right_duo_probe",
]


class NotSigmaDerivation(ValueError):
    """The given table cannot be a sigma-derivation of R."""


@dataclass(frozen=True)
class RingElem:
    a: UPoly
    m: RatFunc

    def __add__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.a + other.a, self.m + other.m)

    def __sub__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.a - other.a, self.m - other.m)

    def __neg__(self) -> "RingElem":
        return RingElem(-self.a, -self.m)

    def __bool__(self):
        return bool(self.a) or bool(self.m)

    def is_zero(self) -> bool:
        return not self

    def __str__(self):
        parts = []
        if self.a:
            parts.append(str(self.a))
        if self.m:
            parts.append("v" if self.m == 1 else f"v*({self.m})")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"a": str(self.a), "m": str(self.m)}


def phi_is_identity(spec: EndoSpec) -> bool:
    """phi fixes every variable it covers (and has no rule for t)."""
    if spec.has_t:
        return False
    for pos, rule in spec.concrete.items():
        if rule.image != RatFunc.var(var_name(pos)):
            return False
    for fam in spec.family:
        if fam.mono_shape != (Fraction(1), 1, 0, 0, 1):
            return False
    return True


def _default_generators(spec: EndoSpec) -> list[str]:
    names = [var_name(p) for p in sorted(spec.concrete) if p != T_POS]
    if spec.family:
        names += [f"x{i}" for i in range(4) if f"x{i}" not in names]
    return names


class CornerRing:
    """R = A + vK over a coefficient ring A with its endomorphism phi.

    ``generators`` are the field generators the scenario works with; they
    drive sampling, derivation tables and witness searches.
    """

    def __init__(self, coeffs: CoefficientRing, generators: list[str] | None = None):
        self.coeffs = coeffs
        self.spec = coeffs.spec
        self.generators = list(generators) if generators else _default_generators(self.spec)
        z = RatFunc.zero()
        self.zero = RingElem(coeffs.zero, z)
        self.one = RingElem(coeffs.one, z)
        self.v = RingElem(coeffs.zero, RatFunc.one())

    @classmethod
    def from_rules(cls, rules, modulus=None, generators=None) -> "CornerRing":
        return cls(CoefficientRing(EndoSpec(rules, modulus)), generators)

    @property
    def has_t(self) -> bool:
        return self.coeffs.has_t

    @property
    def modulus(self):
        return self.spec.modulus

    def is_commutative(self) -> bool:
        return not self.has_t and phi_is_identity(self.spec)

    # construction
    def elem(self, a=None, m=None) -> RingElem:
        a = self.coeffs.zero if a is None else self.coeffs.coerce(a)
        if m is None:
            m = RatFunc.zero()
        elif isinstance(m, str):
            m = parse_expr(m, self.modulus)
        else:
            m = RatFunc.coerce(m)
        if T_POS in m.variables() and self.has_t:
            raise ValueError("the vK component cannot involve t")
        return RingElem(a, m)

    def from_a(self, a) -> RingElem:
        return RingElem(self.coeffs.coerce(a), RatFunc.zero())

    def from_vk(self, m) -> RingElem:
        return self.elem(None, m)

    def generator_elems(self) -> list[tuple[str, RingElem]]:
        """A-generators: t (if present) and the scenario's field generators."""
        out = []
        if self.has_t:
            out.append(("t", RingElem(self.coeffs.t, RatFunc.zero())))
        for g in self.generators:
            out.append((g, self.from_a(RatFunc.var(g))))
        return out

    # arithmetic
    def mul(self, r: RingElem, s: RingElem) -> RingElem:
        a = r.a * s.a
        m = RatFunc.zero()
        if s.m and r.a:
            m = self.coeffs.phi(r.a) * s.m
        if r.m and s.a:
            m = m + r.m * s.a.coeff(0)
        return RingElem(a, m)

    def add(self, r: RingElem, s: RingElem) -> RingElem:
        return r + s

    def sub(self, r: RingElem, s: RingElem) -> RingElem:
        return r - s

    def sigma(self, r: RingElem) -> RingElem:
        return RingElem(r.a, RatFunc.zero())

    def bar(self, a: UPoly) -> RatFunc:
        return a.coeff(0)

    def phi(self, a: UPoly) -> RatFunc:
        return self.coeffs.phi(a)

    def sampler(self, seed: int = 0) -> Sampler:
        return Sampler(self.generators, seed, modulus=self.modulus)


# derivations


@dataclass(frozen=True)
class DeltaOmega:
    omega: RatFunc
    kind = "delta_omega"

    def to_json(self):
        return {"kind": self.kind, "omega": str(self.omega)}


@dataclass(frozen=True)
class Inner:
    y: RingElem
    kind = "inner"

    def to_json(self):
        return {"kind": self.kind, "y": self.y.to_json()}


@dataclass(frozen=True)
class Sum:
    parts: tuple
    kind = "sum"

    def to_json(self):
        return {"kind": self.kind, "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class CommutativeField:
    """delta(a + v b) = v d(a) for the field derivation d given on generators.

    Generators missing from the table are sent to 0.
    """

    d: tuple  # ((name, RatFunc), ...)
    kind = "commutative_field"

    def table(self) -> dict:
        return dict(self.d)

    def to_json(self):
        return {"kind": self.kind, "d": {k: str(v) for k, v in self.d}}


@dataclass(frozen=True)
class Custom:
    """Images of v, t and field generators; extended to R by the Leibniz rule."""

    images: tuple  # ((name, RingElem), ...)
    kind = "custom"

    def table(self) -> dict:
        return dict(self.images)

    def to_json(self):
        return {"kind": self.kind, "images": {k: v.to_json() for k, v in self.images}}


def _elem_from_json(ring: CornerRing, obj) -> RingElem:
    if isinstance(obj, str):
        return ring.from_a(obj)
    return ring.elem(obj.get("a", "0"), obj.get("m", "0"))


def derivation_from_json(ring: CornerRing, obj):
    kind = obj.get("kind")
    if kind == "delta_omega":
        return DeltaOmega(parse_expr(str(obj["omega"]), ring.modulus))
    if kind == "inner":
        return Inner(_elem_from_json(ring, obj["y"]))
    if kind == "sum":
        parts = obj.get("parts", obj.get("terms"))
        if not isinstance(parts, list) or not parts:
            raise ValueError("sum derivation needs a nonempty 'parts' list")
        return Sum(tuple(derivation_from_json(ring, p) for p in parts))
    if kind == "commutative_field":
        if not ring.is_commutative():
            raise ValueError("commutative_field derivations need A = K and phi = identity")
        table = obj.get("d", {})
        for name in table:
            var_pos(name)
        return CommutativeField(tuple((k, parse_expr(str(v), ring.modulus)) for k, v in sorted(table.items())))
    if kind == "custom":
        images = obj.get("images", {})
        for name in images:
            if name != "v":
                var_pos(name)
        return Custom(tuple((k, _elem_from_json(ring, v)) for k, v in sorted(images.items())))
    raise ValueError(f"unknown derivation kind {kind!r}")


class _CustomEval:
    """Leibniz extension of a Custom table, with per-generator caches."""

    def __init__(self, ring: CornerRing, spec: Custom):
        self.ring = ring
        self.table = spec.table()
        self._powers: dict = {}

    def gen(self, name: str) -> RingElem:
        try:
            return self.table[name]
        except KeyError:
            raise ValueError(f"custom derivation has no image for {name}") from None

    def _power(self, name: str, e: int) -> RingElem:
        """delta(g^e) via delta(g^e) = sigma(g) delta(g^(e-1)) + delta(g) g^(e-1)."""
        key = (name, e)
        hit = self._powers.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        g = ring.coeffs.t if name == "t" else ring.coeffs.from_k(RatFunc.var(name))
        if e == 1:
            out = self.gen(name)
        else:
            prev = self._power(name, e - 1)
            g_prev = RingElem(g ** (e - 1), RatFunc.zero())
            out = ring.mul(RingElem(g, RatFunc.zero()), prev) + ring.mul(self.gen(name), g_prev)
        self._powers[key] = out
        return out

    def poly(self, p) -> RingElem:
        ring = self.ring
        total = ring.zero
        for mono, c in p.terms.items():
            acc_elem = None  # the monomial built so far, as RingElem
            acc_d = ring.zero
            for pos, e in enumerate(mono):
                if not e:
                    continue
                name = var_name(pos)
                base = RingElem(ring.coeffs.from_k(RatFunc.var(name) ** e), RatFunc.zero())
                d_pow = self._power(name, e)
                if acc_elem is None:
                    acc_elem, acc_d = base, d_pow
                else:
                    acc_d = ring.mul(ring.sigma(acc_elem), d_pow) + ring.mul(acc_d, base)
                    acc_elem = ring.mul(acc_elem, base)
            if acc_elem is None:
                continue
            cc = RatFunc.const(c)
            total = total + RingElem(acc_d.a * cc, acc_d.m * cc)
        return total

    def field(self, k: RatFunc) -> RingElem:
        ring = self.ring
        dn = self.poly(k.num)
        if k.den.is_constant():
            inv = RatFunc.const(1 / k.den.constant_value())
            return RingElem(dn.a * inv, dn.m * inv)
        dd = self.poly(k.den)
        den = RatFunc.from_poly(k.den)
        inner = dn - ring.mul(ring.from_a(k), dd)
        return ring.mul(inner, ring.from_a(den.inverse()))

    def __call__(self, r: RingElem) -> RingElem:
        ring = self.ring
        out = ring.zero
        if r.m:
            out = out + ring.mul(self.gen("v"), ring.from_a(r.m))
        t_elem = RingElem(ring.coeffs.t, RatFunc.zero()) if ring.has_t else None
        for j, c in enumerate(r.a.coeffs):
            if not c:
                continue
            c_elem = RingElem(ring.coeffs.from_k(c), RatFunc.zero())
            term = self.field(c)
            if j:
                tj = RingElem(ring.coeffs.t ** j, RatFunc.zero())
                term = ring.mul(c_elem, self._power("t", j)) + ring.mul(term, tj)
            out = out + term
        return out


def apply_derivation(ring: CornerRing, spec, r: RingElem) -> RingElem:
    z = RatFunc.zero()
    if isinstance(spec, DeltaOmega):
        return RingElem(ring.coeffs.zero, spec.omega * r.m if r.m else z)
    if isinstance(spec, Inner):
        c, ym = spec.y.a, spec.y.m
        m = z
        if r.m and c:
            m = ring.phi(c) * r.m
        if ym and r.a:
            diff = r.a.coeff(0) - ring.phi(r.a)
            if diff:
                m = m + ym * diff
        return RingElem(ring.coeffs.zero, m)
    if isinstance(spec, Sum):
        out = ring.zero
        for p in spec.parts:
            out = out + apply_derivation(ring, p, r)
        return out
    if isinstance(spec, CommutativeField):
        if not ring.is_commutative():
            raise ValueError("commutative_field derivations need A = K and phi = identity")
        a = r.a.coeff(0)
        m = z
        for name, dval in spec.d:
            if dval and var_pos(name) in a.variables():
                m = m + a.diff(name) * dval
        return RingElem(ring.coeffs.zero, m)
    if isinstance(spec, Custom):
        return _CustomEval(ring, spec)(r)
    raise TypeError(f"not a derivation spec: {spec!r}")


def derivation_evaluator(ring: CornerRing, spec):
    """A callable r -> delta(r); Custom tables keep their caches across calls."""
    if isinstance(spec, Custom):
        return _CustomEval(ring, spec)
    return lambda r: apply_derivation(ring, spec, r)


@dataclass
class LeibnizReport:
    passed: bool
    checked: int
    counterexample: dict | None = None

    def to_json(self):
        out = {"passed": self.passed, "checked": self.checked}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def check_sigma_derivation(ring: CornerRing, spec, sample_count: int, seed: int = 0) -> LeibnizReport:
    """Additivity and delta(rs) = sigma(r) delta(s) + delta(r) s on pairs.

    Pairs of generators (including v) are checked first, then seeded random
    pairs, ``sample_count`` pairs in all unless the generator pairs alone
    exceed it.
    """
    return check_sigma_derivations(ring, [spec], sample_count, seed)[0]


def check_sigma_derivations(ring: CornerRing, specs, sample_count: int, seed: int = 0) -> list[LeibnizReport]:
    """``check_sigma_derivation`` for several specs over one shared set of pairs."""
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    deltas = [derivation_evaluator(ring, spec) for spec in specs]
    gens = [ring.v] + [g for _, g in ring.generator_elems()]
    pairs = [(r, s) for r in gens for s in gens]
    sampler = ring.sampler(seed)
    while len(pairs) < sample_count:
        pairs.append((sampler.ring_elem(ring), sampler.ring_elem(ring)))
    reports = [LeibnizReport(True, 0) for _ in specs]
    for r, s in pairs:
        rs, r_plus_s, sig_r = ring.mul(r, s), r + s, ring.sigma(r)
        for delta, rep in zip(deltas, reports):
            if not rep.passed:
                continue
            dr, ds = delta(r), delta(s)
            lhs = delta(rs)
            rhs = ring.mul(sig_r, ds) + ring.mul(dr, s)
            rep.checked += 1
            if lhs != rhs:
                rep.passed = False
                rep.counterexample = {
                    "law": "leibniz", "r": r.to_json(), "s": s.to_json(),
                    "lhs": lhs.to_json(), "rhs": rhs.to_json(),
                }
                continue
            sum_l, sum_r = delta(r_plus_s), dr + ds
            if sum_l != sum_r:
                rep.passed = False
                rep.counterexample = {
                    "law": "additivity", "r": r.to_json(), "s": s.to_json(),
                    "lhs": sum_l.to_json(), "rhs": sum_r.to_json(),
                }
    return reports


@dataclass
class DerivationClassification:
    kind: str  # Zero | InnerOnly | OuterSum | CommutativeOuter | Unknown
    omega: RatFunc | None = None
    y: RingElem | None = None
    membership: ImageMembershipResult | None = None
    d: dict | None = None
    verified: bool = False
    notes: list = field(default_factory=list)

    def reconstructed(self):
        """The derivation spec this classification asserts."""
        if self.kind == "Zero":
            return DeltaOmega(RatFunc.zero())
        if self.kind == "InnerOnly":
            return Inner(self.y)
        if self.kind == "OuterSum":
            return Sum((DeltaOmega(self.omega), Inner(self.y)))
        if self.kind == "CommutativeOuter":
            return Sum((DeltaOmega(self.omega), CommutativeField(tuple(sorted(self.d.items())))))
        return None

    def to_json(self):
        out = {"kind": self.kind, "verified": self.verified}
        if self.omega is not None:
            out["omega"] = str(self.omega)
        if self.y is not None:
            out["y"] = self.y.to_json()
        if self.membership is not None:
            out["omega_in_phi_A"] = self.membership.to_json()
        if self.d is not None:
            out["d"] = {k: str(v) for k, v in self.d.items()}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _agrees_on_generators(ring: CornerRing, d1, d2) -> bool:
    probes = [ring.v] + [g for _, g in ring.generator_elems()]
    probes += [ring.from_vk(RatFunc.var(name)) for name in ring.generators]
    return all(d1(r) == d2(r) for r in probes)


def classify_derivation(ring: CornerRing, spec) -> DerivationClassification:
    """Write delta = delta_omega + d_y (or the commutative shape) and decide
    whether it is inner via omega in phi(A)."""
    delta = derivation_evaluator(ring, spec)
    dv = delta(ring.v)
    if dv.a:
        raise NotSigmaDerivation(f"delta(v) = {dv} has a nonzero A-part")
    omega = dv.m
    d_omega = DeltaOmega(omega)

    def rest(r):
        return delta(r) - apply_derivation(ring, d_omega, r)

    notes = []
    for name in ring.generators:
        if rest(ring.from_vk(RatFunc.var(name))):
            return DerivationClassification("Unknown", omega, notes=[f"delta - delta_omega is nonzero on v*{name}"])
    values = [(name, g, rest(g)) for name, g in ring.generator_elems()]
    for name, _, val in values:
        if val.a:
            return DerivationClassification("Unknown", omega, notes=[f"delta({name}) has a nonzero A-part"])

    if ring.is_commutative():
        d = {name: val.m for name, _, val in values if val.m}
        if d:
            result = DerivationClassification("CommutativeOuter", omega, d=d)
            result.verified = _agrees_on_generators(
                ring, delta, derivation_evaluator(ring, result.reconstructed())
            )
            return result
        y_rest = ring.zero
    else:
        y_rest = ring.zero
        for name, g, val in values:
            if not val.m:
                continue
            cbar = g.a.coeff(0) - ring.phi(g.a)
            if not cbar:
                return DerivationClassification(
                    "Unknown", omega, notes=[f"bar({name}) = phi({name}), cannot solve for y"]
                )
            y_rest = RingElem(ring.coeffs.zero, val.m / cbar)
            notes.append(f"y recovered from delta({name})")
            break

    if not omega:
        kind = "InnerOnly" if y_rest else "Zero"
        result = DerivationClassification(kind, omega, y=y_rest if y_rest else None, notes=notes)
        if kind == "Zero":
            result.y = None
    else:
        membership = image_membership(ring.spec, omega)
        if membership.verdict == "InImage":
            y = RingElem(membership.preimage, y_rest.m)
            result = DerivationClassification("InnerOnly", omega, y=y, membership=membership, notes=notes)
        else:
            result = DerivationClassification("OuterSum", omega, y=y_rest, membership=membership, notes=notes)
            if membership.verdict == "Unknown":
                result.notes.append("whether omega lies in phi(A) is undecided")
    result.verified = _agrees_on_generators(ring, delta, derivation_evaluator(ring, result.reconstructed()))
    if not result.verified:
        result.notes.append("reconstruction differs from delta on a generator")
    return result


# ideals and duo diagnostics


@dataclass
class MembershipVerdict:
    verdict: str  # In | NotIn
    cofactor: RingElem | None = None
    verified: bool = False
    crosscheck: str | None = None  # agree | disagree, A = K only

    def __bool__(self):
        return self.verdict == "In"

    def to_json(self):
        out = {"verdict": self.verdict, "verified": self.verified}
        if self.cofactor is not None:
            out["cofactor"] = self.cofactor.to_json()
        if self.crosscheck is not None:
            out["linear_crosscheck"] = self.crosscheck
        return out


def _linear_membership(ring: CornerRing, s: RingElem, r: RingElem) -> bool:
    """s in rR for A = K, from the 2x2 system in (g_a, g_m)."""
    a, m = r.a.coeff(0), r.m
    rows = [{0: a} if a else {}, {k: v for k, v in ((0, m), (1, ring.phi(r.a))) if v}]
    return solve_linear(rows, [s.a.coeff(0), s.m], 2).consistent


def principal_right_ideal_membership(ring: CornerRing, s: RingElem, r: RingElem) -> MembershipVerdict:
    """Decide s in rR; In carries g with r g = s, checked by multiplication."""
    z = RatFunc.zero()
    if not r:
        verdict = MembershipVerdict("In", ring.zero) if not s else MembershipVerdict("NotIn")
    elif r.a:
        ga = ring.coeffs.exact_div(s.a, r.a)
        if ga is None:
            verdict = MembershipVerdict("NotIn")
        else:
            gm = (s.m - r.m * ga.coeff(0)) / ring.phi(r.a)
            verdict = MembershipVerdict("In", RingElem(ga, gm))
    else:
        if s.a:
            verdict = MembershipVerdict("NotIn")
        else:
            verdict = MembershipVerdict("In", RingElem(ring.coeffs.from_k(s.m / r.m), z))
    if verdict.cofactor is not None:
        verdict.verified = ring.mul(r, verdict.cofactor) == s
        if not verdict.verified:
            raise AssertionError(f"cofactor {verdict.cofactor} fails r*g = s")
    if not ring.has_t:
        ok = _linear_membership(ring, s, r)
        verdict.crosscheck = "agree" if ok == bool(verdict) else "disagree"
    return verdict


@dataclass
class DuoProbeReport:
    passed: bool
    checked: int
    refutations: list
    advisory: bool = False
    notes: list = field(default_factory=list)

    def to_json(self):
        out = {
            "passed": self.passed,
            "checked": self.checked,
            "refutations": self.refutations,
            "advisory": self.advisory,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def right_duo_probe(ring: CornerRing, sample_count: int, seed: int = 0) -> DuoProbeReport:
    """s r in rR for sampled pairs; advisory when phi is not certified injective."""
    sampler = ring.sampler(seed)
    refutations = []
    disagreements = 0
    for _ in range(sample_count):
        s, r = sampler.ring_elem(ring), sampler.ring_elem(ring)
        res = principal_right_ideal_membership(ring, ring.mul(s, r), r)
        if res.crosscheck == "disagree":
            disagreements += 1
        if not res:
            refutations.append({"s": s.to_json(), "r": r.to_json()})
    advisory = check_injectivity(ring.spec) != INJECTIVE_CERTIFIED
    notes = []
    if advisory:
        notes.append("phi is not certified injective; the probe is advisory")
    if disagreements:
        notes.append(f"{disagreements} linear cross-check disagreements")
    return DuoProbeReport(not refutations and not disagreements, sample_count, refutations, advisory, notes)


@dataclass
class LeftDuoWitness:
    g: RingElem
    s: RingElem
    product: RingElem
    certificate: object
    verified: bool

    def to_json(self):
        return {
            "g": self.g.to_json(),
            "s": self.s.to_json(),
            "g_times_s": self.product.to_json(),
            "certificate": self.certificate.to_json(),
            "verified": self.verified,
        }


def left_duo_counterexample(ring: CornerRing):
    """(v, s) with v s = v bar(s) outside Rv = v phi(A), or None.

    Candidates are the scenario's field generators in order.
    """
    if ring.is_commutative():
        return None
    for name in ring.generators:
        k = RatFunc.var(name)
        res = image_membership(ring.spec, k)
        if res.verdict != "NotInImage":
            continue
        s = ring.from_a(k)
        product = ring.mul(ring.v, s)
        ok = product == ring.from_vk(k) and verify_certificate(ring.spec, product.m, res.certificate)
        return LeftDuoWitness(ring.v, s, product, res.certificate, ok)
    return None
