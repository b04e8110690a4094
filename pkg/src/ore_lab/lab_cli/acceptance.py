"""The acceptance suite behind ``ore-lab reproduce``.

Each criterion returns a CriterionResult; it passes only when every check
holds and the run finished inside its time limit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..corner_ring import (
    Inner,
    RingElem,
    check_sigma_derivations,
    left_duo_counterexample,
    right_duo_probe,
)
from ..exact_algebra import RatFunc
from ..ore_poly import (
    brute_force_two_sided_probe,
    classify_principal_ideal,
    commutative_vx_check,
    d_value,
    derivation_shift_iso,
    linear_membership_oracle,
    phi_iso,
    phi_iso_inv,
    right_ideal_membership,
    shifted_extension,
    standard_multipliers,
    verify_marks_conditions,
)
from .scenario import preset

__all__ = ["CRITERIA", "CriterionResult", "run_criterion", "run_all"]


@dataclass
class CriterionResult:
    number: int
    title: str
    checks_passed: bool
    elapsed: float
    limit: float
    details: dict = field(default_factory=dict)

    @property
    def within_limit(self) -> bool:
        return self.elapsed <= self.limit

    @property
    def passed(self) -> bool:
        return self.checks_passed and self.within_limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.elapsed:.1f}s / {self.limit:.0f}s"
        if not self.within_limit:
            timing += " over time"
        return f"[{status}] {self.number}. {self.title} ({timing})"

    def to_json(self):
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "checks_passed": self.checks_passed,
            "elapsed_s": round(self.elapsed, 3),
            "limit_s": self.limit,
            "details": self.details,
        }


def _delta_presets():
    return [preset("asano"), preset("example-4.1"), preset("final-example", 0), preset("final-example", 2)]


def _label(cfg) -> str:
    k = cfg.params.get("k")
    return cfg.name if k is None else f"{cfg.name}(k={k})"


def leibniz_suite(seed: int = 0, pairs: int = 1000, inner_count: int = 5) -> tuple[bool, dict]:
    ok = True
    details = {}
    for cfg in _delta_presets():
        ring = cfg.ring
        sampler = ring.sampler(seed + 101)
        ys = [sampler.ring_elem(ring) for _ in range(inner_count)]
        specs = [cfg.ext.derivation] + [Inner(y) for y in ys]
        reports = check_sigma_derivations(ring, specs, pairs, seed)
        entry = {"delta_omega": reports[0].to_json(), "inner": [r.to_json() for r in reports[1:]]}
        details[_label(cfg)] = entry
        ok &= all(r.passed and r.checked >= pairs for r in reports)
    return ok, details


def isomorphism_suite(seed: int = 0, pairs: int = 500, degree: int = 4) -> tuple[bool, dict]:
    ok = True
    details = {}
    for cfg in _delta_presets():
        ext = cfg.ext
        sampler = cfg.ring.sampler(seed)
        bad_hom = bad_inv = 0
        for _ in range(pairs):
            f, g = ext.random_poly(sampler, degree), ext.random_poly(sampler, degree)
            tf, tg = phi_iso(f), phi_iso(g)
            if phi_iso(ext.mul(f, g)) != tf * tg:
                bad_hom += 1
            if phi_iso_inv(tf) != f or phi_iso_inv(tg) != g:
                bad_inv += 1
        details[_label(cfg)] = {"pairs": pairs, "homomorphism_failures": bad_hom, "inverse_failures": bad_inv}
        ok &= not bad_hom and not bad_inv
    return ok, details


def d_homomorphism_suite(seed: int = 0, pairs: int = 500, degree: int = 4) -> tuple[bool, dict]:
    ok = True
    details = {}
    for cfg in _delta_presets():
        ext, ring = cfg.ext, cfg.ring
        sampler = ring.sampler(seed + 7)
        fails = {"f_v": 0, "additive": 0, "multiplicative": 0}
        for _ in range(pairs):
            f, g = ext.random_poly(sampler, degree), ext.random_poly(sampler, degree)
            df, dg = d_value(f), d_value(g)
            if ext.mul(f, ext.v) != ext.const(ring.from_vk(df)):
                fails["f_v"] += 1
            if d_value(f + g) != df + dg:
                fails["additive"] += 1
            if d_value(ext.mul(f, g)) != df * dg:
                fails["multiplicative"] += 1
        details[_label(cfg)] = {"pairs": pairs, "failures": fails}
        ok &= not any(fails.values())
    return ok, details


def _membership_pair(ext, sampler, i: int, degree: int):
    """Alternate between planted members, left multiples r f, and unrelated h."""
    ring = ext.ring
    kind = i % 4
    if kind == 3:
        # f_A = 0 or a D_f = 0 shape now and then
        f = ext.from_coeffs([RingElem(ring.coeffs.zero, sampler.ratfunc()) for _ in range(sampler.randint(1, degree + 1))])
        if not f:
            f = ext.v
    else:
        f = ext.random_poly(sampler, degree)
    if kind == 0:
        g = ext.random_poly(sampler, max(degree - f.degree, 0))
        h = ext.mul(f, g)
    elif kind == 1:
        mults = standard_multipliers(ext)
        h = ext.mul(mults[sampler.randint(0, len(mults) - 1)][1], f)
    else:
        h = ext.random_poly(sampler, degree)
    return h, f


def oracle_equivalence_suite(seed: int = 0, pairs: int = 200, degree: int = 3) -> tuple[bool, dict]:
    ok = True
    details = {}
    for cfg in _delta_presets():
        ext = cfg.ext
        sampler = cfg.ring.sampler(seed + 13)
        counts = {"In": 0, "NotIn": 0, "disagree": 0, "unverified_witness": 0}
        first_disagreement = None
        for i in range(pairs):
            h, f = _membership_pair(ext, sampler, i, degree)
            structural = right_ideal_membership(h, f)
            oracle = linear_membership_oracle(h, f)
            counts[structural.verdict] += 1
            if bool(structural) != bool(oracle):
                counts["disagree"] += 1
                if first_disagreement is None:
                    first_disagreement = {"h": str(h), "f": str(f), "structural": structural.verdict,
                                          "oracle": oracle.verdict}
            for ans in (structural, oracle):
                if ans and ext.mul(f, ans.witness) != h:
                    counts["unverified_witness"] += 1
        entry = {"pairs": pairs, **counts}
        if first_disagreement:
            entry["first_disagreement"] = first_disagreement
        details[_label(cfg)] = entry
        ok &= not counts["disagree"] and not counts["unverified_witness"]
    return ok, details


def _candidate_generators(ext, k: int):
    ring = ext.ring
    one = ring.one
    xk = ext.monomial(one, k)
    return {
        f"X^{k} - x{k - 1}": xk - ext.const(ring.from_a(RatFunc.var(f"x{k - 1}"))),
        f"X^{k} - x{k}^{k}": xk - ext.const(ring.from_a(RatFunc.var(f"x{k}") ** k)),
    }


def duo_dichotomy_suite(seed: int = 0, samples: int = 200, degree: int = 4) -> tuple[bool, dict]:
    details = {}
    ok = True
    cfg = preset("final-example", 0)
    ext = cfg.ext
    sampler = cfg.ring.sampler(seed + 17)
    not_two_sided = refutations = 0
    for _ in range(samples):
        f = ext.random_poly(sampler, degree)
        cls = classify_principal_ideal(f)
        if cls.verdict != "TwoSided":
            not_two_sided += 1
        probe = brute_force_two_sided_probe(f, classification=cls)
        if not probe.passed:
            refutations += 1
    details["final-example(k=0)"] = {"samples": samples, "not_two_sided": not_two_sided,
                                     "oracle_refutations": refutations}
    ok &= not not_two_sided and not refutations
    for k in (2, 3):
        cfg = preset("final-example", k)
        ext = cfg.ext
        sampler = cfg.ring.sampler(seed + 19 + k)
        low_fail = 0
        for _ in range(samples):
            f = ext.random_poly(sampler, k - 1)
            cls = classify_principal_ideal(f)
            probe = brute_force_two_sided_probe(f, classification=cls)
            if cls.verdict != "TwoSided" or not probe.passed:
                low_fail += 1
        candidates = {}
        for name, f in _candidate_generators(ext, k).items():
            cls = classify_principal_ideal(f)
            candidates[name] = cls.to_json()
        confirmed = [n for n, c in candidates.items() if c["verdict"] == "NotTwoSided" and c["verified"]]
        entry = {
            "low_degree_samples": samples,
            "low_degree_failures": low_fail,
            "candidates": candidates,
            "not_two_sided_generator": confirmed[0] if len(confirmed) == 1 else confirmed,
        }
        details[f"final-example(k={k})"] = entry
        ok &= not low_fail and len(confirmed) == 1
    return ok, details


def corner_duo_suite(seed: int = 0, pairs: int = 500) -> tuple[bool, dict]:
    ok = True
    details = {}
    for cfg in [preset("asano"), preset("example-4.1"), preset("final-example", 0)]:
        probe = right_duo_probe(cfg.ring, pairs, seed)
        witness = left_duo_counterexample(cfg.ring)
        details[_label(cfg)] = {
            "right_duo_probe": probe.to_json(),
            "left_duo_witness": witness.to_json() if witness else None,
        }
        ok &= probe.passed and witness is not None and witness.verified
    return ok, details


def non_sufficiency_suite(seed: int = 0, samples: int = 200) -> tuple[bool, dict]:
    cfg = preset("final-example", 2)
    marks = verify_marks_conditions(cfg.ext, samples, seed)
    f = _candidate_generators(cfg.ext, 2)["X^2 - x1"]
    cls = classify_principal_ideal(f)
    ok = marks.passed and cls.verdict == "NotTwoSided" and cls.verified
    return ok, {"marks": marks.to_json(), "generator": "X^2 - x1", "classification": cls.to_json()}


def commutative_boundary_suite(seed: int = 0, pairs: int = 200, degree: int = 3, shifts: int = 4) -> tuple[bool, dict]:
    cfg = preset("commutative")
    ext, ring = cfg.ext, cfg.ring
    vx = commutative_vx_check(ext)
    sampler = ring.sampler(seed + 23)
    ys = [sampler.ring_elem(ring, allow_zero=False) for _ in range(shifts)]
    sources = [shifted_extension(ext, y) for y in ys]
    failures = 0
    for i in range(pairs):
        y, src = ys[i % shifts], sources[i % shifts]
        f, g = src.random_poly(sampler, degree), src.random_poly(sampler, degree)
        lhs = derivation_shift_iso(src.mul(f, g), y, ext)
        rhs = ext.mul(derivation_shift_iso(f, y, ext), derivation_shift_iso(g, y, ext))
        if lhs != rhs:
            failures += 1
    ok = vx.verdict == "NotIn" and vx.certified and not failures
    return ok, {"vX_in_XR": vx.to_json(), "shift_pairs": pairs, "shift_failures": failures}


CRITERIA = [
    (1, "Leibniz suite", 30.0, leibniz_suite),
    (2, "Isomorphism suite", 60.0, isomorphism_suite),
    (3, "D-homomorphism suite", 30.0, d_homomorphism_suite),
    (4, "Oracle equivalence", 120.0, oracle_equivalence_suite),
    (5, "Duo dichotomy", 120.0, duo_dichotomy_suite),
    (6, "Corner-ring duo suite", 30.0, corner_duo_suite),
    (7, "Non-sufficiency of the necessary conditions", 60.0, non_sufficiency_suite),
    (8, "Commutative boundary", 30.0, commutative_boundary_suite),
]


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    for n, title, limit, fn in CRITERIA:
        if n == number:
            start = time.perf_counter()
            ok, details = fn(seed)
            return CriterionResult(n, title, ok, time.perf_counter() - start, limit, details)
    raise KeyError(f"no criterion {number}")


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [run_criterion(n, seed) for n, *_ in CRITERIA]
