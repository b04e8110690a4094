import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ore_lab.exact_algebra import RatFunc, UPoly, parse_expr
from ore_lab.maps import (
    INJECTIVE_CERTIFIED,
    UNKNOWN,
    CoefficientRing,
    EndoSpec,
    apply_phi,
    bar,
    check_injectivity,
    image_membership,
    phi_omega,
    transcendence_over_image,
    verify_certificate,
)
from ore_lab.sampling import Sampler

from oracle import from_text, ratfunc_texts, rf_to_sympy, same, sym

FINAL = EndoSpec([{"pattern": "x{i}", "image": "x{i+1}^{i+1}"}])
EX1 = EndoSpec([{"pattern": "t", "image": "x1"}, {"pattern": "x{i}", "image": "x{i+2}"}])
ASANO = EndoSpec([{"pattern": "x", "image": "x^2"}])
IDENTITY = EndoSpec([{"pattern": "x{i}", "image": "x{i}"}])


def final_subs(expr):
    """The final-example rule applied by sympy, simultaneously."""
    names = sorted({s.name for s in expr.free_symbols})
    return expr.subs({sym(n): sym(f"x{int(n[1:]) + 1}") ** (int(n[1:]) + 1) for n in names}, simultaneous=True)


def ex1_subs(expr):
    rules = {}
    for s in expr.free_symbols:
        rules[s] = sym("x1") if s.name == "t" else sym(f"x{int(s.name[1:]) + 2}")
    return expr.subs(rules, simultaneous=True)


def test_apply_phi_examples():
    assert apply_phi(FINAL, "x1") == parse_expr("x2^2")
    assert apply_phi(FINAL, "1") == RatFunc.one()
    assert apply_phi(EX1, "t*x0") == parse_expr("x1*x2")
    assert same(rf_to_sympy(apply_phi(EX1, "t*x0")), ex1_subs(from_text("t*x0")))
    assert apply_phi(ASANO, "x + 1/x") == parse_expr("x^2 + 1/x^2")


def test_apply_phi_uncovered():
    with pytest.raises(KeyError):
        apply_phi(ASANO, "x0")


def test_family_grows_registry_on_demand():
    assert apply_phi(FINAL, "x40") == RatFunc.var("x41") ** 41


@given(ratfunc_texts(), ratfunc_texts())
def test_apply_phi_homomorphism_against_sympy(ta, tb):
    a, b = parse_expr(ta), parse_expr(tb)
    assert apply_phi(FINAL, a * b) == apply_phi(FINAL, a) * apply_phi(FINAL, b)
    assert apply_phi(FINAL, a + b) == apply_phi(FINAL, a) + apply_phi(FINAL, b)
    assert same(rf_to_sympy(apply_phi(FINAL, a)), final_subs(from_text(ta)))


def test_apply_phi_homomorphism_500_pairs():
    ring = CoefficientRing(EX1)
    s = Sampler(["x0", "x1", "x2"], seed=11)
    for _ in range(500):
        a, b = s.a_elem(ring), s.a_elem(ring)
        assert ring.phi(a * b) == ring.phi(a) * ring.phi(b)
        assert ring.phi(a + b) == ring.phi(a) + ring.phi(b)


def test_check_injectivity():
    assert check_injectivity(FINAL) == INJECTIVE_CERTIFIED
    assert check_injectivity(IDENTITY) == INJECTIVE_CERTIFIED
    assert check_injectivity(EX1) == INJECTIVE_CERTIFIED
    bad = EndoSpec([{"pattern": "x0", "image": "x1 + x2"}, {"pattern": "x1", "image": "x1*x2"}])
    assert check_injectivity(bad) == UNKNOWN


def test_bar_examples():
    assert bar(parse_expr("x0"), has_t=False) == RatFunc.var("x0")
    assert bar(parse_expr("t^2 + x0*t + x1")) == RatFunc.var("x1")
    assert bar(parse_expr("t")) == RatFunc.zero()


def test_bar_kernel_is_p():
    ring = CoefficientRing(EX1)
    s = Sampler(["x0", "x1"], seed=2)
    for _ in range(200):
        a, b = s.a_elem(ring), s.a_elem(ring)
        assert ring.bar(a * ring.t) == RatFunc.zero()
        assert ring.bar(a * b) == ring.bar(a) * ring.bar(b)
        assert ring.bar(a + b) == ring.bar(a) + ring.bar(b)
        k = s.ratfunc()
        assert ring.bar(ring.from_k(k)) == k


def test_phi_omega_examples():
    ring = CoefficientRing(FINAL)
    one, zero = ring.one, ring.zero
    omega = RatFunc.var("x2")
    X = UPoly([zero, one], zero, "X")
    assert phi_omega(X, omega, ring) == omega
    a = ring.from_k(parse_expr("x0 + 3"))
    assert phi_omega(UPoly([a], zero, "X"), omega, ring) == apply_phi(FINAL, "x0 + 3")
    f = UPoly([ring.from_k(-RatFunc.var("x1")), zero, one], zero, "X")
    assert phi_omega(f, omega, ring) == RatFunc.zero()


def test_phi_omega_homomorphism():
    ring = CoefficientRing(EX1)
    s = Sampler(["x0", "x1"], seed=5)
    omega = parse_expr("x0/(x3 + 1)")
    for _ in range(100):
        f = UPoly([s.a_elem(ring) for _ in range(3)], ring.zero, "X")
        g = UPoly([s.a_elem(ring) for _ in range(3)], ring.zero, "X")
        assert phi_omega(f * g, omega, ring) == phi_omega(f, omega, ring) * phi_omega(g, omega, ring)
        assert phi_omega(f + g, omega, ring) == phi_omega(f, omega, ring) + phi_omega(g, omega, ring)


def test_image_membership_examples():
    res = image_membership(FINAL, RatFunc.var("x1"))
    assert res.verdict == "InImage" and res.preimage.coeff(0) == RatFunc.var("x0")
    res = image_membership(FINAL, RatFunc.var("x0"))
    assert res.verdict == "NotInImage" and res.certificate.kind == "fresh_variable"
    assert verify_certificate(FINAL, RatFunc.var("x0"), res.certificate)
    res = image_membership(ASANO, RatFunc.var("x"))
    assert res.verdict == "NotInImage" and res.certificate.kind == "exponent_lattice"
    assert verify_certificate(ASANO, RatFunc.var("x"), res.certificate)


@given(ratfunc_texts(("x0", "x1", "x2"), 2, 2))
def test_image_preimages_round_trip(text):
    k = apply_phi(FINAL, parse_expr(text))
    res = image_membership(FINAL, k)
    assert res.verdict == "InImage"
    assert CoefficientRing(FINAL).phi(res.preimage) == k


@given(st.integers(0, 10 ** 6))
def test_image_membership_in_t_ring(seed):
    ring = CoefficientRing(EX1)
    a = Sampler(["x0", "x1"], seed=seed).a_elem(ring)
    k = ring.phi(a)
    res = image_membership(EX1, k)
    assert res.verdict == "InImage"
    assert ring.phi(res.preimage) == k


def test_certificates_are_not_forgeable():
    res = image_membership(FINAL, RatFunc.var("x0"))
    # the same certificate must not vouch for an element that is in the image
    assert not verify_certificate(FINAL, RatFunc.var("x1"), res.certificate)


def test_transcendence_examples():
    res = transcendence_over_image(FINAL, RatFunc.var("x0"), 6)
    assert res.verdict == "Transcendental" and res.certificate.kind == "fresh_variable"
    res = transcendence_over_image(FINAL, RatFunc.var("x2"), 6)
    assert res.verdict == "AlgebraicWitness" and res.degree == 2 and res.minimal
    ring = CoefficientRing(FINAL)
    assert res.annihilator.lc() == ring.one
    assert res.annihilator.coeff(0) == ring.from_k(-RatFunc.var("x1"))
    res = transcendence_over_image(FINAL, RatFunc.one(), 6)
    assert res.verdict == "AlgebraicWitness" and res.degree == 1


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_final_example_algebraic_degrees(k):
    ring = CoefficientRing(FINAL)
    omega = RatFunc.var(f"x{k}")
    res = transcendence_over_image(FINAL, omega, 8)
    assert res.verdict == "AlgebraicWitness" and res.degree == k and res.minimal
    assert phi_omega(res.annihilator, omega, ring) == RatFunc.zero()
    if k > 1:
        assert transcendence_over_image(FINAL, omega, k - 1).verdict == "Unknown"


def test_transcendence_outside_class():
    spec = EndoSpec([{"pattern": "x0", "image": "x0 + x1"}, {"pattern": "x1", "image": "x1"}])
    assert transcendence_over_image(spec, RatFunc.var("x0"), 3).verdict == "Unknown"
    with pytest.raises(ValueError):
        transcendence_over_image(FINAL, RatFunc.var("x0"), 0)


def test_sympy_agrees_on_annihilator():
    res = transcendence_over_image(FINAL, RatFunc.var("x3"), 5)
    ring = CoefficientRing(FINAL)
    # sum phi(a_k) x3^k computed by sympy from the printed coefficients
    total = 0
    for k, c in enumerate(res.annihilator.coeffs):
        total += final_subs(from_text(str(ring.bar(c)))) * sym("x3") ** k
    assert sympy.expand(total) == 0
