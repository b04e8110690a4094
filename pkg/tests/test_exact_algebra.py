from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ore_lab.exact_algebra import (
    REGISTRY,
    ModP,
    MultiPoly,
    ParseError,
    RatFunc,
    UPoly,
    VarId,
    exact_divide,
    parse_expr,
    poly_gcd,
    render_ratfunc,
    rf_arith,
    solve_linear,
    substitute,
)

from oracle import from_text, poly_texts, poly_to_sympy, ratfunc_texts, rf_to_sympy, same, sym

x0, x1, x2 = (sym(f"x{i}") for i in range(3))


def P(text):
    return parse_expr(text).num


# parse_expr


def test_parse_literal():
    f = parse_expr("x0 + 1")
    assert f.den.is_one()
    assert same(poly_to_sympy(f.num), x0 + 1)


def test_parse_cancels():
    assert parse_expr("x1^2 / x1") == RatFunc.var("x1")


def test_parse_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        parse_expr("1/(x0 - x0)")


@pytest.mark.parametrize("text, pos", [("x0 +", 4), ("x0 ** 2", 4), ("(x0", 3), ("x0^-1", 3), ("3 $ 4", 2)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.pos == pos


def test_precedence():
    # ^ binds tighter than unary minus, which binds tighter than * and /
    assert parse_expr("-x0^2") == -(RatFunc.var("x0") ** 2)
    assert parse_expr("2*x0^2/4 - 1") == parse_expr("(x0^2)/2 - 1")
    assert parse_expr("x0 - x1 - x2") == parse_expr("x0 - (x1 + x2)")
    assert parse_expr("x0 / x1 / x2") == parse_expr("x0 / (x1*x2)")


def test_parse_asano_and_t_variables():
    assert parse_expr("x^2 + t").variables() == {0, 1}


@given(ratfunc_texts())
def test_parse_matches_sympy(text):
    assert same(rf_to_sympy(parse_expr(text)), from_text(text))


@given(ratfunc_texts())
def test_render_round_trip(text):
    f = parse_expr(text)
    assert parse_expr(render_ratfunc(f)) == f
    assert parse_expr(str(f)) == f


def test_render_round_trip_500_samples():
    from ore_lab.sampling import Sampler

    s = Sampler(["x0", "x1", "x2"], seed=3)
    for _ in range(500):
        f = s.ratfunc()
        assert parse_expr(str(f)) == f


# normal form


@given(ratfunc_texts())
def test_normal_form(text):
    f = parse_expr(text)
    if f.is_zero():
        assert f.den.is_one()
        return
    # den monic and coprime to num
    assert f.den.monic()[1] == 1
    assert sympy.gcd(poly_to_sympy(f.num), poly_to_sympy(f.den)).is_number


@given(ratfunc_texts(), st.integers(1, 5))
def test_equality_is_syntactic(text, k):
    f = parse_expr(text)
    g = parse_expr(f"({text}) * ({k}*x1 + 1) / ({k}*x1 + 1)")
    assert f == g and hash(f) == hash(g)


# rf_arith


def test_rf_arith_examples():
    a = parse_expr("x0/(x1 + 2)")
    assert rf_arith(a, RatFunc.zero(), "add") == a
    assert rf_arith(RatFunc.var("x0"), parse_expr("1/x0"), "mul") == RatFunc.one()
    q = rf_arith(parse_expr("x0^2 - 1"), parse_expr("x0 - 1"), "div")
    assert q == parse_expr("x0 + 1")
    assert rf_arith(q, parse_expr("x0 - 1"), "mul") == parse_expr("x0^2 - 1")


def test_rf_arith_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rf_arith(RatFunc.one(), RatFunc.zero(), "div")
    with pytest.raises(ValueError):
        rf_arith(RatFunc.one(), RatFunc.one(), "pow")


@given(ratfunc_texts(), ratfunc_texts(), st.sampled_from(["add", "sub", "mul", "div"]))
def test_rf_arith_matches_sympy(ta, tb, op):
    a, b = parse_expr(ta), parse_expr(tb)
    sa, sb = from_text(ta), from_text(tb)
    if op == "div" and not b:
        return
    expect = {"add": sa + sb, "sub": sa - sb, "mul": sa * sb, "div": sa / sb if op == "div" else None}[op]
    assert same(rf_to_sympy(rf_arith(a, b, op)), expect)


@given(ratfunc_texts(), ratfunc_texts(), ratfunc_texts())
def test_field_axioms(ta, tb, tc):
    a, b, c = parse_expr(ta), parse_expr(tb), parse_expr(tc)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == RatFunc.zero()
    if a:
        assert a * a.inverse() == RatFunc.one()


@given(ratfunc_texts(max_exp=2), st.sampled_from(["x0", "x1", "x2"]))
def test_diff_matches_sympy(text, var):
    assert same(rf_to_sympy(parse_expr(text).diff(var)), sympy.diff(from_text(text), sym(var)))


# gcd


def test_gcd_examples():
    p = P("x0^2 + 3*x1")
    assert poly_gcd(p, MultiPoly()) == p.monic()[0]
    assert poly_gcd(P("x0 - 1"), P("x1 - 1")).is_one()
    g = poly_gcd(P("x0^2 - 1"), P("x0^2 - 2*x0 + 1"))
    assert g == P("x0 - 1")
    a, b = P("x0^2 - 1").exact_div(g), P("x0^2 - 2*x0 + 1").exact_div(g)
    assert a is not None and b is not None
    assert poly_gcd(a, b).is_one()


@given(poly_texts(), poly_texts(), poly_texts(allow_zero=False))
def test_gcd_scales_with_common_factor(tp, tq, tr):
    p, q, r = P(tp), P(tq), P(tr)
    lhs = poly_gcd(p * r, q * r)
    rhs = poly_gcd(p, q) * r
    if lhs.is_zero():
        assert rhs.is_zero()
        return
    assert lhs == rhs.monic()[0]


@given(poly_texts(max_terms=3, max_exp=2), poly_texts(max_terms=3, max_exp=2))
def test_gcd_matches_sympy(tp, tq):
    p, q = P(tp), P(tq)
    g = poly_gcd(p, q)
    expect = sympy.gcd(from_text(tp), from_text(tq))
    if expect == 0:
        assert g.is_zero()
    else:
        ratio = sympy.cancel(poly_to_sympy(g) / expect)
        assert ratio.is_number and ratio != 0


# substitute


def test_substitute_examples():
    assert substitute(RatFunc.var("x0"), {"x0": RatFunc.var("x2")}) == RatFunc.var("x2")
    c = RatFunc.const(Fraction(7, 3))
    assert substitute(c, {"x0": RatFunc.var("x5")}) == c
    f = parse_expr("x0 + 1/x1")
    img = substitute(f, {"x0": parse_expr("x1^2"), "x1": parse_expr("x2^3")})
    # simultaneous substitution: x1 in the image of x0 is not substituted again
    assert same(rf_to_sympy(img), (x0 + 1 / x1).subs({x0: x1 ** 2, x1: x2 ** 3}, simultaneous=True))
    assert img == parse_expr("x1^2 + 1/x2^3")


def test_substitute_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        substitute(parse_expr("1/(x0 - x1)"), {"x0": RatFunc.var("x1")})


@given(ratfunc_texts(), ratfunc_texts(), ratfunc_texts())
def test_substitute_is_homomorphism(ta, tb, tc):
    a, b, c = parse_expr(ta), parse_expr(tb), parse_expr(tc)
    images = {"x0": parse_expr("x1^2"), "x1": parse_expr("x2 + 3"), "x2": parse_expr("x3^3")}
    try:
        lhs = substitute(a * b + c, images)
    except ZeroDivisionError:
        return
    assert lhs == substitute(a, images) * substitute(b, images) + substitute(c, images)


# exact_divide in K[X]


def kx(*coeffs):
    return UPoly([parse_expr(c) if isinstance(c, str) else RatFunc.const(c) for c in coeffs], RatFunc.zero(), "X")


def test_exact_divide_examples():
    q = kx("x1", 1)
    assert exact_divide(q, q) == kx(1)
    assert exact_divide(kx(), q) == kx()
    p = kx("-x1^2", 0, 1)
    g = exact_divide(p, kx("-x1", 1))
    assert g == kx("x1", 1)
    assert g * kx("-x1", 1) == p
    assert exact_divide(kx(1, 0, 1), kx("-x1", 1)) is None
    with pytest.raises(ZeroDivisionError):
        exact_divide(p, kx())


@given(st.lists(ratfunc_texts(max_terms=2, max_exp=1), min_size=1, max_size=3),
       st.lists(ratfunc_texts(max_terms=2, max_exp=1), min_size=1, max_size=3))
def test_exact_divide_recovers_factor(ta, tb):
    a, b = kx(*ta), kx(*tb)
    if not a or not b:
        return
    assert exact_divide(a * b, b) == a


# linear systems


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_linear_matches_sympy(nrows, ncols, data):
    texts = [[data.draw(ratfunc_texts(("x0", "x1"), 2, 1)) for _ in range(ncols)] for _ in range(nrows)]
    rhs_t = [data.draw(ratfunc_texts(("x0", "x1"), 2, 1)) for _ in range(nrows)]
    rows = [{j: parse_expr(t) for j, t in enumerate(r) if parse_expr(t)} for r in texts]
    rhs = [parse_expr(t) for t in rhs_t]
    sol = solve_linear(rows, rhs, ncols)
    M = sympy.Matrix([[sympy.cancel(from_text(t)) for t in r] for r in texts])
    b = sympy.Matrix([sympy.cancel(from_text(t)) for t in rhs_t])
    aug = M.row_join(b)
    consistent = M.rank(simplify=True) == aug.rank(simplify=True)
    assert sol.consistent == consistent
    if consistent:
        for i, r in enumerate(rows):
            acc = RatFunc.zero()
            for j, c in r.items():
                acc = acc + c * sol.values[j]
            assert acc == rhs[i]
        assert sol.nullity == ncols - M.rank(simplify=True)


# F_p and the registry


def test_modp_field():
    p = 101
    a, b = ModP(7, p), ModP(Fraction(3, 5), p)
    assert (a * b) / b == a
    assert b * 5 == ModP(3, p)
    with pytest.raises(ZeroDivisionError):
        ModP(Fraction(1, 101), p)


def test_prime_field_ratfuncs():
    f = parse_expr("(x0^2 - 1)/(x0 - 1)", modulus=7)
    assert f == parse_expr("x0 + 1", modulus=7)
    assert parse_expr("7*x0", modulus=7).is_zero()


def test_registry_is_append_only():
    before = REGISTRY.seen()
    v = REGISTRY.fresh()
    after = REGISTRY.seen()
    assert after[: len(before)] == before and after[-1] == v
    assert REGISTRY.touch(v.pos) == v
    assert VarId(v.pos) == v
