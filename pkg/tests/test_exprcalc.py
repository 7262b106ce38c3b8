from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lidstone.exprcalc import (
    Const, ExampleSpec, ExprSyntaxError, Func, PiPoly, Var, add, build_example, const, contour_derivative,
    cos, cosh, differentiate_expr, eval_exact, eval_expr, eval_numeric, mul, parse_expression, pi, power,
    sin, sinh, sub, to_multipoly, verify_data_property,
)
from lidstone.exprcalc.contour import contour_derivatives
from lidstone.exprcalc.pipoly import exact_cos_pi, exact_sin_pi
from lidstone.exprcalc.verify import derivative_value
from lidstone.polycore import AffinePointFrame, MultiPoly, random_poly

P = parse_expression


# --- parsing and printing --------------------------------------------------

def test_parse_structure():
    e = P("sin(pi*(x1-1)/2)")
    assert isinstance(e, Func) and e.name == "sin"
    assert e.arg == mul(const(Q(1, 2)), pi, sub(Var(1), const(1)))


@pytest.mark.parametrize("text", ["", "sin()", "foo(x1)", "x1^1.5", "1/(x1+1)", "x0", "(x1", "x1 +"])
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError):
        P(text)


def test_aliases_and_literals():
    assert P("z") == P("x1") == P("x")
    assert P("x2**3") == P("x2^3")
    assert P("0.25*x1") == mul(const(Q(1, 4)), Var(1))


leaf = st.one_of(st.integers(1, 3).map(Var), st.fractions(-3, 3, max_denominator=4).map(const), st.just(pi))


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: add(*ab)),
        st.tuples(children, children).map(lambda ab: mul(*ab)),
        st.tuples(children, st.integers(0, 3)).map(lambda be: power(*be)),
        st.tuples(st.sampled_from([sin, cos, sinh, cosh]), children).map(lambda fa: fa[0](fa[1])),
    )


exprs = st.recursive(leaf, _extend, max_leaves=8)


@settings(max_examples=50, deadline=None)
@given(exprs)
def test_print_parse_fixpoint(e):
    text = e.to_text()
    again = P(text)
    assert again == e
    assert again.to_text() == text


# --- calculus --------------------------------------------------------------

def test_derivative_examples():
    s = P("sin(pi*x)")
    assert differentiate_expr(s, (1,)) == mul(pi, cos(mul(pi, Var(1))))
    assert differentiate_expr(s, (2,)) == mul(const(-1), power(pi, 2), s)
    g = P("sin(pi*x1)*x2^2")
    assert differentiate_expr(g, (1, 1)) == P("2*pi*x2*cos(pi*x1)")


def test_mixed_derivative_matches_contour_oracle():
    g = P("sin(pi*x1)*x2^2")
    d = differentiate_expr(g, (1, 1))
    rng = np.random.default_rng(0)
    for _ in range(10):
        z0 = rng.normal(size=2) + 1j * rng.normal(size=2)
        approx = contour_derivative(lambda p: eval_numeric(g, p), (1, 1), z0, radius=0.5)
        assert abs(approx - eval_numeric(d, z0)) < 1e-9 * max(1, abs(approx))


def test_exact_evaluation():
    assert eval_expr(P("sin(pi*3)"), [0]) == 0
    assert eval_expr(P("cos(pi*2)"), [0]) == 1
    assert eval_expr(P("sin(pi*x1)"), [Q(1, 6)]) == Q(1, 2)
    assert eval_expr(P("pi*x1^2 + 1/3"), [2]) == PiPoly({1: 4, 0: Q(1, 3)})
    assert eval_expr(P("sinh(x1)"), [0]) == 0


def test_niven_table():
    for k in range(-24, 25):
        q = Q(k, 12)
        for exact, ref in ((exact_sin_pi(q), math.sin), (exact_cos_pi(q), math.cos)):
            if exact is not None:
                assert abs(float(exact) - ref(math.pi * float(q))) < 1e-14
    assert exact_sin_pi(Q(1, 4)) is None


@settings(max_examples=40, deadline=None)
@given(exprs, st.lists(st.fractions(-2, 2, max_denominator=6), min_size=3, max_size=3))
def test_exact_and_numeric_paths_agree(e, point):
    try:
        exact = eval_exact(e, point)
    except Exception:
        return
    num = eval_numeric(e, [float(x) for x in point])
    assert abs(complex(exact) - num) <= 1e-12 * max(1.0, abs(num))


def test_to_multipoly():
    assert to_multipoly(P("(x1 + 2*x2)^2 - 3/2"), 2) == MultiPoly(2, {(2, 0): 1, (1, 1): 4, (0, 2): 4, (0, 0): Q(-3, 2)})
    with pytest.raises(ValueError):
        to_multipoly(P("pi*x1"))


# --- contour rule ----------------------------------------------------------

@pytest.mark.parametrize("k", [0, 1, 3, 5, 8])
def test_contour_exp(k):
    assert abs(contour_derivative(lambda p: np.exp(p[..., 0]), (k,), [0]) - 1) < 1e-10


def test_contour_high_order_needs_larger_radius():
    # roundoff grows like k!/r^k times the contour maximum; radius ~ k keeps it small
    f = lambda p: np.exp(p[..., 0])
    assert abs(contour_derivative(f, (12,), [0], radius=10.0) - 1) < 1e-10
    assert abs(contour_derivative(f, (12,), [0], radius=1.0) - 1) > 1e-10


def test_contour_sin_even_order():
    assert abs(contour_derivative(lambda p: np.sin(np.pi * p[..., 0]), (4,), [0])) < 1e-9


def test_contour_closed_form(frozen):
    ref = frozen["contour_check"]
    f = lambda p: np.exp(p[..., 0]) * np.sin(p[..., 1])
    v, err = contour_derivative(f, ref["t"], ref["point"], return_error=True)
    assert abs(v - ref["value"]) < 1e-10 and err < 1e-8


def test_contour_matches_exact_polynomial_derivatives():
    rng = random.Random(11)
    for _ in range(8):
        n = rng.choice([1, 2, 3])
        p = random_poly(rng, n, 6)
        z0 = [Q(rng.randint(-3, 3), 2) for _ in range(n)]
        ts = [tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(4)]
        batch = contour_derivatives(p.to_numpy_eval, ts, [float(x) for x in z0])
        for t, b in zip(ts, batch):
            exact = p.diff(t).substitute(z0)
            single = contour_derivative(p.to_numpy_eval, t, [float(x) for x in z0])
            assert abs(single - float(exact)) < 1e-9 * max(1, abs(float(exact)))
            assert abs(b - single) < 1e-9 * max(1, abs(single))


def test_contour_rejects_bad_input():
    with pytest.raises(ValueError):
        contour_derivative(lambda p: p[..., 0], (1,), [0], nodes=4)
    with pytest.raises(ValueError):
        contour_derivative(lambda p: p[..., 0], (1,), [0], radius=0)


# --- example families ------------------------------------------------------

def test_family_specializations():
    assert build_example(ExampleSpec(1, 1, (0,), (1,))).expr == P("sin(pi*x1)")
    g = (MultiPoly.constant(1, 1), MultiPoly.zero(1))
    assert build_example(ExampleSpec(2, 2, (0, 0), (1, 1), g)).expr == P("sin(pi*x1)")
    f3 = build_example(ExampleSpec(3, 1, (0,), (1,))).expr
    assert f3 == P("sinh(x1 - 1)/sinh(-1)")


def test_family_validation():
    with pytest.raises(ValueError):
        ExampleSpec(1, 2, (0, 0), (1, 0))
    with pytest.raises(ValueError):
        ExampleSpec(2, 1, (0,), (1,))
    with pytest.raises(ValueError):
        ExampleSpec(3, 1, (0,), (1,), (MultiPoly.constant(1, Q(1, 2)),))
    with pytest.raises(ValueError):
        ExampleSpec(3, 1, (0,), (complex(0, math.pi),))


def test_kind3_univariate_integer_data():
    f = build_example(ExampleSpec(3, 1, (0,), (1,)))
    rep = verify_data_property(f.expr, f.frame, 10, predicate="integer", tol=1e-8, scale_tol=False)
    assert rep.passed
    for e in rep.entries:
        # even derivatives are 1 at 0 and 0 at 1
        assert abs(complex(e.value.value) - (1 if e.i == 0 else 0)) < 1e-12


def test_kind1_zero_data_exact_and_contour():
    f = build_example(ExampleSpec(1, 2, (Q(1, 2), 0), (2, Q(-1, 3))))
    exact = verify_data_property(f.expr, f.frame, 8, restrict_to_T=False)
    assert exact.passed and all(e.value.exact for e in exact.entries)
    # b_2 - a_2 = -1/3 stretches the function by 3 in x2; the t!-scaled tolerance absorbs the
    # resulting roundoff of the order-8 contour derivatives
    num = verify_data_property(f.expr, f.frame, 8, restrict_to_T=False, method="contour", tol=1e-8)
    assert num.passed


def test_kind2_witnesses_match_oracle(frozen):
    g = (to_multipoly(P("x1 + 2*x2"), 2), to_multipoly(P("x1"), 1), to_multipoly(P("-x1"), 1))
    f = build_example(ExampleSpec(2, 3, (0, 0, 0), (1, 1, 1), g))
    assert verify_data_property(f.expr, f.frame, 6).passed
    rep = verify_data_property(f.expr, f.frame, 4, restrict_to_T=False)
    got = {(tuple(e.t), e.i): e.value.value for e in rep.failures()}
    want = {(tuple(w["t"]), w["i"]): w["value"].replace("**", "^") for w in frozen["kind2_witnesses"]}
    assert set(got) == set(want)
    for key, value in got.items():
        assert value.to_text().replace("*", "").replace(" ", "") == want[key].replace("*", "").replace(" ", "")


def test_zero_expression_passes():
    rep = verify_data_property(const(0), AffinePointFrame.canonical(2), 6, predicate="zero")
    assert rep.passed and len(rep.entries) > 0


def test_derivative_value_methods_agree():
    e = P("cosh(x1)*sin(pi*x2/3)")
    a = derivative_value(e, (2, 1), (Q(1, 2), 1), method="numeric").value
    c = derivative_value(e, (2, 1), (Q(1, 2), 1), method="contour").value
    assert abs(a - c) < 1e-9
