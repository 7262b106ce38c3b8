"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the pytest terminal summary under
"acceptance criteria". Tolerances and time limits are the stated ones.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction as Q

import numpy as np

from lidstone import basis
from lidstone.basis import (
    DataSet, expand, extract_data, kernel_rank_check, lidstone_basis, reconstruct, reconstruct_general,
    univariate_lidstone,
)
from lidstone.exprcalc import ExampleSpec, build_example, parse_expression, to_multipoly, verify_data_property
from lidstone.growth import VIOLATED, check_growth_condition, estimate_directional_type, polya_threshold, stirling_bounds
from lidstone.multiindex import enumerate_index_set, multi_indices_of_degree
from lidstone.polycore import AffinePointFrame, MultiPoly, even_slice_vanishes, random_poly


def _fresh_caches():
    basis._unit_system.cache_clear()
    basis._univariate_lidstone.cache_clear()


def test_criterion_01_classical_lidstone(acceptance):
    _fresh_caches()
    start = time.perf_counter()
    z = MultiPoly.var(1, 1)
    ok = univariate_lidstone(1) == (z ** 3 - z).scale(Q(1, 6))
    ok &= univariate_lidstone(2) == z ** 5 * Q(1, 120) - z ** 3 * Q(1, 36) + z * Q(7, 360)
    ok &= univariate_lidstone(0) == z
    for k in range(1, 11):
        lam = univariate_lidstone(k)
        ok &= lam.diff((2,)) == univariate_lidstone(k - 1)
        ok &= lam.substitute([Q(0)]) == 0 and lam.substitute([Q(1)]) == 0
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    assert acceptance(1, ok, f"Lambda_k for k <= 10 exact, Lambda_1 and Lambda_2 match ({elapsed:.3f} s < 1 s)")


def test_criterion_02_multivariate_duality(acceptance):
    _fresh_caches()
    start = time.perf_counter()
    checked = 0
    ok = True
    for n, top in ((2, 4), (3, 2)):
        points = AffinePointFrame.canonical(n).points
        for pair in enumerate_index_set(n, top):
            elem = lidstone_basis(n, pair.t, pair.i)
            ok &= pair.admissible()
            for other in enumerate_index_set(n, max(elem.degree, 0)):
                val = elem.poly.diff(other.t).substitute(list(points[other.i]))
                ok &= val == (1 if other == pair else 0)
                checked += 1
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    assert acceptance(2, ok, f"{checked} duality conditions exact for n=2 |t|<=4 and n=3 |t|<=2 "
                             f"({elapsed:.2f} s < 60 s)")


def test_criterion_03_kernel_triviality(acceptance):
    start = time.perf_counter()
    results = {(n, d): kernel_rank_check(n, d) for n in (1, 2, 3) for d in range(0, 9)}
    elapsed = time.perf_counter() - start
    ok = all(results.values()) and elapsed < 60
    bad = [k for k, v in results.items() if not v]
    assert acceptance(3, ok, f"exact rank full for all n <= 3, d <= 8 ({len(results)} systems, "
                             f"failures {bad}, {elapsed:.2f} s < 60 s)")


def _random_rational_frame(rng, n, axis_aligned):
    def q():
        return Q(rng.randint(-6, 6), rng.randint(1, 4))

    while True:
        s0 = [q() for _ in range(n)]
        if axis_aligned:
            pts = [s0] + [[s0[j] + (q() or 1 if j == k else 0) for j in range(n)] for k in range(n)]
        else:
            pts = [s0] + [[q() for _ in range(n)] for _ in range(n)]
        try:
            frame = AffinePointFrame(pts)
        except ValueError:
            continue
        if not frame.is_canonical():
            return frame


def test_criterion_04_reconstruction_round_trip(acceptance):
    _fresh_caches()
    rng = random.Random(20240601)
    start = time.perf_counter()
    exact = framed = 0
    all_rational = True
    for k in range(100):
        n = rng.choice([1, 2, 3])
        p = random_poly(rng, n, 6, coef_range=9)
        deg = p.degree if p.degree is not None else 0
        exact += reconstruct(extract_data(p, max_norm=deg), deg) == p
        frame = _random_rational_frame(rng, n, axis_aligned=k % 2 == 0)
        q = reconstruct_general(extract_data(p, frame, deg), deg)
        framed += q == p
        all_rational &= all(isinstance(c, Q) for _, c in q.items())
    # integer data prescribed directly at rational frames
    integer_cases = 0
    for k in range(10):
        n = rng.choice([1, 2, 3])
        frame = _random_rational_frame(rng, n, axis_aligned=False)
        D = rng.choice([2, 4])
        data = DataSet(n, {pr: rng.randint(-9, 9) for pr in enumerate_index_set(n, D)}, frame)
        q = reconstruct_general(data, D + 1)
        all_rational &= all(isinstance(c, Q) for _, c in q.items())
        back = extract_data(q, frame, D + 1).entries
        integer_cases += all(back.get(pr, 0) == v for pr, v in data.entries.items())
    elapsed = time.perf_counter() - start
    ok = exact == 100 and framed == 100 and integer_cases == 10 and all_rational and elapsed < 120
    assert acceptance(4, ok, f"{exact}/100 canonical and {framed}/100 rational-frame round trips exact, "
                             f"{integer_cases}/10 integer data sets realized, rational output "
                             f"{all_rational} ({elapsed:.1f} s < 120 s)")


def test_criterion_05_example_family_1(acceptance):
    cases = [(2, (Q(1, 2), -1), (Q(3, 2), 1)), (2, (0, 0), (1, 1)),
             (3, (0, Q(1, 3), Q(-1, 2)), (1, Q(4, 3), Q(1, 2)))]
    ok = True
    worst = 0.0
    total = 0
    for n, a, b in cases:
        f = build_example(ExampleSpec(1, n, a, b))
        sym = verify_data_property(f.expr, f.frame, 8, restrict_to_T=False)
        ok &= sym.passed and all(e.value.exact and e.value.value == 0 for e in sym.entries)
        num = verify_data_property(f.expr, f.frame, 8, restrict_to_T=False, method="contour", tol=1e-8,
                                   scale_tol=False)
        ok &= num.passed
        worst = max(worst, max(abs(complex(e.value.value)) for e in num.entries))
        total += len(sym.entries)
    assert acceptance(5, ok, f"{total} even-order values exactly 0; contour max {worst:.1e} < 1e-8")


def test_criterion_06_example_family_2(acceptance):
    P = parse_expression
    specs = [
        ExampleSpec(2, 2, (0, Q(1, 2)), (1, 2), (to_multipoly(P("1 + 2*x1"), 1), to_multipoly(P("3*x1 - 1"), 1))),
        ExampleSpec(2, 3, (0, 0, 0), (1, 1, 1), (to_multipoly(P("x1 + 2*x2"), 2), to_multipoly(P("x1"), 1),
                                                 to_multipoly(P("-x1"), 1))),
    ]
    ok = True
    witnesses = []
    for spec in specs:
        f = build_example(spec)
        exact = verify_data_property(f.expr, f.frame, 6)
        numeric = verify_data_property(f.expr, f.frame, 6, method="numeric", tol=1e-8, scale_tol=False)
        ok &= exact.passed and numeric.passed
        scan = verify_data_property(f.expr, f.frame, 4, restrict_to_T=False)
        found = scan.failures()
        ok &= len(found) > 0
        if found:
            e = found[0]
            witnesses.append(f"n={spec.n}: ({tuple(e.t)}, {e.i}) -> {e.to_json()['value']}")
    assert acceptance(6, ok, "admissible data vanish to |t| <= 6; witnesses " + "; ".join(witnesses))


def test_criterion_07_example_family_3(acceptance):
    f = build_example(ExampleSpec(3, 1, (0,), (1,)))
    rep = verify_data_property(f.expr, f.frame, 10, predicate="integer", tol=1e-8, scale_tol=False,
                               restrict_to_T=False)
    growth = check_growth_condition(f.expr, f.frame)
    ok = rep.passed and growth.verdict == VIOLATED
    assert acceptance(7, ok, f"{len(rep.entries)} even-order values integral within 1e-8; growth "
                             f"condition {growth.verdict} (trend {growth.trend:.3f})")


def test_criterion_08_boundary_sharpness(acceptance):
    f = parse_expression("sin(pi*x1)")
    d = estimate_directional_type(f, [1])
    type_ok = abs(d.type - math.pi) <= 0.05 * math.pi
    rep = verify_data_property(f, AffinePointFrame.canonical(1), 40)
    data_ok = rep.passed and all(e.value.exact for e in rep.entries)
    ex = expand(f, 1, 40)
    sup_ok = ex.partial_sum.is_zero() and abs(ex.residual - 1) < 1e-9
    ok = type_ok and data_ok and sup_ok
    assert acceptance(8, ok, f"type {d.type:.6f} (pi within 5%), {len(rep.entries)} admissible values 0 to "
                             f"|t| <= 40, max |f| on [0,1] = {ex.residual:.12f}")


def _brute_force_threshold(A, eta, T_max=10_000):
    first = None
    for T in range(math.floor(A) + 1, T_max + 1):
        bound = (1 - eta) * math.exp(-A + 1 / (12 * T)) * (1 - A / T) ** (-T)
        if bound < 1:
            if first is None:
                first = T
        else:
            first = None
    return first


def test_criterion_09_polya_threshold(acceptance, frozen):
    pairs = list(itertools.product((0, 0.5, 1, 2), (0.5, 0.1, 0.01)))
    ref = {(r["A"], r["eta"]): r["T0"] for r in frozen["polya"]}
    agree = sum(polya_threshold(A, eta) == _brute_force_threshold(A, eta) == ref[(A, eta)] for A, eta in pairs)
    brackets = sum(stirling_bounds(N)[0] < math.factorial(N) < stirling_bounds(N)[1] for N in range(1, 21))
    ok = agree == len(pairs) and brackets == 20
    assert acceptance(9, ok, f"{agree}/{len(pairs)} thresholds match the brute-force scan; Stirling brackets "
                             f"N! for {brackets}/20 values")


def _passing_monomials(n, D, max_degree):
    # z^k passes iff no all-even t <= k has |t| = D, i.e. the even parts of k sum to less than D
    out = []
    for deg in range(max_degree + 1):
        for k in multi_indices_of_degree(n, deg):
            if sum(2 * (x // 2) for x in k) < D:
                out.append(tuple(k))
    return out


def test_criterion_10_even_slice_degree_bound(acceptance):
    rng = random.Random(510)
    checked = passing = 0
    ok = True
    for n in (1, 2, 3):
        for D in (2, 4, 6):
            pool = _passing_monomials(n, D, D + n + 2)
            corpus = [random_poly(rng, n, D + n + 2, density=0.3) for _ in range(30)]
            corpus += [MultiPoly(n, {e: rng.randint(-9, 9) or 1 for e in rng.sample(pool, min(len(pool), 5))})
                       for _ in range(30)]
            corpus += [random_poly(rng, n, max(D - 1, 0)) for _ in range(10)]
            for p in corpus:
                checked += 1
                if even_slice_vanishes(p, D):
                    passing += 1
                    ok &= p.degree is None or p.degree < D + n
            for deg in range(D + n, D + n + 4):
                for k in multi_indices_of_degree(n, deg):
                    checked += 1
                    ok &= not even_slice_vanishes(MultiPoly.monomial(k), D)
    ok &= passing > 0
    assert acceptance(10, ok, f"{checked} checks: {passing} passing polynomials all have degree < D + n; "
                              "every monomial of degree >= D + n fails")
