from __future__ import annotations

from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lidstone.linalg import (
    InconsistentSystemError, NonUniqueSolutionError, SparseEchelon, exact_rank, integer_row, rhs,
    solve_exact,
)


def test_integer_row_clears_denominators():
    row = integer_row({"a": Q(1, 2), "b": Q(-2, 3)})
    assert row == {"a": 3, "b": -4}


def test_overdetermined_consistent_and_inconsistent():
    ech = SparseEchelon(["x", "y"])
    # x + y = 3, x - y = 1, 2x = 4 (consistent); 3x = 7 clashes for the second rhs
    for row in ({"x": 1, "y": 1, rhs(0): 3, rhs(1): 3},
                {"x": 1, "y": -1, rhs(0): 1, rhs(1): 1},
                {"x": 2, rhs(0): 4, rhs(1): 4},
                {"x": 3, rhs(0): 6, rhs(1): 7}):
        ech.add_row(row)
    assert ech.rank == 2
    assert ech.solve([rhs(0)])[rhs(0)] == {"x": 2, "y": 1}
    with pytest.raises(InconsistentSystemError):
        ech.solve([rhs(1)])


def test_nontrivial_kernel_is_reported():
    ech = SparseEchelon(["x", "y"])
    ech.add_row({"x": 1, "y": 1, rhs(0): 1})
    assert not ech.full_column_rank()
    with pytest.raises(NonUniqueSolutionError):
        ech.solve([rhs(0)])


def test_unknown_column_rejected():
    with pytest.raises(KeyError):
        SparseEchelon(["x"]).add_row({"z": 1})


square = st.integers(1, 5).flatmap(
    lambda m: st.tuples(st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=m, max_size=m),
                        st.lists(st.integers(-9, 9), min_size=m, max_size=m)))


@settings(max_examples=80, deadline=None)
@given(square)
def test_rank_and_solution_agree_with_numpy(system):
    a, b = system
    m = len(a)
    rank = exact_rank([{j: a[i][j] for j in range(m)} for i in range(m)], list(range(m)))
    assert rank == np.linalg.matrix_rank(np.array(a, dtype=float))
    if rank == m:
        x = solve_exact(a, b)
        for i in range(m):
            assert sum(Q(a[i][j]) * x[j] for j in range(m)) == b[i]
        assert np.allclose([float(v) for v in x], np.linalg.solve(np.array(a, float), np.array(b, float)))
