"""Exact sparse linear algebra over Q.

Rows are dicts ``column -> int``. Elimination is fraction-free: a row is
reduced by cross-multiplication with the pivot row and then divided by the
gcd of its entries, so no rational numbers appear until back substitution.

Right-hand sides ride along as extra columns with keys ``("rhs", k)`` and
never act as pivots.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

__all__ = [
    "InconsistentSystemError",
    "NonUniqueSolutionError",
    "SparseEchelon",
    "integer_row",
    "exact_rank",
    "solve_exact",
]


class InconsistentSystemError(ArithmeticError):
    """No solution exists for (some of) the requested right-hand sides."""

    def __init__(self, message: str, columns: Iterable = ()):
        super().__init__(message)
        self.columns = tuple(columns)


class NonUniqueSolutionError(ArithmeticError):
    """The coefficient matrix has a nontrivial kernel."""


def integer_row(row: Mapping[Hashable, object]) -> dict:
    """Scale a rational row to a primitive integer row (same solution set)."""
    row = {k: Fraction(v) for k, v in row.items() if v}
    if not row:
        return {}
    den = math.lcm(*(v.denominator for v in row.values()))
    ints = {k: int(v * den) for k, v in row.items()}
    g = math.gcd(*ints.values())
    return {k: v // g for k, v in ints.items()}


def _primitive(row: dict) -> dict:
    g = math.gcd(*row.values())
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class SparseEchelon:
    """Incremental row echelon form of an integer matrix.

    Parameters
    ----------
    columns : sequence
        The unknowns, in pivot order. Each row's leading column is its first
        nonzero unknown in this order.
    """

    def __init__(self, columns: Sequence[Hashable]):
        self.columns = list(columns)
        self._pos = {c: k for k, c in enumerate(self.columns)}
        if len(self._pos) != len(self.columns):
            raise ValueError("duplicate column labels")
        self.pivots: dict[int, dict] = {}
        # rhs keys of rows reduced to 0 = nonzero
        self.inconsistent: set = set()

    def _lead(self, row: dict) -> int | None:
        best = None
        for k in row:
            p = self._pos.get(k)
            if p is not None and (best is None or p < best):
                best = p
        return best

    def add_row(self, row: Mapping[Hashable, int]) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row = {k: v for k, v in row.items() if v}
        for k in row:
            if k not in self._pos and not (isinstance(k, tuple) and k[:1] == ("rhs",)):
                raise KeyError(f"unknown column {k!r}")
        while True:
            lead = self._lead(row)
            if lead is None:
                self.inconsistent.update(row.keys())
                return False
            piv = self.pivots.get(lead)
            if piv is None:
                self.pivots[lead] = _primitive(row)
                return True
            col = self.columns[lead]
            a, b = piv[col], row[col]
            g = math.gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: fa * v for k, v in row.items()}
            for k, v in piv.items():
                nv = new.get(k, 0) - fb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else new

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def full_column_rank(self) -> bool:
        return self.rank == len(self.columns)

    def solve(self, rhs_keys: Iterable[Hashable]) -> dict:
        """Back-substitute for each rhs key.

        Returns ``{rhs_key: {column: Fraction}}``. Raises
        :class:`NonUniqueSolutionError` when the kernel is nontrivial and
        :class:`InconsistentSystemError` listing every inconsistent rhs key.
        """
        rhs_keys = list(rhs_keys)
        bad = [k for k in rhs_keys if k in self.inconsistent]
        if bad:
            raise InconsistentSystemError(f"{len(bad)} right-hand side(s) inconsistent", bad)
        if not self.full_column_rank():
            raise NonUniqueSolutionError(
                f"rank {self.rank} < {len(self.columns)} unknowns: solution not unique")
        out = {}
        for key in rhs_keys:
            sol: dict = {}
            for lead in sorted(self.pivots, reverse=True):
                row = self.pivots[lead]
                col = self.columns[lead]
                acc = Fraction(row.get(key, 0))
                for k, v in row.items():
                    if k != col and k in self._pos:
                        x = sol.get(k)
                        if x:
                            acc -= v * x
                val = acc / row[col]
                if val:
                    sol[col] = val
            out[key] = sol
        return out


def rhs(k) -> tuple:
    """Column label for the ``k``-th right-hand side."""
    return ("rhs", k)


def exact_rank(rows: Iterable[Mapping[Hashable, object]], columns: Sequence[Hashable]) -> int:
    ech = SparseEchelon(columns)
    for row in rows:
        ech.add_row(integer_row(row))
    return ech.rank


def solve_exact(matrix: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique solution of a dense rational system ``matrix @ x = b``."""
    ncols = len(matrix[0]) if matrix else 0
    ech = SparseEchelon(range(ncols))
    key = rhs(0)
    for row, bi in zip(matrix, b):
        r = {j: v for j, v in enumerate(row) if v}
        if bi:
            r[key] = bi
        ech.add_row(integer_row(r))
    sol = ech.solve([key])[key]
    return [sol.get(j, Fraction(0)) for j in range(ncols)]
