"""Multivariate Lidstone basis, reconstruction from admissible data, expansion.

Everything here reduces to one exact linear system: unknowns are the
coefficients of a polynomial of total degree <= d, and each admissible pair
(tau, j) with |tau| <= d contributes the row ``P -> (D^tau P)(s_j)``. Pairs
with |tau| > d impose nothing because such derivatives vanish identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .linalg import InconsistentSystemError, NonUniqueSolutionError, SparseEchelon, integer_row, rhs
from .multiindex import IndexPair, MultiIndex, enumerate_index_set, in_index_set
from .polycore import AffinePointFrame, MultiPoly, falling_factorial, format_rational, monomials, to_fraction

__all__ = [
    "NoSolutionWithinCapError",
    "InconsistentSystemError",
    "NonUniqueSolutionError",
    "LidstoneBasisElement",
    "DataSet",
    "constraint_row",
    "AdmissibleSystem",
    "univariate_lidstone",
    "lidstone_basis",
    "kernel_rank_check",
    "reconstruct",
    "reconstruct_general",
    "extract_data",
    "expand",
    "Expansion",
]


class NoSolutionWithinCapError(ArithmeticError):
    pass


def constraint_row(tau: Sequence[int], point: Sequence[Fraction], degree: int) -> dict:
    """Row of the functional P -> (D^tau P)(point) on monomials of degree <= degree."""
    n = len(tau)
    row = {}
    for k in monomials(n, degree):
        val = Fraction(1)
        for km, tm, pm in zip(k, tau, point):
            ff = falling_factorial(km, tm)
            if not ff:
                val = 0
                break
            e = km - tm
            if e and not pm:
                val = 0
                break
            val *= ff * (pm ** e if e else 1)
        if val:
            row[k] = val
    return row


class AdmissibleSystem:
    """Echelon form of the admissible-data system for degree <= d.

    Parameters
    ----------
    n : int
        Dimension.
    d : int
        Degree bound.
    frame : AffinePointFrame, optional
        Interpolation points; rational coordinates required. Defaults to the
        canonical frame 0, e_1, ..., e_n.
    rhs_columns : mapping, optional
        ``label -> {IndexPair: value}`` right-hand sides carried through the
        elimination. Missing pairs mean 0.
    """

    def __init__(self, n: int, d: int, frame: AffinePointFrame | None = None,
                 rhs_columns: Mapping | None = None):
        if d < 0:
            raise ValueError("degree bound must be >= 0")
        frame = frame or AffinePointFrame.canonical(n)
        if frame.n != n:
            raise ValueError("frame dimension mismatch")
        if not frame.exact:
            raise ValueError("the exact system needs rational frame points")
        self.n, self.d, self.frame = n, d, frame
        self.columns = list(monomials(n, d))
        self.pairs = enumerate_index_set(n, d)
        rhs_columns = rhs_columns or {}
        by_pair: dict = {}
        for label, data in rhs_columns.items():
            for pair, value in data.items():
                by_pair.setdefault(pair, {})[rhs(label)] = to_fraction(value)
        self.echelon = SparseEchelon(self.columns)
        for pair in self.pairs:
            row = constraint_row(pair.t, frame.points[pair.i], d)
            row.update(by_pair.get(pair, {}))
            self.echelon.add_row(integer_row(row))

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def kernel_trivial(self) -> bool:
        return self.echelon.full_column_rank()

    def consistent(self, label) -> bool:
        return rhs(label) not in self.echelon.inconsistent

    def solution(self, label) -> MultiPoly:
        sol = self.echelon.solve([rhs(label)])[rhs(label)]
        return MultiPoly(self.n, sol)


@lru_cache(maxsize=None)
def _unit_system(n: int, d: int) -> AdmissibleSystem:
    # every admissible pair of norm <= d gets its own unit right-hand side
    pairs = enumerate_index_set(n, d)
    return AdmissibleSystem(n, d, rhs_columns={p: {p: 1} for p in pairs})


def univariate_lidstone(k: int) -> MultiPoly:
    """Classical Lidstone polynomial: L_0 = z, L_k'' = L_{k-1}, L_k(0) = L_k(1) = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _univariate_lidstone(k)


@lru_cache(maxsize=None)
def _univariate_lidstone(k: int) -> MultiPoly:
    if k == 0:
        return MultiPoly.var(1, 1)
    prev = _univariate_lidstone(k - 1)
    # antiderivative twice, no constant term, then fix the value at 1
    terms = {(e[0] + 2,): c / ((e[0] + 1) * (e[0] + 2)) for e, c in prev.items()}
    p = MultiPoly(1, terms)
    return p - MultiPoly.var(1, 1).scale(p.substitute([Fraction(1)]))


@dataclass(frozen=True)
class LidstoneBasisElement:
    t: MultiIndex
    i: int
    poly: MultiPoly
    degree: int

    def to_json(self) -> dict:
        out = {"t": list(self.t), "i": self.i}
        out.update(self.poly.to_json())
        return out


def lidstone_basis(n: int, t: Sequence[int], i: int, degree_cap: int | None = None) -> LidstoneBasisElement:
    """Polynomial dual to the admissible pair (t, i) at the canonical points.

    Tries degree bounds |t| + 1, |t| + 2, ... up to ``degree_cap`` and returns
    the first solution (unique, since the admissible system never has a
    kernel).
    """
    t = MultiIndex(t)
    if len(t) != n:
        raise ValueError("dimension mismatch")
    if not in_index_set(t, i):
        raise ValueError(f"({tuple(t)}, {i}) is not an admissible pair")
    if degree_cap is None:
        degree_cap = t.norm + 2 * n + 4
    if degree_cap < t.norm + 1:
        raise ValueError("degree_cap must be at least |t| + 1")
    pair = IndexPair(t, i)
    for d in range(t.norm + 1, degree_cap + 1):
        system = _unit_system(n, d)
        if system.consistent(pair):
            poly = system.solution(pair)
            return LidstoneBasisElement(t, i, poly, poly.degree if poly.degree is not None else -1)
    raise NoSolutionWithinCapError(f"no basis polynomial for ({tuple(t)}, {i}) of degree <= {degree_cap}")


def kernel_rank_check(n: int, d: int) -> bool:
    """True iff only the zero polynomial of degree <= d has all-zero admissible data."""
    if d < 0:
        raise ValueError("d must be >= 0")
    return AdmissibleSystem(n, d).kernel_trivial()


# ---------------------------------------------------------------------------
# data sets and reconstruction


@dataclass
class DataSet:
    """Finite map admissible pair -> rational value, attached to a frame."""

    n: int
    entries: dict = field(default_factory=dict)
    frame: AffinePointFrame | None = None

    def __post_init__(self):
        clean = {}
        for key, value in self.entries.items():
            pair = key if isinstance(key, IndexPair) else IndexPair(MultiIndex(key[0]), key[1])
            if pair.n != self.n:
                raise ValueError(f"pair {pair} has wrong dimension")
            if not pair.admissible():
                raise ValueError(f"({tuple(pair.t)}, {pair.i}) is not an admissible pair")
            if pair in clean:
                raise ValueError(f"duplicate pair ({tuple(pair.t)}, {pair.i})")
            clean[pair] = to_fraction(value)
        self.entries = clean
        if self.frame is not None and self.frame.n != self.n:
            raise ValueError("frame dimension mismatch")

    @property
    def max_norm(self) -> int:
        return max((p.t.norm for p in self.entries), default=0)

    def point_frame(self) -> AffinePointFrame:
        return self.frame or AffinePointFrame.canonical(self.n)

    def to_json(self) -> dict:
        out: dict = {"n": self.n}
        if self.frame is not None:
            out["frame"] = self.frame.to_json()
        out["entries"] = [
            {"t": list(p.t), "i": p.i, "value": format_rational(v)}
            for p, v in sorted(self.entries.items(), key=lambda kv: kv[0].sort_key())
        ]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "DataSet":
        n = int(data["n"])
        frame = AffinePointFrame.from_json(data["frame"]) if data.get("frame") else None
        entries = {}
        for e in data.get("entries", []):
            pair = IndexPair(MultiIndex(e["t"]), int(e["i"]))
            if pair in entries:
                raise ValueError(f"duplicate pair ({tuple(pair.t)}, {pair.i})")
            entries[pair] = e["value"]
        return cls(n, entries, frame)


def extract_data(p: MultiPoly, frame: AffinePointFrame | None = None,
                 max_norm: int | None = None) -> DataSet:
    """All nonzero admissible data (D^t p)(s_i) of a polynomial."""
    frame = frame or AffinePointFrame.canonical(p.n)
    if max_norm is None:
        max_norm = p.degree or 0
    entries = {}
    for pair in enumerate_index_set(p.n, max_norm):
        v = p.diff(pair.t).substitute(list(frame.points[pair.i]))
        if v:
            entries[pair] = v
    return DataSet(p.n, entries, None if frame.is_canonical() else frame)


def _solve_data(data: DataSet, degree_bound: int, frame: AffinePointFrame) -> MultiPoly:
    if data.entries and data.max_norm > degree_bound:
        raise ValueError("data contain pairs with |t| above the degree bound")
    system = AdmissibleSystem(data.n, degree_bound, frame, rhs_columns={"data": data.entries})
    if not system.consistent("data"):
        raise InconsistentSystemError(
            f"no polynomial of degree <= {degree_bound} has these admissible data", ["data"])
    return system.solution("data")


def reconstruct(data: DataSet, degree_bound: int) -> MultiPoly:
    """Unique P of degree <= degree_bound with the given admissible data.

    Unlisted admissible pairs with |t| <= degree_bound are constrained to 0.
    Uses ``data.frame`` when set, the canonical points otherwise.
    """
    frame = data.point_frame()
    if not frame.exact:
        raise ValueError("reconstruction needs rational frame points")
    if frame.is_canonical() or not frame.is_axis_aligned():
        return _solve_data(data, degree_bound, frame)
    return reconstruct_general(data, degree_bound)


def reconstruct_general(data: DataSet, degree_bound: int) -> MultiPoly:
    """Reconstruction at rational points s_0, ..., s_n.

    For axis-aligned frames (s_i - s_0 a multiple of e_i) the data are
    rescaled to the canonical points, solved there and mapped back with
    :func:`inverse_precompose`. General frames mix admissible with
    non-admissible derivatives under the change of variables, so they are
    solved directly at the given points.
    """
    from .polycore import inverse_precompose

    frame = data.point_frame()
    if not frame.exact:
        raise ValueError("reconstruction needs rational frame points")
    if not frame.is_axis_aligned():
        return _solve_data(data, degree_bound, frame)
    m = frame.matrix()
    scale = [m[k][k] for k in range(data.n)]
    # D^t of P(s_0 + diag(scale) w) at e_i equals prod scale^t * (D^t P)(s_i)
    canon = {p: v * math.prod(scale[k] ** p.t[k] for k in range(data.n))
             for p, v in data.entries.items()}
    p_tilde = _solve_data(DataSet(data.n, canon), degree_bound, AffinePointFrame.canonical(data.n))
    return inverse_precompose(p_tilde, frame)


# ---------------------------------------------------------------------------
# truncated expansion


@dataclass
class ExpansionTerm:
    t: MultiIndex
    i: int
    coefficient: object
    exact: bool
    basis: MultiPoly


@dataclass
class Expansion:
    n: int
    truncation: int
    terms: list
    partial_sum: MultiPoly | None
    residual: float
    residual_polydisc: float
    basis_degrees: dict

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for term in self.terms:
            c = complex(term.coefficient)
            if c:
                out = out + c * term.basis.to_numpy_eval(pts)
        return out

    def to_json(self) -> dict:
        from .exprcalc.verify import DerivativeValue, format_value

        return {
            "n": self.n,
            "truncation": self.truncation,
            "terms": [
                {"t": list(tm.t), "i": tm.i,
                 "coefficient": format_value(DerivativeValue(tm.coefficient, tm.exact)),
                 "exact": tm.exact, "basis": tm.basis.to_json()}
                for tm in self.terms
            ],
            "partial_sum": self.partial_sum.to_json() if self.partial_sum is not None else None,
            "residual": self.residual,
            "residual_polydisc": self.residual_polydisc,
        }


def _as_poly(f, n: int) -> MultiPoly | None:
    from .exprcalc import Expr, to_multipoly

    if isinstance(f, MultiPoly):
        return f
    if isinstance(f, Expr):
        try:
            return to_multipoly(f, n)
        except ValueError:
            return None
    return None


def _sample_cube(n: int, per_axis: int) -> np.ndarray:
    axis = np.linspace(0.0, 1.0, per_axis)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1).astype(complex)


def _sample_polydisc(n: int, per_axis: int) -> np.ndarray:
    # real segment [0, 1] plus the unit circle in each coordinate
    circle = np.exp(2j * np.pi * np.arange(8) / 8)
    axis = np.concatenate([np.linspace(0.0, 1.0, per_axis), circle])
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def expand(f, n: int, truncation: int, sample_per_axis: int | None = None) -> Expansion:
    """Truncated Lidstone expansion of ``f`` at the canonical points.

    ``f`` is an Expr, a MultiPoly or a vectorized callable; coefficients are
    (D^t f)(e_i) for admissible pairs with |t| <= truncation. The residual is
    max |f - partial sum| on a grid of the real cube [0, 1]^n;
    ``residual_polydisc`` adds unit-circle samples in every coordinate.
    """
    from .exprcalc.verify import derivative_table, numeric_oracle

    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    frame = AffinePointFrame.canonical(n)
    pairs = enumerate_index_set(n, truncation)
    values = derivative_table(f, frame, pairs)
    terms = []
    degrees = {}
    for pair, val in zip(pairs, values):
        elem = lidstone_basis(n, pair.t, pair.i)
        degrees[(tuple(pair.t), pair.i)] = elem.degree
        terms.append(ExpansionTerm(pair.t, pair.i, val.value, val.exact, elem.poly))
    partial = None
    if all(tm.exact and isinstance(tm.coefficient, Fraction) for tm in terms):
        partial = MultiPoly.zero(n)
        for tm in terms:
            partial = partial + tm.basis.scale(tm.coefficient)
    if sample_per_axis is None:
        sample_per_axis = {1: 101, 2: 21, 3: 9}.get(n, 5)
    out = Expansion(n, truncation, terms, partial, 0.0, 0.0, degrees)
    if partial is not None and _as_poly(f, n) == partial:
        # terminating expansion of a polynomial: the residual is exactly 0
        return out
    oracle = numeric_oracle(f)
    cube = _sample_cube(n, sample_per_axis)
    disc = _sample_polydisc(n, min(sample_per_axis, 9))
    out.residual = float(np.max(np.abs(oracle(cube) - out.evaluate(cube))))
    out.residual_polydisc = float(np.max(np.abs(oracle(disc) - out.evaluate(disc))))
    return out
