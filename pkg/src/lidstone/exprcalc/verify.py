"""Derivative data of test functions and checks of zero/integer properties."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..multiindex import IndexPair, enumerate_index_set, multi_indices_of_degree
from ..polycore import AffinePointFrame, MultiPoly, format_rational
from .calculus import ExactEvaluationUnavailable, differentiate_expr, eval_exact, eval_numeric
from .contour import contour_derivative, contour_derivatives
from .nodes import Expr
from .pipoly import PiPoly

__all__ = [
    "DerivativeValue",
    "derivative_value",
    "derivative_table",
    "numeric_oracle",
    "VerificationEntry",
    "VerificationReport",
    "verify_data_property",
    "format_value",
]


@dataclass(frozen=True)
class DerivativeValue:
    """(D^t f)(point). ``value`` is a Fraction/PiPoly when exact, else complex."""

    value: object
    exact: bool

    def as_complex(self) -> complex:
        return complex(self.value)


def numeric_oracle(f) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized evaluation callable for an Expr, MultiPoly or callable."""
    if isinstance(f, Expr):
        return lambda pts: eval_numeric(f, pts)
    if isinstance(f, MultiPoly):
        return f.to_numpy_eval
    if callable(f):
        return f
    raise TypeError(f"cannot build an oracle from {type(f).__name__}")


def derivative_value(f, t: Sequence[int], point: Sequence, method: str = "auto",
                     radius: float = 1.0, nodes: int = 64) -> DerivativeValue:
    """(D^t f)(point) for an Expr, MultiPoly or vectorized callable.

    ``method``: ``'auto'`` is exact when possible, otherwise numeric
    evaluation of the symbolic derivative; ``'numeric'`` skips the exact
    attempt; ``'contour'`` uses Cauchy-integral quadrature on ``f`` itself.
    Plain callables always go through the contour rule.
    """
    t = tuple(int(k) for k in t)
    if method == "contour" or not isinstance(f, (Expr, MultiPoly)):
        v = contour_derivative(numeric_oracle(f), t, [complex(x) for x in point], radius, nodes)
        return DerivativeValue(v, False)
    exact_point = all(isinstance(x, Fraction) or isinstance(x, int) for x in point)
    if isinstance(f, MultiPoly):
        d = f.diff(t)
        if exact_point and method == "auto":
            return DerivativeValue(Fraction(d.substitute([Fraction(x) for x in point])), True)
        return DerivativeValue(complex(d.to_numpy_eval(np.asarray([point], dtype=complex))[0]), False)
    d = differentiate_expr(f, t)
    if exact_point and method == "auto":
        try:
            v = eval_exact(d, point)
            return DerivativeValue(v.to_fraction() if v.is_rational() else v, True)
        except ExactEvaluationUnavailable:
            pass
    return DerivativeValue(eval_numeric(d, [complex(x) for x in point]), False)


def derivative_table(f, frame: AffinePointFrame, pairs: Sequence[IndexPair], method: str = "auto",
                     radius: float = 1.0, nodes: int = 64) -> list[DerivativeValue]:
    """(D^t f)(s_i) for every pair, batching contour evaluations per point."""
    use_contour = method == "contour" or not isinstance(f, (Expr, MultiPoly))
    if not use_contour:
        return [derivative_value(f, p.t, frame.points[p.i], method=method) for p in pairs]
    oracle = numeric_oracle(f)
    out: list = [None] * len(pairs)
    by_point: dict = {}
    for k, p in enumerate(pairs):
        by_point.setdefault(p.i, []).append(k)
    for i, members in by_point.items():
        z0 = [complex(x) for x in frame.points[i]]
        vals = contour_derivatives(oracle, [pairs[k].t for k in members], z0, radius, nodes)
        for k, v in zip(members, vals):
            out[k] = DerivativeValue(v, False)
    return out


def format_value(v: DerivativeValue):
    """JSON encoding: exact values as strings, numeric ones as [re, im]."""
    if v.exact:
        if isinstance(v.value, PiPoly):
            return v.value.to_text()
        return format_rational(v.value)
    c = complex(v.value)
    return [c.real, c.imag]


@dataclass
class VerificationEntry:
    t: tuple
    i: int
    value: DerivativeValue
    passed: bool

    def to_json(self) -> dict:
        return {"t": list(self.t), "i": self.i, "value": format_value(self.value),
                "exact": self.value.exact, "pass": self.passed}


@dataclass
class VerificationReport:
    predicate: str
    max_norm: int
    restrict_to_T: bool
    tol: float
    method: str
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list:
        return [e for e in self.entries if not e.passed]

    def to_json(self) -> dict:
        return {
            "predicate": self.predicate,
            "max_norm": self.max_norm,
            "restrict_to_T": self.restrict_to_T,
            "tol": self.tol,
            "method": self.method,
            "pass": self.passed,
            "n_checked": len(self.entries),
            "n_failed": len(self.failures()),
            "entries": [e.to_json() for e in self.entries],
        }


def _even_pairs(n: int, max_norm: int) -> list[IndexPair]:
    out = []
    for d in range(0, max_norm + 1, 2):
        for t in multi_indices_of_degree(n, d):
            for i in range(n + 1):
                out.append(IndexPair(t, i))
    return out


def _check(value: DerivativeValue, predicate: str, tol: float) -> bool:
    if value.exact:
        v = value.value
        if predicate == "zero":
            return v == 0
        return isinstance(v, Fraction) and v.denominator == 1
    c = complex(value.value)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        return False
    if predicate == "zero":
        return abs(c) <= tol
    return abs(c - round(c.real)) <= tol


def verify_data_property(f, frame: AffinePointFrame, max_norm: int, predicate: str = "zero",
                         tol: float = 1e-9, restrict_to_T: bool = True, method: str = "auto",
                         scale_tol: bool = True, radius: float = 1.0,
                         nodes: int = 64) -> VerificationReport:
    """Check that every (D^t f)(s_i) is zero (or an integer).

    Pairs range over the admissible set (``restrict_to_T``) or over every
    ``(t, i)`` with ``|t|`` even, up to ``|t| <= max_norm``. Numeric values
    pass when within ``tol``, multiplied by ``t!`` when ``scale_tol`` is set
    (roundoff in a derivative of order t grows like its factorial weight).
    """
    if predicate not in ("zero", "integer"):
        raise ValueError("predicate must be 'zero' or 'integer'")
    if max_norm < 0:
        raise ValueError("max_norm must be >= 0")
    n = frame.n
    pairs = enumerate_index_set(n, max_norm) if restrict_to_T else _even_pairs(n, max_norm)
    report = VerificationReport(predicate, max_norm, restrict_to_T, tol, method)
    values = derivative_table(f, frame, pairs, method=method, radius=radius, nodes=nodes)
    for pair, value in zip(pairs, values):
        eff = tol * (math.prod(math.factorial(k) for k in pair.t) if scale_tol else 1)
        report.entries.append(VerificationEntry(tuple(pair.t), pair.i, value,
                                                _check(value, predicate, eff)))
    return report
