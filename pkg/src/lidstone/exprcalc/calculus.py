"""Symbolic differentiation and exact/numeric evaluation of expressions."""

from __future__ import annotations

import numbers
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..polycore import MultiPoly, to_fraction
from .nodes import (
    ComplexConst, Const, Expr, Func, PolyApply, Pow, Product, Sum, Var,
    add, cos, cosh, mul, neg, poly_apply, power, sin, sinh,
)
from .pipoly import ONE, ZERO, PiPoly, exact_cos_pi, exact_sin_pi

__all__ = [
    "ExactEvaluationUnavailable",
    "diff",
    "differentiate_expr",
    "eval_exact",
    "eval_numeric",
    "eval_expr",
    "to_multipoly",
]

_ZERO = Const(ZERO)
_ONE = Const(ONE)


class ExactEvaluationUnavailable(ValueError):
    """The value at this point is not known to lie in Q[pi]."""


@lru_cache(maxsize=200_000)
def diff(e: Expr, j: int) -> Expr:
    """Partial derivative with respect to x_j (1-based)."""
    if j not in e.free_vars:
        return _ZERO
    if isinstance(e, Var):
        return _ONE
    if isinstance(e, Sum):
        return add(*(diff(t, j) for t in e.terms))
    if isinstance(e, Product):
        fs = e.factors
        terms = []
        for k, f in enumerate(fs):
            df = diff(f, j)
            if df != _ZERO:
                terms.append(mul(*fs[:k], df, *fs[k + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        return mul(Const(e.exponent), power(e.base, e.exponent - 1), diff(e.base, j))
    if isinstance(e, Func):
        u = e.arg
        du = diff(u, j)
        if e.name == "sin":
            outer = cos(u)
        elif e.name == "cos":
            outer = neg(sin(u))
        elif e.name == "sinh":
            outer = cosh(u)
        else:
            outer = sinh(u)
        return mul(outer, du)
    if isinstance(e, PolyApply):
        terms = []
        n = e.poly.n
        for m, a in enumerate(e.args):
            da = diff(a, j)
            if da == _ZERO:
                continue
            t = [0] * n
            t[m] = 1
            terms.append(mul(poly_apply(e.poly.diff(t), e.args), da))
        return add(*terms)
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def differentiate_expr(e: Expr, t: Sequence[int]) -> Expr:
    """D^t e, applied one variable at a time."""
    out = e
    for j, k in enumerate(t, start=1):
        for _ in range(k):
            out = diff(out, j)
            if out == _ZERO:
                return out
    return out


def _check_point(e: Expr, point: Sequence):
    if e.dim > len(point):
        raise ValueError(f"expression uses x{e.dim} but the point has {len(point)} coordinates")


def eval_exact(e: Expr, point: Sequence) -> PiPoly:
    """Exact value in Q[pi] at a rational point.

    Raises :class:`ExactEvaluationUnavailable` when a transcendental value
    (``sin`` away from the rational-valued multiples of pi, ``sinh`` away
    from 0, complex float constants) is needed.
    """
    _check_point(e, point)
    try:
        pt = tuple(to_fraction(x) for x in point)
    except (TypeError, ValueError) as exc:
        raise ExactEvaluationUnavailable("exact evaluation needs rational coordinates") from exc
    cache: dict = {}
    return _exact(e, pt, cache)


def _exact(e: Expr, pt, cache) -> PiPoly:
    hit = cache.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Const):
        out = e.value
    elif isinstance(e, ComplexConst):
        raise ExactEvaluationUnavailable(f"inexact constant {e}")
    elif isinstance(e, Var):
        out = PiPoly(pt[e.index - 1])
    elif isinstance(e, Sum):
        out = ZERO
        for t in e.terms:
            out = out + _exact(t, pt, cache)
    elif isinstance(e, Product):
        out = ONE
        for f in e.factors:
            out = out * _exact(f, pt, cache)
            if out.is_zero():
                break
    elif isinstance(e, Pow):
        b = _exact(e.base, pt, cache)
        if e.exponent < 0 and not b.invertible():
            raise ExactEvaluationUnavailable(f"cannot invert {b} in Q[pi]")
        out = b ** e.exponent
    elif isinstance(e, Func):
        a = _exact(e.arg, pt, cache)
        if e.name in ("sin", "cos"):
            q = a.pi_multiple()
            val = None
            if q is not None:
                val = exact_sin_pi(q) if e.name == "sin" else exact_cos_pi(q)
            if val is None:
                raise ExactEvaluationUnavailable(f"{e.name}({a}) is not rational")
            out = PiPoly(val)
        else:
            if not a.is_zero():
                raise ExactEvaluationUnavailable(f"{e.name}({a}) is transcendental")
            out = ZERO if e.name == "sinh" else ONE
    elif isinstance(e, PolyApply):
        vals = [_exact(a, pt, cache) for a in e.args]
        out = PiPoly() + e.poly.substitute(vals)
    else:
        raise TypeError(f"cannot evaluate {type(e).__name__}")
    cache[e] = out
    return out


_NUMPY_FUNCS = {"sin": np.sin, "cos": np.cos, "sinh": np.sinh, "cosh": np.cosh}


def eval_numeric(e: Expr, points) -> np.ndarray | complex:
    """Complex floating evaluation.

    ``points`` is a single point (sequence of n numbers) or an array of shape
    (..., n); the result has shape ``points.shape[:-1]``.
    """
    pts = np.asarray(points, dtype=complex)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    _check_point(e, [0] * pts.shape[-1])
    cache: dict = {}
    with np.errstate(over="ignore", invalid="ignore"):
        out = _numeric(e, pts, cache)
    out = np.broadcast_to(np.asarray(out, dtype=complex), pts.shape[:-1])
    if single:
        return complex(out[0])
    return np.array(out)


def _numeric(e: Expr, pts, cache):
    hit = cache.get(e)
    if hit is not None:
        return hit
    if isinstance(e, (Const, ComplexConst)):
        out = complex(e.value)
    elif isinstance(e, Var):
        out = pts[..., e.index - 1]
    elif isinstance(e, Sum):
        out = 0j
        for t in e.terms:
            out = out + _numeric(t, pts, cache)
    elif isinstance(e, Product):
        out = 1 + 0j
        for f in e.factors:
            out = out * _numeric(f, pts, cache)
    elif isinstance(e, Pow):
        out = _numeric(e.base, pts, cache) ** e.exponent
    elif isinstance(e, Func):
        out = _NUMPY_FUNCS[e.name](_numeric(e.arg, pts, cache))
    elif isinstance(e, PolyApply):
        args = [np.broadcast_to(_numeric(a, pts, cache), pts.shape[:-1]) for a in e.args]
        out = e.poly.to_numpy_eval(np.stack(args, axis=-1))
    else:
        raise TypeError(f"cannot evaluate {type(e).__name__}")
    cache[e] = out
    return out


def _is_rational_point(point) -> bool:
    return all(isinstance(x, (numbers.Rational, str)) and not isinstance(x, bool) for x in point)


def eval_expr(e: Expr, point: Sequence, mode: str = "exact"):
    """Evaluate at one point.

    ``mode='exact'`` returns a :class:`Fraction` when the value is rational
    and a :class:`PiPoly` otherwise; ``mode='numeric'`` returns a complex.
    """
    if mode == "numeric":
        return eval_numeric(e, point)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if not _is_rational_point(point):
        raise ExactEvaluationUnavailable("exact evaluation needs rational coordinates")
    v = eval_exact(e, point)
    return v.to_fraction() if v.is_rational() else v


def to_multipoly(e: Expr, n: int | None = None) -> MultiPoly:
    """Expand a polynomial expression with rational coefficients.

    Raises ValueError for transcendental functions, constants involving pi
    or complex floats, and negative powers of non-constant bases.
    """
    n = max(e.dim, 1) if n is None else n
    if e.dim > n:
        raise ValueError(f"expression uses x{e.dim} but n = {n}")
    cache: dict = {}

    def conv(x: Expr) -> MultiPoly:
        hit = cache.get(x)
        if hit is not None:
            return hit
        if isinstance(x, Const):
            if not x.value.is_rational():
                raise ValueError(f"constant {x} is not rational")
            out = MultiPoly.constant(n, x.value.to_fraction())
        elif isinstance(x, Var):
            out = MultiPoly.var(n, x.index)
        elif isinstance(x, Sum):
            out = MultiPoly.zero(n)
            for t in x.terms:
                out = out + conv(t)
        elif isinstance(x, Product):
            out = MultiPoly.constant(n, 1)
            for f in x.factors:
                out = out * conv(f)
        elif isinstance(x, Pow):
            base = conv(x.base)
            if x.exponent < 0:
                if base.degree not in (0, None) or base.is_zero():
                    raise ValueError("negative power of a non-constant")
                out = MultiPoly.constant(n, base.coefficient((0,) * n) ** x.exponent)
            else:
                out = base ** x.exponent
        elif isinstance(x, PolyApply):
            out = x.poly.substitute([conv(a) for a in x.args])
            if not isinstance(out, MultiPoly):
                out = MultiPoly.constant(n, out)
        else:
            raise ValueError(f"{x} is not a polynomial")
        cache[x] = out
        return out

    return conv(e)
