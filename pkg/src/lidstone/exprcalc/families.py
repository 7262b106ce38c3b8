"""The three families of extremal example functions.

All three live on the axis-aligned frame ``s_0 = a``, ``s_i = a + (b_i - a_i) e_i``
and are written in the normalized coordinates ``w = theta(z)`` with
``theta_k(z) = (z_k - a_k) / (b_k - a_k)``:

kind 1
    ``sin(pi * (w_1 + ... + w_n))``
kind 2
    ``sum_{i<n} sin(pi w_i) g_i(w_{i+1}^2, ..., w_n^2) + sin(pi w_n) g_n(w_{n-1}^2)``
kind 3
    ``sum_{i<n} sinh(w_i - b_i)/sinh(a_i - b_i) g_i(w_{i+1}^2, ..., w_n^2)
    + sinh(w_n - b_n)/sinh(a_n - b_n) g_n(w_{n-1}^2)``

The formulas are built as written, including the arguments ``w_i - b_i`` of
kind 3 that mix normalized and raw coordinates. For ``n = 1`` the trailing
polynomial ``g_1`` has no argument and must be a constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from ..polycore import AffinePointFrame, MultiPoly, to_fraction
from .nodes import Expr, Var, add, const, div, mul, pi, poly_apply, power, sin, sinh, sub

__all__ = ["ExampleSpec", "ExampleFunction", "build_example", "theta"]


def _scalar(x):
    if isinstance(x, complex):
        return x
    return to_fraction(x)


@dataclass(frozen=True)
class ExampleSpec:
    """Parameters of one example function.

    ``g`` holds g_1, ..., g_n; g_i has n - i variables for i < n and g_n is
    univariate. Missing entries default to the constant 1.
    """

    kind: int
    n: int
    a: tuple
    b: tuple
    g: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in (1, 2, 3):
            raise ValueError("kind must be 1, 2 or 3")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        a = tuple(_scalar(x) for x in self.a)
        b = tuple(_scalar(x) for x in self.b)
        if len(a) != self.n or len(b) != self.n:
            raise ValueError("a and b need n coordinates each")
        if any(x == y for x, y in zip(a, b)):
            raise ValueError("a_i != b_i is required")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.kind == 2 and self.n < 2:
            raise ValueError("kind 2 needs n >= 2 (g_n takes w_{n-1})")
        g = list(self.g)
        if self.kind in (2, 3):
            while len(g) < self.n:
                g.append(None)
            if len(g) != self.n:
                raise ValueError(f"expected {self.n} polynomials g_i")
            for i in range(1, self.n + 1):
                arity = self.n - i if i < self.n else 1
                if g[i - 1] is None:
                    g[i - 1] = MultiPoly.constant(max(arity, 1), 1)
                p = g[i - 1]
                if not isinstance(p, MultiPoly):
                    raise TypeError("g_i must be MultiPoly instances")
                if p.n != max(arity, 1):
                    raise ValueError(f"g_{i} must have {arity} variable(s)")
                if self.n == 1 and p.degree not in (None, 0):
                    raise ValueError("for n = 1, g_1 has no argument and must be constant")
                if self.kind == 3 and any(c.denominator != 1 for _, c in p.items()):
                    raise ValueError("kind 3 needs integer coefficients in every g_i")
            if self.kind == 3:
                for x, y in zip(a, b):
                    d = complex(x) - complex(y)
                    k = d.imag / math.pi
                    if abs(d.real) < 1e-15 and abs(k - round(k)) < 1e-12:
                        raise ValueError("a_i - b_i must not lie in pi*i*Z")
        object.__setattr__(self, "g", tuple(g))

    @property
    def frame(self) -> AffinePointFrame:
        return AffinePointFrame.axis_aligned(self.a, self.b)


@dataclass(frozen=True)
class ExampleFunction:
    spec: ExampleSpec
    expr: Expr
    frame: AffinePointFrame


def theta(a: Sequence, b: Sequence) -> list[Expr]:
    """The normalization map z -> ((z_k - a_k)/(b_k - a_k))_k as expressions."""
    return [div(sub(Var(k + 1), const(a[k])), const(b[k]) - const(a[k])) for k in range(len(a))]


def _tail_args(w: list[Expr], i: int, n: int) -> list[Expr]:
    # arguments of g_i (1-based i)
    if i < n:
        return [power(w[m], 2) for m in range(i, n)]
    if n == 1:
        return [const(0)]
    return [power(w[n - 2], 2)]


def build_example(spec: ExampleSpec) -> ExampleFunction:
    n = spec.n
    w = theta(spec.a, spec.b)
    if spec.kind == 1:
        expr = sin(mul(pi, add(*w)))
    else:
        terms = []
        for i in range(1, n + 1):
            g = poly_apply(spec.g[i - 1], _tail_args(w, i, n))
            if spec.kind == 2:
                head = sin(mul(pi, w[i - 1]))
            else:
                ai, bi = const(spec.a[i - 1]), const(spec.b[i - 1])
                head = div(sinh(sub(w[i - 1], bi)), sinh(sub(ai, bi)))
            terms.append(mul(head, g))
        expr = add(*terms)
    return ExampleFunction(spec=spec, expr=expr, frame=spec.frame)
