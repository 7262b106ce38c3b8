"""Exact multivariate polynomials over Q and affine changes of coordinates.

Coefficients are :class:`fractions.Fraction`. Terms are stored sparsely as a
mapping from exponent tuples to nonzero coefficients; iteration and
serialization use graded-lex order.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .multiindex import MultiIndex, graded_lex_key, multi_indices_of_degree

__all__ = [
    "MultiPoly",
    "AffinePointFrame",
    "SingularFrameError",
    "to_fraction",
    "format_rational",
    "parse_rational",
    "falling_factorial",
    "poly_arith",
    "differentiate",
    "evaluate",
    "precompose_affine",
    "inverse_precompose",
    "even_slice_vanishes",
    "random_poly",
]


class SingularFrameError(ValueError):
    """The vectors s_i - s_0 do not form a basis."""


def to_fraction(x) -> Fraction:
    """Exact conversion of ints, Fractions, decimal/rational strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    """Canonical "p/q" form; integers print without a denominator."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def falling_factorial(k: int, m: int) -> int:
    """k (k-1) ... (k-m+1); zero when m > k."""
    if m > k:
        return 0
    out = 1
    for j in range(k - m + 1, k + 1):
        out *= j
    return out


class MultiPoly:
    """Polynomial in ``n`` variables with rational coefficients.

    Parameters
    ----------
    n : int
        Number of variables.
    terms : mapping, optional
        Exponent tuple -> coefficient. Zero coefficients are dropped and
        coefficients are converted with :func:`to_fraction`.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | None = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        clean: dict[tuple, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has wrong length for n={n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp}")
            c = to_fraction(coef)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "MultiPoly":
        # trusted constructor: keys are int tuples, values nonzero Fractions
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, n: int) -> "MultiPoly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "MultiPoly":
        c = to_fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, k: int) -> "MultiPoly":
        """The coordinate z_k, 1-based."""
        if not 1 <= k <= n:
            raise ValueError(f"variable index {k} outside 1..{n}")
        return cls._raw(n, {tuple(MultiIndex.unit(n, k - 1)): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1) -> "MultiPoly":
        return cls(len(exp), {tuple(exp): coef})

    # basic queries

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """(exponent, coefficient) pairs in graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: graded_lex_key(kv[0]))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def degree(self) -> int | None:
        """Total degree; ``None`` for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(e) for e in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (numbers.Rational, Fraction)):
            return self == MultiPoly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # ring operations

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        return MultiPoly.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = to_fraction(c)
        if not c:
            return MultiPoly.zero(self.n)
        return MultiPoly._raw(self.n, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.n, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # calculus and evaluation

    def diff(self, t: Sequence[int]) -> "MultiPoly":
        """Exact D^t."""
        t = tuple(t)
        if len(t) != self.n:
            raise ValueError("dimension mismatch")
        out = {}
        for e, c in self._terms.items():
            mult = 1
            for k, m in zip(e, t):
                mult *= falling_factorial(k, m)
                if not mult:
                    break
            if mult:
                out[tuple(k - m for k, m in zip(e, t))] = c * mult
        return MultiPoly._raw(self.n, out)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple, np.ndarray)):
            point = point[0]
        return evaluate(self, point)

    def substitute(self, values: Sequence) -> object:
        """Evaluate with arbitrary ring elements (e.g. MultiPoly) as arguments."""
        if len(values) != self.n:
            raise ValueError("dimension mismatch")
        if not self._terms:
            return Fraction(0)
        # cache powers per variable
        max_exp = [max(e[k] for e in self._terms) for k in range(self.n)]
        powers = []
        for k in range(self.n):
            pw = [None] * (max_exp[k] + 1)
            for j in range(max_exp[k] + 1):
                pw[j] = 1 if j == 0 else (values[k] if j == 1 else pw[j - 1] * values[k])
            powers.append(pw)
        total = 0
        for e, c in self.items():
            term = c
            for k, j in enumerate(e):
                if j:
                    term = term * powers[k][j]
            total = total + term
        return total

    def to_numpy_eval(self, points) -> np.ndarray:
        """Floating evaluation at an array of points of shape (..., n)."""
        pts = np.asarray(points, dtype=complex)
        if pts.shape[-1] != self.n:
            raise ValueError("dimension mismatch")
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for e, c in self._terms.items():
            term = np.full(pts.shape[:-1], float(c), dtype=complex)
            for k, j in enumerate(e):
                if j:
                    term = term * pts[..., k] ** j
            out = out + term
        return out

    # presentation

    def __repr__(self) -> str:
        return f"MultiPoly({self.n}, {self.to_string()!r})"

    def to_string(self, var: str = "x") -> str:
        """Human/parser-friendly text, e.g. ``'x1^2 - 1/2*x1*x2 + 3'``."""
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.items():
            mono = "*".join(
                f"{var}{k + 1}" + (f"^{j}" if j > 1 else "") for k, j in enumerate(e) if j
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
            else:
                body = format_rational(a)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [{"exp": list(e), "coef": format_rational(c)} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        n = int(data["n"])
        terms: dict = {}
        for term in data.get("terms", []):
            exp = tuple(int(x) for x in term["exp"])
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp}")
            terms[exp] = to_fraction(term["coef"])
        return cls(n, terms)


def poly_arith(p: MultiPoly, q, op: str) -> MultiPoly:
    """Apply ``op`` in {'add', 'sub', 'mul', 'scale'} to ``p`` and ``q``."""
    if op == "add":
        return p + p._coerce(q)
    if op == "sub":
        return p - p._coerce(q)
    if op == "mul":
        return p * p._coerce(q)
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


def differentiate(p: MultiPoly, t: Sequence[int]) -> MultiPoly:
    return p.diff(t)


def evaluate(p: MultiPoly, point: Sequence):
    """Evaluate ``p`` at ``point``.

    Rational coordinates give an exact :class:`Fraction`; any float or complex
    coordinate switches to complex floating arithmetic.
    """
    if len(point) != p.n:
        raise ValueError(f"point has {len(point)} coordinates, expected {p.n}")
    if all(_is_exact_scalar(x) for x in point):
        vals = [to_fraction(x) for x in point]
        res = p.substitute(vals)
        return Fraction(res)
    return complex(p.to_numpy_eval(np.asarray(point, dtype=complex)[None, :])[0])


# ---------------------------------------------------------------------------
# Affine frames


def _solve_square_exact(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularFrameError("frame vectors s_i - s_0 are linearly dependent")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _is_exact_scalar(x) -> bool:
    if isinstance(x, bool):
        return False
    return isinstance(x, (numbers.Rational, str))


class AffinePointFrame:
    """Points ``s_0, ..., s_n`` in C^n whose differences form a basis.

    With all-rational coordinates the frame is *exact* and supports exact
    precomposition; otherwise coordinates are stored as complex floats.
    """

    def __init__(self, points: Sequence[Sequence]):
        pts = [list(p) for p in points]
        if len(pts) < 2:
            raise ValueError("a frame needs n + 1 >= 2 points")
        n = len(pts) - 1
        if any(len(p) != n for p in pts):
            raise ValueError(f"every point needs {n} coordinates")
        self.n = n
        if all(_is_exact_scalar(x) for p in pts for x in p):
            self.points = tuple(tuple(to_fraction(x) for x in p) for p in pts)
            self.exact = True
        else:
            self.points = tuple(tuple(complex(x) for x in p) for p in pts)
            self.exact = False
        if self.exact:
            self._inverse = _solve_square_exact(self.matrix())
        else:
            m = np.array(self.matrix(), dtype=complex)
            if np.linalg.matrix_rank(m) < n:
                raise SingularFrameError("frame vectors s_i - s_0 are linearly dependent")
            self._inverse = np.linalg.inv(m)

    @classmethod
    def canonical(cls, n: int) -> "AffinePointFrame":
        """s_0 = 0 and s_i = e_i."""
        pts = [[0] * n] + [[int(j == i) for j in range(n)] for i in range(n)]
        return cls(pts)

    @classmethod
    def axis_aligned(cls, a: Sequence, b: Sequence) -> "AffinePointFrame":
        """s_0 = a, s_i = a + (b_i - a_i) e_i."""
        n = len(a)
        pts = [list(a)]
        for i in range(n):
            p = list(a)
            p[i] = b[i]
            pts.append(p)
        return cls(pts)

    def matrix(self) -> list[list]:
        """Matrix whose column ``i`` is s_{i+1} - s_0."""
        s0 = self.points[0]
        return [[self.points[i + 1][k] - s0[k] for i in range(self.n)] for k in range(self.n)]

    def inverse_matrix(self):
        return self._inverse

    def is_canonical(self) -> bool:
        return self.exact and self == AffinePointFrame.canonical(self.n)

    def is_axis_aligned(self) -> bool:
        """True when each s_i - s_0 is a multiple of e_i."""
        m = self.matrix()
        return all(m[k][i] == 0 for k in range(self.n) for i in range(self.n) if k != i)

    def max_norm(self) -> float:
        """max_i |s_i| with |z| the max-modulus norm."""
        return max(max(abs(complex(x)) for x in p) for p in self.points)

    def map_point(self, w: Sequence):
        """s_0 + sum_i (s_i - s_0) w_i."""
        m = self.matrix()
        s0 = self.points[0]
        return tuple(s0[k] + sum(m[k][i] * w[i] for i in range(self.n)) for k in range(self.n))

    def numeric_points(self) -> np.ndarray:
        return np.array([[complex(x) for x in p] for p in self.points], dtype=complex)

    def __eq__(self, other) -> bool:
        return isinstance(other, AffinePointFrame) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"AffinePointFrame({[list(map(str, p)) for p in self.points]})"

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return format_rational(x)
            return [x.real, x.imag]

        return {"points": [[enc(x) for x in p] for p in self.points]}

    @classmethod
    def from_json(cls, data: Mapping) -> "AffinePointFrame":
        def dec(x):
            if isinstance(x, (list, tuple)):
                return complex(float(x[0]), float(x[1]))
            return x

        return cls([[dec(x) for x in p] for p in data["points"]])


def _require_exact(frame: AffinePointFrame):
    if not frame.exact:
        raise ValueError("exact precomposition needs a frame with rational coordinates")


def precompose_affine(p: MultiPoly, frame: AffinePointFrame) -> MultiPoly:
    """``P~(z) = P(s_0 + sum_i (s_i - s_0) z_i)``, exactly."""
    if p.n != frame.n:
        raise ValueError("dimension mismatch")
    _require_exact(frame)
    n = p.n
    m = frame.matrix()
    s0 = frame.points[0]
    subs = []
    for k in range(n):
        lin = MultiPoly.constant(n, s0[k])
        for i in range(n):
            lin = lin + MultiPoly.var(n, i + 1).scale(m[k][i])
        subs.append(lin)
    out = p.substitute(subs)
    return out if isinstance(out, MultiPoly) else MultiPoly.constant(n, out)


def inverse_precompose(p_tilde: MultiPoly, frame: AffinePointFrame) -> MultiPoly:
    """Undo :func:`precompose_affine`: ``P(x) = P~(M^{-1}(x - s_0))``."""
    if p_tilde.n != frame.n:
        raise ValueError("dimension mismatch")
    _require_exact(frame)
    n = p_tilde.n
    inv = frame.inverse_matrix()
    s0 = frame.points[0]
    subs = []
    for i in range(n):
        lin = MultiPoly.zero(n)
        for k in range(n):
            if inv[i][k]:
                lin = lin + (MultiPoly.var(n, k + 1) - s0[k]).scale(inv[i][k])
        subs.append(lin)
    out = p_tilde.substitute(subs)
    return out if isinstance(out, MultiPoly) else MultiPoly.constant(n, out)


def even_slice_vanishes(p: MultiPoly, D: int) -> bool:
    """True iff D^t p = 0 for every t with all entries even and |t| = D.

    For odd ``D`` no such t exists and the answer is vacuously True.
    """
    if D < 1:
        raise ValueError("D must be a positive integer")
    if D % 2:
        return True
    for half in multi_indices_of_degree(p.n, D // 2):
        if not p.diff([2 * h for h in half]).is_zero():
            return False
    return True


def random_poly(rng, n: int, max_degree: int, coef_range: int = 9, density: float = 0.5,
                integer: bool = True) -> MultiPoly:
    """Random polynomial for test corpora; ``rng`` is a ``random.Random``."""
    terms = {}
    for d in range(max_degree + 1):
        for e in multi_indices_of_degree(n, d):
            if rng.random() < density:
                c = rng.randint(-coef_range, coef_range)
                if not integer:
                    c = Fraction(c, rng.randint(1, coef_range))
                terms[tuple(e)] = c
    return MultiPoly(n, terms)


def monomials(n: int, max_degree: int) -> Iterable[tuple]:
    for d in range(max_degree + 1):
        for e in multi_indices_of_degree(n, d):
            yield tuple(e)
