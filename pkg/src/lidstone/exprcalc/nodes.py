"""Expression trees for entire test functions.

Nodes are immutable and hashable. Build them through the constructor
functions (:func:`add`, :func:`mul`, :func:`power`, :func:`func`,
:func:`poly_apply`), which keep trees in a canonical form:

* sums and products are flattened and sorted;
* numeric constants are folded, exact ones in Q[pi], inexact ones as complex
  floats (mixing the two gives a complex float);
* like terms are collected and equal bases merged into integer powers;
* ``sin``/``cos`` at rational multiples of pi and ``sinh``/``cosh`` at 0 are
  evaluated when the value is rational.

No other identities are applied.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Sequence

from ..polycore import MultiPoly, to_fraction
from .pipoly import ONE, PI, ZERO, PiPoly, exact_cos_pi, exact_sin_pi

__all__ = [
    "Expr", "Const", "ComplexConst", "Var", "Sum", "Product", "Pow", "Func", "PolyApply",
    "FUNCTIONS", "const", "var", "add", "neg", "sub", "mul", "div", "power", "func",
    "sin", "cos", "sinh", "cosh", "poly_apply", "pi", "ExprError",
]

FUNCTIONS = ("sin", "cos", "sinh", "cosh")


class ExprError(ValueError):
    pass


class Expr:
    """Base class. Subclasses define ``_args`` used for equality and hashing."""

    __slots__ = ("_args", "_hash", "_vars", "_text")
    _rank = 9

    def __init__(self, *args):
        self._args = args
        self._hash = None
        self._vars = None
        self._text = None

    def __eq__(self, other):
        if self is other:
            return True
        return type(self) is type(other) and self._args == other._args

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._args))
        return self._hash

    @property
    def free_vars(self) -> frozenset:
        if self._vars is None:
            self._vars = self._compute_vars()
        return self._vars

    def _compute_vars(self) -> frozenset:
        out = frozenset()
        for child in self.children():
            out |= child.free_vars
        return out

    def children(self) -> tuple:
        return ()

    def is_constant(self) -> bool:
        return not self.free_vars

    @property
    def dim(self) -> int:
        """Largest variable index used (0 for constants)."""
        return max(self.free_vars, default=0)

    def sort_key(self):
        return (self._rank, self.to_text())

    def to_text(self) -> str:
        if self._text is None:
            self._text = self._format()
        return self._text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}<{self.to_text()}>"

    # operator sugar
    def __add__(self, other):
        return add(self, _wrap(other))

    def __radd__(self, other):
        return add(_wrap(other), self)

    def __sub__(self, other):
        return sub(self, _wrap(other))

    def __rsub__(self, other):
        return sub(_wrap(other), self)

    def __mul__(self, other):
        return mul(self, _wrap(other))

    def __rmul__(self, other):
        return mul(_wrap(other), self)

    def __truediv__(self, other):
        return div(self, _wrap(other))

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        return power(self, k)

    # precedence for printing: 0 sum, 1 product, 2 power, 3 atom
    _prec = 3

    def _format(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError


def _wrap(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, complex):
        return ComplexConst(x)
    if isinstance(x, PiPoly):
        return Const(x)
    return Const(PiPoly(to_fraction(x)))


class Const(Expr):
    """Exact constant in Q[pi]."""

    __slots__ = ()
    _rank = 0

    def __init__(self, value):
        if not isinstance(value, PiPoly):
            value = PiPoly(to_fraction(value))
        super().__init__(value)

    @property
    def value(self) -> PiPoly:
        return self._args[0]

    def _compute_vars(self):
        return frozenset()

    @property
    def _prec(self):
        v = self.value
        if len(v.coeffs()) > 1:
            return 0
        ((k, c),) = v.coeffs().items() if v else ((0, Fraction(0)),)
        if c < 0:
            return 0
        if k == 0 and c.denominator == 1:
            return 3
        return 1

    def sort_key(self):
        return (0, "", self.value.sort_key())

    def _format(self):
        return self.value.to_text()


class ComplexConst(Expr):
    """Inexact complex constant, printed as ``complex(re, im)``."""

    __slots__ = ()
    _rank = 0

    def __init__(self, value):
        value = complex(value)
        if not (cmath.isfinite(value)):
            raise ExprError(f"non-finite constant {value}")
        super().__init__(value)

    @property
    def value(self) -> complex:
        return self._args[0]

    def _compute_vars(self):
        return frozenset()

    def sort_key(self):
        return (0, "~", (self.value.real, self.value.imag))

    def _format(self):
        if self.value == 1j:
            return "I"
        return f"complex({self.value.real!r}, {self.value.imag!r})"


class Var(Expr):
    """Coordinate z_j, 1-based."""

    __slots__ = ()
    _rank = 1

    def __init__(self, index: int):
        if index < 1:
            raise ExprError("variable indices start at 1")
        super().__init__(int(index))

    @property
    def index(self) -> int:
        return self._args[0]

    def _compute_vars(self):
        return frozenset({self.index})

    def sort_key(self):
        return (1, f"{self.index:06d}")

    def _format(self):
        return f"x{self.index}"


def _negative_monomial(v: PiPoly) -> bool:
    c = v.coeffs()
    return len(c) == 1 and next(iter(c.values())) < 0


def _paren(e: Expr, min_prec: int) -> str:
    t = e.to_text()
    return f"({t})" if e._prec < min_prec else t


class Sum(Expr):
    __slots__ = ()
    _rank = 5
    _prec = 0

    def __init__(self, terms: Sequence[Expr]):
        super().__init__(tuple(terms))

    @property
    def terms(self) -> tuple:
        return self._args[0]

    def children(self):
        return self.terms

    def _format(self):
        out = ""
        for k, term in enumerate(self.terms):
            coef, rest = _split_coefficient(term)
            negative = isinstance(coef, PiPoly) and _negative_monomial(coef)
            if negative:
                body = mul(Const(-coef), rest) if rest is not None else Const(-coef)
                text = _paren(body, 1)
                out += f"-{text}" if k == 0 else f" - {text}"
            else:
                text = _paren(term, 1)
                out += text if k == 0 else f" + {text}"
        return out


class Product(Expr):
    __slots__ = ()
    _rank = 4
    _prec = 1

    def __init__(self, factors: Sequence[Expr]):
        super().__init__(tuple(factors))

    @property
    def factors(self) -> tuple:
        return self._args[0]

    def children(self):
        return self.factors

    def _format(self):
        parts = []
        lead = ""
        for k, f in enumerate(self.factors):
            if k == 0 and isinstance(f, Const):
                if _negative_monomial(f.value):
                    lead = "-"
                    f = Const(-f.value)
                    if f.value == ONE:
                        continue
                parts.append(_paren(f, 1))
                continue
            parts.append(_paren(f, 2))
        return lead + "*".join(parts)


class Pow(Expr):
    """``base ** exponent`` with an integer exponent.

    Negative exponents are only allowed for variable-free bases.
    """

    __slots__ = ()
    _rank = 3
    _prec = 2

    def __init__(self, base: Expr, exponent: int):
        if exponent < 0 and not base.is_constant():
            raise ExprError("negative powers of non-constant expressions are not entire")
        super().__init__(base, int(exponent))

    @property
    def base(self) -> Expr:
        return self._args[0]

    @property
    def exponent(self) -> int:
        return self._args[1]

    def children(self):
        return (self.base,)

    def _format(self):
        b = _paren(self.base, 3)
        e = self.exponent
        return f"{b}^{e}" if e >= 0 else f"{b}^({e})"


class Func(Expr):
    """One of sin, cos, sinh, cosh applied to an argument."""

    __slots__ = ()
    _rank = 2

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ExprError(f"unknown function {name!r}")
        super().__init__(name, arg)

    @property
    def name(self) -> str:
        return self._args[0]

    @property
    def arg(self) -> Expr:
        return self._args[1]

    def children(self):
        return (self.arg,)

    def _format(self):
        return f"{self.name}({self.arg.to_text()})"


class PolyApply(Expr):
    """A rational polynomial applied to argument expressions.

    Printed as the explicit substitution, so the text re-parses to an
    equivalent (but expanded-form) expression.
    """

    __slots__ = ()
    _rank = 6
    _prec = 0

    def __init__(self, poly: MultiPoly, args: Sequence[Expr]):
        args = tuple(args)
        if poly.n != len(args):
            raise ExprError("polynomial arity does not match argument count")
        super().__init__(poly, args)

    @property
    def poly(self) -> MultiPoly:
        return self._args[0]

    @property
    def args(self) -> tuple:
        return self._args[1]

    def children(self):
        return self.args

    def _format(self):
        expanded = add(*(
            mul(Const(c), *(power(a, k) for a, k in zip(self.args, exp) if k))
            for exp, c in self.poly.items()
        ))
        return expanded.to_text()


# ---------------------------------------------------------------------------
# constructors


def const(value) -> Expr:
    return _wrap(value)


def var(index: int) -> Var:
    return Var(index)


pi = Const(PI)
_ZERO = Const(ZERO)
_ONE = Const(ONE)


def _is_num(e: Expr) -> bool:
    return isinstance(e, (Const, ComplexConst))


def _num_value(e: Expr):
    return e.value


def _num_mul(a, b):
    if isinstance(a, complex) or isinstance(b, complex):
        return complex(a) * complex(b)
    return a * b


def _num_add(a, b):
    if isinstance(a, complex) or isinstance(b, complex):
        return complex(a) + complex(b)
    return a + b


def _num_expr(v) -> Expr:
    if isinstance(v, complex):
        return ComplexConst(v)
    return Const(v)


def _num_is_zero(v) -> bool:
    return v == 0 if isinstance(v, complex) else v.is_zero()


def _split_coefficient(e: Expr):
    """Return (numeric coefficient, rest or None)."""
    if _is_num(e):
        return e.value, None
    if isinstance(e, Product) and _is_num(e.factors[0]):
        rest = e.factors[1:]
        return e.factors[0].value, (rest[0] if len(rest) == 1 else Product(rest))
    return ONE, e


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        t = _wrap(t)
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    total = ZERO
    groups: dict[Expr, object] = {}
    order: list[Expr] = []
    for t in flat:
        coef, rest = _split_coefficient(t)
        if rest is None:
            total = _num_add(total, coef)
            continue
        if rest in groups:
            groups[rest] = _num_add(groups[rest], coef)
        else:
            groups[rest] = coef
            order.append(rest)
    out = []
    for rest in order:
        c = groups[rest]
        if _num_is_zero(c):
            continue
        out.append(mul(_num_expr(c), rest))
    if not _num_is_zero(total):
        out.append(_num_expr(total))
    if not out:
        return _ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=lambda e: e.sort_key())
    return Sum(out)


def neg(e: Expr) -> Expr:
    return mul(Const(-1), e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(_wrap(b)))


def _base_exp(e: Expr):
    if isinstance(e, Pow):
        return e.base, e.exponent
    return e, 1


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    for f in factors:
        f = _wrap(f)
        if isinstance(f, Product):
            flat.extend(f.factors)
        else:
            flat.append(f)
    coef = ONE
    exps: dict[Expr, int] = {}
    order: list[Expr] = []
    for f in flat:
        if _is_num(f):
            coef = _num_mul(coef, f.value)
            continue
        b, k = _base_exp(f)
        if b in exps:
            exps[b] += k
        else:
            exps[b] = k
            order.append(b)
    if _num_is_zero(coef):
        return _ZERO
    out = []
    for b in order:
        k = exps[b]
        if k == 0:
            continue
        p = power(b, k)
        if _is_num(p):
            coef = _num_mul(coef, p.value)
        else:
            out.append(p)
    if _num_is_zero(coef):
        return _ZERO
    out.sort(key=lambda e: e.sort_key())
    is_one = (not isinstance(coef, complex)) and coef == ONE
    if not out:
        return _num_expr(coef)
    if is_one:
        return out[0] if len(out) == 1 else Product(out)
    return Product([_num_expr(coef)] + out)


def div(a: Expr, b: Expr) -> Expr:
    b = _wrap(b)
    if not b.is_constant():
        raise ExprError(f"division by non-constant expression {b}")
    if isinstance(b, Const) and b.value.is_zero():
        raise ExprError("division by zero")
    return mul(a, power(b, -1))


def power(base: Expr, k: int) -> Expr:
    base = _wrap(base)
    if isinstance(k, Fraction):
        if k.denominator != 1:
            raise ExprError("only integer exponents are supported")
        k = k.numerator
    k = int(k)
    if k == 0:
        return _ONE
    if k == 1:
        return base
    if isinstance(base, ComplexConst):
        if base.value == 0 and k < 0:
            raise ExprError("division by zero")
        return ComplexConst(base.value ** k)
    if isinstance(base, Const):
        v = base.value
        if k > 0:
            return Const(v ** k)
        if v.is_zero():
            raise ExprError("division by zero")
        if v.invertible():
            return Const(v ** k)
        return Pow(base, k)
    if k < 0 and not base.is_constant():
        raise ExprError(f"negative power of non-constant expression {base}")
    if isinstance(base, Product):
        return mul(*(power(f, k) for f in base.factors))
    if isinstance(base, Pow):
        return power(base.base, base.exponent * k)
    return Pow(base, k)


def func(name: str, arg: Expr) -> Expr:
    arg = _wrap(arg)
    if name not in FUNCTIONS:
        raise ExprError(f"unknown function {name!r}")
    if isinstance(arg, ComplexConst):
        return ComplexConst(getattr(cmath, name)(arg.value))
    if isinstance(arg, Const):
        v = arg.value
        if name in ("sin", "cos"):
            q = v.pi_multiple()
            if q is not None:
                r = exact_sin_pi(q) if name == "sin" else exact_cos_pi(q)
                if r is not None:
                    return Const(r)
        elif v.is_zero():
            return _ZERO if name == "sinh" else _ONE
    return Func(name, arg)


def sin(arg) -> Expr:
    return func("sin", arg)


def cos(arg) -> Expr:
    return func("cos", arg)


def sinh(arg) -> Expr:
    return func("sinh", arg)


def cosh(arg) -> Expr:
    return func("cosh", arg)


def poly_apply(poly: MultiPoly, args: Iterable[Expr]) -> Expr:
    args = tuple(_wrap(a) for a in args)
    if poly.is_zero():
        return _ZERO
    if poly.degree == 0:
        return Const(poly.coefficient((0,) * poly.n))
    if all(_is_num(a) and isinstance(a, Const) for a in args):
        return Const(poly.substitute([a.value for a in args]))
    return PolyApply(poly, args)
