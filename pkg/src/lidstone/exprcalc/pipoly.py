"""Exact constants in Q[pi].

Symbolic derivatives of ``sin(pi*x)`` pick up powers of pi, so exact values
live in the polynomial ring Q[pi] rather than in Q. Since pi is
transcendental this representation is faithful: two values are equal iff
their coefficient lists agree.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..polycore import format_rational, to_fraction

__all__ = ["PiPoly", "PI", "ONE", "ZERO", "exact_sin_pi", "exact_cos_pi"]


class PiPoly:
    """Element of Q[pi] stored as ``{power: Fraction}`` with nonzero values."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, dict):
            coeffs = {0: coeffs}
        clean = {}
        for k, v in coeffs.items():
            v = to_fraction(v)
            if v:
                clean[int(k)] = v
        self._c = clean
        self._hash = None

    @classmethod
    def pi_power(cls, k: int, coef=1) -> "PiPoly":
        return cls({k: coef})

    def coeffs(self) -> dict:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_rational(self) -> bool:
        return all(k == 0 for k in self._c)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(0, Fraction(0))

    def pi_multiple(self) -> Fraction | None:
        """q if the value equals q*pi (q may be 0), else None."""
        if not self._c:
            return Fraction(0)
        if set(self._c) == {1}:
            return self._c[1]
        return None

    def is_integer(self) -> bool:
        return self.is_rational() and self.to_fraction().denominator == 1

    # arithmetic

    @staticmethod
    def _lift(x) -> "PiPoly":
        return x if isinstance(x, PiPoly) else PiPoly(x)

    def __add__(self, other):
        if isinstance(other, complex):
            return NotImplemented
        other = self._lift(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return PiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return PiPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, complex):
            return NotImplemented
        other = self._lift(other)
        out: dict = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return PiPoly(out)

    __rmul__ = __mul__

    def inverse(self) -> "PiPoly":
        """Multiplicative inverse; only monomials c*pi^k with k == 0 qualify."""
        if not self._c:
            raise ZeroDivisionError("inverse of zero")
        if len(self._c) == 1:
            ((k, v),) = self._c.items()
            if k == 0:
                return PiPoly({0: 1 / v})
        raise ValueError(f"{self} has no inverse in Q[pi]")

    def invertible(self) -> bool:
        return len(self._c) == 1 and 0 in self._c

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PiPoly(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PiPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == PiPoly(other)._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __complex__(self):
        return complex(float(self))

    def __float__(self):
        return float(sum(float(v) * math.pi ** k for k, v in self._c.items()))

    def __abs__(self):
        return abs(float(self))

    def sort_key(self):
        return tuple(sorted(self._c.items()))

    def __repr__(self):
        return f"PiPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        """Parser-compatible text, highest power of pi first."""
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            v = self._c[k]
            mono = "" if k == 0 else ("pi" if k == 1 else f"pi^{k}")
            a = abs(v)
            if mono:
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
            else:
                body = format_rational(a)
            parts.append(("-" if v < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


PI = PiPoly.pi_power(1)
ONE = PiPoly(1)
ZERO = PiPoly()

# sin(q*pi) is rational only for these residues of q modulo 2 (Niven).
_SIN_TABLE = {
    Fraction(0): 0, Fraction(1, 6): Fraction(1, 2), Fraction(1, 2): 1, Fraction(5, 6): Fraction(1, 2),
    Fraction(1): 0, Fraction(7, 6): Fraction(-1, 2), Fraction(3, 2): -1,
    Fraction(11, 6): Fraction(-1, 2),
}


def exact_sin_pi(q: Fraction) -> Fraction | None:
    """sin(q*pi) when it is rational, else None."""
    r = Fraction(q) % 2
    v = _SIN_TABLE.get(r)
    return None if v is None else Fraction(v)


def exact_cos_pi(q: Fraction) -> Fraction | None:
    """cos(q*pi) = sin((q + 1/2) pi) when rational, else None."""
    return exact_sin_pi(Fraction(q) + Fraction(1, 2))
