"""Multi-indices and the admissible derivative/point index set.

A pair ``(t, i)`` couples a derivative order ``t`` in N^n with a point index
``i`` in ``{0, ..., n}``. The pair is *admissible* when ``|t|`` is even and
the first ``i`` entries of ``t`` are even. For ``n = 1`` this gives the
classical Lidstone data: even derivatives at both interpolation points.

The admissible set is infinite, so it is only ever handled through the
membership predicate and a bounded enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "MultiIndex",
    "IndexPair",
    "norm",
    "multifactorial",
    "in_index_set",
    "graded_lex_key",
    "multi_indices_of_degree",
    "multi_indices_up_to",
    "enumerate_index_set",
]


class MultiIndex(tuple):
    """Immutable tuple of nonnegative integers.

    ``MultiIndex((2, 0, 1))`` behaves as a plain tuple (hashable, comparable
    with tuples) but validates its entries on construction.
    """

    def __new__(cls, entries: Sequence[int] = ()):
        entries = tuple(int(e) for e in entries)
        if not entries:
            raise ValueError("a multi-index needs at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"negative entry in multi-index {entries}")
        return super().__new__(cls, entries)

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def norm(self) -> int:
        return sum(self)

    def factorial(self) -> int:
        return multifactorial(self)

    def __add__(self, other):
        if len(other) != len(self):
            raise ValueError("dimension mismatch")
        return MultiIndex(a + b for a, b in zip(self, other))

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, k: int) -> "MultiIndex":
        """Return e_k (0-based position ``k``)."""
        return cls(1 if j == k else 0 for j in range(n))


@dataclass(frozen=True, order=False)
class IndexPair:
    """A derivative order ``t`` paired with a point index ``i``."""

    t: MultiIndex
    i: int

    def __post_init__(self):
        if not isinstance(self.t, MultiIndex):
            object.__setattr__(self, "t", MultiIndex(self.t))
        if not 0 <= self.i <= len(self.t):
            raise ValueError(f"point index {self.i} outside 0..{len(self.t)}")

    @property
    def n(self) -> int:
        return len(self.t)

    def admissible(self) -> bool:
        return in_index_set(self)

    def sort_key(self):
        return (graded_lex_key(self.t), self.i)

    def __lt__(self, other: "IndexPair") -> bool:
        return self.sort_key() < other.sort_key()

    def __iter__(self):
        # allows ``t, i = pair``
        yield self.t
        yield self.i


def norm(t: Sequence[int]) -> int:
    """Total order ``t_1 + ... + t_n``."""
    return sum(t)


def multifactorial(t: Sequence[int]) -> int:
    """Exact product ``t_1! * ... * t_n!``."""
    return math.prod(math.factorial(e) for e in t)


def in_index_set(pair, i: int | None = None) -> bool:
    """Membership of ``(t, i)`` in the admissible index set.

    Accepts either an :class:`IndexPair` or ``(t, i)`` as two arguments.

    >>> in_index_set((1, 1), 0), in_index_set((1, 1), 1)
    (True, False)
    """
    if i is None:
        t, i = pair
    else:
        t = pair
    if not 0 <= i <= len(t):
        return False
    if sum(t) % 2:
        return False
    return all(e % 2 == 0 for e in t[:i])


def graded_lex_key(t: Sequence[int]) -> tuple:
    """Sort key for graded-lex order: total degree first, then lex descending.

    Within one degree the larger leading exponent comes first, so for n = 2
    degree 2 orders as (2,0), (1,1), (0,2).
    """
    return (sum(t), tuple(-e for e in t))


def multi_indices_of_degree(n: int, degree: int) -> Iterator[MultiIndex]:
    """All t in N^n with |t| = degree, in graded-lex order."""
    if n < 1:
        raise ValueError("dimension must be >= 1")

    def rec(remaining: int, slots: int):
        if slots == 1:
            yield (remaining,)
            return
        for head in range(remaining, -1, -1):
            for tail in rec(remaining - head, slots - 1):
                yield (head,) + tail

    for entries in rec(degree, n):
        yield MultiIndex(entries)


def multi_indices_up_to(n: int, max_degree: int) -> list[MultiIndex]:
    """All t in N^n with |t| <= max_degree, graded-lex sorted."""
    out: list[MultiIndex] = []
    for d in range(max_degree + 1):
        out.extend(multi_indices_of_degree(n, d))
    return out


def enumerate_index_set(n: int, max_norm: int) -> list[IndexPair]:
    """Admissible pairs with ``|t| <= max_norm``.

    Ordered by (|t|, graded-lex on t, i), which makes linear-system assembly
    and JSON output deterministic.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if max_norm < 0:
        return []
    pairs = []
    for d in range(0, max_norm + 1, 2):
        for t in multi_indices_of_degree(n, d):
            for i in range(n + 1):
                if in_index_set(t, i):
                    pairs.append(IndexPair(t, i))
    return pairs
