"""Integer partitions, compositions and the dominance order.

Compositions are plain tuples of non-negative ints.  :class:`Partition` is a
tuple subclass that enforces the non-increasing invariant and compares equal
modulo trailing zeros, so ``Partition((3, 1, 0)) == Partition((3, 1))``.
Fixed-length families (``enumerate_partitions(n, m)``) keep their zeros in
the stored parts; use ``tuple(lam)`` when the length matters.
"""

from __future__ import annotations

from itertools import accumulate, zip_longest
from math import comb
from typing import Iterable, Iterator, Sequence


class Partition(tuple):
    """A non-increasing tuple of non-negative integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts are not non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    def stripped(self) -> "Partition":
        """The same partition without trailing zeros."""
        n = len(self)
        while n and self[n - 1] == 0:
            n -= 1
        return Partition(self[:n])

    def __eq__(self, other):
        if isinstance(other, tuple):
            return tuple(_strip(self)) == tuple(_strip(other))
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(tuple(_strip(self)))

    def __repr__(self):
        return f"Partition({tuple(self)!r})"


def _strip(parts: Sequence[int]) -> Sequence[int]:
    n = len(parts)
    while n and parts[n - 1] == 0:
        n -= 1
    return parts[:n]


def weight(parts: Sequence[int]) -> int:
    return sum(parts)


def rearrange_to_partition(parts: Iterable[int]) -> Partition:
    """Non-increasing rearrangement of a composition (length is kept)."""
    return Partition(sorted(parts, reverse=True))


def dominates(lhs: Sequence[int], rhs: Sequence[int]) -> bool:
    """True iff ``lhs`` dominates ``rhs`` (lhs ⊵ rhs).

    Both arguments may be compositions; they are rearranged into partitions
    and the shorter one is padded with zeros.
    """
    left = sorted(lhs, reverse=True)
    right = sorted(rhs, reverse=True)
    if sum(left) != sum(right):
        return False
    lsum = rsum = 0
    for x, y in zip_longest(left, right, fillvalue=0):
        lsum += x
        rsum += y
        if lsum < rsum:
            return False
    return True


def covers(lhs: Sequence[int], rhs: Sequence[int]) -> bool:
    """True iff ``lhs`` covers ``rhs`` in the dominance order.

    Uses the classical characterisation: ``lhs`` is obtained from ``rhs`` by
    moving a single unit from row j up to row i < j, where either the rows
    are adjacent (i = j - 1) or ``rhs`` has equal parts in rows i and j.
    """
    size = max(len(lhs), len(rhs))
    lam = list(lhs) + [0] * (size - len(lhs))
    mu = list(rhs) + [0] * (size - len(rhs))
    diff = [(k, x - y) for k, (x, y) in enumerate(zip(lam, mu)) if x != y]
    if len(diff) != 2:
        return False
    (i, di), (j, dj) = diff
    if di != 1 or dj != -1:
        return False
    return i == j - 1 or mu[i] == mu[j]


def dual(lam: Sequence[int]) -> Partition:
    """Conjugate partition: the i-th part counts parts of ``lam`` that are >= i."""
    parts = [x for x in lam if x > 0]
    if not parts:
        return Partition(())
    return Partition(sum(1 for x in parts if x >= i) for i in range(1, max(parts) + 1))


def enumerate_compositions(m: int, n: int) -> list[tuple[int, ...]]:
    """All compositions of ``n`` with exactly ``m`` non-negative parts.

    Lexicographically ascending; there are ``comb(n + m - 1, m - 1)`` of them.
    """
    return list(_compositions(m, n))


def _compositions(m: int, n: int) -> Iterator[tuple[int, ...]]:
    if m == 0:
        if n == 0:
            yield ()
        return
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(m - 1, n - first):
            yield (first,) + rest


def count_compositions(m: int, n: int) -> int:
    if m == 0:
        return int(n == 0)
    return comb(n + m - 1, m - 1)


def enumerate_partitions(n: int, m: int | None = None, max_part: int | None = None) -> list[Partition]:
    """Partitions of ``n`` in lexicographically descending order.

    With ``m`` given, only partitions with at most ``m`` nonzero parts are
    returned, each padded with zeros to length exactly ``m``.  ``max_part``
    optionally bounds the largest part.
    """
    top = n if max_part is None else min(n, max_part)
    out = []
    for parts in _partitions(n, top, m):
        if m is not None:
            parts = parts + (0,) * (m - len(parts))
        out.append(Partition(parts))
    return out


def _partitions(n: int, largest: int, slots: int | None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if slots == 0:
        return
    for first in range(min(n, largest), 0, -1):
        rest_slots = None if slots is None else slots - 1
        for rest in _partitions(n - first, first, rest_slots):
            yield (first,) + rest


def concat(lam: Sequence[int], mu: Sequence[int]) -> tuple[int, ...]:
    return tuple(lam) + tuple(mu)


def cover_pairs(n: int) -> list[tuple[Partition, Partition]]:
    """Every pair (lam, mu) of partitions of ``n`` with lam covering mu."""
    parts = enumerate_partitions(n)
    return [(lam, mu) for lam in parts for mu in parts if covers(lam, mu)]


def prefix_sums(parts: Sequence[int]) -> list[int]:
    return list(accumulate(sorted(parts, reverse=True)))


def parse_parts(text: str) -> tuple[int, ...]:
    """Parse a literal such as ``"4,2"``; the empty string is the empty partition."""
    text = text.strip()
    if not text:
        return ()
    try:
        parts = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"malformed partition literal {text!r}") from None
    if any(x < 0 for x in parts):
        raise ValueError(f"negative part in {text!r}")
    return parts


def format_parts(parts: Sequence[int]) -> str:
    return ",".join(str(x) for x in parts)
