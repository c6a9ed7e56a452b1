"""Toeplitz and power matrices of a sequence, their minors, and TN_k checks.

For a sequence p = (p_0, p_1, ...) the Toeplitz matrix has entry
``p[j - i]`` (zero when j < i) and the power matrix has entry
``coefficient of x**j in p(x)**i``.  Both are infinite; every check in this
module works on an explicit finite window of rows and columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .partitions import enumerate_partitions, dominates
from .series import Poly, format_rational, power, to_fraction


class InsufficientCoefficients(ValueError):
    """A query needs coefficients beyond the stored prefix of an infinite sequence."""


@dataclass(frozen=True)
class SequenceView:
    """A stored prefix of p.  With ``finite=True`` all later terms are zero."""

    coeffs: tuple[Fraction, ...]
    finite: bool = True

    def __init__(self, coeffs: Iterable, finite: bool = True):
        object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in coeffs))
        object.__setattr__(self, "finite", finite)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n < len(self.coeffs):
            return self.coeffs[n]
        if self.finite:
            return Fraction(0)
        raise InsufficientCoefficients(f"p_{n} requested but only {len(self.coeffs)} terms are known")

    def __len__(self):
        return len(self.coeffs)

    def require(self, n: int) -> None:
        """Raise unless p_0..p_n are all determined."""
        if not self.finite and n >= len(self.coeffs):
            raise InsufficientCoefficients(f"p_{n} requested but only {len(self.coeffs)} terms are known")

    def poly(self) -> Poly:
        return Poly(self.coeffs or (0,))


@dataclass(frozen=True)
class MinorIndex:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        if not self.rows or len(self.rows) != len(self.cols):
            raise ValueError("rows and cols must be non-empty and of equal length")
        for seq in (self.rows, self.cols):
            if any(x < 0 for x in seq) or any(a >= b for a, b in zip(seq, seq[1:])):
                raise ValueError(f"index vector {seq} is not strictly increasing in N")

    @property
    def order(self) -> int:
        return len(self.rows)

    def shifted(self, c: int) -> "MinorIndex":
        return MinorIndex(tuple(r + c for r in self.rows), tuple(x + c for x in self.cols))

    def to_json(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals.

    The pivot is the first nonzero entry in the current column.
    """
    a = [[to_fraction(x) for x in row] for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        pv = a[col][col]
        det *= pv
        for r in range(col + 1, n):
            factor = a[r][col]
            if factor:
                factor /= pv
                row, prow = a[r], a[col]
                for c in range(col + 1, n):
                    row[c] -= factor * prow[c]
    return det


class ToeplitzMatrix:
    """The Toeplitz matrix of a sequence, entry (i, j) = p[j - i]."""

    name = "T"

    def __init__(self, seq: SequenceView):
        self.seq = seq

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.seq[j - i]

    def require(self, max_row: int, max_col: int) -> None:
        self.seq.require(max_col)

    def submatrix(self, idx: MinorIndex) -> list[list[Fraction]]:
        return [[self[i, j] for j in idx.cols] for i in idx.rows]

    def minor(self, idx: MinorIndex) -> Fraction:
        self.require(max(idx.rows), max(idx.cols))
        return determinant(self.submatrix(idx))


class PowerMatrix:
    """Matrix whose (i, j) entry is the coefficient of x**j in p(x)**i."""

    name = "S"

    def __init__(self, seq: SequenceView):
        self.seq = seq
        self._poly = seq.poly()
        self._rows: dict[int, Poly] = {}
        self._cap = -1

    def require(self, max_row: int, max_col: int) -> None:
        self.seq.require(max_col)

    def _row(self, i: int, j: int) -> Poly:
        if j > self._cap:
            self._cap = max(j, 2 * self._cap)
            self._rows.clear()
        row = self._rows.get(i)
        if row is None:
            row = power(self._poly, i, self._cap)
            self._rows[i] = row
        return row

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        self.seq.require(j)
        return self._row(i, j)[j]

    def submatrix(self, idx: MinorIndex) -> list[list[Fraction]]:
        return [[self[i, j] for j in idx.cols] for i in idx.rows]

    def minor(self, idx: MinorIndex) -> Fraction:
        self.require(max(idx.rows), max(idx.cols))
        return determinant(self.submatrix(idx))


def toeplitz_entry(p: SequenceView, i: int, j: int) -> Fraction:
    return ToeplitzMatrix(p)[i, j]


def power_entry(p: SequenceView, i: int, j: int) -> Fraction:
    return PowerMatrix(p)[i, j]


def matrix_of(p: SequenceView, which: str = "T"):
    if which.upper() in ("T", "TOEPLITZ"):
        return ToeplitzMatrix(p)
    if which.upper() in ("S", "POWER"):
        return PowerMatrix(p)
    raise ValueError(f"unknown matrix {which!r}; expected 'T' or 'S'")


def minor(matrix, idx: MinorIndex) -> Fraction:
    return matrix.minor(idx)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class MinorWitness:
    index: MinorIndex
    value: Fraction
    matrix: str = "T"

    def to_json(self) -> dict:
        return {"kind": "minor", "matrix": self.matrix, **self.index.to_json(),
                "value": format_rational(self.value)}


@dataclass(frozen=True)
class QuadrupleWitness:
    """Failure of p_a p_d <= p_b p_c; ``index`` is the equivalent 2x2 Toeplitz minor."""

    a: int
    b: int
    c: int
    d: int
    lhs: Fraction
    rhs: Fraction

    @property
    def index(self) -> MinorIndex:
        return MinorIndex((0, self.a - self.b), (self.c, self.a))

    def to_json(self) -> dict:
        return {"kind": "quadruple", "abcd": [self.a, self.b, self.c, self.d],
                "pa_pd": format_rational(self.lhs), "pb_pc": format_rational(self.rhs),
                **self.index.to_json()}


@dataclass(frozen=True)
class NegativeTermWitness:
    n: int
    value: Fraction

    @property
    def index(self) -> MinorIndex:
        return MinorIndex((0,), (self.n,))

    def to_json(self) -> dict:
        return {"kind": "negative_term", "n": self.n, "value": format_rational(self.value)}


@dataclass(frozen=True)
class PairWitness:
    """lam dominates mu but p_lam > p_mu."""

    lam: tuple[int, ...]
    mu: tuple[int, ...]
    p_lam: Fraction
    p_mu: Fraction

    def to_json(self) -> dict:
        return {"kind": "partition_pair", "lam": list(self.lam), "mu": list(self.mu),
                "p_lam": format_rational(self.p_lam), "p_mu": format_rational(self.p_mu)}


@dataclass
class TNReport:
    holds: bool
    witness: object | None = None
    window: dict = field(default_factory=dict)
    order_checked: int = 2
    checked: int = 0

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "order_checked": self.order_checked, "window": self.window,
                "checked": self.checked,
                "witness": None if self.witness is None else self.witness.to_json()}


# ---------------------------------------------------------------------------
# TN_k on a window


def check_tn(p: SequenceView, k: int, row_bound: int, col_bound: int,
             strict: bool = False, matrix: str = "T") -> TNReport:
    """Check every minor of order <= k with rows < row_bound, cols < col_bound.

    ``strict`` asks for positive minors (TP_k) instead of non-negative ones.
    The first violating minor, in order of size then lexicographic indices,
    is returned as the witness.
    """
    mat = matrix_of(p, matrix)
    if col_bound > 0:
        mat.require(row_bound - 1, col_bound - 1)
    window = {"matrix": mat.name, "rows": row_bound, "cols": col_bound, "strict": strict}
    checked = 0
    for order in range(1, k + 1):
        for rows in combinations(range(row_bound), order):
            for cols in combinations(range(col_bound), order):
                sub = [[mat[i, j] for j in cols] for i in rows]
                value = determinant(sub)
                checked += 1
                if value < 0 or (strict and value == 0):
                    return TNReport(False, MinorWitness(MinorIndex(rows, cols), value, mat.name),
                                    window, k, checked)
    return TNReport(True, None, window, k, checked)


def complete_toeplitz_window(length: int, k: int) -> tuple[int, int]:
    """Row/column bounds that make ``check_tn`` on the Toeplitz matrix a full TN_k certificate.

    Valid for finite support ``p_n = 0`` for n >= length.  Any minor can be
    shifted so its first row is 0; a row gap of ``length`` or more splits the
    submatrix into diagonal blocks (product of smaller minors) and a column
    at or beyond ``last_row + length`` is zero.
    """
    length = max(length, 1)
    rows = (k - 1) * (length - 1) + 1
    return rows, rows - 1 + length


def tn2_via_char(p: SequenceView, bound: int | None = None) -> TNReport:
    """TN_2 through the quadruple condition.

    p must be non-negative on 0..bound and ``p_a p_d <= p_b p_c`` for all
    ``a >= b >= c >= d >= 0`` with ``a + d == b + c`` and ``a <= bound``.
    ``bound`` defaults to the last stored index.
    """
    if bound is None:
        bound = len(p) - 1
    p.require(bound)
    window = {"bound": bound}
    checked = 0
    for n in range(bound + 1):
        checked += 1
        if p[n] < 0:
            return TNReport(False, NegativeTermWitness(n, p[n]), window, 2, checked)
    for a in range(bound + 1):
        for b in range(a - 1, -1, -1):
            for c in range(b, -1, -1):
                d = b + c - a
                if d < 0:
                    break
                checked += 1
                lhs, rhs = p[a] * p[d], p[b] * p[c]
                if lhs > rhs:
                    return TNReport(False, QuadrupleWitness(a, b, c, d, lhs, rhs), window, 2, checked)
    return TNReport(True, None, window, 2, checked)


def char_iii_check(p: SequenceView, m: int, part_bound: int) -> TNReport:
    """For all lam ⊵ mu with m parts each <= part_bound, check p_lam <= p_mu.

    Non-negativity of p_0..p_part_bound is checked first.
    """
    p.require(part_bound)
    window = {"m": m, "part_bound": part_bound}
    checked = 0
    for n in range(part_bound + 1):
        checked += 1
        if p[n] < 0:
            return TNReport(False, NegativeTermWitness(n, p[n]), window, 2, checked)
    for total in range(m * part_bound + 1):
        family = enumerate_partitions(total, m, max_part=part_bound)
        values = [_product(p, lam) for lam in family]
        for x, lam in enumerate(family):
            for y, mu in enumerate(family):
                if x == y or not dominates(lam, mu):
                    continue
                checked += 1
                if values[x] > values[y]:
                    return TNReport(False, PairWitness(tuple(lam), tuple(mu), values[x], values[y]),
                                    window, 2, checked)
    return TNReport(True, None, window, 2, checked)


def _product(p: SequenceView, parts: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for x in parts:
        out *= p[x]
    return out


# ---------------------------------------------------------------------------
# sequence shape


@dataclass(frozen=True)
class Shape:
    unimodal: bool
    log_concave: bool
    strictly_log_concave: bool
    prefix_only: bool

    def to_json(self) -> dict:
        return {"unimodal": self.unimodal, "log_concave": self.log_concave,
                "strictly_log_concave": self.strictly_log_concave, "prefix_only": self.prefix_only}


def shape(p: SequenceView) -> Shape:
    """Unimodality and (strict) log-concavity, evaluated on the stored prefix.

    ``prefix_only`` is set when the view does not assert finite support, in
    which case the answer says nothing about later terms.
    """
    xs = p.coeffs
    # unimodal iff no i < j < k with p_i > p_j < p_k
    unimodal = True
    running_max = None
    for j, v in enumerate(xs):
        if running_max is not None and running_max > v and any(w > v for w in xs[j + 1:]):
            unimodal = False
            break
        running_max = v if running_max is None else max(running_max, v)
    inner = range(1, len(xs) - 1)
    log_concave = all(xs[k] ** 2 >= xs[k - 1] * xs[k + 1] for k in inner)
    strictly = all(xs[k] ** 2 > xs[k - 1] * xs[k + 1] for k in inner)
    return Shape(unimodal, log_concave, strictly, not p.finite)


# ---------------------------------------------------------------------------
# the power-matrix minor expansion


@dataclass(frozen=True)
class TransferResult:
    lhs: Fraction
    rhs: Fraction
    terms: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs),
                "equal": self.equal, "terms": self.terms}


def transfer_identity_check(p: SequenceView, idx: MinorIndex) -> TransferResult:
    """Expand a power-matrix minor one row-power down.

    With B = A - 1 (row-wise), verifies

        det S[A x a] = sum over strictly increasing b with b_last <= a_last of
                       det S[B x b] * det T[b x a]

    The identity needs no sign assumptions on p.
    """
    if idx.rows[0] < 1:
        raise ValueError("first row index must be >= 1 so that A - 1 is a valid index")
    last = idx.cols[-1]
    p.require(last)
    S, T = PowerMatrix(p), ToeplitzMatrix(p)
    lhs = S.minor(idx)
    shifted = tuple(r - 1 for r in idx.rows)
    rhs = Fraction(0)
    terms = 0
    for b in combinations(range(last + 1), idx.order):
        t_minor = determinant([[T[i, j] for j in idx.cols] for i in b])
        if not t_minor:
            continue
        s_minor = determinant([[S[i, j] for j in b] for i in shifted])
        rhs += s_minor * t_minor
        terms += 1
    return TransferResult(lhs, rhs, terms)


def power_pair_inequality(p: SequenceView, A: int, a: int, B: int, b: int) -> tuple[Fraction, Fraction]:
    """Return ``((p^A)_b (p^B)_a, (p^A)_a (p^B)_b)``; TN_2 of S needs left <= right."""
    S = PowerMatrix(p)
    return S[A, b] * S[B, a], S[A, a] * S[B, b]
