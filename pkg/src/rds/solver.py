"""Closed-form construction and verification of rational distance sets.

Points live on y = x^2 and are identified by their abscissae x_i.  For a
pair (i, j) the distance is |x_j - x_i| * sqrt(1 + (x_i + x_j)^2), so the
set has all distances rational exactly when every pairwise sum x_i + x_j
is a Pythagorean ratio.  Stacking the pair sums in lexicographic pair
order gives a 0/1 coefficient matrix C of shape (n choose 2) x n; its top
n x n block is invertible for n >= 3, which yields the closed-form solver
and forces every tail entry to be a linear combination of the first n.

Index conventions: pairs are 1-based and ordered (1,2),(1,3),...,(n-1,n);
a psi vector is positional, so psi_n is the entry for pair (2,3).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Sequence

from .errors import BadLength, BadN, DuplicatePoint, MissingFreeParam
from .pythagorean import is_pythagorean_ratio
from .rat import Rat, isqrt

HALF = Fraction(1, 2)


def indices_set(n: int) -> list[tuple[int, int]]:
    """The ordered 2-combinations of 1..n in lexicographic order."""
    if n < 2:
        raise BadN(f"need n >= 2, got {n}")
    return list(combinations(range(1, n + 1), 2))


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class CoeffMatrix:
    """The (n choose 2) x n 0/1 matrix with row i marking pair (m_i, n_i)."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    def top_block(self) -> list[list[int]]:
        return [list(r) for r in self.rows[: self.n]]

    def top_block_det(self) -> int:
        if self.n < 3:
            raise BadN("the top block is square only for n >= 3")
        det = exact_det([[Fraction(v) for v in row] for row in self.top_block()])
        assert det.denominator == 1
        return det.numerator

    def rank(self) -> int:
        return exact_rank([[Fraction(v) for v in row] for row in self.rows])


def coefficient_matrix(n: int) -> CoeffMatrix:
    rows = []
    for (i, j) in indices_set(n):
        row = [0] * n
        row[i - 1] = 1
        row[j - 1] = 1
        rows.append(tuple(row))
    return CoeffMatrix(n=n, rows=tuple(rows))


def exact_det(rows: list[list[Fraction]]) -> Fraction:
    """Determinant by exact Gaussian elimination with partial pivoting."""
    m = [row[:] for row in rows]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, size):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def exact_rank(rows: list[list[Fraction]]) -> int:
    """Rank by exact row reduction."""
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        for r in range(rank + 1, n_rows):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def head_inverse(n: int) -> list[list[Rat]]:
    """Exact inverse of the top n x n block of the coefficient matrix.

    Row 1 is (1,1,0,...,0,-1)/2, row 2 is (1,-1,0,...,0,1)/2, row 3 is
    (-1,1,0,...,0,1)/2 and row i >= 4 is (-1,-1,...,2 at column i-1,...,1)/2.
    """
    if n < 3:
        raise BadN(f"head inverse needs n >= 3, got {n}")
    rows: list[list[Rat]] = []
    for i in range(1, n + 1):
        row = [Fraction(0)] * n
        if i == 1:
            row[0], row[1], row[n - 1] = HALF, HALF, -HALF
        elif i == 2:
            row[0], row[1], row[n - 1] = HALF, -HALF, HALF
        elif i == 3:
            row[0], row[1], row[n - 1] = -HALF, HALF, HALF
        else:
            row[0], row[1], row[n - 1] = -HALF, -HALF, HALF
            row[i - 2] = Fraction(1)
        rows.append(row)
    return rows


def solve_x(head: Sequence[Rat], free: Rat | None = None) -> list[Rat]:
    """Abscissae from an independent ratio vector.

    For n = 2 the head is the single ratio psi_12 and ``free`` supplies the
    free coordinate r, giving (r, psi_12 - r).  For n >= 3 the head has n
    entries and the closed form applies positionally.
    """
    if len(head) == 1:
        if free is None:
            raise MissingFreeParam("n = 2 needs the free parameter r")
        return [free, head[0] - free]
    if len(head) < 3:
        raise BadLength(f"head must have 1 or >= 3 entries, got {len(head)}")
    p1, p2, pn = head[0], head[1], head[-1]
    x = [
        (p1 + p2 - pn) * HALF,
        (p1 - p2 + pn) * HALF,
        (-p1 + p2 + pn) * HALF,
    ]
    base = (-p1 - p2 + pn) * HALF
    for i in range(4, len(head) + 1):
        x.append(base + head[i - 2])
    return x


def complete_psi(head: Sequence[Rat]) -> list[Rat]:
    """Extend an n-entry head to the full (n choose 2) ratio vector.

    Tail entries are the forced linear combinations; they are returned
    whether or not they are valid ratios.  For n = 3 the head already is
    the whole vector.
    """
    n = len(head)
    if n < 3:
        raise BadLength(f"completion needs n >= 3, got {n}")
    psi = list(head)
    pn = head[-1]
    p1, p2 = head[0], head[1]
    total = pair_count(n)
    sub_pairs = indices_set(n - 3) if n >= 5 else []
    for i in range(1, total - n + 1):
        if i <= n - 3:
            psi.append(pn + head[i + 1] - p2)
        elif i <= 2 * n - 6:
            psi.append(pn + head[i + 4 - n] - p1)
        else:
            m_i, n_i = sub_pairs[i + 6 - 2 * n - 1]
            psi.append(pn + head[m_i + 1] + head[n_i + 1] - p1 - p2)
    return psi


@dataclass(frozen=True)
class PsiVector:
    """A full length-C(n,2) ratio vector split into head and forced tail."""

    n: int
    entries: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != pair_count(self.n):
            raise BadLength(
                f"psi vector for n={self.n} needs {pair_count(self.n)} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_head(cls, head: Sequence[Rat]) -> "PsiVector":
        return cls(n=len(head), entries=tuple(complete_psi(head)))

    @property
    def head(self) -> tuple[Rat, ...]:
        return self.entries[: min(self.n, len(self.entries))]

    @property
    def tail(self) -> tuple[Rat, ...]:
        return self.entries[min(self.n, len(self.entries)):]


class ExistenceCheck(NamedTuple):
    ok: bool
    tail: list[Rat]
    failing: list[int]  # 1-based positions into the full psi vector


def check_existence(head: Sequence[Rat]) -> ExistenceCheck:
    """Test that every forced tail entry is itself a Pythagorean ratio."""
    n = len(head)
    tail = complete_psi(head)[n:]
    failing = [n + k + 1 for k, v in enumerate(tail) if not is_pythagorean_ratio(v)]
    return ExistenceCheck(ok=not failing, tail=tail, failing=failing)


def check_distinct(x: Sequence[Rat]) -> bool:
    """True iff all abscissae are pairwise distinct."""
    return len(set(x)) == len(x)


def check_general_position(x: Sequence[Rat]) -> bool:
    """No four points concyclic.

    Four distinct points of y = x^2 lie on a circle exactly when their
    abscissae sum to zero (the circle-parabola intersection quartic has no
    cubic term); three points on a parabola are never collinear.  For
    n = 3 the convention adopted here excludes the mirror sets {a, -a, 0}.
    """
    n = len(x)
    if n < 3:
        return True
    if n == 3:
        return not (any(v == 0 for v in x) and sum(x) == 0)
    for quad in combinations(x, 4):
        if sum(quad) == 0:
            return False
    return True


def psi_from_x(x: Sequence[Rat]) -> list[Rat]:
    """Pairwise sums in lexicographic pair order (not validity-checked)."""
    return [x[i] + x[j] for i, j in combinations(range(len(x)), 2)]


class VerifyResult(NamedTuple):
    ok: bool
    distances: list[Rat | None]  # None where a pair distance is irrational
    failing_pairs: list[tuple[int, int]]  # 1-based


def verify_rds(x: Sequence[Rat]) -> VerifyResult:
    """Independent distance oracle.

    For each pair the sum s = b/a (canonical) must satisfy a^2 + b^2 = c^2
    for an integer c; the distance is then |x_j - x_i| * c / a.  Makes no
    use of the solver or the completion formulas.
    """
    if not check_distinct(x):
        raise DuplicatePoint("point abscissae must be pairwise distinct")
    distances: list[Rat | None] = []
    failing: list[tuple[int, int]] = []
    for i, j in combinations(range(len(x)), 2):
        s = x[i] + x[j]
        a = s.denominator
        b = s.numerator
        c, exact = isqrt(a * a + b * b)
        if exact:
            distances.append(abs(x[j] - x[i]) * c / a)
        else:
            distances.append(None)
            failing.append((i + 1, j + 1))
    return VerifyResult(ok=not failing, distances=distances, failing_pairs=failing)


@dataclass(frozen=True)
class Solution:
    """A verified rational distance set with its ratio provenance."""

    n: int
    x: tuple[Rat, ...]
    psi: tuple[Rat, ...]
    distances: tuple[Rat, ...]
    general_position: bool


def solution_from_x(x: Sequence[Rat]) -> Solution:
    """Assemble and oracle-check a Solution from its abscissae."""
    result = verify_rds(x)
    if not result.ok:
        raise ValueError(f"not an RDS: irrational distances at pairs {result.failing_pairs}")
    return Solution(
        n=len(x),
        x=tuple(x),
        psi=tuple(psi_from_x(x)),
        distances=tuple(d for d in result.distances if d is not None),
        general_position=check_general_position(x),
    )
