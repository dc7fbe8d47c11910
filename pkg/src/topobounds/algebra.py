"""Exact linear algebra over prime fields GF(p) and the rationals.

Prime-field elements are Python ints in ``[0, p)``; rationals are
:class:`fractions.Fraction`. Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, InvalidInput, InvalidParameter


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field (``p`` set) or the rationals (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or self.p > 2**31 or not _is_prime(self.p):
                raise InvalidParameter(f"GF(p) needs a prime p <= 2^31, got {self.p!r}")

    def __repr__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        """Coerce ``x`` into canonical form."""
        if self.p is None:
            if isinstance(x, str):
                return Fraction(x.strip())
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise InvalidInput(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            x = int(x.strip())
        if not isinstance(x, int):
            raise InvalidInput(f"cannot read {x!r} as an element of GF({self.p})")
        return x % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def elements(self) -> range:
        if self.p is None:
            raise InvalidInput("the rationals cannot be enumerated")
        return range(self.p)

    def to_json(self) -> str | int:
        return "QQ" if self.p is None else self.p

    @classmethod
    def from_json(cls, data) -> Field:
        if isinstance(data, str):
            key = data.strip().upper()
            if key in ("QQ", "Q", "RATIONALS"):
                return QQ
            if key.startswith("GF(") and key.endswith(")"):
                return cls(int(key[3:-1]))
            if key.isdigit():
                return cls(int(key))
        if isinstance(data, int):
            return cls(data)
        raise InvalidInput(f"unknown field {data!r}")

    def dump(self, x):
        if self.p is None:
            return str(x) if x.denominator != 1 else str(x.numerator)
        return x


QQ = Field(None)


def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class ExactVector:
    field: Field
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.field(x) for x in self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_json(self) -> list:
        return [self.field.dump(x) for x in self.entries]


@dataclass(frozen=True)
class ExactMatrix:
    field: Field
    rows: tuple
    ncols: int = -1

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in r) for r in self.rows)
        width = len(rows[0]) if rows else max(self.ncols, 0)
        if self.ncols >= 0 and rows and self.ncols != width:
            raise DimensionMismatch("declared column count disagrees with rows")
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", width)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> ExactVector:
        return ExactVector(self.field, tuple(r[j] for r in self.rows))

    def columns(self) -> list[ExactVector]:
        return [self.column(j) for j in range(self.ncols)]

    def row(self, i: int) -> ExactVector:
        return ExactVector(self.field, self.rows[i])

    def select_columns(self, idx: Sequence[int]) -> ExactMatrix:
        return ExactMatrix(self.field, tuple(tuple(r[j] for j in idx) for r in self.rows), len(idx))

    def select_rows(self, idx: Sequence[int]) -> ExactMatrix:
        return ExactMatrix(self.field, tuple(self.rows[i] for i in idx), self.ncols)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.field, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def matvec(self, v: ExactVector) -> ExactVector:
        if len(v) != self.ncols:
            raise DimensionMismatch("matrix-vector size mismatch")
        return ExactVector(self.field, tuple(_dot(self.field, r, v.entries) for r in self.rows))

    def to_json(self) -> list:
        return [[self.field.dump(x) for x in r] for r in self.rows]

    @classmethod
    def from_vectors(cls, field: Field, vectors: Iterable, as_columns: bool = False) -> ExactMatrix:
        rows = tuple(tuple(v) for v in vectors)
        m = cls(field, rows)
        return m.transpose() if as_columns else m

    @classmethod
    def identity(cls, field: Field, n: int) -> ExactMatrix:
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> ExactMatrix:
        return cls(field, tuple((0,) * n for _ in range(m)), n)


def _dot(field: Field, a: Sequence, b: Sequence):
    s = sum(x * y for x, y in zip(a, b))
    return s % field.p if field.p else Fraction(s)


def bilinear(u: ExactVector, v: ExactVector):
    """The symmetric form sum_i u_i v_i."""
    if u.field != v.field:
        raise DimensionMismatch("vectors over different fields")
    if len(u) != len(v):
        raise DimensionMismatch(f"lengths {len(u)} and {len(v)} differ")
    return _dot(u.field, u.entries, v.entries)


def rref(field: Field, rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns of ``rows``."""
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    p = field.p
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        if p:
            a[r] = [x * inv % p for x in a[r]]
        else:
            a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                if p:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
                else:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def _bareiss_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by fraction-free elimination on denominator-cleared rows."""
    a = []
    for r in rows:
        den = lcm(*(x.denominator for x in r)) if r else 1
        a.append([int(x * den) for x in r])
    if not a:
        return 0
    m, n = len(a), len(a[0])
    prev = 1
    rank = 0
    for c in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][c]
        for i in range(rank + 1, m):
            f = a[i][c]
            a[i] = [(pv * x - f * y) // prev for x, y in zip(a[i], a[rank])]
        prev = pv
        rank += 1
    return rank


def rank_of_rows(field: Field, rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    if field.p is None:
        return _bareiss_rank(rows)
    return len(rref(field, rows)[1])


def rank(m: ExactMatrix) -> int:
    return rank_of_rows(m.field, m.rows)


def kernel_basis(m: ExactMatrix) -> list[ExactVector]:
    """Basis of the right null space ``{y : M y = 0}``."""
    field = m.field
    n = m.ncols
    red, pivots = rref(field, m.rows)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        y = [field.zero] * n
        y[f] = field.one
        for row, pc in zip(red, pivots):
            y[pc] = -row[f] % field.p if field.p else -row[f]
        basis.append(ExactVector(field, tuple(y)))
    return basis


def in_span(v: ExactVector, vectors: Sequence[ExactVector]) -> bool:
    for w in vectors:
        if w.field != v.field:
            raise DimensionMismatch("vectors over different fields")
        if len(w) != len(v):
            raise DimensionMismatch("vector lengths differ")
    if v.is_zero():
        return True
    rows = [w.entries for w in vectors]
    return rank_of_rows(v.field, rows) == rank_of_rows(v.field, rows + [v.entries])


def projective_points(field: Field, dim: int) -> Iterator[tuple[int, ...]]:
    """Nonzero vectors of GF(p)^dim whose first nonzero coordinate is 1."""
    if field.p is None:
        raise InvalidInput("projective enumeration needs a finite field")
    p = field.p
    for lead in range(dim):
        for tail in product(range(p), repeat=dim - lead - 1):
            yield (0,) * lead + (1,) + tail


def vector(field: Field, entries: Iterable) -> ExactVector:
    return ExactVector(field, tuple(entries))


def matrix(field: Field, rows: Iterable[Iterable]) -> ExactMatrix:
    return ExactMatrix(field, tuple(tuple(r) for r in rows))
