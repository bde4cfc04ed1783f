"""Exact linear algebra over the rationals and prime fields.

Scalars are :class:`fractions.Fraction` over ``QQ`` and plain ``int`` residues
in ``[0, p)`` over ``GF(p)``.  Matrices are immutable row-major grids.  All
elimination is delegated to :mod:`tiltquiver.kernels`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

from . import kernels


class FieldError(ValueError):
    pass


class Field:
    """Ground field descriptor: ``QQ`` or ``GF(p)``."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p:
            if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise FieldError(f"{p} is not prime")
        self.p = p

    # scalar handling

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if type(x) is Fraction:
            return x
        return Fraction(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("division by zero in field")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    def parse(self, s: str):
        return self(Fraction(s))

    def format(self, x) -> str:
        if self.p:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    @property
    def name(self) -> str:
        return f"Fp{self.p}" if self.p else "Q"

    @classmethod
    def from_name(cls, name: str) -> "Field":
        if name == "Q":
            return QQ
        if name.startswith("Fp"):
            return GF(int(name[2:]))
        raise FieldError(f"unknown field descriptor {name!r}")

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if not self.p else f"GF({self.p})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Mat:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows: Iterable[Sequence]):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError(f"entries do not match shape {nrows}x{ncols}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def _raw(cls, field, nrows, ncols, rows):
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "nrows", nrows)
        object.__setattr__(m, "ncols", ncols)
        object.__setattr__(m, "rows", rows)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    # constructors

    @classmethod
    def from_rows(cls, rows, field: Field = QQ, ncols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zero(cls, nrows: int, ncols: int, field: Field = QQ) -> "Mat":
        z = field.zero
        return cls._raw(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Mat":
        z, o = field.zero, field.one
        return cls._raw(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, cols, nrows: int, field: Field = QQ) -> "Mat":
        cols = list(cols)
        return cls(field, nrows, len(cols), [[c[i] for c in cols] for i in range(nrows)])

    # basic access

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def entries(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Mat({self.nrows}x{self.ncols}: {body})"

    # arithmetic

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        p = self.field.p
        if p:
            rows = tuple(tuple((x + y) % p for x, y in zip(a, b)) for a, b in zip(self.rows, other.rows))
        else:
            rows = tuple(tuple(x + y for x, y in zip(a, b)) for a, b in zip(self.rows, other.rows))
        return Mat._raw(self.field, self.nrows, self.ncols, rows)

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = self.field(c)
        p = self.field.p
        if p:
            rows = tuple(tuple((c * x) % p for x in r) for r in self.rows)
        else:
            rows = tuple(tuple(c * x for x in r) for r in self.rows)
        return Mat._raw(self.field, self.nrows, self.ncols, rows)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        z = self.field.zero
        ocols = other.columns() if other.ncols else []
        out = []
        for r in self.rows:
            nz = [(k, x) for k, x in enumerate(r) if x]
            if not nz:
                out.append((z,) * other.ncols)
                continue
            row = []
            for col in ocols:
                s = z
                for k, x in nz:
                    y = col[k]
                    if y:
                        s += x * y
                row.append(s % p if p else s)
            out.append(tuple(row))
        return Mat._raw(self.field, self.nrows, other.ncols, tuple(out))

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product with a plain sequence."""
        p = self.field.p
        z = self.field.zero
        res = []
        for r in self.rows:
            s = z
            for x, y in zip(r, v):
                if x and y:
                    s += x * y
            res.append(s % p if p else s)
        return tuple(res)

    @property
    def T(self) -> "Mat":
        return Mat._raw(self.field, self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)))

    def trace(self):
        s = self.field.zero
        for i in range(min(self.nrows, self.ncols)):
            s += self.rows[i][i]
        return s % self.field.p if self.field.p else s

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat._raw(self.field, len(rows), len(cols), tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def select_columns(self, cols: Sequence[int]) -> "Mat":
        return self.submatrix(range(self.nrows), cols)


def hstack(mats: Sequence[Mat], nrows: int | None = None, field: Field = QQ) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat.zero(nrows or 0, 0, field)
    n = mats[0].nrows
    if any(m.nrows != n for m in mats):
        raise ValueError("hstack row mismatch")
    rows = tuple(tuple(x for m in mats for x in m.rows[i]) for i in range(n))
    return Mat._raw(mats[0].field, n, sum(m.ncols for m in mats), rows)


def vstack(mats: Sequence[Mat], ncols: int | None = None, field: Field = QQ) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat.zero(0, ncols or 0, field)
    n = mats[0].ncols
    if any(m.ncols != n for m in mats):
        raise ValueError("vstack column mismatch")
    rows = tuple(r for m in mats for r in m.rows)
    return Mat._raw(mats[0].field, len(rows), n, rows)


def block_diag(mats: Sequence[Mat], field: Field = QQ) -> Mat:
    mats = list(mats)
    if mats:
        field = mats[0].field
    ncols = sum(m.ncols for m in mats)
    z = field.zero
    rows = []
    off = 0
    for m in mats:
        for r in m.rows:
            rows.append((z,) * off + tuple(r) + (z,) * (ncols - off - m.ncols))
        off += m.ncols
    return Mat._raw(field, len(rows), ncols, tuple(rows))


# elimination


def _integer_rows(rows) -> list:
    out = []
    for r in rows:
        den = reduce(lcm, (x.denominator for x in r if x), 1)
        out.append([int(x * den) for x in r])
    return out


def rref_rows(rows: Sequence[Sequence], ncols: int, field: Field = QQ):
    """Reduced row echelon form of a list of rows.

    Returns ``(rows, pivots)`` with pivot entries equal to 1 and only the
    nonzero rows kept.
    """
    if field.p:
        return kernels.rref_mod([list(r) for r in rows], ncols, field.p)
    red, piv = kernels.rref_int(_integer_rows(rows), ncols)
    out = []
    for r, c in zip(red, piv):
        d = r[c]
        out.append([Fraction(x, d) if x else Fraction(0) for x in r])
    return out, piv


def rank(m: Mat) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.field.p:
        return len(kernels.rref_mod([list(r) for r in m.rows], m.ncols, m.field.p)[1])
    return len(kernels.rref_int(_integer_rows(m.rows), m.ncols)[1])


def _kernel_from_rref(red, piv, ncols, field: Field):
    pivset = set(piv)
    free = [j for j in range(ncols) if j not in pivset]
    p = field.p
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, c in zip(red, piv):
            x = r[f]
            if x:
                v[c] = (-x) % p if p else -x
        basis.append(tuple(v))
    return basis, free


def kernel_with_free(m: Mat):
    """Right null space basis together with the free column of each vector.

    Vector ``k`` has a 1 at ``free[k]`` and 0 at every other free column, so
    the coordinates of any null vector ``v`` are ``[v[j] for j in free]``.
    """
    if m.nrows == 0:
        red, piv = [], []
    else:
        red, piv = rref_rows(m.rows, m.ncols, m.field)
    return _kernel_from_rref(red, piv, m.ncols, m.field)


def kernel_basis(m: Mat) -> list:
    return kernel_with_free(m)[0]


def solve(a: Mat, b: Mat) -> Mat | None:
    """Some ``X`` with ``a @ X == b`` or ``None`` when inconsistent."""
    if a.nrows != b.nrows:
        raise ValueError(f"row mismatch {a.nrows} vs {b.nrows}")
    field = a.field
    n = a.ncols
    if a.nrows == 0:
        return Mat.zero(n, b.ncols, field)
    aug = [tuple(ra) + tuple(rb) for ra, rb in zip(a.rows, b.rows)]
    red, piv = rref_rows(aug, n + b.ncols, field)
    if piv and piv[-1] >= n:
        return None
    z = field.zero
    x = [[z] * b.ncols for _ in range(n)]
    for r, c in zip(red, piv):
        x[c] = list(r[n:])
    return Mat(field, n, b.ncols, x)


def inverse(m: Mat) -> Mat:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, Mat.identity(m.nrows, m.field))
    if x is None or rank(m) != m.nrows:
        raise ZeroDivisionError("singular matrix")
    return x


def column_space_basis(m: Mat) -> list:
    """Independent columns of ``m`` spanning its column space (pivot columns)."""
    if m.nrows == 0 or m.ncols == 0:
        return []
    _, piv = rref_rows(m.rows, m.ncols, m.field)
    return [m.column(j) for j in piv]


def row_space_rref(vectors: Sequence[Sequence], n: int, field: Field = QQ):
    if not vectors:
        return [], []
    return rref_rows(vectors, n, field)


def complement_basis(vectors: Sequence[Sequence], n: int, field: Field = QQ) -> list:
    """Standard unit vectors completing ``span(vectors)`` to the whole space."""
    _, piv = row_space_rref(vectors, n, field)
    pivset = set(piv)
    out = []
    for j in range(n):
        if j not in pivset:
            e = [field.zero] * n
            e[j] = field.one
            out.append(tuple(e))
    return out
