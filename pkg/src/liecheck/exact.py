"""Exact scalar fields and dense exact linear algebra.

Scalars are arbitrary-precision rationals (``fractions.Fraction``, re-exported
as :data:`Rational`) or Gaussian rationals (:class:`GaussianRational`, the
field Q(i)).  Matrices and subspaces are immutable and every operation is a
pure function, so values can be shared freely between threads.

Subspaces are kept in reduced row-echelon form with a fixed pivot rule
(leftmost nonzero column, first nonzero row, pivot normalized to 1, zeros
above and below), which makes equality of subspaces plain structural
equality.

The textual scalar syntax (``-3``, ``3/2``, ``3/2+1/4i``, ``-i``, ``2i``) is
shared with the declarative input format; :func:`parse_scalar` and
:func:`format_scalar` are the single implementation of it.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DimensionCapExceeded, DimensionMismatch

Rational = Fraction

#: Largest supported ambient dimension.  Exact elimination is cubic; this cap
#: keeps every operation interactive while covering all shipped examples.
AMBIENT_DIM_CAP = 64


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational scalar, got {type(x).__name__}")


class GaussianRational:
    """An element a + b*i of Q(i) with exact rational components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    @staticmethod
    def _coerce(x) -> Optional["GaussianRational"]:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        # Real Gaussian rationals must hash like the rational they equal.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def _coerce_scalar(x):
    """Coerce an entry to an exact scalar; floats are rejected."""
    if isinstance(x, (Fraction, GaussianRational)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact scalar required, got {type(x).__name__}")


def conjugate_scalar(x):
    x = _coerce_scalar(x)
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


# ---------------------------------------------------------------------------
# scalar text syntax
# ---------------------------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_RE_RAT = re.compile(rf"({_RAT})\Z")
_RE_UNIT_IM = re.compile(r"([+-]?)i\Z")
_RE_IM = re.compile(rf"({_RAT})i\Z")
_RE_FULL_UNIT = re.compile(rf"({_RAT})([+-])i\Z")
_RE_FULL = re.compile(rf"({_RAT})([+-]\d+(?:/\d+)?)i\Z")


def parse_scalar(text: str):
    """Parse the canonical scalar syntax into a Fraction or GaussianRational."""
    s = text.strip()
    m = _RE_RAT.match(s)
    if m:
        return Fraction(m.group(1))
    m = _RE_UNIT_IM.match(s)
    if m:
        return GaussianRational(0, -1 if m.group(1) == "-" else 1)
    m = _RE_IM.match(s)
    if m:
        return GaussianRational(0, Fraction(m.group(1)))
    m = _RE_FULL_UNIT.match(s)
    if m:
        return GaussianRational(Fraction(m.group(1)), -1 if m.group(2) == "-" else 1)
    m = _RE_FULL.match(s)
    if m:
        return GaussianRational(Fraction(m.group(1)), Fraction(m.group(2)))
    raise ValueError(f"not a valid scalar: {text!r}")


def format_scalar(x) -> str:
    """Emit a scalar in canonical text form (inverse of :func:`parse_scalar`)."""
    x = _coerce_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    if x.im == 0:
        return str(x.re)
    if x.im == 1:
        im = "i"
    elif x.im == -1:
        im = "-i"
    else:
        im = f"{x.im}i"
    if x.re == 0:
        return im
    sign = "+" if x.im > 0 else "-"
    mag = abs(x.im)
    return f"{x.re}{sign}{'i' if mag == 1 else f'{mag}i'}"


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class ExactMatrix:
    """A dense immutable matrix with exact entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(_coerce_scalar(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "ExactMatrix":
        rows = [tuple(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != width:
                raise DimensionMismatch("declared column count does not match rows")
            cols = width
        elif cols is None:
            raise DimensionMismatch("empty matrix needs an explicit column count")
        flat = [e for r in rows for e in r]
        return cls(len(rows), cols, flat)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols,
            self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions do not match")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = 0
                for k in range(self.cols):
                    a = ri[k]
                    if a:
                        acc = acc + a * other.entry(k, j)
                out.append(_coerce_scalar(acc) if isinstance(acc, int) else acc)
        return ExactMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector length {len(vec)} != {self.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            acc = 0
            for a, x in zip(ri, vec):
                if a:
                    acc = acc + a * x
            out.append(_coerce_scalar(acc) if isinstance(acc, int) else acc)
        return tuple(out)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scaled(self, s) -> "ExactMatrix":
        s = _coerce_scalar(s)
        return ExactMatrix(self.rows, self.cols, [s * a for a in self.entries])

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("row counts differ")
        out = []
        for i in range(self.rows):
            out.extend(self.row(i))
            out.extend(other.row(i))
        return ExactMatrix(self.rows, self.cols + other.cols, out)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch("column counts differ")
        return ExactMatrix(
            self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def conjugated(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [conjugate_scalar(e) for e in self.entries])

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("matrix shapes differ")

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def rref(m: ExactMatrix) -> tuple:
    """Unique reduced row-echelon form, with zero rows dropped.

    Returns ``(reduced, pivot_cols)``.  The pivot rule is deterministic:
    leftmost nonzero column first, first nonzero row as pivot row, pivot
    normalized to 1, eliminated above and below.
    """
    work = m.to_rows()
    pivots = []
    r = 0
    for col in range(m.cols):
        pr = None
        for i in range(r, len(work)):
            if work[i][col]:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pv = work[r][col]
        if pv != 1:
            work[r] = [e / pv for e in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col]:
                f = work[i][col]
                row_r = work[r]
                work[i] = [a - f * b for a, b in zip(work[i], row_r)]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return ExactMatrix.from_rows(work[:r], cols=m.cols), tuple(pivots)


def _one_like(m: ExactMatrix):
    for e in m.entries:
        if isinstance(e, GaussianRational):
            return GaussianRational(1)
    return Fraction(1)


def kernel_basis(m: ExactMatrix) -> "Subspace":
    """Canonical basis of the right kernel ``{x : m x = 0}``."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    one = _one_like(m)
    vectors = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [one - one] * m.cols
        v[f] = one
        for ridx, p in enumerate(pivots):
            v[p] = -red.entry(ridx, f)
        vectors.append(v)
    return Subspace.from_vectors(m.cols, vectors)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A linear subspace held as a reduced row-echelon basis.

    Because the representation is canonical, two subspaces are equal exactly
    when their ``(ambient_dim, basis)`` data are equal.
    """

    __slots__ = ("ambient_dim", "basis", "pivot_cols")

    def __init__(self, ambient_dim: int, basis: ExactMatrix, pivot_cols: tuple):
        if ambient_dim > AMBIENT_DIM_CAP:
            raise DimensionCapExceeded(
                f"ambient dimension {ambient_dim} exceeds the cap {AMBIENT_DIM_CAP}"
            )
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivot_cols = pivot_cols

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        if ambient_dim > AMBIENT_DIM_CAP:
            raise DimensionCapExceeded(
                f"ambient dimension {ambient_dim} exceeds the cap {AMBIENT_DIM_CAP}"
            )
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
        m = ExactMatrix.from_rows(vecs, cols=ambient_dim)
        red, piv = rref(m)
        return cls(ambient_dim, red, piv)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls.from_vectors(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ExactMatrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> tuple:
        return tuple(self.basis.row(i) for i in range(self.dim))

    def coordinates_of(self, v: Sequence) -> Optional[tuple]:
        """Coordinates of ``v`` in the echelon basis, or None if outside."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(
                f"vector length {len(v)} != ambient dimension {self.ambient_dim}"
            )
        residual = [_coerce_scalar(x) for x in v]
        coords = []
        for ridx, p in enumerate(self.pivot_cols):
            c = residual[p]
            coords.append(c)
            if c:
                row = self.basis.row(ridx)
                residual = [a - c * b for a, b in zip(residual, row)]
        if any(residual):
            return None
        return tuple(coords)

    def __contains__(self, v) -> bool:
        return self.coordinates_of(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(v in self for v in other.vectors())

    def conjugated(self) -> "Subspace":
        # Conjugation fixes the pivot structure, so the result stays canonical.
        return Subspace(self.ambient_dim, self.basis.conjugated(), self.pivot_cols)

    def over_gaussian(self) -> "Subspace":
        ent = [
            e if isinstance(e, GaussianRational) else GaussianRational(e)
            for e in self.basis.entries
        ]
        return Subspace(
            self.ambient_dim,
            ExactMatrix(self.basis.rows, self.basis.cols, ent),
            self.pivot_cols,
        )

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.pivot_cols == other.pivot_cols
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.pivot_cols, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def membership(s: Subspace, v: Sequence) -> tuple:
    """Whether ``v`` lies in ``s``; when it does, also its coordinates."""
    coords = s.coordinates_of(v)
    return (coords is not None), coords


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    return Subspace.from_vectors(a.ambient_dim, list(a.vectors()) + list(b.vectors()))


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked-bases system."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    # Columns: basis of a, then negated basis of b; kernel rows (u, w) satisfy
    # sum u_i a_i = sum w_j b_j, i.e. describe the intersection.
    entries = []
    for r in range(a.ambient_dim):
        for j in range(a.dim):
            entries.append(a.basis.entry(j, r))
        for j in range(b.dim):
            entries.append(-b.basis.entry(j, r))
    stacked = ExactMatrix(a.ambient_dim, a.dim + b.dim, entries)
    kern = kernel_basis(stacked)
    vectors = []
    for krow in kern.vectors():
        u = krow[: a.dim]
        vec = [0] * a.ambient_dim
        for j, c in enumerate(u):
            if c:
                row = a.basis.row(j)
                vec = [x + c * y for x, y in zip(vec, row)]
        vectors.append([_coerce_scalar(x) if isinstance(x, int) else x for x in vec])
    return Subspace.from_vectors(a.ambient_dim, vectors)
