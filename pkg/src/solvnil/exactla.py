"""Exact linear algebra over Q and prime fields.

Scalars over Q are :class:`fractions.Fraction` (always in lowest terms); scalars
over F_p are :class:`Residue`.  Matrices are immutable and store only their
nonzero entries, which keeps brackets of the very sparse matrices met in the
nilradical computations cheap.  Subspaces of a matrix space are kept in fully
reduced row-echelon form with respect to the diagonal-major coordinate order
(offset j - i ascending, then row ascending), so the echelon pivots expose the
diagonal-degree filtration directly.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


class DimensionError(ValueError):
    """Operands have incompatible sizes or live over different fields."""


class FieldError(ValueError):
    """Bad field specification or scalar string."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


class Residue:
    """Element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> int | None:
        if isinstance(other, Residue):
            if other.p != self.p:
                raise DimensionError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def inverse(self) -> Residue:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * Residue(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Residue(o, self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Residue(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return f"{self.value} mod {self.p}"


class Field:
    """A ground field: Q (characteristic 0) or F_p."""

    characteristic: int
    name: str

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalField(Field):
    characteristic = 0
    name = "Q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, Residue):
            raise DimensionError("cannot coerce an F_p residue into Q")
        return Fraction(x)

    def parse(self, s: str) -> Fraction:
        try:
            return Fraction(str(s).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not a rational scalar: {s!r}") from exc

    def format(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.characteristic = p
        self.name = f"Fp:{p}"

    def __call__(self, x) -> Residue:
        p = self.characteristic
        if isinstance(x, Residue):
            if x.p != p:
                raise DimensionError(f"mixing F_{x.p} and F_{p}")
            return x
        if isinstance(x, Fraction):
            return Residue(x.numerator, p) / Residue(x.denominator, p)
        return Residue(int(x), p)

    def parse(self, s: str) -> Residue:
        s = str(s).strip()
        if "mod" in s:
            value, _, mod = s.partition("mod")
            if int(mod) != self.characteristic:
                raise FieldError(f"scalar {s!r} is not over F_{self.characteristic}")
            s = value
        try:
            return self(Fraction(s.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not a residue: {s!r}") from exc

    def format(self, x) -> str:
        return f"{self(x).value} mod {self.characteristic}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Fp", self.characteristic))


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: str) -> Field:
    """Accept ``Q``, ``Fp:5``, ``F5`` or ``GF5``."""
    s = spec.strip()
    if s.upper() in ("Q", "QQ"):
        return QQ
    for prefix in ("Fp:", "GF", "F"):
        if s.startswith(prefix):
            try:
                return GF(int(s[len(prefix):]))
            except ValueError:
                break
    raise FieldError(f"unknown field {spec!r}; use Q or F<p>")


def field_of(x) -> Field:
    return GF(x.p) if isinstance(x, Residue) else QQ


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


class Matrix:
    """Immutable matrix over a field, stored by its nonzero entries.

    Indices are 0-based.  ``entries`` gives the dense row-major view.
    """

    __slots__ = ("rows", "cols", "field", "_nz", "_by_row")

    def __init__(self, rows: int, cols: int, field: Field, nz: Mapping | None = None):
        self.rows = rows
        self.cols = cols
        self.field = field
        self._nz = {} if nz is None else {k: v for k, v in nz.items() if v}
        self._by_row = None

    @classmethod
    def _raw(cls, rows, cols, field, nz):
        # trusted constructor: nz already holds nonzeros only
        m = cls.__new__(cls)
        m.rows, m.cols, m.field, m._nz, m._by_row = rows, cols, field, nz, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, field: Field = QQ) -> Matrix:
        return cls._raw(rows, rows if cols is None else cols, field, {})

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> Matrix:
        return cls._raw(n, n, field, {(i, i): field.one for i in range(n)})

    @classmethod
    def unit(cls, n: int, i: int, j: int, field: Field = QQ) -> Matrix:
        """Elementary matrix with a single 1 at (i, j), 0-based."""
        return cls._raw(n, n, field, {(i, j): field.one})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ) -> Matrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        nz = {}
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                x = field(x)
                if x:
                    nz[i, j] = x
        return cls._raw(len(rows), ncols, field, nz)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple:
        z = self.field.zero
        return tuple(self._nz.get((i, j), z) for i in range(self.rows) for j in range(self.cols))

    def to_rows(self) -> list[list]:
        z = self.field.zero
        return [[self._nz.get((i, j), z) for j in range(self.cols)] for i in range(self.rows)]

    def items(self) -> Iterator[tuple[tuple[int, int], object]]:
        """Nonzero entries as ((i, j), value)."""
        return iter(self._nz.items())

    @property
    def nnz(self) -> int:
        return len(self._nz)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._nz.get((i, j), self.field.zero)

    def is_zero(self) -> bool:
        return not self._nz

    def __bool__(self):
        return bool(self._nz)

    def _check(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if self.field != other.field:
            raise DimensionError(f"field mismatch: {self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._nz == other._nz)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._nz.items())))

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        nz = dict(self._nz)
        for k, v in other._nz.items():
            s = nz.get(k)
            s = v if s is None else s + v
            if s:
                nz[k] = s
            else:
                nz.pop(k, None)
        return Matrix._raw(self.rows, self.cols, self.field, nz)

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.rows, self.cols, self.field, {k: -v for k, v in self._nz.items()})

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        c = self.field(c)
        if not c:
            return Matrix.zeros(self.rows, self.cols, self.field)
        return Matrix._raw(self.rows, self.cols, self.field, {k: c * v for k, v in self._nz.items()})

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def transpose(self) -> Matrix:
        return Matrix._raw(self.cols, self.rows, self.field, {(j, i): v for (i, j), v in self._nz.items()})

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def _rows_index(self) -> dict:
        if self._by_row is None:
            by_row: dict[int, list] = {}
            for (i, j), v in self._nz.items():
                by_row.setdefault(i, []).append((j, v))
            self._by_row = by_row
        return self._by_row

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        acc: dict = {}
        _accumulate(acc, self, other, 1)
        return Matrix._raw(self.rows, other.cols, self.field, {k: v for k, v in acc.items() if v})

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        """Rows r0..r1-1, columns c0..c1-1."""
        nz = {(i - r0, j - c0): v for (i, j), v in self._nz.items() if r0 <= i < r1 and c0 <= j < c1}
        return Matrix._raw(r1 - r0, c1 - c0, self.field, nz)

    def __repr__(self):
        f = self.field.format
        body = "; ".join(" ".join(f(x) if x else "0" for x in r) for r in self.to_rows())
        return f"Matrix({self.rows}x{self.cols} over {self.field}: [{body}])"


def _accumulate(acc: dict, a: Matrix, b: Matrix, sign: int):
    b_rows = b._rows_index()
    for (i, k), x in a._nz.items():
        row = b_rows.get(k)
        if row is None:
            continue
        if sign < 0:
            x = -x
        for j, y in row:
            key = (i, j)
            prev = acc.get(key)
            acc[key] = x * y if prev is None else prev + x * y


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        raise DimensionError("empty block list")
    field = blocks[0].field
    nz = {}
    r = c = 0
    for b in blocks:
        if b.field != field:
            raise DimensionError("field mismatch in block_diag")
        for (i, j), v in b.items():
            nz[r + i, c + j] = v
        r += b.rows
        c += b.cols
    return Matrix._raw(r, c, field, nz)


def bracket(a: Matrix, b: Matrix) -> Matrix:
    """Commutator ab - ba."""
    a._check(b)
    if a.rows != a.cols or b.shape != a.shape:
        raise DimensionError(f"bracket needs equal square matrices, got {a.shape} and {b.shape}")
    acc: dict = {}
    _accumulate(acc, a, b, 1)
    _accumulate(acc, b, a, -1)
    return Matrix._raw(a.rows, a.cols, a.field, {k: v for k, v in acc.items() if v})


def ad_power(x: Matrix, y: Matrix, m: int) -> Matrix:
    """(ad x)^m applied to y."""
    for _ in range(m):
        y = bracket(x, y)
    return y


# --------------------------------------------------------------------------
# Dense elimination helpers
# --------------------------------------------------------------------------


def _bareiss_rank(rows: list[list[int]]) -> int:
    # fraction-free elimination on integer rows
    m = [r[:] for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, len(m)):
            a = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col, ncols):
                row_r[c] = (p * row_r[c] - a * row_p[c]) // prev
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def rref(rows: Sequence[Sequence], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form of a dense matrix; returns (nonzero rows, pivot columns)."""
    m = [[field(x) for x in r] for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col] if field.characteristic == 0 else m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix) -> int:
    """Exact rank: Bareiss over Q, plain elimination over F_p."""
    if a.is_zero():
        return 0
    if a.field.characteristic == 0:
        rows = []
        for r in a.to_rows():
            den = 1
            for x in r:
                den = den * x.denominator // _gcd(den, x.denominator)
            rows.append([int(x * den) for x in r])
        return _bareiss_rank(rows)
    return len(rref(a.to_rows(), a.field)[1])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def nullspace(rows: Sequence[Sequence], ncols: int, field: Field) -> list[list]:
    """Basis of {x : rows @ x = 0}."""
    if not rows:
        return [[field.one if j == i else field.zero for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence], b: Sequence, field: Field) -> list | None:
    """Unique solution of a square system a x = b, or None if a is singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug, field)
    if pivots != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


# --------------------------------------------------------------------------
# Vectorization and echelon subspaces
# --------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def coordinate_order(n: int) -> tuple[dict, tuple]:
    """Coordinate index of each (i, j) in an n x n matrix.

    Ordered by diagonal offset j - i ascending, then by row.
    """
    index, cells = {}, []
    for off in range(-(n - 1), n):
        for i in range(max(0, -off), min(n, n - off)):
            index[i, i + off] = len(cells)
            cells.append((i, i + off))
    return index, tuple(cells)


def vectorize(a: Matrix) -> dict:
    """Sparse coordinate vector of a square matrix."""
    if a.rows != a.cols:
        raise DimensionError("only square matrices are vectorized")
    index = coordinate_order(a.rows)[0]
    return {index[k]: v for k, v in a.items()}


def devectorize(v: Mapping, n: int, field: Field) -> Matrix:
    cells = coordinate_order(n)[1]
    return Matrix._raw(n, n, field, {cells[c]: x for c, x in v.items() if x})


def coordinate_offset(c: int, n: int) -> int:
    i, j = coordinate_order(n)[1][c]
    return j - i


def _as_sparse(v, field: Field) -> dict:
    if isinstance(v, Matrix):
        return vectorize(v)
    if isinstance(v, Mapping):
        return {c: field(x) for c, x in v.items() if x}
    return {c: field(x) for c, x in enumerate(v) if x}


class Subspace:
    """Span of sparse vectors, held in fully reduced row-echelon form.

    Rows are sorted by pivot coordinate; each row has a 1 at its pivot and 0 at
    every other pivot, so the basis is canonical and equality of subspaces is
    equality of basis lists.  Instances are immutable; :meth:`insert` returns a
    new subspace sharing the untouched rows.
    """

    __slots__ = ("ambient_dim", "field", "rows", "pivots", "_where")

    def __init__(self, ambient_dim: int, field: Field = QQ, rows=(), pivots=()):
        self.ambient_dim = ambient_dim
        self.field = field
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self._where = {p: i for i, p in enumerate(self.pivots)}

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int, field: Field = QQ) -> Subspace:
        sp = cls(ambient_dim, field)
        for v in vectors:
            sp, _ = sp.insert(v)
        return sp

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    @property
    def pivot_map(self) -> dict:
        """Pivot coordinate -> basis index."""
        return dict(self._where)

    def reduce(self, v) -> dict:
        """Remainder of v after elimination against the basis."""
        v = _as_sparse(v, self.field)
        hits = [c for c in v if c in self._where]
        for c in hits:
            x = v.get(c)
            if not x:
                continue
            for k, y in self.rows[self._where[c]].items():
                s = v.get(k)
                s = -x * y if s is None else s - x * y
                if s:
                    v[k] = s
                else:
                    del v[k]
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def insert(self, v) -> tuple[Subspace, bool]:
        r = self.reduce(v)
        if not r:
            return self, False
        if max(r) >= self.ambient_dim:
            raise DimensionError("vector has coordinates outside the ambient space")
        p = min(r)
        inv = 1 / r[p] if self.field.characteristic == 0 else r[p].inverse()
        r = {k: x * inv for k, x in r.items()}
        rows = []
        for row in self.rows:
            x = row.get(p)
            if x:
                row = dict(row)
                for k, y in r.items():
                    s = row.get(k)
                    s = -x * y if s is None else s - x * y
                    if s:
                        row[k] = s
                    else:
                        del row[k]
            rows.append(row)
        pivots = list(self.pivots)
        pos = 0
        while pos < len(pivots) and pivots[pos] < p:
            pos += 1
        pivots.insert(pos, p)
        rows.insert(pos, r)
        return Subspace(self.ambient_dim, self.field, rows, pivots), True

    def union(self, other: Subspace) -> Subspace:
        sp = self
        for row in other.rows:
            sp, _ = sp.insert(row)
        return sp

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(row) for row in self.rows)

    def matrices(self, n: int) -> list[Matrix]:
        """Basis rows as n x n matrices (ambient_dim must be n*n)."""
        return [devectorize(r, n, self.field) for r in self.rows]

    def dense_rows(self) -> list[list]:
        z = self.field.zero
        return [[r.get(c, z) for c in range(self.ambient_dim)] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.field == other.field
                and self.pivots == other.pivots and list(self.rows) == list(other.rows))

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"


def subspace_insert(sp: Subspace, v) -> tuple[Subspace, bool]:
    return sp.insert(v)


def subspace_contains(sp: Subspace, v) -> bool:
    return sp.contains(v)


def max_numerator_bits(values: Iterable) -> int:
    """Largest numerator/denominator bit length among rational values (0 over F_p)."""
    best = 0
    for x in values:
        if isinstance(x, Fraction):
            best = max(best, x.numerator.bit_length(), x.denominator.bit_length())
    return best


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def format_scalar(x) -> str:
    return field_of(x).format(x)


def parse_scalar(s: str, field: Field | None = None):
    s = str(s).strip()
    if field is None:
        if "mod" in s:
            p = int(s.partition("mod")[2])
            field = GF(p)
        else:
            field = QQ
    return field.parse(s)


def matrix_to_json(a: Matrix) -> list[list[str]]:
    f = a.field.format
    return [[f(x) for x in r] for r in a.to_rows()]


def matrix_from_json(rows: Sequence[Sequence[str]], field: Field = QQ) -> Matrix:
    return Matrix.from_rows([[field.parse(x) for x in r] for r in rows], field)
