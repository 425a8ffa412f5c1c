"""Block shapes, the matrices D(alpha, lambda) and E(S), the involution phi,
and normalization of block sequences under the group G(d).

Block indices in the public API are 1-based, matching the usual way these
sequences are written; matrix entries remain 0-based.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .exactla import (
    QQ,
    DimensionError,
    Field,
    Matrix,
    block_diag,
    parse_field,
    solve,
)


class AdmissibilityError(ValueError):
    """A block sequence violates S(i)[d_i, 1] != 0 or has wrongly sized blocks."""


class ConstraintError(ValueError):
    """A random-sequence constraint cannot be met for the requested shape."""


class NormalizationError(RuntimeError):
    """The level-by-level normalization system was singular."""


@dataclass(frozen=True)
class Shape:
    d_vec: tuple[int, ...]

    def __post_init__(self):
        d_vec = tuple(int(x) for x in self.d_vec)
        object.__setattr__(self, "d_vec", d_vec)
        if len(d_vec) < 2:
            raise ValueError(f"need at least two blocks, got {d_vec}")
        if any(x < 1 for x in d_vec):
            raise ValueError(f"block sizes must be positive: {d_vec}")

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> Shape:
        if isinstance(text, str):
            return cls(tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x))
        return cls(tuple(text))

    @property
    def k(self) -> int:
        return len(self.d_vec)

    @property
    def d(self) -> int:
        return sum(self.d_vec)

    @property
    def offsets(self) -> tuple[int, ...]:
        """0-based start of each block, followed by d."""
        out = [0]
        for x in self.d_vec:
            out.append(out[-1] + x)
        return tuple(out)

    def size(self, i: int) -> int:
        """d_i for a 1-based block index."""
        return self.d_vec[i - 1]

    def block_of(self, row: int) -> int:
        """1-based block containing a 0-based row index."""
        off = self.offsets
        for i in range(self.k):
            if row < off[i + 1]:
                return i + 1
        raise IndexError(row)

    def reversed(self) -> Shape:
        return Shape(self.d_vec[::-1])

    def __str__(self):
        return "(" + ",".join(map(str, self.d_vec)) + ")"


def is_symmetric(shape: Shape) -> bool:
    return shape.d_vec == shape.d_vec[::-1]


def is_odd_symmetric(shape: Shape) -> bool:
    return is_symmetric(shape) and shape.k % 2 == 1 and shape.d_vec[shape.k // 2] % 2 == 1


def is_all_ones(shape: Shape) -> bool:
    return all(x == 1 for x in shape.d_vec)


@dataclass(frozen=True, eq=False)
class BlockSeq:
    """The sequence S = (S(1), ..., S(k-1)); ``blocks[i-1]`` is S(i)."""

    shape: Shape
    blocks: tuple[Matrix, ...]
    field: Field = QQ
    validate: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        dv = self.shape.d_vec
        if len(self.blocks) != self.shape.k - 1:
            raise AdmissibilityError(f"expected {self.shape.k - 1} blocks, got {len(self.blocks)}")
        for i, b in enumerate(self.blocks):
            if b.shape != (dv[i], dv[i + 1]):
                raise AdmissibilityError(
                    f"S({i + 1}) must be {dv[i]}x{dv[i + 1]}, got {b.rows}x{b.cols}")
            if b.field != self.field:
                raise DimensionError(f"S({i + 1}) is over {b.field}, expected {self.field}")
        if self.validate:
            bad = [i + 1 for i, b in enumerate(self.blocks) if not b[dv[i] - 1, 0]]
            if bad:
                raise AdmissibilityError(
                    "corner entry S(i)[d_i,1] vanishes for i in " + ", ".join(map(str, bad)))

    def __getitem__(self, i: int) -> Matrix:
        """S(i), 1-based."""
        if not 1 <= i < self.shape.k:
            raise IndexError(i)
        return self.blocks[i - 1]

    def __eq__(self, other):
        if not isinstance(other, BlockSeq):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.shape, self.blocks))

    def is_admissible(self) -> bool:
        dv = self.shape.d_vec
        return all(b[dv[i] - 1, 0] for i, b in enumerate(self.blocks))

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "d": list(self.shape.d_vec),
            "blocks": [[[fmt(x) for x in r] for r in b.to_rows()] for b in self.blocks],
            "field": self.field.name,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> BlockSeq:
        field = parse_field(obj.get("field", "Q"))
        shape = Shape(tuple(obj["d"]))
        blocks = [Matrix.from_rows([[field.parse(x) for x in r] for r in b], field) for b in obj["blocks"]]
        return cls(shape, tuple(blocks), field)


# --------------------------------------------------------------------------
# Builders and projections
# --------------------------------------------------------------------------


def jordan_upper(size: int, eigenvalue, field: Field = QQ) -> Matrix:
    """Upper-triangular Jordan block J^size(eigenvalue)."""
    ev = field(eigenvalue)
    nz = {(i, i): ev for i in range(size)}
    nz.update({(i, i + 1): field.one for i in range(size - 1)})
    return Matrix(size, size, field, nz)


def build_D(shape: Shape, alpha=0, lam=0, field: Field = QQ) -> Matrix:
    """J^{d_1}(alpha) + J^{d_2}(alpha - lam) + ... as a block-diagonal matrix."""
    a, l = field(alpha), field(lam)
    return block_diag([jordan_upper(x, a - i * l, field) for i, x in enumerate(shape.d_vec)])


def build_E(seq: BlockSeq) -> Matrix:
    """Block matrix with S(i) in block position (i, i+1)."""
    off = seq.shape.offsets
    nz = {}
    for i, b in enumerate(seq.blocks):
        for (r, c), v in b.items():
            nz[off[i] + r, off[i + 1] + c] = v
    return Matrix(seq.shape.d, seq.shape.d, seq.field, nz)


def block_project(shape: Shape, a: Matrix, i: int, j: int) -> Matrix:
    """The (i, j) block of a, 1-based block indices."""
    if not (1 <= i <= shape.k and 1 <= j <= shape.k):
        raise IndexError(f"block ({i},{j}) outside 1..{shape.k}")
    if a.shape != (shape.d, shape.d):
        raise DimensionError(f"matrix is {a.shape}, shape needs {shape.d}x{shape.d}")
    off = shape.offsets
    return a.submatrix(off[i - 1], off[i], off[j - 1], off[j])


def diag_component(a: Matrix, t: int) -> Matrix:
    """Part of a on the diagonal j - i = t."""
    return Matrix(a.rows, a.cols, a.field, {(i, j): v for (i, j), v in a.items() if j - i == t})


def ddeg(a: Matrix) -> int | None:
    """Smallest offset j - i carrying a nonzero entry; None for the zero matrix."""
    return min((j - i for (i, j), _ in a.items()), default=None)


def block_degree(shape: Shape, a: Matrix) -> int | None:
    """Smallest block offset carrying a nonzero entry; None for the zero matrix."""
    blk = [shape.block_of(r) for r in range(shape.d)]
    return min((blk[j] - blk[i] for (i, j), _ in a.items()), default=None)


def phi_map(a: Matrix) -> Matrix:
    """phi(A)[i,j] = (-1)^(i-j+1) A[d+1-j, d+1-i], i.e. A -> -K A^T K^{-1}."""
    if a.rows != a.cols:
        raise DimensionError("phi needs a square matrix")
    n = a.rows
    nz = {}
    for (r, c), v in a.items():
        i, j = n - 1 - c, n - 1 - r
        nz[i, j] = v if (i - j + 1) % 2 == 0 else -v
    return Matrix(n, n, a.field, nz)


# --------------------------------------------------------------------------
# Sequences
# --------------------------------------------------------------------------


def canonical_seq(shape: Shape, field: Field = QQ) -> BlockSeq:
    dv = shape.d_vec
    blocks = [Matrix(dv[i], dv[i + 1], field, {(dv[i] - 1, 0): field.one}) for i in range(shape.k - 1)]
    return BlockSeq(shape, tuple(blocks), field)


def seq_from_E(shape: Shape, e: Matrix, *, validate: bool = True) -> BlockSeq:
    """Read S back from the superdiagonal blocks of a matrix."""
    blocks = [block_project(shape, e, i, i + 1) for i in range(1, shape.k)]
    return BlockSeq(shape, tuple(blocks), e.field, validate=validate)


def seq_from_rows(shape: Shape, blocks: Sequence[Sequence[Sequence]], field: Field = QQ,
                  *, validate: bool = True) -> BlockSeq:
    return BlockSeq(shape, tuple(Matrix.from_rows(b, field) for b in blocks), field, validate=validate)


def _corner_ok(seq: BlockSeq) -> bool:
    dv = seq.shape.d_vec
    return all(b[dv[i] - 1, 0] == 1 for i, b in enumerate(seq.blocks))


def _mirror_ok(seq: BlockSeq) -> bool:
    dv = seq.shape.d_vec
    for i in range(seq.shape.k - 2):
        s, t = seq.blocks[i], seq.blocks[i + 1]
        for j in range(dv[i + 1]):
            if s[dv[i] - 1, j] != t[dv[i + 1] - 1 - j, 0]:
                return False
    return True


def _edges_ok(seq: BlockSeq) -> bool:
    dv = seq.shape.d_vec
    first, last = seq.blocks[0], seq.blocks[-1]
    if any(first[r, 0] for r in range(dv[0] - 1)):
        return False
    return not any(last[dv[-2] - 1, c] for c in range(1, dv[-1]))


def is_weakly_normalized(seq: BlockSeq) -> bool:
    """Corner entries are 1 and each last row of S(i) is the reversed first column of S(i+1)."""
    return _corner_ok(seq) and _mirror_ok(seq)


def is_normalized(seq: BlockSeq) -> bool:
    """Weakly normalized, plus the first column of S(1) and last row of S(k-1) vanish off the corner."""
    return is_weakly_normalized(seq) and _edges_ok(seq)


def is_phi_invariant(seq: BlockSeq) -> bool:
    if not is_symmetric(seq.shape):
        return False
    e = build_E(seq)
    return phi_map(e) == e


def phi_symmetrize(seq: BlockSeq, *, validate: bool = True) -> BlockSeq:
    """(E + phi(E)) / 2 read back as a sequence (symmetric shapes, char != 2)."""
    if not is_symmetric(seq.shape):
        raise ConstraintError(f"shape {seq.shape} is not symmetric")
    if seq.field.characteristic == 2:
        raise ConstraintError("phi-symmetrization needs characteristic != 2")
    e = build_E(seq)
    half = 1 / seq.field(2)
    return seq_from_E(seq.shape, (e + phi_map(e)).scale(half), validate=validate)


# --------------------------------------------------------------------------
# The group G(d)
# --------------------------------------------------------------------------


def _poly_matrix(coeffs: Sequence, field: Field) -> Matrix:
    n = len(coeffs)
    return Matrix(n, n, field, {(r, r + m): c for m, c in enumerate(coeffs) for r in range(n - m) if c})


def _series_inverse(coeffs: Sequence, field: Field) -> list:
    c0 = coeffs[0]
    inv0 = field.one / c0
    q = [inv0]
    for m in range(1, len(coeffs)):
        s = field.zero
        for j in range(1, m + 1):
            s = s + coeffs[j] * q[m - j]
        q.append(-inv0 * s)
    return q


@dataclass(frozen=True)
class GroupElem:
    """P = P_1 + ... + P_k with P_i = sum_m polys[i-1][m] * J^{d_i}(0)^m."""

    shape: Shape
    polys: tuple[tuple, ...]
    field: Field = QQ

    def __post_init__(self):
        polys = tuple(tuple(self.field(c) for c in p) for p in self.polys)
        object.__setattr__(self, "polys", polys)
        if tuple(len(p) for p in polys) != self.shape.d_vec:
            raise DimensionError("coefficient vectors must have lengths d_1..d_k")
        if any(not p[0] for p in polys):
            raise ValueError("constant terms must be nonzero")

    @classmethod
    def identity(cls, shape: Shape, field: Field = QQ) -> GroupElem:
        return cls(shape, tuple((1,) + (0,) * (x - 1) for x in shape.d_vec), field)

    def block(self, i: int) -> Matrix:
        return _poly_matrix(self.polys[i - 1], self.field)

    def matrix(self) -> Matrix:
        return block_diag([_poly_matrix(p, self.field) for p in self.polys])

    def inverse(self) -> GroupElem:
        return GroupElem(self.shape, tuple(tuple(_series_inverse(p, self.field)) for p in self.polys), self.field)

    def is_identity(self) -> bool:
        return self == GroupElem.identity(self.shape, self.field)

    def conjugate(self, seq: BlockSeq, *, validate: bool = True) -> BlockSeq:
        """The sequence S' with E(S') = P E(S) P^{-1}."""
        if seq.shape != self.shape:
            raise DimensionError("shape mismatch")
        inv = [_poly_matrix(_series_inverse(p, self.field), self.field) for p in self.polys]
        fwd = [_poly_matrix(p, self.field) for p in self.polys]
        blocks = tuple(fwd[i] @ b @ inv[i + 1] for i, b in enumerate(seq.blocks))
        return BlockSeq(self.shape, blocks, self.field, validate=validate)

    def to_json(self) -> list[list[str]]:
        return [[self.field.format(c) for c in p] for p in self.polys]


@dataclass(frozen=True)
class Normalization:
    """Result of :func:`normalize_seq`.

    ``unique`` records that every level of the triangular system had a unique
    solution once the global scalar was fixed by c_{1,0} = 1.
    """

    gauge: GroupElem
    seq: BlockSeq
    unique: bool = True

    def __iter__(self):
        return iter((self.gauge, self.seq))


def _level_equations(seq: BlockSeq, m: int) -> list:
    # residuals of the normalization conditions sitting at level m
    dv, k, b = seq.shape.d_vec, seq.shape.k, seq.blocks
    res = []
    if dv[0] > m:
        res.append(b[0][dv[0] - 1 - m, 0])
    for i in range(k - 2):
        if dv[i + 1] > m:
            res.append(b[i][dv[i] - 1, m] - b[i + 1][dv[i + 1] - 1 - m, 0])
    if dv[-1] > m:
        res.append(b[-1][dv[-2] - 1, m])
    return res


def normalize_seq(seq: BlockSeq) -> Normalization:
    """Find P in G(d) (with c_{1,0} = 1) and normalized S' with E(S') = P E(S) P^{-1}.

    Level 0 fixes the constant terms through c_{i+1,0} = c_{i,0} S(i)[d_i,1].
    Each further level m is a square affine system in the coefficients of
    J^m, triangular in the lower levels; it is built by evaluating the
    residuals at the origin and at unit vectors and solved exactly.
    """
    if not seq.is_admissible():
        raise AdmissibilityError("normalize_seq needs an admissible sequence")
    shape, field = seq.shape, seq.field
    dv = shape.d_vec
    coeffs = [[field.zero] * x for x in dv]
    coeffs[0][0] = field.one
    for i in range(shape.k - 1):
        coeffs[i + 1][0] = coeffs[i][0] * seq.blocks[i][dv[i] - 1, 0]

    def conj(cs):
        return GroupElem(shape, tuple(tuple(c) for c in cs), field).conjugate(seq, validate=False)

    for m in range(1, max(dv)):
        unknowns = [i for i in range(shape.k) if dv[i] > m]
        base = _level_equations(conj(coeffs), m)
        cols = []
        for i in unknowns:
            coeffs[i][m] = field.one
            trial = _level_equations(conj(coeffs), m)
            coeffs[i][m] = field.zero
            cols.append([t - r for t, r in zip(trial, base)])
        a = [[cols[c][r] for c in range(len(unknowns))] for r in range(len(base))]
        x = solve(a, [-r for r in base], field)
        if x is None:
            raise NormalizationError(
                f"level {m} system is singular over {field} for shape {shape}")
        for i, v in zip(unknowns, x):
            coeffs[i][m] = v

    gauge = GroupElem(shape, tuple(tuple(c) for c in coeffs), field)
    out = gauge.conjugate(seq)
    if not is_normalized(out):
        raise NormalizationError(f"normalization did not converge for shape {shape}")
    return Normalization(gauge, out, True)


# --------------------------------------------------------------------------
# Deterministic random instances
# --------------------------------------------------------------------------

CONSTRAINTS = (
    "none",
    "weakly_normalized",
    "normalized",
    "normalized_phi_invariant",
    "weakly_normalized_phi_invariant",
)


def _rng(seed: int, *key) -> np.random.Generator:
    digest = hashlib.sha256(json.dumps([seed, *key]).encode()).digest()
    return np.random.Generator(np.random.Philox(key=int.from_bytes(digest[:16], "little")))


def _draw(rng: np.random.Generator, bound: int, field: Field, nonzero: bool = False):
    while True:
        x = field(int(rng.integers(-bound, bound + 1)))
        if x or not nonzero:
            return x


def random_seq(shape: Shape, seed: int = 0, entry_bound: int = 3,
               constraint: str = "none", field: Field = QQ) -> BlockSeq:
    """Seeded random admissible sequence satisfying ``constraint``.

    The generator is Philox keyed by (seed, shape, constraint), so a given
    triple always yields the same sequence.
    """
    if entry_bound < 1:
        raise ValueError("entry_bound must be >= 1")
    if constraint not in CONSTRAINTS:
        raise ConstraintError(f"unknown constraint {constraint!r}")
    phi = constraint.endswith("phi_invariant")
    if phi and not is_symmetric(shape):
        raise ConstraintError(f"no phi-invariant sequence on asymmetric shape {shape}")
    if phi and field.characteristic == 2:
        raise ConstraintError("phi-invariant sampling needs characteristic != 2")
    rng = _rng(seed, list(shape.d_vec), constraint, field.name, entry_bound)
    dv, k = shape.d_vec, shape.k
    rows = [[[_draw(rng, entry_bound, field) for _ in range(dv[i + 1])] for _ in range(dv[i])]
            for i in range(k - 1)]
    if constraint == "none":
        for i in range(k - 1):
            rows[i][dv[i] - 1][0] = _draw(rng, entry_bound, field, nonzero=True)
    else:
        for i in range(k - 1):
            rows[i][dv[i] - 1][0] = field.one
        for i in range(k - 2):
            for j in range(dv[i + 1]):
                rows[i + 1][dv[i + 1] - 1 - j][0] = rows[i][dv[i] - 1][j]
        if constraint.startswith("normalized"):
            for r in range(dv[0] - 1):
                rows[0][r][0] = field.zero
            for c in range(1, dv[-1]):
                rows[-1][dv[-2] - 1][c] = field.zero
    seq = seq_from_rows(shape, rows, field)
    if phi:
        # the constraint sets are phi-stable, so averaging keeps them
        seq = phi_symmetrize(seq)
    return seq


def random_group_elem(shape: Shape, seed: int = 0, entry_bound: int = 3, field: Field = QQ) -> GroupElem:
    rng = _rng(seed, list(shape.d_vec), "G", field.name, entry_bound)
    polys = tuple(
        tuple([_draw(rng, entry_bound, field, nonzero=True)]
              + [_draw(rng, entry_bound, field) for _ in range(x - 1)])
        for x in shape.d_vec)
    return GroupElem(shape, polys, field)

