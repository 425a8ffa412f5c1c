"""The nilradical n(S) of h(alpha, lambda, S): bracket closure, lower central
series, graded dimensions and the minimal-rank table r_{i,j}.

n(S) is generated by E^(l) = (ad D(0,0))^l E(S), l = 0..rho.  All generators
have block-degree 1, and for the canonical sequence each one is also
homogeneous in diagonal degree.  The closure keeps one echelon subspace per
homogeneous component, so bracket results are only ever reduced against the
component they land in.  Components have disjoint coordinate supports, hence
the union of their reduced bases is already the reduced basis of n(S).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .blockstruct import (
    BlockSeq,
    Shape,
    block_project,
    build_D,
    build_E,
    canonical_seq,
)
from .exactla import (
    QQ,
    Field,
    Matrix,
    Subspace,
    bracket,
    coordinate_offset,
    matrix_to_json,
    max_numerator_bits,
    nullspace,
    rank,
    vectorize,
)

log = logging.getLogger(__name__)


class ClosureError(ValueError):
    """A supposed subalgebra basis is not closed under brackets."""


class UnsupportedError(ValueError):
    """Operation only defined for the canonical sequence."""


def rho(shape: Shape) -> int:
    """max(d_i + d_{i+1}) - 2: the index of the last nonzero E^(l)."""
    dv = shape.d_vec
    return max(dv[i] + dv[i + 1] for i in range(shape.k - 1)) - 2


def generators(seq: BlockSeq) -> list[Matrix]:
    """E^(0), ..., E^(rho) for the sequence (over its own field)."""
    d0 = build_D(seq.shape, 0, 0, seq.field)
    out = [build_E(seq)]
    for _ in range(rho(seq.shape)):
        out.append(bracket(d0, out[-1]))
    return out


def _is_single_diagonal(a: Matrix) -> bool:
    return len({j - i for (i, j), _ in a.items()}) <= 1


def _add_keys(a: tuple, b: tuple) -> tuple:
    return tuple(None if x is None or y is None else x + y for x, y in zip(a, b))


def _grading_keys(gens: Sequence[Matrix]) -> list[tuple]:
    # (block degree, diagonal degree); the diagonal part only when every generator is homogeneous
    diag = all(_is_single_diagonal(g) for g in gens if g)
    keys = []
    for g in gens:
        t = min((j - i for (i, j), _ in g.items()), default=0)
        keys.append((1, t if diag else None))
    return keys


def _merge(components: dict, ambient: int, field: Field) -> Subspace:
    rows = sorted((p, r) for sp in components.values() for p, r in zip(sp.pivots, sp.rows))
    return Subspace(ambient, field, [r for _, r in rows], [p for p, _ in rows])


def _close(gens: Sequence[Matrix], keys: Sequence[tuple], n: int, field: Field):
    ambient = n * n
    comps: dict[tuple, Subspace] = {}
    active: list[tuple[Matrix, tuple]] = []
    work: list[tuple[Matrix, tuple]] = []
    for g, key in zip(gens, keys):
        sp = comps.get(key, Subspace(ambient, field))
        sp, grew = sp.insert(vectorize(g))
        if grew:
            comps[key] = sp
            active.append((g, key))
            work.append((g, key))
    while work:
        x, kx = work.pop()
        for g, kg in active:
            y = bracket(g, x)
            if not y:
                continue
            key = _add_keys(kg, kx)
            sp = comps.get(key, Subspace(ambient, field))
            sp, grew = sp.insert(vectorize(y))
            if grew:
                comps[key] = sp
                work.append((y, key))
    return comps, active


def _graded_lcs(comps: dict, active, n: int, field: Field) -> list[dict]:
    terms = [comps]
    while terms[-1]:
        nxt: dict[tuple, Subspace] = {}
        for key, sp in terms[-1].items():
            for x in sp.matrices(n):
                for g, kg in active:
                    y = bracket(g, x)
                    if not y:
                        continue
                    k2 = _add_keys(kg, key)
                    nxt[k2] = nxt.get(k2, Subspace(n * n, field)).insert(vectorize(y))[0]
        terms.append(nxt)
    return terms


@dataclass
class NilReport:
    """Everything computed about n(S) for one sequence."""

    shape: Shape
    seq: BlockSeq
    field: Field
    generators: list[Matrix]
    rho: int
    generator_rank: int
    basis: Subspace
    lcs_dims: list[int]
    degree: int
    graded_dims: dict[int, int]
    block_dims: dict[int, int]
    diagonal_graded: bool
    max_entry_bits: int
    components: dict = dc_field(default_factory=dict, repr=False)
    lcs: list = dc_field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def basis_matrices(self) -> list[Matrix]:
        return self.basis.matrices(self.shape.d)

    def lcs_quotient_dims(self) -> list[int]:
        """dim n^{m-1}/n^m for m = 1..degree."""
        return [a - b for a, b in zip(self.lcs_dims, self.lcs_dims[1:])]

    def to_json(self, include_basis: bool = False) -> dict:
        out = {
            "shape": list(self.shape.d_vec),
            "field": self.field.name,
            "rho": self.rho,
            "generator_rank": self.generator_rank,
            "dim": self.dim,
            "degree": self.degree,
            "lcs_dims": list(self.lcs_dims),
            "graded_dims": {str(t): c for t, c in sorted(self.graded_dims.items())},
            "block_dims": {str(b): c for b, c in sorted(self.block_dims.items())},
            "diagonal_graded": self.diagonal_graded,
            "max_entry_bits": self.max_entry_bits,
        }
        if include_basis:
            out["basis"] = [matrix_to_json(m) for m in self.basis_matrices()]
        return out


def generate_nilradical(seq: BlockSeq) -> NilReport:
    """Close the generator span under brackets and compute the lower central series."""
    shape, field = seq.shape, seq.field
    n = shape.d
    gens = generators(seq)
    keys = _grading_keys(gens)
    comps, active = _close(gens, keys, n, field)
    basis = _merge(comps, n * n, field)
    lcs_terms = _graded_lcs(comps, active, n, field)
    lcs_dims = [sum(sp.dim for sp in t.values()) for t in lcs_terms]
    block_dims: dict[int, int] = {}
    for (b, _), sp in comps.items():
        block_dims[b] = block_dims.get(b, 0) + sp.dim
    report = NilReport(
        shape=shape,
        seq=seq,
        field=field,
        generators=gens,
        rho=rho(shape),
        generator_rank=len(active),
        basis=basis,
        lcs_dims=lcs_dims,
        degree=len(lcs_dims) - 1,
        graded_dims=_pivot_offsets(basis, n),
        block_dims=block_dims,
        diagonal_graded=all(t is not None for _, t in comps),
        max_entry_bits=max_numerator_bits(v for r in basis.rows for v in r.values()),
        components=comps,
        lcs=[_merge(t, n * n, field) for t in lcs_terms],
    )
    if field.characteristic == 0 and report.generator_rank != report.rho + 1:
        log.warning("generators dependent in characteristic 0 for %s", shape)
    return report


def _pivot_offsets(basis: Subspace, n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in basis.pivots:
        t = coordinate_offset(p, n)
        out[t] = out.get(t, 0) + 1
    return out


def graded_dims(report: NilReport) -> dict[int, int]:
    """Diagonal degree t -> dimension of the degree-t piece of the diagonal filtration.

    For the canonical sequence n(S) is graded and these are the homogeneous
    components; in general they are the filtration quotients.
    """
    return dict(report.graded_dims)


def lie_closure(gens: Sequence[Matrix]) -> Subspace:
    """Lie subalgebra generated by arbitrary square matrices (no grading assumed)."""
    n = gens[0].rows
    comps, _ = _close(gens, [(None,)] * len(gens), n, gens[0].field)
    return comps.get((None,), Subspace(n * n, gens[0].field))


def lower_central_series(basis: Subspace, gens: Sequence[Matrix]) -> list[Subspace]:
    """n^0 = n, n^{i+1} = [n, n^i], ending with the zero subspace.

    Since the generators generate n, n^{i+1} is spanned by [g, x] with g a
    generator and x in a basis of n^i.
    """
    if not gens:
        return [basis, Subspace(basis.ambient_dim, basis.field)] if basis.dim else [basis]
    n = gens[0].rows
    mats = basis.matrices(n)
    for g in gens:
        if not basis.contains(vectorize(g)):
            raise ClosureError("generator outside the basis span")
        for x in mats:
            if not basis.contains(vectorize(bracket(g, x))):
                raise ClosureError("basis is not closed under brackets with the generators")
    terms = [basis]
    while terms[-1].dim:
        nxt = Subspace(basis.ambient_dim, basis.field)
        for x in terms[-1].matrices(n):
            for g in gens:
                nxt = nxt.insert(vectorize(bracket(g, x)))[0]
        terms.append(nxt)
    return terms


def nilpotency_degree(terms: Sequence[Subspace]) -> int:
    """min{m : n^m = 0} for a lower central series list."""
    return next(m for m, t in enumerate(terms) if t.dim == 0)


def closure_is_stable(report: NilReport) -> bool:
    """Re-closing the computed basis adds nothing."""
    mats = report.basis_matrices()
    return all(report.basis.contains(vectorize(bracket(a, b))) for a in mats for b in mats)


def derived_algebra(seq: BlockSeq, alpha=0, lam=1, report: NilReport | None = None) -> Subspace:
    """[h, h] for h = span{D(alpha, lam)} + n(S)."""
    report = report or generate_nilradical(seq)
    n = seq.shape.d
    d_mat = build_D(seq.shape, alpha, lam, seq.field)
    sp = report.lcs[1] if len(report.lcs) > 1 else Subspace(n * n, seq.field)
    for x in report.basis_matrices():
        sp = sp.insert(vectorize(bracket(d_mat, x)))[0]
    return sp


def h_basis(seq: BlockSeq, alpha=0, lam=0, report: NilReport | None = None) -> Subspace:
    """Span of D(alpha, lam) and n(S)."""
    report = report or generate_nilradical(seq)
    return report.basis.insert(vectorize(build_D(seq.shape, alpha, lam, seq.field)))[0]


# --------------------------------------------------------------------------
# Minimal ranks
# --------------------------------------------------------------------------


@dataclass
class RankTable:
    """r_{i,j} for 1 <= i < j <= k, with a homogeneous witness for each nonzero entry."""

    shape: Shape
    entries: dict[tuple[int, int], int]
    witnesses: dict[tuple[int, int], Matrix]
    probe_min: dict[tuple[int, int], int] = dc_field(default_factory=dict)
    discrepancies: list[tuple[int, int]] = dc_field(default_factory=list)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij]

    @property
    def r1k(self) -> int:
        return self.entries[1, self.shape.k]

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.d_vec),
            "entries": {f"{i},{j}": r for (i, j), r in sorted(self.entries.items())},
            "discrepancies": [f"{i},{j}" for i, j in self.discrepancies],
        }


def _min_weight(vectors: list[list], field: Field):
    """Minimum Hamming weight of a nonzero vector in span(vectors) and its coefficients."""
    length = len(vectors[0])
    for w in range(1, length + 1):
        for support in itertools.combinations(range(length), w):
            comp = [c for c in range(length) if c not in support]
            cols = [[v[c] for v in vectors] for c in comp]
            for y in nullspace(cols, len(vectors), field):
                combo = [sum((a * v[c] for a, v in zip(y, vectors)), field.zero) for c in range(length)]
                if any(combo):
                    return w, y
    return None, None


def _block_diagonal(shape: Shape, x: Matrix, i: int, j: int, offset: int) -> list:
    # entries of p_{i,j}(x) on the block diagonal s - r = offset, indexed by row r
    blk = block_project(shape, x, i, j)
    di, dj = shape.size(i), shape.size(j)
    rows = [r for r in range(di) if 0 <= r + offset < dj]
    return [blk[r, r + offset] for r in rows]


def rank_table(shape: Shape, field: Field = QQ, *, report: NilReport | None = None,
               probe_samples: int = 0, seed: int = 0) -> RankTable:
    """Minimal nonzero rank of each off-diagonal block over h(0, 0, C).

    Every X in n(C) is a sum of diagonal-homogeneous parts, and the lowest
    nonzero diagonal of p_{i,j}(X) contributes a triangular minor, so the
    minimum is attained on homogeneous elements.  For those p_{i,j}(X) sits on a
    single diagonal and its rank is its number of nonzero entries; the minimum
    per component is a minimum-weight codeword search.

    ``probe_samples`` > 0 additionally evaluates ranks of random inhomogeneous
    elements and records any block where they beat the homogeneous minimum.
    """
    if report is None:
        report = generate_nilradical(canonical_seq(shape, field))
    elif report.seq != canonical_seq(shape, report.field):
        raise UnsupportedError("rank_table is only defined for the canonical sequence")
    fld = report.field
    off = shape.offsets
    n = shape.d
    entries: dict[tuple[int, int], int] = {}
    witnesses: dict[tuple[int, int], Matrix] = {}
    for (b, t), sp in sorted(report.components.items()):
        mats = sp.matrices(n)
        for i in range(1, shape.k - b + 1):
            j = i + b
            # t = (global column) - (global row); within the block the offset is s - r
            offset = t - (off[j - 1] - off[i - 1])
            vecs = [_block_diagonal(shape, x, i, j, offset) for x in mats]
            if not vecs or not vecs[0] or not any(any(v) for v in vecs):
                continue
            w, y = _min_weight(vecs, fld)
            if w is not None and w < entries.get((i, j), 1 << 30):
                entries[i, j] = w
                wit = Matrix.zeros(n, n, fld)
                for a, x in zip(y, mats):
                    if a:
                        wit = wit + x.scale(a)
                witnesses[i, j] = wit
    for i in range(1, shape.k):
        for j in range(i + 1, shape.k + 1):
            entries.setdefault((i, j), 0)
    table = RankTable(shape, entries, witnesses)
    if probe_samples:
        _probe(table, report, probe_samples, seed)
    return table


def _probe(table: RankTable, report: NilReport, samples: int, seed: int):
    rng = np.random.Generator(np.random.Philox(key=seed))
    mats = report.basis_matrices()
    fld, shape = report.field, report.shape
    for _ in range(samples):
        x = Matrix.zeros(shape.d, shape.d, fld)
        for m in mats:
            c = int(rng.integers(-3, 4))
            if c:
                x = x + m.scale(c)
        for (i, j), r in table.entries.items():
            blk = block_project(shape, x, i, j)
            if blk.is_zero():
                continue
            rk = rank(blk)
            table.probe_min[i, j] = min(table.probe_min.get((i, j), rk), rk)
            if r == 0 or rk < r:
                table.discrepancies.append((i, j))


def antidiagonal_vanishes(report: NilReport, alpha=0, lam=0) -> bool:
    """A[i, d+1-i] = 0 for i <= (d-1)/2 on every basis element of h."""
    n = report.shape.d
    h = h_basis(report.seq, alpha, lam, report)
    return all(not m[i, n - 1 - i] for m in h.matrices(n) for i in range((n - 1) // 2))


def corner_vanishes(report: NilReport) -> bool:
    """A[1, d] = 0 for every basis element of n(S)."""
    n = report.shape.d
    return all(not m[0, n - 1] for m in report.basis_matrices())


__all__ = [
    "ClosureError",
    "NilReport",
    "RankTable",
    "UnsupportedError",
    "antidiagonal_vanishes",
    "closure_is_stable",
    "corner_vanishes",
    "derived_algebra",
    "generate_nilradical",
    "generators",
    "graded_dims",
    "h_basis",
    "lower_central_series",
    "nilpotency_degree",
    "rank_table",
    "rho",
]
