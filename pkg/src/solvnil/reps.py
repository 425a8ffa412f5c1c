"""Uniserial representations R_{d,alpha,S} of g_{n,lambda} = <x> + L(V) and their
passage to the truncations g_{n,lambda,ell}.

A representation is stored through the images of x and of the basis
v_0, ..., v_{n-1} of V; the free Lie algebra itself is never materialized.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator

from .blockstruct import (
    AdmissibilityError,
    BlockSeq,
    Shape,
    build_D,
    build_E,
    is_odd_symmetric,
    is_phi_invariant,
    normalize_seq,
    random_seq,
)
from .exactla import Matrix, Subspace, bracket, matrix_to_json, vectorize
from .nilradical import generate_nilradical, lie_closure
from .theory import is_extreme_type


class RepresentationError(ValueError):
    """The requested representation data is inconsistent."""


def max_adjacent_sum(shape: Shape) -> int:
    dv = shape.d_vec
    return max(dv[i] + dv[i + 1] for i in range(shape.k - 1))


def _shift(x_img: Matrix, y: Matrix, lam) -> Matrix:
    # (ad R(x) - lambda) y
    return bracket(x_img, y) - y.scale(lam)


@dataclass(frozen=True)
class RepSpec:
    n: int
    lam: object
    alpha: object
    seq: BlockSeq
    x_image: Matrix
    v_images: tuple[Matrix, ...]

    @property
    def shape(self) -> Shape:
        return self.seq.shape

    @property
    def ell(self) -> int:
        return self.shape.k - 1

    def to_json(self, include_images: bool = False) -> dict:
        f = self.seq.field.format
        out = {"n": self.n, "lambda": f(self.lam), "alpha": f(self.alpha),
               "d": list(self.shape.d_vec), "seq": self.seq.to_json()}
        if include_images:
            out["images"] = {"x": matrix_to_json(self.x_image),
                             "v": [matrix_to_json(m) for m in self.v_images]}
        return out


def build_rep(n: int, lam, alpha, seq: BlockSeq) -> RepSpec:
    """R(x) = D(alpha, lam), R(v_j) = (ad D(alpha, lam) - lam)^j E(S).

    Raises AdmissibilityError if max(d_i + d_{i+1}) > n + 1, since then the
    relation (x - lam)^n v_0 = 0 cannot hold in the image.
    """
    if n < 1:
        raise RepresentationError("n must be positive")
    shape, field = seq.shape, seq.field
    if max_adjacent_sum(shape) > n + 1:
        raise AdmissibilityError(
            f"max(d_i + d_(i+1)) = {max_adjacent_sum(shape)} exceeds n + 1 = {n + 1}")
    lam, alpha = field(lam), field(alpha)
    x_img = build_D(shape, alpha, lam, field)
    v = [build_E(seq)]
    for _ in range(n - 1):
        v.append(_shift(x_img, v[-1], lam))
    if _shift(x_img, v[-1], lam):
        raise RepresentationError("(ad R(x) - lambda)^n R(v_0) does not vanish")
    return RepSpec(n, lam, alpha, seq, x_img, tuple(v))


def relations_hold(rep: RepSpec) -> bool:
    """[R(x), R(v_j)] = lam R(v_j) + R(v_{j+1}) for j < n-1 and [R(x), R(v_{n-1})] = lam R(v_{n-1})."""
    v = rep.v_images
    for j in range(rep.n):
        rhs = v[j].scale(rep.lam)
        if j + 1 < rep.n:
            rhs = rhs + v[j + 1]
        if bracket(rep.x_image, v[j]) != rhs:
            return False
    return True


def top_power_vanishes(rep: RepSpec) -> bool:
    return not _shift(rep.x_image, rep.v_images[-1], rep.lam)


def verify_uniserial(rep: RepSpec) -> bool:
    """Every superdiagonal position is nonzero in R(x) or in R(v_0)."""
    x, e = rep.x_image, rep.v_images[0]
    return all(x[i, i + 1] or e[i, i + 1] for i in range(rep.shape.d - 1))


def image_algebra(rep: RepSpec) -> Subspace:
    """Lie algebra generated by R(x) and the R(v_j)."""
    return lie_closure([rep.x_image, *rep.v_images])


def quotient_level(rep: RepSpec) -> int:
    """Nilpotency degree of n(S): the ell for which the representation is a
    relatively faithful g_{n,lambda,ell}-module."""
    if not rep.lam:
        raise RepresentationError("classification statements need lambda != 0")
    return generate_nilradical(rep.seq).degree


def distinct_normal_forms(rep_a: RepSpec, rep_b: RepSpec) -> bool:
    """True iff the two representations are non-isomorphic, decided by comparing normal forms."""
    if not rep_a.lam or not rep_b.lam:
        raise RepresentationError("classification statements need lambda != 0")

    def key(rep):
        return (rep.n, rep.lam, rep.alpha, rep.shape, normalize_seq(rep.seq).seq)

    return key(rep_a) != key(rep_b)


# --------------------------------------------------------------------------
# Classification data
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassRecord:
    k: int
    shape: Shape
    extreme: bool
    ell: int | None
    mode: str
    seq_constraint: str = "any"

    def to_json(self) -> dict:
        return {"k": self.k, "shape": list(self.shape.d_vec), "ell": self.ell,
                "extreme": self.extreme, "mode": self.mode, "seq_constraint": self.seq_constraint}


def compositions(total: int, n: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into >= 2 parts with max adjacent sum exactly n + 1."""
    cap = n + 1

    def rec(prefix: list[int], left: int):
        if left == 0:
            if len(prefix) >= 2 and max(a + b for a, b in zip(prefix, prefix[1:])) == cap:
                yield tuple(prefix)
            return
        for x in range(1, min(left, cap - 1) + 1):
            if prefix and prefix[-1] + x > cap:
                continue
            prefix.append(x)
            yield from rec(prefix, left - x)
            prefix.pop()

    yield from rec([], total)


def _extreme_shape(shape: Shape) -> bool:
    return is_odd_symmetric(shape) and shape.d_vec[0] == 1 and shape.d_vec[-1] == 1


def enumerate_shapes(n: int, dim_total: int, ell: int | None = None) -> list[ClassRecord]:
    """Shapes carrying normalized uniserial representations.

    With ``ell`` None this lists every shape for g_{n,lambda}; otherwise the
    shapes of relatively faithful g_{n,lambda,ell}-modules: k = ell + 1 (for
    even ell excluding phi-invariant S on extreme shapes), plus, for odd ell,
    extreme shapes with k = ell + 2 carrying phi-invariant S.
    """
    if n < 2 or dim_total < 2:
        raise ValueError("need n >= 2 and dim_total >= 2")
    out = []
    for dv in compositions(dim_total, n):
        shape = Shape(dv)
        k = shape.k
        if ell is None:
            out.append(ClassRecord(k, shape, False, None, "free_alg"))
            continue
        mode = f"ell_step({ell})"
        if k == ell + 1:
            constraint = "not_phi_invariant" if ell % 2 == 0 and _extreme_shape(shape) else "any"
            out.append(ClassRecord(k, shape, False, ell, mode, constraint))
        elif ell % 2 == 1 and k == ell + 2 and _extreme_shape(shape):
            out.append(ClassRecord(k, shape, True, ell, mode, "phi_invariant"))
    return sorted(out, key=lambda r: (r.k, r.shape.d_vec))


def sample_seq(record: ClassRecord, seed: int = 0, entry_bound: int = 3) -> BlockSeq:
    """A normalized sequence of the kind the record asks for."""
    if record.seq_constraint == "phi_invariant":
        return random_seq(record.shape, seed, entry_bound, "normalized_phi_invariant")
    for attempt in range(64):
        seq = random_seq(record.shape, seed + 1000 * attempt, entry_bound, "normalized")
        if record.seq_constraint != "not_phi_invariant" or not is_phi_invariant(seq):
            return seq
    raise RepresentationError(f"could not sample a non-phi-invariant sequence on {record.shape}")


def records_to_csv(records: list[ClassRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "shape", "ell", "extreme", "mode"])
    for r in records:
        w.writerow([r.k, ",".join(map(str, r.shape.d_vec)), "" if r.ell is None else r.ell,
                    str(r.extreme).lower(), r.mode])
    return buf.getvalue()


def rep_is_extreme(rep: RepSpec) -> bool:
    return is_extreme_type(rep.seq)


def image_matches_h(rep: RepSpec) -> bool:
    """The image algebra equals span{D(alpha, lam)} + n(S)."""
    report = generate_nilradical(rep.seq)
    h = report.basis.insert(vectorize(rep.x_image))[0]
    return image_algebra(rep) == h
