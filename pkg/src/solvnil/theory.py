"""Closed-form predictions: nilpotency degrees, r_{1,k}, Witt dimensions and
the classification of the free nilpotent cases.

These functions never build matrices, except :func:`free_check` which
compares a computed lower central series against the Witt dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .blockstruct import (
    BlockSeq,
    Shape,
    is_all_ones,
    is_odd_symmetric,
    is_phi_invariant,
    is_symmetric,
    normalize_seq,
)
from .nilradical import NilReport, generate_nilradical


class CharacteristicError(ValueError):
    """The statement being checked only holds in characteristic 0."""


def _ends_are_one(shape: Shape) -> bool:
    return shape.d_vec[0] == 1 and shape.d_vec[-1] == 1


@dataclass(frozen=True)
class DegreePrediction:
    shape: Shape
    predicted_degree: int
    case_tag: str
    normalized_seq: BlockSeq | None = None

    def to_json(self) -> dict:
        return {"shape": list(self.shape.d_vec), "predicted_degree": self.predicted_degree,
                "case": self.case_tag}


def predict_degree_canonical(shape: Shape) -> DegreePrediction:
    """Nilpotency degree of n(C): k-1, except 1 for all-ones shapes and k-2 for
    odd-symmetric shapes with d_1 = d_k = 1."""
    k = shape.k
    if is_all_ones(shape):
        return DegreePrediction(shape, 1, "all_ones")
    if is_odd_symmetric(shape) and _ends_are_one(shape):
        return DegreePrediction(shape, k - 2, "odd_symmetric_phi_invariant")
    return DegreePrediction(shape, k - 1, "generic")


def predict_degree(seq: BlockSeq) -> DegreePrediction:
    """Same trichotomy for an arbitrary admissible S, decided on its normal form T."""
    if seq.field.characteristic != 0:
        raise CharacteristicError("degree predictions hold only in characteristic 0; use the char-p sweep")
    shape = seq.shape
    t = normalize_seq(seq).seq
    if is_all_ones(shape):
        return DegreePrediction(shape, 1, "all_ones", t)
    if is_odd_symmetric(shape) and _ends_are_one(shape) and is_phi_invariant(t):
        return DegreePrediction(shape, shape.k - 2, "odd_symmetric_phi_invariant", t)
    return DegreePrediction(shape, shape.k - 1, "generic", t)


def predict_r1k(shape: Shape) -> int:
    """r_{1,k} for the canonical sequence."""
    if shape.k == 2:
        # the corner of E itself sits in block (1, 2)
        return 1
    if is_all_ones(shape):
        return 0
    if is_odd_symmetric(shape):
        return 0 if _ends_are_one(shape) else 2
    return 1


def mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def witt_dim(g: int, m: int) -> int:
    """Dimension of the degree-m part of the free Lie algebra on g generators."""
    if g < 1 or m < 1:
        raise ValueError("need g >= 1 and m >= 1")
    total = sum(mobius(s) * g ** (m // s) for s in range(1, m + 1) if m % s == 0)
    q, r = divmod(total, m)
    assert r == 0
    return q


def free_generator_count(shape: Shape) -> int:
    """max(d_i + d_{i+1}) - 1, the number of generators E^(0..rho)."""
    dv = shape.d_vec
    return max(dv[i] + dv[i + 1] for i in range(shape.k - 1)) - 1


def predict_free(shape: Shape, t_phi_invariant: bool) -> tuple[bool, tuple[int, int] | None]:
    """Whether n(S) is free nilpotent, given whether the normal form is phi-invariant.

    Returns (verdict, (generators, steps)).
    """
    dv, k = shape.d_vec, shape.k
    if is_all_ones(shape):
        return True, (1, 1)
    if k == 2:
        # a single off-diagonal block: n(S) is abelian on its d_1 + d_2 - 1 generators
        return True, (dv[0] + dv[1] - 1, 1)
    if k == 3 and dv[0] == dv[2] == 1 and dv[1] % 2 == 1 and t_phi_invariant:
        return True, (dv[1], 1)
    if k == 3:
        a, b, c = dv
        for d in range(2, max(dv) + 2):
            if (a, b, c) in ((d, 1, d), (d - 1, 2, d - 1), (d, 1, d - 1), (d - 1, 1, d)):
                return True, (d, 2)
    if dv in ((2, 1, 1, 2), (2, 1, 2, 1), (1, 2, 1, 2)):
        return True, (2, 3)
    if dv == (1, 2, 1, 2, 1) and t_phi_invariant:
        return True, (2, 3)
    if dv == (2, 1, 2, 1, 2):
        return True, (2, 4)
    return False, None


@dataclass
class FreeProfile:
    shape: Shape
    rho_gen: int
    N: int
    quotient_dims: list[int]
    witt_dims: list[int]
    verdict: str
    failing_degree: int | None
    predicted_verdict: str
    predicted_params: tuple[int, int] | None
    t_phi_invariant: bool
    report: NilReport | None = dc_field(default=None, repr=False)

    @property
    def agrees(self) -> bool:
        return self.verdict == self.predicted_verdict

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.d_vec),
            "rho_gen": self.rho_gen,
            "N": self.N,
            "quotient_dims": self.quotient_dims,
            "witt_dims": self.witt_dims,
            "verdict": self.verdict,
            "failing_degree": self.failing_degree,
            "predicted_verdict": self.predicted_verdict,
            "predicted_params": list(self.predicted_params) if self.predicted_params else None,
        }


def free_check(seq: BlockSeq, report: NilReport | None = None) -> FreeProfile:
    """Compare the lower central series of n(S) with the free nilpotent algebra
    on max(d_i + d_{i+1}) - 1 generators, and with the predicted verdict."""
    if seq.field.characteristic != 0:
        raise CharacteristicError("free_check is only meaningful in characteristic 0")
    report = report or generate_nilradical(seq)
    g = free_generator_count(seq.shape)
    n_steps = report.degree
    quotients = report.lcs_quotient_dims()
    witt = [witt_dim(g, m) for m in range(1, n_steps + 1)]
    failing = next((m + 1 for m, (a, b) in enumerate(zip(quotients, witt)) if a != b), None)
    t_phi = is_symmetric(seq.shape) and is_phi_invariant(normalize_seq(seq).seq)
    pred, params = predict_free(seq.shape, t_phi)
    return FreeProfile(
        shape=seq.shape,
        rho_gen=g,
        N=n_steps,
        quotient_dims=quotients,
        witt_dims=witt,
        verdict="free" if failing is None else "not_free",
        failing_degree=failing,
        predicted_verdict="free" if pred else "not_free",
        predicted_params=params,
        t_phi_invariant=t_phi,
        report=report,
    )


def is_extreme_type(seq: BlockSeq) -> bool:
    """Odd-symmetric shape with d_1 = d_k = 1 and a phi-invariant sequence."""
    return (is_odd_symmetric(seq.shape) and _ends_are_one(seq.shape)
            and is_phi_invariant(seq))
