"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the summary lines are
printed at the end of the session) or ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import pytest

from solvnil.blockstruct import (
    Shape,
    canonical_seq,
    is_odd_symmetric,
    is_phi_invariant,
    is_symmetric,
    normalize_seq,
    random_group_elem,
    random_seq,
)
from solvnil.exactla import GF, Matrix, Subspace, vectorize
from solvnil.nilradical import corner_vanishes, generate_nilradical, rank_table
from solvnil.reps import (
    build_rep,
    enumerate_shapes,
    quotient_level,
    relations_hold,
    sample_seq,
    top_power_vanishes,
    verify_uniserial,
)
from solvnil.sweep import shape_family
from solvnil.theory import (
    free_check,
    predict_degree,
    predict_degree_canonical,
    predict_r1k,
    witt_dim,
)

RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line)


@pytest.fixture(scope="module")
def family():
    """Canonical reports, rank tables and free profiles for the bounded family."""
    out = []
    for shape in shape_family(2, 6, 4, 14):
        rep = generate_nilradical(canonical_seq(shape))
        out.append((shape, rep, rank_table(shape, report=rep), free_check(rep.seq, rep)))
    return out


# ---- 1 ------------------------------------------------------------------------------

def test_criterion_1_canonical_degree(family):
    bad = [s.d_vec for s, rep, _, _ in family if rep.degree != predict_degree_canonical(s).predicted_degree]
    report(1, not bad, f"{len(family)} shapes, {len(bad)} disagreements")
    assert not bad


# ---- 2 ------------------------------------------------------------------------------

def test_criterion_2_r1k(family):
    bad_r1k = [s.d_vec for s, _, t, _ in family if t.r1k != predict_r1k(s)]
    bad_adj = [s.d_vec for s, _, t, _ in family if any(t[i, i + 1] != 1 for i in range(1, s.k))]
    bad_rng = [s.d_vec for s, _, t, _ in family if not set(t.entries.values()) <= {0, 1, 2}]
    ok = not (bad_r1k or bad_adj or bad_rng)
    report(2, ok, f"{len(family)} shapes; r1k {len(bad_r1k)}, adjacent {len(bad_adj)}, "
                  f"range {len(bad_rng)} disagreements")
    assert ok


# ---- 3 ------------------------------------------------------------------------------

EXTREME_SHAPES = [(1, 3, 1), (1, 2, 1, 2, 1), (1, 4, 1, 4, 1), (1, 1, 3, 1, 1)]
ASYMMETRIC_SHAPES = [(1, 2, 2), (2, 1, 3), (1, 3, 2, 2), (3, 1, 1, 2, 1)]


def _generic(shape: Shape, seed: int):
    """A normalized sequence that is not phi-invariant (small shapes hit invariance by chance)."""
    for attempt in range(64):
        g = random_seq(shape, seed + 7919 * attempt, 3, "normalized")
        if not is_phi_invariant(g):
            return g
    raise AssertionError(f"no generic sequence found on {shape}")


def test_criterion_3_general_S():
    bad, count = [], 0
    for d in EXTREME_SHAPES:
        shape = Shape(d)
        assert is_odd_symmetric(shape) and d[0] == d[-1] == 1
        for i in range(20):
            t = random_seq(shape, i, 3, "normalized_phi_invariant")
            g = _generic(shape, i)
            assert is_phi_invariant(t) and not is_phi_invariant(g)
            for seq, want in ((t, shape.k - 2), (g, shape.k - 1)):
                count += 1
                if generate_nilradical(seq).degree != want:
                    bad.append((d, seq.dumps()))
    for d in ASYMMETRIC_SHAPES:
        shape = Shape(d)
        for i in range(20):
            s = random_seq(shape, i, 4, "none")
            count += 1
            if generate_nilradical(s).degree != shape.k - 1:
                bad.append((d, s.dumps()))
    report(3, not bad, f"{count} samples, {len(bad)} disagreements")
    assert not bad


# ---- 4 ------------------------------------------------------------------------------

def test_criterion_4_weakly_normalized_corner():
    shapes = [s for s in shape_family(3, 5, 4, 14) if s.k in (3, 5) and is_odd_symmetric(s)]
    bad, n_phi, n_gen = [], 0, 0
    for shape in shapes:
        for i in range(2):
            for constraint in ("weakly_normalized_phi_invariant", "weakly_normalized"):
                s = random_seq(shape, i, 4, constraint)
                phi = is_phi_invariant(s)
                n_phi += phi
                n_gen += not phi
                if corner_vanishes(generate_nilradical(s)) != phi:
                    bad.append(s.dumps())
    ok = not bad and n_phi >= 40 and n_gen >= 40
    report(4, ok, f"{len(shapes)} shapes, {n_phi} phi-invariant and {n_gen} other samples, "
                  f"{len(bad)} exceptions")
    assert ok


# ---- 5 ------------------------------------------------------------------------------

def _theorem_free_list(d: tuple[int, ...], t_phi: bool) -> bool:
    """The six free cases, with (1, d, 1) read as d odd."""
    k = len(d)
    if set(d) == {1}:
        return True
    if k == 3 and d[0] == d[2] == 1 and d[1] % 2 == 1 and t_phi:
        return True
    if k == 3:
        for m in range(2, 7):
            if d in ((m, 1, m), (m - 1, 2, m - 1), (m, 1, m - 1), (m - 1, 1, m)):
                return True
    if d in ((2, 1, 1, 2), (2, 1, 2, 1), (1, 2, 1, 2)):
        return True
    if d == (1, 2, 1, 2, 1) and t_phi:
        return True
    return d == (2, 1, 2, 1, 2)


def test_criterion_5_free_classification(family):
    checks = []
    t = random_seq(Shape((1, 2, 1, 2, 1)), 0, 3, "normalized_phi_invariant")
    checks.append(free_check(t).quotient_dims == [2, 1, 2])
    p = free_check(canonical_seq(Shape((2, 1, 2, 1, 2))))
    checks.append(p.quotient_dims == [2, 1, 2, 3] and p.verdict == "free")
    for d in [(2, 1, 1, 2), (2, 1, 2, 1), (1, 2, 1, 2)]:
        p = free_check(canonical_seq(Shape(d)))
        checks.append(p.verdict == "free" and (p.rho_gen, p.N) == (2, 3))
    for m in (2, 3, 4):
        for d in [(m, 1, m), (m - 1, 2, m - 1), (m, 1, m - 1), (m - 1, 1, m)]:
            p = free_check(canonical_seq(Shape(d)))
            checks.append(p.verdict == "free" and p.N == 2 and p.rho_gen == m)
    p = free_check(canonical_seq(Shape((3, 1, 1, 3))))
    checks.append(p.verdict == "not_free" and p.report.lcs_dims[2] < 8 == witt_dim(3, 3))
    listed_ok = all(checks)

    disagree = []
    for shape, _, _, prof in family:
        t_phi = is_symmetric(shape) and is_phi_invariant(normalize_seq(prof.report.seq).seq)
        expected = "free" if _theorem_free_list(shape.d_vec, t_phi) else "not_free"
        if prof.verdict != expected:
            disagree.append(shape.d_vec)
    two_block = [d for d in disagree if len(d) == 2]
    other = [d for d in disagree if len(d) != 2]

    ok = listed_ok and not disagree
    detail = (f"listed cases {'ok' if listed_ok else 'WRONG'}; {len(family)} family shapes, "
              f"{len(other)} disagreements with k >= 3")
    if two_block:
        detail += (f"; {len(two_block)} two-block shapes such as {two_block[0]} compute as free abelian "
                   f"(N = 1) although the criterion lists them as not free")
    report(5, ok, detail)
    assert listed_ok and not other
    # every two-block shape (a, b) gives an abelian n(S) on a + b - 1 independent generators
    assert all(free_check(canonical_seq(Shape(d))).quotient_dims == [sum(d) - 1] for d in two_block)
    if two_block:
        pytest.xfail("criterion 5 as worded is false for two-block shapes; see decisions ledger")


# ---- 6 ------------------------------------------------------------------------------

def test_criterion_6_witt():
    ok = (witt_dim(2, 3) == 2 and witt_dim(3, 3) == 8 and witt_dim(2, 4) == 3
          and all(witt_dim(g, 1) == g for g in range(1, 7)))
    report(6, ok, "witt_dim(2,3), witt_dim(3,3), witt_dim(2,4), witt_dim(g,1) for g <= 6")
    assert ok


# ---- 7 ------------------------------------------------------------------------------

def _displayed_basis_23232():
    """The eight displayed F_2 basis matrices for (2,3,2,3,2), block by block."""
    shape = Shape((2, 3, 2, 3, 2))
    specs = [
        {(1, 2): [[0, 0, 0], [1, 0, 0]], (2, 3): [[0, 0], [0, 0], [1, 0]],
         (3, 4): [[0, 0, 0], [1, 0, 0]], (4, 5): [[0, 0], [0, 0], [1, 0]]},
        {(1, 2): [[1, 0, 0], [0, 1, 0]], (2, 3): [[0, 0], [1, 0], [0, 1]],
         (3, 4): [[1, 0, 0], [0, 1, 0]], (4, 5): [[0, 0], [1, 0], [0, 1]]},
        {(1, 2): [[0, 0, 0], [0, 0, 1]], (2, 3): [[1, 0], [0, 0], [0, 0]],
         (3, 4): [[0, 0, 0], [0, 0, 1]], (4, 5): [[1, 0], [0, 0], [0, 0]]},
        {(1, 2): [[0, 0, 1], [0, 0, 0]], (2, 3): [[0, 1], [0, 0], [0, 0]],
         (3, 4): [[0, 0, 1], [0, 0, 0]], (4, 5): [[0, 1], [0, 0], [0, 0]]},
        {(1, 3): [[1, 0], [0, 1]], (2, 4): [[1, 0, 0], [0, 0, 0], [0, 0, 1]], (3, 5): [[1, 0], [0, 1]]},
        {(2, 4): [[0, 1, 0], [0, 0, 1], [0, 0, 0]]},
        {(1, 4): [[0, 0, 0], [0, 1, 0]], (2, 5): [[0, 0], [1, 0], [0, 0]]},
        {(1, 4): [[0, 1, 0], [0, 0, 1]], (2, 5): [[1, 0], [0, 1], [0, 0]]},
    ]
    off, f2 = shape.offsets, GF(2)
    mats = []
    for spec in specs:
        nz = {}
        for (i, j), blk in spec.items():
            for r, row in enumerate(blk):
                for c, v in enumerate(row):
                    if v:
                        nz[off[i - 1] + r, off[j - 1] + c] = f2(v)
        mats.append(Matrix(shape.d, shape.d, f2, nz))
    return shape, mats


def test_criterion_7_char_p():
    bad = []
    for p in (2, 3, 5):
        for k in range(2, 6):
            r = generate_nilradical(canonical_seq(Shape((p,) * k), GF(p)))
            if r.degree != 1:
                bad.append((p, k, r.degree))
    shape, mats = _displayed_basis_23232()
    r = generate_nilradical(canonical_seq(shape, GF(2)))
    displayed = Subspace.span([vectorize(m) for m in mats], shape.d ** 2, GF(2))
    match = displayed.dim == 8 and displayed == r.basis
    ok = not bad and r.dim == 8 and r.degree == 3 and match
    report(7, ok, f"12 constant-p shapes with {len(bad)} non-abelian; (2,3,2,3,2) over F2 "
                  f"dim {r.dim}, degree {r.degree}, displayed basis {'matches' if match else 'differs'}")
    assert ok


# ---- 8 ------------------------------------------------------------------------------

def test_criterion_8_representations():
    count, bad = 0, []
    three = enumerate_shapes(2, 4)
    for n in (2, 3, 4):
        for dim in range(2, 9):
            modes = [None] + list(range(1, 6))
            for ell in modes:
                for rec in enumerate_shapes(n, dim, ell):
                    seq = sample_seq(rec, seed=count) if ell else random_seq(rec.shape, count, 3, "normalized")
                    rep = build_rep(n, 1, 0, seq)
                    count += 1
                    level = quotient_level(rep)
                    ok = (relations_hold(rep) and top_power_vanishes(rep) and verify_uniserial(rep)
                          and level == predict_degree(seq).predicted_degree
                          and (ell is None or level == ell))
                    if not ok:
                        bad.append((n, rec.shape.d_vec, ell))
    ok = not bad and len(three) == 3
    report(8, ok, f"{count} representations, {len(bad)} failures; n=2 dim 4 gives {len(three)} shapes")
    assert ok


# ---- 9 ------------------------------------------------------------------------------

NORMALIZATION_SHAPES = [(1, 2, 1), (2, 3, 2), (3, 1, 2), (1, 3, 1), (2, 2, 2, 2), (3, 5, 3, 4),
                        (1, 2, 1, 2, 1), (4, 1, 3), (2, 1, 1, 3, 1), (1, 4)]


def test_criterion_9_normalization():
    count, bad = 0, []
    for d in NORMALIZATION_SHAPES:
        shape = Shape(d)
        for i in range(12):
            s = random_seq(shape, i, 4, "none")
            p = random_group_elem(shape, 1000 + i, 4)
            conj = p.conjugate(s)
            count += 1
            same = normalize_seq(conj).seq.dumps() == normalize_seq(s).seq.dumps()
            deg = generate_nilradical(conj).degree == generate_nilradical(s).degree
            if not (same and deg):
                bad.append((d, i))
    ok = not bad and count >= 100
    report(9, ok, f"{count} (shape, S, P) triples, {len(bad)} failures")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
