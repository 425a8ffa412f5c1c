from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from solvnil.blockstruct import (
    AdmissibilityError,
    BlockSeq,
    ConstraintError,
    GroupElem,
    NormalizationError,
    Shape,
    block_degree,
    block_project,
    build_D,
    build_E,
    canonical_seq,
    ddeg,
    diag_component,
    is_normalized,
    is_odd_symmetric,
    is_phi_invariant,
    is_symmetric,
    is_weakly_normalized,
    normalize_seq,
    phi_map,
    random_group_elem,
    random_seq,
    seq_from_rows,
)
from solvnil.exactla import GF, Matrix, bracket
from solvnil.nilradical import generate_nilradical

shapes = st.lists(st.integers(1, 4), min_size=2, max_size=4).map(lambda d: Shape(tuple(d)))
sym_shapes = st.lists(st.integers(1, 3), min_size=1, max_size=2).flatmap(
    lambda half: st.sampled_from([half + half[::-1], half + [1] + half[::-1], half + [3] + half[::-1]])
).filter(lambda d: len(d) >= 2).map(lambda d: Shape(tuple(d)))


def E(n, i, j):
    return Matrix.unit(n, i - 1, j - 1)


# ---- shapes ---------------------------------------------------------------------

def test_shape_parse_and_offsets():
    s = Shape.parse("3,5,3,4")
    assert s.k == 4 and s.d == 15
    assert s.offsets == (0, 3, 8, 11, 15)
    assert s.block_of(7) == 2 and s.block_of(8) == 3


@pytest.mark.parametrize("bad", [(1,), (1, 0), ()])
def test_shape_rejects(bad):
    with pytest.raises(ValueError):
        Shape(bad)


@pytest.mark.parametrize("d,sym,odd", [((1, 2, 1, 2, 1), True, True), ((1, 2, 1), True, False),
                                       ((2, 3, 2), True, True), ((1, 2, 2), False, False),
                                       ((2, 2), True, False)])
def test_symmetry_predicates(d, sym, odd):
    assert is_symmetric(Shape(d)) is sym
    assert is_odd_symmetric(Shape(d)) is odd


# ---- D, E, projections --------------------------------------------------------

def test_build_D_examples():
    assert build_D(Shape((1, 1)), 0, 1).to_rows() == [[0, 0], [0, -1]]
    assert build_D(Shape((2, 2))) == E(4, 1, 2) + E(4, 3, 4)
    a, l = Fraction(2, 3), Fraction(5)
    d = build_D(Shape((3, 5, 3, 4)), a, l)
    diag = [d[i, i] for i in range(15)]
    assert diag == [a] * 3 + [a - l] * 5 + [a - 2 * l] * 3 + [a - 3 * l] * 4


def test_build_E_examples():
    s = seq_from_rows(Shape((1, 1)), [[[1]]])
    assert build_E(s) == E(2, 1, 2)
    assert build_E(canonical_seq(Shape((1, 2, 1)))) == E(4, 1, 2) + E(4, 3, 4)


def test_block_project_examples():
    shape = Shape((1, 2, 1))
    e = build_E(canonical_seq(shape))
    assert block_project(shape, e, 1, 2).to_rows() == [[1, 0]]
    assert all(block_project(shape, e, r, r).is_zero() for r in (1, 2, 3))
    assert block_project(shape, build_D(shape, 1, 2), 1, 3).is_zero()


def test_diag_component_examples():
    a = Matrix.from_rows([[1, 0], [0, 2]])
    assert diag_component(a, 0) == a
    assert diag_component(E(2, 1, 2) + E(2, 2, 1), 1) == E(2, 1, 2)
    assert ddeg(build_E(canonical_seq(Shape((1, 2, 1))))) == 1
    assert ddeg(Matrix.zeros(3)) is None


def test_block_degree():
    shape = Shape((1, 2, 1))
    assert block_degree(shape, build_E(canonical_seq(shape))) == 1
    assert block_degree(shape, build_D(shape)) == 0


@given(shapes, st.integers(0, 10_000))
def test_degree_bookkeeping(shape, seed):
    # a homogeneous element of D_t has all (p_ij)_{r,s} entries at t = d_i+..+d_{j-1} + (s-r)
    report = generate_nilradical(canonical_seq(shape))
    off = shape.offsets
    for x in report.basis_matrices()[:6]:
        t = ddeg(x)
        if diag_component(x, t) != x:
            continue
        for i in range(1, shape.k + 1):
            for j in range(i + 1, shape.k + 1):
                for (r, s), _ in block_project(shape, x, i, j).items():
                    assert t == off[j - 1] - off[i - 1] + (s - r)


# ---- phi --------------------------------------------------------------------

@given(st.integers(1, 5), st.data())
def test_phi_involution_and_automorphism(n, data):
    ent = st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)
    a = Matrix.from_rows(data.draw(ent))
    b = Matrix.from_rows(data.draw(ent))
    assert phi_map(phi_map(a)) == a
    assert phi_map(bracket(a, b)) == bracket(phi_map(a), phi_map(b))
    for t in range(-n + 1, n):
        assert diag_component(phi_map(a), t) == phi_map(diag_component(a, t))


@given(sym_shapes)
def test_phi_fixes_D(shape):
    d = build_D(shape)
    assert phi_map(d) == d


# ---- sequences ----------------------------------------------------------------

def test_canonical_examples():
    assert canonical_seq(Shape((1, 1)))[1].to_rows() == [[1]]
    assert canonical_seq(Shape((2, 3)))[1].to_rows() == [[0, 0, 0], [1, 0, 0]]


@given(shapes)
def test_canonical_is_normalized(shape):
    c = canonical_seq(shape)
    assert is_normalized(c) and is_weakly_normalized(c)


def test_scaled_canonical_not_normalized():
    shape = Shape((1, 2, 1))
    c = canonical_seq(shape)
    s = BlockSeq(shape, (c[1].scale(2), c[2]))
    assert not is_normalized(s) and not is_weakly_normalized(s)


def _starred(a, b, free):
    # a normalized sequence on (3,5,3,4) with corner-chain values a_j, b_j and free '*' entries
    it = iter(free)
    s1 = [[0] + [next(it) for _ in range(4)] for _ in range(2)] + [[1, a[2], a[3], a[4], a[5]]]
    s2 = [[a[6 - r], next(it), next(it)] for r in range(1, 5)] + [[1, b[2], b[3]]]
    s3 = [[b[3], next(it), next(it), next(it)], [b[2], next(it), next(it), next(it)], [1, 0, 0, 0]]
    return seq_from_rows(Shape((3, 5, 3, 4)), [s1, s2, s3])


def test_worked_example_pattern_is_normalized():
    a = {j: j - 7 for j in range(2, 6)}
    b = {2: 5, 3: Fraction(1, 3)}
    s = _starred(a, b, range(100, 140))
    assert is_normalized(s)
    e = build_E(s)
    # row 3 of E carries (1, a2, .., a5) in columns 4..8, column 12 carries (b3, b2, 1)
    assert [e[2, c] for c in range(3, 8)] == [1, a[2], a[3], a[4], a[5]]
    assert [e[r, 11] for r in (8, 9, 10)] == [b[3], b[2], 1]
    assert [e[10, c] for c in range(11, 15)] == [1, 0, 0, 0]


def test_normalized_samples_match_worked_pattern():
    for seed in range(5):
        s = random_seq(Shape((3, 5, 3, 4)), seed, 4, "normalized")
        a = {j: s[1][2, j - 1] for j in range(2, 6)}
        b = {j: s[2][4, j - 1] for j in (2, 3)}
        free = [s[1][r, c] for r in range(2) for c in range(1, 5)]
        free += [s[2][r, c] for r in range(4) for c in (1, 2)]
        free += [s[3][r, c] for r in range(2) for c in range(1, 4)]
        assert _starred(a, b, free) == s


def test_admissibility_violation_names_blocks():
    shape = Shape((1, 2, 1))
    with pytest.raises(AdmissibilityError, match="2"):
        seq_from_rows(shape, [[[1, 0]], [[0], [0]]])
    with pytest.raises(AdmissibilityError):
        seq_from_rows(shape, [[[1, 0, 0]], [[0], [1]]])


def test_phi_invariance_examples():
    assert is_phi_invariant(canonical_seq(Shape((1, 2, 1, 2, 1))))
    assert not is_phi_invariant(canonical_seq(Shape((1, 2, 2))))
    s = seq_from_rows(Shape((1, 3, 1)), [[[1, 1, 0]], [[0], [0], [1]]])
    assert not is_phi_invariant(s)


@given(sym_shapes)
def test_canonical_phi_invariant_on_symmetric(shape):
    assert is_phi_invariant(canonical_seq(shape))


def test_seq_json_round_trip():
    s = random_seq(Shape((2, 3, 1)), 4, 3, "none")
    assert BlockSeq.from_json(s.to_json()) == s
    t = random_seq(Shape((2, 3, 1)), 4, 3, "normalized", GF(5))
    assert BlockSeq.from_json(t.to_json()) == t
    assert t.to_json()["field"] == "Fp:5"


# ---- random sequences -------------------------------------------------------------

def test_random_seq_deterministic():
    shape = Shape((2, 3, 2))
    assert random_seq(shape, 7).dumps() == random_seq(shape, 7).dumps()
    assert random_seq(shape, 7).dumps() != random_seq(shape, 8).dumps()


@given(shapes, st.integers(0, 1000), st.sampled_from(["none", "weakly_normalized", "normalized"]))
def test_random_seq_constraints(shape, seed, constraint):
    s = random_seq(shape, seed, 3, constraint)
    assert s.is_admissible()
    if constraint == "normalized":
        assert is_normalized(s)
    if constraint == "weakly_normalized":
        assert is_weakly_normalized(s)


@given(sym_shapes, st.integers(0, 1000))
def test_random_phi_invariant(shape, seed):
    s = random_seq(shape, seed, 3, "normalized_phi_invariant")
    assert is_phi_invariant(s) and is_normalized(s)
    w = random_seq(shape, seed, 3, "weakly_normalized_phi_invariant")
    assert is_phi_invariant(w) and is_weakly_normalized(w)


def test_random_seq_errors():
    with pytest.raises(ConstraintError):
        random_seq(Shape((1, 2, 2)), 0, 3, "normalized_phi_invariant")
    with pytest.raises(ConstraintError):
        random_seq(Shape((1, 2, 1)), 0, 3, "bogus")
    with pytest.raises(ValueError):
        random_seq(Shape((1, 2, 1)), 0, 0)


# ---- G(d) and normalization ---------------------------------------------------------

@given(shapes, st.integers(0, 1000), st.integers(-3, 3), st.integers(-3, 3))
def test_group_commutes_with_D(shape, seed, alpha, lam):
    p = random_group_elem(shape, seed).matrix()
    d = build_D(shape, alpha, lam)
    assert p @ d == d @ p


@given(shapes, st.integers(0, 1000))
def test_group_inverse(shape, seed):
    g = random_group_elem(shape, seed)
    assert (g.matrix() @ g.inverse().matrix()) == Matrix.identity(shape.d)


def test_normalize_canonical_is_identity():
    c = canonical_seq(Shape((2, 3, 1, 2)))
    gauge, t = normalize_seq(c)
    assert gauge.is_identity() and t == c


def test_normalize_scaled_canonical():
    shape = Shape((1, 1, 1))
    c = canonical_seq(shape)
    s = BlockSeq(shape, (c[1].scale(2), c[2]))
    gauge, t = normalize_seq(s)
    assert t == c
    assert gauge.polys == ((1,), (2,), (2,))


@given(st.integers(0, 10_000))
def test_normalize_random_131(seed):
    shape = Shape((1, 3, 1))
    s = random_seq(shape, seed, 4, "none")
    gauge, t = normalize_seq(s)
    assert is_normalized(t)
    p = gauge.matrix()
    assert p @ build_E(s) == build_E(t) @ p


@given(shapes, st.integers(0, 10_000))
def test_normalize_idempotent_and_gauge_invariant(shape, seed):
    s = random_seq(shape, seed, 3, "none")
    t = normalize_seq(s).seq
    g2, t2 = normalize_seq(t)
    assert t2 == t and g2.is_identity()
    g = random_group_elem(shape, seed + 1)
    assert normalize_seq(g.conjugate(s)).seq.dumps() == t.dumps()


def test_normalize_over_Fp():
    s = random_seq(Shape((2, 3, 2)), 3, 3, "none", GF(5))
    gauge, t = normalize_seq(s)
    assert is_normalized(t) and t.field == GF(5)


def test_normalize_singular_in_char_2():
    # interior blocks of size >= 2 give level systems with pivot 2/c
    with pytest.raises(NormalizationError):
        normalize_seq(canonical_seq(Shape((1, 2, 1)), GF(2)))
    s = random_seq(Shape((2, 2)), 0, 3, "none", GF(2))
    assert is_normalized(normalize_seq(s).seq)


def test_normalize_rejects_inadmissible():
    s = seq_from_rows(Shape((1, 1)), [[[0]]], validate=False)
    with pytest.raises(AdmissibilityError):
        normalize_seq(s)


def test_group_elem_validation():
    with pytest.raises(ValueError):
        GroupElem(Shape((1, 1)), ((0,), (1,)))
    with pytest.raises(ValueError):
        GroupElem(Shape((1, 2)), ((1,), (1,)))
