import random
from itertools import permutations, product

import pytest

from lnc.errors import BudgetExceeded, InputError
from lnc.fields import make_field, phi_lift
from lnc.matrices import (
    ConjClassInfo,
    MatF,
    conjugacy_classify,
    fixed_point_free_count,
    fixed_point_free_stream,
    gl_count,
    gl_enumerate,
    invariant_factors,
    mat_ops,
    mat_rank,
    rank_distance_spectrum,
)


def det_oracle(m: MatF) -> int:
    """Permutation-expansion determinant, independent of elimination code."""
    n = m.rows
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inv
        for i in range(n):
            term *= m.entry(i, perm[i])
        total += term
    return total % m.p


def test_rank_examples():
    assert mat_rank(MatF.identity(5, 4)) == 4
    assert mat_rank(MatF.zeros(3, 3, 3)) == 0
    assert mat_rank(MatF.from_rows(2, [[1, 1], [1, 1]])) == 1


def test_mat_ops_basics():
    rng = random.Random(0)
    for p in (2, 3, 5):
        for _ in range(20):
            n = rng.randrange(1, 5)
            m = MatF.from_rows(p, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])
            assert mat_ops(m, None, "det") == det_oracle(m)
            if m.is_invertible():
                assert m.mul(m.inv()) == MatF.identity(p, n)
    assert mat_ops(MatF.identity(7, 3), None, "det") == 1


def test_companion_cube_is_identity():
    c = MatF.from_rows(2, [[0, 1], [1, 1]])
    assert mat_ops(c, 3, "pow") == MatF.identity(2, 2)
    assert c.pow(2) == c + MatF.identity(2, 2)


def test_mat_errors():
    a = MatF.identity(2, 2)
    b = MatF.identity(2, 3)
    with pytest.raises(InputError):
        a.mul(b).mul(a)
    with pytest.raises(InputError):
        MatF.from_rows(2, [[1, 1], [1, 1]]).inv()


def test_gl_counts_match_formula():
    for L, p in [(2, 2), (3, 2), (2, 3)]:
        expected = 1
        for i in range(L):
            expected *= p**L - p**i
        assert gl_count(L, p) == expected
        assert sum(1 for _ in gl_enumerate(L, p, packed=True)) == expected


def test_gl_enumerate_order_and_membership():
    seen = list(gl_enumerate(2, 2))
    assert len(seen) == 6
    packs = [m.to_packed() for m in seen]
    assert packs == sorted(packs)
    for m in seen:
        assert m.is_invertible()


def test_gl_budget_refusal():
    with pytest.raises(BudgetExceeded):
        gl_count(4, 3)


def test_gl1_trivial():
    assert gl_count(1, 2) == 1
    assert fixed_point_free_count(1, 2) == 0


def test_fpf_counts():
    # brute force over all of GL(2,2)
    brute = 0
    for m in gl_enumerate(2, 2):
        if (MatF.identity(2, 2) - m).rank() == 2:
            brute += 1
    assert fixed_point_free_count(2, 2) == brute == 2
    assert fixed_point_free_count(3, 2) == 48
    pool = list(fixed_point_free_stream(3, 2))
    assert len(pool) == 48
    ident = MatF.identity(2, 3)
    assert all((ident - m).rank() == 3 for m in pool)


def brute_conjugacy(L, p):
    els = list(gl_enumerate(L, p))
    seen = set()
    classes = []
    for m in els:
        if m.entries in seen:
            continue
        orbit = {g.mul(m).mul(g.inv()).entries for g in els}
        seen |= orbit
        classes.append((len(orbit), min(orbit)))
    return sorted(classes)


@pytest.mark.parametrize("L,p", [(2, 2), (2, 3), (3, 2)])
def test_conjugacy_matches_orbit_oracle(L, p):
    got = sorted((c.size, c.rep.entries) for c in conjugacy_classify(L, p, False))
    assert got == brute_conjugacy(L, p)


def test_conjugacy_gl22_structure():
    cls = conjugacy_classify(2, 2, False)
    assert sorted((c.size, c.order) for c in cls) == [(1, 1), (2, 3), (3, 2)]
    assert sum(c.size for c in cls) == 6
    ident = [c for c in cls if c.order == 1][0]
    assert ident.size == 1  # identity is always a singleton class
    assert not ident.fixed_point_free
    # identity vs transvection share charpoly (x+1)^2 but differ in invariant factors
    assert ident.invariant_factors == ((1, 1), (1, 1))


def test_conjugacy_class_sizes_divide_group_order():
    cls = conjugacy_classify(3, 2, False)
    assert sum(c.size for c in cls) == 168
    for c in cls:
        assert 168 % c.size == 0


def test_invariant_factors_conjugation_invariant():
    rng = random.Random(7)
    els = list(gl_enumerate(3, 2))
    for _ in range(50):
        m = rng.choice(els)
        g = rng.choice(els)
        assert invariant_factors(m) == invariant_factors(g.mul(m).mul(g.inv()))


def test_rank_conjugation_invariance_gl52_sample():
    """rank(I - A B A^-1) = rank(I - B) on random GL(5,2) pairs."""
    rng = random.Random(11)

    def rand_invertible():
        while True:
            m = MatF.from_rows(2, [[rng.randrange(2) for _ in range(5)] for _ in range(5)])
            if m.is_invertible():
                return m

    ident = MatF.identity(2, 5)
    for _ in range(500):
        a = rand_invertible()
        b = rand_invertible()
        conj = a.mul(b).mul(a.inv())
        assert (ident - conj).rank() == (ident - b).rank()


def test_rank_distance_spectrum():
    gf4 = make_field(2, 2)
    mats = [phi_lift(gf4.from_exp(j)) for j in range(3)]
    assert rank_distance_spectrum(mats) == 2
    assert rank_distance_spectrum([MatF.identity(2, 2), MatF.identity(2, 2)]) == 0
    with pytest.raises(InputError):
        rank_distance_spectrum([MatF.identity(2, 2)])


def test_rank_distance_field_representation_extremal():
    # all q^L lifts of GF(q^L) elements sit at pairwise distance L
    spec = make_field(2, 3)
    mats = [phi_lift(spec.from_int(n)) for n in range(spec.q)]
    assert rank_distance_spectrum(mats) == 3


def test_block_diag_rank_additivity():
    rng = random.Random(5)
    for _ in range(30):
        p = rng.choice([2, 3])
        a = MatF.from_rows(p, [[rng.randrange(p) for _ in range(3)] for _ in range(3)])
        b = MatF.from_rows(p, [[rng.randrange(p) for _ in range(2)] for _ in range(2)])
        assert MatF.block_diag([a, b]).rank() == a.rank() + b.rank()


def test_matf_json_roundtrip():
    m = MatF.from_rows(3, [[1, 2], [0, 1]])
    assert MatF.from_json_dict(m.to_json_dict()) == m


def test_conjclassinfo_json():
    cls = conjugacy_classify(2, 2, True)
    assert all(isinstance(c, ConjClassInfo) for c in cls)
    d = cls[0].to_json_dict()
    assert set(d) == {"rep", "size", "order", "invariant_factors", "fixed_point_free"}
