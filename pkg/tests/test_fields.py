import itertools
import random

import pytest

from lnc import gfpoly
from lnc.errors import InputError
from lnc.fields import FieldSpec, Felt, field_arith, make_field, phi_lift
from lnc.matrices import MatF


def brute_primitive_polys(p, k):
    """Oracle: all monic primitive degree-k polynomials, by raw order check of roots."""
    out = []
    for coeffs in itertools.product(range(p), repeat=k):
        poly = tuple(coeffs) + (1,)
        if coeffs[0] == 0:  # x divides poly; root 0 generates nothing
            continue
        if not gfpoly.is_irreducible(poly, p):
            continue
        # order of x modulo poly by direct iteration
        order = 1
        cur = gfpoly.poly_mod((0, 1), poly, p)
        acc = cur
        while acc != (1,):
            acc = gfpoly.poly_mod(gfpoly.mul(acc, cur, p), poly, p)
            order += 1
        if order == p**k - 1:
            out.append(poly)
    return out


def test_make_field_prime_field():
    assert make_field(2, 1).poly == (1, 1)


def test_make_field_gf4():
    # only one degree-2 irreducible over GF(2)
    assert make_field(2, 2).poly == (1, 1, 1)


def test_make_field_gf9_rejects_nonprimitive():
    # x^2+1 is irreducible over GF(3) but its root has order 4, not 8
    assert gfpoly.is_irreducible((1, 0, 1), 3)
    assert not gfpoly.is_primitive((1, 0, 1), 3)
    assert make_field(3, 2).poly == (2, 1, 1)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 1), (7, 1)])
def test_make_field_lex_smallest(p, k):
    expected = min(brute_primitive_polys(p, k))
    assert make_field(p, k).poly == expected


def test_make_field_deterministic():
    a = make_field(2, 5)
    b = make_field(2, 5)
    assert a.poly == b.poly


def test_make_field_errors():
    with pytest.raises(InputError):
        make_field(4, 2)
    with pytest.raises(InputError):
        make_field(2, 0)


def test_field_arith_examples():
    gf4 = make_field(2, 2)
    g = gf4.gen()
    assert (g * g).coeffs == (1, 1)  # gamma^2 = gamma + 1 under x^2+x+1
    gf5 = make_field(5, 1)
    assert (gf5.from_int(2) + gf5.from_int(3)).is_zero()
    for spec in (gf4, gf5):
        for n in range(1, spec.q):
            a = spec.from_int(n)
            assert field_arith(a, spec.one(), "mul") == a


def test_field_arith_errors():
    gf4 = make_field(2, 2)
    gf9 = make_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        gf4.zero().inv()
    with pytest.raises(InputError):
        field_arith(gf4.one(), gf9.one(), "add")


def test_field_axioms_random():
    rng = random.Random(0)
    for p, k in [(2, 3), (3, 2), (7, 1)]:
        spec = make_field(p, k)
        for _ in range(100):
            a = spec.from_int(rng.randrange(spec.q))
            b = spec.from_int(rng.randrange(spec.q))
            c = spec.from_int(rng.randrange(spec.q))
            assert a + b == b + a
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            if not a.is_zero():
                assert a * a.inv() == spec.one()


def test_phi_zero_and_one():
    gf4 = make_field(2, 2)
    assert phi_lift(gf4.zero()) == MatF.zeros(2, 2, 2)
    assert phi_lift(gf4.one()) == MatF.identity(2, 2)


def test_phi_companion_convention():
    gf4 = make_field(2, 2)
    assert phi_lift(gf4.gen()).to_lists() == [[0, 1], [1, 1]]
    # row-vector action: vec(x * gamma) = vec(x) . C
    spec = make_field(2, 3)
    C = phi_lift(spec.gen())
    for n in range(spec.q):
        x = spec.from_int(n)
        lhs = (x * spec.gen()).coeffs
        vec = MatF.from_rows(2, [x.coeffs])
        assert tuple(vec.mul(C).row(0)) == lhs


def test_phi_homomorphism_random_pairs():
    rng = random.Random(42)
    specs = [make_field(2, 2), make_field(2, 4), make_field(2, 8), make_field(3, 4), (make_field(5, 3))]
    pairs_checked = 0
    for spec in specs:
        for _ in range(200):
            a = spec.from_int(rng.randrange(spec.q))
            b = spec.from_int(rng.randrange(spec.q))
            assert phi_lift(a + b) == phi_lift(a) + phi_lift(b)
            assert phi_lift(a * b) == phi_lift(a).mul(phi_lift(b))
            pairs_checked += 1
    assert pairs_checked == 1000


def test_phi_inverse_and_order():
    rng = random.Random(3)
    for p, k in [(2, 4), (3, 2), (2, 6)]:
        spec = make_field(p, k)
        for _ in range(25):
            x = spec.from_int(rng.randrange(1, spec.q))
            assert phi_lift(x.inv()) == phi_lift(x).inv()
        assert phi_lift(spec.gen()).multiplicative_order() == spec.q - 1


def test_phi_powers_are_companion_powers():
    spec = make_field(2, 3)
    C = phi_lift(spec.gen())
    for e in range(spec.q - 1):
        assert phi_lift(spec.from_exp(e)) == C.pow(e)


def test_fieldspec_json_roundtrip():
    spec = make_field(3, 2)
    d = spec.to_json_dict()
    assert d == {"p": 3, "k": 2, "poly": [2, 1, 1]}
    assert FieldSpec.from_json_dict(d) == spec


def test_felt_int_roundtrip():
    spec = make_field(2, 4)
    for n in range(spec.q):
        assert spec.from_int(n).to_int() == n
