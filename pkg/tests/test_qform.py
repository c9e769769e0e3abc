from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ssforms.errors import BoundError, DomainError
from ssforms.qform import (
    BQF,
    IdealRep,
    Transform2x2,
    apply_transform,
    assigned_characters,
    canonical_transforms,
    class_number,
    class_number_formula,
    class_number_relation_check,
    compose,
    derive_forms,
    enumerate_reduced,
    find_ibukiyama_prime,
    find_representation,
    inverse,
    is_equivalent,
    is_ibukiyama_prime,
    is_principal_genus,
    is_reduced,
    lift_to_16p,
    non_principal_forms,
    order,
    parse_form,
    power,
    principal_form,
    reduce,
    reduce_with_witness,
    represents,
)

F = BQF


def brute_reduced(D):
    out = []
    for a in range(1, isqrt(-D // 3) + 2):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (a == c and b < 0) or gcd(gcd(a, b), c) != 1:
                continue
            out.append(F(a, b, c))
    return sorted(out)


def dirichlet(f, g):
    """Dirichlet composition for concordant forms, by direct search for B."""
    D = f.discriminant
    a1, b1, _ = f
    a2, b2, _ = g
    assert gcd(gcd(a1, a2), (b1 + b2) // 2) == 1
    n = a1 * a2
    for B in range(-2 * n, 2 * n + 1):
        if (B - b1) % (2 * a1) == 0 and (B - b2) % (2 * a2) == 0 and (B * B - D) % (4 * n) == 0:
            return F(n, B, (B * B - D) // (4 * n))
    raise AssertionError("no B")


DISCS = [-3, -4, -7, -8, -15, -20, -23, -47, -56, -71, -83, -84, -164, -231, -299, -332, -419, -1328, -1556]


def test_positive_definite_required():
    with pytest.raises(DomainError):
        F(1, 0, -1)
    with pytest.raises(DomainError):
        F(-1, 0, -1)


def test_parse_and_str():
    f = parse_form("(3, -1, 7)")
    assert f == F(3, -1, 7) and str(f) == "(3,-1,7)"
    with pytest.raises(DomainError):
        parse_form("3 1 7 2")


def test_reduce_examples():
    assert reduce(F(4, 6, 23)) == F(4, -2, 21)
    assert reduce(F(3, 1, 7)) == F(3, 1, 7)
    assert reduce(F(2, 2, 2 + 21)) == reduce(F(2, 2, 23))
    assert principal_form(-83) == F(1, 1, 21)
    assert principal_form(-1328) == F(1, 0, 332)


forms_st = st.tuples(st.integers(1, 60), st.integers(-80, 80), st.integers(1, 60)).filter(
    lambda t: t[1] ** 2 - 4 * t[0] * t[2] < 0 and gcd(gcd(*t[:2]), t[2]) == 1
)


@given(forms_st)
def test_reduce_invariants(t):
    f = F(*t)
    g, (m, n, r, s) = reduce_with_witness(f)
    assert is_reduced(g) and g.discriminant == f.discriminant
    assert m * s - n * r == 1
    # g(X, Y) = f(mX + nY, rX + sY)
    for X, Y in [(1, 0), (0, 1), (1, 1), (2, -3)]:
        assert g(X, Y) == f(m * X + n * Y, r * X + s * Y)
    assert reduce(g) == g


@pytest.mark.parametrize("D", DISCS)
def test_enumeration_matches_brute_force(D):
    G = enumerate_reduced(D)
    assert list(G.forms) == brute_reduced(D)
    assert G.h == class_number(D)


def test_known_class_numbers():
    assert [class_number(D) for D in (-3, -4, -23, -83, -332, -1328, -419, -1676)] == [1, 1, 3, 3, 9, 18, 9, 27]
    assert set(enumerate_reduced(-83)) == {F(1, 1, 21), F(3, 1, 7), F(3, -1, 7)}


@settings(max_examples=200)
@given(st.sampled_from(DISCS), st.data())
def test_group_laws(D, data):
    forms = enumerate_reduced(D).forms
    f, g, h = (data.draw(st.sampled_from(forms)) for _ in range(3))
    e = principal_form(D)
    assert compose(f, e) == f
    assert compose(f, inverse(f)) == e
    assert compose(f, g) == compose(g, f)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert power(f, order(f)) == e
    assert class_number(D) % order(f) == 0



@settings(max_examples=200)
@given(st.sampled_from(DISCS), st.data())
def test_composition_matches_dirichlet(D, data):
    forms = enumerate_reduced(D).forms
    f, g = data.draw(st.sampled_from(forms)), data.draw(st.sampled_from(forms))
    assume(gcd(gcd(f.a, g.a), (f.b + g.b) // 2) == 1)
    assert compose(f, g) == reduce(dirichlet(f, g))


def test_composition_examples():
    assert compose(F(3, 1, 7), F(3, 1, 7)) == F(3, -1, 7)
    assert F(3, 1, 7) * F(3, -1, 7) == F(1, 1, 21)
    assert F(3, 1, 7) ** 3 == F(1, 1, 21)
    assert F(3, 1, 7) ** -1 == F(3, -1, 7)


def test_ideal_roundtrip():
    for f in enumerate_reduced(-332):
        assert IdealRep.from_form(f).to_form() == f


def test_equivalence_and_representation():
    assert is_equivalent(F(4, 6, 23), F(4, -2, 21))
    assert not is_equivalent(F(3, 1, 7), F(3, -1, 7))
    for m in (3, 7, 11, 17, 21, 23):
        xy = find_representation(F(3, 1, 7), m)
        if xy is None:
            assert not any(F(3, 1, 7)(x, y) == m for x in range(-10, 11) for y in range(-10, 11))
        else:
            assert F(3, 1, 7)(*xy) == m
    assert represents(F(1, 1, 21), 23)
    # representation survives the reduction witness
    assert F(4, 6, 23)(*find_representation(F(4, 6, 23), 21)) == 21


def test_class_number_relation():
    assert class_number_formula(-83, 4) == Fraction(class_number(-1328))
    assert class_number_formula(-83, 2) == 9
    assert class_number_formula(-3, 2) == 1
    assert class_number_formula(-4, 3) == 2
    for D, m in [(-7, 2), (-7, 4), (-8, 3), (-3, 6), (-20, 5), (-23, 7), (-84, 2)]:
        assert class_number_relation_check(D, m)


def test_assigned_characters():
    # (1,0,332) represents 1; (4,0,83) represents 87 = 3 mod 4 and (87/83) = 1
    assert assigned_characters(F(1, 0, 332)) == (1, 1)
    assert assigned_characters(F(4, 0, 83)) == (1, -1)
    assert assigned_characters(F(3, 2, 111)) == (1, -1)
    with pytest.raises(DomainError):
        assigned_characters(F(1, 1, 21))


def test_non_principal_forms_83():
    got = set(non_principal_forms(83))
    expected = {F(4, 0, 83), F(11, -6, 31), F(11, 6, 31), F(7, 4, 48), F(7, -4, 48),
             F(16, -12, 23), F(16, 12, 23), F(3, -2, 111), F(3, 2, 111)}
    assert got == expected


@pytest.mark.parametrize("p", [p for p in range(5, 300) if all(p % q for q in range(2, p))])
def test_genus_split_is_half(p):
    forms = enumerate_reduced(-16 * p).forms
    npf = [f for f in forms if not is_principal_genus(f)]
    assert 2 * len(npf) == len(forms)
    # the principal genus is the subgroup of squares
    squares = {compose(f, f) for f in forms}
    assert squares == {f for f in forms if is_principal_genus(f)}


def test_transforms():
    S = canonical_transforms(2)
    assert [s.det for s in S] == [2, 2, 2]
    assert derive_forms(F(1, 1, 21), 2) == [F(1, 2, 84), F(4, 2, 21), F(4, 6, 23)]
    with pytest.raises(DomainError):
        apply_transform(F(1, 1, 21), Transform2x2(0, 1, 1, 0))
    g = apply_transform(F(3, 1, 7), Transform2x2(2, 1, 0, 1))
    assert g.discriminant == -83 * 4


def test_lifts_83():
    assert set(lift_to_16p(F(1, 1, 21))) == {
        F(1, 0, 332), F(4, 0, 83), F(16, 4, 21), F(16, -4, 21), F(16, 12, 23), F(16, -12, 23)
    }
    np_lifts = {g for g in lift_to_16p(F(3, 1, 7)) if not is_principal_genus(g)}
    assert np_lifts == {F(3, -2, 111), F(7, -4, 48), F(11, -6, 31)}
    assert set(lift_to_16p(F(1, 1, 2))) == {F(1, 0, 28), F(4, 0, 7)}


@pytest.mark.parametrize("p", [7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83, 103, 107, 127, 131])
def test_lift_counts(p):
    for f in enumerate_reduced(-p):
        lifts = lift_to_16p(f)
        assert len(lifts) == (6 if p % 8 == 3 else 2)
        assert all(g.discriminant == -16 * p for g in lifts)


def test_ibukiyama_primes():
    assert is_ibukiyama_prime(3, 83)
    assert is_ibukiyama_prime(11, 83)
    assert not is_ibukiyama_prime(19, 83)  # 83 = 7 = 8^2 mod 19
    assert not is_ibukiyama_prime(7, 83)
    assert find_ibukiyama_prime(F(3, 1, 7), 83) == (3, 1)
    assert find_ibukiyama_prime(F(3, 2, 111), 83) == (3, 1)
    assert find_ibukiyama_prime(F(1, 1, 21), 83) == (131, 21)
    assert (21 * 21 + 83) % (4 * 131) == 0
    with pytest.raises(BoundError):
        find_ibukiyama_prime(F(1, 1, 21), 83, ceiling=100)
