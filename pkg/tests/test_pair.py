import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckex.instances import bs_pair, s3_pair, s4_k_tag, s4_pair
from heckex.pair import PermutationPair, pair_from_json
from heckex.suites import brute_left_count, brute_right_count

# (element, L, R) counted by enumerating the double coset window
BS_COUNTS = [
    ((Fraction(0), 1), 2, 1),
    ((Fraction(0), -1), 1, 2),
    ((Fraction(0), 2), 4, 1),
    ((Fraction(1, 2), -2), 1, 4),
    ((Fraction(3), 0), 1, 1),
    ((Fraction(0), -3), 1, 8),
]


@pytest.mark.parametrize("g,left,right", BS_COUNTS)
def test_bs_coset_counts_match_enumeration(g, left, right):
    p = bs_pair()
    assert brute_left_count(p, g, 20) == left and brute_right_count(p, g, 20) == right
    assert (p.L(g), p.R(g)) == (left, right)
    assert p.Delta(g) == Fraction(left, right)


def test_s3_double_cosets():
    p = s3_pair()
    assert len(p.cosets()) == 3
    assert [p.L(g) for g in p.dcosets()] == [1, 2]
    assert all(p.Delta(g) == 1 for g in p.dcosets())


def test_s4_double_cosets_of_point_stabilizer():
    p = s4_pair()
    assert len(p.dcosets()) == 2
    assert [brute_left_count(p, g) for g in p.dcosets()] == [1, 3]
    assert [p.L(g) for g in p.dcosets()] == [1, 3]


def test_left_cosets_partition_each_double_coset():
    p = s4_pair()
    for g in p.dcosets():
        dc = {p.prod(a, g, b) for a in p.gamma for b in p.gamma}
        lefts = p.double_coset_left_cosets(g)
        assert len(lefts) == p.L(g)
        assert {p.mul(c, a) for c in lefts for a in p.gamma} == dc


def test_lattice_meet_index():
    p = s4_pair()
    K = s4_k_tag(p)
    assert len(p.subgroup_elements(K)) == 2
    assert p.index(p.gamma_tag, K) == 3
    b = bs_pair()
    H = b.meet(b.gamma_tag, b.gamma_g(b.element(0, 1)))
    assert b.index(b.gamma_tag, H) == 2


def test_bs_dcoset_transporter():
    p = bs_pair()
    rng = random.Random(3)
    for _ in range(100):
        h = p.random_element(rng)
        g0, gamma = p.dcoset_transporter(h)
        assert p.canonical_coset(h) == p.canonical_coset(p.mul(gamma, g0))
        assert p.dcoset_key(h) == g0


@given(st.integers(-8, 8), st.integers(-3, 3), st.integers(-8, 8), st.integers(-3, 3))
def test_bs_modular_function_is_multiplicative(a, k, b, j):
    p = bs_pair()
    g, h = p.element(Fraction(a, 4), k), p.element(Fraction(b, 2), j)
    assert p.Delta(p.mul(g, h)) == p.Delta(g) * p.Delta(h)
    assert p.L(g) == p.R(p.inv(g))


def test_pair_specs_parse_and_reject():
    assert pair_from_json({"type": "bs", "m": 3}).m == 3
    p = pair_from_json({"type": "perm", "degree": 3, "generators": [[2, 1, 3], [2, 3, 1]], "gamma": [[2, 1, 3]]})
    assert isinstance(p, PermutationPair) and len(p.elements) == 6
    with pytest.raises(ValueError):
        pair_from_json({"type": "perm", "degree": 3})
    with pytest.raises(ValueError):
        pair_from_json({"type": "lie"})
    with pytest.raises(ValueError):
        bs_pair().parse({"t": "1/3", "k": 0})
