import random

from hypothesis import given, settings
from hypothesis import strategies as st

from heckex import reps as R
from heckex.instances import bs_pair, bs_window, s3_pair, s4_pair, translation_crossed
from heckex.lln import LLNAlgebra, matrix_unit, svn_suite
from heckex.matrices import spectral_norm
from heckex.scalars import RadScalar


def _random(xp, rng):
    return xp.random_element(rng, rng.randint(1, 2), rng.randint(1, 2), True)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_phi_is_a_star_isomorphism(seed):
    rng = random.Random(seed)
    for p in (s3_pair(), bs_pair()):
        xp = translation_crossed(p)
        L = LLNAlgebra(xp)
        a, b = _random(xp, rng), _random(xp, rng)
        assert L.phi(xp.mul(a, b)) == L.mul(L.phi(a), L.phi(b))
        assert L.phi(xp.star(a)) == L.star(L.phi(a))
        assert L.phi_inv(L.phi(a)) == a
        F = L.random_element(rng, 3, True)
        assert L.phi(L.phi_inv(F)) == F


def test_orbit_keys_are_invariant():
    p = bs_pair()
    L = LLNAlgebra(translation_crossed(p))
    rng = random.Random(1)
    for _ in range(50):
        x, g = p.random_element(rng), p.random_element(rng)
        a, b = p.random_gamma(rng), p.random_gamma(rng)
        assert L.key(x, g) == L.key(p.mul(x, a), p.prod(p.inv(a), g, b))


def test_pi_x_matches_integrated_evaluation():
    p = s3_pair()
    xp = translation_crossed(p)
    L = LLNAlgebra(xp)
    rng = random.Random(2)
    for _ in range(10):
        f = _random(xp, rng)
        x = rng.choice(p.elements)
        assert L.pi_x_matrix(x, L.phi(f)) == R.integrated_form(R.evaluation_rep(xp.alg, x), xp, f)


def test_sup_norm_equals_reduced_norm():
    p = s3_pair()
    xp = translation_crossed(p)
    L = LLNAlgebra(xp)
    reg = R.regular_rep(xp.alg)
    rng = random.Random(3)
    for _ in range(10):
        f = _random(xp, rng)
        sup = max(spectral_norm(L.pi_x_matrix(x, L.phi(f))) for x in p.elements)
        assert abs(sup - R.reduced_norm(reg, xp, f)) <= 1e-9


def test_matrix_units_on_finite_pairs():
    for p in (s3_pair(), s4_pair()):
        n = len(p.cosets())
        res = svn_suite(translation_crossed(p))
        assert res["relations_hold"] and res["images_elementary"]
        assert res["image_rank"] == n * n


def test_bs_matrix_units_carry_the_modular_weight():
    p = bs_pair()
    xp = translation_crossed(p)
    g, h = p.identity, p.element(0, 1)
    t = matrix_unit(xp, g, h)
    back = matrix_unit(xp, h, g)
    assert xp.star(t) == xp.scale(RadScalar(2), back)
    assert xp.star(t) != back
    res = svn_suite(xp, bs_window(p))
    assert res["units"] == 36 and res["relations_hold"]


def test_lln_json_round_trip():
    p = bs_pair()
    L = LLNAlgebra(translation_crossed(p))
    rng = random.Random(4)
    for _ in range(10):
        F = L.random_element(rng, 3, True)
        assert L.from_json(L.to_json(F)) == F
