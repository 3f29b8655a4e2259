import random

import numpy as np
import pytest

from heckex import reps as R
from heckex.bundles import BundleAlgebra
from heckex.crossed import CrossedProduct
from heckex.eq import EQBundle, group_algebra
from heckex.instances import s3_pair, s4_k_tag, s4_pair, translation_crossed
from heckex.matrices import ExactMatrix, spectral_norm


@pytest.fixture
def s3_crossed():
    return translation_crossed(s3_pair())


def _random(xp, rng):
    return xp.random_element(rng, rng.randint(1, 2), rng.randint(1, 2), True)


def test_regular_rep_dimensions():
    p = s4_pair()
    xp = translation_crossed(p)
    assert R.regular_rep(xp.alg).dim == 24
    pi = R.regular_rep(xp.alg, p.gamma_tag)
    assert pi.dim == 4
    assert R.pi_K(pi, s4_k_tag(p)).dim == 48


def test_integrated_form_is_a_star_homomorphism(s3_crossed):
    xp = s3_crossed
    rng = random.Random(2)
    for pi in (R.regular_rep(xp.alg), R.evaluation_rep(xp.alg, xp.pair.identity)):
        for _ in range(10):
            a, b = _random(xp, rng), _random(xp, rng)
            I = lambda f: R.integrated_form(pi, xp, f)
            assert I(xp.mul(a, b)) == I(a) @ I(b)
            assert I(xp.star(a)) == I(a).H


def test_unit_maps_to_identity(s3_crossed):
    xp = s3_crossed
    pi = R.regular_rep(xp.alg)
    M = R.integrated_form(pi, xp, xp.unit())
    assert M == ExactMatrix.identity(M.shape[0])
    assert abs(R.reduced_norm(pi, xp, xp.unit()) - 1.0) < 1e-9


def test_restriction_to_gamma_is_pi_alpha(s3_crossed):
    xp = s3_crossed
    pi = R.regular_rep(xp.alg)
    rng = random.Random(3)
    for _ in range(10):
        S = xp.alg.random_section(xp.pair.gamma_tag, rng, 3, True)
        assert R.integrated_form(pi, xp, xp.from_section(S)) == R.pi_alpha(pi, S)


def test_sigma_compression_every_coset_pair(s3_crossed):
    xp = s3_crossed
    pi = R.regular_rep(xp.alg)
    f = _random(xp, random.Random(4))
    cos = xp.pair.cosets()
    assert all(R.sigma_compress(pi, xp, f, g, h)["equal"] for g in cos for h in cos)


def test_covariant_assembly_matches(s3_crossed):
    xp = s3_crossed
    pi = R.regular_rep(xp.alg)
    rng = random.Random(5)
    for _ in range(5):
        f = _random(xp, rng)
        assert R.integrated_form(pi, xp, f) == R.integrated_form_covariant(pi, xp, f)


def test_pi_k_norm_inequality():
    p = s4_pair()
    xp = translation_crossed(p)
    pi = R.regular_rep(xp.alg, p.gamma_tag)
    K = s4_k_tag(p)
    pk = R.pi_K(pi, K)
    rng = random.Random(6)
    for _ in range(10):
        f = xp.alg.random_section(p.gamma_tag, rng, 4, True)
        assert spectral_norm(pi(f)) <= spectral_norm(pk(xp.alg.embed_section(f, K))) + 1e-9
        assert R.check_aggregated_vectors(pi, pk, f)


def test_covariant_pairs_accept_and_reject():
    p = s3_pair()
    cp = R.regular_covariant_pair(p)
    assert R.covariant_pair_check(cp)["holds"]
    U = R.random_unitary(cp.dim * 2, np.random.default_rng(0))
    conj = R.conjugate_pair(R.amplify_pair(cp, 2), U)
    chk = R.covariant_pair_check(conj)
    assert chk["holds"] and chk["max_deviation"] < 1e-9
    bad = R.covariant_pair_check(R.corrupt_pair(cp))
    assert not bad["holds"] and bad["failures"]


def test_random_unitary_is_unitary():
    U = R.random_unitary(5, np.random.default_rng(1))
    assert np.allclose(U.conj().T @ U, np.eye(5), atol=1e-12)


def test_regular_rep_on_graded_bundle():
    xp = CrossedProduct(BundleAlgebra(EQBundle(group_algebra(s3_pair()))))
    pi = R.regular_rep(xp.alg)
    rng = random.Random(8)
    for _ in range(5):
        a, b = _random(xp, rng), _random(xp, rng)
        assert R.integrated_form(pi, xp, xp.mul(a, b)) == (R.integrated_form(pi, xp, a)
                                                           @ R.integrated_form(pi, xp, b))
