import random

import pytest

from heckex.bundles import BundleAlgebra, TrivialLineBundle, check_fell_axioms
from heckex.groupoids import CosetSpace, TranslationSpace, check_groupoid_axioms, orbit_groupoid
from heckex.instances import bs_pair, s3_pair, s4_k_tag, s4_pair, translation_algebra
from heckex.scalars import ONE


def test_translation_bundle_satisfies_fell_axioms():
    bundle = TrivialLineBundle(TranslationSpace(s3_pair()))
    assert check_fell_axioms(bundle) == []


def test_non_free_coset_space():
    p = s3_pair()
    space = CosetSpace(p, p.gamma)
    assert not space.free
    assert len(space.points()) == 3
    bundle = TrivialLineBundle(space)
    assert check_fell_axioms(bundle) == []
    og = orbit_groupoid(space, p.gamma_tag)
    assert og.check_well_defined() and check_groupoid_axioms(og)


def test_orbit_groupoid_of_translation_space():
    p = s4_pair()
    og = orbit_groupoid(TranslationSpace(p), s4_k_tag(p))
    assert len(og.arrows()) == 12
    assert check_groupoid_axioms(og)


def test_indicator_of_unit_orbit_is_a_projection():
    p = s3_pair()
    A = translation_algebra(p)
    e = A.indicator(p.identity, p.gamma_tag)
    assert A.mul(e, e) == e and A.star(e) == e


def test_embedding_splits_indicator_over_finer_subgroup():
    p = s4_pair()
    A = translation_algebra(p)
    K = s4_k_tag(p)
    f = A.indicator(p.identity, p.gamma_tag)
    g = A.embed_section(f, K)
    assert len(g.terms) == p.index(p.gamma_tag, K)
    assert A.descend(g, p.gamma_tag) == f
    assert A.embed_section(f, p.trivial_tag) == A.embed_section(g, p.trivial_tag)


def test_direct_limit_product_uses_the_meet():
    p = s4_pair()
    A = translation_algebra(p)
    rng = random.Random(7)
    C = p.conjugate_tag(p.parse([1, 2, 4, 3]), p.gamma_tag)
    for _ in range(20):
        f1 = A.random_section(p.gamma_tag, rng, 3, True)
        f2 = A.random_section(C, rng, 3, True)
        triv = p.trivial_tag
        assert A.embed_section(A.mul(f1, f2), triv) == A.section_mul(A.embed_section(f1, triv),
                                                                     A.embed_section(f2, triv))


def test_action_conjugates_the_subgroup():
    p = s4_pair()
    A = translation_algebra(p)
    g = p.parse([1, 2, 4, 3])
    f = A.indicator(p.identity, p.gamma_tag)
    moved = A.act_section(g, f)
    assert moved.tag == p.conjugate_tag(g, p.gamma_tag)
    assert A.act_section(p.inv(g), moved) == f


def test_section_json_round_trip():
    rng = random.Random(1)
    for p in (s3_pair(), bs_pair()):
        A = translation_algebra(p)
        for _ in range(10):
            f = A.random_section(p.gamma_tag, rng, 3, True)
            assert A.from_json(A.to_json(f)) == f


def test_bs_section_sums_are_exact():
    p = bs_pair()
    A = translation_algebra(p)
    f = A.section(p.gamma_tag, [(p.element(0, 0), ONE), (p.element(1, 0), ONE)])
    # both points lie in the same Gamma-orbit
    assert len(f.terms) == 1


def test_malformed_section_rejected():
    A = BundleAlgebra(TrivialLineBundle(TranslationSpace(s3_pair())))
    with pytest.raises(ValueError):
        A.from_json({"subgroup": []})
