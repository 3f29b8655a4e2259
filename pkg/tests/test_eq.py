import random

import pytest

from heckex.bundles import check_fell_axioms
from heckex.eq import (
    EQBundle,
    check_dual_action,
    compare_quotient,
    dual_action,
    graded_from_json,
    group_algebra,
    matrix_algebra,
    positive_trace_ok,
)
from heckex.instances import s3_pair, z2_pair
from heckex.suites import eq_suite

Z2 = {"type": "perm", "degree": 2, "generators": [[2, 1]], "gamma": []}


def test_z2_group_algebra_bundle():
    bundle = EQBundle(group_algebra(z2_pair()))
    assert len(bundle.space.points()) == 4
    assert all(bundle.dim(x) == 1 for x in bundle.space.points())
    assert check_fell_axioms(bundle) == []
    assert check_dual_action(bundle) == []


def test_matrix_algebra_is_a_single_fiber():
    bundle = EQBundle(matrix_algebra(2))
    (arrow,) = bundle.space.points()
    assert bundle.dim(arrow) == 4
    assert check_fell_axioms(bundle) == []
    assert positive_trace_ok(matrix_algebra(2))


def test_empty_component_is_legal():
    p = z2_pair()
    s = p.parse([2, 1])
    B = group_algebra(p, drop=(s,))
    assert B.dims[s] == 0
    bundle = EQBundle(B)
    assert check_fell_axioms(bundle) == []
    assert B.mul(s, (), p.identity, B.unit_vec) == ()


def test_dual_action_identity_and_composition():
    p = s3_pair()
    bundle = EQBundle(group_algebra(p))
    x, a = (p.parse([2, 3, 1]), p.identity), bundle.basis((p.parse([2, 3, 1]), p.identity))[0]
    assert dual_action(bundle, p.identity)(x, a) == (x, a)
    g, h = p.parse([2, 1, 3]), p.parse([2, 3, 1])
    assert dual_action(bundle, g)(*dual_action(bundle, h)(x, a)) == dual_action(bundle, p.mul(g, h))(x, a)


def test_quotients_of_z2():
    B = group_algebra(z2_pair())
    assert compare_quotient(B, B.pair.trivial_tag) == {"holds": True, "arrows": 4, "failures": []}
    whole = group_algebra(z2_pair(gamma_is_whole=True))
    res = compare_quotient(whole, whole.pair.gamma_tag)
    assert res["holds"] and res["arrows"] == 2


def test_s3_group_algebra_quotient_by_gamma():
    B = group_algebra(s3_pair())
    res = compare_quotient(B, B.pair.gamma_tag)
    assert res["holds"] and res["arrows"] == 18


def test_crossed_product_over_eq_bundle():
    rep = eq_suite(group_algebra(z2_pair()), random.Random(0), n=20, n_expect=20)
    assert rep.passed, rep.failed()


def test_grading_violations_rejected():
    spec = {"grading": Z2, "components": [{"g": [1, 2], "dim": 1}, {"g": [2, 1], "dim": 1}],
            "mult": [{"left": [[2, 1], 0], "right": [[2, 1], 0], "value": ["1", "0"]}],
            "star": [], "trace": ["1"], "unit": ["1"]}
    with pytest.raises(ValueError):
        graded_from_json(spec)


def test_explicit_tables_match_preset():
    e, s = [1, 2], [2, 1]
    spec = {"grading": Z2, "components": [{"g": e, "dim": 1}, {"g": s, "dim": 1}],
            "mult": [{"left": [a, 0], "right": [b, 0], "value": ["1"]} for a in (e, s) for b in (e, s)],
            "star": [{"of": [e, 0], "value": ["1"]}, {"of": [s, 0], "value": ["1"]}],
            "trace": ["1"], "unit": ["1"]}
    B = graded_from_json(spec)
    assert B.check() == []
    assert compare_quotient(B, B.pair.trivial_tag)["holds"]


def test_tables_breaking_the_involution_fail_the_bundle():
    e, s = [1, 2], [2, 1]
    spec = {"grading": Z2, "components": [{"g": e, "dim": 1}, {"g": s, "dim": 1}],
            "mult": [{"left": [e, 0], "right": [b, 0], "value": ["1"]} for b in (e, s)]
            + [{"left": [s, 0], "right": [e, 0], "value": ["1"]},
               {"left": [s, 0], "right": [s, 0], "value": [[{"rad": 1, "re": "0", "im": "2"}]]}],
            "star": [{"of": [e, 0], "value": ["1"]}, {"of": [s, 0], "value": ["-1"]}],
            "trace": ["1"], "unit": ["1"]}
    with pytest.raises(ValueError):
        EQBundle(graded_from_json(spec))
