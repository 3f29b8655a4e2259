import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from heckex.hecke import HeckeAlgebra
from heckex.instances import bs_pair, s3_pair, s4_pair
from heckex.scalars import ONE, RadScalar, sqrt_pos_rational
from heckex.suites import brute_convolution


def _window_lefts(p, g, bound=10):
    """Left cosets inside the double coset of g, found by enumerating a window of it."""
    seen = {}
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            x = p.prod((Fraction(a), 0), g, (Fraction(b), 0))
            seen.setdefault(p.canonical_coset(x), x)
    return list(seen.values())


def _bs_convolution(p, f1, f2):
    out = {}
    targets = {p.dcoset_key(p.mul(h, k)) for d1 in f1.terms for h in _window_lefts(p, d1)
               for d2 in f2.terms for k in _window_lefts(p, d2)}
    for g in targets:
        total = RadScalar(0)
        for d1, c1 in f1.terms.items():
            for h in _window_lefts(p, d1):
                c2 = f2.terms.get(p.dcoset_key(p.mul(p.inv(h), g)))
                if c2 is not None:
                    total = total + c1 * c2
        if total:
            out[g] = total
    return out


def test_s3_t1_square():
    p = s3_pair()
    A = HeckeAlgebra(p)
    t = A.basis(p.parse([3, 2, 1]))
    assert A.convolve(t, t) == A.add(A.scale(2, A.unit()), t)
    assert A.convolve(t, t).terms == brute_convolution(p, t, t)


def test_s4_square_of_nontrivial_double_coset():
    p = s4_pair()
    A = HeckeAlgebra(p)
    t = A.basis(p.dcosets()[1])
    assert A.convolve(t, t) == A.add(A.scale(3, A.unit()), A.scale(2, t))


def test_bs_star_carries_modular_weight():
    p = bs_pair()
    A = HeckeAlgebra(p)
    t = A.basis(p.element(0, 1))
    assert A.star(t) == A.scale(2, A.basis(p.element(0, -1)))
    assert A.star(A.star(t)) == t


def test_bs_products_match_window_enumeration():
    p = bs_pair()
    A = HeckeAlgebra(p)
    t = A.basis(p.element(0, 1))
    ts = A.star(t)
    assert A.convolve(ts, t).terms[p.identity] == RadScalar(2)
    for f1, f2 in [(ts, t), (t, ts), (t, t), (ts, ts)]:
        assert A.convolve(f1, f2).terms == _bs_convolution(p, f1, f2)


def test_bs_rho_on_identity_coset():
    p = bs_pair()
    A = HeckeAlgebra(p)
    t = A.basis(p.element(0, 1))
    image = A.rho_apply(t, A.delta(p.identity))
    assert image == A.vector([(p.element(0, -1), sqrt_pos_rational(2))])
    assert A.reconstruct(image) == t


def test_s3_rho_matrix_of_t1():
    p = s3_pair()
    A = HeckeAlgebra(p)
    M = A.rho_matrix(A.basis(p.parse([3, 2, 1])), p.cosets())
    assert M.closed
    assert [[int(M.matrix[(i, j)].as_fraction()) for j in range(3)] for i in range(3)] == [
        [0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_bs_rho_window_escapes():
    p = bs_pair()
    A = HeckeAlgebra(p)
    window = [p.element(Fraction(t), k) for k in range(-2, 3) for t in range(4)]
    assert not A.rho_matrix(A.basis(p.element(0, 1)), window).closed


def test_l1_norm_values():
    p = bs_pair()
    A = HeckeAlgebra(p)
    assert A.l1_norm(A.basis(p.element(0, 1))) == 2
    assert A.l1_norm(A.basis(p.element(0, -1))) == 1
    assert A.l1_norm(A.scale(Fraction(-3, 2), A.unit())) == Fraction(3, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_bs_rho_is_multiplicative_on_vectors(seed):
    rng = random.Random(seed)
    p = bs_pair()
    A = HeckeAlgebra(p)
    f1, f2 = A.random_element(rng, 2, True), A.random_element(rng, 2, True)
    v = A.vector([(p.random_element(rng), ONE), (p.random_element(rng), ONE)])
    assert A.rho_apply(A.convolve(f1, f2), v) == A.rho_apply(f1, A.rho_apply(f2, v))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_json_round_trip(seed):
    rng = random.Random(seed)
    for p in (s3_pair(), bs_pair()):
        A = HeckeAlgebra(p)
        f = A.random_element(rng, 3, True)
        assert A.from_json(A.to_json(f)) == f
