"""Property suites shared by the command line and the acceptance tests.

Each suite returns a :class:`Report`: one entry per property with a pass
flag, the number of samples tried and, on failure, the first failing input
serialized in the same JSON forms the command line reads.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .bundles import BundleAlgebra, Section, check_fell_axioms
from .crossed import CrossedProduct
from .eq import EQBundle, GradedStarAlgebra, check_dual_action, compare_quotient
from .hecke import CosetVector, HeckeAlgebra
from .lln import LLNAlgebra, svn_suite
from .matrices import exact_rank, spectral_norm, to_numpy
from .pair import BaumslagSolitarPair, HeckePair
from .scalars import ONE, RadScalar, sqrt_pos_rational
from . import reps as R

__all__ = [
    "Report",
    "pair_suite",
    "hecke_suite",
    "embedding_suite",
    "pi_k_suite",
    "crossed_suite",
    "regular_rep_suite",
    "norm_suite",
    "lln_suite",
    "stone_von_neumann_suite",
    "eq_suite",
    "l1_suite",
    "brute_left_count",
    "brute_right_count",
    "brute_convolution",
    "check_pair",
    "acceptance",
    "CRITERIA",
]

NORM_TOL = 1e-9


class Report:
    def __init__(self, name: str):
        self.name = name
        self.properties: list[dict] = []

    def add(self, prop: str, ok: bool, samples: int = 1, counterexample=None, **info) -> bool:
        entry = {"property": prop, "pass": bool(ok), "samples": samples}
        if not ok and counterexample is not None:
            entry["counterexample"] = counterexample
        entry.update(info)
        self.properties.append(entry)
        return ok

    def sample(self, prop: str, n: int, make: Callable, check: Callable, show: Callable) -> bool:
        """Draw ``n`` inputs with ``make()``, stop at the first one failing ``check``."""
        for i in range(n):
            args = make()
            if not check(*args):
                return self.add(prop, False, i + 1, show(*args))
        return self.add(prop, True, n)

    @property
    def passed(self) -> bool:
        return all(p["pass"] for p in self.properties)

    def failed(self) -> list[str]:
        return [p["property"] for p in self.properties if not p["pass"]]

    def to_json(self) -> dict:
        return {"suite": self.name, "pass": self.passed, "properties": self.properties}


# brute-force coset counts ------------------------------------------------------


def _bs_window(pair: BaumslagSolitarPair, g, bound: int) -> Iterable:
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            yield pair.mul(pair.mul((Fraction(a), 0), g), (Fraction(b), 0))


def brute_left_count(pair: HeckePair, g, bound: int = 12) -> int:
    """Number of left cosets in the double coset, by enumeration.

    Finite pairs enumerate the whole double coset.  For BS(1, m) a window
    ``(a, 0) g (b, 0)`` with ``|a|, |b| <= bound`` is enumerated and two
    elements are identified when ``x^-1 y`` is an integer translation.
    """
    if pair.finite:
        dc = {pair.mul(pair.mul(a, g), b) for a in pair.gamma for b in pair.gamma}
        return len({frozenset(pair.mul(x, c) for c in pair.gamma) for x in dc})
    keys = set()
    for x in _bs_window(pair, g, bound):
        # xGamma = yGamma iff t_x - t_y is in m^k Z
        keys.add((x[0] / Fraction(pair.m) ** x[1]) % 1)
    return len(keys)


def brute_convolution(pair: HeckePair, f1, f2) -> dict:
    """Convolution of bi-invariant functions summed over all of ``G``, divided by ``|Gamma|``."""
    F1 = lambda g: f1.terms.get(pair.dcoset_key(g), RadScalar(0))
    F2 = lambda g: f2.terms.get(pair.dcoset_key(g), RadScalar(0))
    n = len(pair.gamma)
    out = {}
    for g in pair.dcosets():
        total = RadScalar(0)
        for h in pair.elements:
            total = total + F1(h) * F2(pair.mul(pair.inv(h), g))
        if total:
            out[g] = total / n
    return out


def brute_right_count(pair: HeckePair, g, bound: int = 12) -> int:
    if pair.finite:
        dc = {pair.mul(pair.mul(a, g), b) for a in pair.gamma for b in pair.gamma}
        return len({frozenset(pair.mul(c, x) for c in pair.gamma) for x in dc})
    # Gamma x = Gamma y iff t_x - t_y is an integer
    return len({x[0] % 1 for x in _bs_window(pair, g, bound)})


# pair-core ------------------------------------------------------------------------


def pair_suite(pair: HeckePair, rng: random.Random, n: int = 500) -> Report:
    rep = Report("pair")
    j = pair.to_json
    rand = pair.random_element
    rep.sample("delta_multiplicative", n, lambda: (rand(rng), rand(rng)),
               lambda g, h: pair.Delta(pair.mul(g, h)) == pair.Delta(g) * pair.Delta(h),
               lambda g, h: {"g": j(g), "h": j(h)})
    rep.sample("L_equals_R_of_inverse", n, lambda: (rand(rng),),
               lambda g: pair.L(g) == pair.R(pair.inv(g)) == brute_right_count(pair, pair.inv(g), 6),
               lambda g: {"g": j(g)})
    rep.sample("L_matches_enumeration", min(n, 100), lambda: (rand(rng),),
               lambda g: pair.L(g) == brute_left_count(pair, g, 6),
               lambda g: {"g": j(g)})
    rep.sample("L_constant_on_double_cosets", n,
               lambda: (rand(rng), pair.random_gamma(rng), pair.random_gamma(rng)),
               lambda g, a, b: pair.L(pair.prod(a, g, b)) == pair.L(g) and pair.R(pair.prod(a, g, b)) == pair.R(g),
               lambda g, a, b: {"g": j(g), "left": j(a), "right": j(b)})
    rep.sample("canonical_coset_well_defined", n, lambda: (rand(rng), pair.random_gamma(rng)),
               lambda g, a: pair.canonical_coset(pair.mul(g, a)) == pair.canonical_coset(g),
               lambda g, a: {"g": j(g), "gamma": j(a)})
    if pair.finite:
        ok = True
        for g in pair.dcosets():
            dc = {pair.mul(pair.mul(a, g), b) for a in pair.gamma for b in pair.gamma}
            union = {pair.mul(c, a) for c in pair.double_coset_left_cosets(g) for a in pair.gamma}
            ok &= dc == union
        rep.add("left_cosets_partition_double_coset", ok, len(pair.dcosets()))
    return rep


# Hecke algebra ------------------------------------------------------------------------


def _inner(u: CosetVector, v: CosetVector) -> RadScalar:
    total = RadScalar(0)
    for k, a in u.terms.items():
        b = v.terms.get(k)
        if b is not None:
            total = total + a.conj() * b
    return total


def hecke_suite(pair: HeckePair, rng: random.Random, n: int = 200, rho_samples: int = 40) -> Report:
    rep = Report("hecke")
    A = HeckeAlgebra(pair)
    js = A.to_json

    def one(gaussian=True):
        return A.random_element(rng, rng.randint(1, 3), gaussian)

    rep.sample("associativity", n, lambda: (one(), one(), one()),
               lambda a, b, c: A.convolve(A.convolve(a, b), c) == A.convolve(a, A.convolve(b, c)),
               lambda a, b, c: {"f1": js(a), "f2": js(b), "f3": js(c)})
    rep.sample("star_involutive", n, lambda: (one(),), lambda a: A.star(A.star(a)) == a,
               lambda a: {"f": js(a)})
    rep.sample("star_antimultiplicative", n, lambda: (one(), one()),
               lambda a, b: A.star(A.convolve(a, b)) == A.convolve(A.star(b), A.star(a)),
               lambda a, b: {"f1": js(a), "f2": js(b)})
    rep.sample("unit", n, lambda: (one(),),
               lambda a: A.convolve(A.unit(), a) == a == A.convolve(a, A.unit()),
               lambda a: {"f": js(a)})
    rep.sample("rho_faithful_by_reconstruction", n, lambda: (one(),),
               lambda a: A.reconstruct(A.rho_apply(a, A.delta(pair.identity))) == a,
               lambda a: {"f": js(a)})
    if pair.finite:
        rep.sample("convolution_matches_enumeration", min(n, 50), lambda: (one(), one()),
                   lambda a, b: A.convolve(a, b).terms == brute_convolution(pair, a, b),
                   lambda a, b: {"f1": js(a), "f2": js(b)})
        basis = pair.cosets()

        def rho_mul(a, b):
            M = lambda f: A.rho_matrix(f, basis).matrix
            return M(A.convolve(a, b)) == M(a) @ M(b) and M(A.star(a)) == M(a).H

        rep.sample("rho_star_homomorphism_full_basis", rho_samples, lambda: (one(), one()), rho_mul,
                   lambda a, b: {"f1": js(a), "f2": js(b)})
    else:
        def vec():
            return A.vector([(pair.random_element(rng), ONE) for _ in range(2)])

        def rho_vec(a, b, u, v):
            lhs = A.rho_apply(A.convolve(a, b), v)
            if lhs != A.rho_apply(a, A.rho_apply(b, v)):
                return False
            return _inner(A.rho_apply(a, u), v) == _inner(u, A.rho_apply(A.star(a), v))

        rep.sample("rho_star_homomorphism_on_vectors", rho_samples, lambda: (one(), one(), vec(), vec()),
                   rho_vec, lambda a, b, u, v: {"f1": js(a), "f2": js(b), "u": A.vector_to_json(u),
                                                 "v": A.vector_to_json(v)})
    return rep


# embeddings of section algebras ---------------------------------------------------------


def embedding_suite(alg: BundleAlgebra, H, K, L, rng: random.Random, n: int = 200, other=None) -> Report:
    """``L ⊆ K ⊆ H``; ``other`` is a second tag for direct-limit products."""
    rep = Report("embedding")
    js = alg.to_json
    E = alg.embed_section

    def sec(T):
        return alg.random_section(T, rng, rng.randint(1, 4), True)

    rep.sample("embedding_multiplicative", n, lambda: (sec(H), sec(H)),
               lambda f, g: E(alg.section_mul(f, g), K) == alg.section_mul(E(f, K), E(g, K)),
               lambda f, g: {"f": js(f), "g": js(g)})
    rep.sample("embedding_preserves_star", n, lambda: (sec(H),),
               lambda f: E(alg.star(f), K) == alg.star(E(f, K)), lambda f: {"f": js(f)})
    rep.sample("embedding_injective", n, lambda: (sec(H),),
               lambda f: f.is_zero() or (not E(f, K).is_zero() and alg.descend(E(f, K), H) == f),
               lambda f: {"f": js(f)})
    rep.sample("embedding_transitive", n, lambda: (sec(H),),
               lambda f: E(E(f, K), L) == E(f, L), lambda f: {"f": js(f)})
    rep.sample("multiplier_compatibility", n, lambda: (sec(H), sec(K)),
               lambda f, g: alg.section_mul(f, g) == alg.section_mul(E(f, K), g),
               lambda f, g: {"f": js(f), "g": js(g)})
    if other is not None:
        triv = alg.pair.trivial_tag

        def dlim(f, g):
            prod = alg.mul(f, g)
            return E(prod, triv) == alg.section_mul(E(f, triv), E(g, triv))

        rep.sample("direct_limit_product_matches_finest_level", n, lambda: (sec(H), sec(other)), dlim,
                   lambda f, g: {"f": js(f), "g": js(g)})
    return rep


def pi_k_suite(alg: BundleAlgebra, H, K, rng: random.Random, n: int = 50) -> Report:
    rep = Report("pi_K")
    pi = R.regular_rep(alg, H)
    piK = R.pi_K(pi, K)
    js = alg.to_json

    def sec(T):
        return alg.random_section(T, rng, rng.randint(1, 5), True)

    worst = []

    def ineq(f):
        a, b = spectral_norm(pi(f)), spectral_norm(piK(alg.embed_section(f, K)))
        worst.append(a - b)
        return a <= b + NORM_TOL

    rep.sample("norm_inequality", n, lambda: (sec(H),), ineq, lambda f: {"f": js(f)})
    rep.properties[-1]["max_excess"] = max(worst) if worst else 0.0
    rep.sample("aggregated_vector_identity", min(n, 20), lambda: (sec(H),),
               lambda f: R.check_aggregated_vectors(pi, piK, f), lambda f: {"f": js(f)})
    rep.sample("pi_K_star_homomorphism", min(n, 20), lambda: (sec(K), sec(K)),
               lambda f, g: piK(alg.section_mul(f, g)) == piK(f) @ piK(g) and piK(alg.star(f)) == piK(f).H,
               lambda f, g: {"f": js(f), "g": js(g)})
    rep.add("zero_section_to_zero", piK(alg.zero(K)).is_zero())
    return rep


# crossed product ------------------------------------------------------------------------


def _random_crossed(xp: CrossedProduct, rng: random.Random, gaussian: bool = True):
    return xp.random_element(rng, rng.randint(1, 2), rng.randint(1, 2), gaussian)


def crossed_suite(xp: CrossedProduct, rng: random.Random, n: int = 100, n_expect: int = 200) -> Report:
    rep = Report("crossed")
    js = xp.to_json
    A, p = xp.alg, xp.pair
    G = p.gamma_tag

    def one():
        return _random_crossed(xp, rng)

    rep.sample("associativity", n, lambda: (one(), one(), one()),
               lambda a, b, c: xp.mul(xp.mul(a, b), c) == xp.mul(a, xp.mul(b, c)),
               lambda a, b, c: {"f1": js(a), "f2": js(b), "f3": js(c)})
    rep.sample("star_antimultiplicative", n, lambda: (one(), one()),
               lambda a, b: xp.star(xp.mul(a, b)) == xp.mul(xp.star(b), xp.star(a)),
               lambda a, b: {"f1": js(a), "f2": js(b)})
    rep.sample("star_involutive", n, lambda: (one(),), lambda a: xp.star(xp.star(a)) == a,
               lambda a: {"f": js(a)})
    if xp.space.finite:
        u = xp.unit()
        rep.sample("unit", n, lambda: (one(),), lambda a: xp.mul(u, a) == a == xp.mul(a, u),
                   lambda a: {"f": js(a)})
    rep.sample("expectation_idempotent", n_expect, lambda: (one(),),
               lambda a: xp.expectation(xp.from_section(xp.expectation(a))) == xp.expectation(a),
               lambda a: {"f": js(a)})
    rep.sample("expectation_positive_sum_of_squares", n_expect, lambda: (one(),),
               lambda a: xp.positive_form(a) == xp.expectation(xp.mul(xp.star(a), a)),
               lambda a: {"f": js(a)})

    def bimodule(a, s):
        sa = xp.from_section(s)
        E = xp.expectation
        return (A.equal(E(xp.mul(sa, a)), A.mul(s, E(a)))
                and A.equal(E(xp.mul(a, sa)), A.mul(E(a), s)))

    rep.sample("expectation_bimodule_linear", n_expect,
               lambda: (one(), A.random_section(G, rng, rng.randint(1, 3), True)), bimodule,
               lambda a, s: {"f": js(a), "section": A.to_json(s)})

    def faithful(a):
        t = xp.section_trace(xp.expectation(xp.mul(xp.star(a), a)))
        if a.is_zero():
            return not t
        return t.is_rational() and t.as_fraction() > 0

    rep.sample("expectation_faithful", n_expect, lambda: (one(),), faithful, lambda a: {"f": js(a)})
    rep.sample("spanning_elements_reproduce", min(n, 50), lambda: (one(),),
               lambda a: _spans(xp, a), lambda a: {"f": js(a)})
    if xp.space.finite and p.finite:
        dcs = p.dcosets()
        rep.sample("hecke_multipliers_match_unit_realization", min(n, 30),
                   lambda: (one(), rng.choice(dcs)),
                   lambda a, g: (xp.hecke_left(g, a) == xp.mul(xp.hecke_element(g), a)
                                 and xp.hecke_right(a, g) == xp.mul(a, xp.hecke_element(g))),
                   lambda a, g: {"f": js(a), "dcoset": p.to_json(g)})
    if xp.bundle.trivial_line and xp.space.is_set and p.finite:
        rep.add("covariant_identity_all_triples", *_covariance_all_triples(xp))
    return rep


def _spans(xp: CrossedProduct, a) -> bool:
    try:
        xp.spanning_decomposition(a)
        return True
    except ValueError:
        return False


def _covariance_all_triples(xp: CrossedProduct) -> tuple:
    p, A = xp.pair, xp.alg
    G = p.gamma_tag
    count = 0
    for g in p.dcosets():
        for s in p.dcosets():
            for x in xp.space.units():
                lhs = xp.hecke_right(xp.hecke_left(g, xp.from_section(A.indicator(x, G))), s)
                rhs = xp.sum(xp.spanning_element(ONE, xp.space.act(x, u), p.mul(p.inv(u), v))
                             for u in p.double_coset_left_cosets(p.inv(g))
                             for v in p.double_coset_left_cosets(s))
                count += 1
                if lhs != rhs:
                    return False, count, {"g": p.to_json(g), "x": xp.space.point_to_json(x), "s": p.to_json(s)}
    return True, count


# regular representation and norms ---------------------------------------------------------


def regular_rep_suite(xp: CrossedProduct, pi: R.FiniteRep, rng: random.Random, n: int = 30) -> Report:
    rep = Report("regular_representation")
    js = xp.to_json
    A, p = xp.alg, xp.pair
    G = p.gamma_tag
    I = lambda f: R.integrated_form(pi, xp, f)

    def one():
        return _random_crossed(xp, rng)

    rep.sample("integrated_form_multiplicative", n, lambda: (one(), one()),
               lambda a, b: I(xp.mul(a, b)) == I(a) @ I(b),
               lambda a, b: {"f1": js(a), "f2": js(b)})
    rep.sample("integrated_form_adjoint", n, lambda: (one(),), lambda a: I(xp.star(a)) == I(a).H,
               lambda a: {"f": js(a)})
    rep.sample("restriction_is_pi_alpha", n, lambda: (A.random_section(G, rng, 3, True),),
               lambda s: I(xp.from_section(s)) == R.pi_alpha(pi, s), lambda s: {"section": A.to_json(s)})
    rep.sample("matches_covariant_assembly", min(n, 10), lambda: (one(),),
               lambda a: I(a) == R.integrated_form_covariant(pi, xp, a), lambda a: {"f": js(a)})
    cos = p.cosets()

    def sigma_all(a):
        return all(R.sigma_compress(pi, xp, a, g, h)["equal"] for g in cos for h in cos)

    rep.sample("sigma_compression_all_pairs", min(n, 5), lambda: (one(),), sigma_all, lambda a: {"f": js(a)})

    def reconstruct(a):
        blocks = R.identity_row_blocks(pi, xp, I(a))
        if any(blocks[h] != pi(xp.eval(a, h)) for h in cos):
            return False
        zero_rows = all(b.is_zero() for b in blocks.values())
        return zero_rows == a.is_zero()

    rep.sample("faithful_by_reconstruction", n, lambda: (one(),), reconstruct, lambda a: {"f": js(a)})
    rep.add("pi_injective_on_sections", _pi_injective(pi))
    return rep


def _pi_injective(pi: R.FiniteRep) -> bool:
    """Exact rank of the images of a basis of ``C_c(A/N)`` equals its dimension."""
    A = pi.alg
    H = pi.tag if pi.tag is not None else A.pair.core_tag()
    basis = []
    for x in sorted({A.space.orbit_key(y, H) for y in A.space.points()}, key=A.space.sort_key):
        for e in A.bundle.basis(x):
            basis.append(Section(H, {x: e}))
    rows = []
    for s in basis:
        M = pi(s)
        rows.append([M[(i, j)] for i in range(M.shape[0]) for j in range(M.shape[1])])
    try:
        return exact_rank(rows) == len(basis)
    except ValueError:
        mat = np.array([[c.to_complex() for c in r] for r in rows])
        return int(np.linalg.matrix_rank(mat)) == len(basis)


def norm_suite(xp: CrossedProduct, pi: R.FiniteRep, rng: random.Random, n: int = 100) -> Report:
    rep = Report("reduced_norm")
    A, p = xp.alg, xp.pair
    G = p.gamma_tag
    dev = []

    def restricted(s):
        a = R.reduced_norm(pi, xp, xp.from_section(s))
        b = spectral_norm(pi(s))
        dev.append(abs(a - b))
        return abs(a - b) <= NORM_TOL

    rep.sample("reduced_norm_on_sections", n, lambda: (A.random_section(G, rng, rng.randint(1, 4), True),),
               restricted, lambda s: {"section": A.to_json(s)})
    rep.properties[-1]["max_deviation"] = max(dev) if dev else 0.0
    if xp.space.finite:
        one_norm = R.reduced_norm(pi, xp, xp.unit())
        rep.add("unit_has_norm_one", abs(one_norm - 1.0) <= NORM_TOL, value=one_norm)
    cos = p.cosets()

    def bound(a):
        r = R.reduced_norm(pi, xp, a)
        for g in cos:
            e = spectral_norm(pi(xp.expectation(a, g)))
            if e > float(sqrt_pos_rational(p.Delta(p.inv(g))).to_complex().real) * r + NORM_TOL:
                return False
        return True

    rep.sample("expectation_bound", n, lambda: (_random_crossed(xp, rng),), bound,
               lambda a: {"f": xp.to_json(a)})
    return rep


# LLN and Stone-von Neumann -------------------------------------------------------------------


def lln_suite(xp: CrossedProduct, rng: random.Random, n: int = 100, norm_samples: int = 20) -> Report:
    rep = Report("lln")
    L = LLNAlgebra(xp)
    js, jl = xp.to_json, L.to_json
    p = xp.pair

    def one():
        return _random_crossed(xp, rng)

    rep.sample("phi_multiplicative", n, lambda: (one(), one()),
               lambda a, b: L.phi(xp.mul(a, b)) == L.mul(L.phi(a), L.phi(b)),
               lambda a, b: {"f1": js(a), "f2": js(b)})
    rep.sample("phi_preserves_star", n, lambda: (one(),), lambda a: L.phi(xp.star(a)) == L.star(L.phi(a)),
               lambda a: {"f": js(a)})
    rep.sample("phi_inverse_left", n, lambda: (one(),), lambda a: L.phi_inv(L.phi(a)) == a,
               lambda a: {"f": js(a)})
    rep.sample("phi_inverse_right", n, lambda: (L.random_element(rng, 3, True),),
               lambda F: L.phi(L.phi_inv(F)) == F, lambda F: {"lln": jl(F)})
    rep.sample("lln_associativity", n,
               lambda: tuple(L.random_element(rng, 2, True) for _ in range(3)),
               lambda a, b, c: L.mul(L.mul(a, b), c) == L.mul(a, L.mul(b, c)),
               lambda a, b, c: {"f1": jl(a), "f2": jl(b), "f3": jl(c)})
    rep.sample("lln_star_antimultiplicative", n,
               lambda: (L.random_element(rng, 2, True), L.random_element(rng, 2, True)),
               lambda a, b: L.star(L.mul(a, b)) == L.mul(L.star(b), L.star(a)),
               lambda a, b: {"f1": jl(a), "f2": jl(b)})
    if p.finite and xp.space.finite:
        pts = xp.space.points()
        unit = L.diagonal_unit()
        rep.sample("diagonal_unit_is_identity", n, lambda: (L.random_element(rng, 3, True),),
                   lambda F: L.mul(unit, F) == F == L.mul(F, unit), lambda F: {"lln": jl(F)})
        rep.sample("pi_x_of_phi_is_integrated_evaluation", norm_samples, lambda: (one(), rng.choice(pts)),
                   lambda a, x: L.pi_x_matrix(x, L.phi(a)) == R.integrated_form(R.evaluation_rep(xp.alg, x), xp, a),
                   lambda a, x: {"f": js(a), "x": xp.space.point_to_json(x)})
        rep.sample("pi_x_star_property", norm_samples, lambda: (L.random_element(rng, 3, True), rng.choice(pts)),
                   lambda F, x: L.pi_x_matrix(x, L.star(F)) == L.pi_x_matrix(x, F).H,
                   lambda F, x: {"lln": jl(F), "x": xp.space.point_to_json(x)})
        reg = R.regular_rep(xp.alg)
        dev = []

        def sup_norm(a):
            s = max(spectral_norm(L.pi_x_matrix(x, L.phi(a))) for x in pts)
            r = R.reduced_norm(reg, xp, a)
            dev.append(abs(s - r))
            return abs(s - r) <= NORM_TOL

        rep.sample("sup_pi_x_norm_is_reduced_norm", norm_samples, lambda: (one(),), sup_norm,
                   lambda a: {"f": js(a)})
        rep.properties[-1]["max_deviation"] = max(dev) if dev else 0.0
    return rep


def stone_von_neumann_suite(xp: CrossedProduct, rng: random.Random, window: list | None = None,
                            unitaries: int = 3) -> Report:
    rep = Report("stone_von_neumann")
    p = xp.pair
    svn = svn_suite(xp, window)
    rep.add("matrix_unit_relations", svn["relations_hold"], svn["units"],
            svn["failures"][0] if svn["failures"] else None)
    if "full_rank" in svn:
        rep.add("images_are_elementary_matrices", svn["images_elementary"])
        rep.add("images_span_full_matrix_algebra", svn["full_rank"], rank=svn["image_rank"])
    if not p.finite:
        return rep
    cp = R.regular_covariant_pair(p)
    chk = R.covariant_pair_check(cp)
    rep.add("regular_pair_is_covariant", chk["holds"], counterexample=(chk["failures"] or [None])[0],
            max_deviation=chk["max_deviation"])
    nrng = np.random.default_rng(rng.randrange(2**32))
    cos = p.cosets()
    for k in range(unitaries):
        amp = R.amplify_pair(cp, k + 1)
        U = R.random_unitary(amp.dim, nrng)
        conj = R.conjugate_pair(amp, U)
        chk = R.covariant_pair_check(conj)
        rep.add(f"conjugated_amplification_{k + 1}_is_covariant", chk["holds"],
                max_deviation=chk["max_deviation"])
        rep.add(f"conjugated_amplification_{k + 1}_units", _units_numeric(conj, cos))
        rep.add(f"conjugated_amplification_{k + 1}_equivalence", _equivalence(amp, conj, U, cos))
    bad = R.covariant_pair_check(R.corrupt_pair(cp))
    rep.add("corrupted_pair_rejected", not bad["holds"], max_deviation=bad["max_deviation"])
    return rep


def _units_numeric(cp: R.CovariantPair, cos: list) -> bool:
    """The images of the matrix units satisfy the relations up to the norm tolerance."""
    p = cp.pair
    T = {(g, h): to_numpy(cp.unit_image(g, h)) for g in cos for h in cos}
    for (g, h), t in T.items():
        w = float(p.Delta(p.mul(p.inv(g), h)))
        if np.max(np.abs(t.conj().T - w * T[(h, g)]), initial=0.0) > NORM_TOL:
            return False
        for s in cos:
            for u in cos:
                want = T[(g, u)] if h == s else np.zeros_like(t)
                if np.max(np.abs(t @ T[(s, u)] - want), initial=0.0) > NORM_TOL:
                    return False
    total = sum(T[(g, g)] for g in cos)
    return bool(np.max(np.abs(total - np.eye(total.shape[0]))) <= NORM_TOL)


def _rebuild(cp: R.CovariantPair, cos: list) -> tuple[dict, dict]:
    """Recover the pair from its matrix-unit images."""
    p = cp.pair
    pi = {x: to_numpy(cp.unit_image(x, x)) for x in cos}
    mu: dict = {}
    for x in cos:
        for y in cos:
            d = p.dcoset_key(p.mul(p.inv(x), y))
            m = to_numpy(cp.unit_image(x, y))
            mu[d] = mu[d] + m if d in mu else m
    return pi, mu


def _equivalence(amp: R.CovariantPair, conj: R.CovariantPair, U: np.ndarray, cos: list) -> bool:
    """Conjugating the pair conjugates the integrated images, and the images determine the pair."""
    Uh = U.conj().T
    for g in cos:
        for h in cos:
            a = U @ to_numpy(amp.unit_image(g, h)) @ Uh
            if np.max(np.abs(a - to_numpy(conj.unit_image(g, h)))) > NORM_TOL:
                return False
    pi1, mu1 = _rebuild(amp, cos)
    pi2, mu2 = _rebuild(conj, cos)
    for x in cos:
        if np.max(np.abs(pi1[x] - to_numpy(amp.pi[x]))) > NORM_TOL:
            return False
        if np.max(np.abs(U @ pi1[x] @ Uh - pi2[x])) > NORM_TOL:
            return False
    for d in mu1:
        if np.max(np.abs(mu1[d] - to_numpy(amp.mu[d]))) > NORM_TOL:
            return False
        if np.max(np.abs(U @ mu1[d] @ Uh - mu2[d])) > NORM_TOL:
            return False
    return True


# EQ bundles ---------------------------------------------------------------------------------


def eq_suite(B: GradedStarAlgebra, rng: random.Random, n: int = 100, n_expect: int = 200,
             quotient_tags: list | None = None) -> Report:
    rep = Report("eq_bundle")
    bundle = EQBundle(B)
    fa = check_fell_axioms(bundle)
    rep.add("fell_axioms", not fa, counterexample=fa[:1] or None)
    da = check_dual_action(bundle)
    rep.add("dual_action_automorphisms", not da, counterexample=da[:1] or None)
    pair = B.pair
    tags = quotient_tags or [pair.trivial_tag, pair.gamma_tag]
    for H in tags:
        r = compare_quotient(B, H)
        name = "trivial" if H.conjugators is None else ("gamma" if H.conjugators == () else str(H.key))
        rep.add(f"orbit_bundle_equals_direct_quotient[{name}]", r["holds"], r["arrows"],
                r["failures"][:1] or None)
    xp = CrossedProduct(BundleAlgebra(bundle))
    sub = crossed_suite(xp, rng, n, n_expect)
    for prop in sub.properties:
        prop = dict(prop)
        prop["property"] = "crossed_product." + prop["property"]
        rep.properties.append(prop)
    return rep


# L1 norms ------------------------------------------------------------------------------------


def l1_suite(pair: HeckePair, xp: CrossedProduct, rng: random.Random, n: int = 200) -> Report:
    rep = Report("l1")
    A = HeckeAlgebra(pair)

    def h():
        return A.random_element(rng, rng.randint(1, 3), False)

    rep.sample("hecke_submultiplicative", n, lambda: (h(), h()),
               lambda a, b: A.l1_norm(A.convolve(a, b)) <= A.l1_norm(a) * A.l1_norm(b),
               lambda a, b: {"f1": A.to_json(a), "f2": A.to_json(b)})
    rep.sample("hecke_star_invariant", n, lambda: (h(),),
               lambda a: A.l1_norm(A.star(a)) == A.l1_norm(a), lambda a: {"f": A.to_json(a)})
    rep.sample("hecke_l1_exact", n, lambda: (h(),), lambda a: isinstance(A.l1_norm(a), Fraction),
               lambda a: {"f": A.to_json(a)})

    def c():
        return _random_crossed(xp, rng, gaussian=False)

    def submul(a, b):
        lhs, r1, r2 = xp.l1_norm(xp.mul(a, b)), xp.l1_norm(a), xp.l1_norm(b)
        if isinstance(lhs, Fraction) and isinstance(r1, Fraction) and isinstance(r2, Fraction):
            return lhs <= r1 * r2
        return float(lhs) <= float(r1) * float(r2) + NORM_TOL

    def star_inv(a):
        x, y = xp.l1_norm(xp.star(a)), xp.l1_norm(a)
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            return x == y
        return abs(float(x) - float(y)) <= NORM_TOL

    rep.sample("crossed_submultiplicative", n, lambda: (c(), c()), submul,
               lambda a, b: {"f1": xp.to_json(a), "f2": xp.to_json(b)})
    rep.sample("crossed_star_invariant", n, lambda: (c(),), star_inv, lambda a: {"f": xp.to_json(a)})
    if xp.bundle.trivial_line:
        rep.sample("crossed_l1_exact", n, lambda: (c(),), lambda a: isinstance(xp.l1_norm(a), Fraction),
                   lambda a: {"f": xp.to_json(a)})
    return rep


# runners ---------------------------------------------------------------------------------------


def _suite_rng(seed: int, name: str) -> random.Random:
    # one stream per suite so results do not depend on scheduling
    return random.Random(f"{seed}:{name}")


def _run_tasks(tasks: list, seed: int, threads: int | None) -> list[Report]:
    from concurrent.futures import ThreadPoolExecutor

    def go(task):
        name, fn = task
        return fn(_suite_rng(seed, name))

    if threads and threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(go, tasks))
    else:
        reports = [go(t) for t in tasks]
    return sorted(reports, key=lambda r: r.name)


def _probe_tag(pair: HeckePair):
    """A proper subgroup of ``Gamma`` from the lattice, or the trivial tag if ``Gamma`` is normal."""
    G = pair.gamma_tag
    for g in pair.dcosets():
        C = pair.conjugate_tag(g, G)
        K = pair.meet(G, C)
        if pair.index(G, K) > 1:
            return K, C
    return pair.trivial_tag, None


def check_pair(pair: HeckePair, seed: int = 0, samples: int | None = None,
               threads: int | None = None) -> list[Report]:
    """Every suite that applies to ``pair``, on the translation bundle over ``X = G``."""
    from .eq import group_algebra
    from .instances import bs_window, translation_crossed

    def n(default):
        return default if samples is None else samples

    xp = lambda: translation_crossed(pair)
    tasks = [
        ("pair", lambda r: pair_suite(pair, r, n(500))),
        ("hecke", lambda r: hecke_suite(pair, r, n(200), n(40))),
        ("crossed", lambda r: crossed_suite(xp(), r, n(100), n(200))),
        ("l1", lambda r: l1_suite(pair, xp(), r, n(200))),
        ("lln", lambda r: lln_suite(xp(), r, n(100), n(20))),
    ]
    if pair.finite:
        tasks.append(("stone_von_neumann", lambda r: stone_von_neumann_suite(xp(), r)))

        def reg(r):
            x = xp()
            return regular_rep_suite(x, R.regular_rep(x.alg), r, n(30))

        def norms(r):
            x = xp()
            return norm_suite(x, R.regular_rep(x.alg), r, n(100))

        def emb(r):
            x = xp()
            K, other = _probe_tag(pair)
            return embedding_suite(x.alg, pair.gamma_tag, K, pair.trivial_tag, r, n(200), other)

        def pik(r):
            x = xp()
            K, _ = _probe_tag(pair)
            return pi_k_suite(x.alg, pair.gamma_tag, K, r, n(50))

        tasks += [("regular_representation", reg), ("reduced_norm", norms), ("embedding", emb),
                  ("pi_K", pik), ("eq_bundle", lambda r: eq_suite(group_algebra(pair), r, n(100), n(200)))]
    elif isinstance(pair, BaumslagSolitarPair):
        tasks.append(("stone_von_neumann", lambda r: stone_von_neumann_suite(xp(), r, bs_window(pair))))
    return _run_tasks(tasks, seed, threads)


# acceptance criteria -------------------------------------------------------------------------


def _t1_square(rng: random.Random) -> Report:
    from .instances import s3_pair

    rep = Report("t1_square")
    p = s3_pair()
    A = HeckeAlgebra(p)
    T = A.basis(p.parse([3, 2, 1]))
    sq = A.convolve(T, T)
    rep.add("t1_square_is_2_unit_plus_t1", sq == A.add(A.scale(2, A.unit()), T),
            counterexample={"product": A.to_json(sq)})
    rep.add("t1_square_matches_enumeration", sq.terms == brute_convolution(p, T, T))
    return rep


def _criterion_reports(number: int, seed: int) -> list[Report]:
    from .eq import group_algebra
    from .instances import bs_pair, bs_window, s3_pair, s4_k_tag, s4_pair, translation_crossed, z2_pair

    pairs = {"S3": s3_pair, "S4": s4_pair, "BS2": bs_pair}

    def on(names, make):
        tasks = []
        for nm in names:
            p = pairs[nm]()
            tasks.append((nm, lambda r, p=p, nm=nm: _rename(make(p, r), nm)))
        return tasks

    if number == 1:
        tasks = on(["S3", "S4", "BS2"], lambda p, r: pair_suite(p, r, 500))
    elif number == 2:
        tasks = on(["S3", "S4", "BS2"], lambda p, r: hecke_suite(p, r, 200, 40)) + [("T1", _t1_square)]
    elif number in (3, 4):
        def make(p, r):
            x = translation_crossed(p)
            K = s4_k_tag(p)
            if number == 4:
                return pi_k_suite(x.alg, p.gamma_tag, K, r, 50)
            other = p.conjugate_tag(p.parse([1, 2, 4, 3]), p.gamma_tag)
            return embedding_suite(x.alg, p.gamma_tag, K, p.trivial_tag, r, 200, other)
        tasks = on(["S4"], make)
    elif number == 5:
        tasks = on(["S3", "S4"], lambda p, r: crossed_suite(translation_crossed(p), r, 100, 200))
    elif number == 6:
        def make(p, r):
            x = translation_crossed(p)
            return regular_rep_suite(x, R.regular_rep(x.alg), r, 30)
        tasks = on(["S3", "S4"], make)
    elif number == 7:
        def make(p, r):
            x = translation_crossed(p)
            return norm_suite(x, R.regular_rep(x.alg), r, 100)
        tasks = on(["S3", "S4"], make)
    elif number == 8:
        tasks = on(["S3", "BS2"], lambda p, r: lln_suite(translation_crossed(p), r, 100, 20))
    elif number == 9:
        tasks = on(["S3", "S4"], lambda p, r: stone_von_neumann_suite(translation_crossed(p), r))
        tasks += on(["BS2"], lambda p, r: stone_von_neumann_suite(translation_crossed(p), r, bs_window(p)))
    elif number == 10:
        tasks = [
            ("Z2", lambda r: _rename(eq_suite(group_algebra(z2_pair()), r, 100, 200), "Z2")),
            ("Z2_whole", lambda r: _rename(eq_suite(group_algebra(z2_pair(True)), r, 100, 200), "Z2_whole")),
            ("S3", lambda r: _rename(eq_suite(group_algebra(s3_pair()), r, 100, 200), "S3")),
        ]
    elif number == 11:
        tasks = on(["S3", "S4", "BS2"], lambda p, r: l1_suite(p, translation_crossed(p), r, 200))
    else:
        raise ValueError(f"no criterion {number}")
    return _run_tasks(tasks, seed * 100 + number, None)


def _rename(rep: Report, instance: str) -> Report:
    rep.name = f"{rep.name}[{instance}]"
    return rep


CRITERIA = {
    1: ("Hecke-pair arithmetic", 5.0),
    2: ("Hecke algebra", 10.0),
    3: ("embeddings of section algebras", 20.0),
    4: ("pi^K norm inequality", None),
    5: ("crossed product core", None),
    6: ("regular representation", None),
    7: ("reduced-norm coherence", None),
    8: ("LLN equivalence", None),
    9: ("Stone-von Neumann at finite scale", 30.0),
    10: ("graded-algebra bundle", 30.0),
    11: ("L1 norms", None),
}


def acceptance(number: int, seed: int = 0) -> dict:
    """Run one acceptance criterion; the time limit counts toward the verdict."""
    import time

    title, limit = CRITERIA[number]
    start = time.perf_counter()
    reports = _criterion_reports(number, seed)
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    return {
        "criterion": number,
        "title": title,
        "pass": in_time and all(r.passed for r in reports),
        "elapsed": elapsed,
        "limit": limit,
        "within_limit": in_time,
        "reports": [r.to_json() for r in reports],
    }
