"""Finite-dimensional *-representations of section algebras and crossed products.

Operators on ``H ⊗ l2(G/Gamma)`` are laid out coset-major: the basis vector
``xi_i ⊗ delta_{c}`` sits at index ``c * dim + i`` where ``c`` indexes the
canonical cosets.  With that layout ``1 ⊗ rho(f)`` is ``kron(rho(f), I_dim)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bundles import BundleAlgebra, Section
from .crossed import CrossedElement, CrossedProduct
from .hecke import HeckeAlgebra
from .matrices import ExactMatrix, spectral_norm, to_numpy
from .pair import SubgroupTag
from .scalars import ONE, RadScalar, sqrt_pos_rational

__all__ = [
    "FiniteRep",
    "evaluation_rep",
    "regular_rep",
    "section_norm",
    "direct_sum",
    "amplify",
    "pi_alpha",
    "one_tensor_rho",
    "integrated_form",
    "integrated_form_covariant",
    "sigma_compress",
    "identity_row_blocks",
    "pi_K",
    "aggregated_vector",
    "check_aggregated_vectors",
    "reduced_norm",
    "CovariantPair",
    "regular_covariant_pair",
    "covariant_pair_check",
    "random_unitary",
]


@dataclass
class FiniteRep:
    """``image`` sends a section over ``tag`` to a ``dim x dim`` matrix.

    ``tag`` of ``None`` means the representation is defined on the whole
    direct limit; otherwise sections over coarser tags are embedded first.
    """

    alg: BundleAlgebra
    dim: int
    image: Callable[[Section], ExactMatrix]
    tag: SubgroupTag | None = None
    name: str = ""

    def __call__(self, S: Section) -> ExactMatrix:
        if self.tag is not None and S.tag != self.tag:
            S = self.alg.embed_section(S, self.tag)
        return self.image(S)


def evaluation_rep(alg: BundleAlgebra, point) -> FiniteRep:
    """``f -> f(point)`` on a line bundle over a set; one-dimensional and defined on every tag."""
    if not alg.bundle.trivial_line:
        raise ValueError("evaluation representations need the trivial line bundle")

    def image(S):
        return ExactMatrix((1, 1), {(0, 0): alg.value_at(S, point)[0]})

    return FiniteRep(alg, 1, image, None, f"eval@{point}")


def _orbit_basis(alg: BundleAlgebra, H: SubgroupTag) -> list:
    sp = alg.space
    reps = sorted({sp.orbit_key(x, H) for x in sp.points()}, key=sp.sort_key)
    return [(x, i) for x in reps for i in range(alg.bundle.dim(x))]


def _section_trace(alg: BundleAlgebra, S: Section) -> RadScalar:
    total = RadScalar(0)
    for x, a in S.terms.items():
        if alg.space.is_unit(x):
            total = total + alg.bundle.trace(x, a)
    return total


def regular_rep(alg: BundleAlgebra, H: SubgroupTag | None = None) -> FiniteRep:
    """Left multiplication on ``C_c(A/H)`` with the inner product ``tau(u* v)``.

    ``tau`` sums the fiber traces over unit orbits.  ``H`` defaults to the
    normal core, which makes the representation faithful on the direct limit
    for finite groups.  The fiber bases must be orthogonal for ``tau``; the
    Gram diagonal is absorbed exactly with square roots.
    """
    sp, pair = alg.space, alg.pair
    if not sp.finite:
        raise ValueError("the regular representation needs a finite space")
    if H is None:
        H = pair.core_tag()
    basis = _orbit_basis(alg, H)
    index = {b: n for n, b in enumerate(basis)}
    vecs = []
    for x, i in basis:
        e = alg.bundle.basis(x)[i]
        vecs.append(Section(H, {x: e}))
    weights = []
    for n, u in enumerate(vecs):
        us = alg.star(u)
        for m, v in enumerate(vecs):
            t = _section_trace(alg, alg.section_mul(us, v))
            if m == n:
                if not (t.is_rational() and t.as_fraction() > 0):
                    raise ValueError("trace is not positive on a basis vector")
                weights.append(t.as_fraction())
            elif t:
                raise ValueError("fiber basis is not orthogonal for the trace")
    root = [sqrt_pos_rational(w) for w in weights]
    dim = len(basis)

    def image(S):
        ent: dict = {}
        for m, v in enumerate(vecs):
            out = alg.section_mul(S, v)
            for y, b in out.terms.items():
                for i, c in enumerate(b):
                    if c:
                        n = index[(y, i)]
                        val = c if weights[n] == weights[m] else c * root[n] / root[m]
                        ent[(n, m)] = ent.get((n, m), RadScalar(0)) + val
        return ExactMatrix((dim, dim), ent)

    return FiniteRep(alg, dim, image, H, "regular")


def section_norm(alg: BundleAlgebra, S: Section) -> float:
    """C*-norm of ``S`` through the regular representation on its own tag."""
    cache = alg.__dict__.setdefault("_regular_reps", {})
    rep = cache.get(S.tag)
    if rep is None:
        rep = cache[S.tag] = regular_rep(alg, S.tag)
    return spectral_norm(rep(S))


def direct_sum(reps: list[FiniteRep]) -> FiniteRep:
    alg = reps[0].alg
    dim = sum(r.dim for r in reps)

    def image(S):
        out = ExactMatrix((dim, dim))
        off = 0
        for r in reps:
            out.place(off, off, r(S))
            off += r.dim
        return out

    return FiniteRep(alg, dim, image, None, "+".join(r.name for r in reps))


def amplify(rep: FiniteRep, k: int) -> FiniteRep:
    def image(S):
        return rep(S).kron_left_identity(k)

    return FiniteRep(rep.alg, rep.dim * k, image, rep.tag, f"{k}x{rep.name}")


# regular covariant representation ------------------------------------------


def _cosets(pair) -> list:
    if not pair.finite:
        raise ValueError("G/Gamma must be finite here")
    return pair.cosets()


def pi_alpha(pi: FiniteRep, S: Section) -> ExactMatrix:
    """Block diagonal with ``pi(act_section(h, S))`` in the ``hGamma`` block."""
    alg, pair = pi.alg, pi.alg.pair
    cos = _cosets(pair)
    d = pi.dim
    out = ExactMatrix((d * len(cos), d * len(cos)))
    for c, h in enumerate(cos):
        out.place(c * d, c * d, pi(alg.act_section(h, S)))
    return out


def one_tensor_rho(hecke: HeckeAlgebra, f, dim: int) -> ExactMatrix:
    rm = hecke.rho_matrix(f, _cosets(hecke.pair))
    return rm.matrix.kron_right_identity(dim)


def integrated_form(pi: FiniteRep, xp: CrossedProduct, f: CrossedElement) -> ExactMatrix:
    """Block ``(gGamma, hGamma)`` is ``Delta(g^-1 h)^(1/2) pi(act_section(g, f(g^-1 h Gamma)))``."""
    pair, alg = xp.pair, xp.alg
    cos = _cosets(pair)
    d = pi.dim
    out = ExactMatrix((d * len(cos), d * len(cos)))
    for r, g in enumerate(cos):
        gi = pair.inv(g)
        for c, h in enumerate(cos):
            k = pair.mul(gi, h)
            if pair.dcoset_key(k) not in f.terms:
                continue
            blk = pi(alg.act_section(g, xp.eval(f, k)))
            w = sqrt_pos_rational(pair.Delta(k))
            out.place(r * d, c * d, blk if w == ONE else blk.scale(w))
    return out


def integrated_form_covariant(pi: FiniteRep, xp: CrossedProduct, f: CrossedElement) -> ExactMatrix:
    """The same operator assembled from the covariant pair on spanning elements.

    Each ``[a]_{x Gamma} * Gamma g Gamma * 1_{s(x) g Gamma}`` goes to
    ``pi_alpha([a]_{x Gamma}) (1 ⊗ rho)(Gamma g Gamma) pi_alpha(1_{s(x) g Gamma})``.
    """
    pair, alg, sp = xp.pair, xp.alg, xp.space
    hecke = HeckeAlgebra(pair)
    G = pair.gamma_tag
    d = pi.dim
    n = d * len(_cosets(pair))
    out = ExactMatrix((n, n))
    rho_cache: dict = {}
    for a, x, g in xp.spanning_decomposition(f):
        g0 = pair.dcoset_key(g)
        if g0 not in rho_cache:
            rho_cache[g0] = one_tensor_rho(hecke, hecke.basis(g0), d)
        left = pi_alpha(pi, alg.section(G, [(x, a)]))
        right = pi_alpha(pi, alg.indicator(sp.act(sp.source(x), g), G))
        out = out + left @ rho_cache[g0] @ right
    return out


def sigma_compress(pi: FiniteRep, xp: CrossedProduct, f: CrossedElement, g, h) -> dict:
    """Both sides of ``sigma_g* [pi x (1 ⊗ rho)](f) sigma_h = Delta(g^-1 h)^(1/2) pi(act_section(g, E_{g^-1 h}(f)))``.

    The left side is read off :func:`integrated_form_covariant`.
    """
    pair = xp.pair
    cos = _cosets(pair)
    d = pi.dim
    r = cos.index(pair.canonical_coset(g))
    c = cos.index(pair.canonical_coset(h))
    full = integrated_form_covariant(pi, xp, f)
    lhs = full.block(r * d, c * d, d, d)
    k = pair.mul(pair.inv(g), h)
    rhs = pi(xp.alg.act_section(g, xp.expectation(f, k))).scale(sqrt_pos_rational(pair.Delta(k)))
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def identity_row_blocks(pi: FiniteRep, xp: CrossedProduct, M: ExactMatrix) -> dict:
    """Recover ``pi(f(hGamma))`` from the identity block row of an integrated form.

    That row holds ``Delta(h)^(1/2) pi(f(hGamma))``; for faithful ``pi`` a zero
    row forces ``f = 0``.
    """
    pair = xp.pair
    cos = _cosets(pair)
    d = pi.dim
    r = cos.index(pair.canonical_coset(pair.identity))
    out = {}
    for c, h in enumerate(cos):
        blk = M.block(r * d, c * d, d, d)
        w = sqrt_pos_rational(pair.Delta(h))
        out[h] = blk if w == ONE else ExactMatrix(blk.shape, {k: v / w for k, v in blk.entries.items()})
    return out


def reduced_norm(pi: FiniteRep, xp: CrossedProduct, f: CrossedElement) -> float:
    return spectral_norm(integrated_form(pi, xp, f))


# the extension pi^K ------------------------------------------------------------


def _unit_orbits(alg: BundleAlgebra, K: SubgroupTag) -> list:
    sp = alg.space
    return sorted({sp.orbit_key(u, K) for u in sp.units()}, key=sp.sort_key)


def pi_K(pi: FiniteRep, K: SubgroupTag) -> FiniteRep:
    """``pi^K([a]_{xK})(xi ⊗ delta_{uK}) = pi([a]_{xH}) xi ⊗ delta_{r(x)K}`` when ``uK = s(x)K``.

    ``pi`` is a representation of ``C_c(A/H)`` with ``H = pi.tag``.
    """
    alg, sp = pi.alg, pi.alg.space
    H = pi.tag
    if H is None:
        raise ValueError("pi_K needs a representation of a fixed C_c(A/H)")
    if not alg.pair.is_subgroup(K, H):
        raise ValueError("K must lie inside H")
    units = _unit_orbits(alg, K)
    index = {u: n for n, u in enumerate(units)}
    d = pi.dim
    dim = d * len(units)

    def image(S):
        out = ExactMatrix((dim, dim))
        for x, a in S.terms.items():
            r = index[sp.orbit_key(sp.range(x), K)]
            c = index[sp.orbit_key(sp.source(x), K)]
            out.place(r * d, c * d, pi.image(alg.section(H, [(x, a)])))
        return out

    return FiniteRep(alg, dim, image, K, f"{pi.name}^K")


def aggregated_vector(alg: BundleAlgebra, u, H: SubgroupTag, K: SubgroupTag) -> list:
    """The ``K``-orbits making up ``delta_{uH}``: one per class of ``S_u \\ H / K``."""
    sp = alg.space
    return sorted({sp.orbit_key(sp.act(u, h), K) for h in alg.pair.transversal(H, K)}, key=sp.sort_key)


def check_aggregated_vectors(pi: FiniteRep, piK: FiniteRep, S: Section) -> bool:
    """``pi^K([a]_{xH})(xi ⊗ delta_{uH})`` is ``pi([a]_{xH}) xi ⊗ delta_{r(x)H}`` or zero, per term of ``S``."""
    alg, sp = pi.alg, pi.alg.space
    H, K = pi.tag, piK.tag
    units = _unit_orbits(alg, K)
    index = {u: n for n, u in enumerate(units)}
    d = pi.dim

    def spread(u):
        V = ExactMatrix((piK.dim, d))
        for w in aggregated_vector(alg, u, H, K):
            V.place(index[w] * d, 0, ExactMatrix.identity(d))
        return V

    for x, a in S.terms.items():
        term = alg.section(H, [(x, a)])
        img = piK(term)
        for u in _unit_orbits(alg, H):
            lhs = img @ spread(u)
            if sp.orbit_key(sp.source(x), H) == u:
                rhs = spread(sp.range(x)) @ pi(term)
            else:
                rhs = ExactMatrix(lhs.shape)
            if lhs != rhs:
                return False
    return True


# covariant pairs ----------------------------------------------------------------


@dataclass
class CovariantPair:
    """Matrices ``pi(1_{xGamma})`` per canonical coset and ``mu(Gamma g Gamma)`` per double coset."""

    pair: object
    pi: dict
    mu: dict

    @property
    def dim(self) -> int:
        return next(iter(self.pi.values())).shape[0]

    def unit_image(self, g, h):
        """``pi(1_{gGamma}) mu(Gamma g^-1 h Gamma) pi(1_{hGamma})``, the image of the matrix unit."""
        p = self.pair
        a = self.pi[p.canonical_coset(g)]
        m = self.mu[p.dcoset_key(p.mul(p.inv(g), h))]
        b = self.pi[p.canonical_coset(h)]
        return _mm(_mm(a, m), b)


def _mm(a, b):
    if isinstance(a, ExactMatrix) and isinstance(b, ExactMatrix):
        return a @ b
    return to_numpy(a) @ to_numpy(b)


def _add(a, b):
    if isinstance(a, ExactMatrix) and isinstance(b, ExactMatrix):
        return a + b
    return to_numpy(a) + to_numpy(b)


def regular_covariant_pair(pair) -> CovariantPair:
    """``(M, rho)`` on ``l2(G/Gamma)``: multiplication and the right regular representation."""
    cos = _cosets(pair)
    n = len(cos)
    hecke = HeckeAlgebra(pair)
    pi = {x: ExactMatrix.elementary(n, i, i) for i, x in enumerate(cos)}
    mu = {d: hecke.rho_matrix(hecke.basis(d), cos).matrix for d in pair.dcosets()}
    return CovariantPair(pair, pi, mu)


def amplify_pair(cp: CovariantPair, k: int) -> CovariantPair:
    return CovariantPair(cp.pair,
                         {x: m.kron_left_identity(k) for x, m in cp.pi.items()},
                         {d: m.kron_left_identity(k) for d, m in cp.mu.items()})


def conjugate_pair(cp: CovariantPair, U: np.ndarray) -> CovariantPair:
    Uh = U.conj().T
    return CovariantPair(cp.pair,
                         {x: U @ to_numpy(m) @ Uh for x, m in cp.pi.items()},
                         {d: U @ to_numpy(m) @ Uh for d, m in cp.mu.items()})


def corrupt_pair(cp: CovariantPair) -> CovariantPair:
    """Swap two unequal entries of the first non-identity ``mu`` matrix."""
    p = cp.pair
    mu = dict(cp.mu)
    for d in sorted(mu, key=p.sort_key):
        if d == p.dcoset_key(p.identity):
            continue
        A = to_numpy(mu[d]).copy()
        flat = list(zip(*np.nonzero(np.abs(A) > 1e-12)))
        zeros = list(zip(*np.nonzero(np.abs(A) <= 1e-12)))
        if flat and zeros:
            (i, j), (k, l) = flat[0], zeros[0]
            A[i, j], A[k, l] = A[k, l], A[i, j]
            mu[d] = A
            return CovariantPair(p, dict(cp.pi), mu)
    raise ValueError("no entry to corrupt")


def covariant_pair_check(cp: CovariantPair, samples: list | None = None, tol: float = 1e-9) -> dict:
    """Evaluate both sides of the covariant-pair identity on ``(g, x, s)`` triples.

    ``mu(GgG) pi(1_x) mu(GsG) = sum over u in G g^-1 G / G, v in G s G / G of pi(1_{xu}) mu(G u^-1 v G) pi(1_{xv})``.
    """
    p = cp.pair
    if samples is None:
        samples = [(g, x, s) for g in p.dcosets() for x in p.cosets() for s in p.dcosets()]
    worst = 0.0
    failures = []
    for g, x, s in samples:
        lhs = _mm(_mm(cp.mu[p.dcoset_key(g)], cp.pi[p.canonical_coset(x)]), cp.mu[p.dcoset_key(s)])
        rhs = None
        for u in p.double_coset_left_cosets(p.inv(g)):
            for v in p.double_coset_left_cosets(s):
                t = _mm(_mm(cp.pi[p.canonical_coset(p.mul(x, u))],
                            cp.mu[p.dcoset_key(p.mul(p.inv(u), v))]),
                        cp.pi[p.canonical_coset(p.mul(x, v))])
                rhs = t if rhs is None else _add(rhs, t)
        if isinstance(lhs, ExactMatrix) and isinstance(rhs, ExactMatrix):
            dev = 0.0 if lhs == rhs else float(np.max(np.abs(lhs.to_numpy() - rhs.to_numpy())))
        else:
            dev = float(np.max(np.abs(to_numpy(lhs) - to_numpy(rhs))))
        worst = max(worst, dev)
        if dev > tol:
            failures.append({"g": p.to_json(g), "x": p.to_json(x), "s": p.to_json(s), "deviation": dev})
    return {"holds": not failures, "max_deviation": worst, "failures": failures}


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph
