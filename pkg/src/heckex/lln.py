"""The algebra of (Gamma x Gamma)-invariant functions on ``X x G`` and its link to the crossed product.

For a free action of ``G`` on a set ``X`` the orbit of ``(x, g)`` under
``(x, g)(a, b) = (x a, a^-1 g b)`` is pinned down by the canonical point
``x0`` of ``x Gamma`` together with the coset ``a^-1 g Gamma`` where
``x a = x0``.  Those pairs are the keys of :class:`LLNElement`.
"""

from __future__ import annotations

import random

from .bundles import BundleAlgebra
from .crossed import CrossedElement, CrossedProduct
from .hecke import CosetVector, HeckeAlgebra, _acc
from .matrices import ExactMatrix, exact_rank
from .scalars import ONE, RadScalar, as_scalar, sqrt_pos_rational

__all__ = ["LLNElement", "LLNAlgebra", "svn_suite"]


class LLNElement:
    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    def __eq__(self, other):
        if not isinstance(other, LLNElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"LLNElement({self.terms})"


class LLNAlgebra:
    def __init__(self, xp: CrossedProduct):
        if not xp.bundle.trivial_line:
            raise ValueError("the LLN algebra is built on the trivial line bundle over a set")
        if not xp.space.free:
            raise ValueError("the LLN algebra needs a free action")
        self.xp = xp
        self.alg: BundleAlgebra = xp.alg
        self.space = xp.space
        self.pair = xp.pair
        self.hecke = HeckeAlgebra(self.pair)

    # keys -----------------------------------------------------------------

    def key(self, x, g):
        p, sp = self.pair, self.space
        x0, a = sp.orbit_rep(x, p.gamma_tag)
        return (x0, p.canonical_coset(p.mul(p.inv(a), g)))

    def element(self, items) -> LLNElement:
        """Sum of ``c * 1_{[(x, g)]}`` over ``((x, g), c)`` pairs."""
        if isinstance(items, dict):
            items = items.items()
        out: dict = {}
        for (x, g), c in items:
            _acc(out, self.key(x, g), as_scalar(c))
        return LLNElement(out)

    def indicator(self, x, g) -> LLNElement:
        return self.element([((x, g), ONE)])

    def value(self, f: LLNElement, x, g) -> RadScalar:
        return f.terms.get(self.key(x, g), RadScalar(0))

    def add(self, f, g) -> LLNElement:
        out = dict(f.terms)
        for k, v in g.terms.items():
            _acc(out, k, v)
        return LLNElement(out)

    def scale(self, c, f) -> LLNElement:
        c = as_scalar(c)
        return LLNElement({k: c * v for k, v in f.terms.items()} if c else {})

    def diagonal_unit(self) -> LLNElement:
        """``sum over x0 in X/Gamma of 1_{[(x0, e)]}``; needs finite X."""
        e = self.pair.identity
        return self.element(((x0, e), ONE) for x0 in {self.space.orbit_key(x, self.pair.gamma_tag)
                                                      for x in self.space.points()})

    # algebra ----------------------------------------------------------------

    def mul(self, f1: LLNElement, f2: LLNElement) -> LLNElement:
        """``(f1 * f2)(x, g) = sum over hGamma of f1(x, h) f2(xh, h^-1 g)``."""
        p, sp = self.pair, self.space
        G = p.gamma_tag
        out: dict = {}
        for (x0, h0), a in f1.terms.items():
            xh = sp.act(x0, h0)
            for (y0, k0), b in f2.terms.items():
                t = sp.transporter(xh, y0, G)
                if t is None:
                    continue
                g = p.mul(p.mul(h0, t), k0)
                _acc(out, (x0, p.canonical_coset(g)), a * b)
        return LLNElement(out)

    def star(self, f: LLNElement) -> LLNElement:
        """``f*(x, g) = conj f(xg, g^-1)``."""
        p, sp = self.pair, self.space
        out: dict = {}
        for (x0, g0), a in f.terms.items():
            _acc(out, self.key(sp.act(x0, g0), p.inv(g0)), a.conj())
        return LLNElement(out)

    def pi_x_apply(self, x, f: LLNElement, v: CosetVector) -> CosetVector:
        """``pi_x(f) delta_{hGamma} = sum over gGamma of f(xg, g^-1 h) delta_{gGamma}``."""
        p, sp = self.pair, self.space
        out: dict = {}
        for (x0, k0), a in f.terms.items():
            t = sp.g_transporter(x, x0)
            if t is None:
                continue
            ti = p.inv(t)
            for h, c in v.terms.items():
                if p.canonical_coset(p.mul(ti, h)) == k0:
                    _acc(out, p.canonical_coset(t), a * c)
        return CosetVector(out)

    def pi_x_matrix(self, x, f: LLNElement, basis: list | None = None) -> ExactMatrix:
        p = self.pair
        basis = p.cosets() if basis is None else [p.canonical_coset(b) for b in basis]
        index = {b: i for i, b in enumerate(basis)}
        ent = {}
        for j, b in enumerate(basis):
            col = self.pi_x_apply(x, f, CosetVector({b: ONE}))
            for k, v in col.terms.items():
                if k not in index:
                    raise ValueError(f"pi_x image leaves the basis at {k}")
                ent[(index[k], j)] = v
        n = len(basis)
        return ExactMatrix((n, n), ent)

    # the isomorphism with the crossed product ------------------------------------

    def phi(self, f: CrossedElement) -> LLNElement:
        """``Phi(f)(x, g) = Delta(g)^(1/2) f(gGamma)(x)``."""
        out: dict = {}
        for g0, S in f.terms.items():
            w = sqrt_pos_rational(self.pair.Delta(g0))
            for y, a in S.terms.items():
                _acc(out, self.key(y, g0), w * a[0])
        return LLNElement(out)

    def phi_inv(self, F: LLNElement) -> CrossedElement:
        """``f(gGamma)`` is the section ``x -> Delta(g)^(-1/2) F(x, g)``."""
        p, sp, A = self.pair, self.space, self.alg
        values = []
        for (x0, k0), c in F.terms.items():
            g0, gamma = p.dcoset_transporter(k0)
            w = sqrt_pos_rational(p.Delta(g0))
            values.append((g0, A.section(p.gamma_g(g0), [(sp.act(x0, gamma), c / w)])))
        return self.xp.element(values)

    # sampling and JSON ------------------------------------------------------------

    def random_element(self, rng: random.Random, terms: int = 3, gaussian: bool = False,
                       points: list | None = None) -> LLNElement:
        from .bundles import random_scalar

        items = []
        for _ in range(terms):
            if points is not None:
                x = rng.choice(points)
            elif self.space.finite:
                x = rng.choice(self.space.points())
            else:
                x = self.pair.random_element(rng)
            items.append(((x, self.pair.random_element(rng)), random_scalar(rng, gaussian)))
        return self.element(items)

    def to_json(self, f: LLNElement) -> list:
        from .scalars import scalar_to_json

        sp, p = self.space, self.pair
        rows = sorted(f.terms.items(), key=lambda kv: (sp.sort_key(kv[0][0]), p.sort_key(kv[0][1])))
        return [{"point": sp.point_to_json(x), "coset": p.to_json(g), "value": scalar_to_json(c)}
                for (x, g), c in rows]

    def from_json(self, obj) -> LLNElement:
        from .scalars import scalar_from_json

        if not isinstance(obj, list):
            raise ValueError("an LLN element is a list of {point, coset, value} objects")
        return self.element(((self.space.point_from_json(t["point"]), self.pair.parse(t["coset"])),
                             scalar_from_json(t["value"])) for t in obj)


def matrix_unit(xp: CrossedProduct, g, h) -> CrossedElement:
    """``T_{gGamma, hGamma} = 1_{gGamma} * Gamma g^-1 h Gamma * 1_{hGamma}`` over ``X = G``."""
    p = xp.pair
    return xp.spanning_element(ONE, g, p.mul(p.inv(g), h))


def svn_suite(xp: CrossedProduct, window: list | None = None) -> dict:
    """Matrix-unit relations for the ``T_{gGamma, hGamma}`` over a window of cosets.

    Products are checked as they stand.  The involution gives
    ``T_{g,h}* = Delta(g^-1 h) T_{h,g}``, so the self-adjoint family is
    ``Delta(g^-1 h)^(-1/2) T_{g,h}``; both forms are checked.

    On finite pairs the window defaults to all of ``G/Gamma`` and the images
    under the integrated form of evaluation at the identity are compared with
    elementary matrices and checked to span the full matrix algebra.
    """
    from .reps import evaluation_rep, integrated_form

    p = xp.pair
    if window is None:
        window = p.cosets()
    window = [p.canonical_coset(w) for w in window]
    T = {(g, h): matrix_unit(xp, g, h) for g in window for h in window}
    failures = []
    for (g, h), t in T.items():
        # the involution carries Delta, so T* = T_{h,g} only up to Delta(g^-1 h)
        if xp.star(t) != xp.scale(RadScalar(p.Delta(p.mul(p.inv(g), h))), T[(h, g)]):
            failures.append({"relation": "star", "g": p.to_json(g), "h": p.to_json(h)})
        E = xp.scale(ONE / sqrt_pos_rational(p.Delta(p.mul(p.inv(g), h))), t)
        E_back = xp.scale(ONE / sqrt_pos_rational(p.Delta(p.mul(p.inv(h), g))), T[(h, g)])
        if xp.star(E) != E_back:
            failures.append({"relation": "normalized-star", "g": p.to_json(g), "h": p.to_json(h)})
        for s in window:
            for u in window:
                prod = xp.mul(t, T[(s, u)])
                want = T[(g, u)] if h == s else xp.zero()
                if prod != want:
                    failures.append({"relation": "product", "g": p.to_json(g), "h": p.to_json(h),
                                     "s": p.to_json(s), "t": p.to_json(u)})
    report = {"units": len(T), "relations_hold": not failures, "failures": failures}
    if p.finite and len(window) == len(p.cosets()):
        rep = evaluation_rep(xp.alg, p.identity)
        n = len(window)
        elementary = True
        rows = []
        for i, g in enumerate(window):
            for j, h in enumerate(window):
                M = integrated_form(rep, xp, T[(g, h)])
                if M != ExactMatrix.elementary(n, i, j):
                    elementary = False
                rows.append([M[(r, c)] for r in range(n) for c in range(n)])
        report["images_elementary"] = elementary
        report["image_rank"] = exact_rank(rows)
        report["full_rank"] = report["image_rank"] == n * n
    return report
