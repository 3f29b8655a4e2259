"""The *-algebraic crossed product of an orbit section algebra by a Hecke pair.

An element is an equivariant, finitely supported map ``gGamma -> C_c(A / Gamma^g)``
with ``Gamma^g = Gamma ∩ g Gamma g^-1``.  Equivariance

    f(gamma g Gamma) = act_section(gamma, f(g Gamma))

means one section per double coset is enough; it is stored at the canonical
double-coset representative and every other value is recovered on demand.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from .bundles import BundleAlgebra, Section
from .scalars import RadScalar, as_scalar, sqrt_pos_rational

__all__ = ["CrossedElement", "CrossedProduct"]


class CrossedElement:
    """``terms`` maps a canonical double-coset representative to a nonzero Section."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"CrossedElement({self.terms})"


class CrossedProduct:
    def __init__(self, algebra: BundleAlgebra):
        self.alg = algebra
        self.bundle = algebra.bundle
        self.space = algebra.space
        self.pair = algebra.pair
        if not self.space.free and not (self.space.is_set and self.pair.finite):
            raise ValueError("crossed products need a free action (or a set acted on by a finite group)")

    # storage --------------------------------------------------------------

    def _store(self, out: dict, h, S: Section) -> None:
        """Add the value ``S`` at ``h Gamma`` into canonical storage."""
        p, A = self.pair, self.alg
        target = p.gamma_g(h)
        if S.tag != target:
            S = A.embed_section(S, target)
        g0, gamma = p.dcoset_transporter(h)
        if gamma != p.identity:
            S = A.act_section(p.inv(gamma), S)
        cur = out.get(g0)
        S = S if cur is None else A.add(cur, S)
        if S.is_zero():
            out.pop(g0, None)
        else:
            out[g0] = S

    def element(self, values) -> CrossedElement:
        """Equivariant extension of ``(h, section)`` pairs; values at one ``h`` per double coset suffice."""
        if isinstance(values, dict):
            values = values.items()
        out: dict = {}
        for h, S in values:
            self._store(out, h, S)
        return CrossedElement(out)

    def zero(self) -> CrossedElement:
        return CrossedElement({})

    def from_section(self, S: Section) -> CrossedElement:
        """A section over Gamma (or a finer tag in the lattice) viewed as a crossed element at the identity."""
        A, p = self.alg, self.pair
        G = p.gamma_tag
        if S.tag != G:
            S = A.descend(S, G)
        return self.element([(p.identity, S)])

    def unit(self) -> CrossedElement:
        return self.from_section(self.alg.unit_section(self.pair.gamma_tag))

    # linear structure -------------------------------------------------------

    def add(self, f: CrossedElement, g: CrossedElement) -> CrossedElement:
        A = self.alg
        out = dict(f.terms)
        for k, S in g.terms.items():
            cur = out.get(k)
            S = S if cur is None else A.add(cur, S)
            if S.is_zero():
                out.pop(k, None)
            else:
                out[k] = S
        return CrossedElement(out)

    def scale(self, c, f: CrossedElement) -> CrossedElement:
        c = as_scalar(c)
        if not c:
            return CrossedElement({})
        return CrossedElement({k: self.alg.scale(c, S) for k, S in f.terms.items()})

    def sub(self, f, g):
        return self.add(f, self.scale(-1, g))

    def sum(self, items) -> CrossedElement:
        out = CrossedElement({})
        for f in items:
            out = self.add(out, f)
        return out

    # evaluation -------------------------------------------------------------

    def eval(self, f: CrossedElement, h) -> Section:
        """``f(h Gamma)``, a section over ``Gamma^h``."""
        p = self.pair
        g0, gamma = p.dcoset_transporter(h)
        S = f.terms.get(g0)
        if S is None:
            return self.alg.zero(p.gamma_g(h))
        if gamma == p.identity:
            return S
        return self.alg.act_section(gamma, S)

    xp_eval = eval

    def expectation(self, f: CrossedElement, g=None) -> Section:
        """``E_{gGamma}(f) = f(gGamma)``; ``g`` defaults to the identity."""
        return self.eval(f, self.pair.identity if g is None else g)

    def left_cosets(self, f: CrossedElement) -> list:
        p = self.pair
        return [h for g0 in f.terms for h in p.double_coset_left_cosets(g0)]

    def _collect(self, g0, parts: list) -> Section | None:
        A, p = self.alg, self.pair
        target = p.gamma_g(g0)
        if not parts:
            return None
        S = A.descend(A.total(parts, target), target)
        return None if S.is_zero() else S

    # algebra ----------------------------------------------------------------

    def mul(self, f1: CrossedElement, f2: CrossedElement) -> CrossedElement:
        """``(f1 * f2)(gGamma) = sum over hGamma of f1(hGamma) act_section(h, f2(h^-1 gGamma))``."""
        p, A = self.pair, self.alg
        if not f1.terms or not f2.terms:
            return CrossedElement({})
        lefts1 = self.left_cosets(f1)
        lefts2 = self.left_cosets(f2)
        targets = {p.dcoset_key(p.mul(h, k)) for h in lefts1 for k in lefts2}
        v1 = {h: self.eval(f1, h) for h in lefts1}
        out: dict = {}
        for g0 in sorted(targets, key=p.sort_key):
            parts = []
            for h in lefts1:
                k = p.mul(p.inv(h), g0)
                if p.dcoset_key(k) not in f2.terms:
                    continue
                right = A.act_section(h, self.eval(f2, k))
                prod = A.mul(v1[h], right)
                if not prod.is_zero():
                    parts.append(prod)
            S = self._collect(g0, parts)
            if S is not None:
                out[g0] = S
        return CrossedElement(out)

    xp_mul = mul

    def star(self, f: CrossedElement) -> CrossedElement:
        """``f*(gGamma) = Delta(g^-1) act_section(g, f(g^-1 Gamma))*``."""
        p, A = self.pair, self.alg
        out: dict = {}
        for d in f.terms:
            g0 = p.dcoset_key(p.inv(d))
            S = A.star(A.act_section(g0, self.eval(f, p.inv(g0))))
            S = A.scale(RadScalar(p.Delta(p.inv(g0))), S)
            if S.tag != p.gamma_g(g0):
                S = A.descend(S, p.gamma_g(g0))
            if not S.is_zero():
                out[g0] = S
        return CrossedElement(out)

    xp_star = star

    # multipliers ------------------------------------------------------------

    def hecke_left(self, g, f: CrossedElement) -> CrossedElement:
        """``Gamma g Gamma * f``, with value ``sum over hGamma in Gamma g Gamma of act_section(h, f(h^-1 s Gamma))`` at ``s``."""
        p, A = self.pair, self.alg
        hs = p.double_coset_left_cosets(g)
        targets = {p.dcoset_key(p.mul(h, k)) for h in hs for k in self.left_cosets(f)}
        out: dict = {}
        for g0 in sorted(targets, key=p.sort_key):
            parts = []
            for h in hs:
                k = p.mul(p.inv(h), g0)
                if p.dcoset_key(k) in f.terms:
                    parts.append(A.act_section(h, self.eval(f, k)))
            S = self._collect(g0, parts)
            if S is not None:
                out[g0] = S
        return CrossedElement(out)

    def hecke_right(self, f: CrossedElement, g) -> CrossedElement:
        """``f * Gamma g Gamma``, with value ``sum of f(hGamma)`` over ``h`` with ``h^-1 s`` in ``Gamma g Gamma``."""
        p = self.pair
        d = p.dcoset_key(g)
        ks = self.left_cosets(f)
        targets = {p.dcoset_key(p.mul(k, h)) for k in ks for h in p.double_coset_left_cosets(g)}
        out: dict = {}
        for g0 in sorted(targets, key=p.sort_key):
            parts = [self.eval(f, k) for k in ks if p.dcoset_key(p.mul(p.inv(k), g0)) == d]
            S = self._collect(g0, parts)
            if S is not None:
                out[g0] = S
        return CrossedElement(out)

    def hecke_element(self, g) -> CrossedElement:
        """``Gamma g Gamma`` realized inside the crossed product with unit sections; needs finite X."""
        p, A = self.pair, self.alg
        g0 = p.dcoset_key(g)
        return CrossedElement({g0: A.unit_section(p.gamma_g(g0))})

    def unit_multiplier(self, u, f: CrossedElement) -> CrossedElement:
        """``1_{u Gamma} * f`` for a unit ``u``."""
        return self.mul(self.from_section(self.alg.indicator(u, self.pair.gamma_tag)), f)

    def spanning_element(self, a, x, g) -> CrossedElement:
        """``[a]_{x Gamma} * Gamma g Gamma * 1_{s(x) g Gamma}``, supported on ``Gamma g Gamma``.

        Its value at ``g Gamma`` is ``[a]_{x Gamma}`` times ``act_section(g, 1_{s(x) g Gamma})``
        in the direct limit.
        """
        p, A, sp = self.pair, self.alg, self.space
        G = p.gamma_tag
        left = A.section(G, [(x, a)])
        right = A.act_section(g, A.indicator(sp.act(sp.source(x), g), G))
        return self.element([(g, A.mul(left, right))])

    def spanning_decomposition(self, f: CrossedElement) -> list:
        """Write ``f`` as a sum of spanning elements ``(a, x, g)``; raises if the sum does not reproduce ``f``."""
        out = []
        for g0, S in f.terms.items():
            for x, a in S.terms.items():
                out.append((a, x, g0))
        rebuilt = self.sum(self.spanning_element(a, x, g) for a, x, g in out)
        if rebuilt != f:
            raise ValueError("element is not the plain sum of spanning elements at its stored values")
        return out

    # conditional expectation and positivity ---------------------------------

    def sum_of_squares(self, f: CrossedElement) -> list[tuple[Fraction, Section]]:
        """Terms ``(Delta(h^-1), c_h)`` with ``E_Gamma(f* f) = sum Delta(h^-1) c_h* c_h``.

        ``c_h = act_section(h, f(h^-1 Gamma))`` for ``hGamma`` in the inverse of the support.
        """
        p, A = self.pair, self.alg
        out = []
        for d in f.terms:
            for h in p.double_coset_left_cosets(p.inv(d)):
                c = A.act_section(h, self.eval(f, p.inv(h)))
                if not c.is_zero():
                    out.append((p.Delta(p.inv(h)), c))
        return out

    def positive_form(self, f: CrossedElement) -> Section:
        """``sum Delta(h^-1) c_h* c_h`` over :meth:`sum_of_squares`, as a section over Gamma."""
        A, G = self.alg, self.pair.gamma_tag
        parts = [A.scale(RadScalar(w), A.mul(A.star(c), c)) for w, c in self.sum_of_squares(f)]
        if not parts:
            return A.zero(G)
        return A.descend(A.total(parts, G), G)

    def section_trace(self, S: Section) -> RadScalar:
        """Sum of fiber traces over the unit orbits; faithful and positive on ``c* c``."""
        bd, sp = self.bundle, self.space
        total = RadScalar(0)
        for x, a in S.terms.items():
            if sp.is_unit(x):
                total = total + bd.trace(x, a)
        return total

    # norms ------------------------------------------------------------------

    def fiber_norm(self, S: Section):
        """C*-norm of a section: exact sup norm on line bundles over sets, numeric otherwise."""
        if self.bundle.trivial_line:
            best = Fraction(0)
            approx = None
            for a in S.terms.values():
                v = a[0].abs_exact()
                if v is None:
                    approx = max(approx or 0.0, abs(a[0].to_complex()))
                else:
                    best = max(best, v)
            if approx is None:
                return best
            return max(float(best), approx)
        from .reps import section_norm

        return section_norm(self.alg, S)

    def l1_norm(self, f: CrossedElement, fiber_norm: Callable | None = None):
        """``sum over supported double cosets of L(g) * norm(f(gGamma))``."""
        fn = fiber_norm or self.fiber_norm
        exact = Fraction(0)
        approx = 0.0
        inexact = False
        for g0, S in f.terms.items():
            v = fn(S)
            L = self.pair.L(g0)
            if isinstance(v, Fraction):
                exact += v * L
            else:
                inexact = True
                approx += float(v) * L
        return float(exact) + approx if inexact else exact

    xp_l1_norm = l1_norm

    # sampling and JSON ------------------------------------------------------

    def random_element(self, rng: random.Random, dcosets: int = 2, terms: int = 2,
                       gaussian: bool = False, support: list | None = None,
                       points: list | None = None) -> CrossedElement:
        p, A = self.pair, self.alg
        values = []
        for _ in range(dcosets):
            g = rng.choice(support) if support else p.random_element(rng)
            g0 = p.dcoset_key(g)
            values.append((g0, A.random_section(p.gamma_g(g0), rng, terms, gaussian, points)))
        return self.element(values)

    def sorted_terms(self, f: CrossedElement) -> list:
        return sorted(f.terms.items(), key=lambda kv: self.pair.sort_key(kv[0]))

    def to_json(self, f: CrossedElement) -> list:
        return [{"dcoset": self.pair.to_json(g), "section": self.alg.to_json(S)}
                for g, S in self.sorted_terms(f)]

    def from_json(self, obj) -> CrossedElement:
        if not isinstance(obj, list):
            raise ValueError("a crossed element is a list of {dcoset, section} objects")
        values = []
        for t in obj:
            g = self.pair.parse(t["dcoset"])
            values.append((g, self.alg.from_json(t["section"])))
        return self.element(values)

    def sqrt_delta(self, g) -> RadScalar:
        return sqrt_pos_rational(self.pair.Delta(g))
