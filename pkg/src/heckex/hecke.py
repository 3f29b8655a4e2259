"""The Hecke algebra of a pair and its right regular representation.

Elements are finitely supported functions on double cosets, stored against
canonical double-coset representatives.  The product is

    (f1 * f2)(Gamma g Gamma) = sum over hGamma of f1(Gamma h Gamma) f2(Gamma h^-1 g Gamma)

and the involution twists by the modular function.  ``rho_apply`` acts on
finitely supported vectors on G/Gamma with the square-root modular weights,
so it works for infinite backends too.

>>> from heckex.pair import PermutationPair
>>> p = PermutationPair.symmetric(3, gamma=[[2, 1, 3]])
>>> alg = HeckeAlgebra(p)
>>> t = alg.basis(p.parse([3, 2, 1]))
>>> alg.convolve(t, t) == alg.add(alg.scale(2, alg.unit()), t)
True
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .matrices import ExactMatrix
from .pair import HeckePair
from .scalars import ONE, RadScalar, as_scalar, scalar_from_json, scalar_to_json, sqrt_pos_rational

__all__ = ["HeckeElement", "CosetVector", "HeckeAlgebra", "RhoMatrix"]


class _Sparse:
    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, key) -> RadScalar:
        return self.terms.get(key, RadScalar(0))

    def __repr__(self):
        return f"{type(self).__name__}({self.terms})"


def _acc(out: dict, key, v: RadScalar) -> None:
    if not v:
        return
    s = out.get(key)
    if s is None:
        out[key] = v
    else:
        s = s + v
        if s:
            out[key] = s
        else:
            del out[key]


class HeckeElement(_Sparse):
    """Map from canonical double-coset representative to a nonzero scalar."""


class CosetVector(_Sparse):
    """Map from canonical left-coset representative to a nonzero scalar."""


class RhoMatrix:
    """``rho(f)`` restricted to a finite coset basis, with the keys that escaped it."""

    def __init__(self, matrix: ExactMatrix, basis: list, escapes: set):
        self.matrix = matrix
        self.basis = basis
        self.escapes = escapes

    @property
    def closed(self) -> bool:
        return not self.escapes


class HeckeAlgebra:
    def __init__(self, pair: HeckePair):
        self.pair = pair
        self._sqrt_delta: dict = {}

    # construction
    def element(self, items) -> HeckeElement:
        """Sum of ``c * 1_{Gamma g Gamma}`` over ``(g, c)`` pairs or a mapping."""
        if isinstance(items, dict):
            items = items.items()
        out: dict = {}
        for g, c in items:
            _acc(out, self.pair.dcoset_key(g), as_scalar(c))
        return HeckeElement(out)

    def basis(self, g) -> HeckeElement:
        return self.element([(g, ONE)])

    def unit(self) -> HeckeElement:
        return self.basis(self.pair.identity)

    def zero(self) -> HeckeElement:
        return HeckeElement({})

    def add(self, f: HeckeElement, g: HeckeElement) -> HeckeElement:
        out = dict(f.terms)
        for k, v in g.terms.items():
            _acc(out, k, v)
        return HeckeElement(out)

    def scale(self, c, f: HeckeElement) -> HeckeElement:
        c = as_scalar(c)
        if not c:
            return HeckeElement({})
        return HeckeElement({k: c * v for k, v in f.terms.items()})

    def sub(self, f, g):
        return self.add(f, self.scale(-1, g))

    # algebra
    def sqrt_delta(self, g) -> RadScalar:
        k = self.pair.dcoset_key(g)
        got = self._sqrt_delta.get(k)
        if got is None:
            got = sqrt_pos_rational(self.pair.Delta(k))
            self._sqrt_delta[k] = got
        return got

    def convolve(self, f1: HeckeElement, f2: HeckeElement) -> HeckeElement:
        p = self.pair
        if not f1.terms or not f2.terms:
            return HeckeElement({})
        lefts1 = [(h, c) for d, c in f1.terms.items() for h in p.double_coset_left_cosets(d)]
        lefts2 = [h for d in f2.terms for h in p.double_coset_left_cosets(d)]
        targets = {p.dcoset_key(p.mul(h, h2)) for h, _ in lefts1 for h2 in lefts2}
        out: dict = {}
        for g0 in targets:
            total = RadScalar(0)
            for h, c in lefts1:
                v = f2.terms.get(p.dcoset_key(p.mul(p.inv(h), g0)))
                if v is not None:
                    total = total + c * v
            _acc(out, g0, total)
        return HeckeElement(out)

    mul = convolve

    def star(self, f: HeckeElement) -> HeckeElement:
        p = self.pair
        out: dict = {}
        for g, c in f.terms.items():
            gi = p.dcoset_key(p.inv(g))
            # f*(Gamma g' Gamma) = Delta(g'^-1) conj f(Gamma g'^-1 Gamma) with g' = g^-1
            _acc(out, gi, RadScalar(p.Delta(g)) * c.conj())
        return HeckeElement(out)

    def l1_norm(self, f: HeckeElement):
        """``sum |f(Gamma g Gamma)| L(g)``: a Fraction when every modulus is rational."""
        exact = Fraction(0)
        approx = 0.0
        inexact = False
        for g, c in f.terms.items():
            a = c.abs_exact()
            L = self.pair.L(g)
            if a is None:
                inexact = True
                approx += abs(c.to_complex()) * L
            else:
                exact += a * L
        return float(exact) + approx if inexact else exact

    # regular representation
    def delta(self, r) -> CosetVector:
        return CosetVector({self.pair.canonical_coset(r): ONE})

    def vector(self, items) -> CosetVector:
        if isinstance(items, dict):
            items = items.items()
        out: dict = {}
        for r, c in items:
            _acc(out, self.pair.canonical_coset(r), as_scalar(c))
        return CosetVector(out)

    def rho_apply(self, f: HeckeElement, v: CosetVector) -> CosetVector:
        """``rho(Gamma d Gamma) delta_r = Delta(d)^(1/2) sum over tGamma in Gamma d^-1 Gamma of delta_{rt}``."""
        p = self.pair
        out: dict = {}
        for d, c in f.terms.items():
            w = c * self.sqrt_delta(d)
            ts = p.double_coset_left_cosets(p.inv(d))
            for r, vr in v.terms.items():
                cw = vr * w
                for t in ts:
                    _acc(out, p.canonical_coset(p.mul(r, t)), cw)
        return CosetVector(out)

    def rho_matrix(self, f: HeckeElement, basis: Iterable) -> RhoMatrix:
        p = self.pair
        basis = [p.canonical_coset(b) for b in basis]
        index = {b: i for i, b in enumerate(basis)}
        ent: dict = {}
        escapes: set = set()
        for j, b in enumerate(basis):
            col = self.rho_apply(f, CosetVector({b: ONE}))
            for k, v in col.terms.items():
                i = index.get(k)
                if i is None:
                    escapes.add(k)
                else:
                    ent[(i, j)] = v
        n = len(basis)
        return RhoMatrix(ExactMatrix((n, n), ent), basis, escapes)

    def reconstruct(self, image_of_identity: CosetVector) -> HeckeElement:
        """Recover ``f`` from ``rho_apply(f, delta_Gamma)``.

        The coefficient at ``delta_{g Gamma}`` is ``Delta(g^-1)^(1/2) f(Gamma g^-1 Gamma)``.
        """
        p = self.pair
        out: dict = {}
        seen = set()
        for g, c in image_of_identity.terms.items():
            d = p.dcoset_key(p.inv(g))
            if d in seen:
                continue
            seen.add(d)
            _acc(out, d, c / self.sqrt_delta(d))
        return HeckeElement(out)

    # sampling and JSON
    def random_element(self, rng: random.Random, terms: int = 3, gaussian: bool = False,
                       support: list | None = None) -> HeckeElement:
        from .bundles import random_scalar

        items = []
        for _ in range(terms):
            g = rng.choice(support) if support else self.pair.random_element(rng)
            items.append((g, random_scalar(rng, gaussian)))
        return self.element(items)

    def sorted_terms(self, f: _Sparse) -> list:
        return sorted(f.terms.items(), key=lambda kv: self.pair.sort_key(kv[0]))

    def to_json(self, f: HeckeElement) -> list:
        return [{"dcoset": self.pair.to_json(g), "value": scalar_to_json(c)}
                for g, c in self.sorted_terms(f)]

    def from_json(self, obj) -> HeckeElement:
        if not isinstance(obj, list):
            raise ValueError("a Hecke element is a list of {dcoset, value} objects")
        return self.element((self.pair.parse(t["dcoset"]), scalar_from_json(t["value"])) for t in obj)

    def vector_to_json(self, v: CosetVector) -> list:
        return [{"coset": self.pair.to_json(g), "value": scalar_to_json(c)}
                for g, c in self.sorted_terms(v)]

    def vector_from_json(self, obj) -> CosetVector:
        if not isinstance(obj, list):
            raise ValueError("a coset vector is a list of {coset, value} objects")
        return self.vector((self.pair.parse(t["coset"]), scalar_from_json(t["value"])) for t in obj)
