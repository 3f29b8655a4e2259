"""Fell bundles over discrete groupoids and the section algebras of their orbit bundles.

Fiber elements are tuples of :class:`~heckex.scalars.RadScalar` in a fixed
basis of each fiber.  A group element ``g`` acts on fibers by
``act(g, x, a)``, which carries the fiber over ``x`` to the fiber over
``x.g^-1``; with this convention ``act(g, ., act(h, ., a)) == act(gh, ., a)``.

A :class:`Section` over a subgroup ``H`` stores one fiber element per
``H``-orbit, at the orbit's canonical representative.  A term given at
another representative ``x`` with ``x.h == rep`` is moved to ``rep`` with
``act(h^-1, x, a)``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .groupoids import GSpace
from .pair import HeckePair, SubgroupTag
from .scalars import ONE, ZERO, RadScalar, as_scalar, scalar_from_json, scalar_to_json

__all__ = [
    "FellBundle",
    "TrivialLineBundle",
    "Section",
    "BundleAlgebra",
    "check_fell_axioms",
    "random_scalar",
]


def _vadd(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _vscale(c: RadScalar, a: tuple) -> tuple:
    return tuple(c * x for x in a)


def _vzero(a: tuple) -> bool:
    return not any(a)


def random_scalar(rng: random.Random, gaussian: bool = False, lo: int = -4, hi: int = 4) -> RadScalar:
    den = rng.choice((1, 1, 2, 3))
    re = Fraction(rng.randint(lo, hi), den)
    im = Fraction(rng.randint(lo, hi), den) if gaussian else 0
    return RadScalar.gaussian(re, im)


class FellBundle:
    """Interface for bundles; concrete classes define the fiber structure."""

    space: GSpace
    trivial_line: bool = False

    @property
    def pair(self) -> HeckePair:
        return self.space.pair

    def dim(self, x) -> int:
        raise NotImplementedError

    def mul(self, x, a: tuple, y, b: tuple) -> tuple:
        """Product of ``a`` over ``x`` and ``b`` over ``y``; lies over ``xy``."""
        raise NotImplementedError

    def star(self, x, a: tuple) -> tuple:
        raise NotImplementedError

    def act(self, g, x, a: tuple) -> tuple:
        raise NotImplementedError

    def unit(self, u) -> tuple:
        raise NotImplementedError

    def trace(self, u, a: tuple) -> RadScalar:
        """A faithful positive trace on the unit fiber over ``u``."""
        raise NotImplementedError

    def zero(self, x) -> tuple:
        return (ZERO,) * self.dim(x)

    def basis(self, x) -> list[tuple]:
        d = self.dim(x)
        return [tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)]


class TrivialLineBundle(FellBundle):
    """All fibers are C over a set with a right G-action; the action on fibers is trivial."""

    trivial_line = True

    def __init__(self, space: GSpace):
        if not space.is_set:
            raise ValueError("the trivial line bundle lives over a set (all arrows units)")
        self.space = space

    def dim(self, x) -> int:
        return 1

    def mul(self, x, a, y, b):
        return (a[0] * b[0],)

    def star(self, x, a):
        return (a[0].conj(),)

    def act(self, g, x, a):
        return a

    def unit(self, u):
        return (ONE,)

    def trace(self, u, a):
        return a[0]


class Section:
    """A finitely supported section of the orbit bundle over ``tag``."""

    __slots__ = ("tag", "terms")

    def __init__(self, tag: SubgroupTag, terms: dict):
        self.tag = tag
        self.terms = terms

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.tag == other.tag and self.terms == other.terms

    def __hash__(self):
        return hash((self.tag, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Section(conjugators={self.tag.conjugators}, terms={self.terms})"


class BundleAlgebra:
    """Section algebras ``C_c(A/H)`` for all tags ``H`` and their direct limit."""

    def __init__(self, bundle: FellBundle):
        self.bundle = bundle
        self.space = bundle.space
        self.pair = bundle.space.pair

    # construction ---------------------------------------------------------

    def _rekey(self, x, a, H):
        rep, h = self.space.orbit_rep(x, H)
        if rep == x:
            return rep, a
        return rep, self.bundle.act(self.pair.inv(h), x, a)

    def _accumulate(self, out: dict, x, a, H) -> None:
        rep, a = self._rekey(x, a, H)
        if rep in out:
            s = _vadd(out[rep], a)
            if _vzero(s):
                del out[rep]
            else:
                out[rep] = s
        elif not _vzero(a):
            out[rep] = a

    def section(self, H: SubgroupTag, items) -> Section:
        """Build ``sum [a]_{xH}`` from ``(x, a)`` pairs or a mapping; scalars allowed for line bundles."""
        if isinstance(items, dict):
            items = items.items()
        out: dict = {}
        for x, a in items:
            if not isinstance(a, tuple):
                a = (as_scalar(a),)
            if len(a) != self.bundle.dim(x):
                raise ValueError(f"fiber element of length {len(a)} over a {self.bundle.dim(x)}-dim fiber")
            self._accumulate(out, x, tuple(as_scalar(c) for c in a), H)
        return Section(H, out)

    def zero(self, H: SubgroupTag) -> Section:
        return Section(H, {})

    def indicator(self, u, H: SubgroupTag) -> Section:
        """``1_{uH}`` for a unit ``u``."""
        if not self.space.is_unit(u):
            raise ValueError("indicators are defined at units")
        return self.section(H, [(u, self.bundle.unit(u))])

    def unit_section(self, H: SubgroupTag) -> Section:
        """The identity of ``C_c(A/H)``; needs a finite unit space."""
        if not self.space.finite:
            raise ValueError("the unit section needs finitely many units")
        out = {}
        for u in self.space.units():
            rep, _ = self.space.orbit_rep(u, H)
            if rep not in out:
                out[rep] = self.bundle.unit(rep)
        return Section(H, out)

    # linear structure -------------------------------------------------------

    def add(self, f: Section, g: Section) -> Section:
        if f.tag != g.tag:
            f, g = self.normalize(f, g)
        out = dict(f.terms)
        for x, a in g.terms.items():
            if x in out:
                s = _vadd(out[x], a)
                if _vzero(s):
                    del out[x]
                else:
                    out[x] = s
            else:
                out[x] = a
        return Section(f.tag, out)

    def scale(self, c, f: Section) -> Section:
        c = as_scalar(c)
        if not c:
            return Section(f.tag, {})
        return Section(f.tag, {x: _vscale(c, a) for x, a in f.terms.items()})

    def neg(self, f: Section) -> Section:
        return self.scale(RadScalar(-1), f)

    def sub(self, f: Section, g: Section) -> Section:
        return self.add(f, self.neg(g))

    def total(self, sections: Iterable[Section], H: SubgroupTag | None = None) -> Section:
        """Sum in the direct limit, expressed over the meet of all tags (and ``H``)."""
        sections = list(sections)
        tags = [s.tag for s in sections] + ([H] if H is not None else [])
        if not tags:
            raise ValueError("empty sum needs a tag")
        L = tags[0]
        for t in tags[1:]:
            L = self.pair.meet(L, t)
        out: dict = {}
        for s in sections:
            for x, a in self.embed_section(s, L).terms.items():
                if x in out:
                    v = _vadd(out[x], a)
                    if _vzero(v):
                        del out[x]
                    else:
                        out[x] = v
                else:
                    out[x] = a
        return Section(L, out)

    # algebra ----------------------------------------------------------------

    def section_mul(self, f: Section, g: Section) -> Section:
        """``[a]_{xH} [b]_{yK} = [act(h^-1, a) b]_{x h y K}`` for ``K`` inside ``H``."""
        H, K = f.tag, g.tag
        if H != K and not self.pair.is_subgroup(K, H):
            raise ValueError("section_mul needs the right factor's subgroup inside the left one's")
        sp, bd, pair = self.space, self.bundle, self.pair
        out: dict = {}
        line = bd.trivial_line
        for x, a in f.terms.items():
            sx = sp.source(x)
            for y, b in g.terms.items():
                h = sp.transporter(sx, sp.range(y), H)
                if h is None:
                    continue
                if line:
                    self._accumulate(out, y, (a[0] * b[0],), K)
                    continue
                xh = sp.act(x, h)
                a2 = bd.act(pair.inv(h), x, a)
                self._accumulate(out, sp.compose(xh, y), bd.mul(xh, a2, y, b), K)
        return Section(K, out)

    def mul(self, f: Section, g: Section) -> Section:
        """Product in the direct limit ``D(A)``."""
        if f.tag == g.tag or self.pair.is_subgroup(g.tag, f.tag):
            return self.section_mul(f, g)
        L = self.pair.meet(f.tag, g.tag)
        return self.section_mul(f, self.embed_section(g, L))

    def section_star(self, f: Section) -> Section:
        sp, bd = self.space, self.bundle
        out: dict = {}
        for x, a in f.terms.items():
            self._accumulate(out, sp.inverse(x), bd.star(x, a), f.tag)
        return Section(f.tag, out)

    star = section_star

    def embed_section(self, f: Section, K: SubgroupTag) -> Section:
        """The canonical embedding ``C_c(A/H) -> C_c(A/K)`` for ``K`` inside ``H``."""
        H = f.tag
        if K == H:
            return f
        reps = self.pair.transversal(H, K)
        sp, bd, pair = self.space, self.bundle, self.pair
        free = sp.free
        out: dict = {}
        for x, a in f.terms.items():
            seen = set()
            for h in reps:
                xh = sp.act(x, h)
                if not free:
                    k = sp.orbit_key(xh, K)
                    if k in seen:
                        continue
                    seen.add(k)
                self._accumulate(out, xh, bd.act(pair.inv(h), x, a), K)
        return Section(K, out)

    embed = embed_section

    def act_section(self, g, f: Section) -> Section:
        """``[a]_{xH} -> [act(g, a)]_{x g^-1, g H g^-1}``."""
        pair, sp, bd = self.pair, self.space, self.bundle
        T = pair.conjugate_tag(g, f.tag)
        gi = pair.inv(g)
        out: dict = {}
        for x, a in f.terms.items():
            self._accumulate(out, sp.act(x, gi), bd.act(g, x, a), T)
        return Section(T, out)

    def normalize(self, f1: Section, f2: Section) -> tuple[Section, Section]:
        L = self.pair.meet(f1.tag, f2.tag)
        return self.embed_section(f1, L), self.embed_section(f2, L)

    dlim_normalize = normalize

    def equal(self, f1: Section, f2: Section) -> bool:
        """Equality in the direct limit."""
        if f1.tag == f2.tag:
            return f1.terms == f2.terms
        a, b = self.normalize(f1, f2)
        return a.terms == b.terms

    def value_at(self, f: Section, x) -> tuple:
        """The fiber element of ``f`` over the arrow ``x``."""
        rep, h = self.space.orbit_rep(x, f.tag)
        a = f.terms.get(rep)
        if a is None:
            return self.bundle.zero(x)
        if rep == x:
            return a
        return self.bundle.act(h, rep, a)

    def descend(self, F: Section, H: SubgroupTag) -> Section:
        """Inverse of ``embed_section`` into ``F.tag``; raises if ``F`` is not ``H``-invariant."""
        if F.tag == H:
            return F
        if not self.pair.is_subgroup(F.tag, H):
            raise ValueError("descend needs the section's subgroup inside the target")
        cand: dict = {}
        for x in F.terms:
            rep, _ = self.space.orbit_rep(x, H)
            if rep not in cand:
                v = self.value_at(F, rep)
                if not _vzero(v):
                    cand[rep] = v
        S = Section(H, cand)
        if self.embed_section(S, F.tag).terms != F.terms:
            raise ValueError("section is not invariant under the larger subgroup")
        return S

    # inspection -------------------------------------------------------------

    def sorted_terms(self, f: Section) -> list:
        return sorted(f.terms.items(), key=lambda kv: self.space.sort_key(kv[0]))

    def random_section(self, H: SubgroupTag, rng: random.Random, terms: int = 3,
                       gaussian: bool = False, points: list | None = None) -> Section:
        items = []
        for _ in range(terms):
            if points is not None:
                x = rng.choice(points)
            elif self.space.finite:
                x = rng.choice(self.space.points())
            else:
                x = self.pair.random_element(rng)
            d = self.bundle.dim(x)
            if d == 0:
                continue
            items.append((x, tuple(random_scalar(rng, gaussian) for _ in range(d))))
        return self.section(H, items)

    # JSON -------------------------------------------------------------------

    def tag_to_json(self, H: SubgroupTag):
        if H.conjugators is None:
            return None
        return [self.pair.to_json(c) for c in H.conjugators]

    def tag_from_json(self, obj) -> SubgroupTag:
        if obj is None or obj == "trivial":
            return self.pair.trivial_tag
        if not isinstance(obj, list):
            raise ValueError(f"subgroup must be a list of conjugators or null, got {obj!r}")
        return self.pair.tag(tuple(self.pair.parse(c) for c in obj))

    def to_json(self, f: Section) -> dict:
        return {
            "subgroup": self.tag_to_json(f.tag),
            "terms": [
                {"arrow": self.space.point_to_json(x), "value": [scalar_to_json(c) for c in a]}
                for x, a in self.sorted_terms(f)
            ],
        }

    def from_json(self, obj) -> Section:
        if not isinstance(obj, dict) or "terms" not in obj:
            raise ValueError("a section is an object with 'subgroup' and 'terms'")
        H = self.tag_from_json(obj.get("subgroup", []))
        items = []
        for t in obj["terms"]:
            x = self.space.point_from_json(t["arrow"])
            v = t["value"]
            if not isinstance(v, list) or (v and isinstance(v[0], dict)):
                v = [v]
            items.append((x, tuple(scalar_from_json(c) for c in v)))
        return self.section(H, items)


def check_fell_axioms(bundle: FellBundle, action: bool = True) -> list[str]:
    """Exhaustive Fell-bundle checks on basis elements; returns failure descriptions."""
    sp, pair = bundle.space, bundle.space.pair
    failures: list[str] = []
    arrows = sp.points()
    by_range: dict = {}
    for y in arrows:
        by_range.setdefault(sp.range(y), []).append(y)
    for x in arrows:
        xi = sp.inverse(x)
        for a in bundle.basis(x):
            if bundle.star(xi, bundle.star(x, a)) != a:
                failures.append(f"star is not involutive over {x}")
            aa = bundle.mul(xi, bundle.star(x, a), x, a)
            if len(aa) != bundle.dim(sp.source(x)):
                failures.append(f"a*a does not land over the source of {x}")
            tr = bundle.trace(sp.source(x), aa)
            if not (tr.is_rational() and tr.as_fraction() > 0):
                failures.append(f"trace(a*a) is not positive over {x}")
        for y in by_range.get(sp.source(x), []):
            xy = sp.compose(x, y)
            for a in bundle.basis(x):
                for b in bundle.basis(y):
                    ab = bundle.mul(x, a, y, b)
                    if len(ab) != bundle.dim(xy):
                        failures.append(f"product over {x},{y} has the wrong fiber")
                        continue
                    lhs = bundle.star(xy, ab)
                    rhs = bundle.mul(sp.inverse(y), bundle.star(y, b), xi, bundle.star(x, a))
                    if lhs != rhs:
                        failures.append(f"(ab)* != b*a* over {x},{y}")
                    for z in by_range.get(sp.source(y), []):
                        yz = sp.compose(y, z)
                        for c in bundle.basis(z):
                            l = bundle.mul(xy, ab, z, c)
                            r = bundle.mul(x, a, yz, bundle.mul(y, b, z, c))
                            if l != r:
                                failures.append(f"associativity fails over {x},{y},{z}")
    if action and pair.finite:
        elems = pair.elements
        for g in elems:
            gi = pair.inv(g)
            for x in arrows:
                xg = sp.act(x, gi)
                if sp.act(sp.source(x), gi) != sp.source(xg) or sp.act(sp.range(x), gi) != sp.range(xg):
                    failures.append(f"point action of {g} does not preserve source/range at {x}")
                for a in bundle.basis(x):
                    if bundle.star(sp.inverse(xg), bundle.act(g, x, a)) != bundle.act(g, sp.inverse(x), bundle.star(x, a)):
                        failures.append(f"action of {g} does not commute with star at {x}")
                for y in by_range.get(sp.source(x), []):
                    for a in bundle.basis(x):
                        for b in bundle.basis(y):
                            l = bundle.act(g, sp.compose(x, y), bundle.mul(x, a, y, b))
                            r = bundle.mul(xg, bundle.act(g, x, a), sp.act(y, gi), bundle.act(g, y, b))
                            if l != r:
                                failures.append(f"action of {g} is not multiplicative at {x},{y}")
        rng = random.Random(0)
        for _ in range(20):
            g, h = rng.choice(elems), rng.choice(elems)
            x = rng.choice(arrows)
            for a in bundle.basis(x):
                lhs = bundle.act(g, sp.act(x, pair.inv(h)), bundle.act(h, x, a))
                if lhs != bundle.act(pair.mul(g, h), x, a):
                    failures.append(f"act(g) act(h) != act(gh) at {x}")
    return failures
