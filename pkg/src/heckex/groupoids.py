"""Discrete groupoids carrying a right action of the group of a Hecke pair.

A space here is a discrete groupoid ``X`` together with a right action
``x -> x.g`` by groupoid automorphisms.  Plain G-sets are groupoids whose
arrows are all units.  The orbit machinery (canonical representatives of
``xH`` and transporters inside ``H``) is what the section algebras use to
normalize storage.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable

from .pair import HeckePair, SubgroupTag

__all__ = [
    "GSpace",
    "TranslationSpace",
    "FiniteGSpace",
    "CosetSpace",
    "PairGroupoidSpace",
    "OrbitGroupoid",
    "orbit_groupoid",
    "check_groupoid_axioms",
    "stabilizer",
]


class GSpace:
    """Base class: a set-groupoid with a right action unless overridden."""

    pair: HeckePair
    finite: bool = False
    free: bool = True

    # groupoid structure; the defaults describe a set (only units)
    def source(self, x):
        return x

    def range(self, x):
        return x

    def is_unit(self, x) -> bool:
        return True

    def composable(self, x, y) -> bool:
        return self.source(x) == self.range(y)

    def compose(self, x, y):
        if x != y:
            raise ValueError("arrows are not composable")
        return x

    def inverse(self, x):
        return x

    @property
    def is_set(self) -> bool:
        return True

    # action
    def act(self, x, g):
        raise NotImplementedError

    def sort_key(self, x):
        raise NotImplementedError

    def orbit_rep(self, x, H: SubgroupTag):
        """Return ``(rep, h)`` with ``rep`` canonical in ``xH`` and ``x.h == rep``."""
        raise NotImplementedError

    def orbit_key(self, x, H: SubgroupTag):
        return self.orbit_rep(x, H)[0]

    def transporter(self, x, y, H: SubgroupTag):
        """Some ``h`` in ``H`` with ``x.h == y``, or ``None``."""
        raise NotImplementedError

    def g_transporter(self, x, y):
        """Some ``g`` in ``G`` with ``x.g == y``, or ``None``."""
        raise NotImplementedError

    def stabilizer(self, x) -> frozenset:
        raise NotImplementedError

    def points(self) -> list:
        raise NotImplementedError("the space is infinite")

    def units(self) -> list:
        return [x for x in self.points() if self.is_unit(x)]

    def arrows(self) -> list:
        return self.points()

    def point_to_json(self, x):
        raise NotImplementedError

    def point_from_json(self, obj):
        raise NotImplementedError


class TranslationSpace(GSpace):
    """``X = G`` as a set with ``x.g = xg``; free, possibly infinite."""

    def __init__(self, pair: HeckePair):
        self.pair = pair
        self.finite = pair.finite
        self.free = True

    def act(self, x, g):
        return self.pair.mul(x, g)

    def sort_key(self, x):
        return self.pair.sort_key(x)

    def orbit_rep(self, x, H):
        rep = self.pair.canonical_coset(x, H)
        return rep, self.pair.mul(self.pair.inv(x), rep)

    def transporter(self, x, y, H):
        h = self.pair.mul(self.pair.inv(x), y)
        return h if self.pair.contains(H, h) else None

    def g_transporter(self, x, y):
        return self.pair.mul(self.pair.inv(x), y)

    def stabilizer(self, x) -> frozenset:
        return frozenset([self.pair.identity])

    def points(self) -> list:
        if not self.pair.finite:
            raise ValueError("the translation space of an infinite group is infinite")
        return list(self.pair.elements)

    def point_to_json(self, x):
        return self.pair.to_json(x)

    def point_from_json(self, obj):
        return self.pair.parse(obj)


class FiniteGSpace(GSpace):
    """An enumerated finite space; orbit tables are computed by brute force."""

    finite = True

    def __init__(self, pair: HeckePair, points: Iterable, act: Callable[[Any, Any], Any],
                 sort_key: Callable[[Any], Any] | None = None):
        if not pair.finite:
            raise ValueError("enumerated spaces need a finite group")
        self.pair = pair
        self._act = act
        self._sort_key = sort_key or (lambda x: x)
        self._points = sorted(points, key=self._sort_key)
        self._point_set = frozenset(self._points)
        self._tables: dict[Hashable, dict] = {}
        self.free = all(len(self.stabilizer(x)) == 1 for x in self._points)

    def act(self, x, g):
        return self._act(x, g)

    def sort_key(self, x):
        return self._sort_key(x)

    def points(self) -> list:
        return list(self._points)

    def _table(self, key, elements) -> dict:
        tab = self._tables.get(key)
        if tab is not None:
            return tab
        tab = {}
        pair = self.pair
        elems = sorted(elements)
        for x in self._points:
            if x in tab:
                continue
            via: dict = {}
            for h in elems:
                y = self._act(x, h)
                if y not in via:
                    via[y] = h
            rep = min(via, key=self._sort_key)
            h_rep = via[rep]
            for y, h in via.items():
                tab[y] = (rep, pair.mul(pair.inv(h), h_rep))
        self._tables[key] = tab
        return tab

    def orbit_rep(self, x, H):
        return self._table(H.key, self.pair.subgroup_elements(H))[x]

    def transporter(self, x, y, H):
        rx, hx = self.orbit_rep(x, H)
        ry, hy = self.orbit_rep(y, H)
        if rx != ry:
            return None
        return self.pair.mul(hx, self.pair.inv(hy))

    def g_transporter(self, x, y):
        tab = self._table("__G__", self.pair.elements)
        rx, hx = tab[x]
        ry, hy = tab[y]
        if rx != ry:
            return None
        return self.pair.mul(hx, self.pair.inv(hy))

    def stabilizer(self, x) -> frozenset:
        return frozenset(g for g in self.pair.elements if self._act(x, g) == x)

    def check_action(self) -> bool:
        """Exhaustive check that ``(x.g).h == x.(gh)`` and points are closed."""
        p = self.pair
        for x in self._points:
            for g in p.elements:
                y = self._act(x, g)
                if y not in self._point_set:
                    return False
                for h in p.elements:
                    if self._act(y, h) != self._act(x, p.mul(g, h)):
                        return False
        return True

    def point_to_json(self, x):
        return self.pair.to_json(x)

    def point_from_json(self, obj):
        x = self.pair.parse(obj)
        if x not in self._point_set:
            raise ValueError(f"{obj!r} is not a point of the space")
        return x


class CosetSpace(FiniteGSpace):
    """Right cosets ``S x`` of a subgroup ``S``, acted on by right multiplication.

    Points are stored as their minimal element.  The action is not free
    when ``S`` is nontrivial: the stabilizer of ``S`` itself is ``S``.
    """

    def __init__(self, pair: HeckePair, subgroup: Iterable):
        sub = frozenset(subgroup)
        self.subgroup = sub

        def rep(x):
            return min(pair.mul(s, x) for s in sub)

        self._rep = rep
        pts = {rep(x) for x in pair.elements}
        super().__init__(pair, pts, lambda x, g: rep(pair.mul(x, g)))


class PairGroupoidSpace(FiniteGSpace):
    """``G x G`` with ``(s, tr)(t, r) = (st, r)``, inverse ``(s^-1, st)``, action ``(s,t)g = (s,tg)``.

    Units are the arrows ``(e, t)``; the source of ``(s, t)`` is ``(e, t)``
    and its range is ``(e, st)``.
    """

    def __init__(self, pair: HeckePair):
        e = pair.identity
        self._e = e
        pts = [(s, t) for s in pair.elements for t in pair.elements]
        super().__init__(pair, pts, lambda x, g: (x[0], pair.mul(x[1], g)))

    @property
    def is_set(self) -> bool:
        return False

    def source(self, x):
        return (self._e, x[1])

    def range(self, x):
        return (self._e, self.pair.mul(x[0], x[1]))

    def is_unit(self, x) -> bool:
        return x[0] == self._e

    def compose(self, x, y):
        s, t1 = x
        t, r = y
        if t1 != self.pair.mul(t, r):
            raise ValueError("arrows are not composable")
        return (self.pair.mul(s, t), r)

    def inverse(self, x):
        s, t = x
        return (self.pair.inv(s), self.pair.mul(s, t))

    def point_to_json(self, x):
        return [self.pair.to_json(x[0]), self.pair.to_json(x[1])]

    def point_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != 2:
            raise ValueError(f"expected an arrow [s, t], got {obj!r}")
        return (self.pair.parse(obj[0]), self.pair.parse(obj[1]))


def stabilizer(space: GSpace, x) -> frozenset:
    """Stabilizer of ``x``; trivial for free actions, enumerated for finite groups."""
    if space.free:
        return frozenset([space.pair.identity])
    if not space.pair.finite:
        raise ValueError("stabilizers of non-free actions need a finite group")
    return space.stabilizer(x)


class OrbitGroupoid:
    """The groupoid ``X/H``: arrows are canonical orbit representatives."""

    def __init__(self, space: GSpace, H: SubgroupTag):
        self.space = space
        self.H = H

    def key(self, x):
        return self.space.orbit_key(x, self.H)

    def arrows(self) -> list:
        return sorted({self.key(x) for x in self.space.points()}, key=self.space.sort_key)

    def units(self) -> list:
        return [x for x in self.arrows() if self.space.is_unit(x)]

    def source(self, xo):
        return self.key(self.space.source(xo))

    def range(self, xo):
        return self.key(self.space.range(xo))

    def is_unit(self, xo) -> bool:
        return self.space.is_unit(xo)

    def composable(self, xo, yo) -> bool:
        sp = self.space
        return sp.transporter(sp.source(xo), sp.range(yo), self.H) is not None

    def compose(self, xo, yo):
        sp = self.space
        h = sp.transporter(sp.source(xo), sp.range(yo), self.H)
        if h is None:
            raise ValueError("orbits are not composable")
        return self.key(sp.compose(sp.act(xo, h), yo))

    def inverse(self, xo):
        return self.key(self.space.inverse(xo))

    def check_well_defined(self) -> bool:
        """Every choice of representatives and of ``h`` in ``H_{x,y}`` gives the same product."""
        sp, pair = self.space, self.space.pair
        elems = sorted(pair.subgroup_elements(self.H))
        arrows = self.arrows()
        for xo in arrows:
            for yo in arrows:
                results = set()
                for a in elems:
                    x = sp.act(xo, a)
                    for b in elems:
                        y = sp.act(yo, b)
                        for h in elems:
                            if sp.act(sp.source(x), h) == sp.range(y):
                                results.add(self.key(sp.compose(sp.act(x, h), y)))
                if len(results) > 1:
                    return False
                if results != ({self.compose(xo, yo)} if self.composable(xo, yo) else set()):
                    return False
        return True


def orbit_groupoid(space: GSpace, H: SubgroupTag) -> OrbitGroupoid:
    if not space.free and not space.is_set and not space.pair.finite:
        raise ValueError("non-free actions are only supported on finite groups")
    return OrbitGroupoid(space, H)


def check_groupoid_axioms(gd) -> bool:
    """Exhaustive groupoid axioms for an object exposing arrows/source/range/compose/inverse."""
    arrows = gd.arrows()
    for x in arrows:
        xi = gd.inverse(x)
        if gd.inverse(xi) != x:
            return False
        if not gd.composable(x, xi) or gd.compose(x, xi) != gd.range(x):
            return False
        if not gd.composable(xi, x) or gd.compose(xi, x) != gd.source(x):
            return False
        if gd.compose(gd.range(x), x) != x or gd.compose(x, gd.source(x)) != x:
            return False
        for y in arrows:
            if not gd.composable(x, y):
                continue
            xy = gd.compose(x, y)
            if gd.source(xy) != gd.source(y) or gd.range(xy) != gd.range(x):
                return False
            for z in arrows:
                if gd.composable(y, z):
                    if gd.compose(xy, z) != gd.compose(x, gd.compose(y, z)):
                        return False
    return True
