"""Hecke pairs: group backends, cosets, the modular function, and subgroup tags.

Two backends are provided.  :class:`PermutationPair` enumerates a finite
permutation group exhaustively; :class:`BaumslagSolitarPair` realizes
BS(1, m) = Z[1/m] x| Z with Gamma = Z x {0}, where every coset computation is
closed-form lattice arithmetic.

Permutations are tuples of 0-based images and compose right-to-left:
``(a*b)[i] == a[b[i]]``.  Their JSON form is the 1-based image array.

>>> p = PermutationPair.symmetric(3, gamma=[[2, 1, 3]])
>>> p.L(p.parse([3, 2, 1]))
2
>>> bs = BaumslagSolitarPair(2)
>>> g = bs.parse({"t": "0", "k": 1})
>>> bs.L(g), bs.R(g), bs.Delta(g)
(2, 1, Fraction(2, 1))
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence

__all__ = [
    "SubgroupTag",
    "HeckePair",
    "PermutationPair",
    "BaumslagSolitarPair",
    "pair_from_json",
]


@dataclass(frozen=True)
class SubgroupTag:
    """A subgroup of the lattice of finite intersections of conjugates of Gamma.

    ``conjugators`` lists ``g_1, ..., g_n`` with ``H = meet of g_i Gamma g_i^-1``;
    the empty tuple means Gamma and ``None`` means the trivial subgroup.
    Equality compares ``key``, the backend's canonical description of ``H``.
    """

    key: Hashable
    conjugators: tuple | None = field(default=(), compare=False)

    @property
    def is_trivial_marker(self) -> bool:
        return self.conjugators is None


class HeckePair:
    """Interface shared by the two backends."""

    finite: bool = False
    identity: Any

    # group law -----------------------------------------------------------
    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def prod(self, *xs):
        out = self.identity
        for x in xs:
            out = self.mul(out, x)
        return out

    def sort_key(self, a):
        raise NotImplementedError

    def parse(self, obj):
        raise NotImplementedError

    def to_json(self, a):
        raise NotImplementedError

    # cosets of Gamma -----------------------------------------------------
    def canonical_coset(self, g, H: SubgroupTag | None = None):
        raise NotImplementedError

    def dcoset_key(self, g):
        raise NotImplementedError

    def double_coset_left_cosets(self, g) -> list:
        raise NotImplementedError

    def dcoset_transporter(self, h):
        """Return ``(g0, gamma)`` with ``g0`` canonical and ``h Gamma = gamma g0 Gamma``."""
        raise NotImplementedError

    def L(self, g) -> int:
        return len(self.double_coset_left_cosets(g))

    def R(self, g) -> int:
        return self.L(self.inv(g))

    def Delta(self, g) -> Fraction:
        return Fraction(self.L(g), self.R(g))

    def same_coset(self, a, b, H: SubgroupTag | None = None) -> bool:
        return self.canonical_coset(a, H) == self.canonical_coset(b, H)

    # subgroup lattice ----------------------------------------------------
    def tag(self, conjugators: Iterable | None) -> SubgroupTag:
        raise NotImplementedError

    @property
    def gamma_tag(self) -> SubgroupTag:
        return self.tag(())

    @property
    def trivial_tag(self) -> SubgroupTag:
        return self.tag(None)

    def gamma_g(self, g) -> SubgroupTag:
        """The tag of ``Gamma ∩ g Gamma g^-1``."""
        return self.tag((self.identity, g))

    def conjugate_tag(self, g, H: SubgroupTag) -> SubgroupTag:
        if H.conjugators is None:
            return H
        if not H.conjugators:
            return self.tag((g,))
        return self.tag(tuple(self.mul(g, c) for c in H.conjugators))

    def meet(self, H: SubgroupTag, K: SubgroupTag) -> SubgroupTag:
        if H == K:
            return H
        if H.conjugators is None or K.conjugators is None:
            return self.trivial_tag
        hc = H.conjugators or (self.identity,)
        kc = K.conjugators or (self.identity,)
        return self.tag(hc + kc)

    lattice_meet = meet

    def contains(self, H: SubgroupTag, h) -> bool:
        raise NotImplementedError

    def is_subgroup(self, K: SubgroupTag, H: SubgroupTag) -> bool:
        raise NotImplementedError

    def transversal(self, H: SubgroupTag, K: SubgroupTag) -> list:
        """Representatives ``h`` of the left cosets ``hK`` inside ``H``."""
        raise NotImplementedError

    def index(self, H: SubgroupTag, K: SubgroupTag) -> int:
        return len(self.transversal(H, K))

    # sampling --------------------------------------------------------------
    def random_element(self, rng: random.Random):
        raise NotImplementedError

    def random_gamma(self, rng: random.Random):
        raise NotImplementedError

    def random_in(self, H: SubgroupTag, rng: random.Random):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# finite permutation groups


def _compose(a: tuple, b: tuple) -> tuple:
    return tuple(a[i] for i in b)


def _invert(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, ai in enumerate(a):
        out[ai] = i
    return tuple(out)


def _closure(gens: Sequence[tuple], identity: tuple) -> frozenset:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = _compose(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


class PermutationPair(HeckePair):
    """A finite permutation group ``G`` with subgroup ``Gamma``, both by generators."""

    finite = True
    MAX_ORDER = 10_000

    def __init__(self, degree: int, generators: Sequence[Sequence[int]],
                 gamma: Sequence[Sequence[int]]):
        self.degree = degree
        self.identity = tuple(range(degree))
        self._gens = [self._parse_perm(g) for g in generators]
        self._gamma_gens = [self._parse_perm(g) for g in gamma]
        self.elements = sorted(_closure(self._gens, self.identity))
        if len(self.elements) > self.MAX_ORDER:
            raise ValueError(f"group order {len(self.elements)} exceeds {self.MAX_ORDER}")
        self._element_set = frozenset(self.elements)
        gamma_set = _closure(self._gamma_gens, self.identity)
        if not gamma_set <= self._element_set:
            raise ValueError("gamma generators do not lie in G")
        self.gamma = gamma_set
        self._inverse = {g: _invert(g) for g in self.elements}
        self._coset_tables: dict[Hashable, dict] = {}
        self._conj_cache: dict[tuple, frozenset] = {}
        self._tag_cache: dict[Any, SubgroupTag] = {}
        self._dcoset = self._build_dcoset_table()
        self._dcoset_lefts: dict[tuple, list] = {}
        self._transporters: dict[tuple, tuple] = {}

    @classmethod
    def symmetric(cls, n: int, gamma: Sequence[Sequence[int]]) -> "PermutationPair":
        gens = [[2, 1] + list(range(3, n + 1)), list(range(2, n + 1)) + [1]] if n > 1 else [[1]]
        return cls(n, gens, gamma)

    def _parse_perm(self, img) -> tuple:
        if len(img) != self.degree:
            raise ValueError(f"permutation {list(img)} does not have degree {self.degree}")
        p = tuple(int(i) - 1 for i in img)
        if sorted(p) != list(range(self.degree)):
            raise ValueError(f"{list(img)} is not a permutation of 1..{self.degree}")
        return p

    # group law
    def mul(self, a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        return self._inverse[a]

    def sort_key(self, a):
        return a

    def parse(self, obj):
        p = self._parse_perm(obj)
        if p not in self._element_set:
            raise ValueError(f"{list(obj)} is not an element of the group")
        return p

    def to_json(self, a):
        return [i + 1 for i in a]

    def order(self) -> int:
        return len(self.elements)

    # subgroups
    def subgroup_elements(self, H: SubgroupTag | None) -> frozenset:
        if H is None:
            return self.gamma
        return H.key

    def _conjugate_set(self, g) -> frozenset:
        c = self.canonical_coset(g)
        got = self._conj_cache.get(c)
        if got is None:
            ci = self.inv(c)
            got = frozenset(self.mul(self.mul(c, x), ci) for x in self.gamma)
            self._conj_cache[c] = got
        return got

    def tag(self, conjugators) -> SubgroupTag:
        if conjugators is None:
            return SubgroupTag(frozenset([self.identity]), None)
        cs = sorted({self.canonical_coset(c) for c in conjugators},
                    key=lambda c: (self.dcoset_key(c), c))
        ck = tuple(cs)
        got = self._tag_cache.get(ck)
        if got is not None:
            return got
        current = None
        kept = []
        for c in cs:
            conj = self._conjugate_set(c)
            if current is not None and current <= conj:
                continue
            current = conj if current is None else current & conj
            kept.append(c)
        if current is None or current == self.gamma:
            current, kept = self.gamma, []
        out = SubgroupTag(frozenset(current), tuple(kept))
        self._tag_cache[ck] = out
        return out

    def contains(self, H, h) -> bool:
        return h in self.subgroup_elements(H)

    def is_subgroup(self, K, H) -> bool:
        return self.subgroup_elements(K) <= self.subgroup_elements(H)

    def _table(self, H: SubgroupTag | None) -> dict:
        key = None if H is None else H.key
        tab = self._coset_tables.get(key)
        if tab is None:
            elems = self.subgroup_elements(H)
            tab = {}
            for g in self.elements:
                if g in tab:
                    continue
                coset = [self.mul(g, h) for h in elems]
                rep = min(coset)
                for x in coset:
                    tab[x] = rep
            self._coset_tables[key] = tab
        return tab

    def canonical_coset(self, g, H=None):
        return self._table(H)[g]

    def cosets(self, H=None) -> list:
        return sorted(set(self._table(H).values()))

    def transversal(self, H, K) -> list:
        if not self.is_subgroup(K, H):
            raise ValueError("index requested for a non-subgroup pair (K is not inside H)")
        tab = self._table(K)
        return sorted({tab[h] for h in self.subgroup_elements(H)})

    def _build_dcoset_table(self) -> dict:
        tab = {}
        for g in self.elements:
            if g in tab:
                continue
            dc = {self.mul(self.mul(a, g), b) for a in self.gamma for b in self.gamma}
            rep = min(dc)
            for x in dc:
                tab[x] = rep
        return tab

    def dcoset_key(self, g):
        return self._dcoset[g]

    def dcosets(self) -> list:
        return sorted(set(self._dcoset.values()))

    def double_coset_left_cosets(self, g) -> list:
        g0 = self._dcoset[g]
        got = self._dcoset_lefts.get(g0)
        if got is None:
            got = sorted({self.canonical_coset(self.mul(a, g0)) for a in self.gamma})
            self._dcoset_lefts[g0] = got
        return got

    def dcoset_transporter(self, h):
        c = self.canonical_coset(h)
        got = self._transporters.get(c)
        if got is None:
            g0 = self._dcoset[h]
            for a in sorted(self.gamma):
                if self.canonical_coset(self.mul(a, g0)) == c:
                    got = (g0, a)
                    break
            else:  # pragma: no cover - impossible for a consistent table
                raise RuntimeError(f"no transporter for {h}")
            self._transporters[c] = got
        return got

    def core_tag(self) -> SubgroupTag:
        return self.tag(self.cosets())

    # sampling
    def random_element(self, rng):
        return rng.choice(self.elements)

    def random_gamma(self, rng):
        return rng.choice(sorted(self.gamma))

    def random_in(self, H, rng):
        return rng.choice(sorted(self.subgroup_elements(H)))

    def generators(self) -> list:
        return list(self._gens)

    def describe(self) -> dict:
        return {
            "type": "perm",
            "degree": self.degree,
            "order": len(self.elements),
            "gamma_order": len(self.gamma),
            "cosets": len(self.cosets()),
            "double_cosets": len(self.dcosets()),
        }


# ---------------------------------------------------------------------------
# Baumslag-Solitar BS(1, m)


class BaumslagSolitarPair(HeckePair):
    """BS(1, m) with elements ``(t, k)``, ``t`` in Z[1/m], and Gamma = Z x {0}.

    Every subgroup in the conjugation lattice is ``m^j Z x {0}``; tags store
    the exponent ``j`` as their key, and ``None`` for the trivial subgroup.
    """

    finite = False

    def __init__(self, m: int = 2):
        if m < 2:
            raise ValueError("BS(1, m) needs m >= 2")
        self.m = m
        self.identity = (Fraction(0), 0)

    def _pow(self, k: int) -> Fraction:
        return Fraction(self.m) ** k

    def mul(self, a, b):
        return (a[0] + self._pow(a[1]) * b[0], a[1] + b[1])

    def inv(self, a):
        return (-self._pow(-a[1]) * a[0], -a[1])

    def sort_key(self, a):
        return (a[1], a[0])

    def element(self, t, k: int = 0):
        t = Fraction(t)
        self._check_t(t)
        return (t, int(k))

    def _check_t(self, t: Fraction) -> None:
        d = t.denominator
        while d % self.m == 0:
            d //= self.m
        if d != 1:
            raise ValueError(f"{t} is not in Z[1/{self.m}]")

    def parse(self, obj):
        if not isinstance(obj, dict) or "t" not in obj or "k" not in obj:
            raise ValueError(f"expected {{'t': 'p/q', 'k': int}}, got {obj!r}")
        return self.element(Fraction(str(obj["t"])), int(obj["k"]))

    def to_json(self, a):
        return {"t": str(a[0]), "k": a[1]}

    # lattice tags
    def tag(self, conjugators) -> SubgroupTag:
        if conjugators is None:
            return SubgroupTag(None, None)
        cs = list(conjugators)
        if not cs:
            return SubgroupTag(0, ())
        j = max(c[1] for c in cs)
        return SubgroupTag(j, () if j == 0 else ((Fraction(0), j),))

    def _exp(self, H: SubgroupTag | None):
        return 0 if H is None else H.key

    def contains(self, H, h) -> bool:
        j = self._exp(H)
        if j is None:
            return h == self.identity
        return h[1] == 0 and (h[0] / self._pow(j)).denominator == 1

    def is_subgroup(self, K, H) -> bool:
        jk, jh = self._exp(K), self._exp(H)
        if jk is None:
            return True
        if jh is None:
            return False
        return jk >= jh

    def transversal(self, H, K) -> list:
        jh, jk = self._exp(H), self._exp(K)
        if jh is None and jk is None:
            return [self.identity]
        if not self.is_subgroup(K, H):
            raise ValueError("index requested for a non-subgroup pair (K is not inside H)")
        if jk is None:
            raise ValueError("infinite index: the trivial subgroup in an infinite lattice subgroup")
        step = self._pow(jh)
        return [(step * i, 0) for i in range(self.m ** (jk - jh))]

    # cosets
    def canonical_coset(self, g, H=None):
        j = self._exp(H)
        if j is None:
            return g
        return (g[0] % self._pow(g[1] + j), g[1])

    def dcoset_key(self, g):
        return (g[0] % self._pow(min(g[1], 0)), g[1])

    def double_coset_left_cosets(self, g) -> list:
        t0, k = self.dcoset_key(g)
        if k <= 0:
            return [(t0 % self._pow(k), k)]
        mod = self._pow(k)
        return sorted(((t0 + i) % mod, k) for i in range(self.m ** k))

    def dcoset_transporter(self, h):
        g0 = self.dcoset_key(h)
        n = h[0] - g0[0] if h[1] >= 0 else Fraction(0)
        return g0, (n, 0)

    # sampling
    def random_element(self, rng):
        t = Fraction(rng.randint(-8, 8), self.m ** rng.randint(0, 2))
        return (t, rng.randint(-2, 2))

    def random_gamma(self, rng):
        return (Fraction(rng.randint(-10, 10)), 0)

    def random_in(self, H, rng):
        j = self._exp(H)
        if j is None:
            return self.identity
        return (self._pow(j) * rng.randint(-6, 6), 0)

    def generators(self) -> list:
        """The translation ``(1, 0)`` and the dilation ``(0, 1)``."""
        return [self.element(1, 0), self.element(0, 1)]

    def describe(self) -> dict:
        return {"type": "bs", "m": self.m}


def pair_from_json(obj: dict) -> HeckePair:
    """Build a pair from ``{"type": "perm", ...}`` or ``{"type": "bs", "m": m}``."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("group spec must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "perm":
        for f in ("degree", "generators", "gamma"):
            if f not in obj:
                raise ValueError(f"perm group spec is missing '{f}'")
        return PermutationPair(int(obj["degree"]), obj["generators"], obj["gamma"])
    if kind == "bs":
        return BaumslagSolitarPair(int(obj.get("m", 2)))
    raise ValueError(f"unknown group type {kind!r}")
