"""Fell bundles built from graded *-algebras over the pair groupoid ``G x G``.

A ``G``-graded finite-dimensional *-algebra ``B`` gives the bundle over
``G x G`` whose fiber at ``(s, t)`` is the component ``B_s``, with

    (b, (s, t r)) (c, (t, r)) = (bc, (st, r))      (b, (s, t))* = (b*, (s^-1, st))

and ``G`` acting by ``(s, t) g = (s, t g)`` without touching the fiber vector.
The orbit bundle under a subgroup ``H`` is compared with the bundle built
directly over the arrows ``(s, tH)``.
"""

from __future__ import annotations

from fractions import Fraction

from .bundles import BundleAlgebra, FellBundle, Section, check_fell_axioms
from .groupoids import GSpace, PairGroupoidSpace, check_groupoid_axioms, orbit_groupoid
from .pair import PermutationPair, SubgroupTag, pair_from_json
from .scalars import ONE, ZERO, RadScalar, as_scalar, scalar_from_json

__all__ = [
    "GradedStarAlgebra",
    "group_algebra",
    "matrix_algebra",
    "EQBundle",
    "DirectQuotientSpace",
    "DirectQuotientBundle",
    "dual_action",
    "check_dual_action",
    "compare_quotient",
    "graded_from_json",
]


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class GradedStarAlgebra:
    """Structure constants of a graded algebra in a basis of each component.

    ``mult[(s, i, t, j)]`` is the product of basis vectors ``e_{s,i} e_{t,j}``
    as a coefficient tuple in ``B_{st}``; missing keys are zero.
    ``star[(s, i)]`` is ``e_{s,i}*`` in ``B_{s^-1}``.  ``trace`` gives the
    trace of each basis vector of ``B_e`` and ``unit`` the identity of ``B_e``.
    """

    def __init__(self, pair: PermutationPair, dims: dict, mult: dict, star: dict,
                 trace: tuple, unit: tuple):
        self.pair = pair
        self.dims = {g: int(dims.get(g, 0)) for g in pair.elements}
        self.mult = mult
        self.star_table = star
        self.trace_coeffs = tuple(as_scalar(c) for c in trace)
        self.unit_vec = tuple(as_scalar(c) for c in unit)
        e = pair.identity
        if len(self.unit_vec) != self.dims[e] or len(self.trace_coeffs) != self.dims[e]:
            raise ValueError("unit and trace must live in the identity component")
        for (s, i, t, j), v in mult.items():
            if len(v) != self.dims[pair.mul(s, t)]:
                raise ValueError(f"product of components {s} and {t} does not land in their product grade")
        for (s, i), v in star.items():
            if len(v) != self.dims[pair.inv(s)]:
                raise ValueError(f"star of component {s} does not land in its inverse grade")

    def zero(self, s) -> tuple:
        return (ZERO,) * self.dims[s]

    def mul(self, s, a: tuple, t, b: tuple) -> tuple:
        st = self.pair.mul(s, t)
        out = list(self.zero(st))
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                v = self.mult.get((s, i, t, j))
                if v is None:
                    continue
                c = x * y
                for k, w in enumerate(v):
                    if w:
                        out[k] = out[k] + c * w
        return tuple(out)

    def star(self, s, a: tuple) -> tuple:
        si = self.pair.inv(s)
        out = list(self.zero(si))
        for i, x in enumerate(a):
            if not x:
                continue
            for k, w in enumerate(self.star_table[(s, i)]):
                if w:
                    out[k] = out[k] + x.conj() * w
        return tuple(out)

    def trace(self, a: tuple) -> RadScalar:
        total = RadScalar(0)
        for c, x in zip(self.trace_coeffs, a):
            total = total + c * x
        return total

    def basis(self, s) -> list[tuple]:
        d = self.dims[s]
        return [tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)]

    def check(self) -> list[str]:
        """Associativity, involution and unit laws on basis elements."""
        p = self.pair
        out = []
        gs = [g for g in p.elements if self.dims[g]]
        e = p.identity
        for s in gs:
            for a in self.basis(s):
                if self.star(p.inv(s), self.star(s, a)) != a:
                    out.append(f"star is not involutive on grade {p.to_json(s)}")
                if self.mul(e, self.unit_vec, s, a) != a or self.mul(s, a, e, self.unit_vec) != a:
                    out.append(f"unit fails on grade {p.to_json(s)}")
                for t in gs:
                    for b in self.basis(t):
                        ab = self.mul(s, a, t, b)
                        st = p.mul(s, t)
                        if self.star(st, ab) != self.mul(p.inv(t), self.star(t, b), p.inv(s), self.star(s, a)):
                            out.append(f"(ab)* != b*a* on grades {p.to_json(s)}, {p.to_json(t)}")
                        for u in gs:
                            for c in self.basis(u):
                                if self.mul(st, ab, u, c) != self.mul(s, a, p.mul(t, u), self.mul(t, b, u, c)):
                                    out.append("associativity fails")
        return out


def group_algebra(pair: PermutationPair, drop: tuple = ()) -> GradedStarAlgebra:
    """``C[G]`` graded by ``G``; grades listed in ``drop`` are set to zero (they must form a complement of a subgroup)."""
    p = pair
    keep = [g for g in p.elements if g not in set(drop)]
    dims = {g: 1 for g in keep}
    kept = set(keep)
    mult = {}
    for s in keep:
        for t in keep:
            st = p.mul(s, t)
            if st in kept:
                mult[(s, 0, t, 0)] = (ONE,)
            else:
                raise ValueError("kept grades must be closed under products")
    star = {(s, 0): (ONE,) for s in keep}
    return GradedStarAlgebra(p, dims, mult, star, (ONE,), (ONE,))


def matrix_algebra(n: int, pair: PermutationPair | None = None) -> GradedStarAlgebra:
    """``M_n`` concentrated in the identity grade, with the standard trace."""
    p = pair or PermutationPair(1, [], [])
    e = p.identity
    idx = [(i, j) for i in range(n) for j in range(n)]
    pos = {ij: k for k, ij in enumerate(idx)}

    def vec(k):
        return tuple(ONE if m == k else ZERO for m in range(n * n))

    mult = {}
    for (i, j) in idx:
        for (k, l) in idx:
            if j == k:
                mult[(e, pos[(i, j)], e, pos[(k, l)])] = vec(pos[(i, l)])
    star = {(e, pos[(i, j)]): vec(pos[(j, i)]) for (i, j) in idx}
    trace = tuple(ONE if i == j else ZERO for (i, j) in idx)
    unit = tuple(ONE if i == j else ZERO for (i, j) in idx)
    return GradedStarAlgebra(p, {e: n * n}, mult, star, trace, unit)


class EQBundle(FellBundle):
    """The bundle ``B x G`` over the pair groupoid with the dual action."""

    def __init__(self, B: GradedStarAlgebra):
        problems = B.check()
        if problems:
            raise ValueError(f"not a graded *-algebra: {problems[0]}")
        self.B = B
        self.space = PairGroupoidSpace(B.pair)

    def dim(self, x) -> int:
        return self.B.dims[x[0]]

    def mul(self, x, a, y, b):
        return self.B.mul(x[0], a, y[0], b)

    def star(self, x, a):
        return self.B.star(x[0], a)

    def act(self, g, x, a):
        return a

    def unit(self, u):
        return self.B.unit_vec

    def trace(self, u, a):
        return self.B.trace(a)


def dual_action(bundle: EQBundle, g):
    """``(a_s, t) -> (a_s, t g^-1)`` as a map on ``(arrow, vector)`` pairs."""
    gi = bundle.pair.inv(g)

    def apply(x, a):
        return bundle.space.act(x, gi), bundle.act(g, x, a)

    return apply


def check_dual_action(bundle: EQBundle) -> list[str]:
    """Composition law and compatibility with products and involution, exhaustively on basis elements."""
    p, sp = bundle.pair, bundle.space
    out = []
    e = p.identity
    arrows = sp.points()
    for x in arrows:
        for a in bundle.basis(x):
            if dual_action(bundle, e)(x, a) != (x, a):
                out.append("identity does not act trivially")
    for g in p.elements:
        dg = dual_action(bundle, g)
        for h in p.elements:
            dh, dgh = dual_action(bundle, h), dual_action(bundle, p.mul(g, h))
            for x in arrows:
                for a in bundle.basis(x):
                    if dg(*dh(x, a)) != dgh(x, a):
                        out.append(f"dual action is not a homomorphism at {x}")
        for x in arrows:
            xi = sp.inverse(x)
            for a in bundle.basis(x):
                y, b = dg(x, a)
                if dg(xi, bundle.star(x, a)) != (sp.inverse(y), bundle.star(y, b)):
                    out.append(f"dual action does not commute with star at {x}")
            for y in arrows:
                if sp.source(x) != sp.range(y):
                    continue
                for a in bundle.basis(x):
                    for b in bundle.basis(y):
                        x2, a2 = dg(x, a)
                        y2, b2 = dg(y, b)
                        lhs = dg(sp.compose(x, y), bundle.mul(x, a, y, b))
                        rhs = (sp.compose(x2, y2), bundle.mul(x2, a2, y2, b2))
                        if lhs != rhs:
                            out.append(f"dual action is not multiplicative at {x}, {y}")
    return out


class DirectQuotientSpace(GSpace):
    """The groupoid of arrows ``(s, tH)`` with ``(s, trH)(t, rH) = (st, rH)``."""

    finite = True
    free = True

    def __init__(self, pair: PermutationPair, H: SubgroupTag):
        self.pair = pair
        self.H = H
        self._e = pair.identity
        cos = pair.cosets(H)
        self._points = sorted((s, c) for s in pair.elements for c in cos)

    @property
    def is_set(self) -> bool:
        return False

    def _coset(self, t):
        return self.pair.canonical_coset(t, self.H)

    def source(self, x):
        return (self._e, x[1])

    def range(self, x):
        return (self._e, self._coset(self.pair.mul(x[0], x[1])))

    def is_unit(self, x) -> bool:
        return x[0] == self._e

    def compose(self, x, y):
        if x[1] != self._coset(self.pair.mul(y[0], y[1])):
            raise ValueError("arrows are not composable")
        return (self.pair.mul(x[0], y[0]), y[1])

    def inverse(self, x):
        return (self.pair.inv(x[0]), self._coset(self.pair.mul(x[0], x[1])))

    def points(self) -> list:
        return list(self._points)

    def sort_key(self, x):
        return x


class DirectQuotientBundle(FellBundle):
    def __init__(self, B: GradedStarAlgebra, H: SubgroupTag):
        self.B = B
        self.space = DirectQuotientSpace(B.pair, H)

    def dim(self, x) -> int:
        return self.B.dims[x[0]]

    def mul(self, x, a, y, b):
        return self.B.mul(x[0], a, y[0], b)

    def star(self, x, a):
        return self.B.star(x[0], a)

    def unit(self, u):
        return self.B.unit_vec

    def trace(self, u, a):
        return self.B.trace(a)


def _direct_mul(bundle: DirectQuotientBundle, f: dict, g: dict) -> dict:
    sp = bundle.space
    out: dict = {}
    for x, a in f.items():
        for y, b in g.items():
            if sp.source(x) != sp.range(y):
                continue
            z = sp.compose(x, y)
            v = bundle.mul(x, a, y, b)
            out[z] = _vec_add(out[z], v) if z in out else v
    return {z: v for z, v in out.items() if any(v)}


def compare_quotient(B: GradedStarAlgebra, H: SubgroupTag) -> dict:
    """Exhaustively compare the orbit bundle of ``B x G`` under ``H`` with the direct ``B x G / H``.

    Arrows are matched by ``(s, t)H <-> (s, tH)`` and fibers by the identity
    on vectors.  Checks the bijection, fiber dimensions, products and the
    involution on every pair of basis elements, plus both sets of axioms.
    """
    eqb = EQBundle(B)
    orbit_alg = BundleAlgebra(eqb)
    direct = DirectQuotientBundle(B, H)
    sp, dsp, pair = eqb.space, direct.space, B.pair
    og = orbit_groupoid(sp, H)
    failures: list[str] = []

    def ident(x):
        return (x[0], pair.canonical_coset(x[1], H))

    orbit_arrows = og.arrows()
    image = [ident(x) for x in orbit_arrows]
    if sorted(image) != dsp.points() or len(set(image)) != len(image):
        failures.append("orbit arrows do not match the direct arrows bijectively")
    for x in orbit_arrows:
        if eqb.dim(x) != direct.dim(ident(x)):
            failures.append(f"fiber dimensions differ at {x}")
    for x in orbit_arrows:
        for a in eqb.basis(x):
            fx = Section(H, {x: a})
            st = orbit_alg.star(fx)
            want = {dsp.inverse(ident(x)): direct.star(ident(x), a)}
            got = {ident(y): v for y, v in st.terms.items()}
            if got != {k: v for k, v in want.items() if any(v)}:
                failures.append(f"involution differs at {x}")
            for y in orbit_arrows:
                for b in eqb.basis(y):
                    prod = orbit_alg.section_mul(fx, Section(H, {y: b}))
                    got = {ident(z): v for z, v in prod.terms.items()}
                    want = _direct_mul(direct, {ident(x): a}, {ident(y): b})
                    if got != want:
                        failures.append(f"products differ at {x}, {y}")
    if not og.check_well_defined():
        failures.append("orbit groupoid product is not well defined")
    if not check_groupoid_axioms(og):
        failures.append("orbit groupoid fails the groupoid axioms")
    if not check_groupoid_axioms(dsp):
        failures.append("direct groupoid fails the groupoid axioms")
    failures += [f"direct bundle: {m}" for m in check_fell_axioms(direct, action=False)]
    return {"holds": not failures, "arrows": len(orbit_arrows), "failures": failures}


def graded_from_json(obj) -> GradedStarAlgebra:
    """Parse ``{"preset": "group-algebra", "grading": spec}``, ``{"preset": "matrix", "n": n}`` or explicit tables.

    Explicit form: ``{"grading": spec, "components": [{"g": perm, "dim": d}],
    "mult": [{"left": [perm, i], "right": [perm, j], "value": [...]}],
    "star": [{"of": [perm, i], "value": [...]}], "trace": [...], "unit": [...]}``.
    """
    if not isinstance(obj, dict):
        raise ValueError("a graded algebra spec is an object")
    preset = obj.get("preset")
    if preset == "matrix":
        return matrix_algebra(int(obj["n"]))
    pair = pair_from_json(obj["grading"])
    if not isinstance(pair, PermutationPair):
        raise ValueError("grading groups must be finite permutation groups")
    if preset == "group-algebra":
        return group_algebra(pair, tuple(pair.parse(g) for g in obj.get("drop", [])))
    if preset is not None:
        raise ValueError(f"unknown graded algebra preset {preset!r}")
    dims = {pair.parse(c["g"]): int(c["dim"]) for c in obj["components"]}

    def vec(v):
        return tuple(scalar_from_json(c) for c in v)

    mult = {}
    for m in obj.get("mult", []):
        s, i = pair.parse(m["left"][0]), int(m["left"][1])
        t, j = pair.parse(m["right"][0]), int(m["right"][1])
        mult[(s, i, t, j)] = vec(m["value"])
    star = {(pair.parse(m["of"][0]), int(m["of"][1])): vec(m["value"]) for m in obj.get("star", [])}
    return GradedStarAlgebra(pair, dims, mult, star, vec(obj["trace"]), vec(obj["unit"]))


def positive_trace_ok(B: GradedStarAlgebra) -> bool:
    """``trace(a* a) > 0`` for every basis vector, the positivity the regular representation needs."""
    p = B.pair
    for s in p.elements:
        for a in B.basis(s):
            t = B.trace(B.mul(p.inv(s), B.star(s, a), s, a))
            if not (t.is_rational() and t.as_fraction() > Fraction(0)):
                return False
    return True
