"""Batch command line: load a pair (and optionally a graded algebra), run one verb, print a JSON report.

Operands come from ``--input``, a JSON object whose keys match the
counterexample payloads that the property suites emit, so a failing input
can be replayed by pointing ``--input`` at it.

Exit status: 0 on success, 1 if any property failed, 2 if a spec or input
file could not be parsed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

import numpy as np

from . import reps as R
from . import suites as S
from .bundles import BundleAlgebra, TrivialLineBundle, check_fell_axioms
from .crossed import CrossedProduct
from .eq import EQBundle, check_dual_action, compare_quotient, graded_from_json
from .groupoids import TranslationSpace
from .hecke import HeckeAlgebra
from .lln import LLNAlgebra
from .matrices import spectral_norm
from .pair import pair_from_json
from .scalars import scalar_to_json

SCHEMA = "1"

VERBS = {
    "pair": ["info"],
    "hecke": ["mul", "star", "l1", "rho"],
    "xp": ["mul", "star", "expect", "l1", "span"],
    "rep": ["integrated", "rednorm", "covcheck"],
    "lln": ["mul", "star", "pix", "phi"],
    "svn": ["run"],
    "eq": ["build", "quotient"],
    "check": ["all", "acceptance"],
}


class SpecError(Exception):
    """A spec or input file that cannot be used; reported with exit status 2."""


def _load_json(path: str, what: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read {what}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {what} is not valid JSON: {exc.msg}") from None


def _num(x):
    """Fractions print as exact strings, floats stay floats."""
    if isinstance(x, Fraction):
        return str(x)
    return x


class Context:
    def __init__(self, args):
        self.args = args
        self.graded = None
        if args.bundle:
            try:
                self.graded = graded_from_json(_load_json(args.bundle, "bundle spec"))
            except SpecError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise SpecError(f"{args.bundle}: bad bundle spec: {exc}") from None
        if args.pair:
            try:
                self.pair = pair_from_json(_load_json(args.pair, "pair spec"))
            except SpecError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise SpecError(f"{args.pair}: bad pair spec: {exc}") from None
        elif self.graded is not None:
            self.pair = self.graded.pair
        else:
            raise SpecError("--pair is required")
        self.input = _load_json(args.input, "input") if args.input else {}
        if not isinstance(self.input, dict):
            raise SpecError(f"{args.input}: input must be a JSON object")
        self._xp = None

    @property
    def xp(self) -> CrossedProduct:
        if self._xp is None:
            if self.graded is not None:
                bundle = EQBundle(self.graded)
            else:
                bundle = TrivialLineBundle(TranslationSpace(self.pair))
            self._xp = CrossedProduct(BundleAlgebra(bundle))
        return self._xp

    def operand(self, key: str, parse, required: bool = True):
        if key not in self.input:
            if required:
                raise SpecError(f"input is missing '{key}'")
            return None
        try:
            return parse(self.input[key])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"input '{key}' is malformed: {exc}") from None

    def rng(self) -> random.Random:
        return random.Random(self.args.seed)


# verbs ------------------------------------------------------------------------------------


def _pair_info(ctx: Context) -> dict:
    p = ctx.pair

    def row(g):
        return {"element": p.to_json(g), "Delta": str(p.Delta(g)), "L": p.L(g), "R": p.R(g)}

    out = {"pair": p.describe(), "generators": [row(g) for g in p.generators()]}
    extra = ctx.operand("elements", lambda v: [p.parse(e) for e in v], required=False)
    if extra is not None:
        out["elements"] = [row(g) for g in extra]
    if p.finite:
        out["double_cosets"] = [row(g) for g in p.dcosets()]
    return {"result": out}


def _hecke(ctx: Context, action: str) -> dict:
    A = HeckeAlgebra(ctx.pair)
    if action == "mul":
        f1, f2 = ctx.operand("f1", A.from_json), ctx.operand("f2", A.from_json)
        return {"result": A.to_json(A.convolve(f1, f2))}
    f = ctx.operand("f", A.from_json)
    if action == "star":
        return {"result": A.to_json(A.star(f))}
    if action == "l1":
        return {"result": _num(A.l1_norm(f))}
    v = ctx.operand("v", A.vector_from_json, required=False)
    if v is not None:
        return {"result": A.vector_to_json(A.rho_apply(f, v))}
    if not ctx.pair.finite:
        raise SpecError("rho on an infinite pair needs a vector 'v'")
    basis = ctx.pair.cosets()
    M = A.rho_matrix(f, basis)
    return {"result": {"basis": [ctx.pair.to_json(b) for b in basis], "matrix": M.matrix.to_json()}}


def _xp(ctx: Context, action: str) -> dict:
    xp = ctx.xp
    if action == "mul":
        f1, f2 = ctx.operand("f1", xp.from_json), ctx.operand("f2", xp.from_json)
        return {"result": xp.to_json(xp.mul(f1, f2))}
    f = ctx.operand("f", xp.from_json)
    if action == "star":
        return {"result": xp.to_json(xp.star(f))}
    if action == "expect":
        g = ctx.operand("g", ctx.pair.parse, required=False)
        return {"result": xp.alg.to_json(xp.expectation(f, g))}
    if action == "l1":
        return {"result": _num(xp.l1_norm(f))}
    try:
        parts = xp.spanning_decomposition(f)
    except ValueError as exc:
        return {"result": None, "properties": [_prop("spanning_decomposition", False, {"f": xp.to_json(f)},
                                                     reason=str(exc))]}
    sp = xp.space
    return {"result": [{"value": [scalar_to_json(c) for c in a], "point": sp.point_to_json(x),
                        "dcoset": ctx.pair.to_json(g)} for a, x, g in parts]}


def _rep(ctx: Context, action: str) -> dict:
    p, xp = ctx.pair, ctx.xp
    if action == "covcheck":
        if not p.finite:
            raise SpecError("covariant pairs are checked on finite pairs only")
        cp = R.regular_covariant_pair(p)
        k = int(ctx.input.get("amplify", 1))
        if k > 1:
            cp = R.amplify_pair(cp, k)
        if ctx.input.get("conjugate"):
            U = R.random_unitary(cp.dim, np.random.default_rng(ctx.args.seed))
            cp = R.conjugate_pair(cp, U)
        if ctx.input.get("corrupt"):
            cp = R.corrupt_pair(cp)
        samples = ctx.operand("samples", lambda v: [(p.parse(t["g"]), p.parse(t["x"]), p.parse(t["s"]))
                                                    for t in v], required=False)
        chk = R.covariant_pair_check(cp, samples, ctx.args.tol)
        replay = None
        if chk["failures"]:
            replay = {k: ctx.input[k] for k in ("amplify", "conjugate", "corrupt") if k in ctx.input}
            replay["samples"] = chk["failures"][:1]
        return {"result": {"max_deviation": chk["max_deviation"]},
                "properties": [_prop("covariant_pair_identity", chk["holds"], replay)]}
    if not p.finite or not xp.space.finite:
        raise SpecError("integrated forms are computed on finite instances only")
    f = ctx.operand("f", xp.from_json)
    x = ctx.operand("x", xp.space.point_from_json, required=False)
    pi = R.evaluation_rep(xp.alg, x) if x is not None else R.regular_rep(xp.alg)
    if action == "integrated":
        M = R.integrated_form(pi, xp, f)
        return {"result": {"dim": M.shape[0], "matrix": M.to_json(), "norm": spectral_norm(M)}}
    return {"result": R.reduced_norm(pi, xp, f)}


def _lln(ctx: Context, action: str) -> dict:
    try:
        L = LLNAlgebra(ctx.xp)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    if action == "mul":
        return {"result": L.to_json(L.mul(ctx.operand("f1", L.from_json), ctx.operand("f2", L.from_json)))}
    if action == "star":
        return {"result": L.to_json(L.star(ctx.operand("f", L.from_json)))}
    if action == "phi":
        if ctx.input.get("inverse"):
            return {"result": ctx.xp.to_json(L.phi_inv(ctx.operand("f", L.from_json)))}
        return {"result": L.to_json(L.phi(ctx.operand("f", ctx.xp.from_json)))}
    F = ctx.operand("f", L.from_json)
    x = ctx.operand("x", ctx.xp.space.point_from_json)
    v = ctx.operand("v", L.hecke.vector_from_json, required=False)
    if v is not None:
        return {"result": L.hecke.vector_to_json(L.pi_x_apply(x, F, v))}
    if not ctx.pair.finite:
        raise SpecError("pi_x on an infinite pair needs a vector 'v'")
    return {"result": {"basis": [ctx.pair.to_json(b) for b in ctx.pair.cosets()],
                       "matrix": L.pi_x_matrix(x, F).to_json()}}


def _svn(ctx: Context) -> dict:
    from .instances import bs_window

    p = ctx.pair
    window = ctx.operand("window", lambda v: [p.parse(w) for w in v], required=False)
    if window is None and not p.finite:
        if not hasattr(p, "m"):
            raise SpecError("an infinite pair needs a 'window' of cosets")
        window = bs_window(p)
    rep = S.stone_von_neumann_suite(ctx.xp, ctx.rng(), window)
    return {"suites": [rep.to_json()]}


def _eq(ctx: Context, action: str) -> dict:
    B = ctx.graded
    if B is None:
        raise SpecError("eq verbs need --bundle with a graded algebra")
    bundle = EQBundle(B)
    if action == "build":
        fa, da = check_fell_axioms(bundle), check_dual_action(bundle)
        comps = [{"grade": B.pair.to_json(s), "dim": B.dims.get(s, 0)} for s in B.pair.elements]
        return {"result": {"components": comps, "arrows": len(bundle.space.points())},
                "properties": [_prop("fell_axioms", not fa, fa[:1] or None),
                               _prop("dual_action_automorphisms", not da, da[:1] or None)]}
    alg = BundleAlgebra(bundle)
    H = ctx.operand("subgroup", alg.tag_from_json, required=False)
    tags = [H] if H is not None else [B.pair.trivial_tag, B.pair.gamma_tag]
    props, arrows = [], []
    for T in tags:
        r = compare_quotient(B, T)
        arrows.append({"subgroup": alg.tag_to_json(T), "arrows": r["arrows"]})
        props.append(_prop(f"orbit_bundle_equals_direct_quotient[{json.dumps(alg.tag_to_json(T))}]",
                           r["holds"], r["failures"][:1] or None))
    return {"result": arrows, "properties": props}


def _check(ctx: Context, action: str) -> dict:
    threads = int(os.environ.get("HECKEX_THREADS", "1") or 1)
    if action == "all":
        reports = S.check_pair(ctx.pair, ctx.args.seed, ctx.args.samples, threads)
        return {"suites": [r.to_json() for r in reports]}
    wanted = ctx.args.criterion or sorted(S.CRITERIA)
    out = []
    for n in wanted:
        res = S.acceptance(n, ctx.args.seed)
        res.pop("elapsed")
        out.append(res)
    return {"criteria": out}


def _prop(name: str, ok: bool, counterexample=None, **info) -> dict:
    entry = {"property": name, "pass": bool(ok)}
    if not ok and counterexample is not None:
        entry["counterexample"] = counterexample
    entry.update(info)
    return entry


# driver ------------------------------------------------------------------------------------


def _failed(report: dict) -> bool:
    if any(not p["pass"] for p in report.get("properties", [])):
        return True
    if any(not s["pass"] for s in report.get("suites", [])):
        return True
    return any(not c["pass"] for c in report.get("criteria", []))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pair", help="pair spec JSON file")
    common.add_argument("--bundle", help="graded algebra JSON file; switches the bundle to the EQ bundle")
    common.add_argument("--input", help="operand JSON file ('-' for stdin)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None, help="override per-property sample counts")
    common.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--criterion", type=int, action="append", choices=sorted(S.CRITERIA),
                        help="with 'check acceptance': run only these criteria")

    parser = argparse.ArgumentParser(prog="heckex", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, actions in VERBS.items():
        sub = groups.add_parser(group)
        acts = sub.add_subparsers(dest="action", required=True)
        for act in actions:
            acts.add_parser(act, parents=[common])
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute one command and return ``(exit status, text written)``."""
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args)
        g, a = args.group, args.action
        if g == "pair":
            body = _pair_info(ctx)
        elif g == "hecke":
            body = _hecke(ctx, a)
        elif g == "xp":
            body = _xp(ctx, a)
        elif g == "rep":
            body = _rep(ctx, a)
        elif g == "lln":
            body = _lln(ctx, a)
        elif g == "svn":
            body = _svn(ctx)
        elif g == "eq":
            body = _eq(ctx, a)
        else:
            body = _check(ctx, a)
    except SpecError as exc:
        return 2, f"heckex: error: {exc}\n"
    report = {"schema": SCHEMA, "command": f"{g} {a}", "seed": args.seed}
    report.update(body)
    report["pass"] = not _failed(report)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return (1 if _failed(report) else 0), text


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == 2 else sys.stdout
    if code == 2 or not _out_given(argv):
        stream.write(text)
    return code


def _out_given(argv) -> bool:
    argv = sys.argv[1:] if argv is None else argv
    return any(a == "--out" or a.startswith("--out=") for a in argv)


if __name__ == "__main__":
    sys.exit(main())
