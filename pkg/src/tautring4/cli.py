"""Command line front end.

Every numeric value is printed as an exact fraction; identical inputs
produce byte-identical output.  Exit codes: 0 success, 1 error, 2 when a
reduction leaves a nonzero residual (a relation candidate in the sense
of the catalog contract).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .graphs import (aut_order, enumerate_stable_graphs, family_name)
from .expressions import (Space, TautExpression, make_class, monomial_name,
                          name_unit_factor, normalize)
from .calculus import (BoundaryMap, forgetful_pullback, pull, product_deg2)
from .basis import EssentialBasis, is_essential
from .degree1 import divisor_reducer
from .relations import (RelationCandidate, catalog, native_relations,
                        rederive_m32)
from .reports import due_report, inj0h2_report, piudisette_report
from .serde import (dump_expression, expr_to_json, graph_to_json,
                    load_expression)
from .acceptance import run_suite


def _space(args):
    markings = []
    if args.markings:
        markings = [m.strip() for m in args.markings.split(",") if m.strip()]
    return Space(args.genus, markings)


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_graphs(args):
    sp = _space(args)
    graphs = enumerate_stable_graphs(sp.g, sp.markings, args.codim)
    if args.format == "names":
        for gr in graphs:
            sys.stdout.write("%s aut=%d\n" % (family_name(gr), aut_order(gr)))
    else:
        _emit([dict(graph_to_json(gr), name=family_name(gr),
                    aut=aut_order(gr)) for gr in graphs])
    return 0


def cmd_aut(args):
    from .serde import graph_from_json
    with open(args.path, "r", encoding="utf-8") as fh:
        gr = graph_from_json(json.load(fh))
    sys.stdout.write("%d\n" % aut_order(gr))
    return 0


def cmd_basis(args):
    sp = _space(args)
    basis = EssentialBasis(sp)
    for m in basis.classes:
        sys.stdout.write(monomial_name(m) + "\n")
    sys.stdout.write("# %d classes\n" % len(basis.classes))
    return 0


def cmd_normalize(args):
    expr = load_expression(args.path)
    sys.stdout.write(dump_expression(normalize(expr)) + "\n")
    return 0


def cmd_mul(args):
    e1 = load_expression(args.path1)
    e2 = load_expression(args.path2)
    sys.stdout.write(dump_expression(product_deg2(e1, e2)) + "\n")
    return 0


def cmd_pull(args):
    expr = load_expression(args.path)
    if args.forget:
        extra = [m.strip() for m in args.forget.split(",") if m.strip()]
        out = forgetful_pullback(expr, extra)
        sys.stdout.write(dump_expression(out) + "\n")
        return 0
    spec = args.boundary
    sp = expr.space
    if spec == "irr":
        bmap = BoundaryMap(sp, "irr")
    else:
        a, A = spec.split(":", 1)
        bmap = BoundaryMap(sp, "sep", int(a),
                           [m for m in A.split(",") if m])
    t = pull(expr, bmap)
    out = {"factors": [{"g": f.g, "markings": list(f.markings)}
                       for f in bmap.factors],
           "terms": []}
    for ms, c in sorted(t.terms.items(), key=repr):
        disp = c
        for m in ms:
            disp = disp / name_unit_factor(m)
        out["terms"].append({
            "coeff": str(disp),
            "parts": [expr_to_json(TautExpression(f, {m: name_unit_factor(m)}))
                      ["terms"][0] for f, m in zip(bmap.factors, ms)]})
    _emit(out)
    return 0


def cmd_project(args):
    expr = load_expression(args.path)
    a, A = args.factor.split(":", 1)
    bmap = BoundaryMap(expr.space, "sep", int(a),
                       [m for m in A.split(",") if m])
    t = pull(expr, bmap).bidegree_part((1, 1))
    red0 = divisor_reducer(bmap.factors[0])
    red1 = divisor_reducer(bmap.factors[1])
    coords = {}
    for ms, c in t.terms.items():
        v0 = red0.coordinates(TautExpression(bmap.factors[0], {ms[0]: 1}))
        v1 = red1.coordinates(TautExpression(bmap.factors[1], {ms[1]: 1}))
        for m0, a0 in v0.items():
            for m1, a1 in v1.items():
                key = (monomial_name(m0), monomial_name(m1))
                coords[key] = coords.get(key, Fraction(0)) + c * a0 * a1
    out = [{"left": k[0], "right": k[1], "coeff": str(v)}
           for k, v in sorted(coords.items()) if v]
    _emit(out)
    return 0


def cmd_relations(args):
    sp = _space(args)
    out = []
    for rel in native_relations(sp.g, sp.markings):
        out.append({"id": rel.rel_id, "provenance": rel.provenance,
                    "ambient": [sp.g, list(sp.markings)],
                    "expression": expr_to_json(rel.expr)})
    _emit(out)
    return 0


def cmd_reduce(args):
    expr = load_expression(args.path)
    cat = catalog(expr.space)
    try:
        coords = cat.reduce(expr)
    except RelationCandidate as exc:
        sys.stdout.write("relation candidate: %s\n" % exc)
        return 2
    for m, c in sorted(coords.items(), key=lambda mc: mc[0].sort_key()):
        sys.stdout.write("%s * %s\n" % (c, monomial_name(m)))
    if not coords:
        sys.stdout.write("0\n")
        return 0
    return 2


def cmd_rederive_m32(args):
    rel, coeffs = rederive_m32()
    for m, c in sorted(coeffs.items(), key=lambda mc: mc[0].sort_key()):
        sys.stdout.write("%s * %s\n" % (c, monomial_name(m)))
    return 0


def cmd_rank_report(args):
    sp = _space(args)
    if args.lemma == "piudisette":
        rep = piudisette_report(sp)
        for block, r in rep.items():
            sys.stdout.write(
                "%-8s rows=%d cols=%d rank=%d maximal=%s\n"
                % (block, r["rows"], r["cols"], r["rank"], r["maximal"]))
        return 0 if all(r["maximal"] for r in rep.values()) else 1
    if args.lemma == "due":
        rep = due_report(sp)
        sys.stdout.write("dim=%d rank=%d injective=%s\n"
                         % (rep["dim_source"], rep["rank"], rep["injective"]))
        for block, r in rep.items():
            if isinstance(r, dict):
                sys.stdout.write("%-10s rows=%d rank=%d maximal=%s\n"
                                 % (block, r["rows"], r["rank"], r["maximal"]))
        return 0 if rep["injective"] else 1
    rep = inj0h2_report(sp, pairs=args.pairs)
    sys.stdout.write("dim=%d rank=%d injective=%s\n"
                     % (rep["dim_source"], rep["rank"], rep["injective"]))
    return 0 if rep["injective"] else 1


def cmd_verify(args):
    results = run_suite(out=lambda s: sys.stdout.write(s + "\n"))
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="tautring4",
        description="Exact calculus of degree-4 tautological classes on "
                    "moduli of stable curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def space_args(sp):
        sp.add_argument("--genus", type=int, required=True)
        sp.add_argument("--markings", default="")

    g = sub.add_parser("graphs", help="enumerate boundary strata")
    space_args(g)
    g.add_argument("--codim", type=int, default=1, choices=(0, 1, 2))
    g.add_argument("--format", default="json", choices=("json", "names"))
    g.set_defaults(fn=cmd_graphs)

    a = sub.add_parser("aut", help="automorphism count of a graph file")
    a.add_argument("path")
    a.set_defaults(fn=cmd_aut)

    b = sub.add_parser("basis", help="the essential degree-4 classes")
    space_args(b)
    b.add_argument("--degree", type=int, default=4, choices=(4,))
    b.set_defaults(fn=cmd_basis)

    n = sub.add_parser("normalize", help="canonicalize an expression file")
    n.add_argument("path")
    n.set_defaults(fn=cmd_normalize)

    m = sub.add_parser("mul", help="product of two degree-1 expressions")
    m.add_argument("path1")
    m.add_argument("path2")
    m.set_defaults(fn=cmd_mul)

    pl = sub.add_parser("pull", help="boundary or forgetful pullback")
    pl.add_argument("path")
    pl.add_argument("--boundary", help="irr or a:x,y for a separating map")
    pl.add_argument("--forget", help="comma-separated new markings")
    pl.set_defaults(fn=cmd_pull)

    pr = sub.add_parser("project", help="H2xH2 coordinates of a pullback")
    pr.add_argument("path")
    pr.add_argument("--factor", required=True, help="a:x,y")
    pr.set_defaults(fn=cmd_project)

    r = sub.add_parser("relations", help="native relations on a space")
    space_args(r)
    r.set_defaults(fn=cmd_relations)

    rd = sub.add_parser("reduce", help="essential-basis coordinates")
    rd.add_argument("path")
    rd.set_defaults(fn=cmd_reduce)

    rm = sub.add_parser("rederive-m32", help="re-derive the (3,2) relation")
    rm.set_defaults(fn=cmd_rederive_m32)

    rr = sub.add_parser("rank-report", help="block rank reports")
    space_args(rr)
    rr.add_argument("--lemma", default="piudisette",
                    choices=("piudisette", "due", "inj0h2"))
    rr.add_argument("--pairs", default="all", choices=("all", "avoid-last"))
    rr.set_defaults(fn=cmd_rank_report)

    v = sub.add_parser("verify", help="run the reproduction suite")
    v.add_argument("--suite", default="paper", choices=("paper",))
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, RelationCandidate) as exc:
        if isinstance(exc, RelationCandidate):
            sys.stderr.write("relation candidate: %s\n" % exc)
            return 2
        sys.stderr.write("error: %s\n" % exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
