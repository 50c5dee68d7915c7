"""The paper-reproduction suite: one callable check per acceptance item.

Every check returns (name, passed, detail).  ``run_suite`` executes them
in order and is what both the command line (``tautring4 verify``) and
the test suite drive.  All comparisons are exact; there are no
tolerances anywhere.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .graphs import (aut_order, canonical_graph, enumerate_stable_graphs,
                     family_name, E_graph, StableGraph)
from .expressions import (Space, TautExpression, TautMonomial, make_class,
                          monomial_name, name_unit_factor, normalize, zero)
from .calculus import (BoundaryMap, boundary_maps, forget_one, product_deg2,
                       pull)
from .basis import EssentialBasis, all_degree2_monomials, counting_identity_sides
from .relations import (catalog, native_relations, rederive_m32,
                        reduce_tensor_to_zero)
from .reports import due_report, inj0h2_report, piudisette_report
from .oracles import brute_aut_order, brute_enumerate, brute_isomorphic


class Check:
    def __init__(self, name, passed, detail=""):
        self.name = name
        self.passed = passed
        self.detail = detail

    def line(self):
        return "%-38s %s%s" % (self.name, "PASS" if self.passed else "FAIL",
                               ("  (%s)" % self.detail) if self.detail else "")


def _mc(name, space):
    return make_class(name, space)


# -- 1: graph enumeration vs brute force ------------------------------------

def check_graph_enumeration():
    bad = []
    total = 0
    for g in range(5):
        for n in range(5):
            P = tuple("abcd"[:n])
            if 2 * g - 2 + n <= 0:
                continue
            for codim in (0, 1, 2):
                fast = enumerate_stable_graphs(g, P, codim)
                slow = brute_enumerate(g, P, codim)
                total += 1
                if len(fast) != len(slow) or (
                        {canonical_graph(x) for x in fast}
                        != {canonical_graph(x) for x in slow}):
                    bad.append((g, P, codim))
    return Check("1 graph enumeration oracle", not bad,
                 "%d ambients checked" % total if not bad else repr(bad))


# -- 2: automorphism counts ---------------------------------------------------

def check_automorphisms():
    bad = []
    n_graphs = 0
    for g in range(5):
        for n in range(5):
            P = tuple("abcd"[:n])
            if 2 * g - 2 + n <= 0:
                continue
            for codim in (0, 1, 2):
                for gr in enumerate_stable_graphs(g, P, codim):
                    if 2 * gr.n_edges + len(P) > 8:
                        continue
                    n_graphs += 1
                    if brute_aut_order(gr) != aut_order(gr):
                        bad.append(family_name(gr))
    # the symmetric double-edge special case: order 4 exactly there
    for g in (3, 5, 7):
        gr = canonical_graph(E_graph(g, (g - 1) // 2, (), ()))
        if aut_order(gr) != 4 or brute_aut_order(gr) != 4:
            bad.append("E(%d) order" % ((g - 1) // 2,))
    for g in (4, 6):
        gr = canonical_graph(E_graph(g, g // 2, (), ()))
        if aut_order(gr) != 2:
            bad.append("E asym order g=%d" % g)
    return Check("2 automorphism counts", not bad,
                 "%d graphs vs brute force" % n_graphs if not bad else repr(bad))


# -- 3: product formula reproduction -----------------------------------------

def check_products():
    bad = []

    def expect(space, got, want):
        if normalize(got) != normalize(want):
            bad.append((space, got, want))

    sp2 = Space(2, ())
    sp3 = Space(3, ())
    sp3x = Space(3, ("x",))
    sp4 = Space(4, ())
    dirr = {s: _mc("d_irr", s) for s in (sp2, sp3, sp3x, sp4)}
    expect(sp2, product_deg2(dirr[sp2], dirr[sp2]),
           -1 * _mc("psi|d_irr", sp2) + 2 * _mc("d_F", sp2))
    expect(sp3, product_deg2(dirr[sp3], dirr[sp3]),
           -1 * _mc("psi|d_irr", sp3) + 2 * _mc("d_F", sp3)
           + 2 * _mc("d_E(1,{})", sp3))
    expect(sp3x, product_deg2(dirr[sp3x], dirr[sp3x]),
           -1 * _mc("psi|d_irr", sp3x) + 2 * _mc("d_F", sp3x)
           + 2 * _mc("d_E(0,{x})", sp3x) + 2 * _mc("d_E(1,{})", sp3x))
    expect(sp4, product_deg2(dirr[sp4], dirr[sp4]),
           -1 * _mc("psi|d_irr", sp4) + 2 * _mc("d_F", sp4)
           + 2 * _mc("d_E(1,{})", sp4))
    # separating self-intersections, including the displayed special cases
    expect(sp2, product_deg2(_mc("d_{1,{}}", sp2), _mc("d_{1,{}}", sp2)),
           -1 * _mc("psi|d_{1,{}}", sp2) - _mc("d_{1,{}}|psi", sp2))
    expect(sp3, product_deg2(_mc("d_{1,{}}", sp3), _mc("d_{1,{}}", sp3)),
           -1 * _mc("psi|d_{1,{}}", sp3) - _mc("d_{1,{}}|psi", sp3)
           + 2 * _mc("d_G(1,{},1,{})", sp3))
    expect(sp3x, product_deg2(_mc("d_{1,{x}}", sp3x), _mc("d_{1,{x}}", sp3x)),
           -1 * _mc("psi|d_{1,{x}}", sp3x) - _mc("d_{1,{x}}|psi", sp3x))
    expect(sp3x, product_deg2(_mc("d_{1,{}}", sp3x), _mc("d_{1,{}}", sp3x)),
           -1 * _mc("psi|d_{1,{}}", sp3x) - _mc("d_{1,{}}|psi", sp3x)
           + 2 * _mc("d_G(1,{},1,{x})", sp3x))
    expect(sp4, product_deg2(_mc("d_{1,{}}", sp4), _mc("d_{1,{}}", sp4)),
           -1 * _mc("psi|d_{1,{}}", sp4) - _mc("d_{1,{}}|psi", sp4)
           + 2 * _mc("d_G(1,{},2,{})", sp4))
    expect(sp4, product_deg2(_mc("d_{2,{}}", sp4), _mc("d_{2,{}}", sp4)),
           -1 * _mc("psi|d_{2,{}}", sp4) - _mc("d_{2,{}}|psi", sp4))
    # mixed products
    expect(sp3, product_deg2(_mc("kappa1", sp3), _mc("d_{1,{}}", sp3)),
           _mc("kappa|d_{1,{}}", sp3) + _mc("d_{1,{}}|kappa", sp3))
    expect(sp3, product_deg2(_mc("kappa1", sp3), dirr[sp3]),
           _mc("kappa1*d_irr", sp3))
    expect(sp3x, product_deg2(_mc("psi_x", sp3x), dirr[sp3x]),
           _mc("psi_x*d_irr", sp3x))
    # genus-1 dimension vanishing: d_irr^2 = 0 on the one-pointed space
    sp11 = Space(1, ("x",))
    if not product_deg2(_mc("d_irr", sp11), _mc("d_irr", sp11)).is_zero():
        bad.append("d_irr^2 at (1,1)")
    return Check("3 product formula reproduction", not bad,
                 "" if not bad else "%d mismatches" % len(bad))


# -- 4: pull-back reproduction ------------------------------------------------

def check_pullbacks():
    bad = []
    for g in (3, 4):
        sp = Space(g, ())
        bm = BoundaryMap(sp, "irr")
        f = bm.factors[0]
        got = pull(_mc("d_irr", sp), bm).factor_expression()
        want = (_mc("d_irr", f) - _mc("psi_q", f) - _mc("psi_r", f)
                + sum((_mc("d_{%d,{q}}" % a, f) for a in range(1, g - 1)),
                      zero(f)))
        if normalize(got) != normalize(want):
            bad.append("xi_irr*(d_irr) at (%d,0)" % g)
        gotF = pull(_mc("d_F", sp), bm).factor_expression()
        wantF = (-1 * _mc("psi_q*d_irr", f) - _mc("psi_r*d_irr", f)
                 + _mc("d_F", f))
        for a in range(0, g - 1):
            try:
                wantF = wantF + _mc("d_E(%d,{q})" % a, f)
            except ValueError:
                pass
        for a in range(0, g - 1):
            for lab in ("q", "r"):
                try:
                    wantF = wantF + _mc("d_H(%d,{%s})" % (a, lab), f)
                except ValueError:
                    pass
        if normalize(gotF) != normalize(wantF):
            bad.append("xi_irr*(d_F) at (%d,0)" % g)
    # excess of a separating stratum with both sides marked
    spxy = Space(2, ("x", "y"))
    bm = BoundaryMap(spxy, "sep", 1, ("x",))
    t = pull(_mc("d_{1,{x}}", spxy), bm)
    s_l, t_l = bm.pair
    f0, f1 = bm.factors
    from .graphs import trivial_graph
    fund0 = TautMonomial(trivial_graph(1, f0.markings))
    fund1 = TautMonomial(trivial_graph(1, f1.markings))
    psi_s = TautMonomial(trivial_graph(1, f0.markings), {("l", s_l): 1})
    psi_t = TautMonomial(trivial_graph(1, f1.markings), {("l", t_l): 1})
    ok = (len(t.terms) == 2
          and t.terms.get((psi_s, fund1)) == Fraction(-1)
          and t.terms.get((fund0, psi_t)) == Fraction(-1))
    if not ok:
        bad.append("xi_{b,B}*(d_{b,B}) excess class")
    return Check("4 pull-back reproduction", not bad,
                 "" if not bad else repr(bad))


# -- 5: relation catalog consistency -------------------------------------------

def _native_scope():
    out = []
    for g, P in [(1, ("1",)), (1, ("1", "2")), (2, ()), (2, ("1",)),
                 (2, ("1", "2")), (2, ("1", "2", "3")), (3, ()),
                 (3, ("1",)), (3, ("1", "2"))]:
        for rel in native_relations(g, P):
            out.append((Space(g, P), rel))
    return out


def check_catalog_consistency():
    bad = []
    n_checks = 0
    for sp, rel in _native_scope():
        if rel.expr.is_zero():
            continue
        for bmap in boundary_maps(sp, min_factor_genus=1):
            n_checks += 1
            if reduce_tensor_to_zero(pull(rel.expr, bmap)):
                bad.append((rel.rel_id, repr(bmap)))
        if sp.n <= 2:
            x = sp.fresh("z")
            up = sp.with_extra((x,))
            n_checks += 1
            coords = catalog(up).reduce(forget_one(rel.expr, x))
            if coords:
                bad.append((rel.rel_id, "pi_%s" % x))
    return Check("5 relation catalog consistency", not bad,
                 "%d pullbacks vanish" % n_checks if not bad else repr(bad))


# -- 6: the new relation on the two-pointed genus-3 space ---------------------

M32_TABLE = {
    "d_F": "-1/630", "d_E(1,{})": "-9/35", "d_E(2,{})": "13/21",
    "d_H(2,{})": "1/7", "d_H(1,{})": "4/105", "d_H(1,{a,b})": "-2/105",
    "d_H(0,{})": "4/63", "d_H(0,{a,b})": "10/63",
    "d_G(1,{a,b},1,{})": "16/35", "d_G(1,{},1,{a,b})": "-8/35",
    "d_G(1,{},2,{})": "5/7", "d_G(2,{},0,{a,b})": "40/21",
    "d_G(2,{},1,{})": "-1",
    "psi|d_irr": "-1/42", "psi|d_{3,{}}": "5", "psi|d_{2,{}}": "-40/21",
    "psi|d_{2,{a,b}}": "-16/21", "kappa|d_{3,{}}": "-1",
    "psi_a^2": "1", "psi_b^2": "1", "psi_a*psi_b": "-6/5",
    "psi|d_{2,{a}}": "5/3", "psi|d_{2,{b}}": "5/3",
    "psi_a*d_{2,{a}}": "-6/7", "psi_b*d_{2,{b}}": "-6/7",
    "psi_a*d_{2,{a,b}}": "12/35", "psi_b*d_{2,{a,b}}": "12/35",
    "psi_a*d_irr": "1/35", "psi_b*d_irr": "1/35",
    "d_E(2,{a})": "-4/15", "d_E(2,{b})": "-4/15", "d_E(1,{a})": "12/35",
    "d_H(1,{a})": "1/105", "d_H(1,{b})": "1/105",
    "d_H(0,{a})": "-5/36", "d_H(0,{b})": "-5/36",
    "d_G(2,{b},0,{a})": "-5/3", "d_G(2,{a},0,{b})": "-5/3",
    "d_G(2,{},0,{a})": "40/21", "d_G(2,{},0,{b})": "40/21",
    "d_G(1,{},1,{a})": "4/35", "d_G(1,{},1,{b})": "4/35",
    "d_G(1,{a},1,{})": "-26/35",
}


def check_rederive_m32():
    sp = Space(3, ("a", "b"))
    rel, coeffs = rederive_m32()
    want = zero(sp)
    for name, c in M32_TABLE.items():
        want = want + Fraction(c) * _mc(name, sp)
    stored = [r for r in native_relations(3, ("a", "b"))
              if r.rel_id == "faber-3-2"][0]
    ok1 = normalize(rel.expr) == normalize(want)
    ok2 = normalize(stored.expr - rel.expr).is_zero()
    detail = "unique solution; matches the constraint table and the catalog"
    if not ok1:
        detail = "rederived relation differs from the pinned coefficients"
    if not ok2:
        detail = "stored relation differs from the rederived one"
    return Check("6 rederivation on (3,{a,b})", ok1 and ok2, detail)


# -- 7: rank and injectivity checks -------------------------------------------

def check_rank_reports():
    bad = []
    for P in ((), ("x",)):
        rep = piudisette_report(Space(7, P))
        for block, r in rep.items():
            if not r["maximal"]:
                bad.append(("piudisette", P, block))
    for n in (5, 6):
        rep = inj0h2_report(Space(0, tuple("12345678"[:n])))
        if not rep["injective"]:
            bad.append(("inj0h2", n))
    rep4 = due_report(Space(2, tuple("1234")))
    if not rep4["W_H(1)"]["maximal"]:
        bad.append(("due", 4, "W_H(1)"))
    rep5 = due_report(Space(2, tuple("12345")))
    if not rep5["injective"]:
        bad.append(("due", 5, "kernel %d"
                    % (rep5["dim_source"] - rep5["rank"])))
    return Check(
        "7 rank and injectivity checks", not bad,
        "all maximal" if not bad else
        "%r; the five-marked genus-2 family genuinely has this kernel "
        "(tail pushforwards of a divisor class every pair map kills); "
        "see the notes shipped with the derivation" % (bad,))


# -- 8: the counting identity --------------------------------------------------

def check_counting_identity():
    bad = []
    for P in ((), ("x",)):
        left, right = counting_identity_sides(Space(8, P))
        if left != right:
            bad.append((P, left, right))
    return Check("8 counting identity at genus 8", not bad,
                 "" if not bad else repr(bad))


# -- 9: property suites ---------------------------------------------------------

def _random_monomial(rnd, space):
    pool = all_degree2_monomials(space)
    return rnd.choice(pool)


def _shuffled_presentation(rnd, gr):
    perm = list(range(gr.n_vertices))
    rnd.shuffle(perm)
    edges = []
    emap = []
    for i, (u, v) in enumerate(gr.edges):
        flip = rnd.random() < 0.5
        emap.append(flip)
        e = (perm[v], perm[u]) if flip else (perm[u], perm[v])
        edges.append(e)
    order = list(range(len(edges)))
    rnd.shuffle(order)
    new_edges = [edges[i] for i in order]
    legs = [(l, perm[v]) for l, v in gr.legs]
    g2 = StableGraph([gr.genera[perm.index(i)] for i in range(gr.n_vertices)],
                     new_edges, legs)
    # half-edge map old -> new
    hmap = {}
    for new_i, old_i in enumerate(order):
        flip = emap[old_i]
        hmap[("e", old_i, 0)] = ("e", new_i, 1 if flip else 0)
        hmap[("e", old_i, 1)] = ("e", new_i, 0 if flip else 1)
    for l, _ in gr.legs:
        hmap[("l", l)] = ("l", l)
    return g2, hmap


def check_properties():
    rnd = random.Random(20260808)
    bad = []
    spaces = [Space(2, ("x", "y")), Space(3, ("x",)), Space(2, ()),
              Space(1, ("x", "y"))]
    # normalization idempotence on randomized presentations
    for k in range(1000):
        sp = rnd.choice(spaces)
        m = _random_monomial(rnd, sp)
        g2, hmap = _shuffled_presentation(rnd, m.graph)
        psi2 = {hmap[h]: e for h, e in m.psi.items()}
        e = TautExpression(sp, {TautMonomial(g2, psi2, {
            _vmap_for(m.graph, g2, hmap).get(v, v): d
            for v, d in m.kappa.items()}): Fraction(rnd.randint(1, 9), rnd.randint(1, 9))})
        if normalize(e) != e or normalize(normalize(e)) != normalize(e):
            bad.append(("normalize", k))
            break
    # relabeling invariance across the catalog
    count = 0
    for sp, rel in _native_scope():
        for _ in range(max(1, 100 // max(1, len(_native_scope()))) + 7):
            terms = {}
            for m, c in rel.expr.terms.items():
                g2, hmap = _shuffled_presentation(rnd, m.graph)
                psi2 = {hmap[h]: e for h, e in m.psi.items()}
                kap2 = {_vmap_for(m.graph, g2, hmap).get(v, v): d
                        for v, d in m.kappa.items()}
                m2 = TautMonomial(g2, psi2, kap2)
                terms[m2] = terms.get(m2, Fraction(0)) + c
            if TautExpression(sp, terms) != rel.expr:
                bad.append(("relabel", rel.rel_id))
            count += 1
    # forgetful functoriality: both orders agree after catalog reduction
    spab = Space(2, ("a", "b"))
    up = Space(2, ("a", "b", "x", "y"))
    cat = catalog(up)
    from .degree1 import with_space
    for m in all_degree2_monomials(spab):
        e = TautExpression(spab, {m: 1})
        xy = with_space(forget_one(forget_one(e, "x"), "y"), up)
        yx = with_space(forget_one(forget_one(e, "y"), "x"), up)
        diff = xy - yx
        if diff.is_zero():
            continue
        if cat.reduce(diff):
            bad.append(("functoriality", monomial_name(m)))
    # reduce linearity
    sp22 = Space(2, ("x", "y"))
    cat22 = catalog(sp22)
    gens = all_degree2_monomials(sp22)
    for _ in range(25):
        e1 = TautExpression(sp22, {rnd.choice(gens): rnd.randint(1, 5)})
        e2 = TautExpression(sp22, {rnd.choice(gens): rnd.randint(1, 5)})
        a, b = Fraction(rnd.randint(-4, 4)), Fraction(rnd.randint(-4, 4))
        lhs = cat22.reduce(a * e1 + b * e2)
        r1, r2 = cat22.reduce(e1), cat22.reduce(e2)
        rhs = {}
        for m, c in r1.items():
            rhs[m] = rhs.get(m, Fraction(0)) + a * c
        for m, c in r2.items():
            rhs[m] = rhs.get(m, Fraction(0)) + b * c
        rhs = {m: c for m, c in rhs.items() if c}
        if lhs != rhs:
            bad.append(("linearity",))
    return Check("9 property suites", not bad,
                 "" if not bad else repr(bad[:4]))


def _vmap_for(old, new, hmap):
    vmap = {}
    for h, h2 in hmap.items():
        if h[0] == "e":
            vmap[old.edges[h[1]][h[2]]] = new.edges[h2[1]][h2[2]]
        else:
            vmap[old.leg_vertex(h[1])] = new.leg_vertex(h2[1])
    return vmap


ALL_CHECKS = [
    check_graph_enumeration,
    check_automorphisms,
    check_products,
    check_pullbacks,
    check_catalog_consistency,
    check_rederive_m32,
    check_rank_reports,
    check_counting_identity,
    check_properties,
]


def run_suite(selected=None, out=print):
    results = []
    for fn in ALL_CHECKS:
        if selected and not any(s in fn.__name__ for s in selected):
            continue
        res = fn()
        results.append(res)
        out(res.line())
    return results
