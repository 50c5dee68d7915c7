"""Rank and injectivity reports for the degree-4 freeness arguments.

Three report families:

* ``piudisette``: the pullback to the non-separating boundary divisor,
  written in block form over the subspace decomposition (Mumford kappa
  and psi blocks, kappa-mixed, psi-mixed, boundary E/F and G/H blocks);
  every diagonal block must have full row rank.
* ``due``: the genus-2 family of rational-tail pullbacks f_ij on the
  span of the reduced essential classes; the whole map must be
  injective for five or more markings, and the loop-vertex block
  already for four.
* ``inj0h2``: the divisor-level version of the same family on a
  genus-0 space, injective from five markings on.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .expressions import (Space, TautExpression, TautMonomial, make_class,
                          monomial_name, name_unit_factor)
from .calculus import (BoundaryMap, attach_tail_pullback, pull)
from .degree1 import divisor_basis, divisor_reducer
from .basis import EssentialBasis
from .relations import catalog
from .linalg import RationalMatrix


def matrix_of_map(images, source_keys, target_keys):
    """Rows = source elements, row i = coordinates of the i-th image."""
    m = RationalMatrix(source_keys, target_keys)
    ti = {k: j for j, k in enumerate(target_keys)}
    for i, img in enumerate(images):
        for k, c in img.items():
            if c:
                if k not in ti:
                    raise ValueError("image coordinate %r outside target" % (k,))
                m.rows[i][ti[k]] = Fraction(c)
    return m


def _class_expr(space, m):
    return TautExpression(space, {m: name_unit_factor(m)})


def xi_irr_coordinates(space, classes):
    """Coordinates of xi_irr^* of each class on the target basis."""
    bmap = BoundaryMap(space, "irr")
    target = bmap.factors[0]
    cat = catalog(target)
    out = []
    for m in classes:
        t = pull(_class_expr(space, m), bmap)
        expr = TautExpression(target, {ms[0]: c for ms, c in t.terms.items()})
        out.append(cat.reduce(expr))
    return target, out


# -- subspace classification ---------------------------------------------

def piudisette_type(m, space, P_part, O_part):
    gr = m.graph
    P_set, O_set = set(P_part), set(O_part)
    if gr.n_edges == 0:
        if m.psi:
            labels = [h[1] for h, e in m.psi.items() for _ in range(e)]
            in_o = [l in O_set for l in labels]
            if m.kappa:
                return "Psi_O" if in_o[0] else "Psi_P"
            if all(in_o):
                return "Psi_O"
            if not any(in_o):
                return "Psi_P"
            return "Psi_OP"
        return "K"
    if gr.n_edges == 1:
        if m.kappa:
            return "W_K"
        (h, e), = m.psi.items()
        if h[0] == "e":
            return "W_Psi"
        return "W_PsiO" if h[1] in O_set else "W_PsiP"
    loops = [e for e in gr.edges if e[0] == e[1]]
    if gr.n_vertices == 1 or (gr.n_vertices == 2 and not loops):
        return "W_EF"
    return "W_GH"


PIUDISETTE_BLOCKS = ("K", "Psi_P", "W_K", "W_Psi", "W_PsiP", "W_EF", "W_GH")


def piudisette_report(space):
    """Diagonal block ranks of xi_irr^* over the subspace decomposition."""
    basis = EssentialBasis(space)
    target, coords = xi_irr_coordinates(space, basis.classes)
    q, r = target.markings[-2:]
    src_type = [piudisette_type(m, space, space.markings, ()) for m in basis.classes]
    tgt_classes = EssentialBasis(target).classes
    tgt_type = {m: piudisette_type(m, target, space.markings, (q, r))
                for m in tgt_classes}
    report = {}
    for block in PIUDISETTE_BLOCKS:
        rows = [coords[i] for i, t in enumerate(src_type) if t == block]
        cols = [m for m in tgt_classes if tgt_type[m] == block]
        if not rows:
            report[block] = {"rows": 0, "cols": len(cols), "rank": 0,
                             "maximal": True}
            continue
        sub = matrix_of_map([{m: c.get(m, Fraction(0)) for m in cols}
                             for c in rows], range(len(rows)), cols)
        rk = sub.rank()
        report[block] = {"rows": len(rows), "cols": len(cols), "rank": rk,
                         "maximal": rk == len(rows)}
    return report


# -- the genus-2 forgetful family ------------------------------------------


def c4_classes(space):
    """The lemma's reduced class list: essential minus pure Mumford minus
    the psi-decorated genus-2 classes eliminated by the three-marked
    relations (smallest marking of each 3-subset)."""
    basis = EssentialBasis(space)
    P = space.markings
    pos = {m: k for k, m in enumerate(P)}
    dropped = set()
    for trip in itertools.combinations(P, 3):
        i = min(trip, key=pos.get)
        jk = tuple(x for x in trip if x != i)
        A = tuple(x for x in P if x not in jk)
        name = "psi_%s*d_{2,{%s}}" % (i, ",".join(sorted(A)))
        e = make_class(name, space)
        if e.terms:
            (mm, _), = e.terms.items()
            dropped.add(mm)
    out = []
    for m in basis.classes:
        if m.graph.n_edges == 0:
            continue
        if m in dropped:
            continue
        out.append(m)
    return out


def due_type(m, space, s_label=None):
    gr = m.graph
    if gr.n_edges == 1:
        (h, e), = m.psi.items()
        if h[0] == "e":
            return "W_psi"
        if s_label is not None and h[1] == s_label:
            return "W_psiS"
        return "W_psiP"
    loops = [e for e in gr.edges if e[0] == e[1]]
    if gr.n_vertices == 1:
        return "W_F"
    if gr.n_vertices == 2 and not loops:
        return "W_E"
    if loops:
        return "W_H(%d)" % gr.genera[loops[0][0]]
    mid = next(v for v in range(3) if all(v in e for e in gr.edges))
    ends = sorted(gr.genera[v] for v in range(3) if v != mid)
    gm = gr.genera[mid]
    if gm == 0 and ends == [0, 2]:
        return "W_G(2,0)"
    if gm == 2:
        return "W_G(0,2)"
    if gm == 1:
        return "W_G(1,1)"
    return "W_G(1,0)"


DUE_BLOCKS = ("W_F", "W_E", "W_H(0)", "W_G(1,0)", "W_G(0,2)", "W_G(2,0)",
              "W_H(1)", "W_G(1,1)", "W_psi", "W_psiP")

# the target column types each diagonal block is allowed to use
_DUE_TARGET = {b: (b,) for b in DUE_BLOCKS}
_DUE_TARGET["W_G(0,2)"] = ("W_G(0,2)", "W_psiS")


def due_report(space):
    """Block ranks and the kernel of the genus-2 forgetful family."""
    P = space.markings
    srcs = c4_classes(space)
    src_type = [due_type(m, space) for m in srcs]
    coords = [dict() for _ in srcs]
    tgt_keys = []
    tgt_type = {}
    for pair in itertools.combinations(P, 2):
        tspace = Space(2, tuple(x for x in P if x not in pair) + ("s",))
        cat = catalog(tspace)
        retain = c4_classes(tspace)
        for m in retain:
            key = (pair, m)
            tgt_keys.append(key)
            tgt_type[key] = due_type(m, tspace, s_label="s")
        for k, m in enumerate(srcs):
            img = attach_tail_pullback(_class_expr(space, m), pair, "s")
            red = cat.reduce_retaining(img, retain)
            for mm, c in red.items():
                coords[k][(pair, mm)] = c
    full = matrix_of_map(coords, range(len(srcs)), tgt_keys)
    report = {"dim_source": len(srcs), "rank": full.rank()}
    report["injective"] = report["rank"] == len(srcs)
    for block in DUE_BLOCKS:
        rows = [coords[i] for i, t in enumerate(src_type) if t == block]
        cols = [k for k in tgt_keys if tgt_type[k] in _DUE_TARGET[block]]
        if not rows:
            report[block] = {"rows": 0, "rank": 0, "maximal": True}
            continue
        sub = matrix_of_map([{k: c.get(k, Fraction(0)) for k in cols}
                             for c in rows], range(len(rows)), cols)
        rk = sub.rank()
        report[block] = {"rows": len(rows), "rank": rk,
                         "maximal": rk == len(rows)}
    return report


# -- the divisor-level genus-0 family ---------------------------------------


def inj0h2_report(space, pairs="all"):
    """Kernel of the rational-tails family on H^2 of a genus-0 space.

    ``pairs`` selects the index family: "all" uses every 2-subset of the
    markings; "avoid-last" drops the pairs meeting the last marking (the
    five-marked instance of that family has a one-dimensional kernel, so
    the injectivity checks run over the full family).
    """
    P = space.markings
    assert space.g == 0
    h = P[-1]
    srcs = list(divisor_basis(space))
    coords = [dict() for _ in srcs]
    tgt_keys = []
    pool = [x for x in P if x != h] if pairs == "avoid-last" else list(P)
    for pair in itertools.combinations(pool, 2):
        tspace = Space(0, tuple(x for x in P if x not in pair) + ("s",))
        red = divisor_reducer(tspace)
        for m in divisor_basis(tspace):
            tgt_keys.append((pair, m))
        for k, m in enumerate(srcs):
            img = attach_tail_pullback(TautExpression(space, {m: 1}),
                                       pair, "s")
            for mm, c in red.coordinates(img).items():
                coords[k][(pair, mm)] = c
    full = matrix_of_map(coords, range(len(srcs)), tgt_keys)
    rank = full.rank()
    return {"dim_source": len(srcs), "rank": rank,
            "injective": rank == len(srcs)}
