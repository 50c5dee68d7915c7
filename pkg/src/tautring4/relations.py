"""The degree-4 relation catalog: native tables, propagation, reduction.

Native relations are stored in ``data/relations.json`` with display-unit
coefficients and get instantiated onto concrete marking sets.  A catalog
for an ambient space consists of

* structural eliminations: every divisor relation on a stratum factor
  (psi and kappa eliminations in low genus, Keel relations in genus 0)
  pushed forward along the gluing map, plus ambient divisor relations
  multiplied by divisor classes;
* the native relations whose marking count matches;
* the forgetful pullbacks of every native living on a marking subset.

Reduction is exact Gaussian elimination over a fixed column order, with
the essential classes kept as the retained coordinates.
"""

from __future__ import annotations

import itertools
import json
import os
import re
from fractions import Fraction
from functools import lru_cache

from .graphs import trivial_graph
from .expressions import (Space, TautExpression, TautMonomial,
                          TensorExpression, make_class, monomial_name,
                          name_unit_factor, zero)
from .calculus import (BoundaryMap, boundary_maps, forget_one, product_deg2,
                       pull, push, attach_tail_pullback)
from .degree1 import (DivisorReducer, divisor_classes, divisor_reducer,
                      divisor_relations, with_space)
from .basis import EssentialBasis, all_degree2_monomials
from .linalg import Echelon, RationalMatrix


class Relation:
    """A tautological expression asserted to vanish."""

    __slots__ = ("rel_id", "provenance", "space", "expr")

    def __init__(self, rel_id, provenance, space, expr):
        self.rel_id = rel_id
        self.provenance = provenance
        self.space = space
        self.expr = expr

    def __repr__(self):
        return "Relation(%s @ %r)" % (self.rel_id, self.space)


# ---------------------------------------------------------------------------
# data loading


def _data_path():
    override = os.environ.get("TAUTRING4_CATALOG")
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "data", "relations.json")


@lru_cache(maxsize=None)
def _load_table(path=None):
    with open(path or _data_path(), "r", encoding="utf-8") as fh:
        return json.load(fh)


def _substitute(name, mapping):
    """Simultaneously rename the markings appearing in a class name."""
    def sub_group(m):
        items = [x.strip() for x in m.group(1).split(",") if x.strip()]
        return "{%s}" % ",".join(mapping.get(x, x) for x in items)

    out = re.sub(r"\{([^{}]*)\}", sub_group, name)
    out = re.sub(r"psi_(\w+)",
                 lambda m: "psi_%s" % mapping.get(m.group(1), m.group(1)),
                 out)
    return out


def _star_expand(name, space):
    """Replace a '*' marking (inside a brace set) by the average over the
    markings that do not appear elsewhere in the name."""
    if not re.search(r"\{[^{}]*\*[^{}]*\}", name):
        return [(Fraction(1), name)]
    used = set()
    for grp in re.findall(r"\{([^{}]*)\}", name):
        used.update(x.strip() for x in grp.split(",") if x.strip())
    used.update(re.findall(r"psi_(\w+)", name))
    free = [m for m in space.markings if m not in used]
    if not free:
        raise ValueError("no admissible marking for '*' in %r" % (name,))
    w = Fraction(1, len(free))

    def fill(m):
        return re.sub(r"\{([^{}]*)\}",
                      lambda g: "{%s}" % g.group(1).replace("*", m),
                      name)

    return [(w, fill(m)) for m in free]


def _entry_expression(entry, space, mapping):
    if "product" in entry:
        f1, f2 = entry["product"]
        e1 = make_class(_substitute(f1, mapping), space)
        e2 = make_class(_substitute(f2, mapping), space)
        return product_deg2(e1, e2)
    out = zero(space)
    for coeff, name in entry["terms"]:
        c = Fraction(coeff)
        for w, concrete in _star_expand(_substitute(name, mapping), space):
            out = out + (c * w) * make_class(concrete, space)
    return out


def native_relations(g, P, path=None):
    """Native relations instantiated on the marking tuple P."""
    P = tuple(P)
    out = []
    seen = set()
    for entry in _load_table(path)["relations"]:
        eg, markings = entry["ambient"]
        if eg != g or len(markings) != len(P):
            continue
        space = Space(g, P)
        for image in itertools.permutations(P):
            mapping = dict(zip(markings, image))
            expr = _entry_expression(entry, space, mapping)
            key = frozenset((m._key, c) for m, c in expr.terms.items())
            if key in seen:
                continue
            seen.add(key)
            out.append(Relation(entry["id"], entry["provenance"], space, expr))
    return out


# ---------------------------------------------------------------------------
# structural eliminations


@lru_cache(maxsize=None)
def structural_relations(space):
    """Pushed factor divisor relations plus ambient divisor products."""
    rels = []
    for bmap in boundary_maps(space):
        for fi, fsp in enumerate(bmap.factors):
            fund = [TautMonomial(trivial_graph(f.g, f.markings))
                    for f in bmap.factors]
            for k, R in enumerate(divisor_relations(fsp)):
                terms = {}
                for m, c in R.terms.items():
                    key = tuple(m if j == fi else fund[j]
                                for j in range(len(bmap.factors)))
                    terms[key] = terms.get(key, Fraction(0)) + c
                tensor = TensorExpression(bmap.factors, terms)
                pushed = Fraction(1, bmap.aut) * push(tensor, bmap)
                if not pushed.is_zero():
                    rels.append(Relation(
                        "push[%r->%d.%d]" % (bmap, fi, k),
                        "structural", space, pushed))
    for k, R in enumerate(divisor_relations(space)):
        for m in divisor_classes(space):
            prod = product_deg2(R, TautExpression(space, {m: Fraction(1)}))
            if not prod.is_zero():
                rels.append(Relation(
                    "product[%d*%s]" % (k, monomial_name(m)),
                    "structural", space, prod))
    return tuple(rels)


# ---------------------------------------------------------------------------
# the catalog


class Catalog:
    """All known degree-4 relations on one space, ready for reduction."""

    def __init__(self, space, path=None):
        self.space = space
        self.relations = []
        self.relations.extend(structural_relations(space))
        g, P = space.g, space.markings
        for k in range(len(P) + 1):
            for subset in itertools.combinations(P, k):
                for rel in native_relations(g, subset, path):
                    expr = rel.expr
                    for x in [m for m in P if m not in subset]:
                        expr = forget_one(expr, x)
                    expr = with_space(expr, space)
                    if not expr.is_zero():
                        self.relations.append(Relation(
                            rel.rel_id if k == len(P) else
                            "pull[%s->%r]" % (rel.rel_id, list(P)),
                            rel.provenance if k == len(P) else "pulled-back",
                            space, expr))
        try:
            self.basis = EssentialBasis(space)
            basis_list = list(self.basis.classes)
        except ValueError:
            self.basis = None
            basis_list = []
        basis_set = set(basis_list)
        others = [m for m in all_degree2_monomials(space)
                  if m not in basis_set]
        others.sort(key=lambda m: m.sort_key())
        self.columns = others + basis_list
        self.col_index = {m: i for i, m in enumerate(self.columns)}
        self.n_other = len(others)
        self.ech = Echelon(len(self.columns))
        for rel in self.relations:
            self.ech.add_row(self._row(rel.expr))

    def _row(self, expr):
        row = {}
        for m, c in expr.terms.items():
            if m not in self.col_index:
                raise ValueError("monomial %r outside the generator universe"
                                 % (m,))
            row[self.col_index[m]] = c
        return row

    def reduce(self, expr):
        """Coordinates of expr on the essential basis, display units.

        Raises when a class outside the known relation span survives;
        that residual is a relation candidate, never silently accepted.
        """
        if expr.is_zero():
            return {}
        if expr.degree() != 2:
            raise ValueError("reduce takes algebraic degree 2")
        res = self.ech.residual(self._row(expr))
        out = {}
        for j, v in res.items():
            m = self.columns[j]
            if self.basis is not None and j < self.n_other:
                raise RelationCandidate(self.space, expr, {
                    self.columns[jj]: vv for jj, vv in res.items()})
            out[m] = v / name_unit_factor(m)
        return out

    def verify_membership(self, expr, coords):
        """Independent rank check that expr - sum(coords) is in the span."""
        diff = expr
        for m, c in coords.items():
            diff = diff - (c * name_unit_factor(m)) * TautExpression(
                self.space, {m: 1})
        rows = [self._row(r.expr) for r in self.relations]
        base = RationalMatrix.from_rows(rows, col_keys=range(len(self.columns)))
        r0 = base.rank()
        rows.append(self._row(diff))
        aug = RationalMatrix.from_rows(rows, col_keys=range(len(self.columns)))
        return aug.rank() == r0

    def reduce_retaining(self, expr, retain):
        """Quotient coordinates keeping only the ``retain`` classes free."""
        retain_set = set(retain)
        cols = ([m for m in self.columns if m not in retain_set]
                + list(retain))
        idx = {m: i for i, m in enumerate(cols)}
        n_other = len(cols) - len(retain)
        ech = Echelon(len(cols))
        for rel in self.relations:
            ech.add_row({idx[m]: c for m, c in rel.expr.terms.items()})
        res = ech.residual({idx[m]: c for m, c in expr.terms.items()})
        out = {}
        for j, v in res.items():
            if j < n_other:
                raise RelationCandidate(self.space, expr, {cols[j]: v})
            out[cols[j]] = v / name_unit_factor(cols[j])
        return out


class RelationCandidate(Exception):
    """A residual outside the catalog span: a would-be new relation."""

    def __init__(self, space, expr, residual):
        self.space = space
        self.expr = expr
        self.residual = residual
        msg = " + ".join("%s*%s" % (c, monomial_name(m))
                         for m, c in sorted(residual.items(),
                                            key=lambda mc: mc[0].sort_key()))
        super().__init__("relation candidate on %r: %s" % (space, msg))


@lru_cache(maxsize=None)
def catalog(space):
    return Catalog(space)


def propagate(g, P):
    """Build (and cache) the full catalog at (g, P)."""
    return catalog(Space(g, P))


def reduce_expression(expr):
    return catalog(expr.space).reduce(expr)


# ---------------------------------------------------------------------------
# tensor reduction helpers (for pulled relations on factor products)


def reduce_tensor_to_zero(texpr):
    """Check a tensor expression vanishes using factor relations.

    Splits by bidegree: (1,1) parts reduce each side to the divisor basis,
    degree-2 parts reduce against the factor's own catalog.  Returns the
    set of nonzero coordinates (empty means zero).
    """
    bad = {}
    spaces = texpr.spaces
    nf = len(spaces)
    for degs in itertools.product((0, 1, 2), repeat=nf):
        if sum(degs) != 2:
            continue
        part = texpr.bidegree_part(degs)
        if part.is_zero():
            continue
        coords = {}
        for ms, c in part.terms.items():
            vecs = []
            for fi, m in enumerate(ms):
                d = degs[fi]
                sp = spaces[fi]
                if d == 0:
                    vecs.append({("one",): Fraction(1)})
                elif d == 1:
                    red = divisor_reducer(sp)
                    vecs.append(red.coordinates(
                        TautExpression(sp, {m: Fraction(1)})))
                else:
                    vecs.append(catalog(sp).reduce(
                        TautExpression(sp, {m: Fraction(1)})))
            for combo in itertools.product(*[v.items() for v in vecs]):
                key = (degs,) + tuple(k for k, _ in combo)
                val = c
                for _, v in combo:
                    val *= v
                coords[key] = coords.get(key, Fraction(0)) + val
        for key, val in coords.items():
            if val:
                bad[key] = val
    return bad


# ---------------------------------------------------------------------------
# the new relation on the two-pointed genus-3 space


def _basis_class_expr(space, m):
    return TautExpression(space, {m: name_unit_factor(m)})


def rederive_m32(path=None):
    """Solve for the unique new degree-4 relation on (3, {a,b}).

    Constraints: the rational-tails pullback to (3,{s}) must land in the
    span of the (3,1) relations; the projections to H2 x H2 of the two
    genus-2 strata must vanish after the factor divisor relations; and
    the H4 component on the (2,{a,s}) factor must reduce to zero against
    its catalog.  The solution space must be one-dimensional; it is
    scaled so the psi_a^2 coefficient is 1.
    """
    space = Space(3, ("a", "b"))
    basis = EssentialBasis(space)
    unknowns = list(basis.classes)
    rows = []

    # map 1: glue a rational tail carrying {a,b}; the pullback of a true
    # relation reduces to zero against the (3,{s}) catalog
    target = Space(3, ("s",))
    cat31 = catalog(target)
    coords1 = []
    for m in unknowns:
        img = attach_tail_pullback(_basis_class_expr(space, m),
                                   ("a", "b"), "s")
        coords1.append(cat31.reduce(img))
    keys1 = sorted({key for cc in coords1 for key in cc},
                   key=lambda m: m.sort_key())
    for key in keys1:
        row = {}
        for k, cc in enumerate(coords1):
            v = cc.get(key, Fraction(0))
            if v:
                row[k] = v
        if row:
            rows.append(row)

    # maps 2-4: strata projections
    def add_projection_rows(bmap, h4_factor=None):
        pulls = [pull(_basis_class_expr(space, m), bmap) for m in unknowns]
        f0, f1 = bmap.factors
        red0, red1 = divisor_reducer(f0), divisor_reducer(f1)
        coords = [dict() for _ in unknowns]
        for k, t in enumerate(pulls):
            part = t.bidegree_part((1, 1))
            for ms, c in part.terms.items():
                v0 = red0.coordinates(TautExpression(f0, {ms[0]: 1}))
                v1 = red1.coordinates(TautExpression(f1, {ms[1]: 1}))
                for m0, a0 in v0.items():
                    for m1, a1 in v1.items():
                        key = ("h2h2", m0, m1)
                        coords[k][key] = coords[k].get(
                            key, Fraction(0)) + c * a0 * a1
            if h4_factor is not None:
                part2 = t.bidegree_part((2, 0) if h4_factor == 0 else (0, 2))
                fsp = bmap.factors[h4_factor]
                cat = catalog(fsp)
                for ms, c in part2.terms.items():
                    red = cat.reduce(TautExpression(
                        fsp, {ms[h4_factor]: 1}))
                    for m0, a0 in red.items():
                        key = ("h4", h4_factor, m0)
                        coords[k][key] = coords[k].get(
                            key, Fraction(0)) + c * a0 * name_unit_factor(m0)
        keys = sorted({key for cc in coords for key in cc}, key=repr)
        for key in keys:
            row = {}
            for k, cc in enumerate(coords):
                v = cc.get(key, Fraction(0))
                if v:
                    row[k] = v
            if row:
                rows.append(row)

    add_projection_rows(BoundaryMap(space, "sep", 2, ()))
    add_projection_rows(BoundaryMap(space, "sep", 2, ("a",)), h4_factor=0)

    # The four maps listed in the uniqueness proof leave a few spurious
    # directions in this operational form; the remaining boundary maps
    # (the same pull-back-to-the-boundary technique) pin the solution.
    for bmap in boundary_maps(space, min_factor_genus=1):
        coords = [dict() for _ in unknowns]
        for k, m in enumerate(unknowns):
            t = pull(_basis_class_expr(space, m), bmap)
            for key, v in reduce_tensor_to_zero(t).items():
                coords[k][(repr(bmap),) + key] = v
        keys = sorted({key for cc in coords for key in cc}, key=repr)
        for key in keys:
            row = {}
            for k, cc in enumerate(coords):
                v = cc.get(key, Fraction(0))
                if v:
                    row[k] = v
            if row:
                rows.append(row)

    M = RationalMatrix.from_rows(rows, col_keys=range(len(unknowns)))
    kern = M.right_kernel()
    if len(kern) != 1:
        raise RuntimeError("expected a one-dimensional solution space, got %d"
                           % len(kern))
    sol = kern[0]
    psi_a2 = unknowns.index(next(
        m for m in unknowns if monomial_name(m) == "psi_a^2"))
    scale = sol.get(psi_a2, Fraction(0))
    if not scale:
        raise RuntimeError("degenerate solution: psi_a^2 coefficient is zero")
    expr = zero(space)
    coeffs = {}
    for k, m in enumerate(unknowns):
        c = sol.get(k, Fraction(0)) / scale
        if c:
            coeffs[m] = c
            expr = expr + (c * name_unit_factor(m)) * TautExpression(
                space, {m: 1})
    return Relation("rederived-3-2", "dimension", space, expr), coeffs
