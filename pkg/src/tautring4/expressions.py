"""Tautological classes as exact rational combinations of decorated graphs.

A monomial is a stable graph together with psi exponents on half-edges
and kappa factors on vertices; it denotes the |Aut|-normalized pushforward
of that decoration along the graph's gluing map.  Expressions are finite
maps monomial -> Fraction.

Display names follow the usual conventions: ``psi|d_{a,A}`` puts a psi on
the node branch sitting on the genus-a side, ``psi_i*d_irr`` decorates the
leg ``i``, and so on.  One naming quirk is handled here once and for all:
``psi|d_irr`` denotes the pushforward of the *sum* of the two branch psi
classes over |Aut| = 2, which is twice the single-branch normalized
monomial.  Coefficients shown to users (and stored in the relation data)
are always in these display units; ``name_unit_factor`` converts.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction

from .graphs import (StableGraph, automorphisms, aut_order,
                     canonical_presentation, classify, edge_half,
                     irr_graph, leg_half, sep_graph, trivial_graph,
                     F_graph, E_graph, H_graph, G_graph, family_name)


class Space:
    """Ambient moduli space: genus plus the ordered marking tuple."""

    __slots__ = ("g", "markings")

    def __init__(self, g, markings=()):
        self.g = int(g)
        self.markings = tuple(str(m) for m in markings)
        if len(set(self.markings)) != len(self.markings):
            raise ValueError("duplicate markings")

    @property
    def n(self):
        return len(self.markings)

    def exists(self):
        return 2 * self.g - 2 + self.n > 0

    def index(self, m):
        return self.markings.index(m)

    def fresh(self, base):
        if base not in self.markings:
            return base
        k = 1
        while "%s%d" % (base, k) in self.markings:
            k += 1
        return "%s%d" % (base, k)

    def with_extra(self, extra):
        """Markings ``extra`` appended after P, in their given order."""
        return Space(self.g, self.markings + tuple(extra))

    def __eq__(self, other):
        return (isinstance(other, Space) and self.g == other.g
                and self.markings == other.markings)

    def __hash__(self):
        return hash((self.g, self.markings))

    def __repr__(self):
        return "Space(%d, %r)" % (self.g, self.markings)


# ---------------------------------------------------------------------------
# decorated monomials


def _dec_encoding(psi, kappa):
    return (tuple(sorted(psi.items(), key=repr)),
            tuple(sorted((v, tuple(sorted(d.items()))) for v, d in kappa.items())))


def _apply_maps(psi, kappa, hmap, vmap):
    psi2 = {}
    for h, e in psi.items():
        psi2[hmap[h]] = psi2.get(hmap[h], 0) + e
    kappa2 = {}
    for v, d in kappa.items():
        tgt = kappa2.setdefault(vmap[v], {})
        for a, p in d.items():
            tgt[a] = tgt.get(a, 0) + p
    return psi2, kappa2


class TautMonomial:
    """Canonical decorated stable graph; hashable and totally ordered."""

    __slots__ = ("graph", "psi", "kappa", "_key", "_hash")

    def __init__(self, graph, psi=None, kappa=None, _canonical=False):
        psi = dict(psi or {})
        kappa = {v: dict(d) for v, d in (kappa or {}).items() if d}
        psi = {h: e for h, e in psi.items() if e}
        kappa = {v: {a: p for a, p in d.items() if p} for v, d in kappa.items()}
        kappa = {v: d for v, d in kappa.items() if d}
        if not _canonical:
            canon, vmap, hmap = canonical_presentation(graph)
            psi, kappa = _apply_maps(psi, kappa, hmap, vmap)
            best = _dec_encoding(psi, kappa)
            best_pair = (psi, kappa)
            for avmap, ahmap in automorphisms(canon):
                p2, k2 = _apply_maps(psi, kappa, ahmap, avmap)
                enc = _dec_encoding(p2, k2)
                if enc < best:
                    best, best_pair = enc, (p2, k2)
            graph, (psi, kappa) = canon, best_pair
        self.graph = graph
        self.psi = {h: e for h, e in psi.items()}
        self.kappa = {v: dict(d) for v, d in kappa.items()}
        self._key = (graph._key, _dec_encoding(self.psi, self.kappa))
        self._hash = hash(self._key)

    def degree(self):
        """Algebraic degree: codimension plus decoration degree."""
        d = self.graph.n_edges + sum(self.psi.values())
        d += sum(a * p for dec in self.kappa.values() for a, p in dec.items())
        return d

    def vanishes_by_dimension(self):
        """True when a stratum factor cannot carry its decoration.

        A decoration of algebraic degree d on a vertex v is a class on
        the factor space of dimension 3g(v)-3+val(v); past that dimension
        it is zero, so the whole pushforward is the zero class.  Only
        graphs with at least one edge are quotiented this way: ambient
        Mumford monomials stay formal, their vanishing is relation data.
        """
        gr = self.graph
        if gr.n_edges == 0:
            return False
        deco = {}
        for h, e in self.psi.items():
            v = gr.half_vertex(h)
            deco[v] = deco.get(v, 0) + e
        for v, dec in self.kappa.items():
            deco[v] = deco.get(v, 0) + sum(a * p for a, p in dec.items())
        for v, d in deco.items():
            if d > 3 * gr.genera[v] - 3 + gr.valence(v):
                return True
        return False

    def vanishes_on_point_space(self):
        """Positive-degree ambient decoration on a zero-dimensional space.

        Used by tensor expressions, whose factors can be the honest
        three-pointed rational space; within a single ambient space these
        monomials are kept formal so relation data can be transported.
        """
        gr = self.graph
        if gr.n_edges or not (self.psi or self.kappa):
            return False
        return 3 * gr.genus() - 3 + len(gr.legs) <= 0

    def space(self):
        return Space(self.graph.genus(), sorted(self.graph.leg_labels()))

    def sort_key(self):
        return (self.degree(), self._key)

    def __eq__(self, other):
        return isinstance(other, TautMonomial) and self._key == other._key

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "TautMonomial(%s)" % (monomial_name(self),)


def name_unit_factor(m):
    """Display-unit over internal-unit ratio; 2 only for psi|d_irr."""
    gr = m.graph
    if (gr.n_vertices == 1 and gr.n_edges == 1
            and gr.edges[0][0] == gr.edges[0][1] and not m.kappa
            and len(m.psi) == 1):
        (h, e), = m.psi.items()
        if h[0] == "e" and e == 1:
            return Fraction(2)
    return Fraction(1)


# ---------------------------------------------------------------------------
# expressions


class TautExpression:
    """Homogeneous rational combination of monomials on one space."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms=None):
        self.space = space
        clean = {}
        if terms:
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                c = Fraction(c)
                if c and not m.vanishes_by_dimension():
                    clean[m] = clean.get(m, Fraction(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}
        degs = {m.degree() for m in self.terms}
        if len(degs) > 1:
            raise ValueError("mixed degrees %r in expression" % (sorted(degs),))
        for m in self.terms:
            sp = m.space()
            if sp.g != space.g or set(sp.markings) != set(space.markings):
                raise ValueError("term %r not on ambient %r" % (m, space))

    def degree(self):
        for m in self.terms:
            return m.degree()
        return None

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, TautExpression):
            if other.space != self.space:
                raise ValueError("mixed ambients")
            terms = dict(self.terms)
            for m, c in other.terms.items():
                terms[m] = terms.get(m, Fraction(0)) + c
            return TautExpression(self.space, terms)
        return NotImplemented

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, c):
        c = Fraction(c)
        return TautExpression(self.space,
                              {m: c * v for m, v in self.terms.items()})

    __mul__ = __rmul__

    def coefficient(self, m):
        return self.terms.get(m, Fraction(0))

    def display_coefficient(self, m):
        return self.terms.get(m, Fraction(0)) / name_unit_factor(m)

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda mc: mc[0].sort_key())

    def __eq__(self, other):
        return (isinstance(other, TautExpression)
                and self.space == other.space and self.terms == other.terms)

    def __hash__(self):
        return hash((self.space,
                     tuple(sorted((m._key, c) for m, c in self.terms.items()))))

    def __repr__(self):
        return "<%s>" % (expression_name(self),)


def zero(space):
    return TautExpression(space, {})


def monomial_expr(space, graph, psi=None, kappa=None, coeff=1):
    return TautExpression(space, {TautMonomial(graph, psi, kappa): Fraction(coeff)})


def normalize(expr):
    """Re-canonicalize an expression; idempotent."""
    terms = {}
    for m, c in expr.terms.items():
        m2 = TautMonomial(m.graph, m.psi, m.kappa)
        terms[m2] = terms.get(m2, Fraction(0)) + c
    return TautExpression(expr.space, terms)


class TensorExpression:
    """Combination of monomial tuples on a product of spaces."""

    __slots__ = ("spaces", "terms")

    def __init__(self, spaces, terms=None):
        self.spaces = tuple(spaces)
        clean = {}
        if terms:
            for ms, c in (terms.items() if isinstance(terms, dict) else terms):
                c = Fraction(c)
                if not c:
                    continue
                ms = tuple(ms)
                if len(ms) != len(self.spaces):
                    raise ValueError("arity mismatch")
                if any(m.vanishes_by_dimension()
                       or m.vanishes_on_point_space() for m in ms):
                    continue
                clean[ms] = clean.get(ms, Fraction(0)) + c
        self.terms = {ms: c for ms, c in clean.items() if c}

    def bidegree_part(self, degs):
        degs = tuple(degs)
        terms = {ms: c for ms, c in self.terms.items()
                 if tuple(m.degree() for m in ms) == degs}
        return TensorExpression(self.spaces, terms)

    def factor_expression(self, i=0):
        """Collapse a single-factor tensor into a plain expression."""
        if len(self.spaces) != 1:
            raise ValueError("not a single-space tensor")
        return TautExpression(self.spaces[0],
                              {ms[0]: c for ms, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, TensorExpression):
            if other.spaces != self.spaces:
                raise ValueError("mixed products")
            terms = dict(self.terms)
            for ms, c in other.terms.items():
                terms[ms] = terms.get(ms, Fraction(0)) + c
            return TensorExpression(self.spaces, terms)
        return NotImplemented

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return TensorExpression(self.spaces,
                                {ms: c * v for ms, v in self.terms.items()})

    __mul__ = __rmul__

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, TensorExpression)
                and self.spaces == other.spaces and self.terms == other.terms)

    def __repr__(self):
        return "TensorExpression(%d terms on %r)" % (len(self.terms), self.spaces)


# ---------------------------------------------------------------------------
# named classes

_SET = r"\{([^{}]*)\}"


def _parse_set(s):
    s = s.strip()
    if not s:
        return ()
    return tuple(x.strip() for x in s.split(",") if x.strip())


def _sep_psi_half(graph_ctor_side):
    return edge_half(0, graph_ctor_side)


def make_class(name, space):
    """Build the named tautological class as a one-term expression.

    ``name`` uses the display grammar, e.g. ``kappa2``, ``psi_x^2``,
    ``psi_x*psi_y``, ``kappa1*psi_x``, ``d_irr``, ``d_{1,{x}}``,
    ``psi|d_{2,{}}``, ``d_{2,{}}|psi``, ``psi_x*d_{2,{x}}``,
    ``kappa|d_{3,{}}``, ``psi|d_irr``, ``psi_x*d_irr``, ``kappa1*d_irr``,
    ``d_F``, ``d_E(1,{})``, ``d_H(0,{x})``, ``d_G(1,{x},0,{y})``.
    """
    g, P = space.g, space.markings
    name = name.strip()

    def build(graph, psi=None, kappa=None, unit=1):
        graph.validate()
        if not graph.connected:
            raise ValueError("class graph must be connected")
        if graph.genus() != g or set(graph.leg_labels()) != set(P):
            raise ValueError("class %r does not live on %r" % (name, space))
        m = TautMonomial(graph, psi, kappa)
        return TautExpression(space, {m: Fraction(unit)})

    if name == "1":
        return build(trivial_graph(g, P))
    if name == "kappa1":
        return build(trivial_graph(g, P), kappa={0: {1: 1}})
    if name == "kappa2":
        return build(trivial_graph(g, P), kappa={0: {2: 1}})
    if name == "kappa1^2":
        return build(trivial_graph(g, P), kappa={0: {1: 2}})
    m = re.fullmatch(r"psi_(\w+)", name)
    if m:
        return build(trivial_graph(g, P), psi={leg_half(m.group(1)): 1})
    m = re.fullmatch(r"psi_(\w+)\^2", name)
    if m:
        return build(trivial_graph(g, P), psi={leg_half(m.group(1)): 2})
    m = re.fullmatch(r"psi_(\w+)\*psi_(\w+)", name)
    if m:
        i, j = m.group(1), m.group(2)
        if i == j:
            return build(trivial_graph(g, P), psi={leg_half(i): 2})
        return build(trivial_graph(g, P), psi={leg_half(i): 1, leg_half(j): 1})
    m = re.fullmatch(r"kappa1\*psi_(\w+)", name)
    if m:
        return build(trivial_graph(g, P), psi={leg_half(m.group(1)): 1},
                     kappa={0: {1: 1}})
    if name == "d_irr":
        return build(irr_graph(g, P))
    if name == "psi|d_irr":
        return build(irr_graph(g, P), psi={edge_half(0, 0): 1}, unit=2)
    m = re.fullmatch(r"psi_(\w+)\*d_irr", name)
    if m:
        return build(irr_graph(g, P), psi={leg_half(m.group(1)): 1})
    if name == "kappa1*d_irr":
        return build(irr_graph(g, P), kappa={0: {1: 1}})
    m = re.fullmatch(r"d_\{(\d+),\{([^{}]*)\}\}", name)
    if m:
        a, A = int(m.group(1)), _parse_set(m.group(2))
        return build(sep_graph(g, a, A, P))
    m = re.fullmatch(r"psi\|d_\{(\d+),\{([^{}]*)\}\}", name)
    if m:
        a, A = int(m.group(1)), _parse_set(m.group(2))
        return build(sep_graph(g, a, A, P), psi={edge_half(0, 0): 1})
    m = re.fullmatch(r"d_\{(\d+),\{([^{}]*)\}\}\|psi", name)
    if m:
        a, A = int(m.group(1)), _parse_set(m.group(2))
        return build(sep_graph(g, a, A, P), psi={edge_half(0, 1): 1})
    m = re.fullmatch(r"kappa\|d_\{(\d+),\{([^{}]*)\}\}", name)
    if m:
        a, A = int(m.group(1)), _parse_set(m.group(2))
        return build(sep_graph(g, a, A, P), kappa={0: {1: 1}})
    m = re.fullmatch(r"d_\{(\d+),\{([^{}]*)\}\}\|kappa", name)
    if m:
        a, A = int(m.group(1)), _parse_set(m.group(2))
        return build(sep_graph(g, a, A, P), kappa={1: {1: 1}})
    m = re.fullmatch(r"psi_(\w+)\*d_\{(\d+),\{([^{}]*)\}\}", name)
    if m:
        i, a, A = m.group(1), int(m.group(2)), _parse_set(m.group(3))
        return build(sep_graph(g, a, A, P), psi={leg_half(i): 1})
    if name == "d_F":
        return build(F_graph(g, P))
    m = re.fullmatch(r"d_E\((\d+),\{([^{}]*)\}\)", name)
    if m:
        return build(E_graph(g, int(m.group(1)), _parse_set(m.group(2)), P))
    m = re.fullmatch(r"d_H\((\d+),\{([^{}]*)\}\)", name)
    if m:
        return build(H_graph(g, int(m.group(1)), _parse_set(m.group(2)), P))
    m = re.fullmatch(r"d_G\((\d+),\{([^{}]*)\},(\d+),\{([^{}]*)\}\)", name)
    if m:
        return build(G_graph(g, int(m.group(1)), _parse_set(m.group(2)),
                             int(m.group(3)), _parse_set(m.group(4)), P))
    raise ValueError("unknown class descriptor %r" % (name,))


def monomial_name(m):
    """Display name of a canonical monomial (degree <= 2 families)."""
    gr = m.graph

    def fmt_side(v):
        legs = sorted(l for l, w in gr.legs if w == v)
        return "%d,{%s}" % (gr.genera[v], ",".join(legs))

    if gr.n_edges == 0:
        parts = []
        for v, dec in sorted(m.kappa.items()):
            for a, p in sorted(dec.items()):
                parts.extend(["kappa%d" % a] * p)
        for h, e in sorted(m.psi.items(), key=repr):
            parts.extend(["psi_%s" % h[1]] * e)
        if not parts:
            return "1"
        out = []
        for name, grp in itertools.groupby(parts):
            k = len(list(grp))
            out.append(name if k == 1 else "%s^%d" % (name, k))
        return "*".join(out)
    if not m.psi and not m.kappa:
        return family_name(gr)
    if gr.n_edges == 1 and gr.edges[0][0] == gr.edges[0][1]:
        if m.kappa:
            return "kappa1*d_irr"
        (h, e), = m.psi.items()
        if h[0] == "l":
            return "psi_%s*d_irr" % h[1]
        return "psi|d_irr"
    if gr.n_edges == 1:
        if m.kappa:
            (v, _), = m.kappa.items()
            return "kappa|d_{%s}" % fmt_side(v)
        (h, e), = m.psi.items()
        if h[0] == "l":
            v = gr.leg_vertex(h[1])
            return "psi_%s*d_{%s}" % (h[1], fmt_side(v))
        v = gr.edges[h[1]][h[2]]
        return "psi|d_{%s}" % fmt_side(v)
    raise ValueError("no display name for %r" % ((gr, m.psi, m.kappa),))


def expression_name(expr):
    if not expr.terms:
        return "0"
    bits = []
    for m, c in expr.items_sorted():
        c = c / name_unit_factor(m)
        bits.append("%s*%s" % (c, monomial_name(m)))
    return " + ".join(bits).replace("+ -", "- ")
