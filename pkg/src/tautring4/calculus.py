"""Intersection calculus: boundary pullback, pushforward, products, forgetful maps.

The boundary pullback follows the excess-intersection formula: pulling
p|d_Gamma back along a codimension-1 gluing map xi_A gives a sum over
graphs G on the factor spaces whose smoothing f(G) is Gamma (transverse
part) plus graphs with j(G) = Gamma multiplied by c1 of the normal
bundle (excess part).  All automorphism bookkeeping is carried out at the
level of explicit half-edge isomorphisms, so symmetric strata come out
with the right rational weights without special cases.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .graphs import (StableGraph, aut_order, canonical_graph, classify,
                     disjoint_union, edge_half, enumerate_cached, f_contract,
                     irr_graph, isomorphisms, j_glue, leg_half, sep_graph,
                     trivial_graph)
from .expressions import (Space, TautExpression, TautMonomial,
                          TensorExpression, make_class, zero)


class ScopeError(ValueError):
    """Raised when an operation would leave the degree <= 2 window."""


# ---------------------------------------------------------------------------
# boundary maps


class BoundaryMap:
    """The gluing map onto a codimension-1 stratum of ``space``.

    For the non-separating stratum the single factor is (g-1, P+{q,r})
    and q, r are the branch labels; for a separating stratum the factors
    are (a, A+{s}) and (g-a, complement+{t}).
    """

    def __init__(self, space, kind, a=None, A=None):
        self.space = space
        self.kind = kind
        g, P = space.g, space.markings
        if kind == "irr":
            q = space.fresh("q")
            r = Space(g, P + (q,)).fresh("r")
            self.pair = (q, r)
            self.pair_factor = (0, 0)
            self.factors = (Space(g - 1, P + (q, r)),)
            self.graph = canonical_graph(irr_graph(g, P))
        elif kind == "sep":
            A = tuple(x for x in P if x in set(A))
            s = space.fresh("s")
            t = Space(g, P + (s,)).fresh("t")
            self.pair = (s, t)
            self.pair_factor = (0, 1)
            comp = tuple(x for x in P if x not in set(A))
            self.factors = (Space(a, A + (s,)), Space(g - a, comp + (t,)))
            self.a, self.A = a, A
            self.graph = canonical_graph(sep_graph(g, a, A, P))
        else:
            raise ValueError(kind)
        for f in self.factors:
            if not f.exists():
                raise ValueError("stratum factor %r is empty" % (f,))
        self.aut = aut_order(self.graph)
        self._key = (space.g, space.markings, kind,
                     getattr(self, "a", None), getattr(self, "A", None))

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, BoundaryMap) and self._key == other._key

    def __repr__(self):
        if self.kind == "irr":
            return "xi_irr on %r" % (self.space,)
        return "xi_{%d,%r} on %r" % (self.a, self.A, self.space)


def boundary_maps(space, min_factor_genus=0):
    """All boundary maps of the space, one per stratum class."""
    out = []
    g, P = space.g, space.markings
    seen = set()
    if g >= 1 and g - 1 >= min_factor_genus:
        try:
            out.append(BoundaryMap(space, "irr"))
        except ValueError:
            pass
    for a in range(g + 1):
        for r in range(len(P) + 1):
            for A in itertools.combinations(P, r):
                try:
                    gr = canonical_graph(sep_graph(g, a, A, P))
                except ValueError:
                    continue
                if not gr.is_stable() or gr in seen:
                    continue
                seen.add(gr)
                if a >= min_factor_genus and g - a >= min_factor_genus:
                    out.append(BoundaryMap(space, "sep", a, A))
    return out


def boundary_map_for_graph(space, graph):
    fam = classify(graph, space.g)
    if fam[0] == "irr":
        return BoundaryMap(space, "irr")
    if fam[0] == "sep":
        return BoundaryMap(space, "sep", fam[1], fam[2])
    raise ValueError("not a codimension-1 graph: %r" % (graph,))


# ---------------------------------------------------------------------------
# gluing index: candidates G with f(G) or j(G) isomorphic to a target


class _Candidate:
    __slots__ = ("factor_graphs", "combined", "loc2comb", "offsets",
                 "image", "comb2img_h", "comb2img_v", "img_aut")

    def __init__(self, factor_graphs, combined, loc2comb, offsets,
                 image, comb2img_h, comb2img_v):
        self.factor_graphs = factor_graphs
        self.combined = combined
        self.loc2comb = loc2comb
        self.offsets = offsets
        self.image = image
        self.comb2img_h = comb2img_h
        self.comb2img_v = comb2img_v


def _factor_tuples(bmap, total_codim):
    """Tuples of per-factor graphs with given total number of edges."""
    nf = len(bmap.factors)
    if total_codim < 0:
        return
    for split in itertools.product(range(total_codim + 1), repeat=nf):
        if sum(split) != total_codim:
            continue
        pools = []
        ok = True
        for f, c in zip(bmap.factors, split):
            if c > 2:
                ok = False
                break
            pools.append(enumerate_cached(f.g, f.markings, c))
        if not ok:
            continue
        for combo in itertools.product(*pools):
            yield combo


@lru_cache(maxsize=None)
def _gluing_index(bmap, total_codim, mode):
    """Map canonical target graph -> list of candidates (f or j mode)."""
    s, t = bmap.pair
    index = {}
    for combo in _factor_tuples(bmap, total_codim):
        combined, offsets, hmaps = disjoint_union(combo)
        if mode == "f":
            img, hm, vm = f_contract(combined, s, t)
        else:
            img, hm, vm = j_glue(combined, s, t)
        if not (img.is_stable() and img.connected):
            continue
        key = canonical_graph(img)
        index.setdefault(key, []).append(
            _Candidate(combo, combined, hmaps, offsets, img, hm, vm))
    return index


def solve_gluings(bmap, gamma):
    """A-graphs G with f(G) = gamma and with j(G) = gamma (up to iso).

    Returns two lists of tuples of factor graphs, duplicate-free for
    isomorphism fixing all legs (including the distinguished pair).
    """
    gamma = canonical_graph(gamma)
    out = []
    for mode in ("f", "j"):
        codim = gamma.n_edges - (0 if mode == "f" else 1)
        idx = _gluing_index(bmap, codim, mode)
        seen = set()
        lst = []
        for cand in idx.get(gamma, ()):
            key = tuple(c for c in cand.factor_graphs)
            if key not in seen:
                seen.add(key)
                lst.append(cand.factor_graphs)
        out.append(lst)
    return tuple(out)


# ---------------------------------------------------------------------------
# decoration transport helpers


def _invert(d):
    return {v: k for k, v in d.items()}


def _split_tensor_monomial(bmap, cand, psi, kappa):
    """Split a decorated combined graph into per-factor monomials."""
    inv_maps = [_invert(h) for h in cand.loc2comb]
    nf = len(cand.factor_graphs)
    psis = [dict() for _ in range(nf)]
    kappas = [dict() for _ in range(nf)]
    for h, e in psi.items():
        for fi in range(nf):
            if h in inv_maps[fi]:
                lh = inv_maps[fi][h]
                psis[fi][lh] = psis[fi].get(lh, 0) + e
                break
        else:
            raise AssertionError("orphan half %r" % (h,))
    bounds = cand.offsets + [cand.combined.n_vertices]
    for v, dec in kappa.items():
        for fi in range(nf):
            if bounds[fi] <= v < bounds[fi + 1]:
                lv = v - bounds[fi]
                tgt = kappas[fi].setdefault(lv, {})
                for a, p in dec.items():
                    tgt[a] = tgt.get(a, 0) + p
                break
    monos = tuple(TautMonomial(g, p, k)
                  for g, p, k in zip(cand.factor_graphs, psis, kappas))
    return monos


def _transport_decoration(mono, phi_inv_h, phi_inv_v_sets):
    """Carry psi/kappa of a monomial backwards along an isomorphism.

    ``phi_inv_h`` maps the monomial graph's half-edges to target halves;
    ``phi_inv_v_sets`` maps each vertex to the set of target vertices
    lying over it (several after a contraction).  kappa classes on a
    merged vertex pull back to the sum over the preimage vertices, so the
    result is a list of (coeff, psi, kappa) alternatives.
    """
    psi = {}
    for h, e in mono.psi.items():
        th = phi_inv_h[h]
        psi[th] = psi.get(th, 0) + e
    base = [(Fraction(1), psi, {})]
    for v, dec in sorted(mono.kappa.items()):
        for a, p in sorted(dec.items()):
            for _ in range(p):
                new = []
                for coeff, ps, ka in base:
                    for tv in sorted(phi_inv_v_sets[v]):
                        ka2 = {w: dict(d) for w, d in ka.items()}
                        slot = ka2.setdefault(tv, {})
                        slot[a] = slot.get(a, 0) + 1
                        new.append((coeff, ps, ka2))
                base = new
    return base


# ---------------------------------------------------------------------------
# pullback along a boundary map


_PULL_MEMO = {}


def pull(expr, bmap):
    """xi_A^* of an expression, as a tensor expression on the factors."""
    out = TensorExpression([f for f in bmap.factors])
    for mono, coeff in expr.terms.items():
        key = (bmap._key, mono._key)
        if key not in _PULL_MEMO:
            _PULL_MEMO[key] = _pull_monomial(bmap, mono)
        out = out + coeff * _PULL_MEMO[key]
    return out


def _pull_monomial(bmap, mono):
    gamma = mono.graph
    spaces = [f for f in bmap.factors]
    result = TensorExpression(spaces)
    inv_aut = Fraction(1, aut_order(gamma))
    for mode in ("f", "j"):
        codim = gamma.n_edges - (0 if mode == "f" else 1)
        idx = _gluing_index(bmap, codim, mode)
        for cand in idx.get(gamma, ()):
            for vphi, hphi in isomorphisms(cand.image, gamma):
                inv_img_h = _invert(cand.comb2img_h)
                phi_inv_h = {}
                for ih, gh in hphi.items():
                    phi_inv_h[gh] = inv_img_h[ih]
                img_v_pre = {}
                for cv, iv in cand.comb2img_v.items():
                    img_v_pre.setdefault(iv, set()).add(cv)
                phi_inv_v = {}
                for iv, gv in vphi.items():
                    phi_inv_v[gv] = img_v_pre[iv]
                for kcoeff, psi, kappa in _transport_decoration(
                        mono, phi_inv_h, phi_inv_v):
                    monos = _split_tensor_monomial(bmap, cand, psi, kappa)
                    term = TensorExpression(spaces, {monos: kcoeff * inv_aut})
                    if mode == "j":
                        term = _mul_excess(bmap, term)
                    result = result + term
    for ms in result.terms:
        for m in ms:
            if m.degree() > 2:
                raise ScopeError("pullback leaves the degree 2 window")
    return result


def _mul_excess(bmap, texpr):
    """Multiply by c1 of the normal bundle: -(psi at one branch) - (other)."""
    out = TensorExpression(texpr.spaces)
    for (label, fi) in zip(bmap.pair, bmap.pair_factor):
        bumped = {}
        for ms, c in texpr.terms.items():
            m = ms[fi]
            psi = dict(m.psi)
            h = leg_half(label)
            psi[h] = psi.get(h, 0) + 1
            m2 = TautMonomial(m.graph, psi, m.kappa)
            ms2 = ms[:fi] + (m2,) + ms[fi + 1:]
            bumped[ms2] = bumped.get(ms2, Fraction(0)) - c
        out = out + TensorExpression(texpr.spaces, bumped)
    return out


def boundary_pullback(expr, bmap):
    """Public pullback: tensor for separating maps, plain for xi_irr."""
    t = pull(expr, bmap)
    if bmap.kind == "irr":
        return t.factor_expression()
    return t


# ---------------------------------------------------------------------------
# pushforward along a boundary map


def push(texpr, bmap):
    """xi_A_* of a tensor expression on the factor spaces."""
    if isinstance(texpr, TautExpression):
        texpr = TensorExpression([bmap.factors[0]],
                                 {(m,): c for m, c in texpr.terms.items()})
    s, t = bmap.pair
    terms = {}
    for ms, c in texpr.terms.items():
        combined, offsets, hmaps = disjoint_union([m.graph for m in ms])
        psi = {}
        kappa = {}
        for fi, m in enumerate(ms):
            for h, e in m.psi.items():
                ch = hmaps[fi][h]
                psi[ch] = psi.get(ch, 0) + e
            for v, dec in m.kappa.items():
                cv = v + offsets[fi]
                slot = kappa.setdefault(cv, {})
                for a, p in dec.items():
                    slot[a] = slot.get(a, 0) + p
        glued, hm, vm = j_glue(combined, s, t)
        psi2 = {hm[h]: e for h, e in psi.items()}
        kappa2 = {vm[v]: dec for v, dec in kappa.items()}
        target = TautMonomial(glued, psi2, kappa2)
        denom = 1
        for m in ms:
            denom *= aut_order(m.graph)
        mult = Fraction(aut_order(target.graph), denom)
        terms[target] = terms.get(target, Fraction(0)) + c * mult
    return TautExpression(bmap.space, terms)


# ---------------------------------------------------------------------------
# products of degree-1 classes


def product_deg2(e1, e2):
    """Product of two degree-1 expressions (divisor classes)."""
    if e1.space != e2.space:
        raise ValueError("mixed ambients")
    space = e1.space
    out = zero(space)
    for m1, c1 in e1.terms.items():
        for m2, c2 in e2.terms.items():
            out = out + (c1 * c2) * _product_monomials(space, m1, m2)
    return out


def _trivial_mumford(space, m):
    return m.graph.n_edges == 0


def _product_monomials(space, m1, m2):
    if m1.degree() != 1 or m2.degree() != 1:
        raise ScopeError("product engine takes degree-1 monomials")
    if _trivial_mumford(space, m2) and not _trivial_mumford(space, m1):
        m1, m2 = m2, m1
    if _trivial_mumford(space, m1):
        if _trivial_mumford(space, m2):
            psi = dict(m1.psi)
            for h, e in m2.psi.items():
                psi[h] = psi.get(h, 0) + e
            kappa = {v: dict(d) for v, d in m1.kappa.items()}
            for v, dec in m2.kappa.items():
                slot = kappa.setdefault(v, {})
                for a, p in dec.items():
                    slot[a] = slot.get(a, 0) + p
            return TautExpression(space,
                                  {TautMonomial(m1.graph, psi, kappa): 1})
        # Mumford class times a boundary divisor: decorate the graph.
        gr = m2.graph
        if m1.psi:
            (h, e), = m1.psi.items()
            lab = h[1]
            return TautExpression(space, {
                TautMonomial(gr, {leg_half(lab): 1}, {}): 1})
        terms = {}
        for v in range(gr.n_vertices):
            m = TautMonomial(gr, {}, {v: {1: 1}})
            terms[m] = terms.get(m, Fraction(0)) + 1
        return TautExpression(space, terms)
    # boundary times boundary: push-pull along the first stratum
    bmap = boundary_map_for_graph(space, m1.graph)
    pulled = pull(TautExpression(space, {m2: Fraction(1)}), bmap)
    return Fraction(1, bmap.aut) * push(pulled, bmap)


# ---------------------------------------------------------------------------
# forgetful pullback


def _add_leg(gr, x, v):
    return StableGraph(gr.genera, gr.edges, gr.legs + ((x, v),))


def _tail_insert(gr, h, x):
    """Detach half ``h`` onto a fresh genus-0 vertex carrying leg ``x``."""
    w = gr.n_vertices
    genera = gr.genera + (0,)
    edges = list(gr.edges)
    legs = list(gr.legs)
    if h[0] == "e":
        _, i, side = h
        u, v = edges[i]
        edges[i] = (w, v) if side == 0 else (u, w)
        anchor = (u, v)[side]
    else:
        lab = h[1]
        legs = [(l, (w if l == lab else vv)) for (l, vv) in legs]
        anchor = gr.leg_vertex(lab)
    edges.append((anchor, w))
    legs.append((x, w))
    return StableGraph(genera, edges, legs)


def forget_one(expr, x):
    """Pull back along the map forgetting the (new) marking x."""
    space = expr.space
    if x in space.markings:
        raise ValueError("marking %r already present" % (x,))
    up = space.with_extra((x,))
    out = zero(up)
    for mono, c in expr.terms.items():
        out = out + c * _forget_monomial(space, up, mono, x)
    return out


def _forget_monomial(space, up, mono, x):
    gr = mono.graph
    if gr.n_edges == 0 and mono.degree() == 2:
        return _forget_mumford2(space, up, mono, x)
    autg = aut_order(gr)
    out = zero(up)
    for v in range(gr.n_vertices):
        grv = _add_leg(gr, x, v)
        ratio = Fraction(aut_order(canonical_graph(grv)), autg)
        terms = {TautMonomial(grv, mono.psi, mono.kappa): ratio}
        for h, e in mono.psi.items():
            if gr.half_vertex(h) != v:
                continue
            if e != 1:
                raise ScopeError("psi powers on strata stay at most 1")
            # the tail graph carries x on the new vertex; the moved psi drops
            psi2 = {hh: ee for hh, ee in mono.psi.items() if hh != h}
            tail_m = TautMonomial(
                _tail_insert(gr, h, x), psi2, mono.kappa)
            tr = Fraction(aut_order(tail_m.graph), autg)
            terms[tail_m] = terms.get(tail_m, Fraction(0)) - tr
        for vv, dec in mono.kappa.items():
            if vv != v:
                continue
            for a, p in dec.items():
                if a != 1 or p != 1:
                    raise ScopeError("kappa on strata stays kappa_1")
                kap2 = {w: dict(d) for w, d in mono.kappa.items() if w != vv}
                psi2 = dict(mono.psi)
                hx = leg_half(x)
                psi2[hx] = psi2.get(hx, 0) + 1
                m2 = TautMonomial(grv, psi2, kap2)
                terms[m2] = terms.get(m2, Fraction(0)) - ratio
        out = out + TautExpression(up, terms)
    return out


def _forget_mumford2(space, up, mono, x):
    """Forgetful pullback of a degree-2 Mumford monomial, multiplicatively."""
    kap = {a: p for a, p in mono.kappa.get(0, {}).items()}
    if kap.get(2):
        base = make_class("kappa2", up) - make_class("psi_%s^2" % x, up)
        return base
    factors = []
    for h, e in sorted(mono.psi.items(), key=repr):
        factors.extend([("psi", h[1])] * e)
    factors.extend([("kappa1", None)] * kap.get(1, 0))
    assert len(factors) == 2
    pulled = []
    for kind, lab in factors:
        if kind == "psi":
            term = make_class("psi_%s" % lab, up) - make_class(
                "d_{0,{%s,%s}}" % tuple(sorted((lab, x))), up)
        else:
            term = make_class("kappa1", up) - make_class("psi_%s" % x, up)
        pulled.append(term)
    return product_deg2(pulled[0], pulled[1])


def forgetful_pullback(expr, extra):
    """Pull back along the map forgetting the markings in ``extra``."""
    out = expr
    for x in extra:
        out = forget_one(out, x)
    return out


# ---------------------------------------------------------------------------
# projections and rational tails


def bidegree_part(texpr, degs):
    return texpr.bidegree_part(degs)


def relabel_marking(expr, old, new, space=None):
    """Rename a marking everywhere in an expression."""
    if space is None:
        ms = list(expr.space.markings)
        ms[ms.index(old)] = new
        space = Space(expr.space.g, ms)
    terms = {}
    for m, c in expr.terms.items():
        legs = tuple((new if l == old else l, v) for (l, v) in m.graph.legs)
        gr = StableGraph(m.graph.genera, m.graph.edges, legs)
        psi = {(("l", new) if h == ("l", old) else h): e
               for h, e in m.psi.items()}
        m2 = TautMonomial(gr, psi, m.kappa)
        terms[m2] = terms.get(m2, Fraction(0)) + c
    return TautExpression(space, terms)


def attach_tail_pullback(expr, tail_markings, new_marking):
    """Pull back along gluing a fixed rational tail carrying ``tail_markings``.

    The result lives on (g, (P minus the tail markings) + {new_marking}).
    """
    space = expr.space
    B = tuple(x for x in space.markings if x in set(tail_markings))
    if len(B) != len(tail_markings):
        raise ValueError("tail markings not all present")
    bmap = BoundaryMap(space, "sep", 0, B)
    t = pull(expr, bmap)
    main = bmap.factors[1]
    keep = t.bidegree_part((0, expr.degree()))
    out = zero(main)
    for ms, c in keep.terms.items():
        out = out + TautExpression(main, {ms[1]: c})
    s_label = bmap.pair[1]
    return relabel_marking(out, s_label, new_marking)
