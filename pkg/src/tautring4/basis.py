"""The essential degree-4 classes B^4(g,P) and the generator universe.

A degree-2 (algebraic) tautological class is essential unless a divisor
relation on a stratum factor eliminates it: psi-decorations on factor
sides of genus <= 1, kappa-decorations on sides of genus <= 2, the
corresponding classes on the non-separating stratum one genus up, the
pure Mumford monomials below their stability thresholds, and the
genus-0-pair chain classes removed by Keel's relations.  What remains is
the basis the rank arguments and the counting identity run over.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .graphs import (classify, edge_half, enumerate_cached, leg_half)
from .expressions import (Space, TautExpression, TautMonomial, make_class,
                          monomial_name)


# -- pure Mumford thresholds -------------------------------------------------

def kappa1sq_essential(space):
    return space.g >= 5 or (space.g == 4 and space.n == 0)


def kappa2_essential(space):
    return space.g >= 6


def kappa1psi_essential(space):
    return space.g >= 4


def psipsi_essential(space):
    return space.g >= 3


def _mono(space, name):
    e = make_class(name, space)
    if len(e.terms) != 1:
        raise ValueError("class %r is degenerate on %r" % (name, space))
    (m, c), = e.terms.items()
    return m


def mumford_degree2(space):
    """All degree-2 Mumford monomial names, in display order."""
    P = space.markings
    names = ["kappa1^2", "kappa2"]
    names += ["kappa1*psi_%s" % i for i in P]
    names += ["psi_%s^2" % i for i in P]
    names += ["psi_%s*psi_%s" % (i, j)
              for i, j in itertools.combinations(P, 2)]
    return names


def essential_mumford(space):
    out = []
    if kappa1sq_essential(space):
        out.append("kappa1^2")
    if kappa2_essential(space):
        out.append("kappa2")
    if kappa1psi_essential(space):
        out += ["kappa1*psi_%s" % i for i in space.markings]
    if psipsi_essential(space):
        out += ["psi_%s^2" % i for i in space.markings]
        out += ["psi_%s*psi_%s" % (i, j)
                for i, j in itertools.combinations(space.markings, 2)]
    return out


# -- decorated codimension-1 classes ----------------------------------------

def _decorated_monomials(space, essential_only):
    """Mixed boundary monomials; set ``essential_only`` to apply the table."""
    g, P = space.g, space.markings
    out = []
    seen = set()

    def add(m):
        if m.vanishes_by_dimension():
            return
        if m not in seen:
            seen.add(m)
            out.append(m)

    for gr in enumerate_cached(g, P, 1):
        fam = classify(gr, g)
        if fam[0] == "irr":
            factor_genus = g - 1
            if not essential_only or factor_genus >= 2:
                add(TautMonomial(gr, {edge_half(0, 0): 1}, {}))
                for i in P:
                    add(TautMonomial(gr, {leg_half(i): 1}, {}))
            if not essential_only or factor_genus >= 3:
                add(TautMonomial(gr, {}, {0: {1: 1}}))
        else:
            for v in range(2):
                a_v = gr.genera[v]
                legs_v = [l for l, w in gr.legs if w == v]
                half = edge_half(0, 0 if v == gr.edges[0][0] else 1)
                if not essential_only or a_v >= 2:
                    add(TautMonomial(gr, {half: 1}, {}))
                    for i in legs_v:
                        add(TautMonomial(gr, {leg_half(i): 1}, {}))
                if not essential_only or a_v >= 3:
                    add(TautMonomial(gr, {}, {v: {1: 1}}))
    return out


# -- pure boundary classes ---------------------------------------------------

def g_pair_data(gr):
    """For a chain with genus-0 middle and a genus-0 end, return (B, C).

    B is the leg set of the genus-0 end, C the legs of the middle; None
    when the graph is not of this Keel-governed type.
    """
    if gr.n_vertices != 3 or gr.n_edges != 2:
        return None
    mid = next(v for v in range(3) if all(v in e for e in gr.edges))
    if gr.genera[mid] != 0:
        return None
    ends = [v for v in range(3) if v != mid]
    zero_ends = [v for v in ends if gr.genera[v] == 0]
    if not zero_ends:
        return None
    if len(zero_ends) == 2:
        raise ValueError("ambiguous genus-0 chain (ambient genus 0)")
    e0 = zero_ends[0]
    B = tuple(sorted(l for l, v in gr.legs if v == e0))
    C = tuple(sorted(l for l, v in gr.legs if v == mid))
    return B, C


def keel_keeps(space, B, C):
    pos = {m: k for k, m in enumerate(space.markings)}
    if len(B) >= 3:
        return True
    if len(B) != 2:
        return False
    return max(pos[b] for b in B) < min(pos[c] for c in C)


def pure_boundary_monomials(space, essential_only):
    out = []
    for gr in enumerate_cached(space.g, space.markings, 2):
        if essential_only:
            data = g_pair_data(gr)
            if data is not None and not keel_keeps(space, *data):
                continue
        out.append(TautMonomial(gr))
    return out


# -- the basis ----------------------------------------------------------------

class EssentialBasis:
    """Ordered essential classes B^4(g,P) for a marking order."""

    def __init__(self, space):
        if space.g == 0:
            raise ValueError("the genus-0 selection rule needs a positive "
                             "genus anchor vertex")
        if not space.exists():
            raise ValueError("empty moduli space")
        self.space = space
        mumford = [_mono(space, n) for n in essential_mumford(space)]
        mixed = _decorated_monomials(space, True)
        pure = pure_boundary_monomials(space, True)
        self.mumford = mumford
        self.mixed = sorted(mixed, key=lambda m: m.sort_key())
        self.pure = sorted(pure, key=lambda m: m.sort_key())
        self.classes = list(self.mumford) + self.mixed + self.pure

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def index(self, m):
        return self.classes.index(m)


def essential_basis(g, P, order=None):
    if order is not None:
        P = tuple(order)
    return EssentialBasis(Space(g, P))


def all_degree2_monomials(space):
    """The full generator universe of formal degree-2 monomials."""
    mumford = [_mono(space, n) for n in mumford_degree2(space)]
    mixed = _decorated_monomials(space, False)
    pure = pure_boundary_monomials(space, False)
    return mumford + sorted(mixed, key=lambda m: m.sort_key()) + sorted(
        pure, key=lambda m: m.sort_key())


def is_essential(m, space):
    """Membership of a degree-2 monomial in B^4, with a short reason."""
    gr = m.graph
    if m.degree() != 2:
        raise ValueError("is_essential judges algebraic degree 2 only")
    if gr.n_edges == 0:
        kap = m.kappa.get(0, {})
        if kap.get(1, 0) == 2:
            ok = kappa1sq_essential(space)
            return ok, "kappa_1^2 needs g >= 5 (or g = 4 with no markings)"
        if kap.get(2, 0) == 1:
            ok = kappa2_essential(space)
            return ok, "kappa_2 needs g >= 6"
        if kap.get(1, 0) == 1:
            ok = kappa1psi_essential(space)
            return ok, "kappa_1 psi needs g >= 4"
        ok = psipsi_essential(space)
        return ok, "psi monomials need g >= 3"
    if gr.n_edges == 1:
        irr = gr.edges[0][0] == gr.edges[0][1]
        if m.kappa:
            (v, _), = m.kappa.items()
            side_genus = (space.g - 1) if irr else gr.genera[v]
            return (side_genus >= 3,
                    "kappa side of genus %d (needs >= 3)" % side_genus)
        (h, e), = m.psi.items()
        v = gr.half_vertex(h)
        side_genus = (space.g - 1) if irr else gr.genera[v]
        return (side_genus >= 2,
                "psi side of genus %d (needs >= 2)" % side_genus)
    data = g_pair_data(gr)
    if data is not None:
        keep = keel_keeps(space, *data)
        return keep, "genus-0 pair chain: Keel selection on (B, C) = %r" % (
            data,)
    return True, "pure boundary classes of this shape are never eliminated"


# -- the counting identity (degree-4 generators vs boundary data) -------------

def open_h2_dim(g, n):
    """dim H^2 of the open moduli space (Harer stability input)."""
    if g >= 3:
        return 1 + n
    if g == 2:
        return n
    return 0


def counting_identity_sides(space):
    """Both sides of the generator-counting identity, independently.

    Left: |B^4(g,P)| from the basis constructor.  Right: the number of
    essential pure boundary classes, plus the count of degree-2 Mumford
    monomials, plus for every codimension-1 stratum the dimension of the
    Aut-invariant part of H^2 of the open factor product.
    """
    g, P = space.g, space.markings
    n = len(P)
    left = len(EssentialBasis(space).classes)

    r = 0
    for gr in enumerate_cached(g, P, 2):
        data = g_pair_data(gr)
        if data is not None and not keel_keeps(space, *data):
            continue
        r += 1
    mumford_count = 2 + 2 * n + n * (n - 1) // 2

    strata = 0
    if g >= 1:
        # non-separating stratum: invariants of the q <-> r swap
        fg = g - 1
        strata += (1 if fg >= 3 else 0)
        if fg >= 2:
            strata += n + 1
    for gr in enumerate_cached(g, P, 1):
        fam = classify(gr, g)
        if fam[0] != "sep":
            continue
        a, A = fam[1], fam[2]
        comp = tuple(x for x in P if x not in set(A))
        b = g - a
        symmetric = (a == b and tuple(sorted(A)) == tuple(sorted(comp)))
        d1 = open_h2_dim(a, len(A) + 1)
        d2 = open_h2_dim(b, len(comp) + 1)
        strata += d1 if symmetric else d1 + d2
    right = r + mumford_count + strata
    return left, right
