"""Divisor classes: relations and bases in H^2 of the factor spaces.

For genus 0 and 1 the psi and kappa classes are boundary combinations,
and in genus 2 kappa_1 is; genus 0 additionally has Keel's relations
among the boundary divisors.  Everything here is produced by pulling a
handful of base-case relations back along forgetful maps, so the engine
in :mod:`calculus` is the single source of the combinatorics.

Base cases: on the three-pointed rational curve every divisor class is
zero; on the one-pointed elliptic curve psi = kappa_1 = d_irr/12; on the
bare genus-2 space kappa_1 = d_irr/5 + (7/5) d_{1,{}}.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .graphs import enumerate_cached, classify
from .expressions import (Space, TautExpression, TautMonomial, make_class,
                          zero, monomial_name)
from .calculus import forget_one
from .linalg import Echelon


def with_space(expr, space):
    """Re-wrap an expression onto an equal space with different order."""
    if expr.space == space:
        return expr
    if expr.space.g != space.g or set(expr.space.markings) != set(space.markings):
        raise ValueError("space mismatch")
    return TautExpression(space, dict(expr.terms))


def _lift(base_rel, space):
    """Pull a relation back along the forgetful map to ``space``."""
    extra = [m for m in space.markings if m not in base_rel.space.markings]
    out = base_rel
    for x in extra:
        out = forget_one(out, x)
    return with_space(out, space)


@lru_cache(maxsize=None)
def psi_relation(space, i):
    """psi_i as a boundary combination; only for genus 0 and 1."""
    g, P = space.g, space.markings
    if g == 1:
        base = Space(1, (i,))
        rel = make_class("psi_%s" % i, base) - Fraction(1, 12) * make_class(
            "d_irr", base)
        return _lift(rel, space)
    if g == 0:
        others = sorted(m for m in P if m != i)[:2]
        base = Space(0, tuple(sorted((i,) + tuple(others))))
        rel = make_class("psi_%s" % i, base)
        return _lift(rel, space)
    raise ValueError("psi is free in genus >= 2")


@lru_cache(maxsize=None)
def kappa_relation(space):
    """kappa_1 as a boundary/psi combination; for genus <= 2."""
    g, P = space.g, space.markings
    if g == 2:
        base = Space(2, ())
        rel = (make_class("kappa1", base)
               - Fraction(1, 5) * make_class("d_irr", base)
               - Fraction(7, 5) * make_class("d_{1,{}}", base))
        return _lift(rel, space)
    if g == 1:
        base = Space(1, (P[0],))
        rel = make_class("kappa1", base) - Fraction(1, 12) * make_class(
            "d_irr", base)
        return _lift(rel, space)
    if g == 0:
        base = Space(0, tuple(sorted(P)[:3]))
        rel = make_class("kappa1", base)
        return _lift(rel, space)
    raise ValueError("kappa_1 is free in genus >= 3")


@lru_cache(maxsize=None)
def keel_relations(space):
    """The genus-0 boundary relations, one pair per 4-subset of markings."""
    g, P = space.g, space.markings
    if g != 0:
        return ()
    out = []
    for quad in itertools.combinations(sorted(P), 4):
        w, x, y, z = quad
        base = Space(0, quad)
        d_xy = make_class("d_{0,{%s,%s}}" % (w, x), base)
        d_xz = make_class("d_{0,{%s,%s}}" % (w, y), base)
        d_xw = make_class("d_{0,{%s,%s}}" % (w, z), base)
        out.append(_lift(d_xy - d_xz, space))
        out.append(_lift(d_xy - d_xw, space))
    return tuple(out)


@lru_cache(maxsize=None)
def divisor_relations(space):
    """All H^2 relations among the standard degree-1 classes."""
    g = space.g
    rels = []
    if g <= 1:
        for i in space.markings:
            rels.append(psi_relation(space, i))
    if g <= 2:
        rels.append(kappa_relation(space))
    rels.extend(keel_relations(space))
    return tuple(rels)


def _mono(space, name):
    e = make_class(name, space)
    (m, c), = e.terms.items()
    assert c == 1
    return m


@lru_cache(maxsize=None)
def divisor_classes(space):
    """All degree-1 monomials on the space, in display order."""
    g, P = space.g, space.markings
    out = [_mono(space, "kappa1")]
    out += [_mono(space, "psi_%s" % i) for i in P]
    if g >= 1:
        out.append(_mono(space, "d_irr"))
    for gr in enumerate_cached(g, P, 1):
        fam = classify(gr, g)
        if fam[0] == "sep":
            out.append(TautMonomial(gr))
    return tuple(out)


def keel_selected(space):
    """The genus-0 boundary basis: delta_{0,C+{s}} with s the last marking.

    Kept iff the complementary side B has |B| >= 3, or |B| = 2 with every
    element of B before every element of C in the marking order.
    """
    g, P = space.g, space.markings
    assert g == 0
    pos = {m: k for k, m in enumerate(P)}
    s = P[-1]
    rest = [m for m in P if m != s]
    keep = []
    for gr in enumerate_cached(g, P, 1):
        v_s = gr.leg_vertex(s)
        C = sorted((l for l, v in gr.legs if v == v_s and l != s), key=pos.get)
        B = sorted((l for l, v in gr.legs if v != v_s), key=pos.get)
        if len(B) >= 3 or (len(B) == 2 and max(pos[b] for b in B)
                           < min(pos[c] for c in C)):
            keep.append(TautMonomial(gr))
    return keep


@lru_cache(maxsize=None)
def divisor_basis(space):
    """Free basis of H^2: the standard classes minus the eliminable ones."""
    g, P = space.g, space.markings
    out = []
    if g >= 3:
        out.append(_mono(space, "kappa1"))
    if g >= 2:
        out += [_mono(space, "psi_%s" % i) for i in P]
    if g >= 1:
        out.append(_mono(space, "d_irr"))
    if g == 0:
        out += keel_selected(space)
    else:
        for gr in enumerate_cached(g, P, 1):
            fam = classify(gr, g)
            if fam[0] == "sep":
                out.append(TautMonomial(gr))
    return tuple(out)


class DivisorReducer:
    """Reduce degree-1 expressions to coordinates on the free H^2 basis."""

    def __init__(self, space):
        self.space = space
        self.basis = divisor_basis(space)
        basis_set = set(self.basis)
        others = [m for m in divisor_classes(space) if m not in basis_set]
        self.columns = list(others) + list(self.basis)
        self.col_index = {m: i for i, m in enumerate(self.columns)}
        self.n_other = len(others)
        self.ech = Echelon(len(self.columns))
        for rel in divisor_relations(space):
            self.ech.add_row(self._row(rel))

    def _row(self, expr):
        return {self.col_index[m]: c for m, c in expr.terms.items()}

    def coordinates(self, expr):
        """Coordinates on the basis; raises if reduction is incomplete."""
        res = self.ech.residual(self._row(expr))
        out = {}
        for j, v in res.items():
            if j < self.n_other:
                raise ValueError("degree-1 class %r not eliminable"
                                 % (self.columns[j],))
            out[self.columns[j]] = v
        return out


@lru_cache(maxsize=None)
def divisor_reducer(space):
    return DivisorReducer(space)


def h2_dimension(space):
    return len(divisor_basis(space))
