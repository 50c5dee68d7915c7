from fractions import Fraction

import pytest

from tautring4.expressions import Space, TautExpression, make_class
from tautring4.degree1 import (divisor_basis, divisor_classes,
                               divisor_reducer, divisor_relations,
                               h2_dimension, keel_relations)
from tautring4.calculus import BoundaryMap, pull
from tautring4.linalg import RationalMatrix


def test_keel_rank_0_5():
    """Ten boundary points, Keel rank five, so dim H^2 is five."""
    sp = Space(0, tuple("12345"))
    boundary = [m for m in divisor_classes(sp) if m.graph.n_edges == 1]
    assert len(boundary) == 10
    idx = {m: i for i, m in enumerate(boundary)}
    rows = [{idx[m]: c for m, c in rel.terms.items()}
            for rel in keel_relations(sp)]
    assert RationalMatrix.from_rows(rows, col_keys=range(10)).rank() == 5
    assert h2_dimension(sp) == 5


def test_divisor_reduction_closes():
    for sp in [Space(0, tuple("1234")), Space(1, ("x", "y")),
               Space(2, ("x",)), Space(3, ("x",))]:
        red = divisor_reducer(sp)
        for m in divisor_classes(sp):
            red.coordinates(TautExpression(sp, {m: 1}))


def test_divisor_relations_true():
    """Every divisor rule pulls back to a true rule on a genus-0 factor."""
    sp = Space(1, tuple("ijqr"))
    bm = BoundaryMap(sp, "irr")
    f0 = bm.factors[0]
    red = divisor_reducer(f0)
    for rel in divisor_relations(sp):
        t = pull(rel, bm)
        e = TautExpression(f0, {ms[0]: c for ms, c in t.terms.items()})
        assert red.coordinates(e) == {}


def test_base_cases():
    sp11 = Space(1, ("x",))
    red = divisor_reducer(sp11)
    psi = make_class("psi_x", sp11)
    coords = red.coordinates(psi)
    (m, c), = coords.items()
    assert c == Fraction(1, 12)
    sp2 = Space(2, ())
    coords2 = divisor_reducer(sp2).coordinates(make_class("kappa1", sp2))
    from tautring4.expressions import monomial_name
    named = {monomial_name(m): c for m, c in coords2.items()}
    assert named == {"d_irr": Fraction(1, 5), "d_{1,{}}": Fraction(7, 5)}


def test_free_genus():
    sp = Space(3, ("x",))
    assert divisor_relations(sp) == ()
    red = divisor_reducer(sp)
    coords = red.coordinates(make_class("kappa1", sp))
    assert list(coords.values()) == [Fraction(1)]
