import itertools
import random
from fractions import Fraction

import pytest

from tautring4.expressions import (Space, TautExpression, TautMonomial,
                                   TensorExpression, make_class, normalize,
                                   zero)
from tautring4.calculus import (BoundaryMap, ScopeError, boundary_maps,
                                boundary_pullback, forget_one,
                                forgetful_pullback, product_deg2, pull, push,
                                attach_tail_pullback)
from tautring4.degree1 import divisor_reducer, with_space


def mc(name, sp):
    return make_class(name, sp)


def test_dirr_squared_displays():
    sp = Space(3, ())
    got = product_deg2(mc("d_irr", sp), mc("d_irr", sp))
    want = (-1 * mc("psi|d_irr", sp) + 2 * mc("d_F", sp)
            + 2 * mc("d_E(1,{})", sp))
    assert got == want


def test_separating_square_special_cases():
    sp4 = Space(4, ())
    got = product_deg2(mc("d_{1,{}}", sp4), mc("d_{1,{}}", sp4))
    assert got == (-1 * mc("psi|d_{1,{}}", sp4) - mc("d_{1,{}}|psi", sp4)
                   + 2 * mc("d_G(1,{},2,{})", sp4))
    got2 = product_deg2(mc("d_{2,{}}", sp4), mc("d_{2,{}}", sp4))
    assert got2 == -1 * mc("psi|d_{2,{}}", sp4) - mc("d_{2,{}}|psi", sp4)


def test_product_table():
    sp = Space(3, ("x",))
    assert product_deg2(mc("psi_x", sp), mc("d_{1,{}}", sp)) == mc(
        "psi_x*d_{1,{}}", sp)
    assert product_deg2(mc("kappa1", sp), mc("d_irr", sp)) == mc(
        "kappa1*d_irr", sp)
    assert product_deg2(mc("kappa1", sp), mc("psi_x", sp)) == mc(
        "kappa1*psi_x", sp)
    assert product_deg2(mc("psi_x", sp), mc("psi_x", sp)) == mc(
        "psi_x^2", sp)


def test_product_requires_degree_one():
    sp = Space(3, ())
    with pytest.raises(ScopeError):
        product_deg2(mc("d_F", sp), mc("d_irr", sp))


def test_disjoint_divisors_multiply_to_zero():
    sp = Space(2, ("a", "b", "x"))
    assert product_deg2(mc("d_{0,{a,x}}", sp), mc("d_{0,{b,x}}", sp)).is_zero()


def test_pullback_displays():
    sp = Space(4, ())
    bm = BoundaryMap(sp, "irr")
    f = bm.factors[0]
    got = boundary_pullback(mc("d_irr", sp), bm)
    want = (mc("d_irr", f) + mc("d_{1,{q}}", f) + mc("d_{2,{q}}", f)
            - mc("psi_q", f) - mc("psi_r", f))
    assert got == want


def test_projection_formula():
    sp = Space(3, ())
    bm = BoundaryMap(sp, "irr")
    pulled = pull(mc("d_irr", sp), bm)
    assert push(pulled, bm) == 2 * product_deg2(mc("d_irr", sp),
                                                mc("d_irr", sp))


def test_excess_pinning():
    """The self-intersection via pull-push matches the direct product."""
    sp = Space(3, ("x",))
    for name in ["d_{1,{}}", "d_{1,{x}}", "d_irr"]:
        e = mc(name, sp)
        bm = (BoundaryMap(sp, "irr") if name == "d_irr" else
              BoundaryMap(sp, "sep", 1, () if name == "d_{1,{}}" else ("x",)))
        via_map = Fraction(1, bm.aut) * push(pull(e, bm), bm)
        assert via_map == product_deg2(e, e)


def _tensor_product(t1, t2, spaces):
    out = TensorExpression(t1.spaces)
    for ms1, c1 in t1.terms.items():
        for ms2, c2 in t2.terms.items():
            parts = []
            for sp, m1, m2 in zip(spaces, ms1, ms2):
                if m1.degree() and m2.degree():
                    parts.append(product_deg2(TautExpression(sp, {m1: 1}),
                                              TautExpression(sp, {m2: 1})))
                else:
                    mm = m1 if m1.degree() else m2
                    parts.append(TautExpression(sp, {mm: 1}))
            acc = [((), Fraction(1))]
            for p in parts:
                acc = [(ms + (m,), c * cv)
                       for ms, c in acc for m, cv in p.terms.items()]
            for ms, c in acc:
                out = out + TensorExpression(t1.spaces, {ms: c1 * c2 * c})
    return out


def test_pullback_is_ring_homomorphism():
    """xi_A*(a b) = xi_A*(a) xi_A*(b) on every ambient up to (4, 2)."""
    rnd = random.Random(5)
    cases = [(2, ("i", "j")), (3, ("i",)), (4, ()), (3, ("i", "j")),
             (1, ("i", "j"))]
    for g, P in cases:
        sp = Space(g, P)
        names = ["kappa1", "d_irr"] + ["psi_%s" % m for m in P]
        from tautring4.graphs import enumerate_cached, classify
        for gr in enumerate_cached(g, P, 1):
            if classify(gr, g)[0] == "sep":
                from tautring4.expressions import monomial_name
                names.append(monomial_name(TautMonomial(gr)))
        deg1 = [mc(n, sp) for n in names]
        for bm in boundary_maps(sp):
            sample = rnd.sample(
                list(itertools.combinations_with_replacement(deg1, 2)),
                min(12, len(deg1) * (len(deg1) + 1) // 2))
            for a, b in sample:
                lhs = pull(product_deg2(a, b), bm)
                rhs = _tensor_product(pull(a, bm), pull(b, bm), bm.factors)
                assert lhs == rhs


def test_forgetful_rules():
    sp = Space(1, ("y",))
    up = sp.with_extra(("x",))
    assert forget_one(mc("d_irr", sp), "x") == mc("d_irr", up)
    sp2 = Space(2, ())
    up2 = Space(2, ("x",))
    assert forget_one(mc("kappa1", sp2), "x") == mc("kappa1", up2) - mc(
        "psi_x", up2)
    assert forget_one(mc("kappa2", sp2), "x") == mc("kappa2", up2) - mc(
        "psi_x^2", up2)
    # symmetric stratum forgets with multiplicity one
    assert forget_one(mc("d_{1,{}}", sp2), "x") == mc("d_{1,{}}", up2)
    sp3 = Space(3, ())
    up3 = Space(3, ("x",))
    assert forget_one(mc("psi|d_irr", sp3), "x") == (
        mc("psi|d_irr", up3) - 2 * mc("d_E(0,{x})", up3))
    assert forget_one(mc("kappa1*d_irr", sp3), "x") == (
        mc("kappa1*d_irr", up3) - mc("psi_x*d_irr", up3))
    sp3y = Space(3, ("y",))
    up3y = sp3y.with_extra(("x",))
    assert forget_one(mc("psi_y*d_irr", sp3y), "x") == (
        mc("psi_y*d_irr", up3y) - mc("d_H(2,{})", up3y))
    assert forget_one(mc("psi_y", sp3y), "x") == (
        mc("psi_y", up3y) - mc("d_{0,{x,y}}", up3y))
    assert forget_one(mc("d_F", sp3), "x") == mc("d_F", up3)
    # on the symmetric double edge the two vertex choices give one class
    # with multiplicity one (the automorphism ratio), not two
    assert forget_one(mc("d_E(1,{})", sp3), "x") == mc("d_E(1,{x})", up3)
    up4 = Space(4, ("x",))
    assert forget_one(mc("d_E(1,{})", Space(4, ())), "x") == (
        mc("d_E(1,{})", up4) + mc("d_E(1,{x})", up4))


def test_forgetful_ring_homomorphism():
    sp = Space(2, ("a", "b"))
    rnd = random.Random(3)
    deg1 = [mc(n, sp) for n in ["kappa1", "psi_a", "psi_b", "d_irr",
                                "d_{1,{a}}", "d_{1,{}}", "d_{0,{a,b}}"]]
    for _ in range(10):
        a, b = rnd.choice(deg1), rnd.choice(deg1)
        assert forget_one(product_deg2(a, b), "x") == product_deg2(
            forget_one(a, "x"), forget_one(b, "x"))


def test_forgetful_pullback_multi():
    sp = Space(2, ())
    out = forgetful_pullback(mc("d_irr", sp), ("x", "y"))
    assert out.space.markings == ("x", "y")
    assert out == mc("d_irr", Space(2, ("x", "y")))


def test_restriction_h2xh2_examples():
    sp = Space(7, ("x",))
    bm = BoundaryMap(sp, "sep", 3, ())
    f0, f1 = bm.factors
    s_l, t_l = bm.pair
    red0, red1 = divisor_reducer(f0), divisor_reducer(f1)

    def h2h2(expr):
        t = pull(expr, bm).bidegree_part((1, 1))
        coords = {}
        for ms, c in t.terms.items():
            v0 = red0.coordinates(TautExpression(f0, {ms[0]: 1}))
            v1 = red1.coordinates(TautExpression(f1, {ms[1]: 1}))
            for m0, a0 in v0.items():
                for m1, a1 in v1.items():
                    coords[(m0, m1)] = coords.get((m0, m1),
                                                  Fraction(0)) + c * a0 * a1
        return {k: v for k, v in coords.items() if v}

    psi_s = list(mc("psi_%s" % s_l, f0).terms)[0]
    psi_t = list(mc("psi_%s" % t_l, f1).terms)[0]
    a = h2h2(mc("psi|d_{3,{}}", sp))
    b = h2h2(mc("d_{3,{}}|psi", sp))
    assert a.get((psi_s, psi_t)) == Fraction(-1)
    assert b.get((psi_s, psi_t)) == Fraction(-1)
    assert h2h2(mc("kappa2", sp)) == {}
    assert h2h2(mc("d_E(2,{})", sp)) == {}
    assert h2h2(mc("psi_x^2", sp)) == {}


def test_attach_tail_pullback():
    sp = Space(3, ("a", "b"))
    out = attach_tail_pullback(mc("d_{0,{a,b}}", sp), ("a", "b"), "s")
    target = Space(3, ("s",))
    assert out == -1 * mc("psi_s", target)


def test_scope_guard():
    sp = Space(3, ())
    m = list(mc("d_F", sp).terms)[0]
    e = TautExpression(sp, {m: 1})
    with pytest.raises(ScopeError):
        product_deg2(e, e)
