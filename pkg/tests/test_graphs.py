import random

import pytest

from tautring4.graphs import (StableGraph, aut_order, canonical_graph,
                              disjoint_union, enumerate_stable_graphs,
                              f_contract, family_name, irr_graph, isomorphic,
                              j_glue, sep_graph, trivial_graph, E_graph,
                              F_graph, G_graph, H_graph, classify)
from tautring4.oracles import brute_aut_order, brute_enumerate, brute_isomorphic


def test_genus_and_stability():
    gr = irr_graph(2, ())
    assert gr.genus() == 2 and gr.is_stable()
    assert F_graph(4, ()).genus() == 4
    assert E_graph(3, 1, (), ()).genus() == 3
    assert H_graph(3, 1, (), ()).genus() == 3
    assert G_graph(3, 1, (), 1, (), ()).genus() == 3
    with pytest.raises(ValueError):
        StableGraph((-1,), (), ())


def test_unstable_rejected():
    assert not sep_graph(2, 0, (), ()).is_stable()
    assert not E_graph(2, 0, (), ()).is_stable()


def test_enumerate_examples():
    assert len(enumerate_stable_graphs(2, (), 1)) == 2
    names = {family_name(g) for g in enumerate_stable_graphs(2, (), 1)}
    assert names == {"d_irr", "d_{1,{}}"}
    # four-pointed rational curves: three separating classes, no irr
    classes = enumerate_stable_graphs(0, ("1", "2", "3", "4"), 1)
    assert len(classes) == 3
    assert all(classify(g)[0] == "sep" for g in classes)
    assert all("1" in classify(g)[2] for g in classes)
    # no stable degeneration of the three-pointed rational curve
    assert enumerate_stable_graphs(0, ("1", "2", "3"), 1) == []


def test_enumerate_rejects():
    with pytest.raises(ValueError):
        enumerate_stable_graphs(0, ("1",), 1)
    with pytest.raises(ValueError):
        enumerate_stable_graphs(2, (), 3)


def test_aut_orders():
    assert aut_order(canonical_graph(irr_graph(3, ()))) == 2
    assert aut_order(canonical_graph(F_graph(2, ()))) == 8
    assert aut_order(canonical_graph(E_graph(3, 1, (), ()))) == 4
    assert aut_order(canonical_graph(E_graph(4, 1, (), ()))) == 2
    assert aut_order(canonical_graph(H_graph(2, 0, (), ()))) == 2
    assert aut_order(canonical_graph(sep_graph(2, 1, (), ()))) == 2
    assert aut_order(canonical_graph(sep_graph(3, 1, ("a",), ("a",)))) == 1


def test_canonical_relabeling_invariance():
    rnd = random.Random(11)
    graphs = []
    for g, P, c in [(2, (), 2), (3, ("a", "b"), 2), (1, ("a", "b"), 2)]:
        graphs.extend(enumerate_stable_graphs(g, P, c))
    for gr in graphs:
        for _ in range(100):
            perm = list(range(gr.n_vertices))
            rnd.shuffle(perm)
            edges = [(perm[u], perm[v]) if rnd.random() < 0.5
                     else (perm[v], perm[u]) for u, v in gr.edges]
            rnd.shuffle(edges)
            genera = [0] * gr.n_vertices
            for v, gv in enumerate(gr.genera):
                genera[perm[v]] = gv
            legs = [(l, perm[v]) for l, v in gr.legs]
            shuffled = StableGraph(genera, edges, legs)
            assert canonical_graph(shuffled) == canonical_graph(gr)


def test_aut_vs_bruteforce_spot():
    for g, P, c in [(2, (), 2), (3, ("a",), 2), (1, ("a", "b"), 2)]:
        for gr in enumerate_stable_graphs(g, P, c):
            assert brute_aut_order(gr) == aut_order(gr)


def test_enumeration_vs_bruteforce_spot():
    for g, P, c in [(3, (), 2), (2, ("a", "b"), 2), (0, ("a", "b", "c", "d"), 2)]:
        fast = enumerate_stable_graphs(g, P, c)
        slow = brute_enumerate(g, P, c)
        assert len(fast) == len(slow)
        for s in slow:
            assert sum(1 for f in fast if brute_isomorphic(s, f)) == 1


def test_j_glue():
    gr = trivial_graph(1, ("q", "r", "x"))
    glued, hmap, _ = j_glue(gr, "q", "r")
    assert family_name(canonical_graph(glued)) == "d_irr"
    assert glued.genus() == 2
    assert hmap[("l", "q")] == ("e", 0, 0)
    two, _, _ = disjoint_union([trivial_graph(1, ("s", "a")),
                                trivial_graph(2, ("t", "b"))])
    glued2, _, _ = j_glue(two, "s", "t")
    assert classify(glued2) == ("sep", 1, ("a",))
    with pytest.raises(KeyError):
        j_glue(gr, "q", "missing")


def test_f_contract():
    two, _, _ = disjoint_union([trivial_graph(1, ("s", "a")),
                                trivial_graph(2, ("t", "b"))])
    smoothed, _, _ = f_contract(two, "s", "t")
    assert smoothed.n_vertices == 1 and smoothed.genus() == 3
    # loop smoothing raises the vertex genus
    lo, _, _ = f_contract(trivial_graph(2, ("s", "t", "a")), "s", "t")
    assert lo.genera == (3,) and lo.n_edges == 0


def _contract_edge(gr, i):
    u, v = gr.edges[i]
    edges = [e for j, e in enumerate(gr.edges) if j != i]
    if u == v:
        genera = tuple(g + (1 if w == u else 0)
                       for w, g in enumerate(gr.genera))
        return StableGraph(genera, edges, gr.legs)
    keep, drop = min(u, v), max(u, v)
    vmap = {w: (keep if w == drop else w - (1 if w > drop else 0))
            for w in range(gr.n_vertices)}
    genera = [g for w, g in enumerate(gr.genera) if w != drop]
    genera[vmap[keep]] += gr.genera[drop]
    return StableGraph(genera, [(vmap[a], vmap[b]) for a, b in edges],
                       [(l, vmap[w]) for l, w in gr.legs])


def test_solve_gluings_containment_exhaustive_3_ab():
    """j-solutions exist exactly when the stratum sits inside the divisor."""
    from tautring4.calculus import BoundaryMap, solve_gluings
    from tautring4.expressions import Space
    sp = Space(3, ("a", "b"))
    divisors = enumerate_stable_graphs(3, ("a", "b"), 1)
    strata = (enumerate_stable_graphs(3, ("a", "b"), 1)
              + enumerate_stable_graphs(3, ("a", "b"), 2))
    from tautring4.calculus import boundary_map_for_graph
    for a_graph in divisors:
        bmap = boundary_map_for_graph(sp, a_graph)
        for gamma in strata:
            fl, jl = solve_gluings(bmap, gamma)
            if gamma.n_edges == a_graph.n_edges:
                contained = isomorphic(gamma, a_graph)
            else:
                contained = any(
                    isomorphic(_contract_edge(gamma, i), a_graph)
                    for i in range(gamma.n_edges))
            assert bool(jl) == contained, (family_name(a_graph),
                                           family_name(gamma))


def test_solve_gluings_examples():
    from tautring4.calculus import BoundaryMap, solve_gluings
    from tautring4.expressions import Space
    # the trivial gluing of a separating divisor against itself
    sp = Space(2, ("x", "y"))
    bm = BoundaryMap(sp, "sep", 1, ("x",))
    fl, jl = solve_gluings(bm, canonical_graph(sep_graph(2, 1, ("x",),
                                                         ("x", "y"))))
    assert fl == [] and len(jl) == 1
    assert all(g.n_edges == 0 for g in jl[0])
    # two components for the separating divisor under the irr map
    sp3 = Space(3, ())
    bmi = BoundaryMap(sp3, "irr")
    fl, jl = solve_gluings(bmi, canonical_graph(sep_graph(3, 1, (), ())))
    assert len(fl) == 2 and jl == []
    # the unique j-solution for the two-loop stratum
    fl, jl = solve_gluings(bmi, canonical_graph(F_graph(3, ())))
    assert len(jl) == 1
    (g,) = jl[0],
    inner = jl[0][0]
    assert inner.n_vertices == 1 and inner.n_edges == 1
    assert set(inner.leg_labels()) == {"q", "r"}


def test_f_round_trip():
    """Smoothing any f-solution recovers the stratum."""
    from tautring4.calculus import BoundaryMap, solve_gluings
    from tautring4.expressions import Space
    sp = Space(3, ("a",))
    bm = BoundaryMap(sp, "irr")
    s, t = bm.pair
    for gamma in enumerate_stable_graphs(3, ("a",), 2):
        fl, _ = solve_gluings(bm, gamma)
        for parts in fl:
            combined, _, _ = disjoint_union(parts)
            smoothed, _, _ = f_contract(combined, s, t)
            assert isomorphic(smoothed, gamma)
