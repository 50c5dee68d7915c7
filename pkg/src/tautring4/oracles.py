"""Brute-force reference implementations used to check the fast paths.

These deliberately avoid the canonical-form and family-constructor code:
graphs are generated by raw structure enumeration and compared by trying
all vertex bijections, and automorphisms are counted by filtering raw
half-edge permutations.
"""

from __future__ import annotations

import itertools

from .graphs import StableGraph


def brute_isomorphic(g1, g2):
    """Isomorphism test by exhausting vertex bijections."""
    if (g1.n_vertices != g2.n_vertices or g1.n_edges != g2.n_edges
            or sorted(g1.genera) != sorted(g2.genera)):
        return False
    legs1 = {l: v for l, v in g1.legs}
    legs2 = {l: v for l, v in g2.legs}
    if set(legs1) != set(legs2):
        return False
    e2 = sorted(tuple(sorted(e)) for e in g2.edges)
    for perm in itertools.permutations(range(g2.n_vertices)):
        if any(g1.genera[v] != g2.genera[perm[v]]
               for v in range(g1.n_vertices)):
            continue
        if any(perm[v] != legs2[l] for l, v in g1.legs):
            continue
        e1 = sorted(tuple(sorted((perm[u], perm[w]))) for u, w in g1.edges)
        if e1 == e2:
            return True
    return False


def brute_enumerate(g, P, codim):
    """All stable connected (g,P)-graphs with ``codim`` edges, one per
    isomorphism class, by raw generation and pairwise comparison."""
    P = tuple(P)
    out = []
    max_v = codim + 1
    for nv in range(1, max_v + 1):
        # edge multisets: combinations with repetition over vertex pairs
        pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
        for edges in itertools.combinations_with_replacement(pairs, codim):
            b1_graph = StableGraph([0] * nv, edges, [])
            if not b1_graph.connected:
                continue
            b1 = b1_graph.b1()
            total_vertex_genus = g - b1
            if total_vertex_genus < 0:
                continue
            for genera in itertools.product(range(total_vertex_genus + 1),
                                            repeat=nv):
                if sum(genera) != total_vertex_genus:
                    continue
                for assignment in itertools.product(range(nv), repeat=len(P)):
                    legs = list(zip(P, assignment))
                    cand = StableGraph(genera, edges, legs)
                    if not cand.is_stable():
                        continue
                    if any(brute_isomorphic(cand, seen) for seen in out):
                        continue
                    out.append(cand)
    return out


def brute_aut_order(gr):
    """|Aut| by filtering raw half-edge permutations.

    A permutation of the edge halves is an automorphism when it maps
    edges to edges, induces a well-defined genus-preserving vertex map,
    and fixes every leg's vertex under that map.
    """
    halves = [(i, s) for i in range(gr.n_edges) for s in (0, 1)]
    vert = {h: gr.edges[h[0]][h[1]] for h in halves}
    legs_at = {}
    for l, v in gr.legs:
        legs_at.setdefault(v, []).append(l)
    count = 0
    for perm in itertools.permutations(halves):
        m = dict(zip(halves, perm))
        ok = True
        # edges map to edges
        for i in range(gr.n_edges):
            a, b = m[(i, 0)], m[(i, 1)]
            if a[0] != b[0] or a == b:
                ok = False
                break
        if not ok:
            continue
        # induced vertex map: well defined, genus preserving, fixes legs
        vmap = {}
        for h in halves:
            src, dst = vert[h], vert[m[h]]
            if src in vmap and vmap[src] != dst:
                ok = False
                break
            vmap[src] = dst
        if not ok:
            continue
        if len(set(vmap.values())) != len(vmap):
            continue
        for v, w in vmap.items():
            if gr.genera[v] != gr.genera[w]:
                ok = False
                break
            if sorted(legs_at.get(v, [])) != sorted(legs_at.get(w, [])):
                ok = False
                break
        if not ok:
            continue
        # vertices meeting no edge cannot move (their legs pin them)
        count += 1
    return count
