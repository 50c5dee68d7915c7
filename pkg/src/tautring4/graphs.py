"""Stable graphs: the combinatorial skeletons of boundary strata.

A stable graph records the topological type of a nodal curve: vertices
carry geometric genera, edges are nodes, legs are marked points.  Graphs
here may be disconnected (products of moduli spaces need that), and all
operations are pure: a graph is never mutated after construction.

Half-edges are addressed as ``("e", i, side)`` for side 0/1 of edge
number ``i``, and ``("l", label)`` for the leg carrying ``label``.
Half-edge addresses are presentation-dependent; only canonical forms
are meant to leave this module.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


# ---------------------------------------------------------------------------
# half-edge addresses

def edge_half(i, side):
    return ("e", i, side)


def leg_half(label):
    return ("l", label)


class StableGraph:
    """Genus-labelled multigraph with named legs.

    vertices: ``genera[i]`` is the genus of vertex ``i``.
    edges: tuple of vertex pairs ``(u, v)``; loops repeat the vertex.
    legs: tuple of ``(label, vertex)`` pairs, labels pairwise distinct.
    """

    __slots__ = ("genera", "edges", "legs", "_key", "_hash")

    def __init__(self, genera, edges, legs):
        self.genera = tuple(int(g) for g in genera)
        self.edges = tuple((int(u), int(v)) for (u, v) in edges)
        self.legs = tuple(sorted((str(l), int(v)) for (l, v) in legs))
        labels = [l for l, _ in self.legs]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate leg labels: %r" % (labels,))
        for u, v in self.edges:
            if not (0 <= u < len(self.genera) and 0 <= v < len(self.genera)):
                raise ValueError("edge endpoint out of range")
        for _, v in self.legs:
            if not 0 <= v < len(self.genera):
                raise ValueError("leg vertex out of range")
        if any(g < 0 for g in self.genera):
            raise ValueError("negative vertex genus")
        self._key = (self.genera, self.edges, self.legs)
        self._hash = hash(self._key)

    # -- basic structure ----------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.genera)

    @property
    def n_edges(self):
        return len(self.edges)

    codim = n_edges

    def leg_vertex(self, label):
        for l, v in self.legs:
            if l == label:
                return v
        raise KeyError(label)

    def has_leg(self, label):
        return any(l == label for l, _ in self.legs)

    def leg_labels(self):
        return tuple(l for l, _ in self.legs)

    def half_edges(self):
        out = []
        for i, _ in enumerate(self.edges):
            out.append(edge_half(i, 0))
            out.append(edge_half(i, 1))
        for l, _ in self.legs:
            out.append(leg_half(l))
        return out

    def half_vertex(self, h):
        if h[0] == "e":
            _, i, side = h
            return self.edges[i][side]
        return self.leg_vertex(h[1])

    def valence(self, v):
        r = 0
        for u, w in self.edges:
            r += (u == v) + (w == v)
        for _, w in self.legs:
            r += w == v
        return r

    def components(self):
        """Partition of vertices into connected components (sorted tuples)."""
        parent = list(range(self.n_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        comps = {}
        for v in range(self.n_vertices):
            comps.setdefault(find(v), []).append(v)
        return tuple(tuple(sorted(c)) for c in sorted(comps.values()))

    @property
    def connected(self):
        return len(self.components()) <= 1

    def b1(self):
        return self.n_edges - self.n_vertices + len(self.components())

    def genus(self):
        return self.b1() + sum(self.genera)

    def is_stable(self):
        return all(2 * self.genera[v] + self.valence(v) >= 3
                   for v in range(self.n_vertices))

    def validate(self):
        if not self.is_stable():
            raise ValueError("unstable graph: %r" % (self,))
        return self

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, StableGraph) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "StableGraph(genera=%r, edges=%r, legs=%r)" % (
            self.genera, self.edges, self.legs)

    # -- relabelled copies --------------------------------------------------

    def permuted(self, perm):
        """Relabel vertices: new index of old vertex v is perm[v].

        Edge order and within-edge sides are preserved, so the half-edge
        map is the identity on addresses.
        """
        n = self.n_vertices
        genera = [0] * n
        for v, g in enumerate(self.genera):
            genera[perm[v]] = g
        edges = tuple((perm[u], perm[v]) for (u, v) in self.edges)
        legs = tuple((l, perm[v]) for (l, v) in self.legs)
        return StableGraph(genera, edges, legs)


# ---------------------------------------------------------------------------
# canonical form


def _vertex_colors(g):
    cols = []
    for v in range(g.n_vertices):
        legs = tuple(sorted(l for l, w in g.legs if w == v))
        loops = sum(1 for u, w in g.edges if u == w == v)
        cols.append((g.genera[v], legs, g.valence(v), loops))
    return cols


def _color_preserving_perms(g):
    """Vertex permutations perm with color(perm^-1(new)) == color(new)."""
    cols = _vertex_colors(g)
    groups = {}
    for v, c in enumerate(cols):
        groups.setdefault(c, []).append(v)
    keys = sorted(groups, key=repr)
    pools = [groups[k] for k in keys]
    for images in itertools.product(*[itertools.permutations(p) for p in pools]):
        perm = [0] * g.n_vertices
        for pool, img in zip(pools, images):
            for src, dst in zip(pool, img):
                perm[src] = dst
        yield tuple(perm)


def _encoding(g, perm):
    n = g.n_vertices
    genera = [0] * n
    for v, gv in enumerate(g.genera):
        genera[perm[v]] = gv
    edges = sorted(tuple(sorted((perm[u], perm[v]))) for (u, v) in g.edges)
    legs = sorted((l, perm[v]) for (l, v) in g.legs)
    return (tuple(genera), tuple(edges), tuple(legs))


@lru_cache(maxsize=None)
def canonical_presentation(g):
    """Return (canonical graph, vertex perm, half-edge map self -> canonical).

    The canonical graph is the lexicographically least encoding over all
    genus/leg-respecting vertex permutations, with edges sorted.  Two
    graphs are isomorphic (legs fixed pointwise) iff their canonical
    graphs are equal.
    """
    best = None
    best_perm = None
    for perm in itertools.permutations(range(g.n_vertices)):
        enc = _encoding(g, perm)
        if best is None or enc < best:
            best, best_perm = enc, perm
    genera, edges, legs = best
    canon = StableGraph(genera, edges, legs)
    # half-edge map: edge i of g lands at some sorted position; ties among
    # equal endpoint pairs broken by original edge index (stable sort).
    keyed = sorted(range(g.n_edges),
                   key=lambda i: (tuple(sorted((best_perm[g.edges[i][0]],
                                                best_perm[g.edges[i][1]]))), i))
    hmap = {}
    for new_i, old_i in enumerate(keyed):
        u, v = g.edges[old_i]
        nu, nv = best_perm[u], best_perm[v]
        if (nu, nv) == canon.edges[new_i]:
            hmap[edge_half(old_i, 0)] = edge_half(new_i, 0)
            hmap[edge_half(old_i, 1)] = edge_half(new_i, 1)
        else:
            hmap[edge_half(old_i, 0)] = edge_half(new_i, 1)
            hmap[edge_half(old_i, 1)] = edge_half(new_i, 0)
    for l, _ in g.legs:
        hmap[leg_half(l)] = leg_half(l)
    vmap = dict(enumerate(best_perm))
    return canon, vmap, hmap


def canonical_graph(g):
    return canonical_presentation(g)[0]


def isomorphic(g, h):
    return canonical_graph(g) == canonical_graph(h)


def isomorphisms(g, h):
    """All isomorphisms g -> h fixing legs pointwise.

    Each is returned as (vertex map dict, half-edge map dict).
    """
    out = []
    if g.n_edges != h.n_edges or g.n_vertices != h.n_vertices:
        return out
    if {l for l, _ in g.legs} != {l for l, _ in h.legs}:
        return out
    if sorted(_vertex_colors(g), key=repr) != sorted(_vertex_colors(h), key=repr):
        return out
    cols_h = _vertex_colors(h)
    groups_h = {}
    for v, c in enumerate(cols_h):
        groups_h.setdefault(c, []).append(v)
    cols_g = _vertex_colors(g)
    groups_g = {}
    for v, c in enumerate(cols_g):
        groups_g.setdefault(c, []).append(v)
    if sorted(groups_g, key=repr) != sorted(groups_h, key=repr):
        return out
    if any(len(groups_g[c]) != len(groups_h[c]) for c in groups_g):
        return out
    keys = sorted(groups_g, key=repr)
    pools_g = [groups_g[k] for k in keys]
    pools_h = [groups_h[k] for k in keys]
    # multiset of endpoint pairs must match under the vertex map; then edges
    # are matched class by class, with loops admitting a side flip.
    h_pairs = {}
    for i, (u, v) in enumerate(h.edges):
        h_pairs.setdefault(tuple(sorted((u, v))), []).append(i)
    for images in itertools.product(*[itertools.permutations(p) for p in pools_h]):
        vmap = {}
        ok = True
        for pool, img in zip(pools_g, images):
            for src, dst in zip(pool, img):
                vmap[src] = dst
        for l, v in g.legs:
            if vmap[v] != h.leg_vertex(l):
                ok = False
                break
        if not ok:
            continue
        g_pairs = {}
        for i, (u, v) in enumerate(g.edges):
            g_pairs.setdefault(tuple(sorted((vmap[u], vmap[v]))), []).append(i)
        if set(g_pairs) != set(h_pairs) or any(
                len(g_pairs[p]) != len(h_pairs[p]) for p in g_pairs):
            continue
        # per endpoint-pair class: bijections between parallel edges, and a
        # side choice for loops (non-loop sides are forced by vmap).
        classes = sorted(g_pairs)
        choices = []
        for p in classes:
            srcs = g_pairs[p]
            dsts = h_pairs[p]
            is_loop = p[0] == p[1]
            per = []
            for assign in itertools.permutations(dsts):
                if is_loop:
                    for flips in itertools.product((0, 1), repeat=len(srcs)):
                        per.append((assign, flips))
                else:
                    per.append((assign, (0,) * len(srcs)))
            choices.append((srcs, per))
        for combo in itertools.product(*[per for _, per in choices]):
            hmap = {}
            for (srcs, _), (assign, flips) in zip(choices, combo):
                for src_i, dst_i, flip in zip(srcs, assign, flips):
                    su, sv = g.edges[src_i]
                    du, dv = h.edges[dst_i]
                    if du == dv:  # loop: sides set by flip
                        hmap[edge_half(src_i, 0)] = edge_half(dst_i, flip)
                        hmap[edge_half(src_i, 1)] = edge_half(dst_i, 1 - flip)
                    elif (vmap[su], vmap[sv]) == (du, dv):
                        hmap[edge_half(src_i, 0)] = edge_half(dst_i, 0)
                        hmap[edge_half(src_i, 1)] = edge_half(dst_i, 1)
                    else:
                        hmap[edge_half(src_i, 0)] = edge_half(dst_i, 1)
                        hmap[edge_half(src_i, 1)] = edge_half(dst_i, 0)
            for l, _ in g.legs:
                hmap[leg_half(l)] = leg_half(l)
            out.append((dict(vmap), hmap))
    return out


@lru_cache(maxsize=None)
def automorphisms(g):
    """All automorphisms of g as (vertex map, half-edge map) pairs."""
    return tuple(isomorphisms(g, g))


def aut_order(g):
    return len(automorphisms(g))


# ---------------------------------------------------------------------------
# family constructors (ambient genus g, marking tuple P)


def trivial_graph(g, P):
    return StableGraph((g,), (), tuple((l, 0) for l in P))


def irr_graph(g, P):
    """One non-separating node: a genus g-1 vertex with a loop."""
    if g < 1:
        raise ValueError("irr graph needs g >= 1")
    return StableGraph((g - 1,), ((0, 0),), tuple((l, 0) for l in P))


def sep_graph(g, a, A, P):
    """Separating node: genus a with legs A joined to genus g-a with the rest."""
    A = set(A)
    legs = tuple((l, 0 if l in A else 1) for l in P)
    return StableGraph((a, g - a), ((0, 1),), legs)


def F_graph(g, P):
    """Two non-separating nodes on one component: genus g-2, two loops."""
    if g < 2:
        raise ValueError("F graph needs g >= 2")
    return StableGraph((g - 2,), ((0, 0), (0, 0)), tuple((l, 0) for l in P))


def E_graph(g, a, A, P):
    """Two vertices, genus a (legs A) and g-1-a, joined by a double edge."""
    if not 0 <= a <= g - 1:
        raise ValueError("E graph genus out of range")
    A = set(A)
    legs = tuple((l, 0 if l in A else 1) for l in P)
    return StableGraph((a, g - 1 - a), ((0, 1), (0, 1)), legs)


def H_graph(g, a, A, P):
    """Loop on the genus-a vertex carrying A, bridged to genus g-a-1."""
    if not 0 <= a <= g - 1:
        raise ValueError("H graph genus out of range")
    A = set(A)
    legs = tuple((l, 0 if l in A else 1) for l in P)
    return StableGraph((a, g - a - 1), ((0, 0), (0, 1)), legs)


def G_graph(g, a, A, b, B, P):
    """Chain (a,A) -- (b,B) -- (g-a-b, rest); the second slot is the middle."""
    A, B = set(A), set(B)
    if A & B:
        raise ValueError("G graph leg sets overlap")
    c = g - a - b
    if c < 0:
        raise ValueError("G graph genus out of range")
    legs = tuple((l, 0 if l in A else (1 if l in B else 2)) for l in P)
    return StableGraph((a, b, c), ((0, 1), (1, 2)), legs)


# ---------------------------------------------------------------------------
# enumeration


def _marking_subsets(P):
    P = tuple(P)
    for r in range(len(P) + 1):
        for c in itertools.combinations(P, r):
            yield c


def enumerate_stable_graphs(g, P, codim):
    """One representative per isomorphism class of stable (g,P)-graphs.

    Only codimensions 0, 1 and 2 are supported; that is all the degree-4
    calculus ever touches.
    """
    P = tuple(P)
    if 2 * g - 2 + len(P) <= 0:
        raise ValueError("moduli space (%d, %r) is empty" % (g, P))
    if codim not in (0, 1, 2):
        raise ValueError("codimension %r unsupported" % (codim,))
    found = []
    seen = set()

    def add(gr):
        if gr is None or not gr.is_stable() or not gr.connected:
            return
        c = canonical_graph(gr)
        if c not in seen:
            seen.add(c)
            found.append(c)

    if codim == 0:
        add(trivial_graph(g, P))
    elif codim == 1:
        if g >= 1:
            add(irr_graph(g, P))
        for a in range(g + 1):
            for A in _marking_subsets(P):
                add(sep_graph(g, a, A, P))
    else:
        if g >= 2:
            add(F_graph(g, P))
        for a in range(g):
            for A in _marking_subsets(P):
                add(E_graph(g, a, A, P))
                add(H_graph(g, a, A, P))
        for a in range(g + 1):
            for b in range(g + 1 - a):
                for A in _marking_subsets(P):
                    rest = tuple(x for x in P if x not in A)
                    for B in _marking_subsets(rest):
                        try:
                            add(G_graph(g, a, A, b, B, P))
                        except ValueError:
                            pass
    found.sort(key=lambda gr: gr._key)
    return found


@lru_cache(maxsize=None)
def enumerate_cached(g, P, codim):
    return tuple(enumerate_stable_graphs(g, P, codim))


# ---------------------------------------------------------------------------
# family classification (names)


def classify(gr, g=None, order=None):
    """Family name of a connected graph of codimension <= 2.

    Returns a tuple like ("irr",), ("sep", a, A), ("F",), ("E", a, A),
    ("H", a, A), ("G", a, A, b, B) or ("triv",).  For families with a
    flip symmetry the lexicographically smaller description is chosen.
    """
    if g is None:
        g = gr.genus()

    def key(a, A):
        return (a, tuple(sorted(A)))

    if gr.n_edges == 0:
        return ("triv",)
    if gr.n_edges == 1:
        if gr.edges[0][0] == gr.edges[0][1]:
            return ("irr",)
        sides = []
        for v in (0, 1):
            A = tuple(sorted(l for l, w in gr.legs if w == v))
            sides.append((gr.genera[v], A))
        return ("sep",) + min(sides)
    if gr.n_edges == 2:
        loops = [e for e in gr.edges if e[0] == e[1]]
        if gr.n_vertices == 1:
            return ("F",)
        if gr.n_vertices == 2 and not loops:
            sides = []
            for v in (0, 1):
                A = tuple(sorted(l for l, w in gr.legs if w == v))
                sides.append((gr.genera[v], A))
            return ("E",) + min(sides)
        if gr.n_vertices == 2 and len(loops) == 1:
            lv = loops[0][0]
            A = tuple(sorted(l for l, w in gr.legs if w == lv))
            return ("H", gr.genera[lv], A)
        if gr.n_vertices == 3:
            deg2 = [v for v in range(3)
                    if sum(e.count(v) for e in gr.edges) == 2]
            mid = deg2[0] if len(deg2) >= 1 else None
            # the middle vertex is the one meeting both edges
            for v in range(3):
                if all(v in e for e in gr.edges):
                    mid = v
            ends = [v for v in range(3) if v != mid]
            B = tuple(sorted(l for l, w in gr.legs if w == mid))
            sides = []
            for v in ends:
                A = tuple(sorted(l for l, w in gr.legs if w == v))
                sides.append((gr.genera[v], A))
            a, A = min(sides)
            return ("G", a, A, gr.genera[mid], B)
    raise ValueError("cannot classify %r" % (gr,))


def family_name(gr, g=None):
    fam = classify(gr, g)
    def fmt(A):
        return "{%s}" % ",".join(A)
    if fam[0] == "triv":
        return "1"
    if fam[0] == "irr":
        return "d_irr"
    if fam[0] == "sep":
        return "d_{%d,%s}" % (fam[1], fmt(fam[2]))
    if fam[0] == "F":
        return "d_F"
    if fam[0] in ("E", "H"):
        return "d_%s(%d,%s)" % (fam[0], fam[1], fmt(fam[2]))
    return "d_G(%d,%s,%d,%s)" % (fam[1], fmt(fam[2]), fam[3], fmt(fam[4]))


# ---------------------------------------------------------------------------
# gluing and smoothing


def disjoint_union(graphs):
    """Combine graphs; returns (graph, per-part vertex offset, half-edge maps).

    Half-edge maps send each part's addresses into the union's addresses.
    """
    genera = []
    edges = []
    legs = []
    offsets = []
    hmaps = []
    e_off = 0
    v_off = 0
    for part in graphs:
        offsets.append(v_off)
        hmap = {}
        for i, (u, v) in enumerate(part.edges):
            edges.append((u + v_off, v + v_off))
            hmap[edge_half(i, 0)] = edge_half(e_off + i, 0)
            hmap[edge_half(i, 1)] = edge_half(e_off + i, 1)
        for l, v in part.legs:
            legs.append((l, v + v_off))
            hmap[leg_half(l)] = leg_half(l)
        genera.extend(part.genera)
        hmaps.append(hmap)
        v_off += part.n_vertices
        e_off += part.n_edges
    return StableGraph(genera, edges, legs), offsets, hmaps


def j_glue(gr, s, t):
    """Glue legs s and t into a new edge.

    Returns (new graph, half-edge map, vertex map); the two new edge
    halves are the images of the former legs s (side 0) and t (side 1).
    """
    vs, vt = gr.leg_vertex(s), gr.leg_vertex(t)
    legs = tuple((l, v) for (l, v) in gr.legs if l not in (s, t))
    edges = gr.edges + ((vs, vt),)
    new = StableGraph(gr.genera, edges, legs)
    hmap = {}
    for i in range(gr.n_edges):
        hmap[edge_half(i, 0)] = edge_half(i, 0)
        hmap[edge_half(i, 1)] = edge_half(i, 1)
    for l, _ in legs:
        hmap[leg_half(l)] = leg_half(l)
    hmap[leg_half(s)] = edge_half(gr.n_edges, 0)
    hmap[leg_half(t)] = edge_half(gr.n_edges, 1)
    vmap = {v: v for v in range(gr.n_vertices)}
    return new, hmap, vmap


def f_contract(gr, s, t):
    """Glue legs s,t and smooth the new node.

    On distinct vertices this contracts the new edge (merging them); if s
    and t share a vertex the node is non-separating, and smoothing bumps
    that vertex's genus by one instead.  Returns (graph, half-edge map,
    vertex map).
    """
    vs, vt = gr.leg_vertex(s), gr.leg_vertex(t)
    legs = tuple((l, v) for (l, v) in gr.legs if l not in (s, t))
    if vs == vt:
        genera = tuple(g + (1 if v == vs else 0)
                       for v, g in enumerate(gr.genera))
        new = StableGraph(genera, gr.edges, legs)
        hmap = {}
        for i in range(gr.n_edges):
            hmap[edge_half(i, 0)] = edge_half(i, 0)
            hmap[edge_half(i, 1)] = edge_half(i, 1)
        for l, _ in legs:
            hmap[leg_half(l)] = leg_half(l)
        return new, hmap, {v: v for v in range(gr.n_vertices)}
    keep, drop = (vs, vt) if vs < vt else (vt, vs)
    vmap = {}
    for v in range(gr.n_vertices):
        if v == drop:
            vmap[v] = keep
        else:
            vmap[v] = v - (1 if v > drop else 0)
    genera = []
    for v in range(gr.n_vertices):
        if v == drop:
            continue
        gv = gr.genera[v] + (gr.genera[drop] if v == keep else 0)
        genera.append(gv)
    edges = tuple((vmap[u], vmap[v]) for (u, v) in gr.edges)
    legs2 = tuple((l, vmap[v]) for (l, v) in legs)
    new = StableGraph(genera, edges, legs2)
    hmap = {}
    for i in range(gr.n_edges):
        hmap[edge_half(i, 0)] = edge_half(i, 0)
        hmap[edge_half(i, 1)] = edge_half(i, 1)
    for l, _ in legs2:
        hmap[leg_half(l)] = leg_half(l)
    return new, hmap, vmap
