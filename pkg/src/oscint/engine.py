"""Shared machinery for perturbative expansions built from graph sums.

Weight evaluation sums over all admissible index assignments of half-edges:
every edge ranges over the nonzero entries of its propagator block, leaves
over the nonzero entries of their value vectors, and each vertex contributes
a derivative-tensor entry.  Symmetry bookkeeping lives entirely in the
1/|Aut| class normalization.

Propagator convention used by the expansion engines: an even edge carries
i*hbar times the inverse-quadratic-form entry, an odd (ghost) edge carries
the inverse odd block with an overall factor (-1) per closed ghost cycle,
and every vertex carries i/hbar times a plain derivative tensor.  Per graph
this yields i^(V+E) (-1)^cycles hbar^(E-V) F / |Aut|.  The quoted
graph-sum normalization (-i hbar)^(E-V) differs by (-1)^(#even edges); the
convention here is fixed against closed-form Fresnel moments and validated
by the numeric quadrature oracles.
"""

from __future__ import annotations

from .graphs import ANTIGHOST, FIELD, GHOST, Graph
from .scalars import Scalar, I, ONE, ZERO


def engine_coefficient(n_vertices: int, n_edges: int, ghost_cycles: int = 0) -> Scalar:
    """i^(V+E) * (-1)^cycles; multiplies F/|Aut| at hbar power E-V."""
    c = I ** (n_vertices + n_edges)
    if ghost_cycles % 2:
        c = -c
    return c


def ghost_cycle_count(g: Graph) -> int:
    """Number of closed cycles formed by ghost-antighost edges (a tadpole is
    a cycle of length one).  Each vertex has at most one ghost and one
    antighost half-edge."""
    if g.types is None:
        return 0
    ghost_edges = [
        e
        for e in g.edges
        if {g.types[e[0]], g.types[e[1]]} == {GHOST, ANTIGHOST}
    ]
    if not ghost_edges:
        return 0
    vertex_of = {}
    for vi, b in enumerate(g.vertices):
        for h in b:
            vertex_of[h] = vi
    # union-find over vertices joined by ghost edges; each connected
    # component of the ghost subgraph is a single cycle
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = set()
    for a, b in ghost_edges:
        ra, rb = find(vertex_of[a]), find(vertex_of[b])
        if ra != rb:
            parent[ra] = rb
    for a, b in ghost_edges:
        comps.add(find(vertex_of[a]))
    return len(comps)


def evaluate_weight(graph: Graph, edge_entries, vertex_value, leaf_entries=None) -> Scalar:
    """Sum over index assignments of products of edge, leaf, and vertex
    factors.

    edge_entries(h1, h2) -> list of (i1, i2, Scalar): nonzero propagator
        entries for that edge, already oriented for (h1, h2).
    vertex_value(block, assignment) -> Scalar: tensor entry of the vertex.
    leaf_entries(h) -> list of (i, Scalar): nonzero leaf-vector entries.
    """
    edges = sorted(graph.edges)
    leaves = sorted(graph.leaves)
    assignment = {}
    total = ZERO

    def rec_leaves(li, acc):
        nonlocal total
        if li == len(leaves):
            v = acc
            for block in graph.vertices:
                v = v * vertex_value(block, assignment)
                if v.is_zero():
                    return
            total = total + v
            return
        h = leaves[li]
        for idx, val in leaf_entries(h):
            assignment[h] = idx
            rec_leaves(li + 1, acc * val)
        assignment.pop(h, None)

    def rec_edges(ei, acc):
        if ei == len(edges):
            rec_leaves(0, acc)
            return
        h1, h2 = edges[ei]
        for i1, i2, val in edge_entries(h1, h2):
            assignment[h1] = i1
            assignment[h2] = i2
            rec_edges(ei + 1, acc * val)
        assignment.pop(h1, None)
        assignment.pop(h2, None)

    rec_edges(0, ONE)
    return total


def matrix_entries_nonzero(matrix):
    """All (i, j, value) with value nonzero, for symmetric propagators."""
    out = []
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            if not v.is_zero():
                out.append((i, j, v))
    return out
