import random

import pytest

from oscint.errors import TooLarge
from oscint.graphs import (
    Graph,
    TypeSystem,
    aut_order,
    canonical_key,
    enumerate_graphs,
)


def theta():
    # two trivalent vertices joined by three parallel edges
    return Graph(6, [(0, 1, 2), (3, 4, 5)], [(0, 3), (1, 4), (2, 5)])


def dumbbell():
    # two trivalent vertices, a self-loop on each, one connecting edge
    return Graph(6, [(0, 1, 2), (3, 4, 5)], [(0, 1), (2, 3), (4, 5)])


def figure_eight():
    return Graph(4, [(0, 1, 2, 3)], [(0, 1), (2, 3)])


def two_leaf_ladder():
    # two trivalent vertices, two parallel edges, one leaf on each vertex
    return Graph(6, [(0, 1, 2), (3, 4, 5)], [(0, 3), (1, 4)], leaves=[2, 5])


class TestAutOrder:
    def test_theta(self):
        assert aut_order(theta()) == 12

    def test_two_leaf_ladder(self):
        assert aut_order(two_leaf_ladder()) == 4

    def test_figure_eight(self):
        # brute force over the 4! permutations stabilizing {{0,1},{2,3}}
        from itertools import permutations

        count = 0
        for p in permutations(range(4)):
            edges = {tuple(sorted((p[0], p[1]))), tuple(sorted((p[2], p[3])))}
            if edges == {(0, 1), (2, 3)}:
                count += 1
        assert count == 8
        assert aut_order(figure_eight()) == 8

    def test_dumbbell(self):
        # self-loop swap at each vertex (2*2) times the vertex swap
        assert aut_order(dumbbell()) == 8

    def test_too_large(self):
        g = Graph(4, [(0, 1, 2, 3)], [(0, 1), (2, 3)])
        with pytest.raises(TooLarge):
            aut_order(g, bound=3)


class TestCanonicalKey:
    def test_relabeled_theta(self):
        g2 = Graph(6, [(5, 3, 1), (0, 2, 4)], [(5, 0), (3, 2), (1, 4)])
        assert canonical_key(g2) == canonical_key(theta())

    def test_theta_vs_dumbbell(self):
        assert canonical_key(theta()) != canonical_key(dumbbell())

    def test_empty_graph(self):
        g = Graph(0, [], [])
        assert canonical_key(g) == b""

    def test_key_matches_enumeration(self):
        classes = enumerate_graphs(1, degrees={3}, allow_tadpoles=True)
        keys = {c.canonical_key for c in classes}
        assert canonical_key(theta()) in keys
        assert canonical_key(dumbbell()) in keys


class TestEnumeration:
    def test_excess_one_trivalent(self):
        classes = enumerate_graphs(1, degrees={3}, allow_tadpoles=True)
        assert len(classes) == 2
        assert {c.aut_order for c in classes} == {12, 8}

    def test_excess_one_no_tadpoles(self):
        classes = enumerate_graphs(1, degrees={3}, allow_tadpoles=False)
        assert len(classes) == 1
        assert classes[0].aut_order == 12

    def test_degrees_three_four(self):
        classes = enumerate_graphs(1, degrees={3, 4}, allow_tadpoles=True)
        assert len(classes) == 3
        assert {c.aut_order for c in classes} == {12, 8}  # fig-8 also has 8

    def test_strategies_agree(self):
        a = enumerate_graphs(2, degrees={3}, allow_tadpoles=False, strategy="orbit")
        b = enumerate_graphs(2, degrees={3}, allow_tadpoles=False, strategy="keys")
        assert [c.canonical_key for c in a] == [c.canonical_key for c in b]
        assert [c.aut_order for c in a] == [c.aut_order for c in b]

    def test_loop_count_identity(self):
        for c in enumerate_graphs(1, degrees={3, 4}, allow_leaves=True, max_leaves=1):
            g = c.representative
            assert g.loop_count == g.excess + g.component_count()

    def test_orbit_stabilizer_labeled_count(self):
        # sum over classes of (labeled representatives) equals the number of
        # labeled graphs: |stab| / |Aut| summed over classes = #states
        from oscint.graphs import _iter_stabilizer, _matchings

        vertices = ((0, 1, 2), (3, 4, 5))
        types = ("field",) * 6
        block_of = {h: (0 if h < 3 else 1) for h in range(6)}
        states = set(
            _matchings(list(range(6)), types, frozenset({frozenset({"field"})}), block_of, True)
        )
        group = list(_iter_stabilizer(vertices, types))
        classes = enumerate_graphs(1, degrees={3}, allow_tadpoles=True)
        total = sum(len(group) // c.aut_order for c in classes)
        assert total == len(states) == 15

    def test_enumeration_includes_disconnected(self):
        classes = enumerate_graphs(2, degrees={3}, allow_tadpoles=False)
        # theta (excess 1), K4 + doubled-cycle + theta|theta (excess 2)
        by_excess = {}
        for c in classes:
            by_excess.setdefault(c.excess, []).append(c)
        assert len(by_excess[1]) == 1
        assert any(c.representative.component_count() == 2 for c in by_excess[2])

    def test_two_leaf_classes(self):
        classes = enumerate_graphs(
            0, degrees={3}, allow_leaves=True, max_leaves=2, allow_tadpoles=False
        )
        ladders = [c for c in classes if len(c.representative.leaves) == 2]
        assert len(ladders) == 1
        assert ladders[0].aut_order == 4
        assert ladders[0].loop_count == 1


class TestTyped:
    def test_ghost_pairing_enforced(self):
        with pytest.raises(ValueError):
            Graph(
                4,
                [(0, 1), (2, 3)],
                [(0, 2), (1, 3)],
                types=["ghost", "field", "ghost", "field"],
            )

    def test_typed_enumeration_ghost_cycle(self):
        ts = TypeSystem(
            vertex_kinds=(("antighost", "field", "ghost"),),
            allowed_pairs=frozenset(
                {frozenset({"field"}), frozenset({"ghost", "antighost"})}
            ),
        )
        classes = enumerate_graphs(1, typed=ts, allow_tadpoles=True)
        # two ghost vertices: ghost 2-cycle + field edge, or two ghost
        # tadpoles + field edge
        assert len(classes) == 2
        assert all(c.aut_order == 2 for c in classes)


class TestJson:
    def test_roundtrip(self):
        g = two_leaf_ladder()
        j = g.to_json()
        g2 = Graph.from_json(j)
        assert canonical_key(g) == canonical_key(g2)
        assert g2.leaves == g.leaves

    def test_order_insensitive(self):
        j1 = {
            "half_edges": 6,
            "vertices": [[3, 4, 5], [0, 1, 2]],
            "edges": [[4, 1], [0, 3], [2, 5]],
            "leaves": [],
        }
        assert canonical_key(Graph.from_json(j1)) == canonical_key(theta())
