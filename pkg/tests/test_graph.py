# AGPL Notice: This file is part of django-overlays.
# Copyright (C) 2025 Vincent Veselosky
#
# This package is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This package is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this package.  If not, see <https://www.gnu.org/licenses/>.
import logging
import unittest

import networkx as nx
from pydantic import ValidationError

from django_overlays.errors import GraphError
from django_overlays.graphs.cliques import (
    degeneracy_and_cliques,
    degeneracy_ordering,
    max_clique_size,
    star_graph,
)
from django_overlays.graphs.decomposition import (
    TreeDecomposition,
    best_tree_decomposition,
    depth_band_layering,
    heuristic_tree_decomposition,
    layered_width,
    separator_tree_decomposition,
    separator_width_bound,
)
from django_overlays.graphs.generators import generate_graph
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import (
    Layering,
    bfs_layering,
    is_shadow_complete,
    restrict_layering,
    shadow_violation,
    verify_layering,
)
from django_overlays.graphs.separators import balanced_separator, is_balanced

logger = logging.getLogger(__name__)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


class TestGraph(unittest.TestCase):
    def test_from_edges_merges_duplicates(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (1, 0)])
        self.assertEqual(g.m, 2)
        self.assertEqual(g.neighbors(1), (0, 2))
        self.assertEqual(list(g.edges()), [(0, 1), (1, 2)])

    def test_from_edges_rejects_self_loop(self):
        with self.assertRaises(GraphError) as cm:
            Graph.from_edges(3, [(1, 1)])
        self.assertEqual(cm.exception.code, "graph.E002")
        self.assertEqual(cm.exception.witness, [1])

    def test_from_edges_rejects_out_of_range(self):
        with self.assertRaises(GraphError) as cm:
            Graph.from_edges(2, [(0, 2)])
        self.assertEqual(cm.exception.code, "graph.E003")

    def test_negative_vertex_count(self):
        with self.assertRaises(GraphError) as cm:
            Graph.from_edges(-1, [])
        self.assertEqual(cm.exception.code, "graph.E001")

    def test_asymmetric_adjacency_is_invalid(self):
        with self.assertRaises(ValidationError):
            Graph(n=2, adjacency=((1,), ()))

    def test_unsorted_adjacency_is_invalid(self):
        with self.assertRaises(ValidationError):
            Graph(n=3, adjacency=((2, 1), (0,), (0,)))

    def test_content_hash_ignores_edge_order(self):
        a = Graph.from_edges(4, [(0, 1), (2, 3), (1, 2)])
        b = Graph.from_edges(4, [(3, 2), (1, 0), (2, 1)])
        self.assertEqual(a.content_hash, b.content_hash)
        self.assertNotEqual(a.content_hash, path(5).content_hash)

    def test_induced_subgraph_renumbers_in_order(self):
        sub, embedding = path(5).induced_subgraph([4, 2, 3])
        self.assertEqual(embedding, (2, 3, 4))
        self.assertEqual(list(sub.edges()), [(0, 1), (1, 2)])

    def test_components(self):
        g = Graph.from_edges(5, [(0, 1), (3, 4)])
        self.assertEqual(g.components(), [(0, 1), (2,), (3, 4)])
        self.assertEqual(g.components([1, 3, 4]), [(1,), (3, 4)])
        self.assertEqual(g.components([]), [])
        self.assertEqual(g.components([4, 0, 3, 2]), [(0,), (2,), (3, 4)])
        self.assertFalse(g.is_connected())
        self.assertTrue(path(5).is_connected())

    def test_networkx_round_trip_keeps_edges(self):
        g = cycle(6)
        self.assertEqual(Graph.from_networkx(g.to_networkx()), g)

    def test_is_clique(self):
        g = Graph.from_networkx(nx.complete_graph(4))
        self.assertTrue(g.is_clique([0, 1, 3]))
        self.assertFalse(path(3).is_clique([0, 1, 2]))


class TestLayering(unittest.TestCase):
    def test_bfs_layering_of_path(self):
        l = bfs_layering(path(4), [0])
        self.assertEqual(l.layers, ((0,), (1,), (2,), (3,)))
        self.assertEqual(l.depth, 4)
        self.assertEqual(l.layer(2), (1,))

    def test_unreached_components_are_appended(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        l = bfs_layering(g, [0])
        self.assertEqual(l.layers, ((0,), (1,), (2,), (3,)))
        self.assertEqual(verify_layering(g, l), (True, None))

    def test_bfs_layering_needs_valid_roots(self):
        with self.assertRaises(GraphError) as cm:
            bfs_layering(path(3), [])
        self.assertEqual(cm.exception.code, "graph.E010")
        with self.assertRaises(GraphError) as cm:
            bfs_layering(path(3), [7])
        self.assertEqual(cm.exception.code, "graph.E011")

    def test_verify_layering_reports_long_edge(self):
        l = Layering(layers=((0,), (1,), (2,), (3,)))
        self.assertEqual(verify_layering(cycle(4), l), (False, (0, 3)))

    def test_verify_layering_rejects_partial_partition(self):
        l = Layering(layers=((0,), (1,)))
        with self.assertRaises(GraphError) as cm:
            verify_layering(path(3), l)
        self.assertEqual(cm.exception.code, "graph.E012")

    def test_shadow_violation_on_cycle(self):
        violation = shadow_violation(cycle(4), bfs_layering(cycle(4), [0]))
        self.assertIsNotNone(violation)
        self.assertEqual(violation.layer, 2)
        self.assertEqual(violation.component, (2,))
        self.assertEqual(violation.non_adjacent, (1, 3))

    def test_trees_are_shadow_complete(self):
        for seed in range(5):
            tree = generate_graph("random_tree", n=15, seed=seed)
            self.assertTrue(is_shadow_complete(tree, bfs_layering(tree, [0])))

    def test_restrict_layering(self):
        l = bfs_layering(path(5), [0])
        restricted = restrict_layering(l, (2, 3), first=2)
        self.assertEqual(restricted.layers, ((), (0,), (1,), ()))
        stripped = restrict_layering(l, (2, 3), first=2, strip=True)
        self.assertEqual(stripped.layers, ((0,), (1,)))

    def test_restrict_layering_outside_window(self):
        l = bfs_layering(path(5), [0])
        with self.assertRaises(GraphError) as cm:
            restrict_layering(l, (0, 1), first=2, last=3)
        self.assertEqual(cm.exception.code, "graph.E013")


class TestCliques(unittest.TestCase):
    def test_triangle(self):
        triangle = Graph.from_networkx(nx.complete_graph(3))
        degeneracy = degeneracy_and_cliques(triangle)
        self.assertEqual(degeneracy.degeneracy, 2)
        self.assertEqual(len(degeneracy.cliques), 7)
        self.assertEqual(degeneracy.cliques[0], (0,))
        self.assertEqual(degeneracy.cliques[-1], (0, 1, 2))

    def test_degeneracy_ordering_of_tree(self):
        ordering, degeneracy = degeneracy_ordering(path(6))
        self.assertEqual(degeneracy, 1)
        self.assertEqual(sorted(ordering), list(range(6)))

    def test_clique_cap(self):
        k4 = Graph.from_networkx(nx.complete_graph(4))
        with self.assertRaises(GraphError) as cm:
            degeneracy_and_cliques(k4, cap=5)
        self.assertEqual(cm.exception.code, "graph.E020")

    def test_max_clique_size_of_diag_grid(self):
        self.assertEqual(max_clique_size(generate_graph("diag_grid", n=2)), 8)

    def test_star_graph_of_path(self):
        star = star_graph(path(3))
        self.assertEqual(star.cliques, ((0,), (1,), (2,), (0, 1), (1, 2)))
        self.assertEqual(star.star.n, 8)
        self.assertEqual(star.star_vertex((2, 1)), 7)
        self.assertEqual(star.star.neighbors(7), (1, 2))
        self.assertTrue(star.is_star_vertex(3))
        self.assertEqual(star.clique_of(6), (0, 1))

    def test_star_vertex_of_non_clique(self):
        with self.assertRaises(GraphError) as cm:
            star_graph(path(3)).star_vertex((0, 2))
        self.assertEqual(cm.exception.code, "graph.E022")

    def test_embedding_from_subgraph(self):
        g = path(4)
        sub, embedding = g.induced_subgraph([2, 3])
        host = star_graph(g)
        mapped = host.embedding_from(star_graph(sub), embedding)
        self.assertEqual(mapped[:2], (2, 3))
        self.assertEqual(host.clique_of(mapped[-1]), (2, 3))


class TestSeparators(unittest.TestCase):
    def test_is_balanced(self):
        self.assertTrue(is_balanced(9, 6, 2))
        self.assertFalse(is_balanced(9, 7, 1))

    def test_exact_separator_of_path_is_the_middle(self):
        separation = balanced_separator(path(7), budget=1)
        self.assertEqual(separation.separator, (3,))
        self.assertTrue(separation.balanced)
        self.assertTrue(separation.within_budget)
        left, right = separation.sides()
        self.assertEqual(sorted(left + right), [0, 1, 2, 4, 5, 6])

    def test_exact_separator_of_small_grid_cuts_a_corner(self):
        # Two vertices around a corner beat the three-vertex middle row.
        g = generate_graph("grid", a=3, b=3)
        separation = balanced_separator(g, budget=3)
        self.assertEqual(separation.separator, (1, 3))
        self.assertTrue(separation.balanced)
        self.assertEqual(sorted(len(side) for side in separation.sides()), [1, 6])

    def test_heuristic_separator_is_balanced(self):
        g = generate_graph("grid", a=6, b=6)
        separation = balanced_separator(g, budget=6, threshold=0)
        left, right = separation.sides()
        self.assertTrue(separation.balanced)
        self.assertTrue(is_balanced(g.n, len(left), len(right)))
        self.assertFalse(
            any(g.has_edge(u, v) for u in left for v in right),
            "exclusive sides must not be adjacent",
        )

    def test_single_vertex(self):
        separation = balanced_separator(Graph.from_edges(1, []), budget=0)
        self.assertEqual(separation.separator, ())


class TestDecomposition(unittest.TestCase):
    def test_separator_decomposition_of_path(self):
        g = path(7)
        td = separator_tree_decomposition(g, s=1)
        self.assertTrue(td.is_valid_for(g))
        self.assertLessEqual(td.width, separator_width_bound(1, 7))

    def test_separator_width_bound(self):
        self.assertEqual(separator_width_bound(1, 1), 0)
        self.assertEqual(separator_width_bound(2, 7), 10)

    def test_heuristic_decomposition_of_tree(self):
        tree = generate_graph("random_tree", n=12, seed=1)
        td = heuristic_tree_decomposition(tree)
        self.assertEqual(td.width, 1)
        self.assertTrue(td.is_valid_for(tree))

    def test_unknown_heuristic(self):
        with self.assertRaises(GraphError) as cm:
            heuristic_tree_decomposition(path(3), method="magic")
        self.assertEqual(cm.exception.code, "graph.E038")

    def test_best_decomposition_of_cycle(self):
        g = cycle(24)
        td = best_tree_decomposition(g)
        self.assertTrue(td.is_valid_for(g))
        self.assertEqual(td.width, 2)

    def test_rerooting_a_chain(self):
        td = TreeDecomposition.build([[0, 1], [1, 2], [2, 3]], [-1, 0, 1])
        self.assertEqual(td.subtree_depths(), {0: 0, 1: 1, 2: 1, 3: 0})
        self.assertEqual(td.bag_containing([2, 1]), 1)
        self.assertIsNone(td.bag_containing([0, 3]))
        rerooted = td.rerooted(2)
        self.assertEqual(rerooted.root, 2)
        self.assertEqual(rerooted.depths, {2: 0, 1: 1, 0: 2})
        self.assertTrue(rerooted.is_valid_for(path(4)))

    def test_validate_for_reports_missing_edge(self):
        td = TreeDecomposition.build([[0, 1], [2]], [-1, 0])
        with self.assertRaises(GraphError) as cm:
            td.validate_for(path(3))
        self.assertEqual(cm.exception.code, "graph.E033")
        self.assertEqual(cm.exception.witness, [1, 2])

    def test_declared_width_must_match(self):
        with self.assertRaises(ValidationError):
            TreeDecomposition(bags=((0, 1),), parent=(-1,), width=3, adhesion=0)

    def test_depth_band_layering_is_a_layering(self):
        g = path(9)
        td = separator_tree_decomposition(g).with_depth_bound()
        l = depth_band_layering(g, td)
        self.assertEqual(verify_layering(g, l), (True, None))
        self.assertGreaterEqual(layered_width(td, l), 1)

    def test_depth_band_layering_needs_a_bound(self):
        g = path(4)
        with self.assertRaises(GraphError) as cm:
            depth_band_layering(g, separator_tree_decomposition(g))
        self.assertEqual(cm.exception.code, "graph.E036")


class TestGenerators(unittest.TestCase):
    def test_sizes(self):
        cases = [
            (("path",), {"n": 1}, 1, 0),
            (("cycle",), {"n": 5}, 5, 5),
            (("grid",), {"a": 2, "b": 3}, 6, 7),
            (("apexed_grid",), {"n": 2}, 5, 8),
            (("diag_grid",), {"n": 2}, 8, 28),
            (("random_tree",), {"n": 10, "seed": 3}, 10, 9),
        ]
        for args, kwargs, n, m in cases:
            with self.subTest(family=args[0]):
                g = generate_graph(*args, **kwargs)
                self.assertEqual((g.n, g.m), (n, m))

    def test_apex_has_the_last_id(self):
        g = generate_graph("apexed_grid", n=3)
        self.assertEqual(g.degree(g.n - 1), 9)

    def test_random_tree_is_seeded(self):
        a = generate_graph("random_tree", n=20, seed=4)
        b = generate_graph("random_tree", n=20, seed=4)
        self.assertEqual(a, b)
        self.assertTrue(a.is_connected())

    def test_errors(self):
        with self.assertRaises(GraphError) as cm:
            generate_graph("path", n=0)
        self.assertEqual(cm.exception.code, "graph.E060")
        with self.assertRaises(GraphError) as cm:
            generate_graph("hypercube", n=3)
        self.assertEqual(cm.exception.code, "graph.E061")
