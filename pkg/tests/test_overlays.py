import logging
import unittest

import networkx as nx
from pydantic import ValidationError

from django_overlays.builders.star import sgbas_to_star
from django_overlays.builders.windows import trivial_system
from django_overlays.errors import OverlayError
from django_overlays.graphs.decomposition import TreeDecomposition, best_tree_decomposition
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import (
    Overlay,
    OverlayKind,
    as_kind,
    embed_overlay,
    lift_walk,
    restrict_overlay,
    restrict_to_induced,
    thickness_at,
    trivial_overlay,
    verify_overlay,
)

logger = logging.getLogger(__name__)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def trivial(g, r=2, kind=OverlayKind.S):
    return trivial_overlay(g, r, best_tree_decomposition(g), kind)


def mutate(o, **changes):
    fields = {name: getattr(o, name) for name in Overlay.model_fields}
    fields.update(changes)
    return Overlay(**fields)


def without_edge(g, edge):
    return Graph.from_edges(g.n, [e for e in g.edges() if e != edge])


class TestVerifyOverlay(unittest.TestCase):
    """
    Each test breaks one condition of a valid overlay of ``C_6`` and checks the
    clause the verifier reports.
    """

    def setUp(self):
        self.overlay = trivial(cycle(6))

    def assertFails(self, o, clause):
        check = verify_overlay(o)
        logger.debug("verify_overlay: %s", check)
        self.assertFalse(check.ok)
        self.assertEqual(check.clause, clause)
        return check

    def test_trivial_overlay_is_valid(self):
        self.assertTrue(verify_overlay(self.overlay).ok)
        self.assertTrue(verify_overlay(as_kind(self.overlay, OverlayKind.A)).ok)

    def test_level_zero_breaks_walks(self):
        ell = list(self.overlay.ell)
        ell[2] = 0
        check = self.assertFails(mutate(self.overlay, ell=tuple(ell)), "walk-preserving")
        self.assertEqual(check.witness, (1, 2))

    def test_missing_level_r_preimage(self):
        ell = list(self.overlay.ell)
        ell[3] = 1
        check = self.assertFails(mutate(self.overlay, ell=tuple(ell)), "neighborhood")
        self.assertEqual(check.witness, (3,))

    def test_all_levels_below_r(self):
        check = self.assertFails(mutate(self.overlay, ell=(1,) * 6), "neighborhood")
        self.assertEqual(check.witness, (0,))

    def test_level_above_r(self):
        ell = list(self.overlay.ell)
        ell[0] = 3
        self.assertFails(mutate(self.overlay, ell=tuple(ell)), "neighborhood")

    def test_negative_level(self):
        ell = list(self.overlay.ell)
        ell[4] = -1
        self.assertFails(mutate(self.overlay, ell=tuple(ell)), "neighborhood")

    def test_dropped_edge_kind_a(self):
        o = mutate(self.overlay, kind=OverlayKind.A, h=without_edge(cycle(6), (0, 1)))
        check = self.assertFails(o, "walk-preserving")
        self.assertEqual(check.witness, (0, 1))

    def test_dropped_edge_kind_s(self):
        o = mutate(self.overlay, h=without_edge(cycle(6), (0, 1)))
        self.assertFails(o, "subgraph-based")

    def test_adjacent_vertices_share_an_image(self):
        self.assertFails(mutate(self.overlay, f=(1, 1, 2, 3, 4, 5)), "homomorphism")

    def test_edge_maps_to_non_edge(self):
        check = self.assertFails(mutate(self.overlay, f=(2, 1, 2, 3, 4, 5)), "homomorphism")
        self.assertEqual(check.witness, (0, 5))

    def test_image_out_of_range(self):
        check = self.assertFails(mutate(self.overlay, f=(9, 1, 2, 3, 4, 5)), "homomorphism")
        self.assertEqual(check.witness, (0,))

    def test_non_injective_component(self):
        # x3 is a second copy of host vertex 1 hanging off x2.
        o = Overlay(
            base=path(3),
            r=1,
            kind=OverlayKind.S,
            h=path(4),
            f=(0, 1, 2, 1),
            ell=(1, 1, 1, 1),
            td=TreeDecomposition.build([[0, 1], [1, 2], [2, 3]], [-1, 0, 1]),
        )
        self.assertFails(o, "subgraph-based")
        self.assertFalse(verify_overlay(o.model_copy(update={"kind": OverlayKind.A})).ok)

    def test_copy_with_low_levels_is_an_overlay(self):
        # The same duplicated copy as kind A is fine once the copy has level 0.
        o = Overlay(
            base=path(3),
            r=1,
            kind=OverlayKind.A,
            h=path(4),
            f=(0, 1, 2, 1),
            ell=(1, 1, 1, 0),
            td=TreeDecomposition.build([[0, 1], [1, 2], [2, 3]], [-1, 0, 1]),
        )
        self.assertTrue(verify_overlay(o).ok)
        self.assertEqual(o.thickness(), (1, 2, 1))
        self.assertEqual(thickness_at(o, 1), 2)

    def test_star_overlay_is_valid(self):
        triangle = Graph.from_networkx(nx.complete_graph(3))
        system = sgbas_to_star(trivial_system(triangle, r=1))
        self.assertEqual(system.kind, OverlayKind.STAR)
        self.assertTrue(verify_overlay(system.members[0]).ok)

    def test_star_vertex_over_non_clique(self):
        triangle = Graph.from_networkx(nx.complete_graph(3))
        member = sgbas_to_star(trivial_system(triangle, r=1)).members[0]
        broken = mutate(member, h=without_edge(member.h, (0, 1)))
        check = self.assertFails(broken, "simpliciality")
        self.assertEqual(check.witness, (6,))

    def test_invalid_certificate_is_rejected(self):
        with self.assertRaises(ValidationError):
            mutate(self.overlay, td=TreeDecomposition.single_bag(range(5)))

    def test_partial_f_is_rejected(self):
        with self.assertRaises(ValidationError):
            mutate(self.overlay, f=(0, 1, 2))

    def test_star_kind_needs_star_graph(self):
        with self.assertRaises(ValidationError):
            mutate(self.overlay, kind=OverlayKind.STAR)

    def test_mutation_catalogue(self):
        with_copy = Graph.from_edges(7, cycle(6).edges())
        no_middle = without_edge(path(5), (1, 2))
        cases = [
            (
                "swapped images",
                mutate(self.overlay, f=(3, 1, 2, 0, 4, 5)),
                "homomorphism",
                (0, 1),
            ),
            (
                "cycle over a path",
                Overlay(
                    base=path(6),
                    r=1,
                    kind=OverlayKind.S,
                    h=cycle(6),
                    f=tuple(range(6)),
                    ell=(1,) * 6,
                    td=best_tree_decomposition(cycle(6)),
                ),
                "homomorphism",
                (0, 5),
            ),
            (
                "isolated copy at level r",
                mutate(
                    self.overlay,
                    h=with_copy,
                    f=self.overlay.f + (0,),
                    ell=self.overlay.ell + (2,),
                    td=best_tree_decomposition(with_copy),
                ),
                "walk-preserving",
                (6, 1),
            ),
            (
                "path level dropped",
                mutate(trivial(path(4), r=1), ell=(1, 0, 1, 1)),
                "neighborhood",
                (1,),
            ),
            (
                "level three next to level one",
                mutate(trivial(cycle(8), r=3), ell=(3, 3, 1, 3, 3, 3, 3, 3)),
                "walk-preserving",
                (1, 2),
            ),
            (
                "kind A path missing its middle edge",
                mutate(
                    trivial(path(5), r=1, kind=OverlayKind.A),
                    h=no_middle,
                    td=best_tree_decomposition(no_middle),
                ),
                "walk-preserving",
                (1, 2),
            ),
        ]
        for name, o, clause, witness in cases:
            with self.subTest(name):
                self.assertEqual(self.assertFails(o, clause).witness, witness)

    def test_malformed_overlays_are_rejected(self):
        cases = [
            {"td": TreeDecomposition.build([[0, 1, 2], [3, 4, 5]], [-1, 0])},
            {"ell": (2,) * 5},
            {"h": cycle(7)},
        ]
        for changes in cases:
            with self.subTest(fields=sorted(changes)):
                with self.assertRaises(ValidationError):
                    mutate(self.overlay, **changes)

    def test_harmless_variations(self):
        with_copy = Graph.from_edges(7, cycle(6).edges())
        cases = [
            mutate(self.overlay, f=(1, 2, 3, 4, 5, 0)),
            mutate(self.overlay, f=(0, 5, 4, 3, 2, 1)),
            mutate(
                self.overlay,
                h=with_copy,
                f=self.overlay.f + (0,),
                ell=self.overlay.ell + (0,),
                td=best_tree_decomposition(with_copy),
            ),
        ]
        for o in cases:
            with self.subTest(f=o.f):
                self.assertTrue(verify_overlay(o).ok)


class TestLiftWalk(unittest.TestCase):
    def setUp(self):
        self.overlay = trivial(cycle(6))

    def test_lift(self):
        self.assertEqual(lift_walk(self.overlay, 0, [0, 1, 2]), (0, 1, 2))
        self.assertEqual(lift_walk(self.overlay, 0, [0]), (0,))

    def test_errors(self):
        cases = [
            ((1, [0, 1]), "overlay.E001"),
            ((0, [0, 1, 2, 3]), "overlay.E002"),
            ((0, [0, 2]), "overlay.E003"),
        ]
        for (x, walk), code in cases:
            with self.subTest(code=code):
                with self.assertRaises(OverlayError) as cm:
                    lift_walk(self.overlay, x, walk)
                self.assertEqual(cm.exception.code, code)

    def test_unliftable_step(self):
        o = mutate(self.overlay, kind=OverlayKind.A, h=without_edge(cycle(6), (0, 1)))
        with self.assertRaises(OverlayError) as cm:
            lift_walk(o, 0, [0, 1])
        self.assertEqual(cm.exception.code, "overlay.E004")


class TestRestriction(unittest.TestCase):
    def test_restrict_to_spanning_path(self):
        restricted = restrict_overlay(trivial(cycle(6)), path(6))
        self.assertEqual(restricted.h, path(6))
        self.assertTrue(verify_overlay(restricted).ok)

    def test_restrict_to_non_subgraph(self):
        g2 = Graph.from_edges(6, [(0, 2)])
        with self.assertRaises(OverlayError) as cm:
            restrict_overlay(trivial(cycle(6)), g2)
        self.assertEqual(cm.exception.code, "overlay.E012")

    def test_restrict_with_bad_embedding(self):
        with self.assertRaises(OverlayError) as cm:
            restrict_overlay(trivial(cycle(6)), path(2), embedding=(0, 0))
        self.assertEqual(cm.exception.code, "overlay.E011")

    def test_restrict_to_induced(self):
        restricted = restrict_to_induced(trivial(cycle(6)), [4, 0, 5])
        self.assertEqual(restricted.base.n, 3)
        self.assertEqual(restricted.f, (0, 1, 2))
        self.assertEqual(restricted.h.m, 2)
        self.assertTrue(verify_overlay(restricted).ok)

    def test_restrict_star_to_induced(self):
        triangle = Graph.from_networkx(nx.complete_graph(3))
        member = sgbas_to_star(trivial_system(triangle, r=1)).members[0]
        restricted = restrict_to_induced(member, [0, 1])
        self.assertEqual(restricted.star.star.n, 5)
        self.assertEqual(restricted.h.n, 5)
        self.assertTrue(verify_overlay(restricted).ok)

    def test_restrict_overlay_rejects_star(self):
        triangle = Graph.from_networkx(nx.complete_graph(3))
        member = sgbas_to_star(trivial_system(triangle, r=1)).members[0]
        with self.assertRaises(OverlayError) as cm:
            restrict_overlay(member, triangle)
        self.assertEqual(cm.exception.code, "overlay.E010")


class TestConstruction(unittest.TestCase):
    def test_trivial_overlay_errors(self):
        g = path(4)
        with self.assertRaises(OverlayError) as cm:
            trivial_overlay(g, 1, TreeDecomposition.single_bag([0, 1]))
        self.assertEqual(cm.exception.code, "overlay.E020")
        with self.assertRaises(OverlayError) as cm:
            trivial_overlay(g, 1, best_tree_decomposition(g), OverlayKind.STAR)
        self.assertEqual(cm.exception.code, "overlay.E021")

    def test_as_kind(self):
        o = trivial(path(3))
        self.assertIs(as_kind(o, OverlayKind.S), o)
        relabeled = as_kind(o, OverlayKind.A)
        self.assertEqual(relabeled.kind, OverlayKind.A)
        with self.assertRaises(OverlayError) as cm:
            as_kind(relabeled, OverlayKind.S)
        self.assertEqual(cm.exception.code, "overlay.E030")

    def test_embed_overlay(self):
        embedded = embed_overlay(trivial(path(3), r=1), path(5), (1, 2, 3), ell=(0, 1, 0))
        self.assertEqual(embedded.base, path(5))
        self.assertEqual(embedded.f, (1, 2, 3))
        check = verify_overlay(embedded)
        self.assertFalse(check.ok)
        self.assertEqual(check.clause, "neighborhood")
