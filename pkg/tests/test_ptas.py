import logging
import unittest
from fractions import Fraction
from unittest import mock

from django_overlays.builders.config import BuilderConfig, build_system
from django_overlays.builders.windows import trivial_system
from django_overlays.errors import CertificateError, PtasError
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.generators import generate_graph
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import Overlay, OverlayKind
from django_overlays.overlays.system import OverlaySystem, compose_systems
from django_overlays.pipeline import solve_exact
from django_overlays.ptas.engines import (
    ptas_max_distance_independent,
    ptas_max_independent_set,
    ptas_min_r_dominating,
    ptas_s_clique_cover,
)
from django_overlays.solvers.predicates import is_distance_independent, r_dominates

logger = logging.getLogger(__name__)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


class TestIndependentSets(unittest.TestCase):
    def test_mis_on_cycle(self):
        g = cycle(5)
        report = ptas_max_independent_set(g, trivial_system(g, 1), k=2)
        self.assertEqual(report.problem, "mis")
        self.assertEqual(report.r, 2)
        self.assertEqual(report.value, 2)
        self.assertEqual(report.epsilon, Fraction(1, 2))
        self.assertEqual(report.guarantee, Fraction(1, 2))
        self.assertTrue(report.maximize)
        self.assertTrue(report.meets_guarantee(2))
        self.assertTrue(is_distance_independent(g, report.solution, 2))

    def test_distance_independent_on_windowed_path(self):
        g = path(20)
        system = build_system(g, BuilderConfig(builder="layering", r=1, k=1))
        report = ptas_max_distance_independent(g, system, r=2, k=1)
        self.assertEqual(report.problem, "dist-is")
        self.assertEqual(report.system_size, 6)
        self.assertEqual(len(report.per_overlay_values), 6)
        self.assertEqual(report.value, max(report.per_overlay_values))
        self.assertEqual(report.value, report.per_overlay_values[report.chosen_overlay_index])
        self.assertLessEqual(report.value, 10)
        self.assertTrue(report.meets_guarantee(10))
        self.assertTrue(is_distance_independent(g, report.solution, 2))

    def test_near_monotonicity_constant(self):
        g = cycle(12)
        report = ptas_max_distance_independent(g, trivial_system(g, 2), r=2, k=4, s=1)
        self.assertEqual(report.epsilon, Fraction(1, 2))
        self.assertEqual(report.value, 6)

    def test_radius_too_small(self):
        g = cycle(5)
        with self.assertRaises(PtasError) as cm:
            ptas_max_distance_independent(g, trivial_system(g, 1), r=3, k=1)
        self.assertEqual(cm.exception.code, "ptas.E006")

    def test_certificate_failure(self):
        g = cycle(5)
        with mock.patch(
            "django_overlays.ptas.engines.solve_distance_independent",
            return_value=(0, 1, 2, 3, 4),
        ):
            with self.assertRaises(CertificateError) as cm:
                ptas_max_independent_set(g, trivial_system(g, 1), k=1)
        self.assertEqual(cm.exception.code, "ptas.E010")
        self.assertIsInstance(cm.exception, PtasError)


class TestDominatingSets(unittest.TestCase):
    def test_exact_on_short_path(self):
        g = path(10)
        system = build_system(g, BuilderConfig(builder="layering", r=1, k=2))
        self.assertEqual(system.size, 1)
        report = ptas_min_r_dominating(g, system, r=1, k=2)
        self.assertEqual(report.value, 4)
        self.assertEqual(report.guarantee, Fraction(3, 2))
        self.assertFalse(report.maximize)

    def test_windowed_path(self):
        g = path(20)
        system = build_system(g, BuilderConfig(builder="layering", r=1, k=1))
        report = ptas_min_r_dominating(g, system, r=1, k=1)
        self.assertTrue(r_dominates(g, report.solution, g.vertices, 1))
        self.assertEqual(report.max_thickness, Fraction(4, 3))
        self.assertGreaterEqual(report.value, 7)
        self.assertTrue(report.meets_guarantee(7))
        self.assertEqual(report.value, min(report.per_overlay_values))

    def test_report_serializes_fractions(self):
        g = path(10)
        report = ptas_min_r_dominating(g, trivial_system(g, 2), r=2, k=2)
        dumped = report.model_dump(mode="json")
        self.assertEqual(dumped["epsilon"], "1/2")
        self.assertEqual(dumped["guarantee"], "3/2")
        self.assertEqual(dumped["max_thickness"], "1")
        self.assertEqual(dumped["wall_time"], 0.0)

    def test_radius_too_small(self):
        g = path(10)
        with self.assertRaises(PtasError) as cm:
            ptas_min_r_dominating(g, trivial_system(g, 1), r=2, k=1)
        self.assertEqual(cm.exception.code, "ptas.E007")

    def test_star_at_radius_two(self):
        g = Graph.from_edges(23, [(0, leaf) for leaf in range(1, 23)])
        system = build_system(g, BuilderConfig(builder="layering", r=2, k=1))
        self.assertEqual(system.declared_tw, 1)
        report = ptas_min_r_dominating(g, system, r=2, k=1)
        self.assertEqual(report.value, 1)
        self.assertTrue(r_dominates(g, report.solution, g.vertices, 2))

    def test_apexed_grid_at_radius_two(self):
        g = generate_graph("apexed_grid", n=5)
        system = build_system(g, BuilderConfig(builder="layering", r=2, k=1))
        report = ptas_min_r_dominating(g, system, r=2, k=1)
        self.assertEqual(report.value, 1)
        self.assertEqual(len(solve_exact(g, "rdom", r=2)), 1)


class TestCliqueCover(unittest.TestCase):
    def test_edge_cover_of_cycle(self):
        g = cycle(5)
        system = build_system(g, BuilderConfig(builder="star"))
        report = ptas_s_clique_cover(g, system, s=2, k=1)
        self.assertEqual(report.problem, "cliquecover")
        self.assertEqual(report.value, 3)
        self.assertTrue(all(0 <= v < g.n for v in report.solution))

    def test_triangle_cover(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
        system = build_system(g, BuilderConfig(builder="star"))
        report = ptas_s_clique_cover(g, system, s=3, k=1)
        self.assertEqual(report.solution, (2,))

    def test_singletons(self):
        g = path(4)
        system = build_system(g, BuilderConfig(builder="star"))
        self.assertEqual(ptas_s_clique_cover(g, system, s=1, k=1).value, 4)

    def test_s_must_be_positive(self):
        g = path(4)
        system = build_system(g, BuilderConfig(builder="star"))
        with self.assertRaises(PtasError) as cm:
            ptas_s_clique_cover(g, system, s=0, k=1)
        self.assertEqual(cm.exception.code, "ptas.E008")

    def test_radius_must_be_one(self):
        g = path(4)
        system = build_system(g, BuilderConfig(builder="star", r=2))
        with self.assertRaises(PtasError) as cm:
            ptas_s_clique_cover(g, system, s=2, k=1)
        self.assertEqual(cm.exception.code, "ptas.E009")


class TestSystemChecks(unittest.TestCase):
    def setUp(self):
        self.g = cycle(6)
        self.system = trivial_system(self.g, 2)

    def assertPtasError(self, code, call, *args, **kwargs):
        with self.assertRaises(PtasError) as cm:
            call(*args, **kwargs)
        self.assertEqual(cm.exception.code, code)
        return cm.exception

    def test_k_must_be_positive(self):
        self.assertPtasError("ptas.E001", ptas_min_r_dominating, self.g, self.system, 1, 0)

    def test_system_of_another_graph(self):
        other = trivial_system(path(6), 2)
        self.assertPtasError("ptas.E002", ptas_min_r_dominating, self.g, other, 1, 1)

    def test_kind(self):
        star = build_system(self.g, BuilderConfig(builder="star", r=2))
        self.assertPtasError("ptas.E003", ptas_min_r_dominating, self.g, star, 1, 1)
        self.assertPtasError("ptas.E003", ptas_s_clique_cover, self.g, self.system, 2, 1)

    def test_too_thick(self):
        thick = compose_systems([self.system, self.system])
        self.assertPtasError("ptas.E004", ptas_min_r_dominating, self.g, thick, 1, 2)

    def test_counting_bound(self):
        # The second member covers only vertex 0.
        sparse = Overlay(
            base=self.g,
            r=2,
            kind=OverlayKind.S,
            h=Graph.from_edges(1, []),
            f=(0,),
            ell=(2,),
            td=TreeDecomposition.single_bag([0]),
        )
        system = OverlaySystem(
            members=(self.system.members[0], sparse),
            declared_tw=self.system.declared_tw,
            declared_thickness=Fraction(1),
        )
        error = self.assertPtasError(
            "ptas.E005", ptas_min_r_dominating, self.g, system, 1, 3
        )
        self.assertEqual(error.witness, [1])


class TestReport(unittest.TestCase):
    def test_ratio_against(self):
        g = path(10)
        report = ptas_min_r_dominating(g, trivial_system(g, 1), r=1, k=1)
        self.assertEqual(report.ratio_against(4), 1)
        self.assertEqual(report.ratio_against(2), 2)
        empty = report.model_copy(update={"value": 0})
        self.assertEqual(empty.ratio_against(0), 1)


class TestAcrossFamilies(unittest.TestCase):
    """Every answer is feasible and within its guarantee on the desk-scale families."""

    def test_dominating_sets(self):
        graphs = [
            generate_graph("grid", a=4, b=4),
            generate_graph("apexed_grid", n=3),
            generate_graph("random_tree", n=14, seed=7),
            cycle(14),
        ]
        for g in graphs:
            with self.subTest(graph=repr(g)):
                system = build_system(g, BuilderConfig(builder="layering", r=1, k=1))
                report = ptas_min_r_dominating(g, system, r=1, k=1)
                opt = len(solve_exact(g, "rdom", 1, 2))
                self.assertTrue(report.meets_guarantee(opt), (report.value, opt))
