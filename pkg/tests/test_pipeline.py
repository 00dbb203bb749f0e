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
import json
import logging
import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings
from pydantic import ValidationError

from django_overlays.builders.config import BuilderName
from django_overlays.errors import PipelineError
from django_overlays.graphs.formats import graph_to_gr, json_to_graph
from django_overlays.graphs.generators import generate_graph
from django_overlays.graphs.graph import Graph
from django_overlays.pipeline import (
    PipelineConfig,
    dump_report,
    load_pipeline_config,
    run_pipeline,
    solve_exact,
    toml_to_pipeline_config,
)

logger = logging.getLogger(__name__)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


class PipelineTestCase(SimpleTestCase):
    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.base_path = Path(self.temp_dir.name)
        logger.debug(f"Temporary directory created at: {self.base_path}")

    def tearDown(self):
        self.temp_dir.cleanup()

    def write_graph(self, g, name="graph.gr"):
        graph_path = self.base_path / name
        graph_path.write_text(graph_to_gr(g), encoding="utf-8")
        return graph_path

    def run_step(self, **data):
        return run_pipeline(PipelineConfig.model_validate(data))


class TestPipelineConfig(PipelineTestCase):
    def test_required_inputs(self):
        cases = [
            {"command": "gen"},
            {"command": "layer"},
            {"command": "verify", "input": str(self.write_graph(path(3)))},
            {"command": "solve", "input": str(self.write_graph(path(3)))},
        ]
        for data in cases:
            with self.subTest(data=data):
                with self.assertRaises(ValidationError):
                    PipelineConfig.model_validate(data)

    def test_invalid_values(self):
        cases = [
            {"command": "gen", "family": "hypercube"},
            {"command": "layer", "input": str(self.base_path / "missing.gr")},
            {"command": "gen", "family": "path", "colour": "red"},
            {"command": "solve", "input": str(self.write_graph(path(3))), "problem": "tsp"},
            {"command": "gen", "family": "path", "k": 0},
        ]
        for data in cases:
            with self.subTest(data=data):
                with self.assertRaises(ValidationError):
                    PipelineConfig.model_validate(data)

    def test_resolved_seed(self):
        cfg = PipelineConfig(command="gen", family="path", n=3)
        self.assertEqual(cfg.resolved_seed, 0)
        with override_settings(OVERLAYS_DEFAULT_SEED=5):
            self.assertEqual(cfg.resolved_seed, 5)
        self.assertEqual(PipelineConfig(command="gen", family="path", seed=9).resolved_seed, 9)

    def test_builder_file_wins_and_r_k_override(self):
        builder_path = self.base_path / "builder.toml"
        builder_path.write_text('builder = "trivial"\nr = 3\nk = 4\n', encoding="utf-8")
        cfg = PipelineConfig(
            command="build",
            input=self.write_graph(path(4)),
            builder_file=builder_path,
            r=2,
            k=1,
        )
        builder = cfg.resolved_builder()
        self.assertEqual(builder.builder, BuilderName.TRIVIAL)
        self.assertEqual((builder.r, builder.k), (2, 1))
        self.assertEqual(cfg.resolved()["builder"]["builder"], "trivial")

    def test_toml_paths_are_relative_to_the_file(self):
        self.write_graph(path(5), "g.gr")
        pipeline_path = self.base_path / "pipeline.toml"
        pipeline_path.write_text(
            'command = "solve"\ninput = "g.gr"\nproblem = "rdom"\n', encoding="utf-8"
        )
        cfg = load_pipeline_config(pipeline_path)
        self.assertEqual(cfg.input, self.base_path / "g.gr")
        with self.assertRaises(ValidationError):
            toml_to_pipeline_config('command = "solve"\ninput = "g.gr"\nproblem = "rdom"\n')

    def test_json_pipeline_file(self):
        pipeline_path = self.base_path / "pipeline.json"
        pipeline_path.write_text(
            json.dumps({"command": "gen", "family": "cycle", "n": 4}), encoding="utf-8"
        )
        self.assertEqual(load_pipeline_config(pipeline_path).family, "cycle")
        with self.assertRaises(FileNotFoundError):
            load_pipeline_config(self.base_path / "missing.toml")

    def test_dump_report_is_stable(self):
        self.assertEqual(dump_report({"b": 1, "a": [1, 2]}), dump_report({"a": [1, 2], "b": 1}))


class TestGenAndLayer(PipelineTestCase):
    def test_gen_writes_gr(self):
        output = self.base_path / "grid.gr"
        result = self.run_step(command="gen", family="grid", a=3, b=3, output=str(output))
        self.assertEqual(result.artifact.splitlines()[0], "p tw 9 12")
        self.assertEqual(output.read_text(encoding="utf-8"), result.artifact)
        self.assertEqual(result.report["graph"]["n"], 9)
        self.assertEqual(result.report["config"]["seed"], 0)
        self.assertEqual(result.exit_code, 0)

    def test_gen_json_is_seeded(self):
        result = self.run_step(command="gen", family="random_tree", n=12, seed=3, format="json")
        self.assertEqual(json_to_graph(result.artifact), generate_graph("random_tree", n=12, seed=3))
        self.assertEqual(result.report["config"]["seed"], 3)

    def test_layer(self):
        result = self.run_step(command="layer", input=str(self.write_graph(path(4))))
        self.assertEqual(result.artifact, "1 1\n2 2\n3 3\n4 4\n")
        self.assertEqual(result.report["layering"], {"depth": 4, "sizes": [1, 1, 1, 1]})


class TestBuildAndVerify(PipelineTestCase):
    def test_build_reports_the_system(self):
        output = self.base_path / "system.json"
        result = self.run_step(
            command="build", input=str(self.write_graph(path(20))), output=str(output)
        )
        system = result.report["system"]
        self.assertTrue(system["ok"])
        self.assertEqual(system["size"], 6)
        self.assertEqual(system["max_thickness"], "4/3")
        self.assertTrue(output.is_file())

    def test_build_with_invalid_layering_file(self):
        layering_path = self.base_path / "c4.layers"
        layering_path.write_text("1 1\n2 2\n3 3\n4 4\n", encoding="utf-8")
        with self.assertRaises(PipelineError) as cm:
            self.run_step(
                command="build",
                input=str(self.write_graph(cycle(4))),
                layering=str(layering_path),
            )
        self.assertEqual(cm.exception.code, "cli.E001")

    def test_verify_good_and_corrupted_systems(self):
        graph_path = self.write_graph(path(5))
        system_path = self.base_path / "system.json"
        self.run_step(command="build", input=str(graph_path), output=str(system_path), r=2)

        good = self.run_step(command="verify", input=str(graph_path), system=str(system_path))
        self.assertEqual(good.exit_code, 0)
        self.assertTrue(good.report["system"]["ok"])

        document = json.loads(system_path.read_text(encoding="utf-8"))
        document["members"][0]["vertices"][2]["ell"] = 0
        system_path.write_text(json.dumps(document), encoding="utf-8")
        bad = self.run_step(command="verify", input=str(graph_path), system=str(system_path))
        self.assertEqual(bad.exit_code, 2)
        self.assertEqual(bad.report["system"]["failures"][0]["clause"], "walk-preserving")

    def test_ptas_rejects_single_overlay_file(self):
        from django_overlays.builders.windows import trivial_system
        from django_overlays.overlays.documents import overlay_to_json

        g = path(5)
        overlay_path = self.base_path / "overlay.json"
        overlay_path.write_text(overlay_to_json(trivial_system(g, 1).members[0]), encoding="utf-8")
        graph_path = self.write_graph(g)
        check = self.run_step(command="verify", input=str(graph_path), system=str(overlay_path))
        self.assertTrue(check.report["overlay"]["ok"])
        with self.assertRaises(PipelineError) as cm:
            self.run_step(
                command="ptas", input=str(graph_path), problem="rdom", system=str(overlay_path)
            )
        self.assertEqual(cm.exception.code, "cli.E002")


class TestSolveAndPtas(PipelineTestCase):
    def test_solve_exact(self):
        self.assertEqual(len(solve_exact(cycle(5), "mis")), 2)
        self.assertEqual(len(solve_exact(cycle(12), "dist-is", r=3)), 4)
        self.assertEqual(len(solve_exact(path(10), "rdom", r=1)), 4)
        self.assertEqual(len(solve_exact(cycle(5), "cliquecover", s=2)), 3)
        self.assertEqual(solve_exact(path(4), "cliquecover", s=3), ())

    def test_solve_step(self):
        output = self.base_path / "report.json"
        result = self.run_step(
            command="solve", input=str(self.write_graph(path(10))), problem="rdom", output=str(output)
        )
        self.assertEqual(result.report["value"], 4)
        self.assertEqual(json.loads(output.read_text(encoding="utf-8")), result.report)

    def test_ptas_step(self):
        result = self.run_step(
            command="ptas", input=str(self.write_graph(path(20))), problem="rdom", k=1
        )
        ptas = result.report["ptas"]
        self.assertEqual(ptas["problem"], "rdom")
        self.assertEqual(ptas["system_size"], 6)
        self.assertGreaterEqual(ptas["value"], 7)
        self.assertGreaterEqual(ptas["wall_time"], 0)
        self.assertEqual(result.report["config"]["builder"]["builder"], "layering")
