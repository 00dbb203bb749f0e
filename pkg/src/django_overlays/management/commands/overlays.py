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

from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from django_overlays.builders.config import BuilderName
from django_overlays.errors import CertificateError, InfeasibleError, OverlaysError
from django_overlays.graphs.generators import FAMILIES
from django_overlays.models import PipelineRun
from django_overlays.pipeline import (
    PipelineCommand,
    PipelineConfig,
    dump_report,
    load_pipeline_config,
    run_pipeline,
)

logger = logging.getLogger(__name__)

PROBLEMS = ("mis", "dist-is", "rdom", "cliquecover")


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def exit_code_for(error: Exception) -> int:
    if isinstance(error, CertificateError):
        return 2
    if isinstance(error, InfeasibleError):
        return 3
    return 1


class Command(BaseCommand):
    """
    Subcommands, one per pipeline step:

    - ``gen``: write a generated graph (``.gr`` or JSON).
    - ``layer``: write a BFS layering of the input graph.
    - ``build``: write an overlay system built by the named builder.
    - ``verify``: check an overlay or system file against the input graph.
    - ``solve``: solve a problem exactly on the input graph.
    - ``ptas``: approximate a problem through an overlay system.
    - ``run``: run a step described by a TOML or JSON pipeline file.

    Exit codes are 0 on success, 1 for usage and pipeline errors, 2 when a
    certificate or verification fails and 3 for infeasible instances.
    """

    help = "Builds, verifies and solves through thin systems of overlays."

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        gen = subparsers.add_parser("gen", help="Generate a graph.")
        gen.add_argument("--family", choices=FAMILIES, required=True)
        gen.add_argument("--n", type=int)
        gen.add_argument("--a", type=int)
        gen.add_argument("--b", type=int)
        gen.add_argument("--format", choices=("gr", "json"), default="gr")

        layer = subparsers.add_parser("layer", help="BFS-layer a graph.")
        layer.add_argument("--roots", type=_int_list, default=[0])

        build = subparsers.add_parser("build", help="Build an overlay system.")
        self.add_builder_arguments(build)

        verify = subparsers.add_parser("verify", help="Verify an overlay or system file.")
        verify.add_argument("--system", required=True)

        solve = subparsers.add_parser("solve", help="Solve a problem exactly.")
        solve.add_argument("--problem", choices=PROBLEMS, required=True)
        solve.add_argument("--s", type=int, default=2)

        ptas = subparsers.add_parser("ptas", help="Approximate a problem.")
        ptas.add_argument("problem", choices=PROBLEMS)
        ptas.add_argument("--s", type=int, default=2)
        ptas.add_argument("--system", help="Use this system file instead of building one.")
        self.add_builder_arguments(ptas)

        run = subparsers.add_parser("run", help="Run a pipeline configuration file.")
        run.add_argument("pipeline", help="TOML or JSON pipeline configuration.")

        for sub in (gen, layer, build, verify, solve, ptas, run):
            sub.add_argument("--input", "-i")
            sub.add_argument("--output", "-o")
            sub.add_argument("--r", type=int, default=1)
            sub.add_argument("--k", type=int, default=1)
            sub.add_argument("--seed", type=int)
            sub.add_argument(
                "--record",
                action="store_true",
                help="Store the run and its report as a PipelineRun.",
            )

    def add_builder_arguments(self, parser):
        names = [name.value for name in BuilderName]
        parser.add_argument("--builder", choices=names, default=BuilderName.LAYERING.value)
        parser.add_argument("--base", choices=names, help="Builder the named builder wraps.")
        parser.add_argument("--config", help="Builder configuration file (TOML or JSON).")
        parser.add_argument("--layering", help="Layering file to use instead of computing one.")
        parser.add_argument("--layering-source", choices=("bfs", "depth_band"))
        parser.add_argument("--roots", type=_int_list, default=[0])
        parser.add_argument("--apex", type=_int_list, default=[])
        parser.add_argument("--center", type=_int_list, default=[])
        parser.add_argument("--alpha")
        parser.add_argument("--delta")
        parser.add_argument("--c", type=int)
        parser.add_argument("--t", type=int)
        parser.add_argument("--level", type=int)

    def pipeline_config(self, options) -> PipelineConfig:
        subcommand = options["subcommand"]
        if subcommand == "run":
            return load_pipeline_config(options["pipeline"])
        data = {
            "command": subcommand,
            "input": options.get("input"),
            "output": options.get("output"),
            "r": options["r"],
            "k": options["k"],
            "seed": options.get("seed"),
        }
        for name in ("family", "n", "a", "b", "format", "roots", "system", "problem", "s"):
            if options.get(name) is not None:
                data[name] = options[name]
        if subcommand in (PipelineCommand.BUILD.value, PipelineCommand.PTAS.value):
            data["layering"] = options.get("layering")
            data["builder_file"] = options.get("config")
            builder = {
                "builder": options["builder"],
                "roots": options["roots"],
                "apex": options["apex"],
                "center": options["center"],
                "layering": options.get("layering_source"),
            }
            for name in ("alpha", "delta", "c", "t", "level"):
                if options.get(name) is not None:
                    builder[name] = options[name]
            if options.get("base"):
                builder["base"] = {"builder": options["base"]}
            data["builder"] = builder
        return PipelineConfig.model_validate(data)

    def handle(self, *args, **options):
        """
        Main entry point for the command.
        """
        run = None
        if options["record"]:
            run = PipelineRun(
                command=options["subcommand"],
                config={k: v for k, v in options.items() if isinstance(v, (str, int, list))},
                seed=options.get("seed") or 0,
            )
        try:
            cfg = self.pipeline_config(options)
            if run is not None:
                run.command = cfg.command.value
                run.config = cfg.resolved()
                run.seed = cfg.resolved_seed
            result = run_pipeline(cfg)
        except (ValidationError, FileNotFoundError, OverlaysError) as e:
            code = exit_code_for(e)
            logger.error("%s failed: %s", options["subcommand"], e)
            if run is not None:
                run.exit_code = code
                run.report = e.as_dict() if isinstance(e, OverlaysError) else {"message": str(e)}
                run.save()
            raise CommandError(str(e), returncode=code) from e

        if run is not None:
            run.report = result.report
            run.exit_code = result.exit_code
            run.save()
            logger.info("Recorded %s", run)
        if result.artifact is not None and cfg.output is None:
            self.stdout.write(result.artifact, ending="")
        else:
            self.stdout.write(dump_report(result.report), ending="")
        if result.exit_code:
            raise CommandError("verification failed", returncode=result.exit_code)
