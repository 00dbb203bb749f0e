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
"""
Pipeline orchestration behind the ``overlays`` management command.

A ``PipelineConfig`` names one step (``gen``, ``layer``, ``build``, ``verify``,
``solve`` or ``ptas``) and everything it needs. ``run_pipeline`` runs it,
writes any artifact atomically and returns a JSON-ready report that embeds the
resolved configuration and seed. Configurations can also be kept in TOML files
and run with ``overlays run``::

    command = "ptas"
    input = "grid.gr"
    problem = "rdom"
    r = 1
    k = 2

    [builder]
    builder = "layering"
"""

from __future__ import annotations

import json
import logging
import time
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import tomli
from django.apps import apps
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from django_overlays.builders.config import BuilderConfig, build_system, load_builder_config
from django_overlays.errors import PipelineError
from django_overlays.graphs.cliques import star_graph
from django_overlays.graphs.formats import (
    graph_to_gr,
    graph_to_json,
    layering_file_to_layering,
    layering_to_layering_file,
    load_graph,
    write_text_atomic,
)
from django_overlays.graphs.generators import FAMILIES, generate_graph
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import Layering, bfs_layering, verify_layering
from django_overlays.overlays.documents import load_document, system_to_json
from django_overlays.overlays.overlay import Overlay, verify_overlay
from django_overlays.overlays.system import OverlaySystem, verify_system
from django_overlays.ptas.engines import (
    PtasReport,
    ptas_max_distance_independent,
    ptas_max_independent_set,
    ptas_min_r_dominating,
    ptas_s_clique_cover,
)
from django_overlays.solvers.dynamic import (
    solve_distance_independent,
    solve_neighborhood_hitting,
    solve_r_dominating,
)

logger = logging.getLogger(__name__)
config = apps.get_app_config("django_overlays")

__all__ = [
    "PipelineCommand",
    "PipelineConfig",
    "PipelineResult",
    "run_pipeline",
    "solve_exact",
    "toml_to_pipeline_config",
    "load_pipeline_config",
    "dump_report",
]

ProblemName = Literal["mis", "dist-is", "rdom", "cliquecover"]


class PipelineCommand(str, Enum):
    GEN = "gen"
    LAYER = "layer"
    BUILD = "build"
    VERIFY = "verify"
    SOLVE = "solve"
    PTAS = "ptas"


# The inputs each command cannot run without.
REQUIRED = {
    PipelineCommand.GEN: ("family",),
    PipelineCommand.LAYER: ("input",),
    PipelineCommand.BUILD: ("input",),
    PipelineCommand.VERIFY: ("input", "system"),
    PipelineCommand.SOLVE: ("input", "problem"),
    PipelineCommand.PTAS: ("input", "problem"),
}


class PipelineConfig(BaseModel):
    """
    ``builder`` configures ``build`` and, without a ``system`` file, ``ptas``;
    ``builder_file`` (JSON or TOML) replaces it. ``r`` and ``k`` given here win
    over those of the builder configuration.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: PipelineCommand
    input: Path | None = None
    output: Path | None = None
    system: Path | None = None
    layering: Path | None = None
    builder_file: Path | None = None
    family: str | None = None
    n: int | None = Field(default=None, ge=1)
    a: int | None = Field(default=None, ge=1)
    b: int | None = Field(default=None, ge=1)
    roots: list[int] = Field(default_factory=lambda: [0])
    builder: BuilderConfig = Field(default_factory=BuilderConfig)
    problem: ProblemName | None = None
    r: int = Field(default=1, ge=1)
    k: int = Field(default=1, ge=1)
    s: int = Field(default=2, ge=1)
    seed: int | None = Field(default=None, ge=0)
    format: Literal["gr", "json"] = "gr"

    @model_validator(mode="after")
    def check_inputs(self) -> Self:
        missing = [name for name in REQUIRED[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.command.value} needs {', '.join(missing)}")
        for name in ("input", "system", "layering", "builder_file"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise ValueError(f"{name} file not found at: {path}")
        if self.family is not None and self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        return self

    @property
    def resolved_seed(self) -> int:
        return config.DEFAULT_SEED if self.seed is None else self.seed

    def resolved_builder(self) -> BuilderConfig:
        builder = self.builder
        if self.builder_file is not None:
            builder = load_builder_config(self.builder_file)
        return builder.model_copy(update={"r": self.r, "k": self.k})

    def resolved(self) -> dict[str, Any]:
        data = self.model_dump(mode="json")
        data["seed"] = self.resolved_seed
        data["builder"] = self.resolved_builder().model_dump(mode="json", exclude_none=True)
        return data


class PipelineResult(BaseModel):
    """``artifact`` is the text written (or to be printed) by gen, layer and build."""

    model_config = ConfigDict(frozen=True)

    report: dict[str, Any]
    exit_code: int = 0
    artifact: str | None = None


def dump_report(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def toml_to_pipeline_config(toml: str, relative_to: Path | None = None) -> PipelineConfig:
    """
    Parse a pipeline configuration; relative paths resolve against ``relative_to``.

    Raises:
        tomli.TOMLDecodeError: If the TOML is invalid.
        pydantic.ValidationError: If it does not describe a pipeline step.
    """
    data = tomli.loads(toml)
    if relative_to is not None:
        for name in ("input", "output", "system", "layering", "builder_file"):
            if name in data and not Path(data[name]).is_absolute():
                data[name] = str(relative_to / data[name])
    return PipelineConfig.model_validate(data)


def load_pipeline_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"pipeline configuration not found at: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        return toml_to_pipeline_config(text, path.parent)
    return PipelineConfig.model_validate_json(text)


def _layering(cfg: PipelineConfig, g: Graph) -> Layering | None:
    if cfg.layering is None:
        return None
    text = cfg.layering.read_text(encoding="utf-8")
    l = layering_file_to_layering(text, g.content_hash)
    ok, edge = verify_layering(g, l)
    if not ok:
        raise PipelineError(
            f"layering file {cfg.layering} is not a layering of the input",
            code="E001",
            witness=edge,
        )
    return l


def _system(cfg: PipelineConfig, g: Graph) -> OverlaySystem:
    if cfg.system is None:
        return build_system(g, cfg.resolved_builder(), _layering(cfg, g))
    document = load_document(cfg.system, g)
    if not isinstance(document, OverlaySystem):
        raise PipelineError(f"{cfg.system} holds a single overlay, not a system", code="E002")
    return document


def solve_exact(g: Graph, problem: ProblemName, r: int = 1, s: int = 2) -> tuple[int, ...]:
    """The exact optimum of ``problem`` on ``g``, by the tree-decomposition solvers."""
    if problem == "mis":
        return solve_distance_independent(g, g.vertices, 2)
    if problem == "dist-is":
        return solve_distance_independent(g, g.vertices, r)
    if problem == "rdom":
        return solve_r_dominating(g, g.vertices, r)
    star = star_graph(g)
    targets = [star.star_vertex(c) for c in star.cliques if len(c) == s]
    if not targets:
        return ()
    return solve_neighborhood_hitting(star.star, targets)


def _ptas(cfg: PipelineConfig, g: Graph) -> PtasReport:
    system = _system(cfg, g)
    if cfg.problem == "mis":
        return ptas_max_independent_set(g, system, cfg.k)
    if cfg.problem == "dist-is":
        return ptas_max_distance_independent(g, system, cfg.r, cfg.k)
    if cfg.problem == "rdom":
        return ptas_min_r_dominating(g, system, cfg.r, cfg.k)
    return ptas_s_clique_cover(g, system, cfg.s, cfg.k)


def _write(cfg: PipelineConfig, text: str) -> None:
    if cfg.output is not None:
        write_text_atomic(cfg.output, text)


def _graph_summary(g: Graph) -> dict[str, Any]:
    return {"n": g.n, "m": g.m, "hash": g.content_hash}


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """
    Run one pipeline step.

    Raises:
        OverlaysError: Whatever the step's modules raise, with its code intact.
    """
    report: dict[str, Any] = {"command": cfg.command.value, "config": cfg.resolved()}
    seed = cfg.resolved_seed
    logger.info("Running %s (seed %d)", cfg.command.value, seed)

    if cfg.command is PipelineCommand.GEN:
        g = generate_graph(cfg.family, n=cfg.n, a=cfg.a, b=cfg.b, seed=seed)
        artifact = graph_to_json(g) if cfg.format == "json" else graph_to_gr(g)
        _write(cfg, artifact)
        report["graph"] = _graph_summary(g)
        return PipelineResult(report=report, artifact=artifact)

    g = load_graph(cfg.input)
    report["graph"] = _graph_summary(g)

    if cfg.command is PipelineCommand.LAYER:
        l = bfs_layering(g, cfg.roots)
        artifact = layering_to_layering_file(l)
        _write(cfg, artifact)
        report["layering"] = {"depth": l.depth, "sizes": [len(layer) for layer in l.layers]}
        return PipelineResult(report=report, artifact=artifact)

    if cfg.command is PipelineCommand.BUILD:
        system = build_system(g, cfg.resolved_builder(), _layering(cfg, g))
        artifact = system_to_json(system)
        _write(cfg, artifact)
        report["system"] = verify_system(system).model_dump(mode="json")
        return PipelineResult(report=report, artifact=artifact)

    exit_code = 0
    if cfg.command is PipelineCommand.VERIFY:
        document = load_document(cfg.system, g)
        if isinstance(document, Overlay):
            check = verify_overlay(document)
            report["overlay"] = check.model_dump(mode="json")
            ok = check.ok
        else:
            summary = verify_system(document)
            report["system"] = summary.model_dump(mode="json")
            ok = summary.ok
        if not ok:
            logger.error("Verification of %s failed", cfg.system)
            exit_code = 2
    elif cfg.command is PipelineCommand.SOLVE:
        solution = solve_exact(g, cfg.problem, cfg.r, cfg.s)
        report["solution"] = list(solution)
        report["value"] = len(solution)
    else:
        started = time.perf_counter()
        result = _ptas(cfg, g)
        result = result.model_copy(update={"wall_time": time.perf_counter() - started})
        report["ptas"] = result.model_dump(mode="json")

    _write(cfg, dump_report(report))
    return PipelineResult(report=report, exit_code=exit_code)
