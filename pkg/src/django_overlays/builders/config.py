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
Declarative builder configurations.

A ``BuilderConfig`` names a builder and its parameters, optionally nesting the
configuration of the builder it wraps under ``base``. Configurations load from
JSON or TOML, for example::

    builder = "layering"
    r = 2
    k = 1

    [base]
    builder = "trivial"
"""

from __future__ import annotations

import json
import logging
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Literal

import tomli
import tomli_w
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from django_overlays.builders.apex import apex_lift, rooted_system
from django_overlays.builders.schedule import (
    ScheduleParams,
    layering_from_source,
    separator_system,
    sublin_params,
)
from django_overlays.builders.shadow import shadow_layering_lift, shadow_lift
from django_overlays.builders.star import sgbas_to_star, star_sum_system
from django_overlays.builders.windows import (
    SystemBuilder,
    component_system,
    layering_lift,
    trivial_system,
)
from django_overlays.errors import BuilderError
from django_overlays.graphs.cliques import degeneracy_ordering, max_clique_size
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import Layering, bfs_layering
from django_overlays.overlays.overlay import OverlayKind, as_kind
from django_overlays.overlays.system import OverlaySystem

logger = logging.getLogger(__name__)

__all__ = [
    "BuilderName",
    "BuilderConfig",
    "build_system",
    "system_builder",
    "json_to_builder_config",
    "toml_to_builder_config",
    "builder_config_to_toml",
    "load_builder_config",
]


class BuilderName(str, Enum):
    TRIVIAL = "trivial"
    COMPONENTS = "components"
    LAYERING = "layering"
    APEX = "apex"
    ROOTED = "rooted"
    STAR = "star"
    STARSUM = "starsum"
    SHADOW = "shadow"
    SHADOW_LAYERING = "shadow-layering"
    SEPARATOR = "separator"


class BuilderConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    builder: BuilderName = BuilderName.LAYERING
    r: int = Field(default=1, ge=1)
    k: int = Field(default=1, ge=1)
    # Layerings: BFS from ``roots``, or depth bands of a separator decomposition.
    layering: Literal["bfs", "depth_band"] | None = None
    roots: list[int] = Field(default_factory=lambda: [0])
    # Apex and root sets (``apex``, ``rooted``) and the star-sum center.
    apex: list[int] = Field(default_factory=list)
    center: list[int] = Field(default_factory=list)
    decomposer: Literal["best", "separator", "min_degree", "min_fill_in"] = "best"
    # Separator schedule.
    alpha: Fraction | None = None
    delta: Fraction | None = None
    c: int | None = Field(default=None, ge=2)
    t: int | None = Field(default=None, ge=1)
    level: int | None = Field(default=None, ge=1)
    base: BuilderConfig | None = None

    @field_validator("alpha", "delta", mode="before")
    @classmethod
    def parse_fraction(cls, value):
        if value is None or isinstance(value, Fraction):
            return value
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**6)
        try:
            return Fraction(value)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a fraction: {value!r}") from e

    @field_serializer("alpha", "delta")
    def dump_fraction(self, value: Fraction | None) -> str | None:
        return None if value is None else str(value)

    def base_or_trivial(self) -> BuilderConfig:
        if self.base is not None:
            return self.base.model_copy(update={"r": self.r})
        return BuilderConfig(builder=BuilderName.TRIVIAL, r=self.r, decomposer=self.decomposer)


def system_builder(cfg: BuilderConfig) -> SystemBuilder:
    """The configuration as a ``(graph, k, layering) -> system`` callable."""

    def build(g: Graph, k: int, layering: Layering | None) -> OverlaySystem:
        return build_system(g, cfg.model_copy(update={"k": k}), layering)

    return build


def _star_builder(cfg: BuilderConfig):
    builder = system_builder(cfg)

    def build(g: Graph, k: int, *_) -> OverlaySystem:
        system = builder(g, k, None)
        if system.kind is OverlayKind.S:
            return sgbas_to_star(system)
        if system.kind is not OverlayKind.STAR:
            raise BuilderError(
                f"{cfg.builder.value} builds kind {system.kind.value}, not convertible to star",
                code="E070",
            )
        return system

    return build


def _layering_for(g: Graph, cfg: BuilderConfig, layering: Layering | None) -> Layering:
    if layering is not None:
        return layering
    if cfg.layering == "depth_band":
        return layering_from_source(g, "depth_band")
    if g.n == 0:
        return Layering(layers=(), host_hash=g.content_hash)
    return bfs_layering(g, cfg.roots or [0])


def _dispatch(g: Graph, cfg: BuilderConfig, layering: Layering | None) -> OverlaySystem:
    name = cfg.builder
    if name is BuilderName.TRIVIAL:
        return trivial_system(g, cfg.r, cfg.decomposer)
    if name is BuilderName.COMPONENTS:
        return component_system(g, cfg.k, system_builder(cfg.base_or_trivial()))
    if name is BuilderName.LAYERING:
        l = _layering_for(g, cfg, layering)
        return layering_lift(g, l, cfg.r, cfg.k, system_builder(cfg.base_or_trivial()))
    if name is BuilderName.APEX:
        rest = [v for v in g.vertices if v not in set(cfg.apex)]
        sub, _ = g.induced_subgraph(rest)
        inner = system_builder(cfg.base_or_trivial())(sub, cfg.k, None)
        if inner.kind is OverlayKind.S:
            inner = OverlaySystem(
                members=tuple(as_kind(m, OverlayKind.A) for m in inner.members),
                declared_tw=inner.declared_tw,
                declared_thickness=inner.declared_thickness,
            )
        return apex_lift(g, cfg.apex, inner)
    if name is BuilderName.ROOTED:
        return rooted_system(g, cfg.apex, cfg.r, cfg.k, system_builder(cfg.base_or_trivial()))
    if name is BuilderName.STAR:
        return _star_builder(cfg.base_or_trivial())(g, cfg.k)
    if name is BuilderName.STARSUM:
        layer = _star_builder(cfg.base_or_trivial())
        return star_sum_system(g, cfg.center, layer, layer, cfg.k)
    if name is BuilderName.SHADOW:
        l = _layering_for(g, cfg, layering)
        return shadow_lift(g, l, _star_builder(cfg.base_or_trivial()), cfg.r, cfg.k)
    if name is BuilderName.SHADOW_LAYERING:
        l = _layering_for(g, cfg, layering)
        return shadow_layering_lift(g, l, _star_builder(cfg.base_or_trivial()), cfg.r, cfg.k)
    if name is BuilderName.SEPARATOR:
        if cfg.c is None or cfg.delta is None:
            raise BuilderError("the separator builder needs c and delta", code="E071")
        if cfg.t is not None:
            params = ScheduleParams(
                alpha=cfg.alpha if cfg.alpha is not None else Fraction(1),
                delta=cfg.delta,
                c=cfg.c,
                r=cfg.r,
                k=cfg.k,
                t=cfg.t,
                level=cfg.level,
            )
        else:
            params = sublin_params(g.n, cfg.c, cfg.delta, cfg.r, cfg.k)
        return separator_system(
            g, params, cfg.level, cfg.layering or "depth_band", cfg.decomposer
        )
    raise BuilderError(f"unknown builder {name!r}", code="E072")


def build_system(
    g: Graph, cfg: BuilderConfig, layering: Layering | None = None
) -> OverlaySystem:
    """
    Build the configured system for ``g``. Results whose declared width is small
    for the graph's degeneracy (more than four times the width), and kind ★
    results small for its largest clique, are logged as suspicious.
    """
    logger.debug("Building %s system for %r (r=%d, k=%d)", cfg.builder.value, g, cfg.r, cfg.k)
    system = _dispatch(g, cfg, layering)
    _, degeneracy = degeneracy_ordering(g)
    if degeneracy > 4 * system.declared_tw:
        logger.warning(
            "Degeneracy %d exceeds 4*%d for a width-%d %s system of %r",
            degeneracy,
            system.declared_tw,
            system.declared_tw,
            system.kind.value,
            g,
        )
    if system.kind is OverlayKind.STAR:
        omega = max_clique_size(g)
        if omega > 4 * system.declared_tw + 1:
            logger.warning(
                "Largest clique has %d vertices, more than 4*%d+1 for a width-%d star system",
                omega,
                system.declared_tw,
                system.declared_tw,
            )
    return system


def json_to_builder_config(text: str) -> BuilderConfig:
    return BuilderConfig.model_validate(json.loads(text))


def toml_to_builder_config(toml: str) -> BuilderConfig:
    """
    Raises:
        tomli.TOMLDecodeError: If the TOML is invalid.
        pydantic.ValidationError: If it does not describe a builder.
    """
    return BuilderConfig.model_validate(tomli.loads(toml))


def builder_config_to_toml(cfg: BuilderConfig) -> str:
    data = cfg.model_dump(mode="json", exclude_none=True)
    return tomli_w.dumps(data)


def load_builder_config(path: str | Path) -> BuilderConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"builder configuration not found at: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        return toml_to_builder_config(text)
    return json_to_builder_config(text)
