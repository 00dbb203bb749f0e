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
Systems for graphs with sublinear separators, built level by level.

Level 1 is the trivial system. Level ``i`` cuts the graph into windows of
``s_i`` layers of a depth-band (or BFS) layering and gives every window the
level ``i-1`` system, which needs every window component to have at most
``n_{i-1}`` vertices. Sizes ``n_i`` grow doubly exponentially, so a handful of
levels covers any graph; the schedule stops when ``n_i`` fails to grow.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

from django.apps import apps
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Self

from django_overlays.builders.windows import decompose, windowed_members
from django_overlays.errors import ScheduleError
from django_overlays.graphs.decomposition import (
    depth_band_layering,
    separator_tree_decomposition,
)
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import Layering, bfs_layering
from django_overlays.overlays.overlay import Overlay, embed_overlay, trivial_overlay
from django_overlays.overlays.system import OverlaySystem, compose_overlays

logger = logging.getLogger(__name__)
config = apps.get_app_config("django_overlays")

__all__ = [
    "ScheduleParams",
    "sublin_constants",
    "sublin_params",
    "separator_system",
    "layering_from_source",
    "MAX_LEVELS",
]

MAX_LEVELS = 64


def _iroot(value: int, p: int) -> int:
    """Largest ``m`` with ``m**p <= value``."""
    if value < 0:
        raise ValueError("no real root of a negative number")
    if value < 2 or p == 1:
        return value
    low, high = 1, 1 << (value.bit_length() // p + 1)
    while low < high:
        middle = (low + high + 1) // 2
        if middle**p <= value:
            low = middle
        else:
            high = middle - 1
    return low


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    return Fraction(value)


class ScheduleParams(BaseModel):
    """
    ``alpha > 0``, separator exponent ``0 <= delta < 1`` (separators of size
    ``c·n^delta``), base size ``t``. ``level`` optionally pins the level to build.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha: Fraction
    delta: Fraction
    c: int = Field(ge=2)
    r: int = Field(ge=1)
    k: int = Field(ge=1)
    t: int = Field(ge=1)
    level: int | None = Field(default=None, ge=1)

    @field_validator("alpha", "delta", mode="before")
    @classmethod
    def parse_fraction(cls, value):
        return _fraction(value)

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")
        if self.t > config.SCHEDULE_T_LIMIT:
            raise ValueError(f"t={self.t} exceeds the limit {config.SCHEDULE_T_LIMIT}")
        return self

    def s(self, i: int) -> int:
        """Window length at level ``i``: ``⌈4α⁻¹(1+α)^i·rk⌉``, and 1 at level 1."""
        if i <= 1:
            return 1
        return math.ceil(4 / self.alpha * (1 + self.alpha) ** i * self.r * self.k)

    def theta(self, i: int) -> Fraction:
        """Thickness bound ``1 + Σ_{j=2..i} 4r/s_j``."""
        return 1 + sum((Fraction(4 * self.r, self.s(j)) for j in range(2, i + 1)), Fraction(0))

    def size(self, i: int) -> int:
        return math.prod(self.s(j) for j in range(2, i + 1))

    def n(self, i: int) -> int | None:
        """Largest component size level ``i`` handles; ``None`` is unbounded."""
        value: int | None = self.t
        p, q = self.delta.numerator, self.delta.denominator
        for j in range(2, i + 1):
            if value is None:
                return None
            ratio = Fraction(value, self.c ** (self.s(j) + 2 * self.r))
            if p == 0:
                value = None if ratio >= 1 else 0
                continue
            value = _iroot(math.floor(ratio**q), p)
        return value

    def check_increasing(self, level: int) -> None:
        """
        Raises:
            ScheduleError: If some ``n_i`` up to ``level`` does not exceed ``n_{i-1}``.
        """
        previous = self.n(1)
        for i in range(2, level + 1):
            current = self.n(i)
            if current is not None and previous is not None and current <= previous:
                raise ScheduleError(
                    f"schedule infeasible: n_{i}={current} does not exceed n_{i - 1}={previous}",
                    code="E060",
                    witness=[i],
                )
            previous = current

    def level_for(self, size: int) -> int:
        """Smallest level whose ``n_i`` covers components of ``size`` vertices."""
        for i in range(1, MAX_LEVELS + 1):
            self.check_increasing(i)
            bound = self.n(i)
            if bound is None or bound >= size:
                return i
        raise ScheduleError(f"no level up to {MAX_LEVELS} covers size {size}", code="E061")


def sublin_constants(c: int, delta, r: int, k: int) -> tuple[Fraction, Fraction, float]:
    """
    ``(ε, α, log2 t)`` for separators of size ``c·n^δ``: ``ε = min(1/δ - 1, 1/2)``,
    ``α = ε(1-ε)/2`` and ``t = max(3, (c^{2r}·a^{(1+α)²})^{2/ε})`` with
    ``a = c^{8rk/α}``.
    """
    delta = _fraction(delta)
    if not 0 <= delta < 1:
        raise ScheduleError("delta must lie in [0, 1)", code="E062")
    epsilon = Fraction(1, 2) if delta == 0 else min(1 / delta - 1, Fraction(1, 2))
    alpha = epsilon * (1 - epsilon) / 2
    log2_c = math.log2(c)
    exponent = 2 * r * log2_c + float(Fraction(8 * r * k) / alpha * (1 + alpha) ** 2) * log2_c
    log2_t = max(math.log2(3), float(2 / epsilon) * exponent)
    return epsilon, alpha, log2_t


def sublin_params(n: int, c: int, delta, r: int, k: int) -> ScheduleParams:
    """
    Parameters that cover ``n``-vertex graphs, with level
    ``⌈log log n / log(1+α)⌉ + 1``.

    Raises:
        ScheduleError: If ``t`` exceeds OVERLAYS_SCHEDULE_T_LIMIT (the message
            gives ``t`` symbolically) or the level does not reach ``n``.
    """
    epsilon, alpha, log2_t = sublin_constants(c, delta, r, k)
    limit = config.SCHEDULE_T_LIMIT
    if log2_t > math.log2(limit):
        raise ScheduleError(
            f"t = max(3, (c^(2r) * a^((1+alpha)^2))^(2/epsilon)) with c={c}, r={r}, "
            f"a = c^(8rk/alpha), k={k}, alpha={alpha}, epsilon={epsilon} "
            f"is about 2^{log2_t:.1f}, over the limit of {limit}",
            code="E063",
            witness={"log2_t": log2_t, "alpha": str(alpha), "epsilon": str(epsilon)},
        )
    t = max(3, math.ceil(2**log2_t))
    level = 1 if n <= 2 else math.ceil(math.log(math.log(n)) / math.log(1 + alpha)) + 1
    params = ScheduleParams(
        alpha=alpha, delta=delta, c=c, r=r, k=k, t=t, level=max(level, 1)
    )
    bound = params.n(params.level)
    if bound is not None and bound < n:
        raise ScheduleError(
            f"level {params.level} covers {bound} < {n} vertices", code="E064"
        )
    return params


def _compact(l: Layering) -> Layering:
    # An empty layer has no edges across it, so dropping it keeps the layering valid.
    return Layering(layers=tuple(layer for layer in l.layers if layer), host_hash=l.host_hash)


def layering_from_source(g: Graph, source: str) -> Layering:
    """BFS layering from vertex 0, or the compacted depth bands of a separator decomposition."""
    if source == "bfs":
        return bfs_layering(g, [0])
    td = separator_tree_decomposition(g).with_depth_bound()
    return _compact(depth_band_layering(g, td))


def _level_members(
    g: Graph, level: int, params: ScheduleParams, source: str, decomposer: str
) -> list[Overlay]:
    components = g.components()
    if len(components) > 1:
        parts = []
        for component in components:
            sub, embedding = g.induced_subgraph(component)
            members = _level_members(sub, level, params, source, decomposer)
            parts.append([embed_overlay(m, g, embedding) for m in members])
        return [compose_overlays(list(group)) for group in zip(*parts)]

    bound = params.n(level)
    if bound is not None and g.n > bound:
        raise ScheduleError(
            f"component of {g.n} vertices exceeds n_{level}={bound}",
            code="E065",
            witness={"level": level, "size": g.n},
        )
    if level == 1:
        return [trivial_overlay(g, params.r, decompose(g, decomposer))]
    s = params.s(level)
    l = layering_from_source(g, source)
    return windowed_members(
        g,
        l,
        s,
        params.r,
        lambda window: _level_members(window.graph, level - 1, params, source, decomposer),
    )


def separator_system(
    g: Graph,
    params: ScheduleParams,
    level: int | None = None,
    layering_source: str = "depth_band",
    decomposer: str = "best",
) -> OverlaySystem:
    """
    The level ``i`` system of ``g``: ``Π_{j=2..i} s_j`` members, thickness at most
    ``θ_i = 1 + Σ 4r/s_j`` and width below ``t``. The level defaults to
    ``params.level`` and then to the smallest one covering every component.

    Raises:
        ScheduleError: If the schedule stops growing or a component is too large
            for its level.
    """
    largest = max((len(c) for c in g.components()), default=0)
    chosen = level or params.level or params.level_for(largest)
    params.check_increasing(chosen)
    members = _level_members(g, chosen, params, layering_source, decomposer)
    expected = params.size(chosen)
    if len(members) != expected:
        raise ScheduleError(
            f"level {chosen} produced {len(members)} members, expected {expected}",
            code="E066",
        )
    system = OverlaySystem.build(
        members, declared_tw=params.t, declared_thickness=params.theta(chosen)
    )
    logger.info(
        "Separator system of %r at level %d: %d members, thickness bound %s",
        g,
        chosen,
        system.size,
        system.declared_thickness,
    )
    return system
