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
Layerings: ordered partitions of the vertex set with edges only inside a layer or
between consecutive layers.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from functools import cached_property

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from django_overlays.errors import GraphError
from django_overlays.graphs.graph import Graph

logger = logging.getLogger(__name__)

__all__ = [
    "Layering",
    "ShadowViolation",
    "bfs_layering",
    "verify_layering",
    "shadow_violation",
    "is_shadow_complete",
    "restrict_layering",
]


class Layering(BaseModel):
    """
    Layers ``V_1..V_d`` stored 0-based; ``layer_of`` answers with 1-based indices
    to match the usual numbering. Layers may be empty.
    """

    model_config = ConfigDict(frozen=True)

    layers: tuple[tuple[int, ...], ...]
    host_hash: str = ""

    @model_validator(mode="after")
    def check_disjoint(self) -> Self:
        seen: set[int] = set()
        for i, layer in enumerate(self.layers):
            if list(layer) != sorted(set(layer)):
                raise ValueError(f"layer {i + 1} is not sorted and duplicate-free")
            overlap = seen.intersection(layer)
            if overlap:
                raise ValueError(
                    f"layer {i + 1} repeats vertices {sorted(overlap)} of earlier layers"
                )
            seen.update(layer)
        return self

    @property
    def depth(self) -> int:
        return len(self.layers)

    @cached_property
    def layer_of(self) -> dict[int, int]:
        return {v: i + 1 for i, layer in enumerate(self.layers) for v in layer}

    def layer(self, i: int) -> tuple[int, ...]:
        """The 1-based layer ``V_i``; empty outside ``1..d``."""
        if 1 <= i <= len(self.layers):
            return self.layers[i - 1]
        return ()

    def span(self, first: int, last: int) -> list[int]:
        """All vertices in layers ``first..last`` inclusive (1-based, clipped)."""
        return [v for i in range(max(first, 1), min(last, self.depth) + 1) for v in self.layers[i - 1]]


def bfs_layering(g: Graph, roots: Iterable[int]) -> Layering:
    """
    Layer ``i`` holds the vertices at distance ``i-1`` from ``roots``. Components
    the roots do not reach are layered from their smallest vertex and appended.
    """
    roots = sorted(set(roots))
    if not roots:
        raise GraphError("bfs_layering needs at least one root", code="E010")
    bad = [v for v in roots if not 0 <= v < g.n]
    if bad:
        raise GraphError(f"roots {bad} are not vertices", code="E011", witness=bad)

    graph = g.to_networkx()
    layers: list[tuple[int, ...]] = [
        tuple(sorted(layer)) for layer in nx.bfs_layers(graph, roots)
    ]
    reached = {v for layer in layers for v in layer}
    for component in g.components():
        if component[0] in reached:
            continue
        logger.debug("Layering unreached component from vertex %d", component[0])
        layers.extend(tuple(sorted(layer)) for layer in nx.bfs_layers(graph, [component[0]]))
        reached.update(component)
    return Layering(layers=tuple(layers), host_hash=g.content_hash)


def _check_partition(g: Graph, l: Layering) -> None:
    covered = sum(len(layer) for layer in l.layers)
    missing = sorted(set(g.vertices) - set(l.layer_of))
    extra = sorted(set(l.layer_of) - set(g.vertices))
    if missing or extra or covered != g.n:
        raise GraphError(
            "layering is not a partition of the vertex set",
            code="E012",
            witness={"missing": missing, "extra": extra},
        )


def verify_layering(g: Graph, l: Layering) -> tuple[bool, tuple[int, int] | None]:
    """
    Return ``(True, None)`` when every edge joins equal or consecutive layers,
    otherwise ``(False, edge)`` for the first offending edge in edge order.
    """
    _check_partition(g, l)
    layer_of = l.layer_of
    for u, v in g.edges():
        if abs(layer_of[u] - layer_of[v]) > 1:
            return False, (u, v)
    return True, None


class ShadowViolation(BaseModel):
    model_config = ConfigDict(frozen=True)

    layer: int
    component: tuple[int, ...]
    non_adjacent: tuple[int, int]


def shadow_violation(g: Graph, l: Layering) -> ShadowViolation | None:
    """
    Find a layer ``V_i`` and a component ``C`` of ``G[V_{i+1} ∪ ... ∪ V_d]`` whose
    neighbours in ``V_i`` do not form a clique. ``None`` means shadow-complete.
    """
    _check_partition(g, l)
    layer_of = l.layer_of
    for i in range(1, l.depth):
        suffix = l.span(i + 1, l.depth)
        for component in g.components(suffix):
            attachment = sorted(
                {u for v in component for u in g.neighbors(v) if layer_of[u] == i}
            )
            for a in range(len(attachment)):
                for b in range(a + 1, len(attachment)):
                    if not g.has_edge(attachment[a], attachment[b]):
                        return ShadowViolation(
                            layer=i,
                            component=component,
                            non_adjacent=(attachment[a], attachment[b]),
                        )
    return None


def is_shadow_complete(g: Graph, l: Layering) -> bool:
    return shadow_violation(g, l) is None


def restrict_layering(
    l: Layering,
    embedding: Sequence[int],
    first: int = 1,
    last: int | None = None,
    strip: bool = False,
    host_hash: str = "",
) -> Layering:
    """
    The layering a subgraph inherits: vertex ``i`` of the subgraph (host vertex
    ``embedding[i]``) goes to its host layer, with layers ``first..last`` kept in
    place. ``strip`` drops empty layers at both ends.
    """
    last = l.depth if last is None else last
    buckets: list[list[int]] = [[] for _ in range(max(last - first + 1, 0))]
    layer_of = l.layer_of
    for i, v in enumerate(embedding):
        index = layer_of.get(v)
        if index is None or not first <= index <= last:
            raise GraphError(
                f"vertex {v} lies outside layers {first}..{last}",
                code="E013",
                witness=[v],
            )
        buckets[index - first].append(i)
    layers = [tuple(sorted(bucket)) for bucket in buckets]
    if strip:
        while layers and not layers[0]:
            layers.pop(0)
        while layers and not layers[-1]:
            layers.pop()
    return Layering(layers=tuple(layers), host_hash=host_hash)
