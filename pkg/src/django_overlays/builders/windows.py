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
Window decompositions of a layered graph and the layering lift.

A window ``G_j`` spans layers ``j-r .. j+Δ+r-1``: the core ``j .. j+Δ-1`` plus
``r`` buffer layers on each side. An overlay of ``G_j`` is re-targeted onto the
whole graph with its levels capped so that they fall off towards the buffer;
windows whose start is congruent mod ``Δ`` are disjoint and composed, and the
``Δ`` residues are united.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field

from django_overlays.errors import BuilderError
from django_overlays.graphs.cliques import StarGraph, star_graph
from django_overlays.graphs.decomposition import (
    TreeDecomposition,
    best_tree_decomposition,
    heuristic_tree_decomposition,
    separator_tree_decomposition,
)
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import Layering, restrict_layering, verify_layering
from django_overlays.overlays.overlay import Overlay, OverlayKind, embed_overlay, trivial_overlay
from django_overlays.overlays.system import (
    OverlaySystem,
    compose_overlays,
    component_lift,
    replicate_equal_size,
    system_thickness,
    validate_system,
)

logger = logging.getLogger(__name__)

__all__ = [
    "SystemBuilder",
    "WindowSpec",
    "Window",
    "windows_of",
    "check_residue_cover",
    "cap_levels",
    "windowed_members",
    "layering_lift",
    "decompose",
    "trivial_system",
    "component_system",
]

SystemBuilder = Callable[[Graph, int, "Layering | None"], OverlaySystem]
"""``(graph, k, layering or None) -> system`` of thickness at most ``1+1/k``."""


class WindowSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    j: int
    delta: int = Field(ge=1)
    r: int = Field(ge=1)

    @classmethod
    def for_baker(cls, j: int, r: int, k: int) -> WindowSpec:
        return cls(j=j, delta=6 * k * r, r=r)

    @property
    def first(self) -> int:
        return self.j - self.r

    @property
    def last(self) -> int:
        return self.j + self.delta + self.r - 1

    def cap(self, i: int) -> int:
        """Largest level allowed on layer ``i``: ``r`` in the core, falling by one per buffer layer."""
        if i < self.j:
            return max(self.r - (self.j - i), 0)
        end = self.j + self.delta - 1
        if i > end:
            return max(self.r - (i - end), 0)
        return self.r


class Window(BaseModel):
    """A window subgraph with its embedding and the layering it inherits."""

    model_config = ConfigDict(frozen=True)

    spec: WindowSpec
    graph: Graph
    embedding: tuple[int, ...]
    layering: Layering


def windows_of(g: Graph, l: Layering, delta: int, r: int) -> list[Window]:
    """Every non-empty window ``G_j`` for ``j`` in ``2-Δ-r .. d+r``."""
    windows = []
    for j in range(2 - delta - r, l.depth + r + 1):
        spec = WindowSpec(j=j, delta=delta, r=r)
        vertices = l.span(spec.first, spec.last)
        if not vertices:
            continue
        sub, embedding = g.induced_subgraph(vertices)
        layering = restrict_layering(
            l, embedding, first=spec.first, last=spec.last, host_hash=sub.content_hash
        )
        windows.append(Window(spec=spec, graph=sub, embedding=embedding, layering=layering))
    return windows


def check_residue_cover(windows: Sequence[Window], l: Layering, delta: int, r: int) -> None:
    """
    Every non-empty layer lies in windows of exactly ``2r`` residues twice and
    in the others once.

    Raises:
        BuilderError: Naming the first layer where this fails.
    """
    for i, layer in enumerate(l.layers, start=1):
        if not layer:
            continue
        counts: dict[int, int] = {}
        for window in windows:
            if window.spec.first <= i <= window.spec.last:
                residue = window.spec.j % delta
                counts[residue] = counts.get(residue, 0) + 1
        doubled = sum(1 for b in range(delta) if counts.get(b, 0) == 2)
        single = sum(1 for b in range(delta) if counts.get(b, 0) == 1)
        if doubled != 2 * r or doubled + single != delta:
            raise BuilderError(
                f"layer {i} is covered twice by {doubled} residues, expected {2 * r}",
                code="E001",
                witness=[i],
            )


def cap_levels(
    o: Overlay, window: Window, host: Graph, host_star: StarGraph | None = None
) -> Overlay:
    """
    Re-target an overlay of ``window.graph`` onto ``host`` and cap levels by layer:
    a base preimage gets ``min(ell, cap(layer))``, a star preimage the largest cap
    among its neighbours.
    """
    spec = window.spec
    layer_of = window.layering.layer_of
    caps = [0] * o.h.n
    star_fibres = []
    for x, v in enumerate(o.f):
        if o.star is not None and o.star.is_star_vertex(v):
            star_fibres.append(x)
        else:
            caps[x] = spec.cap(layer_of[v] + spec.first - 1)
    for x in star_fibres:
        caps[x] = max((caps[y] for y in o.h.neighbors(x)), default=0)
    ell = [min(level, cap) for level, cap in zip(o.ell, caps)]
    return embed_overlay(o, host, window.embedding, host_star, ell)


def windowed_members(
    g: Graph,
    l: Layering,
    delta: int,
    r: int,
    window_members: Callable[[Window], Sequence[Overlay]],
    kind: OverlayKind | None = None,
) -> list[Overlay]:
    """
    Build members per window, cap them onto ``g``, compose windows of equal
    residue index by index and list the results residue by residue. Every
    window must yield the same number of members.
    """
    windows = windows_of(g, l, delta, r)
    check_residue_cover(windows, l, delta, r)
    per_window = [list(window_members(window)) for window in windows]
    sizes = {len(members) for members in per_window}
    if len(sizes) != 1:
        raise BuilderError(f"windows yield different sizes {sorted(sizes)}", code="E002")
    size = sizes.pop()
    kinds = {m.kind for members in per_window for m in members}
    host_star = star_graph(g) if OverlayKind.STAR in kinds else None
    capped = [
        [cap_levels(m, window, g, host_star) for m in members]
        for window, members in zip(windows, per_window)
    ]
    result = []
    for b in range(delta):
        group = [c for window, c in zip(windows, capped) if window.spec.j % delta == b]
        if not group:
            continue
        result.extend(compose_overlays([c[i] for c in group]) for i in range(size))
    logger.debug(
        "Windowed %r into %d windows, %d members", g, len(windows), len(result)
    )
    return result


def layering_lift(
    g: Graph, l: Layering, r: int, k: int, base: SystemBuilder
) -> OverlaySystem:
    """
    Lift a base builder over a layering. With ``Δ = 6kr`` a layering of depth at
    most ``Δ`` goes straight to the base; otherwise each window gets a base
    system at ``6k``, sizes are equalised and the residues are united. The result
    has thickness at most ``1+1/k``.
    """
    valid, edge = verify_layering(g, l)
    if not valid:
        raise BuilderError(f"edge {edge} skips a layer", code="E003", witness=list(edge))
    delta = 6 * k * r
    if l.depth <= delta:
        logger.debug("Layering of depth %d fits one window of %d", l.depth, delta)
        return base(g, k, l)

    windows = windows_of(g, l, delta, r)
    systems = [base(w.graph, 6 * k, w.layering) for w in windows]
    limit = 1 + Fraction(1, 6 * k)
    for window, s in zip(windows, systems):
        _, thickest = system_thickness(s)
        if thickest > limit:
            raise BuilderError(
                f"base system of window {window.spec.j} has thickness {thickest} > {limit}",
                code="E004",
                witness=[window.spec.j],
            )
        if s.r != r:
            raise BuilderError(f"base system radius {s.r} differs from {r}", code="E005")
    if len({s.size for s in systems}) > 1:
        systems = replicate_equal_size(systems, 2 * k)
    by_window = {w.spec.j: s for w, s in zip(windows, systems)}
    members = windowed_members(
        g, l, delta, r, lambda window: by_window[window.spec.j].members
    )
    system = OverlaySystem(
        members=tuple(members),
        declared_tw=max(s.declared_tw for s in systems),
        declared_thickness=1 + Fraction(1, k),
    )
    validate_system(system)
    logger.info(
        "Layering lift of %r: depth %d, %d windows, %d members",
        g,
        l.depth,
        len(windows),
        system.size,
    )
    return system


def decompose(g: Graph, decomposer: str = "best") -> TreeDecomposition:
    if decomposer == "best":
        return best_tree_decomposition(g)
    if decomposer == "separator":
        return separator_tree_decomposition(g)
    return heuristic_tree_decomposition(g, decomposer)


def trivial_system(
    g: Graph, r: int, decomposer: str = "best", kind: OverlayKind = OverlayKind.S
) -> OverlaySystem:
    """The one-member system ``{(G, id, r)}``, thickness 1."""
    td = decompose(g, decomposer)
    return OverlaySystem.build([trivial_overlay(g, r, td, kind)], declared_thickness=Fraction(1))


def component_system(g: Graph, k: int, builder: SystemBuilder) -> OverlaySystem:
    """Build a system per connected component at ``3k`` and lift them onto ``g``."""
    components = g.components()
    if len(components) <= 1:
        return builder(g, k, None)
    systems = [builder(g.induced_subgraph(c)[0], 3 * k, None) for c in components]
    return component_lift(g, systems, k)
