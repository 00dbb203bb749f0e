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
Systems for shadow-complete layerings: the first layer is the center of a star
sum whose rays are the components of the deeper layers, recursively.
"""

from __future__ import annotations

import logging

from django_overlays.builders.star import StarBuilder, star_sum_system
from django_overlays.builders.windows import layering_lift
from django_overlays.errors import BuilderError
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import (
    Layering,
    restrict_layering,
    shadow_violation,
    verify_layering,
)
from django_overlays.overlays.overlay import OverlayKind
from django_overlays.overlays.system import OverlaySystem

logger = logging.getLogger(__name__)

__all__ = ["shadow_lift", "shadow_layering_lift"]


def _check_shadow(g: Graph, l: Layering) -> None:
    valid, edge = verify_layering(g, l)
    if not valid:
        raise BuilderError(f"edge {edge} skips a layer", code="E050", witness=list(edge))
    violation = shadow_violation(g, l)
    if violation is not None:
        raise BuilderError(
            f"layering is not shadow-complete at layer {violation.layer}",
            code="E051",
            witness=violation.model_dump(),
        )


def shadow_lift(
    g: Graph, l: Layering, layer_builder: StarBuilder, r: int, k: int
) -> OverlaySystem:
    """
    Build a kind ★ system of thickness at most ``1+1/k`` from systems of the
    single layers. ``layer_builder`` is called on layer subgraphs at ``3k`` (the
    first layer) and deeper (inside rays).

    Raises:
        BuilderError: If the layering is invalid or not shadow-complete.
    """
    _check_shadow(g, l)
    l = restrict_layering(l, tuple(g.vertices), strip=True, host_hash=g.content_hash)
    if l.depth <= 1:
        system = layer_builder(g, k)
        if system.kind is not OverlayKind.STAR:
            raise BuilderError("layer builder must produce kind star systems", code="E052")
        if system.r != r:
            raise BuilderError(f"layer builder radius {system.r} differs from {r}", code="E053")
        return system

    def ray_builder(interior: Graph, kk: int, component: tuple[int, ...]) -> OverlaySystem:
        sub_layering = restrict_layering(
            l, component, first=2, strip=True, host_hash=interior.content_hash
        )
        return shadow_lift(interior, sub_layering, layer_builder, r, kk)

    logger.debug("Shadow lift of %r: depth %d, k=%d", g, l.depth, k)
    return star_sum_system(g, l.layer(1), layer_builder, ray_builder, k)


def shadow_layering_lift(
    g: Graph, l: Layering, layer_builder: StarBuilder, r: int, k: int
) -> OverlaySystem:
    """The layering lift over windows whose own systems come from ``shadow_lift``."""
    _check_shadow(g, l)

    def base(window: Graph, kk: int, window_layering: Layering | None) -> OverlaySystem:
        if window_layering is None:
            raise BuilderError("shadow windows need their layering", code="E054")
        stripped = restrict_layering(
            window_layering,
            tuple(window.vertices),
            first=1,
            last=window_layering.depth,
            strip=True,
            host_hash=window.content_hash,
        )
        return shadow_lift(window, stripped, layer_builder, r, kk)

    return layering_lift(g, l, r, k, base)
