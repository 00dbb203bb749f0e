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
Apex vertices: adding a vertex set ``A`` to every member of a system of
``G - A``, and rooted systems whose root set is covered with thickness one.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable

from django_overlays.builders.windows import SystemBuilder
from django_overlays.errors import BuilderError
from django_overlays.graphs.cliques import StarGraph, star_graph
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import (
    Overlay,
    OverlayKind,
    as_kind,
    restrict_to_induced,
)
from django_overlays.overlays.system import OverlaySystem, system_thickness, validate_system

logger = logging.getLogger(__name__)

__all__ = ["apex_lift", "rooted_system"]


def _lift_member(
    g: Graph,
    apex: list[int],
    embedding: tuple[int, ...],
    o: Overlay,
    host_star: StarGraph | None,
) -> Overlay:
    n0 = o.h.n
    host = host_star.star if host_star is not None else g
    if host_star is not None:
        mapping = host_star.embedding_from(o.star, embedding)
    else:
        mapping = embedding
    f = [mapping[v] for v in o.f] + apex
    ell = list(o.ell) + [o.r] * len(apex)
    copy_of = {a: n0 + i for i, a in enumerate(apex)}
    edges = list(o.h.edges())
    for i, a in enumerate(apex):
        edges.extend((copy_of[a], copy_of[b]) for b in apex[i + 1 :] if g.has_edge(a, b))
        edges.extend((copy_of[a], y) for y in range(n0) if host.has_edge(a, f[y]))
    td = o.td.with_added(copy_of.values())
    bags = [set(bag) for bag in td.bags]
    parent = list(td.parent)

    if host_star is not None:
        apex_set = set(apex)
        copies = set(copy_of.values())
        position = {v: i for i, v in enumerate(embedding)}
        for clique in host_star.cliques:
            inside = [v for v in clique if v in apex_set]
            if not inside:
                continue
            target = host_star.star_vertex(clique)
            if len(inside) == len(clique):
                x = len(f)
                f.append(target)
                ell.append(o.r)
                edges.extend((copy_of[a], x) for a in inside)
                bags.append(copies | {x})
                parent.append(td.root)
                continue
            # A clique meeting both sides: copy every preimage of its outer part.
            outer = o.star.star_vertex(position[v] for v in clique if v not in apex_set)
            for y in o.fibres[outer]:
                x = len(f)
                f.append(target)
                ell.append(o.ell[y])
                neighbours = o.h.neighbors(y)
                edges.extend((x, z) for z in neighbours)
                edges.extend((copy_of[a], x) for a in inside)
                holder = td.bag_containing([y, *neighbours])
                bags.append(set(neighbours) | {x} | copies)
                parent.append(holder)

    return Overlay(
        base=g,
        star=host_star,
        r=o.r,
        kind=o.kind,
        h=Graph.from_edges(len(f), edges),
        f=tuple(f),
        ell=tuple(ell),
        td=TreeDecomposition.build(bags, parent, td.root),
    )


def apex_lift(g: Graph, apex: Iterable[int], sub_system: OverlaySystem) -> OverlaySystem:
    """
    Extend a system of ``G - A`` to ``G`` by adding one level-``r`` copy of each
    apex vertex to every member (and to every bag). Kind ★ members also gain the
    star vertices of cliques meeting ``A``. Thickness on ``A`` is 1; widths grow
    by at most ``|A|``.

    Raises:
        BuilderError: For kind S systems or a system that does not overlay ``G - A``.
    """
    apex = sorted(set(apex))
    if any(not 0 <= a < g.n for a in apex):
        raise BuilderError("apex vertices must be vertices of the graph", code="E010")
    rest = [v for v in g.vertices if v not in set(apex)]
    sub, embedding = g.induced_subgraph(rest)
    if sub_system.host_hash != sub.content_hash:
        raise BuilderError("system does not overlay G - A", code="E011")
    if not apex:
        return sub_system
    if sub_system.kind is OverlayKind.S:
        raise BuilderError(
            "apex vertices break subgraph-based overlays; relabel the system as kind A",
            code="E012",
        )
    host_star = star_graph(g) if sub_system.kind is OverlayKind.STAR else None
    members = [_lift_member(g, apex, embedding, m, host_star) for m in sub_system.members]
    system = OverlaySystem(
        members=tuple(members),
        declared_tw=sub_system.declared_tw + len(apex),
        declared_thickness=sub_system.declared_thickness,
    )
    validate_system(system)
    logger.debug("Apex lift of %r over %d apex vertices", g, len(apex))
    return system


def rooted_system(
    g: Graph, roots: Iterable[int], r: int, k: int, builder: SystemBuilder
) -> OverlaySystem:
    """
    A system of ``G`` with thickness exactly 1 on ``roots``: build one for ``G``,
    restrict it to ``G - roots`` (kind S is relabelled A first) and put the
    roots back as apex vertices.
    """
    roots = sorted(set(roots))
    system = builder(g, k, None)
    if system.r != r:
        raise BuilderError(f"builder produced radius {system.r}, expected {r}", code="E013")
    if not roots:
        return system
    kind = OverlayKind.A if system.kind is OverlayKind.S else system.kind
    rest = [v for v in g.vertices if v not in set(roots)]
    members = tuple(restrict_to_induced(as_kind(m, kind), rest) for m in system.members)
    sub_system = OverlaySystem(
        members=members,
        declared_tw=system.declared_tw,
        declared_thickness=system.declared_thickness,
    )
    lifted = apex_lift(g, roots, sub_system)
    per_vertex, _ = system_thickness(lifted)
    thick = [v for v in roots if per_vertex[v] != 1]
    if thick:
        raise BuilderError("roots are not covered exactly once", code="E014", witness=thick)
    return lifted
