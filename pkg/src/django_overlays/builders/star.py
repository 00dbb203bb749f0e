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
Kind ★ systems: converting subgraph-based systems, and gluing systems along a
star sum ``G = G_0 ⊕ (G_1, ..., G_m)`` whose rays meet the center in cliques.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from fractions import Fraction

from django_overlays.builders.apex import apex_lift
from django_overlays.errors import BuilderError
from django_overlays.graphs.cliques import degeneracy_and_cliques, star_graph
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import Overlay, OverlayKind, verify_overlay
from django_overlays.overlays.system import (
    OverlaySystem,
    replicate_equal_size,
    system_thickness,
    validate_system,
)

logger = logging.getLogger(__name__)

__all__ = ["sgbas_to_star", "star_sum_lift", "star_sum_system", "StarBuilder", "RayBuilder"]

StarBuilder = Callable[[Graph, int], OverlaySystem]
"""``(graph, k) -> kind ★ system`` of thickness at most ``1+1/k``."""

RayBuilder = Callable[[Graph, int, tuple[int, ...]], OverlaySystem]
"""Like ``StarBuilder``, also told which vertices of the whole graph the interior holds."""


def _to_star(o: Overlay, host_star) -> Overlay:
    f = list(o.f)
    ell = list(o.ell)
    edges = list(o.h.edges())
    bags = [set(bag) for bag in o.td.bags]
    parent = list(o.td.parent)
    for component in o.h.components():
        sub, embedding = o.h.induced_subgraph(component)
        for clique in degeneracy_and_cliques(sub).cliques:
            members = [embedding[q] for q in clique]
            x = len(f)
            f.append(host_star.star_vertex(o.f[y] for y in members))
            ell.append(max(o.ell[y] for y in members))
            edges.extend((x, y) for y in members)
            bags.append(set(members) | {x})
            parent.append(o.td.bag_containing(members))
    return Overlay(
        base=o.base,
        star=host_star,
        r=o.r,
        kind=OverlayKind.STAR,
        h=Graph.from_edges(len(f), edges),
        f=tuple(f),
        ell=tuple(ell),
        td=TreeDecomposition.build(bags, parent, o.td.root),
    )


def sgbas_to_star(system: OverlaySystem) -> OverlaySystem:
    """
    Turn a subgraph-based system into a kind ★ one with the same thickness on
    base vertices: each clique ``K`` inside a member component gets one vertex
    over ``v_K``, at the largest level of its clique. Widths grow by one.
    """
    if system.kind is not OverlayKind.S:
        raise BuilderError(
            f"expected a subgraph-based system, got kind {system.kind.value}", code="E020"
        )
    for index, member in enumerate(system.members):
        check = verify_overlay(member)
        if not check.ok:
            raise BuilderError(
                f"member {index} is not subgraph-based: {check.message}",
                code="E021",
                witness=[index],
            )
    host_star = star_graph(system.base)
    members = tuple(_to_star(m, host_star) for m in system.members)
    result = OverlaySystem(
        members=members,
        declared_tw=system.declared_tw + 1,
        declared_thickness=system.declared_thickness,
    )
    validate_system(result)
    return result


def _check_star_sum(
    g: Graph, center: Sequence[int], rays: Sequence[Sequence[int]]
) -> list[tuple[int, ...]]:
    center_set = set(center)
    covered = set(center_set)
    attachments = []
    for i, ray in enumerate(rays):
        attachment = tuple(sorted(center_set.intersection(ray)))
        if not g.is_clique(attachment):
            raise BuilderError(
                f"ray {i} meets the center outside a clique", code="E030", witness=list(attachment)
            )
        for j, other in enumerate(rays[:i]):
            stray = (set(ray) & set(other)) - center_set
            if stray:
                raise BuilderError(
                    f"rays {j} and {i} share vertices outside the center",
                    code="E031",
                    witness=sorted(stray),
                )
        covered.update(ray)
        attachments.append(attachment)
    if covered != set(g.vertices):
        raise BuilderError(
            "center and rays do not cover the graph",
            code="E032",
            witness=sorted(set(g.vertices) - covered),
        )
    pieces = [center_set] + [set(ray) for ray in rays]
    for u, v in g.edges():
        if not any(u in piece and v in piece for piece in pieces):
            raise BuilderError(f"edge {u}-{v} lies in no piece", code="E033", witness=[u, v])
    return attachments


def star_sum_lift(
    g: Graph,
    center: Sequence[int],
    center_system: OverlaySystem,
    rays: Sequence[tuple[Sequence[int], OverlaySystem]],
) -> OverlaySystem:
    """
    Glue kind ★ systems of ``G[V_0]`` and of the rays ``G[V_i]`` into a system of
    ``G``. Every ray system must have thickness 1 on its attachment ``A_i``, and
    all ray systems the same size ``c``.

    For every pair of members ``(L_0, L_i)`` each preimage ``x`` of ``v_{A_i}`` in
    ``L_0`` receives a copy of ``L_i`` minus the preimages of cliques inside
    ``A_i``, identified with ``N(x)`` over ``A_i``. The result has ``|𝓛_0|·c``
    members.
    """
    center = sorted(set(center))
    sub0, emb0 = g.induced_subgraph(center)
    if center_system.kind is not OverlayKind.STAR:
        raise BuilderError("center system must have kind star", code="E034")
    if center_system.host_hash != sub0.content_hash:
        raise BuilderError("center system does not overlay G[V_0]", code="E035")
    attachments = _check_star_sum(g, center, [ray for ray, _ in rays])
    if not rays:
        if sub0.content_hash != g.content_hash:
            raise BuilderError("the center alone must be the whole graph", code="E036")
        return center_system

    prepared = []
    for i, ((ray, system), attachment) in enumerate(zip(rays, attachments)):
        sub, emb = g.induced_subgraph(ray)
        if system.kind is not OverlayKind.STAR or system.host_hash != sub.content_hash:
            raise BuilderError(
                f"ray {i} system is not a kind star system of G[V_{i + 1}]",
                code="E037",
                witness=[i],
            )
        position = {v: p for p, v in enumerate(emb)}
        attached = [position[a] for a in attachment]
        per_vertex, _ = system_thickness(system)
        thick = [emb[a] for a in attached if per_vertex[a] != 1]
        if thick:
            raise BuilderError(
                f"ray {i} system is not thin on its attachment", code="E038", witness=thick
            )
        prepared.append((emb, attached, system))
    sizes = {system.size for _, _, system in prepared}
    if len(sizes) != 1:
        raise BuilderError(f"ray systems differ in size: {sorted(sizes)}", code="E039")
    size = sizes.pop()

    host_star = star_graph(g)
    center_map = host_star.embedding_from(center_system.star, emb0)
    center_position = {v: p for p, v in enumerate(emb0)}

    members = []
    for l0 in center_system.members:
        for index in range(size):
            members.append(
                _glue(g, host_star, l0, center_map, center_position, prepared, index, attachments)
            )
    declared = center_system.declared_thickness * max(
        [Fraction(1)] + [system.declared_thickness for _, _, system in prepared]
    )
    result = OverlaySystem(
        members=tuple(members),
        declared_tw=max(
            [center_system.declared_tw] + [system.declared_tw for _, _, system in prepared]
        ),
        declared_thickness=declared,
    )
    validate_system(result)
    logger.debug("Star sum of %r: %d rays, %d members", g, len(rays), result.size)
    return result


def _glue(g, host_star, l0, center_map, center_position, prepared, index, attachments) -> Overlay:
    f = [center_map[v] for v in l0.f]
    ell = list(l0.ell)
    edges = list(l0.h.edges())
    bags = [set(bag) for bag in l0.td.bags]
    parent = list(l0.td.parent)
    for (emb, attached, system), attachment in zip(prepared, attachments):
        li = system.members[index]
        ray_star = li.star
        attached_set = set(attached)
        inner = {
            ray_star.star_vertex(clique)
            for clique in ray_star.cliques
            if attached_set.issuperset(clique)
        }
        fibre = {li.fibres[a][0]: a for a in attached}
        copied = [x for x in li.h.vertices if x not in fibre and li.f[x] not in inner]
        ray_map = host_star.embedding_from(ray_star, emb)

        if attachment:
            hub = l0.star.star_vertex(center_position[a] for a in attachment)
            anchors = list(l0.fibres[hub])
        else:
            anchors = [None]
        for x in anchors:
            ids: dict[int, int] = {}
            if x is not None:
                over = {l0.f[y]: y for y in l0.h.neighbors(x)}
                for y, a in fibre.items():
                    target = over.get(center_position[emb[a]])
                    if target is None:
                        raise BuilderError(
                            f"preimage {x} of the attachment clique misses {emb[a]}",
                            code="E040",
                            witness=[x, emb[a]],
                        )
                    ids[y] = target
            for y in copied:
                ids[y] = len(f)
                f.append(ray_map[li.f[y]])
                ell.append(li.ell[y] if x is None else min(li.ell[y], l0.ell[x]))
            edges.extend(
                (ids[p], ids[q])
                for p, q in li.h.edges()
                if p in ids and q in ids and not (p in fibre and q in fibre)
            )
            piece = li.td.restricted(ids)
            piece = piece.rerooted(piece.bag_containing(ids[y] for y in fibre))
            offset = len(bags)
            bags.extend(set(bag) for bag in piece.bags)
            holder = l0.td.root if x is None else l0.td.bag_containing([x, *l0.h.neighbors(x)])
            parent.extend(
                holder if node == piece.root else p + offset
                for node, p in enumerate(piece.parent)
            )
    return Overlay(
        base=g,
        star=host_star,
        r=l0.r,
        kind=OverlayKind.STAR,
        h=Graph.from_edges(len(f), edges),
        f=tuple(f),
        ell=tuple(ell),
        td=TreeDecomposition.build(bags, parent, l0.td.root),
    )


def star_sum_system(
    g: Graph,
    center: Sequence[int],
    center_builder: StarBuilder,
    ray_builder: RayBuilder,
    k: int,
) -> OverlaySystem:
    """
    Build a system of ``G`` from its star sum decomposition around ``center``:
    each component ``C`` of ``G - V_0`` forms the ray ``C ∪ N(C)``, whose
    attachment ``N(C) ∩ V_0`` must be a clique. The center is built at ``3k``,
    ray interiors at ``9k`` and then topped with their attachment as apex
    vertices; unequal ray sizes are replicated at ``3k``.
    """
    center = sorted(set(center))
    if not center:
        raise BuilderError("the center of a star sum cannot be empty", code="E041")
    sub0, _ = g.induced_subgraph(center)
    center_system = center_builder(sub0, 3 * k)
    center_set = set(center)
    rays = []
    for component in g.components(v for v in g.vertices if v not in center_set):
        attachment = sorted({u for v in component for u in g.neighbors(v) if u in center_set})
        if not g.is_clique(attachment):
            raise BuilderError(
                "a component attaches to a non-clique", code="E042", witness=attachment
            )
        ray = sorted(set(component) | set(attachment))
        ray_graph, ray_emb = g.induced_subgraph(ray)
        interior, _ = g.induced_subgraph(component)
        inner = ray_builder(interior, 9 * k, component)
        position = {v: p for p, v in enumerate(ray_emb)}
        rays.append((ray, apex_lift(ray_graph, [position[a] for a in attachment], inner)))
    if len({system.size for _, system in rays}) > 1:
        replicated = replicate_equal_size([system for _, system in rays], 3 * k)
        rays = [(ray, system) for (ray, _), system in zip(rays, replicated)]
    return star_sum_lift(g, center, center_system, rays)
