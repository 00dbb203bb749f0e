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
Overlay systems: multisets of overlays of one host, and the algebra that
combines them (composition, replication to a common size, union, lifting over
connected components).

Thickness is kept exact: ``θ(v)`` is the average fibre size of ``v`` over the
members, a ``Fraction``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator
from typing_extensions import Self

from django_overlays.errors import SystemAlgebraError
from django_overlays.graphs.cliques import StarGraph, star_graph
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import (
    Overlay,
    OverlayKind,
    embed_overlay,
    verify_overlay,
)

logger = logging.getLogger(__name__)

__all__ = [
    "OverlaySystem",
    "SystemReport",
    "MemberFailure",
    "verify_system",
    "validate_system",
    "system_thickness",
    "compose_overlays",
    "compose_systems",
    "replicate_equal_size",
    "union_systems",
    "component_lift",
    "accounting_identity",
    "counting_bound",
]


class OverlaySystem(BaseModel):
    """
    An ordered multiset of overlays sharing host, kind and radius, with a declared
    bound on member treewidth and on thickness.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    members: tuple[Overlay, ...] = Field(min_length=1)
    declared_tw: int
    declared_thickness: Fraction

    @model_validator(mode="after")
    def check_shared(self) -> Self:
        first = self.members[0]
        for i, member in enumerate(self.members[1:], start=1):
            if member.host_hash != first.host_hash:
                raise ValueError(f"member {i} overlays a different host")
            if member.kind is not first.kind or member.r != first.r:
                raise ValueError(f"member {i} differs in kind or radius")
        return self

    @classmethod
    def build(
        cls,
        members: Sequence[Overlay],
        declared_tw: int | None = None,
        declared_thickness: Fraction | None = None,
    ) -> OverlaySystem:
        """
        Create and validate a system. Missing declarations default to the
        recomputed width and thickness.
        """
        if not members:
            raise SystemAlgebraError("an overlay system needs at least one member", code="E001")
        _check_shared(members)
        if declared_tw is None:
            declared_tw = max(m.td.width for m in members)
        if declared_thickness is None:
            declared_thickness = _max_thickness(members)
        system = cls(
            members=tuple(members),
            declared_tw=declared_tw,
            declared_thickness=Fraction(declared_thickness),
        )
        validate_system(system)
        return system

    @property
    def base(self) -> Graph:
        return self.members[0].base

    @property
    def star(self) -> StarGraph | None:
        return self.members[0].star

    @property
    def host(self) -> Graph:
        return self.members[0].host

    @property
    def host_hash(self) -> str:
        return self.members[0].host_hash

    @property
    def kind(self) -> OverlayKind:
        return self.members[0].kind

    @property
    def r(self) -> int:
        return self.members[0].r

    @property
    def size(self) -> int:
        return len(self.members)

    def max_width(self) -> int:
        return max(m.td.width for m in self.members)


def _check_shared(members: Sequence[Overlay]) -> None:
    first = members[0]
    for i, member in enumerate(members):
        if member.host_hash != first.host_hash:
            raise SystemAlgebraError(
                "members overlay different hosts", code="E002", witness=[0, i]
            )
        if member.kind is not first.kind:
            raise SystemAlgebraError(
                f"members mix kinds {first.kind.value} and {member.kind.value}",
                code="E003",
                witness=[0, i],
            )
        if member.r != first.r:
            raise SystemAlgebraError(
                f"members mix radii {first.r} and {member.r}", code="E004", witness=[0, i]
            )


def _totals(members: Sequence[Overlay]) -> list[int]:
    totals = [0] * members[0].host.n
    for member in members:
        for v in member.f:
            totals[v] += 1
    return totals


def _max_thickness(members: Sequence[Overlay]) -> Fraction:
    return Fraction(max(_totals(members), default=0), len(members))


def system_thickness(s: OverlaySystem) -> tuple[tuple[Fraction, ...], Fraction]:
    """Per host vertex thickness and its maximum."""
    per_vertex = tuple(Fraction(total, s.size) for total in _totals(s.members))
    return per_vertex, max(per_vertex, default=Fraction(0))


class MemberFailure(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    clause: str
    witness: tuple[int, ...]
    message: str


class SystemReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ok: bool
    size: int
    kind: OverlayKind
    max_width: int
    declared_tw: int
    max_thickness: Fraction
    declared_thickness: Fraction
    failures: tuple[MemberFailure, ...] = ()

    @field_serializer("max_thickness", "declared_thickness")
    def dump_fraction(self, value: Fraction) -> str:
        return str(value)


def verify_system(s: OverlaySystem) -> SystemReport:
    """Verify every member and compare recomputed width and thickness to the declarations."""
    failures = []
    for index, member in enumerate(s.members):
        check = verify_overlay(member)
        if not check.ok:
            failures.append(
                MemberFailure(
                    index=index,
                    clause=check.clause,
                    witness=check.witness,
                    message=check.message,
                )
            )
    _, thickest = system_thickness(s)
    width = s.max_width()
    return SystemReport(
        ok=not failures and width <= s.declared_tw and thickest <= s.declared_thickness,
        size=s.size,
        kind=s.kind,
        max_width=width,
        declared_tw=s.declared_tw,
        max_thickness=thickest,
        declared_thickness=s.declared_thickness,
        failures=tuple(failures),
    )


def validate_system(s: OverlaySystem) -> None:
    """
    Raises:
        SystemAlgebraError: If a member is not a valid overlay of its kind, or the
            recomputed width or thickness exceeds what is declared.
    """
    report = verify_system(s)
    if report.failures:
        failure = report.failures[0]
        raise SystemAlgebraError(
            f"member {failure.index} fails {failure.clause}: {failure.message}",
            code="E010",
            witness={"member": failure.index, "clause": failure.clause, "witness": failure.witness},
        )
    if report.max_width > s.declared_tw:
        raise SystemAlgebraError(
            f"member width {report.max_width} exceeds declared {s.declared_tw}", code="E011"
        )
    if report.max_thickness > s.declared_thickness:
        raise SystemAlgebraError(
            f"thickness {report.max_thickness} exceeds declared {s.declared_thickness}",
            code="E012",
        )


def compose_overlays(overlays: Sequence[Overlay]) -> Overlay:
    """
    Disjoint union of overlays of one host. Each member decomposition hangs off
    its own bag of a fresh chain of empty bags.
    """
    if not overlays:
        raise SystemAlgebraError("nothing to compose", code="E020")
    _check_shared(overlays)
    if len(overlays) == 1:
        return overlays[0]
    first = overlays[0]
    chain = len(overlays)
    bags: list[tuple[int, ...]] = [()] * chain
    parent: list[int] = [-1] + list(range(chain - 1))
    edges: list[tuple[int, int]] = []
    f: list[int] = []
    ell: list[int] = []
    offset = 0
    for position, o in enumerate(overlays):
        edges.extend((x + offset, y + offset) for x, y in o.h.edges())
        f.extend(o.f)
        ell.extend(o.ell)
        start = len(bags)
        bags.extend(tuple(v + offset for v in bag) for bag in o.td.bags)
        parent.extend(
            position if node == o.td.root else p + start for node, p in enumerate(o.td.parent)
        )
        offset += o.h.n
    return Overlay(
        base=first.base,
        star=first.star,
        r=first.r,
        kind=first.kind,
        h=Graph.from_edges(offset, edges),
        f=tuple(f),
        ell=tuple(ell),
        td=TreeDecomposition.build(bags, parent, 0),
    )


def compose_systems(
    systems: Sequence[OverlaySystem], declared_thickness: Fraction | None = None
) -> OverlaySystem:
    """
    Member-wise composition of equally sized systems. Thickness adds up, so the
    default declaration is the sum of the declared thicknesses.
    """
    if not systems:
        raise SystemAlgebraError("nothing to compose", code="E021")
    sizes = {s.size for s in systems}
    if len(sizes) != 1:
        raise SystemAlgebraError(
            f"systems differ in size: {sorted(sizes)}", code="E022", witness=sorted(sizes)
        )
    members = [
        compose_overlays([s.members[i] for s in systems]) for i in range(systems[0].size)
    ]
    if declared_thickness is None:
        declared_thickness = sum((s.declared_thickness for s in systems), Fraction(0))
    return OverlaySystem.build(
        members,
        declared_tw=max(s.declared_tw for s in systems),
        declared_thickness=declared_thickness,
    )


def replicate_equal_size(systems: Sequence[OverlaySystem], k: int) -> list[OverlaySystem]:
    """
    Bring systems of thickness at most ``1+1/(3k)`` to the common size ``3ka``
    (``a`` the largest input size) by repeating members round robin. Every output
    has thickness below ``1+1/k``.
    """
    if not systems:
        return []
    if k < 1:
        raise SystemAlgebraError("k must be positive", code="E030")
    limit = 1 + Fraction(1, 3 * k)
    for i, s in enumerate(systems):
        _, thickest = system_thickness(s)
        if thickest > limit:
            raise SystemAlgebraError(
                f"system {i} has thickness {thickest} > {limit}", code="E031", witness=[i]
            )
    target = 3 * k * max(s.size for s in systems)
    logger.debug("Replicating %d systems to size %d", len(systems), target)
    return [
        OverlaySystem.build(
            [s.members[i % s.size] for i in range(target)],
            declared_tw=s.declared_tw,
            declared_thickness=1 + Fraction(1, k),
        )
        for s in systems
    ]


def union_systems(
    systems: Sequence[OverlaySystem], declared_thickness: Fraction | None = None
) -> OverlaySystem:
    """Multiset union; the default declaration is the size-weighted average."""
    if not systems:
        raise SystemAlgebraError("nothing to unite", code="E040")
    members = [m for s in systems for m in s.members]
    if declared_thickness is None:
        total = sum(s.size for s in systems)
        declared_thickness = sum(
            (s.declared_thickness * s.size for s in systems), Fraction(0)
        ) / total
    return OverlaySystem.build(
        members,
        declared_tw=max(s.declared_tw for s in systems),
        declared_thickness=declared_thickness,
    )


def component_lift(g: Graph, systems: Sequence[OverlaySystem], k: int) -> OverlaySystem:
    """
    Lift one system per connected component of ``g`` (in component order, each
    over the induced component) to a system of ``g``.
    """
    components = g.components()
    if len(systems) != len(components):
        raise SystemAlgebraError(
            f"{len(components)} components but {len(systems)} systems", code="E050"
        )
    subgraphs = [g.induced_subgraph(c) for c in components]
    for i, (s, (sub, _)) in enumerate(zip(systems, subgraphs)):
        if s.host_hash != sub.content_hash:
            raise SystemAlgebraError(
                f"system {i} does not overlay component {i}", code="E051", witness=[i]
            )
    if len(systems) == 1:
        return systems[0]
    host_star = star_graph(g) if systems[0].kind is OverlayKind.STAR else None
    replicated = replicate_equal_size(systems, k)
    embedded = [
        OverlaySystem(
            members=tuple(
                embed_overlay(m, g, embedding, host_star) for m in s.members
            ),
            declared_tw=s.declared_tw,
            declared_thickness=s.declared_thickness,
        )
        for s, (_, embedding) in zip(replicated, subgraphs)
    ]
    # Components are disjoint, so thickness does not add up.
    return compose_systems(embedded, declared_thickness=1 + Fraction(1, k))


def accounting_identity(s: OverlaySystem) -> bool:
    """``Σ_L |V(h_L)| = |𝓛| · Σ_v θ(v)``."""
    per_vertex, _ = system_thickness(s)
    return sum(m.h.n for m in s.members) == s.size * sum(per_vertex)


def counting_bound(s: OverlaySystem, k: int) -> tuple[bool, int | None, int]:
    """
    Check that every host vertex has thickness 1 in all but at most ``|𝓛|/k``
    members. Returns ``(ok, worst vertex, its count)``.
    """
    counts = [0] * s.host.n
    for member in s.members:
        for v, fibre in enumerate(member.fibres):
            if len(fibre) != 1:
                counts[v] += 1
    if not counts:
        return True, None, 0
    worst = max(range(len(counts)), key=lambda v: (counts[v], -v))
    return k * counts[worst] <= s.size, worst, counts[worst]
