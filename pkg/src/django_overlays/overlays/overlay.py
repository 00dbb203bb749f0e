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
Overlays ``(H, f, ℓ)`` of a host graph and their verification.

``f`` maps the vertices of ``H`` to the host (the base graph, or its star graph
for kind ★) and ``ℓ`` assigns each vertex a level in ``0..r``. An overlay is
walk-preserving when every host walk of length at most ``ℓ(x)`` from ``f(x)``
lifts to a walk of ``H`` from ``x``; it is an r-neighborhood overlay when in
addition every host vertex has a preimage at level ``r``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from enum import Enum
from functools import cached_property

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from django_overlays.errors import GraphError, OverlayError
from django_overlays.graphs.cliques import StarGraph, star_graph
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph

logger = logging.getLogger(__name__)

__all__ = [
    "OverlayKind",
    "Overlay",
    "OverlayCheck",
    "verify_overlay",
    "thickness_at",
    "lift_walk",
    "restrict_overlay",
    "restrict_to_induced",
    "trivial_overlay",
    "embed_overlay",
    "as_kind",
]


class OverlayKind(str, Enum):
    A = "A"
    S = "S"
    STAR = "star"


class Overlay(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: Graph
    star: StarGraph | None = None
    r: int = Field(ge=1)
    kind: OverlayKind
    h: Graph
    f: tuple[int, ...]
    ell: tuple[int, ...]
    td: TreeDecomposition

    @model_validator(mode="after")
    def check_structure(self) -> Self:
        if (self.kind is OverlayKind.STAR) != (self.star is not None):
            raise ValueError("kind star overlays, and only they, carry a star graph")
        if self.star is not None and self.star.base.content_hash != self.base.content_hash:
            raise ValueError("star graph is not built over the base graph")
        if len(self.f) != self.h.n or len(self.ell) != self.h.n:
            raise ValueError("f or ell is not total on V(h)")
        self.td.validate_for(self.h)
        return self

    @property
    def host(self) -> Graph:
        """The overlaid graph: the base, or its star graph for kind ★."""
        return self.star.star if self.star is not None else self.base

    @property
    def host_hash(self) -> str:
        return self.base.content_hash

    @cached_property
    def fibres(self) -> tuple[tuple[int, ...], ...]:
        buckets: list[list[int]] = [[] for _ in range(self.host.n)]
        for x, v in enumerate(self.f):
            if 0 <= v < len(buckets):
                buckets[v].append(x)
        return tuple(tuple(b) for b in buckets)

    def thickness(self) -> tuple[int, ...]:
        return tuple(len(fibre) for fibre in self.fibres)


class OverlayCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    clause: str | None = None
    witness: tuple[int, ...] = ()
    message: str = ""


def _fail(clause: str, message: str, *witness: int) -> OverlayCheck:
    return OverlayCheck(ok=False, clause=clause, witness=tuple(witness), message=message)


def verify_overlay(o: Overlay) -> OverlayCheck:
    """
    Check the overlay conditions for its kind, reporting the first failure.

    Clauses are tried in this order: homomorphism, level range (reported as
    neighborhood), subgraph-based (kind S), simpliciality (kind ★),
    walk-preserving, neighborhood.
    """
    host, h = o.host, o.h

    for x, v in enumerate(o.f):
        if not 0 <= v < host.n:
            return _fail("homomorphism", f"f({x})={v} is not a host vertex", x)
    for x, y in h.edges():
        if o.f[x] == o.f[y]:
            return _fail("homomorphism", f"adjacent {x},{y} share the image {o.f[x]}", x, y)
        if not host.has_edge(o.f[x], o.f[y]):
            return _fail("homomorphism", f"edge {x}-{y} maps to a non-edge", x, y)

    for x, level in enumerate(o.ell):
        if not 0 <= level <= o.r:
            return _fail("neighborhood", f"level {level} of {x} is outside 0..{o.r}", x)

    if o.kind is OverlayKind.S:
        for component in h.components():
            images = [o.f[x] for x in component]
            if len(set(images)) != len(images):
                return _fail("subgraph-based", "f is not injective on a component", *component)
            image = set(images)
            host_edges = sum(
                1 for v in image for u in host.neighbors(v) if u in image
            ) // 2
            own_edges = sum(1 for x in component for _ in h.neighbors(x)) // 2
            if host_edges != own_edges:
                return _fail("subgraph-based", "component image is not induced", *component)

    if o.kind is OverlayKind.STAR:
        for x, v in enumerate(o.f):
            if o.star.is_star_vertex(v) and not h.is_clique(h.neighbors(x)):
                return _fail(
                    "simpliciality", f"neighbours of {x} over star vertex {v} are not a clique", x
                )

    for x, level in enumerate(o.ell):
        if level < 1:
            continue
        best: dict[int, int] = {}
        for y in h.neighbors(x):
            best[o.f[y]] = max(best.get(o.f[y], -1), o.ell[y])
        for w in host.neighbors(o.f[x]):
            if best.get(w, -1) < level - 1:
                return _fail(
                    "walk-preserving",
                    f"{x} (level {level}) has no neighbour over {w} at level >= {level - 1}",
                    x,
                    w,
                )

    for v, fibre in enumerate(o.fibres):
        if not any(o.ell[x] == o.r for x in fibre):
            return _fail("neighborhood", f"host vertex {v} has no preimage at level {o.r}", v)

    return OverlayCheck(ok=True)


def thickness_at(o: Overlay, v: int) -> int:
    return len(o.fibres[v])


def lift_walk(o: Overlay, x: int, w: Sequence[int]) -> tuple[int, ...]:
    """
    Lift the host walk ``w`` (starting at ``f(x)``) to a walk of ``h`` from ``x``.
    Each step moves to the eligible neighbour of highest level, then smallest id.

    Raises:
        OverlayError: If ``w`` is not a walk from ``f(x)``, is longer than
            ``ell(x)``, or cannot be lifted (the overlay is not walk-preserving).
    """
    if not w or w[0] != o.f[x]:
        raise OverlayError(f"walk does not start at f({x})={o.f[x]}", code="E001", witness=[x])
    if len(w) - 1 > o.ell[x]:
        raise OverlayError(
            f"walk of length {len(w) - 1} exceeds ell({x})={o.ell[x]}", code="E002", witness=[x]
        )
    for a, b in zip(w, w[1:]):
        if not o.host.has_edge(a, b):
            raise OverlayError(f"{a}-{b} is not a host edge", code="E003", witness=[a, b])
    lifted = [x]
    for target in w[1:]:
        current = lifted[-1]
        eligible = [
            y
            for y in o.h.neighbors(current)
            if o.f[y] == target and o.ell[y] >= o.ell[current] - 1
        ]
        if not eligible:
            raise OverlayError(
                f"no lift of the step to {target} from {current}",
                code="E004",
                witness=[current, target],
            )
        lifted.append(min(eligible, key=lambda y: (-o.ell[y], y)))
    return tuple(lifted)


def _rebuild(
    o: Overlay,
    keep: Sequence[int],
    image: dict[int, int],
    base: Graph,
    star: StarGraph | None,
    edge_kept,
) -> Overlay:
    position = {x: i for i, x in enumerate(keep)}
    edges = [
        (position[x], position[y])
        for x, y in o.h.edges()
        if x in position and y in position and edge_kept(o.f[x], o.f[y])
    ]
    return Overlay(
        base=base,
        star=star,
        r=o.r,
        kind=o.kind,
        h=Graph.from_edges(len(keep), edges),
        f=tuple(image[o.f[x]] for x in keep),
        ell=tuple(o.ell[x] for x in keep),
        td=o.td.restricted(position),
    )


def restrict_overlay(
    o: Overlay, g2: Graph, embedding: Sequence[int] | None = None
) -> Overlay:
    """
    Restrict an overlay of ``G`` to a subgraph ``g2``, whose vertex ``i`` is host
    vertex ``embedding[i]`` (the identity by default). Preimages of deleted
    vertices and lifts of deleted edges disappear.

    Raises:
        OverlayError: If ``g2`` is not a subgraph of the host under ``embedding``
            or the overlay is of kind ★.
    """
    if o.kind is OverlayKind.STAR:
        raise OverlayError("restrict_overlay takes kinds A and S", code="E010")
    embedding = tuple(range(g2.n)) if embedding is None else tuple(embedding)
    if (
        len(embedding) != g2.n
        or len(set(embedding)) != g2.n
        or any(not 0 <= v < o.base.n for v in embedding)
    ):
        raise OverlayError("embedding is not injective into the host", code="E011")
    for u, v in g2.edges():
        if not o.base.has_edge(embedding[u], embedding[v]):
            raise OverlayError(
                f"edge {u}-{v} of the subgraph is not a host edge",
                code="E012",
                witness=[u, v],
            )
    inverse = {v: i for i, v in enumerate(embedding)}
    keep = [x for x in o.h.vertices if o.f[x] in inverse]
    return _rebuild(
        o,
        keep,
        inverse,
        g2,
        None,
        lambda a, b: g2.has_edge(inverse[a], inverse[b]),
    )


def _restrict_star(o: Overlay, vertices: Iterable[int]) -> Overlay:
    g2, embedding = o.base.induced_subgraph(vertices)
    star2 = star_graph(g2)
    inverse = {v: i for i, v in enumerate(embedding)}
    image: dict[int, int] = dict(inverse)
    for clique in o.star.cliques:
        if all(v in inverse for v in clique):
            image[o.star.star_vertex(clique)] = star2.star_vertex(inverse[v] for v in clique)
    keep = [x for x in o.h.vertices if o.f[x] in image]
    return _rebuild(o, keep, image, g2, star2, lambda a, b: True)


def restrict_to_induced(o: Overlay, vertices: Iterable[int]) -> Overlay:
    """
    Restrict to the induced subgraph ``G[vertices]`` (relabelled in increasing
    order). Kind ★ overlays also lose the preimages of star vertices whose clique
    leaves the vertex set.
    """
    vertices = sorted(set(vertices))
    if o.kind is OverlayKind.STAR:
        return _restrict_star(o, vertices)
    g2, embedding = o.base.induced_subgraph(vertices)
    return restrict_overlay(o, g2, embedding)


def trivial_overlay(
    g: Graph, r: int, td: TreeDecomposition, kind: OverlayKind = OverlayKind.S
) -> Overlay:
    """The overlay ``(G, id, r)``; ``td`` becomes its certificate."""
    try:
        td.validate_for(g)
    except GraphError as e:
        raise OverlayError(f"invalid tree decomposition: {e}", code="E020", witness=e.witness)
    if kind is OverlayKind.STAR:
        raise OverlayError("the trivial overlay has kind A or S", code="E021")
    return Overlay(
        base=g,
        r=r,
        kind=kind,
        h=g,
        f=tuple(g.vertices),
        ell=(r,) * g.n,
        td=td,
    )


def embed_overlay(
    o: Overlay,
    host: Graph,
    embedding: Sequence[int],
    host_star: StarGraph | None = None,
    ell: Sequence[int] | None = None,
) -> Overlay:
    """
    Re-target an overlay of the induced subgraph ``host[embedding]`` onto
    ``host``. The result is only walk-preserving when levels near the boundary
    are low enough; callers verify it.
    """
    if o.kind is OverlayKind.STAR:
        if host_star is None:
            host_star = star_graph(host)
        mapping = host_star.embedding_from(o.star, embedding)
    else:
        host_star = None
        mapping = tuple(embedding)
    return Overlay(
        base=host,
        star=host_star,
        r=o.r,
        kind=o.kind,
        h=o.h,
        f=tuple(mapping[v] for v in o.f),
        ell=tuple(o.ell if ell is None else ell),
        td=o.td,
    )


def as_kind(o: Overlay, kind: OverlayKind) -> Overlay:
    """Relabel the kind; only S to A (every S overlay is an A overlay) changes anything."""
    if o.kind is kind:
        return o
    if o.kind is OverlayKind.S and kind is OverlayKind.A:
        return o.model_copy(update={"kind": OverlayKind.A})
    raise OverlayError(f"cannot relabel a kind {o.kind.value} overlay as {kind.value}", code="E030")
