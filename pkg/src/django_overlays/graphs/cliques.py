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
Degeneracy orderings, clique enumeration and the star graph ``G★``.

A graph of degeneracy ``c`` has at most ``2^c · n`` non-empty cliques: every
clique is enumerated exactly once from its earliest vertex in a degeneracy
ordering, as a subset of that vertex's (at most ``c``) later neighbours.
"""

from __future__ import annotations

import heapq
import logging
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property

from django.apps import apps
from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from django_overlays.errors import GraphError
from django_overlays.graphs.graph import Graph

logger = logging.getLogger(__name__)
config = apps.get_app_config("django_overlays")

__all__ = [
    "Degeneracy",
    "StarGraph",
    "degeneracy_ordering",
    "degeneracy_and_cliques",
    "star_graph",
    "max_clique_size",
]


class Degeneracy(BaseModel):
    model_config = ConfigDict(frozen=True)

    ordering: tuple[int, ...]
    degeneracy: int
    cliques: tuple[tuple[int, ...], ...]


def degeneracy_ordering(g: Graph) -> tuple[tuple[int, ...], int]:
    """
    Repeatedly remove a vertex of minimum remaining degree, smallest id first.
    Returns the removal order and the degeneracy; each vertex has at most that
    many neighbours later in the order.
    """
    degree = [g.degree(v) for v in g.vertices]
    heap = [(degree[v], v) for v in g.vertices]
    heapq.heapify(heap)
    removed = [False] * g.n
    ordering = []
    c = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != degree[v]:
            continue
        removed[v] = True
        ordering.append(v)
        c = max(c, d)
        for u in g.neighbors(v):
            if not removed[u]:
                degree[u] -= 1
                heapq.heappush(heap, (degree[u], u))
    return tuple(ordering), c


def _extend(g: Graph, clique: tuple[int, ...], candidates: Sequence[int]) -> Iterator[tuple[int, ...]]:
    yield clique
    for i, u in enumerate(candidates):
        yield from _extend(
            g,
            clique + (u,),
            [w for w in candidates[i + 1 :] if g.has_edge(u, w)],
        )


def degeneracy_and_cliques(g: Graph, cap: int | None = None) -> Degeneracy:
    """
    Enumerate every non-empty clique of ``g`` once, in canonical form (sorted
    tuples), ordered by size and then lexicographically.

    Raises:
        GraphError: If more than ``cap`` cliques exist (OVERLAYS_CLIQUE_CAP by
            default), or if the count exceeds ``2^c · n``.
    """
    cap = config.CLIQUE_CAP if cap is None else cap
    ordering, c = degeneracy_ordering(g)
    position = {v: i for i, v in enumerate(ordering)}
    cliques: list[tuple[int, ...]] = []
    for v in ordering:
        later = sorted(u for u in g.neighbors(v) if position[u] > position[v])
        for clique in _extend(g, (v,), later):
            cliques.append(tuple(sorted(clique)))
            if len(cliques) > cap:
                raise GraphError(
                    f"more than {cap} cliques; the host is too dense for the star graph",
                    code="E020",
                    witness={"cap": cap, "degeneracy": c},
                )
    if len(cliques) > (2**c) * g.n:
        raise GraphError(
            f"{len(cliques)} cliques exceed 2^{c}·{g.n}",
            code="E021",
        )
    cliques.sort(key=lambda k: (len(k), k))
    return Degeneracy(ordering=ordering, degeneracy=c, cliques=tuple(cliques))


def max_clique_size(g: Graph) -> int:
    return max((len(k) for k in degeneracy_and_cliques(g).cliques), default=0)


class StarGraph(BaseModel):
    """
    ``G★``: the base graph plus one vertex ``v_K`` per non-empty clique ``K``,
    adjacent exactly to ``K``. Star vertex ids follow the base ids in clique order.
    """

    model_config = ConfigDict(frozen=True)

    base: Graph
    star: Graph
    cliques: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_star(self) -> Self:
        n = self.base.n
        if self.star.n != n + len(self.cliques):
            raise ValueError("star graph must have one vertex per clique")
        for v in self.base.vertices:
            base_part = tuple(u for u in self.star.neighbors(v) if u < n)
            if base_part != self.base.neighbors(v):
                raise ValueError(f"star graph differs from the base at vertex {v}")
        for i, clique in enumerate(self.cliques):
            if self.star.neighbors(n + i) != clique:
                raise ValueError(f"star vertex {n + i} is not adjacent exactly to {clique}")
        return self

    @cached_property
    def clique_index(self) -> dict[tuple[int, ...], int]:
        n = self.base.n
        return {clique: n + i for i, clique in enumerate(self.cliques)}

    def is_star_vertex(self, v: int) -> bool:
        return v >= self.base.n

    def clique_of(self, v: int) -> tuple[int, ...]:
        return self.cliques[v - self.base.n]

    def star_vertex(self, clique: Iterable[int]) -> int:
        key = tuple(sorted(clique))
        try:
            return self.clique_index[key]
        except KeyError:
            raise GraphError(f"{key} is not a clique of the base", code="E022", witness=list(key))

    def embedding_from(self, sub: StarGraph, embedding: Sequence[int]) -> tuple[int, ...]:
        """
        Map the vertices of ``sub`` (the star graph of an induced subgraph whose
        base vertex ``i`` is ``embedding[i]`` here) to vertices of this star graph.
        """
        mapped = list(embedding)
        for clique in sub.cliques:
            mapped.append(self.star_vertex(embedding[v] for v in clique))
        return tuple(mapped)


def star_graph(g: Graph, cap: int | None = None) -> StarGraph:
    cliques = degeneracy_and_cliques(g, cap).cliques
    n = g.n
    adjacency = [list(nbrs) for nbrs in g.adjacency]
    for i, clique in enumerate(cliques):
        for v in clique:
            adjacency[v].append(n + i)
    adjacency.extend(list(clique) for clique in cliques)
    star = Graph(n=n + len(cliques), adjacency=tuple(tuple(a) for a in adjacency))
    logger.debug("Star graph of %r has %d clique vertices", g, len(cliques))
    return StarGraph(base=g, star=star, cliques=cliques)
