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
The simple undirected graph every construction in django-overlays acts on.

Vertices are the integers ``0..n-1``; adjacency is stored as one sorted tuple of
neighbours per vertex. Graphs are immutable pydantic models, so they can be
shared freely between overlays, systems and worker threads.
"""

from __future__ import annotations

import hashlib
import logging
from bisect import bisect_left
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from django_overlays.errors import GraphError

logger = logging.getLogger(__name__)

__all__ = ["Graph"]


class Graph(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    adjacency: tuple[tuple[int, ...], ...] = ()

    @model_validator(mode="after")
    def check_simple(self) -> Self:
        """
        Enforce the simple-graph invariants: one adjacency entry per vertex, each
        sorted without duplicates, ids in range, no self-loops, symmetric.
        """
        if len(self.adjacency) != self.n:
            raise ValueError(
                f"adjacency has {len(self.adjacency)} entries for {self.n} vertices"
            )
        for v, nbrs in enumerate(self.adjacency):
            previous = -1
            for u in nbrs:
                if u <= previous:
                    raise ValueError(f"neighbours of {v} are not strictly increasing")
                if not 0 <= u < self.n:
                    raise ValueError(f"vertex {v} has out-of-range neighbour {u}")
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                previous = u
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if not self.has_edge(u, v):
                    raise ValueError(f"edge {v}-{u} is not symmetric")
        return self

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        """
        Build a graph on ``n`` vertices from an edge list. Duplicate edges are
        merged; self-loops and out-of-range endpoints raise GraphError.
        """
        if n < 0:
            raise GraphError(f"vertex count {n} is negative", code="E001")
        neighbours: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}", code="E002", witness=[u])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(
                    f"edge {u}-{v} has an endpoint outside [0, {n})",
                    code="E003",
                    witness=[u, v],
                )
            neighbours[u].add(v)
            neighbours[v].add(u)
        return cls(n=n, adjacency=tuple(tuple(sorted(nb)) for nb in neighbours))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> Graph:
        """
        Convert a networkx graph; nodes are numbered in sorted order.
        """
        order = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(order)}
        return cls.from_edges(
            len(order), ((index[u], index[v]) for u, v in graph.edges if u != v)
        )

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        i = bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(
            self.has_edge(vs[i], vs[j])
            for i in range(len(vs))
            for j in range(i + 1, len(vs))
        )

    @cached_property
    def content_hash(self) -> str:
        """SHA-256 over the vertex count and the canonical edge list."""
        digest = hashlib.sha256(f"n={self.n};".encode())
        for u, v in self.edges():
            digest.update(f"{u},{v};".encode())
        return digest.hexdigest()

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
        """
        Return ``G[vertices]`` relabelled to ``0..k-1`` in increasing order of the
        original ids, together with the embedding (new id -> original id).
        """
        embedding = tuple(sorted(set(vertices)))
        position = {v: i for i, v in enumerate(embedding)}
        adjacency = tuple(
            tuple(position[u] for u in self.adjacency[v] if u in position)
            for v in embedding
        )
        return Graph(n=len(embedding), adjacency=adjacency), embedding

    def components(self, vertices: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """
        Connected components of ``G[vertices]`` (of ``G`` when omitted), each a
        sorted tuple, listed by their smallest vertex.
        """
        graph = self.to_networkx()
        if vertices is not None:
            graph = graph.subgraph(set(vertices))
        return sorted(tuple(sorted(c)) for c in nx.connected_components(graph))

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"
