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
Feasibility checks used to certify solutions, on overlays and on the input graph.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable

import networkx as nx

from django_overlays.graphs.graph import Graph
from django_overlays.solvers.requests import Problem, SolveRequest

__all__ = [
    "ball",
    "is_distance_independent",
    "r_dominates",
    "hits_neighborhoods",
    "is_feasible",
    "feasibility_checker",
]


def ball(g: Graph, v: int, radius: int, graph: nx.Graph | None = None) -> set[int]:
    """Vertices within distance ``radius`` of ``v`` (``v`` included)."""
    graph = g.to_networkx() if graph is None else graph
    return set(nx.single_source_shortest_path_length(graph, v, cutoff=radius))


def is_distance_independent(g: Graph, vertices: Iterable[int], r: int) -> bool:
    """Every two chosen vertices are at distance at least ``r``."""
    chosen = set(vertices)
    if r <= 1 or len(chosen) < 2:
        return True
    graph = g.to_networkx()
    return all(ball(g, v, r - 1, graph) & chosen == {v} for v in chosen)


def r_dominates(g: Graph, vertices: Iterable[int], targets: Iterable[int], r: int) -> bool:
    """Every target is within distance ``r`` of a chosen vertex."""
    chosen = set(vertices)
    graph = g.to_networkx()
    return all(ball(g, t, r, graph) & chosen for t in targets)


def hits_neighborhoods(g: Graph, vertices: Iterable[int], targets: Iterable[int]) -> bool:
    """Every target has a chosen neighbour."""
    chosen = set(vertices)
    return all(chosen.intersection(g.neighbors(t)) for t in targets)


def feasibility_checker(request: SolveRequest) -> Callable[[Iterable[int]], bool]:
    """A feasibility test for the request with the needed balls computed once."""
    h = request.h
    graph = h.to_networkx()
    if request.problem is Problem.DISTANCE_INDEPENDENT:
        allowed = set(request.vertex_set)
        radius = max(request.r - 1, 0)
        balls = {v: ball(h, v, radius, graph) for v in allowed}

        def check(vertices: Iterable[int]) -> bool:
            chosen = set(vertices)
            return chosen <= allowed and all(balls[v] & chosen == {v} for v in chosen)

    else:
        if request.problem is Problem.R_DOMINATING:
            balls = {t: ball(h, t, request.r, graph) for t in request.vertex_set}
        else:
            balls = {t: set(h.neighbors(t)) for t in request.vertex_set}

        def check(vertices: Iterable[int]) -> bool:
            chosen = set(vertices)
            return all(balls[t] & chosen for t in balls)

    return check


def is_feasible(request: SolveRequest, vertices: Iterable[int]) -> bool:
    return feasibility_checker(request)(vertices)
