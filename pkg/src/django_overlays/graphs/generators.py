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
Graph families used as inputs and stress tests.

``apexed_grid(n)`` adds a universal vertex to the ``n×n`` grid. ``diag_grid(n)``
is the ``n×n×n`` grid in which every pair of vertices of a unit subcube is
adjacent (face and space diagonals included), so ``diag_grid(2)`` is ``K_8``.
"""

from __future__ import annotations

import itertools
import logging
import random

import networkx as nx

from django_overlays.errors import GraphError
from django_overlays.graphs.graph import Graph

logger = logging.getLogger(__name__)

__all__ = ["FAMILIES", "generate_graph"]

FAMILIES = ("path", "cycle", "grid", "apexed_grid", "diag_grid", "random_tree")


def _size(value: int | None, name: str) -> int:
    if value is None or value < 1:
        raise GraphError(f"{name} must be a positive integer", code="E060")
    return value


def _diag_grid(n: int) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(itertools.product(range(n), repeat=3))
    for corner in itertools.product(range(n - 1), repeat=3):
        cube = [
            tuple(c + d for c, d in zip(corner, offset))
            for offset in itertools.product((0, 1), repeat=3)
        ]
        graph.add_edges_from(itertools.combinations(cube, 2))
    return graph


def _random_tree(n: int, seed: int) -> nx.Graph:
    if n <= 2:
        return nx.path_graph(n)
    rng = random.Random(seed)
    return nx.from_prufer_sequence([rng.randrange(n) for _ in range(n - 2)])


def generate_graph(
    family: str,
    n: int | None = None,
    a: int | None = None,
    b: int | None = None,
    seed: int = 0,
) -> Graph:
    """
    Build a member of ``family``. ``grid`` takes ``a`` rows and ``b`` columns (``b``
    defaults to ``a``; ``n`` stands in for a missing ``a``); the other families
    take ``n``.

    Raises:
        GraphError: For an unknown family or a non-positive size.
    """
    if family == "path":
        graph = nx.path_graph(_size(n, "n"))
    elif family == "cycle":
        size = _size(n, "n")
        graph = nx.cycle_graph(size) if size >= 3 else nx.path_graph(size)
    elif family == "grid":
        rows = _size(a if a is not None else n, "a")
        cols = _size(b if b is not None else rows, "b")
        graph = nx.grid_2d_graph(rows, cols)
    elif family == "apexed_grid":
        size = _size(n, "n")
        graph = nx.grid_2d_graph(size, size)
        # The apex sorts after every grid node and so gets the last id.
        apex = (size, size, "apex")
        graph.add_edges_from((apex, node) for node in list(graph.nodes))
        graph.add_node(apex)
    elif family == "diag_grid":
        graph = _diag_grid(_size(n, "n"))
    elif family == "random_tree":
        graph = _random_tree(_size(n, "n"), seed)
    else:
        raise GraphError(
            f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}",
            code="E061",
        )
    result = Graph.from_networkx(graph)
    logger.debug("Generated %s: %r", family, result)
    return result
