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
Balanced separations.

A separation ``(A, B)`` is balanced when neither exclusive side holds more than
two thirds of the vertices. Small graphs are searched exhaustively by separator
size; larger ones use BFS layers as candidate separators. The trivial
separation with separator ``V(G)`` is balanced and always available.
"""

from __future__ import annotations

import logging
from itertools import combinations

from django.apps import apps
from pydantic import BaseModel, ConfigDict, computed_field

from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import bfs_layering

logger = logging.getLogger(__name__)
config = apps.get_app_config("django_overlays")

__all__ = ["Separation", "balanced_separator", "is_balanced"]


class Separation(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: tuple[int, ...]
    right: tuple[int, ...]
    balanced: bool
    within_budget: bool

    @computed_field
    @property
    def separator(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.left) & set(self.right)))

    def sides(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The exclusive parts ``A - V(B)`` and ``B - V(A)``."""
        sep = set(self.separator)
        return (
            tuple(v for v in self.left if v not in sep),
            tuple(v for v in self.right if v not in sep),
        )


def is_balanced(n: int, left_only: int, right_only: int) -> bool:
    return 3 * max(left_only, right_only) <= 2 * n


def _split(sizes: list[int]) -> list[bool]:
    """
    Assign components to two sides so that the larger side is as small as
    possible. Returns, per component, whether it goes left.
    """
    total = sum(sizes)
    reachable: dict[int, tuple[int, ...]] = {0: ()}
    for i, size in enumerate(sizes):
        for s, members in list(reachable.items()):
            if s + size not in reachable:
                reachable[s + size] = members + (i,)
    best = min(reachable, key=lambda s: (max(s, total - s), s))
    left = set(reachable[best])
    return [i in left for i in range(len(sizes))]


def _evaluate(g: Graph, separator: tuple[int, ...]) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    removed = set(separator)
    components = g.components(v for v in g.vertices if v not in removed)
    assignment = _split([len(c) for c in components])
    left = [v for c, go_left in zip(components, assignment) if go_left for v in c]
    right = [v for c, go_left in zip(components, assignment) if not go_left for v in c]
    return max(len(left), len(right)), tuple(sorted(left)), tuple(sorted(right))


def _separation(g, separator, left_only, right_only, budget) -> Separation:
    sep = tuple(sorted(separator))
    return Separation(
        left=tuple(sorted(set(sep) | set(left_only))),
        right=tuple(sorted(set(sep) | set(right_only))),
        balanced=is_balanced(g.n, len(left_only), len(right_only)),
        within_budget=len(sep) <= budget,
    )


def _exact(g: Graph, budget: int) -> Separation:
    for size in range(g.n + 1):
        best = None
        for separator in combinations(g.vertices, size):
            larger, left, right = _evaluate(g, separator)
            if not is_balanced(g.n, len(left), len(right)):
                continue
            if best is None or larger < best[0]:
                best = (larger, separator, left, right)
        if best is not None:
            _, separator, left, right = best
            return _separation(g, separator, left, right, budget)
    raise AssertionError("the trivial separation is always balanced")


def _heuristic(g: Graph, budget: int) -> Separation:
    candidates: list[tuple[int, ...]] = [()]
    starts = [0]
    far = bfs_layering(g, [0]).layers
    if far:
        starts.append(far[-1][0])
    for start in starts:
        for layer in bfs_layering(g, [start]).layers:
            candidates.append(layer)
    best = None
    for separator in candidates:
        larger, left, right = _evaluate(g, separator)
        if not is_balanced(g.n, len(left), len(right)):
            continue
        key = (len(separator), larger, separator)
        if best is None or key < best[0]:
            best = (key, separator, left, right)
    if best is None:
        logger.debug("No balanced BFS-layer separator for %r; using the trivial one", g)
        return _separation(g, tuple(g.vertices), (), (), budget)
    _, separator, left, right = best
    return _separation(g, separator, left, right, budget)


def balanced_separator(g: Graph, budget: int, threshold: int | None = None) -> Separation:
    """
    Find a balanced separation of ``g``.

    Graphs with at most ``threshold`` vertices (OVERLAYS_EXACT_SEPARATOR_THRESHOLD
    by default) get a minimum-size balanced separator, ties broken by the
    smaller larger side and then lexicographically. Larger graphs try BFS layers
    from two starting points. ``within_budget`` records whether the separator
    has at most ``budget`` vertices.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    threshold = config.EXACT_SEPARATOR_THRESHOLD if threshold is None else threshold
    if g.n <= 1:
        # Nothing left to split.
        return Separation(left=tuple(g.vertices), right=(), balanced=True, within_budget=True)
    if g.n <= threshold:
        separation = _exact(g, budget)
    else:
        separation = _heuristic(g, budget)
    if not separation.within_budget:
        logger.warning(
            "Balanced separator of %r has %d vertices, over the budget of %d",
            g,
            len(separation.separator),
            budget,
        )
    return separation
