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
Rooted tree decompositions, the separator recursion that builds them, and the
depth-band layering read off a decomposition whose vertex subtrees are shallow.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from functools import cached_property

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from django_overlays.errors import GraphError
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import Layering
from django_overlays.graphs.separators import balanced_separator

logger = logging.getLogger(__name__)

__all__ = [
    "TreeDecomposition",
    "separator_tree_decomposition",
    "separator_width_bound",
    "heuristic_tree_decomposition",
    "best_tree_decomposition",
    "depth_band_layering",
    "layered_width",
]


def _width(bags: Sequence[Sequence[int]]) -> int:
    return max((len(bag) for bag in bags), default=0) - 1


def _adhesion(bags: Sequence[Sequence[int]], parent: Sequence[int]) -> int:
    return max(
        (len(set(bags[i]) & set(bags[p])) for i, p in enumerate(parent) if p >= 0),
        default=0,
    )


class TreeDecomposition(BaseModel):
    """
    Bags are indexed ``0..b-1``; ``parent[root] == -1`` and every other bag points
    at its parent. ``width`` and ``adhesion`` are declared and must match the bags.
    """

    model_config = ConfigDict(frozen=True)

    bags: tuple[tuple[int, ...], ...] = Field(min_length=1)
    parent: tuple[int, ...]
    root: int = 0
    width: int
    adhesion: int
    vertex_depth_bound: int | None = None

    @model_validator(mode="after")
    def check_tree(self) -> Self:
        count = len(self.bags)
        if len(self.parent) != count:
            raise ValueError("one parent entry per bag is required")
        if not 0 <= self.root < count or self.parent[self.root] != -1:
            raise ValueError("the root bag must have parent -1")
        for i, bag in enumerate(self.bags):
            if list(bag) != sorted(set(bag)):
                raise ValueError(f"bag {i} is not sorted and duplicate-free")
            if i != self.root and not 0 <= self.parent[i] < count:
                raise ValueError(f"bag {i} has an invalid parent {self.parent[i]}")
        if len(self.depths) != count:
            raise ValueError("parent pointers do not form a tree")
        if self.width != _width(self.bags):
            raise ValueError(f"declared width {self.width} != {_width(self.bags)}")
        if self.adhesion != _adhesion(self.bags, self.parent):
            raise ValueError(
                f"declared adhesion {self.adhesion} != {_adhesion(self.bags, self.parent)}"
            )
        if self.vertex_depth_bound is not None:
            deepest = max(self.subtree_depths().values(), default=0)
            if deepest > self.vertex_depth_bound:
                raise ValueError(
                    f"a vertex subtree has depth {deepest} > {self.vertex_depth_bound}"
                )
        return self

    @classmethod
    def build(
        cls,
        bags: Sequence[Iterable[int]],
        parent: Sequence[int],
        root: int = 0,
        vertex_depth_bound: int | None = None,
    ) -> TreeDecomposition:
        """Create a decomposition, computing width and adhesion from the bags."""
        bags = tuple(tuple(sorted(set(bag))) for bag in bags)
        parent = tuple(parent)
        return cls(
            bags=bags,
            parent=parent,
            root=root,
            width=_width(bags),
            adhesion=_adhesion(bags, parent),
            vertex_depth_bound=vertex_depth_bound,
        )

    @classmethod
    def single_bag(cls, vertices: Iterable[int]) -> TreeDecomposition:
        return cls.build([vertices], [-1])

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.bags]
        for i, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(i)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depths(self) -> dict[int, int]:
        """Root distance per bag, reached from the root (unreachable bags absent)."""
        depth = {self.root: 0}
        stack = [self.root]
        while stack:
            node = stack.pop()
            for child in self.children[node]:
                if child in depth:
                    continue
                depth[child] = depth[node] + 1
                stack.append(child)
        return depth

    def preorder(self) -> list[int]:
        order = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(reversed(self.children[node]))
        return order

    @property
    def height(self) -> int:
        return max(self.depths.values())

    def vertices(self) -> set[int]:
        return {v for bag in self.bags for v in bag}

    def subtree_depths(self) -> dict[int, int]:
        """
        For each vertex, the depth of its bag subtree: the largest root distance of
        a bag holding it minus the root distance of its topmost bag.
        """
        top: dict[int, int] = {}
        bottom: dict[int, int] = {}
        for node, depth in self.depths.items():
            for v in self.bags[node]:
                top[v] = min(top.get(v, depth), depth)
                bottom[v] = max(bottom.get(v, depth), depth)
        return {v: bottom[v] - top[v] for v in top}

    def top_depth(self) -> dict[int, int]:
        top: dict[int, int] = {}
        for node, depth in self.depths.items():
            for v in self.bags[node]:
                top[v] = min(top.get(v, depth), depth)
        return top

    def validate_for(self, g: Graph) -> None:
        """
        Check that this is a decomposition of ``g``: bag vertices exist, every edge
        lies in a bag, and the bags holding each vertex form a non-empty subtree.

        Raises:
            GraphError: Naming the first violated condition and its witness.
        """
        holders: dict[int, list[int]] = {v: [] for v in g.vertices}
        for node, bag in enumerate(self.bags):
            for v in bag:
                if v not in holders:
                    raise GraphError(
                        f"bag {node} holds {v}, which is not a vertex",
                        code="E030",
                        witness=[node, v],
                    )
                holders[v].append(node)
        for v, nodes in holders.items():
            if not nodes:
                raise GraphError(f"vertex {v} is in no bag", code="E031", witness=[v])
            inside = set(nodes)
            # A set of tree nodes is connected iff exactly one member's parent lies outside it.
            tops = [node for node in nodes if self.parent[node] not in inside]
            if len(tops) != 1:
                raise GraphError(
                    f"bags holding vertex {v} are not connected",
                    code="E032",
                    witness={"vertex": v, "bags": nodes},
                )
        for u, v in g.edges():
            if not set(holders[u]) & set(holders[v]):
                raise GraphError(
                    f"edge {u}-{v} is in no bag", code="E033", witness=[u, v]
                )

    def is_valid_for(self, g: Graph) -> bool:
        try:
            self.validate_for(g)
        except GraphError:
            return False
        return True

    def bag_containing(self, vertices: Iterable[int]) -> int | None:
        wanted = set(vertices)
        for node in self.preorder():
            if wanted.issubset(self.bags[node]):
                return node
        return None

    def rerooted(self, new_root: int) -> TreeDecomposition:
        parent = list(self.parent)
        node, previous = new_root, -1
        while node != -1:
            following = parent[node]
            parent[node] = previous
            previous, node = node, following
        return TreeDecomposition.build(self.bags, parent, new_root, self.vertex_depth_bound)

    def relabeled(self, mapping: Mapping[int, int] | Sequence[int]) -> TreeDecomposition:
        return TreeDecomposition.build(
            [[mapping[v] for v in bag] for bag in self.bags], self.parent, self.root
        )

    def restricted(self, keep: Mapping[int, int]) -> TreeDecomposition:
        """Drop vertices missing from ``keep`` and rename the rest through it."""
        return TreeDecomposition.build(
            [[keep[v] for v in bag if v in keep] for bag in self.bags],
            self.parent,
            self.root,
        )

    def with_added(self, vertices: Iterable[int]) -> TreeDecomposition:
        extra = set(vertices)
        return TreeDecomposition.build(
            [set(bag) | extra for bag in self.bags], self.parent, self.root
        )

    def with_depth_bound(self) -> TreeDecomposition:
        deepest = max(self.subtree_depths().values(), default=0)
        return TreeDecomposition.build(self.bags, self.parent, self.root, max(deepest, 1))


def separator_width_bound(s: int, n: int) -> int:
    """``s · ⌈log_{3/2} n⌉``, the width the separator recursion guarantees."""
    if n <= 1:
        return 0
    levels = math.ceil(math.log(n) / math.log(1.5) - 1e-12)
    return s * levels


def _recurse(g: Graph, vertices: tuple[int, ...], s: int | None, bags: list, parent: list) -> int:
    """Append the decomposition of ``g[vertices]`` and return the index of its root."""
    if len(vertices) <= 1:
        bags.append(set(vertices))
        parent.append(-1)
        return len(bags) - 1
    sub, embedding = g.induced_subgraph(vertices)
    separation = balanced_separator(sub, sub.n if s is None else s)
    if s is not None and len(separation.separator) > s:
        raise GraphError(
            f"balanced separator of size {len(separation.separator)} exceeds s={s}",
            code="E034",
            witness=list(vertices),
        )
    separator = {embedding[v] for v in separation.separator}
    left, right = separation.sides()
    start = len(bags)
    roots = [
        _recurse(g, tuple(embedding[v] for v in side), s, bags, parent)
        for side in (left, right)
        if side
    ]
    if not roots:
        bags.append(set(separator))
        parent.append(-1)
        return len(bags) - 1
    if len(roots) == 2:
        parent[roots[1]] = roots[0]
    for node in range(start, len(bags)):
        bags[node] |= separator
    return roots[0]


def separator_tree_decomposition(g: Graph, s: int | None = None) -> TreeDecomposition:
    """
    Decompose ``g`` by recursive balanced separation: decompose both exclusive
    sides, join the two trees by an edge and add the separator to every bag.

    With a budget ``s`` every separator found must have at most ``s`` vertices,
    giving width at most ``s·⌈log_{3/2} n⌉``; ``None`` accepts any separator.

    Raises:
        GraphError: If a separator exceeds ``s``; the witness lists the vertices
            of the offending induced subgraph.
    """
    bags: list[set[int]] = []
    parent: list[int] = []
    root = _recurse(g, tuple(g.vertices), s, bags, parent)
    td = TreeDecomposition.build(bags, parent, root)
    if s is not None and td.width > separator_width_bound(s, g.n):
        raise GraphError(
            f"width {td.width} exceeds {separator_width_bound(s, g.n)}", code="E035"
        )
    logger.debug("Separator decomposition of %r: %d bags, width %d", g, len(bags), td.width)
    return td


def heuristic_tree_decomposition(g: Graph, method: str = "min_degree") -> TreeDecomposition:
    """
    Decompose ``g`` with the networkx elimination heuristics (``min_degree`` or
    ``min_fill_in``). Trees come out with width 1.
    """
    if g.n == 0:
        return TreeDecomposition.single_bag(())
    heuristics = {"min_degree": treewidth_min_degree, "min_fill_in": treewidth_min_fill_in}
    try:
        heuristic = heuristics[method]
    except KeyError:
        raise GraphError(f"unknown decomposition heuristic {method!r}", code="E038")
    _, decomposition = heuristic(g.to_networkx())
    nodes = sorted(decomposition.nodes, key=lambda bag: (sorted(bag), len(bag)))
    index = {bag: i for i, bag in enumerate(nodes)}
    parent = [-2] * len(nodes)
    previous_root = None
    for component in nx.connected_components(decomposition):
        start = min(component, key=index.__getitem__)
        # Components of the decomposition forest are chained under the first root.
        parent[index[start]] = -1 if previous_root is None else previous_root
        previous_root = index[start] if previous_root is None else previous_root
        for a, b in nx.bfs_edges(decomposition, start):
            parent[index[b]] = index[a]
    td = TreeDecomposition.build([sorted(bag) for bag in nodes], parent, previous_root)
    td.validate_for(g)
    return td


def best_tree_decomposition(g: Graph) -> TreeDecomposition:
    """
    The narrower of the separator decomposition and the min-degree heuristic;
    ties go to the separator decomposition.
    """
    separator = separator_tree_decomposition(g)
    heuristic = heuristic_tree_decomposition(g)
    chosen = heuristic if heuristic.width < separator.width else separator
    logger.debug(
        "Decomposition of %r: separator width %d, heuristic width %d",
        g,
        separator.width,
        heuristic.width,
    )
    return chosen


def depth_band_layering(g: Graph, td: TreeDecomposition) -> Layering:
    """
    Cut the decomposition into bands of ``a = vertex_depth_bound`` tree levels.
    ``V_i`` collects the vertices first seen in a bag at root distance in
    ``[(i-1)a, ia)``.

    Raises:
        GraphError: If the decomposition carries no depth bound or some vertex
            subtree is deeper than it.
    """
    if td.vertex_depth_bound is None:
        raise GraphError("decomposition carries no vertex depth bound", code="E036")
    td.validate_for(g)
    a = max(td.vertex_depth_bound, 1)
    deepest = td.subtree_depths()
    too_deep = sorted(v for v, depth in deepest.items() if depth > td.vertex_depth_bound)
    if too_deep:
        raise GraphError(
            f"vertex subtrees deeper than {td.vertex_depth_bound}",
            code="E037",
            witness=too_deep,
        )
    band = {v: depth // a for v, depth in td.top_depth().items()}
    count = max(band.values(), default=-1) + 1
    layers: list[list[int]] = [[] for _ in range(count)]
    for v in g.vertices:
        layers[band[v]].append(v)
    return Layering(layers=tuple(tuple(layer) for layer in layers), host_hash=g.content_hash)


def layered_width(td: TreeDecomposition, l: Layering) -> int:
    """Largest number of vertices any bag shares with a single layer."""
    layer_of = l.layer_of
    widest = 0
    for bag in td.bags:
        counts: dict[int, int] = {}
        for v in bag:
            counts[layer_of[v]] = counts.get(layer_of[v], 0) + 1
        widest = max(widest, max(counts.values(), default=0))
    return widest
