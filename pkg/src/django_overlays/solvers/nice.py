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
Nice tree decompositions: every node is a leaf (empty bag), introduces one
vertex, forgets one vertex, or joins two children with equal bags. The root bag
is empty.
"""

from __future__ import annotations

import logging
from enum import Enum

from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from django_overlays.graphs.decomposition import TreeDecomposition

logger = logging.getLogger(__name__)

__all__ = ["NiceKind", "NiceNode", "NiceDecomposition", "nice_decomposition"]


class NiceKind(str, Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


class NiceNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: NiceKind
    bag: frozenset[int]
    vertex: int | None = None
    children: tuple[int, ...] = ()


class NiceDecomposition(BaseModel):
    """Nodes are stored children first, so the list order is a postorder."""

    model_config = ConfigDict(frozen=True)

    nodes: tuple[NiceNode, ...]
    root: int
    width: int

    @model_validator(mode="after")
    def check_nice(self) -> Self:
        for i, node in enumerate(self.nodes):
            if any(c >= i for c in node.children):
                raise ValueError(f"node {i} has a child stored after it")
            kids = [self.nodes[c] for c in node.children]
            if node.kind is NiceKind.LEAF:
                ok = not kids and not node.bag
            elif node.kind is NiceKind.INTRODUCE:
                ok = (
                    len(kids) == 1
                    and node.vertex not in kids[0].bag
                    and node.bag == kids[0].bag | {node.vertex}
                )
            elif node.kind is NiceKind.FORGET:
                ok = (
                    len(kids) == 1
                    and node.vertex in kids[0].bag
                    and node.bag == kids[0].bag - {node.vertex}
                )
            else:
                ok = len(kids) == 2 and kids[0].bag == node.bag == kids[1].bag
            if not ok:
                raise ValueError(f"node {i} is not a valid {node.kind.value} node")
        if self.nodes[self.root].bag:
            raise ValueError("the root bag must be empty")
        widest = max((len(node.bag) for node in self.nodes), default=0) - 1
        if widest != self.width:
            raise ValueError(f"declared width {self.width} != {widest}")
        return self


def nice_decomposition(td: TreeDecomposition) -> NiceDecomposition:
    """
    Convert a rooted decomposition without recursion. Between a bag and its
    child the chain forgets what the parent lacks, then introduces what the
    child lacks; several children are joined left to right.
    """
    nodes: list[NiceNode] = []

    def add(kind: NiceKind, bag: frozenset[int], vertex=None, children=()) -> int:
        nodes.append(NiceNode(kind=kind, bag=bag, vertex=vertex, children=tuple(children)))
        return len(nodes) - 1

    top: dict[int, int] = {}
    for node in reversed(td.preorder()):
        bag = frozenset(td.bags[node])
        branches = []
        for child in td.children[node]:
            current = top.pop(child)
            current_bag = nodes[current].bag
            for v in sorted(current_bag - bag):
                current_bag = current_bag - {v}
                current = add(NiceKind.FORGET, current_bag, v, [current])
            for v in sorted(bag - current_bag):
                current_bag = current_bag | {v}
                current = add(NiceKind.INTRODUCE, current_bag, v, [current])
            branches.append(current)
        if not branches:
            current = add(NiceKind.LEAF, frozenset())
            current_bag: frozenset[int] = frozenset()
            for v in sorted(bag):
                current_bag = current_bag | {v}
                current = add(NiceKind.INTRODUCE, current_bag, v, [current])
            branches.append(current)
        joined = branches[0]
        for other in branches[1:]:
            joined = add(NiceKind.JOIN, bag, None, [joined, other])
        top[node] = joined

    current = top[td.root]
    current_bag = nodes[current].bag
    for v in sorted(current_bag):
        current_bag = current_bag - {v}
        current = add(NiceKind.FORGET, current_bag, v, [current])
    return NiceDecomposition(nodes=tuple(nodes), root=current, width=td.width)
