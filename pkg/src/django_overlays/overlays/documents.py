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
JSON documents for overlays and overlay systems.

Documents carry the content hash of the base graph rather than the graph itself;
loading one needs the host graph, and a kind ★ document rebuilds its star graph
from it. Thickness is written as an exact ``"p/q"`` string.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError

from django_overlays.errors import OverlayError
from django_overlays.graphs.cliques import StarGraph, star_graph
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import Overlay, OverlayKind
from django_overlays.overlays.system import OverlaySystem

logger = logging.getLogger(__name__)

__all__ = [
    "VertexEntry",
    "TreeDocument",
    "OverlayDocument",
    "SystemDocument",
    "overlay_to_document",
    "document_to_overlay",
    "system_to_document",
    "document_to_system",
    "overlay_to_json",
    "json_to_overlay",
    "system_to_json",
    "json_to_system",
    "load_document",
]


class VertexEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    f: int
    ell: int


class TreeDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    bags: list[list[int]]
    tree: list[tuple[int, int]]
    root: int = 0
    vertex_depth_bound: int | None = None


class OverlayDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    host_hash: str
    r: int
    kind: OverlayKind
    vertices: list[VertexEntry]
    edges: list[tuple[int, int]]
    td: TreeDocument


class SystemDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    host_hash: str
    kind: OverlayKind
    r: int
    declared_tw: int
    declared_thickness: str
    members: list[OverlayDocument]


def _tree_document(td: TreeDecomposition) -> TreeDocument:
    return TreeDocument(
        bags=[list(bag) for bag in td.bags],
        tree=[(p, i) for i, p in enumerate(td.parent) if p >= 0],
        root=td.root,
        vertex_depth_bound=td.vertex_depth_bound,
    )


def _decomposition(doc: TreeDocument) -> TreeDecomposition:
    parent = [-1] * len(doc.bags)
    for p, child in doc.tree:
        if not (0 <= p < len(doc.bags) and 0 <= child < len(doc.bags)):
            raise OverlayError(f"tree edge {p}-{child} names a missing bag", code="E040")
        parent[child] = p
    try:
        return TreeDecomposition.build(doc.bags, parent, doc.root, doc.vertex_depth_bound)
    except ValidationError as e:
        raise OverlayError(f"invalid tree decomposition: {e}", code="E041")


def overlay_to_document(o: Overlay) -> OverlayDocument:
    return OverlayDocument(
        host_hash=o.host_hash,
        r=o.r,
        kind=o.kind,
        vertices=[VertexEntry(id=x, f=o.f[x], ell=o.ell[x]) for x in o.h.vertices],
        edges=list(o.h.edges()),
        td=_tree_document(o.td),
    )


def document_to_overlay(
    doc: OverlayDocument, g: Graph, star: StarGraph | None = None
) -> Overlay:
    """
    Rebuild an overlay of ``g``.

    Raises:
        OverlayError: On a host hash mismatch, vertex ids that are not ``0..n-1``
            in order, or any structural defect.
    """
    if doc.host_hash != g.content_hash:
        raise OverlayError(
            "document was written for another host graph",
            code="E042",
            witness={"expected": doc.host_hash, "actual": g.content_hash},
        )
    if [v.id for v in doc.vertices] != list(range(len(doc.vertices))):
        raise OverlayError("f or ell is not total on V(h)", code="E043")
    if doc.kind is OverlayKind.STAR and star is None:
        star = star_graph(g)
    try:
        return Overlay(
            base=g,
            star=star if doc.kind is OverlayKind.STAR else None,
            r=doc.r,
            kind=doc.kind,
            h=Graph.from_edges(len(doc.vertices), doc.edges),
            f=tuple(v.f for v in doc.vertices),
            ell=tuple(v.ell for v in doc.vertices),
            td=_decomposition(doc.td),
        )
    except ValidationError as e:
        raise OverlayError(f"malformed overlay: {e}", code="E044")


def system_to_document(s: OverlaySystem) -> SystemDocument:
    return SystemDocument(
        host_hash=s.host_hash,
        kind=s.kind,
        r=s.r,
        declared_tw=s.declared_tw,
        declared_thickness=str(s.declared_thickness),
        members=[overlay_to_document(m) for m in s.members],
    )


def document_to_system(doc: SystemDocument, g: Graph) -> OverlaySystem:
    """Rebuild a system of ``g`` without re-verifying its members."""
    star = star_graph(g) if doc.kind is OverlayKind.STAR else None
    members = tuple(document_to_overlay(m, g, star) for m in doc.members)
    try:
        return OverlaySystem(
            members=members,
            declared_tw=doc.declared_tw,
            declared_thickness=Fraction(doc.declared_thickness),
        )
    except (ValidationError, ValueError, ZeroDivisionError) as e:
        raise OverlayError(f"malformed system: {e}", code="E045")


def overlay_to_json(o: Overlay) -> str:
    return overlay_to_document(o).model_dump_json(indent=2) + "\n"


def json_to_overlay(text: str, g: Graph) -> Overlay:
    try:
        doc = OverlayDocument.model_validate_json(text)
    except ValidationError as e:
        raise OverlayError(f"not an overlay document: {e}", code="E046")
    return document_to_overlay(doc, g)


def system_to_json(s: OverlaySystem) -> str:
    return system_to_document(s).model_dump_json(indent=2) + "\n"


def json_to_system(text: str, g: Graph) -> OverlaySystem:
    try:
        doc = SystemDocument.model_validate_json(text)
    except ValidationError as e:
        raise OverlayError(f"not a system document: {e}", code="E047")
    return document_to_system(doc, g)


def load_document(path: str | Path, g: Graph) -> Overlay | OverlaySystem:
    """
    Load an overlay or a system document, telling them apart by the
    ``members`` key.

    Raises:
        FileNotFoundError: If the file does not exist.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"document not found at: {path}")
    text = path.read_text(encoding="utf-8")
    if '"members"' in text:
        return json_to_system(text, g)
    return json_to_overlay(text, g)
