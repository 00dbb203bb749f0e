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
Text formats for graphs, tree decompositions and layerings.

* ``.gr`` (PACE): comment lines start with ``c``; header ``p tw <n> <m>``; then
  one ``<u> <v>`` line per edge, 1-based.
* ``.td`` (PACE): ``s td <#bags> <width+1> <n>``; ``b <id> <v...>`` bag lines;
  then tree edges ``<i> <j>``. The root and depth bound travel in
  ``c root <id>`` / ``c depth <a>`` comments, which other readers ignore.
* layering files: one ``<layer_index> <vertex>`` line per vertex, both 1-based.
* graph JSON: ``{"n": ..., "edges": [[u, v], ...]}`` with 0-based ids.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from django_overlays.errors import GraphError
from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph
from django_overlays.graphs.layering import Layering

logger = logging.getLogger(__name__)

__all__ = [
    "gr_to_graph",
    "graph_to_gr",
    "td_to_decomposition",
    "decomposition_to_td",
    "layering_file_to_layering",
    "layering_to_layering_file",
    "json_to_graph",
    "graph_to_json",
    "load_graph",
    "write_text_atomic",
]


def _tokens(text: str):
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped:
            yield number, stripped.split()


def _int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphError(f"line {number}: {token!r} is not an integer", code="E040")


def gr_to_graph(text: str) -> Graph:
    n = m = None
    edges = []
    for number, parts in _tokens(text):
        if parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw":
                raise GraphError(f"line {number}: malformed header", code="E041")
            n, m = _int(parts[2], number), _int(parts[3], number)
            continue
        if n is None:
            raise GraphError(f"line {number}: edge before the header", code="E042")
        if len(parts) != 2:
            raise GraphError(f"line {number}: expected two endpoints", code="E043")
        edges.append((_int(parts[0], number) - 1, _int(parts[1], number) - 1))
    if n is None:
        raise GraphError("missing 'p tw' header", code="E044")
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}", code="E045")
    return Graph.from_edges(n, edges)


def graph_to_gr(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def td_to_decomposition(text: str) -> TreeDecomposition:
    header = None
    root = 0
    depth_bound = None
    bags: dict[int, list[int]] = {}
    edges = []
    for number, parts in _tokens(text):
        if parts[0] == "c":
            if len(parts) == 3 and parts[1] == "root":
                root = _int(parts[2], number) - 1
            elif len(parts) == 3 and parts[1] == "depth":
                depth_bound = _int(parts[2], number)
            continue
        if parts[0] == "s":
            header = [_int(p, number) for p in parts[2:]]
            continue
        if parts[0] == "b":
            bags[_int(parts[1], number) - 1] = [_int(p, number) - 1 for p in parts[2:]]
            continue
        if len(parts) != 2:
            raise GraphError(f"line {number}: expected a tree edge", code="E046")
        edges.append((_int(parts[0], number) - 1, _int(parts[1], number) - 1))
    if header is None or len(header) != 3:
        raise GraphError("missing 's td' header", code="E047")
    count = header[0]
    if sorted(bags) != list(range(count)):
        raise GraphError(f"expected bags 1..{count}", code="E048")
    neighbours: dict[int, list[int]] = {i: [] for i in range(count)}
    for a, b in edges:
        neighbours[a].append(b)
        neighbours[b].append(a)
    parent = [-2] * count
    parent[root] = -1
    stack = [root]
    while stack:
        node = stack.pop()
        for other in neighbours[node]:
            if parent[other] == -2:
                parent[other] = node
                stack.append(other)
    if -2 in parent or len(edges) != count - 1:
        raise GraphError("tree edges do not form a tree", code="E049")
    td = TreeDecomposition.build([bags[i] for i in range(count)], parent, root, depth_bound)
    if td.width + 1 != header[1]:
        raise GraphError(
            f"header declares bag size {header[1]}, bags have {td.width + 1}", code="E050"
        )
    return td


def decomposition_to_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"c root {td.root + 1}"]
    if td.vertex_depth_bound is not None:
        lines.append(f"c depth {td.vertex_depth_bound}")
    lines.append(f"s td {len(td.bags)} {td.width + 1} {n}")
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1), *(str(v + 1) for v in bag)]))
    for i, p in enumerate(td.parent):
        if p >= 0:
            lines.append(f"{p + 1} {i + 1}")
    return "\n".join(lines) + "\n"


def layering_file_to_layering(text: str, host_hash: str = "") -> Layering:
    assignment: dict[int, int] = {}
    for number, parts in _tokens(text):
        if parts[0] == "c":
            continue
        if len(parts) != 2:
            raise GraphError(f"line {number}: expected '<layer> <vertex>'", code="E051")
        layer, vertex = _int(parts[0], number), _int(parts[1], number) - 1
        if layer < 1:
            raise GraphError(f"line {number}: layers are numbered from 1", code="E052")
        if vertex in assignment:
            raise GraphError(f"line {number}: vertex {vertex + 1} repeated", code="E053")
        assignment[vertex] = layer
    depth = max(assignment.values(), default=0)
    layers = [
        tuple(sorted(v for v, i in assignment.items() if i == index))
        for index in range(1, depth + 1)
    ]
    return Layering(layers=tuple(layers), host_hash=host_hash)


def layering_to_layering_file(l: Layering) -> str:
    lines = [f"{i + 1} {v + 1}" for i, layer in enumerate(l.layers) for v in layer]
    return "\n".join(lines) + "\n"


def json_to_graph(text: str) -> Graph:
    data = json.loads(text)
    return Graph.from_edges(data["n"], data.get("edges", []))


def graph_to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges()]}, indent=2) + "\n"


def load_graph(path: str | Path) -> Graph:
    """
    Load a graph from a ``.gr`` or ``.json`` file.

    Raises:
        FileNotFoundError: If the file does not exist.
        GraphError: If the contents cannot be parsed.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"graph file not found at: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        return json_to_graph(text)
    return gr_to_graph(text)


def write_text_atomic(path: str | Path, text: str) -> Path:
    """Write ``text`` next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temporary = path.with_name(f".{path.name}.tmp")
    temporary.write_text(text, encoding="utf-8")
    temporary.replace(path)
    logger.debug("Wrote %s", path)
    return path
