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
Exact solvers by dynamic programming over nice tree decompositions of ``h``.

* distance-``r`` independence inside ``S``: labels are distances to the nearest
  selected vertex capped at ``(r-1)//2 + 1``, with a class naming that vertex;
* ``r``-domination of ``T``: labels are distances to the nearest selected vertex
  in ``0..r`` or "far", each waiting for a neighbour one step closer;
* neighbourhood hitting of ``T``: each bag vertex is selected or not, and hit
  or not.

All three run on the decomposition of ``h`` itself, so the running time follows
its width whatever the radius. Components are solved separately. A component
whose decomposition is wider than OVERLAYS_DP_MAX_WIDTH falls back to brute
force when it is small enough.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from typing import Any

from django.apps import apps

from django_overlays.errors import GraphError, InfeasibleError, SolverError
from django_overlays.graphs.decomposition import TreeDecomposition, heuristic_tree_decomposition
from django_overlays.graphs.graph import Graph
from django_overlays.solvers.brute import brute_force
from django_overlays.solvers.nice import NiceDecomposition, NiceKind, nice_decomposition
from django_overlays.solvers.predicates import feasibility_checker
from django_overlays.solvers.requests import Problem, SolveRequest

logger = logging.getLogger(__name__)
config = apps.get_app_config("django_overlays")

__all__ = [
    "solve",
    "solve_distance_independent",
    "solve_r_dominating",
    "solve_neighborhood_hitting",
]

Entry = tuple[int, tuple[int, ...]]


def _offer(table: dict, key: Any, entry: Entry, maximize: bool) -> None:
    current = table.get(key)
    if current is None:
        table[key] = entry
        return
    rank = (-entry[0], entry[1]) if maximize else entry
    held = (-current[0], current[1]) if maximize else current
    if rank < held:
        table[key] = entry


def _merge(a: tuple[int, ...], b: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(a).union(b)))


def _bag_near(h: Graph, v: int, state: dict) -> list[int]:
    return [u for u in h.neighbors(v) if u in state]


def _classes_key(state: dict[int, tuple[int, int]], owned: Iterable[int]) -> tuple:
    """Rename classes by first appearance so equal states share a key."""
    names: dict[int, int] = {}
    entries = []
    for u in sorted(state):
        label, cls = state[u]
        if cls >= 0:
            cls = names.setdefault(cls, len(names))
        entries.append((u, label, cls))
    return tuple(entries), frozenset(names[c] for c in owned if c in names)


def _independent_dp(
    h: Graph, nice: NiceDecomposition, allowed: set[int], r: int
) -> tuple[int, ...]:
    """
    Largest subset of ``allowed`` whose vertices are pairwise at distance
    ``>= r`` (``r >= 2``).

    A bag vertex carries ``(label, class)``: its distance to the nearest selected
    vertex capped at ``reach + 1`` with ``reach = (r-1)//2``, and below the cap a
    class standing for that selected vertex (``-1`` above it). Labels change by
    at most one along an edge, a class owns at most one selected vertex, and an
    edge between two classes needs ``label + label + 1 >= r``. The state also
    keeps the classes whose selected vertex was already forgotten.
    """
    reach = (r - 1) // 2
    far = reach + 1

    def compatible(a: tuple[int, int], b: tuple[int, int]) -> bool:
        if abs(a[0] - b[0]) > 1:
            return False
        if a[1] < 0 or b[1] < 0 or a[1] == b[1]:
            return True
        return a[0] + b[0] + 1 >= r

    tables: list[dict | None] = []
    for node in nice.nodes:
        table: dict[tuple, Entry] = {}
        if node.kind is NiceKind.LEAF:
            table[((), frozenset())] = (0, ())
        elif node.kind is NiceKind.INTRODUCE:
            x = node.vertex
            for (entries, owned), (value, chosen) in tables[node.children[0]].items():
                state = {u: (label, cls) for u, label, cls in entries}
                near = _bag_near(h, x, state)
                classes = sorted({cls for _, cls in state.values() if cls >= 0})
                centred = owned | {cls for label, cls in state.values() if label == 0}
                options = [(far, -1)]
                for label in range(reach + 1):
                    for cls in (*classes, len(classes)):
                        if label == 0 and (x not in allowed or cls in centred):
                            continue
                        options.append((label, cls))
                for option in options:
                    if not all(compatible(option, state[u]) for u in near):
                        continue
                    grown = dict(state)
                    grown[x] = option
                    if option[0] == 0:
                        entry = (value + 1, _merge(chosen, [x]))
                    else:
                        entry = (value, chosen)
                    _offer(table, _classes_key(grown, owned), entry, True)
        elif node.kind is NiceKind.FORGET:
            v = node.vertex
            for (entries, owned), entry in tables[node.children[0]].items():
                state = {u: (label, cls) for u, label, cls in entries}
                label, cls = state.pop(v)
                kept = set(owned)
                if label == 0:
                    if cls in kept:
                        continue
                    kept.add(cls)
                if cls >= 0 and all(c != cls for _, c in state.values()):
                    # the class is closed; it must have found its selected vertex
                    if cls not in kept:
                        continue
                    kept.discard(cls)
                _offer(table, _classes_key(state, kept), entry, True)
        else:
            left, right = (tables[c] for c in node.children)
            by_entries: dict[tuple, list] = {}
            for (entries, owned), entry in right.items():
                by_entries.setdefault(entries, []).append((owned, entry))
            for (entries, owned), (value, chosen) in left.items():
                centres = sum(1 for _, label, _ in entries if label == 0)
                for other_owned, (other_value, other_chosen) in by_entries.get(entries, []):
                    if owned & other_owned:
                        continue
                    _offer(
                        table,
                        (entries, owned | other_owned),
                        (value + other_value - centres, _merge(chosen, other_chosen)),
                        True,
                    )
        for child in node.children:
            tables[child] = None
        tables.append(table)
    return tables[nice.root][((), frozenset())][1]


def _dominating_dp(
    h: Graph, nice: NiceDecomposition, targets: set[int], r: int
) -> tuple[int, ...]:
    """
    Smallest set within distance ``r`` of every target.

    A bag vertex carries ``(label, seen)``: its distance to the nearest selected
    vertex in ``0..r``, or ``r + 1`` for farther away, and whether a neighbour one
    step closer has been met. Labels change by at most one along an edge;
    targets stay within ``r``; a labelled vertex is only forgotten once seen.
    """
    far = r + 1
    tables: list[dict | None] = []
    for node in nice.nodes:
        table: dict[tuple, Entry] = {}
        if node.kind is NiceKind.LEAF:
            table[()] = (0, ())
        elif node.kind is NiceKind.INTRODUCE:
            x = node.vertex
            labels = range(far) if x in targets else range(far + 1)
            for key, (cost, chosen) in tables[node.children[0]].items():
                state = {u: (label, seen) for u, label, seen in key}
                near = _bag_near(h, x, state)
                for label in labels:
                    if any(abs(label - state[u][0]) > 1 for u in near):
                        continue
                    grown = dict(state)
                    for u in near:
                        if state[u][0] == label + 1:
                            grown[u] = (label + 1, True)
                    seen = label in (0, far) or any(state[u][0] == label - 1 for u in near)
                    grown[x] = (label, seen)
                    key_out = tuple((u, *grown[u]) for u in sorted(grown))
                    if label == 0:
                        _offer(table, key_out, (cost + 1, _merge(chosen, [x])), False)
                    else:
                        _offer(table, key_out, (cost, chosen), False)
        elif node.kind is NiceKind.FORGET:
            v = node.vertex
            for key, entry in tables[node.children[0]].items():
                if not all(seen for u, _, seen in key if u == v):
                    continue
                _offer(table, tuple(item for item in key if item[0] != v), entry, False)
        else:
            left, right = (tables[c] for c in node.children)
            by_labels: dict[tuple, list] = {}
            for key, entry in right.items():
                by_labels.setdefault(tuple((u, label) for u, label, _ in key), []).append(
                    (key, entry)
                )
            for key, (cost, chosen) in left.items():
                selected = sum(1 for _, label, _ in key if label == 0)
                for other_key, (other_cost, other_chosen) in by_labels.get(
                    tuple((u, label) for u, label, _ in key), []
                ):
                    combined = tuple(
                        (u, label, seen or other)
                        for (u, label, seen), (_, _, other) in zip(key, other_key)
                    )
                    _offer(
                        table,
                        combined,
                        (cost + other_cost - selected, _merge(chosen, other_chosen)),
                        False,
                    )
        for child in node.children:
            tables[child] = None
        tables.append(table)
    return tables[nice.root][()][1]


def _hitting_dp(h: Graph, nice: NiceDecomposition, targets: set[int]) -> tuple[int, ...]:
    """
    Minimum set meeting the open neighbourhood of every target. A state maps
    each bag vertex to ``(selected, satisfied)``; non-targets are always
    satisfied.
    """
    tables: list[dict | None] = []
    for node in nice.nodes:
        table: dict[tuple, Entry] = {}
        if node.kind is NiceKind.LEAF:
            table[()] = (0, ())
        elif node.kind is NiceKind.INTRODUCE:
            v = node.vertex
            free = v not in targets
            for key, (cost, chosen) in tables[node.children[0]].items():
                state = dict((u, (s, hit)) for u, s, hit in key)
                near = _bag_near(h, v, state)
                covered = any(state[u][0] for u in near)
                skipped = dict(state)
                skipped[v] = (False, free or covered)
                _offer(table, _key(skipped), (cost, chosen), False)
                taken = {u: (s, hit or u in near) for u, (s, hit) in state.items()}
                taken[v] = (True, free or covered)
                _offer(table, _key(taken), (cost + 1, _merge(chosen, [v])), False)
        elif node.kind is NiceKind.FORGET:
            v = node.vertex
            for key, entry in tables[node.children[0]].items():
                state = dict((u, (s, hit)) for u, s, hit in key)
                if not state.pop(v)[1]:
                    continue
                _offer(table, _key(state), entry, False)
        else:
            left, right = (tables[c] for c in node.children)
            by_selection: dict[tuple, list] = {}
            for key, entry in right.items():
                by_selection.setdefault(tuple((u, s) for u, s, _ in key), []).append((key, entry))
            for key, (cost, chosen) in left.items():
                selected = sum(1 for _, s, _ in key if s)
                for other_key, (other_cost, other_chosen) in by_selection.get(
                    tuple((u, s) for u, s, _ in key), []
                ):
                    combined = tuple(
                        (u, s, hit or other)
                        for (u, s, hit), (_, _, other) in zip(key, other_key)
                    )
                    _offer(
                        table,
                        combined,
                        (cost + other_cost - selected, _merge(chosen, other_chosen)),
                        False,
                    )
        for child in node.children:
            tables[child] = None
        tables.append(table)
    root = tables[nice.root]
    if () not in root:
        raise InfeasibleError("some target cannot be satisfied", code="E010")
    return root[()][1]


def _key(state: dict[int, tuple[bool, bool]]) -> tuple:
    return tuple((u, s, hit) for u, (s, hit) in sorted(state.items()))


def _solve_component(
    sub: Graph,
    td: TreeDecomposition,
    request: SolveRequest,
    vertex_set: tuple[int, ...],
) -> tuple[int, ...]:
    if td.width > config.DP_MAX_WIDTH and sub.n <= config.BRUTE_FORCE_LIMIT:
        logger.info(
            "Component of %d vertices has width %d > %d; solving by brute force",
            sub.n,
            td.width,
            config.DP_MAX_WIDTH,
        )
        return brute_force(
            SolveRequest(h=sub, problem=request.problem, r=request.r, vertex_set=vertex_set)
        )
    nice = nice_decomposition(td)
    if request.problem is Problem.DISTANCE_INDEPENDENT:
        return _independent_dp(sub, nice, set(vertex_set), request.r)
    if request.problem is Problem.R_DOMINATING:
        return _dominating_dp(sub, nice, set(vertex_set), request.r)
    return _hitting_dp(sub, nice, set(vertex_set))


def solve(request: SolveRequest) -> tuple[int, ...]:
    """
    Solve the request exactly and return the optimum as a sorted tuple. The
    given decomposition of ``h`` is used as is; without one each component is
    decomposed heuristically.

    Raises:
        InfeasibleError: If a neighbourhood-hitting target is isolated.
        SolverError: If the given decomposition does not fit ``h`` or the
            solution fails its own feasibility check.
    """
    h = request.h
    if request.td is not None:
        try:
            request.td.validate_for(h)
        except GraphError as e:
            raise SolverError(f"decomposition does not fit h: {e}", code="E011")
    if request.problem is Problem.DISTANCE_INDEPENDENT and request.r == 1:
        return request.vertex_set
    if request.problem is Problem.NEIGHBORHOOD_HITTING:
        isolated = [t for t in request.vertex_set if h.degree(t) == 0]
        if isolated:
            raise InfeasibleError(
                "targets without neighbours cannot be hit", code="E012", witness=isolated
            )

    wanted = set(request.vertex_set)
    solution: list[int] = []
    for component in h.components():
        sub, embedding = h.induced_subgraph(component)
        position = {v: i for i, v in enumerate(embedding)}
        vertex_set = tuple(position[v] for v in component if v in wanted)
        if request.problem is not Problem.DISTANCE_INDEPENDENT and not vertex_set:
            continue
        if request.td is not None:
            td = request.td.restricted(position)
        else:
            td = heuristic_tree_decomposition(sub)
        part = _solve_component(sub, td, request, vertex_set)
        solution.extend(embedding[i] for i in part)
    result = tuple(sorted(solution))
    if not feasibility_checker(request)(result):
        raise SolverError(
            f"{request.problem.value} solution failed its feasibility check",
            code="E013",
            witness=list(result),
        )
    logger.debug("Solved %s on %r: %d vertices", request.problem.value, h, len(result))
    return result


def solve_distance_independent(
    h: Graph, allowed: Iterable[int], r: int, td: TreeDecomposition | None = None
) -> tuple[int, ...]:
    """Largest subset of ``allowed`` whose vertices are pairwise at distance ``>= r``."""
    return solve(
        SolveRequest(
            h=h,
            td=td,
            problem=Problem.DISTANCE_INDEPENDENT,
            r=r,
            vertex_set=tuple(sorted(set(allowed))),
        )
    )


def solve_r_dominating(
    h: Graph, targets: Iterable[int], r: int, td: TreeDecomposition | None = None
) -> tuple[int, ...]:
    """Smallest set within distance ``r`` of every target."""
    return solve(
        SolveRequest(
            h=h,
            td=td,
            problem=Problem.R_DOMINATING,
            r=r,
            vertex_set=tuple(sorted(set(targets))),
        )
    )


def solve_neighborhood_hitting(
    h: Graph, targets: Iterable[int], td: TreeDecomposition | None = None
) -> tuple[int, ...]:
    """Smallest set containing a neighbour of every target."""
    return solve(
        SolveRequest(
            h=h,
            td=td,
            problem=Problem.NEIGHBORHOOD_HITTING,
            vertex_set=tuple(sorted(set(targets))),
        )
    )
