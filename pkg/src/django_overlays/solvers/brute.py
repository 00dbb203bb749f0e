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
"""Exhaustive search, the reference the dynamic programs are checked against."""

from __future__ import annotations

import logging
from itertools import combinations

from django.apps import apps

from django_overlays.errors import InfeasibleError, SolverError
from django_overlays.solvers.predicates import feasibility_checker
from django_overlays.solvers.requests import Problem, SolveRequest

logger = logging.getLogger(__name__)
config = apps.get_app_config("django_overlays")

__all__ = ["brute_force"]


def brute_force(request: SolveRequest, limit: int | None = None) -> tuple[int, ...]:
    """
    The optimum found by trying vertex sets by size (largest first for
    maximisation), each size in lexicographic order, so ties resolve to the
    lexicographically smallest optimum.

    Raises:
        SolverError: If ``h`` has more than ``limit`` vertices
            (OVERLAYS_BRUTE_FORCE_LIMIT by default).
        InfeasibleError: If no vertex set is feasible.
    """
    limit = config.BRUTE_FORCE_LIMIT if limit is None else limit
    if request.h.n > limit:
        raise SolverError(
            f"brute force refuses {request.h.n} vertices (limit {limit})", code="E001"
        )
    if request.problem is Problem.DISTANCE_INDEPENDENT:
        pool = request.vertex_set
        sizes = range(len(pool), -1, -1)
    else:
        pool = tuple(request.h.vertices)
        sizes = range(len(pool) + 1)
    check = feasibility_checker(request)
    for size in sizes:
        for candidate in combinations(pool, size):
            if check(candidate):
                return candidate
    raise InfeasibleError(f"no feasible {request.problem.value} set", code="E002")
