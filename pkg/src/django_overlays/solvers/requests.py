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
"""Problem statements handed to the exact solvers."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from django_overlays.graphs.decomposition import TreeDecomposition
from django_overlays.graphs.graph import Graph

__all__ = ["Problem", "SolveRequest"]


class Problem(str, Enum):
    DISTANCE_INDEPENDENT = "distance_independent"
    R_DOMINATING = "r_dominating"
    NEIGHBORHOOD_HITTING = "neighborhood_hitting"

    @property
    def maximize(self) -> bool:
        return self is Problem.DISTANCE_INDEPENDENT


class SolveRequest(BaseModel):
    """
    ``vertex_set`` is the set ``S`` a distance-independent set is chosen from,
    or the targets ``T`` to dominate or whose neighbourhoods to hit.
    """

    model_config = ConfigDict(frozen=True)

    h: Graph
    td: TreeDecomposition | None = None
    problem: Problem
    r: int = Field(default=1, ge=1)
    vertex_set: tuple[int, ...]

    @model_validator(mode="after")
    def check_vertex_set(self) -> Self:
        if list(self.vertex_set) != sorted(set(self.vertex_set)):
            raise ValueError("vertex_set must be sorted and duplicate-free")
        if any(not 0 <= v < self.h.n for v in self.vertex_set):
            raise ValueError("vertex_set names vertices outside h")
        return self
