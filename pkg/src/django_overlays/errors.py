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
Exceptions raised by django-overlays.

Every error carries a module-qualified ``code`` (``graph.E001``, ``builders.E003``
and so on) and an optional ``witness`` naming the vertices, edges or members that
triggered it. The ``overlays`` management command maps them to exit codes.
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "OverlaysError",
    "GraphError",
    "OverlayError",
    "SystemAlgebraError",
    "BuilderError",
    "ScheduleError",
    "SolverError",
    "InfeasibleError",
    "PtasError",
    "CertificateError",
    "PipelineError",
]


class OverlaysError(ValueError):
    module = "overlays"

    def __init__(self, message: str, *, code: str = "E000", witness: Any = None):
        super().__init__(message)
        self.code = f"{self.module}.{code}"
        self.witness = witness

    def as_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"code": self.code, "message": str(self)}
        if self.witness is not None:
            data["witness"] = self.witness
        return data


class GraphError(OverlaysError):
    module = "graph"


class OverlayError(OverlaysError):
    module = "overlay"


class SystemAlgebraError(OverlaysError):
    module = "system"


class BuilderError(OverlaysError):
    module = "builders"


class ScheduleError(BuilderError):
    pass


class SolverError(OverlaysError):
    module = "solvers"


class InfeasibleError(SolverError):
    pass


class PtasError(OverlaysError):
    module = "ptas"


class CertificateError(PtasError):
    pass


class PipelineError(OverlaysError):
    module = "cli"
