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
Approximation schemes driven by a thin overlay system.

Each member ``L`` is solved exactly on its overlaid graph ``h_L`` (through its
tree decomposition), restricted to what its fibres allow; the best ``f``-image
over all members is the answer. Every answer is re-checked on the input graph
before it is reported.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from django_overlays.errors import CertificateError, PtasError
from django_overlays.graphs.graph import Graph
from django_overlays.overlays.overlay import Overlay, OverlayKind
from django_overlays.overlays.system import OverlaySystem, counting_bound, system_thickness
from django_overlays.solvers.dynamic import (
    solve_distance_independent,
    solve_neighborhood_hitting,
    solve_r_dominating,
)
from django_overlays.solvers.predicates import (
    hits_neighborhoods,
    is_distance_independent,
    r_dominates,
)

logger = logging.getLogger(__name__)

__all__ = [
    "PtasReport",
    "ptas_max_distance_independent",
    "ptas_max_independent_set",
    "ptas_min_r_dominating",
    "ptas_s_clique_cover",
]


class PtasReport(BaseModel):
    """
    ``guarantee`` is ``1-(s+1)/k`` for maximisation (``s`` the near-monotonicity
    constant) and ``1+1/k`` for minimisation; ``epsilon`` is its slack.
    ``wall_time`` stays 0 unless a caller times the run.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    problem: str
    r: int
    k: int
    s: int = 0
    epsilon: Fraction
    guarantee: Fraction
    maximize: bool
    solution: tuple[int, ...]
    value: int
    feasible: bool
    chosen_overlay_index: int
    per_overlay_values: tuple[int, ...]
    system_size: int
    max_thickness: Fraction
    tw_bound: int
    wall_time: float = Field(default=0.0, ge=0)

    @field_serializer("epsilon", "guarantee", "max_thickness")
    def dump_fraction(self, value: Fraction) -> str:
        return str(value)

    def ratio_against(self, opt: int) -> Fraction:
        """``value / opt`` (1 when both are zero)."""
        if opt == 0:
            return Fraction(1) if self.value == 0 else Fraction(self.value)
        return Fraction(self.value, opt)

    def meets_guarantee(self, opt: int) -> bool:
        if self.maximize:
            return self.value >= self.guarantee * opt
        return self.value <= self.guarantee * opt


def _check_system(g: Graph, system: OverlaySystem, k: int, kinds: set[OverlayKind]) -> Fraction:
    if k < 1:
        raise PtasError("k must be positive", code="E001")
    if system.host_hash != g.content_hash:
        raise PtasError("system overlays a different graph", code="E002")
    if system.kind not in kinds:
        raise PtasError(
            f"kind {system.kind.value} systems are not accepted here", code="E003"
        )
    _, thickest = system_thickness(system)
    if thickest > 1 + Fraction(1, k):
        raise PtasError(
            f"system thickness {thickest} exceeds 1+1/{k}", code="E004", witness=str(thickest)
        )
    ok, worst, count = counting_bound(system, k)
    if not ok:
        raise PtasError(
            f"vertex {worst} is thick in {count} of {system.size} members, over 1/{k} of them",
            code="E005",
            witness=[worst],
        )
    return thickest


def _run(
    g: Graph,
    system: OverlaySystem,
    solve_member: Callable[[Overlay], Sequence[int]],
    maximize: bool,
) -> tuple[int, tuple[int, ...], list[int]]:
    best_index = -1
    best: tuple[int, ...] = ()
    values = []
    for index, member in enumerate(system.members):
        image = tuple(sorted({member.f[x] for x in solve_member(member)} & set(g.vertices)))
        values.append(len(image))
        if best_index < 0 or (len(image) > len(best) if maximize else len(image) < len(best)):
            best_index, best = index, image
    return best_index, best, values


def _report(problem, r, k, s, maximize, g, system, thickest, index, solution, values, feasible):
    epsilon = Fraction(s + 1, k) if maximize else Fraction(1, k)
    return PtasReport(
        problem=problem,
        r=r,
        k=k,
        s=s,
        epsilon=epsilon,
        guarantee=1 - epsilon if maximize else 1 + epsilon,
        maximize=maximize,
        solution=solution,
        value=len(solution),
        feasible=feasible,
        chosen_overlay_index=index,
        per_overlay_values=tuple(values),
        system_size=system.size,
        max_thickness=thickest,
        tw_bound=system.declared_tw,
    )


def ptas_max_distance_independent(
    g: Graph, system: OverlaySystem, r: int, k: int, s: int = 0
) -> PtasReport:
    """
    Approximate a maximum distance-``r`` independent set within ``1-(s+1)/k``.
    Per member, only vertices covered exactly once (``S_L``) may be chosen.

    Raises:
        PtasError: For a kind ★ system, a radius below ``r-1`` or a system that
            is too thick.
        CertificateError: If the answer is not distance-``r`` independent in ``g``.
    """
    thickest = _check_system(g, system, k, {OverlayKind.A, OverlayKind.S})
    if system.r < max(r - 1, 1):
        raise PtasError(f"system radius {system.r} is below {r - 1}", code="E006")

    def solve_member(member: Overlay) -> Sequence[int]:
        single = [fibre[0] if len(fibre) == 1 else None for fibre in member.fibres]
        allowed = [x for x in single if x is not None]
        return solve_distance_independent(member.h, allowed, r, member.td)

    index, solution, values = _run(g, system, solve_member, maximize=True)
    if not is_distance_independent(g, solution, r):
        raise CertificateError(
            f"solution is not distance-{r} independent", code="E010", witness=list(solution)
        )
    logger.info("Distance-%d independent set of %r: %d vertices", r, g, len(solution))
    return _report(
        "dist-is", r, k, s, True, g, system, thickest, index, solution, values, True
    )


def ptas_max_independent_set(g: Graph, system: OverlaySystem, k: int) -> PtasReport:
    """Maximum independent set, i.e. distance-2 independence."""
    report = ptas_max_distance_independent(g, system, 2, k)
    return report.model_copy(update={"problem": "mis"})


def ptas_min_r_dominating(g: Graph, system: OverlaySystem, r: int, k: int) -> PtasReport:
    """
    Approximate a minimum ``r``-dominating set within ``1+1/k``. Per member the
    targets are the level-``r`` vertices; the image is deduplicated.
    """
    thickest = _check_system(g, system, k, {OverlayKind.A, OverlayKind.S})
    if system.r < r:
        raise PtasError(f"system radius {system.r} is below {r}", code="E007")

    def solve_member(member: Overlay) -> Sequence[int]:
        targets = [x for x, level in enumerate(member.ell) if level >= r]
        return solve_r_dominating(member.h, targets, r, member.td)

    index, solution, values = _run(g, system, solve_member, maximize=False)
    if not r_dominates(g, solution, g.vertices, r):
        raise CertificateError(
            f"solution does not {r}-dominate the graph", code="E011", witness=list(solution)
        )
    logger.info("%d-dominating set of %r: %d vertices", r, g, len(solution))
    return _report("rdom", r, k, 0, False, g, system, thickest, index, solution, values, True)


def ptas_s_clique_cover(g: Graph, system: OverlaySystem, s: int, k: int) -> PtasReport:
    """
    Approximate a minimum set meeting every ``s``-vertex clique within ``1+1/k``.
    Per member the targets are the level-1 preimages of star vertices of
    ``s``-cliques, whose neighbourhoods must be hit.

    Raises:
        PtasError: For a system that is not of kind ★ or not of radius 1.
        CertificateError: If the answer misses an ``s``-clique.
    """
    if s < 1:
        raise PtasError("s must be positive", code="E008")
    thickest = _check_system(g, system, k, {OverlayKind.STAR})
    if system.r != 1:
        raise PtasError(f"clique covers need a radius-1 system, not {system.r}", code="E009")
    star = system.star
    wanted = {star.star_vertex(c) for c in star.cliques if len(c) == s}

    def solve_member(member: Overlay) -> Sequence[int]:
        targets = [x for x, v in enumerate(member.f) if v in wanted and member.ell[x] >= 1]
        return solve_neighborhood_hitting(member.h, targets, member.td)

    index, solution, values = _run(g, system, solve_member, maximize=False)
    cliques = [star.star_vertex(c) for c in star.cliques if len(c) == s]
    if not hits_neighborhoods(star.star, solution, cliques):
        raise CertificateError(
            f"solution misses an {s}-clique", code="E012", witness=list(solution)
        )
    logger.info("%d-clique cover of %r: %d vertices", s, g, len(solution))
    return _report(
        "cliquecover", 1, k, 0, False, g, system, thickest, index, solution, values, True
    )
