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
Records of pipeline runs made through the ``overlays`` management command.
"""

from django.db import models
from django.utils.translation import gettext_lazy as _

__all__ = ["PipelineRun"]


class PipelineRun(models.Model):
    """
    One invocation of a pipeline step, stored when the command runs with
    ``--record``. The report is kept as written, so a run can be compared with a
    later one on the same inputs and seed.
    """

    command = models.CharField(
        _("command"),
        max_length=32,
        help_text=_("Pipeline step that was run (gen, layer, build, verify, solve, ptas)"),
    )
    config = models.JSONField(
        _("configuration"),
        default=dict,
        help_text=_("Fully resolved pipeline configuration"),
    )
    report = models.JSONField(
        _("report"),
        default=dict,
        blank=True,
        help_text=_("Report produced by the run, or the error it raised"),
    )
    exit_code = models.PositiveSmallIntegerField(
        _("exit code"),
        default=0,
        help_text=_("0 ok, 1 usage or pipeline error, 2 certificate failure, 3 infeasible"),
    )
    seed = models.PositiveIntegerField(_("seed"), default=0)
    created = models.DateTimeField(_("created"), auto_now_add=True)

    class Meta:
        verbose_name = _("Pipeline Run")
        verbose_name_plural = _("Pipeline Runs")
        ordering = ["-created"]

    def __str__(self):
        return f"{self.command} #{self.pk} (exit {self.exit_code})"

    @property
    def succeeded(self) -> bool:
        return self.exit_code == 0
