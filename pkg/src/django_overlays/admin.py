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
from __future__ import annotations

from django.contrib import admin
from django.utils.translation import gettext_lazy as _

from django_overlays.models import PipelineRun


@admin.register(PipelineRun)
class PipelineRunAdmin(admin.ModelAdmin):
    list_display = ("id", "command", "seed", "exit_code", "created")
    list_filter = ("command", "exit_code")
    search_fields = ("command",)
    readonly_fields = ("command", "config", "report", "exit_code", "seed", "created")
    fieldsets = (
        (_("Run"), {"fields": ("command", "seed", "exit_code", "created")}),
        (_("Details"), {"fields": ("config", "report")}),
    )

    def has_add_permission(self, request):
        # Runs are only created by the management command.
        return False
