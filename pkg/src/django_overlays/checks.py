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
from django.core.checks import Error, Tags, Warning, register

SETTING_IDS = {
    "OVERLAYS_EXACT_SEPARATOR_THRESHOLD": "django_overlays.E001",
    "OVERLAYS_CLIQUE_CAP": "django_overlays.E002",
    "OVERLAYS_BRUTE_FORCE_LIMIT": "django_overlays.E003",
    "OVERLAYS_DP_MAX_WIDTH": "django_overlays.E004",
    "OVERLAYS_SCHEDULE_T_LIMIT": "django_overlays.E005",
}


@register(Tags.compatibility)
def check_overlay_settings(app_configs, **kwargs):
    if app_configs is not None and "django_overlays" not in {
        app.name for app in app_configs
    }:
        # This check is only relevant if django_overlays is installed
        return []

    errors = []
    from django.conf import settings

    for name, check_id in SETTING_IDS.items():
        value = getattr(settings, name, None)
        if value is None:
            # Unset means the app default is used.
            continue
        if isinstance(value, bool) or not isinstance(value, int):
            errors.append(
                Error(
                    f"{name}={value!r} is not an integer.",
                    hint=f"Set {name} to a positive integer or remove it.",
                    id=check_id,
                )
            )
        elif value < 1:
            errors.append(
                Error(
                    f"{name}={value} must be positive.",
                    hint=f"Set {name} to a positive integer or remove it.",
                    id=check_id,
                )
            )

    seed = getattr(settings, "OVERLAYS_DEFAULT_SEED", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        errors.append(
            Error(
                f"OVERLAYS_DEFAULT_SEED={seed!r} is not a non-negative integer.",
                hint="Pipelines need a reproducible integer seed.",
                id="django_overlays.E006",
            )
        )

    limit = getattr(settings, "OVERLAYS_BRUTE_FORCE_LIMIT", None)
    if isinstance(limit, int) and limit > 24:
        errors.append(
            Warning(
                f"OVERLAYS_BRUTE_FORCE_LIMIT={limit} enumerates up to 2**{limit} subsets.",
                hint="Oracle runs above 24 vertices rarely finish in reasonable time.",
                id="django_overlays.W001",
            )
        )
    return errors
