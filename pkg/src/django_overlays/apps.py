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
import logging

from django.apps import AppConfig
from django.conf import settings
from django.utils.translation import gettext_lazy as _

logger = logging.getLogger(__name__)
__all__ = ["DjangoOverlaysConfig"]


class DjangoOverlaysConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "django_overlays"
    verbose_name = _("Django Overlays")

    def __init__(self, *args, **kwargs):
        """
        Initialize the DjangoOverlaysConfig app configuration.
        Tunables are read once here; the properties below fall back to defaults.
        """
        super().__init__(*args, **kwargs)
        logger.debug("Initializing DjangoOverlaysConfig with name: %s", self.name)
        # Internal attributes so unit tests can patch one value without touching
        # the configured settings.
        self._exact_separator_threshold = getattr(
            settings, "OVERLAYS_EXACT_SEPARATOR_THRESHOLD", None
        )
        self._clique_cap = getattr(settings, "OVERLAYS_CLIQUE_CAP", None)
        self._brute_force_limit = getattr(settings, "OVERLAYS_BRUTE_FORCE_LIMIT", None)
        self._dp_max_width = getattr(settings, "OVERLAYS_DP_MAX_WIDTH", None)
        self._schedule_t_limit = getattr(settings, "OVERLAYS_SCHEDULE_T_LIMIT", None)

    def ready(self):
        logger.debug("DjangoOverlaysConfig in ready; loading checks")
        from . import checks  # noqa: F401

    @property
    def EXACT_SEPARATOR_THRESHOLD(self) -> int:
        """
        Largest vertex count for which balanced separators are found by exact search.
        This is configurable via the OVERLAYS_EXACT_SEPARATOR_THRESHOLD setting.
        """
        if self._exact_separator_threshold is None:
            return 18
        return int(self._exact_separator_threshold)

    @property
    def CLIQUE_CAP(self) -> int:
        """
        Maximum number of cliques enumerated when building a star graph.
        This is configurable via the OVERLAYS_CLIQUE_CAP setting.
        """
        if self._clique_cap is None:
            return 2**20
        return int(self._clique_cap)

    @property
    def BRUTE_FORCE_LIMIT(self) -> int:
        """
        Largest instance (in vertices) accepted by the brute-force oracle.
        This is configurable via the OVERLAYS_BRUTE_FORCE_LIMIT setting.
        """
        if self._brute_force_limit is None:
            return 20
        return int(self._brute_force_limit)

    @property
    def DP_MAX_WIDTH(self) -> int:
        """
        Widest decomposition the dynamic programs attempt before a component falls
        back to brute force. Configurable via OVERLAYS_DP_MAX_WIDTH.
        """
        if self._dp_max_width is None:
            return 8
        return int(self._dp_max_width)

    @property
    def SCHEDULE_T_LIMIT(self) -> int:
        """
        Largest base-case size a separator schedule may use.
        This is configurable via the OVERLAYS_SCHEDULE_T_LIMIT setting.
        """
        if self._schedule_t_limit is None:
            return 2**31
        return int(self._schedule_t_limit)

    @property
    def DEFAULT_SEED(self) -> int:
        """
        Seed used by pipelines that do not name one.
        """
        return getattr(settings, "OVERLAYS_DEFAULT_SEED", 0)
