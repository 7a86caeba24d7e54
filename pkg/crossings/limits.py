"""
Resource guards for the exponential routines.

Defaults come from ``settings.CROSSINGS``; a case file's ``"limits"`` object
and the command line ``--limits`` flag override them, in that order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from django.conf import settings

from .exceptions import InvalidInput, ResourceLimitExceeded

logger = logging.getLogger(__name__)

FLAG_NAMES = {'m': 'max_m', 's': 'max_s', 'perm': 'perm_budget', 'transversal': 'transversal_guard'}


@dataclass(frozen=True)
class Limits:
    max_m: int = 12
    max_s: int = 12
    perm_budget: int = 10 ** 6
    transversal_guard: int = 20

    @classmethod
    def from_settings(cls) -> Limits:
        conf = getattr(settings, 'CROSSINGS', {})
        return cls(
            max_m=conf.get('MAX_M', cls.max_m),
            max_s=conf.get('MAX_S', cls.max_s),
            perm_budget=conf.get('PERM_BUDGET', cls.perm_budget),
            transversal_guard=conf.get('TRANSVERSAL_GUARD', cls.transversal_guard),
        )

    def override(self, **values) -> Limits:
        values = {k: v for k, v in values.items() if v is not None}
        for name, value in values.items():
            if value < 1:
                raise InvalidInput(f'limit {name} must be positive')
        return replace(self, **values)

    @classmethod
    def parse_flag(cls, text: str) -> dict:
        """``"m=6,s=4,perm=1000"`` → keyword overrides."""
        values = {}
        for part in filter(None, (p.strip() for p in text.split(','))):
            key, sep, raw = part.partition('=')
            if not sep or key.strip() not in FLAG_NAMES:
                raise InvalidInput(f'unknown limit {part!r}; use m=…,s=…,perm=…,transversal=…')
            try:
                values[FLAG_NAMES[key.strip()]] = int(raw)
            except ValueError as exc:
                raise InvalidInput(f'limit {key.strip()} must be an integer') from exc
        return values

    def check(self, m: int, s: int | None = None):
        if m > self.max_m:
            logger.warning('refusing ambient dimension %d (limit %d)', m, self.max_m)
            raise ResourceLimitExceeded(f'ambient dimension {m} exceeds the limit of {self.max_m}',
                                        limit='m', value=m)
        if s is not None and s > self.max_s:
            logger.warning('refusing %d members (limit %d)', s, self.max_s)
            raise ResourceLimitExceeded(f'{s} members exceed the limit of {self.max_s}',
                                        limit='s', value=s)
