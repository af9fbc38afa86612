import logging
from typing import Callable, List

from hamendo.hamming import GraphParams
from hamendo.middlewares.middleware import MiddlewareBase
from hamendo.settings import GraphFamilies, Property
from hamendo.target import Target

logger = logging.getLogger("hamendo")


def detect_families(params: GraphParams) -> List[Property]:
    """The graph families whose structure theorems apply to ``params``."""
    m = params.m
    s = params.distances
    if not params.is_cubic:
        return [GraphFamilies.CUBOID] if s == frozenset({1}) else []
    families = []
    if s == frozenset({1}):
        families.append(GraphFamilies.HAMMING)
    elif s == frozenset(range(1, max(s) + 1)) and max(s) < m:
        families.append(GraphFamilies.DISTANCE_RANGE)
    if m >= 2 and s == frozenset({m}):
        families.append(GraphFamilies.CATEGORICAL)
    if m >= 2 and s == frozenset(range(2, m + 1)):
        families.append(GraphFamilies.COMPLEMENT_HAMMING)
    if m >= 2 and s == frozenset(range(1, m)):
        families.append(GraphFamilies.COMPLEMENT_CATEGORICAL)
    return families


class FamilyViaDistanceSetMiddleware(MiddlewareBase):
    def __call__(self, target: Target, call_next: Callable[[Target], None]) -> None:
        enabled = set(self._settings.get("families", []))
        families = [
            family for family in detect_families(target.get_params()) if family.value in enabled
        ]
        if families:
            target.set_context("families", (target.get_context("families") or []) + families)
        logger.debug("%s belongs to %s", target.get_source(), [f.value for f in families])

        call_next(target)


class InformationalOrderMiddleware(MiddlewareBase):
    """
    Marks targets with a side below ``min_order``; the structure theorems are
    only asserted from that order on, smaller runs are reported for
    information.
    """

    def __call__(self, target: Target, call_next: Callable[[Target], None]) -> None:
        params = target.get_params()
        min_order = self._settings.get("min_order", 3)
        if params.is_cubic:
            informational = params.n < min_order
        else:
            # one side of 2 is allowed for cuboids, the last one
            informational = sorted(params.sides, reverse=True)[-2] < min_order if params.m >= 2 else False
        if informational:
            target.set_context("informational", True)

        call_next(target)
