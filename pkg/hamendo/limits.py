import logging
import time
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

from hamendo.error import InvalidParamsError, LimitExceededError

logger = logging.getLogger("hamendo")


@dataclass(frozen=True)
class Limits:
    max_vertices: int = 10_000
    max_search_vertices: int = 100
    max_results: Optional[int] = None
    max_nodes: Optional[int] = None
    budget_seconds: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("max_vertices", "max_search_vertices", "max_results", "max_nodes", "budget_seconds"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InvalidParamsError(f"limit {name} must be positive, got {value}")

    @staticmethod
    def from_settings(settings: Dict[str, Any]) -> "Limits":
        # TOML has no null; 0 means unlimited for the optional limits
        return Limits(
            max_vertices=settings.get("max_vertices", 10_000),
            max_search_vertices=settings.get("max_search_vertices", 100),
            max_results=settings.get("max_results") or None,
            max_nodes=settings.get("max_nodes") or None,
            budget_seconds=settings.get("budget_seconds") or None,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_vertices": self.max_vertices,
            "max_search_vertices": self.max_search_vertices,
            "max_results": self.max_results,
            "max_nodes": self.max_nodes,
            "budget_seconds": self.budget_seconds,
        }


class SearchBudget:
    """
    Node and wall-clock accounting shared by the backtracking searches.
    ``tick`` is called once per search node.
    """

    _CLOCK_EVERY = 1024

    def __init__(self, limits: Optional[Limits] = None) -> None:
        self._limits = limits or Limits()
        self._started = time.monotonic()
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        max_nodes = self._limits.max_nodes
        if max_nodes is not None and self.nodes > max_nodes:
            raise LimitExceededError("max_nodes", max_nodes, self.nodes)
        budget = self._limits.budget_seconds
        if budget is not None and self.nodes % self._CLOCK_EVERY == 0:
            if time.monotonic() - self._started > budget:
                raise LimitExceededError("budget_seconds", budget, self.nodes)

    def remaining(self) -> Limits:
        """What is left of the run for one more branch; never zero, so the branch still ticks once."""
        max_nodes = self._limits.max_nodes
        budget = self._limits.budget_seconds
        return replace(
            self._limits,
            max_nodes=None if max_nodes is None else max(1, max_nodes - self.nodes),
            budget_seconds=None if budget is None else max(1e-6, budget - self.seconds),
        )

    def charge(self, nodes: int) -> None:
        """Adds the nodes a finished branch explored and checks the run totals."""
        self.nodes += nodes
        max_nodes = self._limits.max_nodes
        if max_nodes is not None and self.nodes > max_nodes:
            raise LimitExceededError("max_nodes", max_nodes, self.nodes)
        budget = self._limits.budget_seconds
        if budget is not None and self.seconds > budget:
            raise LimitExceededError("budget_seconds", budget, self.nodes)

    @property
    def seconds(self) -> float:
        return time.monotonic() - self._started


def check_vertex_limit(vertex_count: int, limit: int, name: str = "max_vertices") -> None:
    if vertex_count > limit:
        raise LimitExceededError(name, limit, 0)
