from typing import Any, Dict, List, Optional

from hamendo.hamming import GraphParams


class Target:
    """A graph queued for verification, with the context the middlewares attach to it."""

    _params: GraphParams
    _context: Dict[str, Any]

    def __init__(self, params: GraphParams, label: Optional[str] = None) -> None:
        self._params = params
        self._label = label
        self._context = {"families": [], "informational": False}

    def set_context(self, key: str, value: Any) -> None:
        self._context[key] = value

    def get_context(self, key: str) -> Any:
        return self._context.get(key)

    def get_params(self) -> GraphParams:
        return self._params

    def get_source(self) -> str:
        return self._label or self._params.to_text()

    def family_values(self) -> List[str]:
        return [family.value for family in self._context.get("families") or []]
