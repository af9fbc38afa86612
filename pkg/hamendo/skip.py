import logging
from typing import Dict

from hamendo.settings import Property

logger = logging.getLogger("hamendo")


class SkipCategories:
    FAMILY_NOT_SUPPORTED = Property("FAMILY_NOT_SUPPORTED", 1)
    PARTIAL_RUN = Property("PARTIAL_RUN", 2)
    OVER_LIMIT = Property("OVER_LIMIT", 3)
    INFORMATIONAL = Property("INFORMATIONAL", 4)


class HamendoSkipped:
    def __init__(
        self,
        verifier_name: str,
        category: Property,
        message: str,
        source: str,
    ) -> None:
        self.verifier_name = verifier_name
        self.category = category
        self.message = message
        self.source = str(source)

    def __str__(self) -> str:
        return f"{self.source} was not fully verified by {self.verifier_name}: \n{self.message}"

    def to_dict(self) -> Dict[str, str]:
        return {
            "category": str(self.category.name),
            "description": str(self.message),
            "source": self.source,
            "verifier": self.verifier_name,
        }
