import abc
import logging
from collections import defaultdict
from typing import Any, Dict, List, Optional, Sequence

from rich import print

from hamendo.settings import Property

logger = logging.getLogger("hamendo")


class ViolationCode:
    NOT_UNIFORM = Property("NOT_UNIFORM", 1)
    UNEXPECTED_RANK = Property("UNEXPECTED_RANK", 2)
    IMAGE_NOT_LAYER = Property("IMAGE_NOT_LAYER", 3)
    IMAGE_DIMENSION = Property("IMAGE_DIMENSION", 4)
    NOT_ENDOMORPHISM = Property("NOT_ENDOMORPHISM", 5)
    DECOMPOSITION = Property("DECOMPOSITION", 6)
    COUNT_MISMATCH = Property("COUNT_MISMATCH", 7)
    IMAGE_NOT_CLIQUE = Property("IMAGE_NOT_CLIQUE", 8)
    KERNEL_SHAPE = Property("KERNEL_SHAPE", 9)


_DESCRIPTIONS = {
    ViolationCode.NOT_UNIFORM.value: "Non-uniform kernel",
    ViolationCode.UNEXPECTED_RANK.value: "Unexpected rank",
    ViolationCode.IMAGE_NOT_LAYER.value: "Image is not a layer",
    ViolationCode.IMAGE_DIMENSION.value: "Image layer of unexpected dimension",
    ViolationCode.NOT_ENDOMORPHISM.value: "Not an endomorphism",
    ViolationCode.DECOMPOSITION.value: "Latin decomposition failed",
    ViolationCode.COUNT_MISMATCH.value: "Count mismatch",
    ViolationCode.IMAGE_NOT_CLIQUE.value: "Image is not a maximum clique",
    ViolationCode.KERNEL_SHAPE.value: "Kernel classes of unexpected shape",
}


class ViolationDetails(metaclass=abc.ABCMeta):
    def __init__(self, verifier: str = "") -> None:
        self.verifier = verifier

    @abc.abstractmethod
    def output_lines(self) -> List[str]:
        raise NotImplementedError

    @abc.abstractmethod
    def output_json(self) -> Dict[str, Any]:
        raise NotImplementedError


class Violation:
    """
    A theorem property that failed on a concrete map or count.
    """

    def __init__(self, code: Property, details: ViolationDetails) -> None:
        self.code = code
        self.details = details

    def __repr__(self) -> str:
        return f"{self.code.name}{self.details}"

    def description(self) -> str:
        return _DESCRIPTIONS.get(self.code.value, self.code.name)

    def print(self) -> None:
        print(f"\n{self.description()}:")
        for output_line in self.details.output_lines():
            print(f"  - {output_line}")


class Violations:
    all_violations: List[Violation]

    def __init__(self, violations: Optional[List[Violation]] = None) -> None:
        self.all_violations = [] if violations is None else violations

    def add_violations(self, violations: List[Violation]) -> None:
        self.all_violations.extend(violations)

    def group_by_code(self) -> Dict[str, List[Violation]]:
        violations: Dict[str, List[Violation]] = defaultdict(list)
        for violation in self.all_violations:
            violations[violation.code.name].append(violation)
        return violations

    def __len__(self) -> int:
        return len(self.all_violations)


class MapViolationDetails(ViolationDetails):
    def __init__(
        self,
        message: str,
        source: str,
        images: Optional[Sequence[int]] = None,
        verifier: str = "",
    ) -> None:
        super().__init__(verifier)
        self.message = message
        self.source = source
        self.images = None if images is None else list(images)

    def output_lines(self) -> List[str]:
        lines = [f"Description: {self.message}", f"Graph: {self.source}"]
        if self.images is not None:
            lines.append(f"Map: {self.images}")
        return lines

    def output_json(self) -> Dict[str, Any]:
        return {
            "description": self.message,
            "source": self.source,
            "map": self.images,
            "verifier": self.verifier,
        }

    def __repr__(self) -> str:
        return f"<MapViolationDetails(message={self.message}, source={self.source})>"


class CountViolationDetails(ViolationDetails):
    def __init__(
        self,
        quantity: str,
        parameters: Dict[str, Any],
        expected: Optional[int],
        observed: Optional[int],
        verifier: str = "",
    ) -> None:
        super().__init__(verifier)
        self.quantity = quantity
        self.parameters = parameters
        self.expected = expected
        self.observed = observed

    def output_lines(self) -> List[str]:
        return [
            f"Quantity: {self.quantity} {self.parameters}",
            f"Expected: {self.expected}, observed: {self.observed}",
        ]

    def output_json(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "parameters": self.parameters,
            "expected": None if self.expected is None else str(self.expected),
            "observed": None if self.observed is None else str(self.observed),
            "verifier": self.verifier,
        }
