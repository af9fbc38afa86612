import abc
from typing import Dict, Optional


class HamendoException(Exception):
    pass


class InvalidParamsError(HamendoException, ValueError):
    pass


class NotAnEndomorphismError(HamendoException, ValueError):
    pass


class StructureError(HamendoException):
    pass


class UnsupportedFamilyError(HamendoException):
    pass


class LimitExceededError(HamendoException):
    """
    Raised when a search reaches one of the configured limits. Searches never
    truncate silently; the caller decides whether a partial run is acceptable.
    """

    def __init__(self, limit: str, value: float, explored: int = 0) -> None:
        self.limit = limit
        self.value = value
        self.explored = explored
        super().__init__(limit, value, explored)

    def __str__(self) -> str:
        return f"limit {self.limit}={self.value} exceeded after {self.explored} nodes"


class ErrorBase(metaclass=abc.ABCMeta):
    message: str

    def __init__(self, message: str) -> None:
        self.message = message

    @abc.abstractmethod
    def __str__(self) -> str:
        raise NotImplementedError()

    @staticmethod
    @abc.abstractmethod
    def name() -> str:
        raise NotImplementedError

    def to_dict(self) -> Dict[str, str]:
        return {
            "category": self.name(),
            "description": self.message,
        }


class HamendoError(ErrorBase):
    def __str__(self) -> str:
        return f"The following error was raised: \n{self.message}"

    @staticmethod
    def name() -> str:
        return "HAMENDO"


class VerifierError(HamendoError):
    verifier_name: str
    source: str

    def __init__(
        self,
        verifier_name: str,
        message: str,
        source: str,
    ) -> None:
        super().__init__(message)
        self.verifier_name = verifier_name
        self.source = source

    def __str__(self) -> str:
        return f"The following error was raised during a {self.verifier_name} verification of {self.source}: \n{self.message}"

    @staticmethod
    def name() -> str:
        return "VERIFIER"

    def to_dict(self) -> Dict[str, str]:
        return {
            "category": self.name(),
            "description": self.message,
            "source": self.source,
        }


class LimitError(VerifierError):
    limit: Optional[str]

    def __init__(
        self,
        verifier_name: str,
        message: str,
        source: str,
        limit: Optional[str] = None,
    ) -> None:
        super().__init__(verifier_name, message, source)
        self.limit = limit

    @staticmethod
    def name() -> str:
        return "LIMIT"
