import abc
import importlib
import logging
from typing import Any, Callable, Dict, List, Type

from hamendo.error import HamendoException
from hamendo.target import Target

logger = logging.getLogger("hamendo")

NextStep = Callable[[Target], None]


class MiddlewareImportError(HamendoException):
    pass


class MiddlewareBase(metaclass=abc.ABCMeta):
    """
    Annotates a target before the verifiers see it. A middleware reads the
    graph, writes to the target context and hands over with ``call_next``;
    not calling it stops the chain for that target.
    """

    _settings: Dict[str, Any]

    def __init__(self, settings: Dict[str, Any]):
        self._settings = settings

    @abc.abstractmethod
    def __call__(self, target: Target, call_next: NextStep) -> None:
        raise NotImplementedError


def _middleware_class(path: str) -> Type[MiddlewareBase]:
    modulename, _, classname = path.rpartition(".")
    if not modulename:
        raise MiddlewareImportError(f"{path} is not a dotted class path")
    try:
        found = getattr(importlib.import_module(modulename), classname)
    except (ImportError, AttributeError) as e:
        raise MiddlewareImportError(f"Error importing middleware {path}: {e}") from e
    if not (isinstance(found, type) and issubclass(found, MiddlewareBase)):
        raise MiddlewareImportError(f"{path} is not a middleware")
    return found


class MiddlewarePipeline:
    _middlewares: List[MiddlewareBase]

    def __init__(self) -> None:
        self._middlewares = []

    @staticmethod
    def from_settings(middleware_settings: Dict[str, Any]) -> "MiddlewarePipeline":
        pipeline = MiddlewarePipeline()
        for path, params in middleware_settings.items():
            pipeline.add_middleware(_middleware_class(path)(params or {}))
        return pipeline

    def add_middleware(self, middleware: MiddlewareBase) -> "MiddlewarePipeline":
        self._middlewares.append(middleware)
        return self

    def run(self, target: Target) -> None:
        step: NextStep = lambda _: None
        for middleware in reversed(self._middlewares):
            step = self._bind(middleware, step)
        step(target)
        logger.debug("%s annotated: %s", target.get_source(), target.family_values())

    @staticmethod
    def _bind(middleware: MiddlewareBase, call_next: NextStep) -> NextStep:
        return lambda target: middleware(target, call_next)
