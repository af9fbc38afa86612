import logging
from concurrent.futures import Future, ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from hamendo.limits import Limits, SearchBudget

logger = logging.getLogger("hamendo")

T = TypeVar("T")
R = TypeVar("R")


def split_and_merge(
    tasks: Sequence[T],
    worker: Callable[[T, Limits], R],
    budget: SearchBudget,
    nodes_of: Callable[[R], int],
    jobs: int = 1,
) -> List[R]:
    """
    Run ``worker`` over independent root branches. Results come back in task
    order whatever the number of jobs, so additive merges are deterministic.

    ``budget`` is the budget of the whole run. In process each branch gets
    what is left of it; in a pool every branch starts from what was left at
    submission. Either way the explored nodes are charged back after each
    branch, so the run raises once its total crosses a limit.
    ``worker`` and the tasks must be picklable when ``jobs > 1``.
    """
    results: List[R] = []
    if jobs <= 1 or len(tasks) <= 1:
        for task in tasks:
            result = worker(task, budget.remaining())
            budget.charge(nodes_of(result))
            results.append(result)
        return results

    logger.debug("Splitting %d root branches over %d workers", len(tasks), jobs)
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        limits = budget.remaining()
        futures: List[Future] = [pool.submit(worker, task, limits) for task in tasks]
        try:
            for future in futures:
                result = future.result()
                budget.charge(nodes_of(result))
                results.append(result)
        except BaseException:
            for future in futures:
                future.cancel()
            raise
    return results
