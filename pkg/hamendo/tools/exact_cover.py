"""
Exact cover by Algorithm X over a dict-of-sets matrix.

Columns are the items to cover, rows the candidate subsets. Selecting a row
removes its columns and every conflicting row; deselecting restores them in
reverse order, which gives the same candidate elimination as dancing links.
Branching is always on the column with the fewest remaining rows (ties by
column), so the search tree and every count are deterministic.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from hamendo.error import InvalidParamsError
from hamendo.limits import Limits, SearchBudget
from hamendo.tools.parallel import split_and_merge

logger = logging.getLogger("hamendo")


@dataclass(frozen=True)
class CoverCount:
    value: int
    nodes: int


class ExactCover:
    def __init__(self, columns: Iterable[int], rows: Sequence[Iterable[int]]) -> None:
        self._columns: Tuple[int, ...] = tuple(sorted(set(columns)))
        self._rows: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(set(row))) for row in rows)
        known = set(self._columns)
        for index, row in enumerate(self._rows):
            if not row:
                raise InvalidParamsError(f"row {index} is empty")
            if not known.issuperset(row):
                raise InvalidParamsError(f"row {index} covers unknown columns {sorted(set(row) - known)}")

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return self._rows

    def _matrix(self) -> Dict[int, Set[int]]:
        matrix: Dict[int, Set[int]] = {column: set() for column in self._columns}
        for index, row in enumerate(self._rows):
            for column in row:
                matrix[column].add(index)
        return matrix

    def _select(self, matrix: Dict[int, Set[int]], r: int) -> List[Set[int]]:
        removed = []
        for j in self._rows[r]:
            for i in matrix[j]:
                for k in self._rows[i]:
                    if k != j:
                        matrix[k].remove(i)
            removed.append(matrix.pop(j))
        return removed

    def _deselect(self, matrix: Dict[int, Set[int]], r: int, removed: List[Set[int]]) -> None:
        for j in reversed(self._rows[r]):
            matrix[j] = removed.pop()
            for i in matrix[j]:
                for k in self._rows[i]:
                    if k != j:
                        matrix[k].add(i)

    @staticmethod
    def _branch_column(matrix: Dict[int, Set[int]]) -> int:
        return min(matrix, key=lambda column: (len(matrix[column]), column))

    def _count(self, matrix: Dict[int, Set[int]], budget: SearchBudget) -> int:
        budget.tick()
        if not matrix:
            return 1
        column = self._branch_column(matrix)
        total = 0
        for r in sorted(matrix[column]):
            removed = self._select(matrix, r)
            total += self._count(matrix, budget)
            self._deselect(matrix, r, removed)
        return total

    def _solve(
        self, matrix: Dict[int, Set[int]], partial: List[int], budget: SearchBudget
    ) -> Iterator[List[int]]:
        budget.tick()
        if not matrix:
            yield list(partial)
            return
        column = self._branch_column(matrix)
        for r in sorted(matrix[column]):
            removed = self._select(matrix, r)
            partial.append(r)
            yield from self._solve(matrix, partial, budget)
            partial.pop()
            self._deselect(matrix, r, removed)

    def root_branches(self) -> List[int]:
        """Rows of the first branching column; their subtrees partition the search."""
        matrix = self._matrix()
        if not matrix:
            return []
        return sorted(matrix[self._branch_column(matrix)])

    def count_branch(self, root_row: Optional[int], limits: Optional[Limits] = None) -> CoverCount:
        budget = SearchBudget(limits)
        matrix = self._matrix()
        if root_row is None:
            return CoverCount(self._count(matrix, budget), budget.nodes)
        self._select(matrix, root_row)
        return CoverCount(self._count(matrix, budget), budget.nodes)

    def count(self, limits: Optional[Limits] = None, jobs: int = 1) -> CoverCount:
        if not self._columns:
            return CoverCount(1, 1)
        budget = SearchBudget(limits)
        budget.charge(1)
        branches = self.root_branches()
        partial_counts = split_and_merge(
            [(self, root) for root in branches], _count_branch, budget, _branch_nodes, jobs
        )
        total = sum(part.value for part in partial_counts)
        logger.debug("Exact cover: %d solutions in %d nodes", total, budget.nodes)
        return CoverCount(total, budget.nodes)

    def solutions(self, limits: Optional[Limits] = None) -> Iterator[List[int]]:
        """Solutions as sorted lists of row indices, in deterministic order."""
        budget = SearchBudget(limits)
        for solution in self._solve(self._matrix(), [], budget):
            yield sorted(solution)


def _count_branch(task: Tuple[ExactCover, int], limits: Limits) -> CoverCount:
    cover, root = task
    return cover.count_branch(root, limits)


def _branch_nodes(part: CoverCount) -> int:
    return part.nodes


def count_exact_covers(
    columns: Iterable[int],
    rows: Sequence[FrozenSet[int]],
    limits: Optional[Limits] = None,
    jobs: int = 1,
) -> CoverCount:
    return ExactCover(columns, rows).count(limits, jobs)
