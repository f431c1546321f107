"""Exact linear algebra over the rationals.

Rows are sparse dicts ``{column: Fraction}``.  Elimination keeps a reduced
echelon basis, pivots on the smallest column index, and never reorders input,
so results are deterministic for a fixed column order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Row = dict  # column -> Fraction


class LinearAlgebraError(ArithmeticError):
    pass


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a row space.

    ``order`` maps column keys to sortable positions; the pivot of a row is its
    minimal column under that order.
    """

    def __init__(self, order: Mapping[Hashable, int] | None = None):
        self._order = dict(order) if order is not None else None
        self.pivots: dict[Hashable, Row] = {}

    def _key(self, col):
        return self._order[col] if self._order is not None else col

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[Hashable, Fraction]) -> Row:
        """Remainder of ``row`` modulo the span."""
        work = {c: Fraction(v) for c, v in row.items() if v}
        # pivot rows are fully reduced, so one pass over pivots in use suffices
        for col in [c for c in work if c in self.pivots]:
            coeff = work.get(col)
            if not coeff:
                continue
            for c2, v2 in self.pivots[col].items():
                nv = work.get(c2, 0) - coeff * v2
                if nv:
                    work[c2] = nv
                else:
                    work.pop(c2, None)
        return work

    def contains(self, row: Mapping[Hashable, Fraction]) -> bool:
        return not self.reduce(row)

    def add(self, row: Mapping[Hashable, Fraction]) -> bool:
        """Insert ``row``; return True when it enlarged the span."""
        rem = self.reduce(row)
        if not rem:
            return False
        pivot = min(rem, key=self._key)
        scale = rem[pivot]
        rem = {c: v / scale for c, v in rem.items()}
        for other in self.pivots.values():
            coeff = other.get(pivot)
            if coeff:
                for c2, v2 in rem.items():
                    nv = other.get(c2, 0) - coeff * v2
                    if nv:
                        other[c2] = nv
                    else:
                        other.pop(c2, None)
        self.pivots[pivot] = rem
        return True


def rank(rows: Iterable[Mapping[Hashable, Fraction]]) -> int:
    basis = EchelonBasis()
    for row in rows:
        basis.add(row)
    return len(basis)


class SolveResult:
    def __init__(self, solution: dict, rank: int, nullity: int, free: list,
                 inconsistent_rows: list[int]):
        self.solution = solution
        self.rank = rank
        self.nullity = nullity
        self.free = free
        self.inconsistent_rows = inconsistent_rows

    @property
    def unique(self) -> bool:
        return self.nullity == 0 and not self.inconsistent_rows


RHS = "__rhs__"


def solve_affine(rows: Sequence[Mapping[Hashable, Fraction]], unknowns: Sequence[Hashable],
                 constants: Sequence[Fraction]) -> SolveResult:
    """Solve ``sum_u row[u]*x_u + const = 0`` for every row.

    Unknown order fixes pivoting.  The result lists the free unknowns (when the
    system is underdetermined, free ones are set to 0 in ``solution``) and the
    indices of rows that cannot be satisfied.
    """
    order = {u: i for i, u in enumerate(unknowns)}
    order[RHS] = len(unknowns)
    basis = EchelonBasis(order)
    inconsistent: list[int] = []
    for idx, (row, const) in enumerate(zip(rows, constants)):
        aug = {u: Fraction(v) for u, v in row.items() if v}
        if const:
            aug[RHS] = Fraction(const)
        for u in aug:
            if u not in order:
                raise LinearAlgebraError(f"row {idx} uses unknown {u!r} outside the declared list")
        if not aug:
            continue
        basis.add(aug)
        if RHS in basis.pivots and not inconsistent:
            inconsistent.append(idx)
    if RHS in basis.pivots:
        return SolveResult({}, len(basis) - 1, 0, [], inconsistent)
    pivots = set(basis.pivots)
    free = [u for u in unknowns if u not in pivots]
    solution = {}
    for u in unknowns:
        if u in basis.pivots:
            solution[u] = -basis.pivots[u].get(RHS, Fraction(0))
        else:
            solution[u] = Fraction(0)
    return SolveResult(solution, len(basis), len(free), free, [])
