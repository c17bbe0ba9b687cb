"""
Exact integral homology.

Boundary matrices are first reduced by sparse elimination on unit pivots
(Markowitz choice: smallest fill-in first), the remaining block goes through a
dense Smith normal form on numpy object arrays, so coefficients never
overflow.
"""

import heapq
import logging
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Tuple

import numpy as np

from .chain import Chain
from .complex import ChainComplex, SparseMatrix
from .exceptions import ChainComplexError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SNFResult:
    """Invariant factors d_1 | d_2 | ... | d_r of a matrix.

    ``transforms`` is ``(U, V)`` with U·A·V diagonal when requested.
    """

    factors: Tuple[int, ...]
    rank: int
    transforms: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, compare=False)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(f for f in self.factors if f > 1)


@dataclass(frozen=True)
class HomologyGroup:
    """Z^betti ⊕ C_t1 ⊕ C_t2 ⊕ ... with invariant factors t1 | t2 | ..."""

    betti: int = 0
    torsion: Tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_text(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"C{t}" for t in self.torsion]
        return "+".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.to_text()


# -- dense Smith normal form ------------------------------------------------------


def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].

    If a divides b, M[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign
    M = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]
    g = M[0, 0]
    M = M[:, 1:] * np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def _inverse_2x2(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


def diagonalize(A: np.ndarray, transforms: bool = False):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Args:
        A: Integer matrix (any dtype; copied to object dtype).
        transforms: Also return U and V with U @ A @ V == D.

    Returns:
        D, or (D, U, V) when ``transforms`` is set.
    """
    D = np.array(A, dtype=object).copy()
    rows, cols = D.shape
    U = np.eye(rows, dtype=object) if transforms else None
    V = np.eye(cols, dtype=object) if transforms else None

    def clear_col(i: int) -> bool:
        if all(D[j, i] == 0 for j in range(i + 1, rows)):
            return False
        for j in range(i + 1, rows):
            if D[j, i] == 0:
                continue
            M = exgcd(D[i, i], D[j, i])
            D[[i, j]] = M @ D[[i, j]]
            if transforms:
                U[[i, j]] = M @ U[[i, j]]
        return True

    def clear_row(i: int) -> bool:
        if all(D[i, j] == 0 for j in range(i + 1, cols)):
            return False
        for j in range(i + 1, cols):
            if D[i, j] == 0:
                continue
            M = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]] @ M
            if transforms:
                V[:, [i, j]] = V[:, [i, j]] @ M
        return True

    for i in range(min(rows, cols)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass
    if transforms:
        return D, U, V
    return D


def invariant_factors(diagonal: List[int]) -> Tuple[int, ...]:
    """Normalize diagonal entries to a divisibility chain (zeros dropped)."""
    values = [abs(v) for v in diagonal if v]
    changed = True
    while changed:
        changed = False
        values.sort()
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                a, b = values[i], values[j]
                if b % a:
                    g = gcd(a, b)
                    values[i], values[j] = g, a * b // g
                    changed = True
    return tuple(sorted(values))


# -- sparse elimination ---------------------------------------------------------------


def _eliminate_unit_pivots(matrix: SparseMatrix, strategy: str = "markowitz") -> Tuple[int, Dict[int, Dict[int, int]]]:
    """Eliminate ±1 pivots; return (#pivots, remaining columns)."""
    columns: Dict[int, Dict[int, int]] = {c: dict(col) for c, col in enumerate(matrix.columns) if col}
    rows: Dict[int, set] = {}
    for c, col in columns.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    pivots = 0
    # lazy heap: stale entries are skipped, modified columns are pushed again
    heap = [(len(col), c) for c, col in columns.items()]
    heapq.heapify(heap)

    def pick() -> Optional[Tuple[int, int]]:
        if strategy == "first":
            for c in sorted(columns):
                for r in sorted(columns[c]):
                    if abs(columns[c][r]) == 1:
                        return r, c
            return None
        while heap:
            length, c = heapq.heappop(heap)
            col = columns.get(c)
            if col is None or len(col) != length:
                continue
            units = [r for r, v in col.items() if abs(v) == 1]
            if units:
                return min(units, key=lambda r: (len(rows[r]), r)), c
        return None

    while True:
        choice = pick()
        if choice is None:
            break
        r, c = choice
        pivot_col = columns.pop(c)
        u = pivot_col[r]
        for other in list(rows[r]):
            if other == c:
                continue
            col = columns[other]
            factor = col[r] * u  # u = ±1, so col[r]/u == col[r]*u
            for rr, v in pivot_col.items():
                value = col.get(rr, 0) - factor * v
                if value:
                    if rr not in col:
                        rows[rr].add(other)
                    col[rr] = value
                elif rr in col:
                    del col[rr]
                    rows[rr].discard(other)
            if not col:
                del columns[other]
            else:
                heapq.heappush(heap, (len(col), other))
        for rr in pivot_col:
            rows[rr].discard(c)
        for other in rows.pop(r):
            if other in columns:
                columns[other].pop(r, None)
                if not columns[other]:
                    del columns[other]
        pivots += 1
    return pivots, columns


def snf(A: SparseMatrix, transforms: bool = False, strategy: str = "markowitz") -> SNFResult:
    """Invariant factors of an integer matrix.

    Args:
        A: The matrix.
        transforms: Return unimodular U, V with U·A·V diagonal (dense path only).
        strategy: Unit-pivot order, ``"markowitz"`` or ``"first"``.
    """
    if transforms:
        D, U, V = diagonalize(A.to_dense(), transforms=True)
        diagonal = [D[i, i] for i in range(min(D.shape))]
        factors = invariant_factors(diagonal)
        return SNFResult(factors, len(factors), (U, V))
    pivots, rest = _eliminate_unit_pivots(A, strategy)
    factors: Tuple[int, ...] = ()
    if rest:
        row_ids = sorted({r for col in rest.values() for r in col})
        position = {r: k for k, r in enumerate(row_ids)}
        dense = np.zeros((len(row_ids), len(rest)), dtype=object)
        for k, c in enumerate(sorted(rest)):
            for r, v in rest[c].items():
                dense[position[r], k] = v
        D = diagonalize(dense)
        factors = invariant_factors([D[i, i] for i in range(min(D.shape))])
    factors = (1,) * pivots + factors
    return SNFResult(invariant_factors(list(factors)), len(factors))


def homology(c: ChainComplex, threads: int = 1, strategy: str = "markowitz") -> Dict[int, HomologyGroup]:
    """H_k = ker ∂_k / im ∂_{k+1} for every degree of the complex.

    Raises:
        ChainComplexError: If ∂∘∂ ≠ 0.
    """
    c.check_d_squared()
    degrees = list(range(1, c.top_degree + 1))

    def reduce(k: int) -> SNFResult:
        return snf(c.boundary_matrix(k), strategy=strategy)

    if threads > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(zip(degrees, pool.map(reduce, degrees)))
    else:
        results = {k: reduce(k) for k in degrees}
    groups = {}
    for k in range(c.top_degree + 1):
        incoming = results.get(k)
        outgoing = results.get(k + 1)
        rank_k = incoming.rank if incoming else 0
        rank_up = outgoing.rank if outgoing else 0
        torsion = outgoing.torsion if outgoing else ()
        groups[k] = HomologyGroup(c.rank(k) - rank_k - rank_up, torsion)
    logger.debug(f"Homology of {c.component}: {[g.to_text() for g in groups.values()]}")
    return groups


def homology_row(groups: Dict[int, HomologyGroup]) -> List[str]:
    """Table row of a homology computation, trailing zeros removed."""
    row = [groups[k].to_text() for k in sorted(groups)]
    while len(row) > 1 and row[-1] == "0":
        row.pop()
    return row


class IntegerSolver:
    """Solves A z = b over Z for many right-hand sides, diagonalizing A once."""

    def __init__(self, A: np.ndarray):
        self.shape = A.shape
        rows, cols = A.shape
        if rows and cols:
            self.D, self.U, self.V = diagonalize(A, transforms=True)
        else:
            self.D = self.U = self.V = None

    def solve(self, b: List[int]) -> Optional[np.ndarray]:
        """An integer solution z, or None if there is none."""
        rows, cols = self.shape
        if self.D is None:
            return None if any(b) else np.zeros(cols, dtype=object)
        rhs = self.U @ np.array(b, dtype=object)
        z = np.zeros(cols, dtype=object)
        for i in range(rows):
            d = self.D[i, i] if i < min(rows, cols) else 0
            if d == 0:
                if rhs[i] != 0:
                    return None
                continue
            if rhs[i] % d:
                return None
            z[i] = rhs[i] // d
        return self.V @ z


# diagonalized ∂_{k+1} per complex, shared by repeated boundary decisions
_solvers: "weakref.WeakKeyDictionary[ChainComplex, Dict[int, IntegerSolver]]" = weakref.WeakKeyDictionary()


def boundary_solver(c: ChainComplex, k: int) -> IntegerSolver:
    """The solver for ∂_k of c, built on first use and kept while c is alive."""
    per_degree = _solvers.setdefault(c, {})
    solver = per_degree.get(k)
    if solver is None:
        logger.debug(f"Diagonalizing ∂_{k} of {c.component}")
        solver = IntegerSolver(c.boundary_matrix(k).to_dense())
        per_degree[k] = solver
    return solver


def solve_integer(A: np.ndarray, b: List[int]) -> Optional[np.ndarray]:
    """An integer solution z of A z = b, or None if there is none."""
    return IntegerSolver(A).solve(b)


def kernel_basis(A: np.ndarray) -> List[np.ndarray]:
    """A Z-basis of the kernel of A, as integer column vectors."""
    rows, cols = A.shape
    if cols == 0:
        return []
    if rows == 0:
        return [np.eye(cols, dtype=object)[:, j] for j in range(cols)]
    D, _, V = diagonalize(A, transforms=True)
    return [V[:, j] for j in range(cols) if j >= rows or D[j, j] == 0]


def is_boundary(x: Chain, c: ChainComplex) -> Tuple[bool, Optional[Chain]]:
    """Decide whether the cycle x bounds, solving ∂y = x over Z.

    Returns:
        (True, y) with ∂y = x, or (False, None).

    Raises:
        ChainComplexError: If x is not a cycle or not supported on basis cells.
    """
    if x.is_zero():
        return True, Chain.zero(None if x.degree is None else x.degree + 1)
    k = x.degree
    b = c.chain_to_vector(x)
    if k >= 1 and c.boundary_matrix(k).apply(b):
        raise ChainComplexError("chain is not a cycle", witness=x)
    if k + 1 > c.top_degree:
        return False, None
    A = c.boundary_matrix(k + 1)
    y = boundary_solver(c, k + 1).solve([b.get(i, 0) for i in range(A.n_rows)])
    if y is None:
        return False, None
    witness = c.vector_to_chain({j: int(y[j]) for j in range(A.n_cols) if y[j]}, k + 1)
    return True, witness
