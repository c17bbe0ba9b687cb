"""
Cell enumeration and chain complexes of Sullivan diagrams.

Provides:
- ``enumerate_cells``: all canonical cells of a component in one degree, built
  by coface closure; ``enumerate_direct`` generates them from scratch as a check.
- ``SparseMatrix`` and ``ChainComplex``: per-degree bases and column-sparse
  integer boundary matrices, with the d∘d = 0 and face-closure checks.
- ``build_complex``: the full complex of a component.
- ``SubQuotient`` / ``subquotient``: sub-complexes selected by a face-closed
  predicate and the corresponding quotients, with the predicates ``in_B`` and
  ``in_stabilization_image``.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .chain import Chain
from .diagram import (
    Diagram,
    GhostSurface,
    boundary,
    canonicalize,
    cofaces,
    degenerate_count,
    face,
    is_suspended,
    suspend,
    top_degree,
    validate,
)
from .exceptions import BudgetExceededError, ChainComplexError, DiagramValidationError, UnsupportedDiagramError
from .models import Flavor
from .permutation import Permutation

logger = logging.getLogger(__name__)

Component = Tuple[Flavor, int, int]


class SparseMatrix:
    """Column-sparse integer matrix; column j is a dict row -> coefficient."""

    __slots__ = ("n_rows", "columns")

    def __init__(self, n_rows: int, columns: Sequence[Dict[int, int]]):
        self.n_rows = n_rows
        self.columns: List[Dict[int, int]] = [{r: int(v) for r, v in col.items() if v} for col in columns]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        return cls(n_rows, [{r: rows[r][c] for r in range(n_rows) if rows[r][c]} for c in range(n_cols)])

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def nnz(self) -> int:
        return sum(len(col) for col in self.columns)

    def entries(self) -> List[Tuple[int, int, int]]:
        """Triplets (row, col, value) sorted by column then row."""
        return [(r, c, v) for c, col in enumerate(self.columns) for r, v in sorted(col.items())]

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=object)
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                dense[r, c] = v
        return dense

    def apply(self, vector: Dict[int, int]) -> Dict[int, int]:
        """Matrix times a sparse column vector."""
        out: Dict[int, int] = {}
        for c, v in vector.items():
            for r, a in self.columns[c].items():
                out[r] = out.get(r, 0) + a * v
        return {r: v for r, v in out.items() if v}

    def compose(self, right: "SparseMatrix") -> "SparseMatrix":
        """``self @ right``."""
        if self.n_cols != right.n_rows:
            raise ChainComplexError(f"cannot multiply {self.shape} by {right.shape}")
        return SparseMatrix(self.n_rows, [self.apply(col) for col in right.columns])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        position = {r: k for k, r in enumerate(rows)}
        return SparseMatrix(
            len(rows),
            [{position[r]: v for r, v in self.columns[c].items() if r in position} for c in cols],
        )

    def is_zero(self) -> bool:
        return all(not col for col in self.columns)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.n_rows == other.n_rows and self.columns == other.columns

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz()})"


class ChainComplex:
    """Finite free chain complex with an ordered basis in every degree.

    ``boundaries[k]`` is the matrix of ∂_k: C_k -> C_{k-1} for k >= 1, rows
    indexed by ``bases[k-1]`` and columns by ``bases[k]``.
    """

    def __init__(
        self,
        bases: Sequence[Sequence[Hashable]],
        boundaries: Dict[int, SparseMatrix],
        component: Optional[Component] = None,
    ):
        self.bases: List[List[Hashable]] = [list(b) for b in bases]
        self.component = component
        self.boundaries: Dict[int, SparseMatrix] = {}
        for k in range(1, len(self.bases)):
            matrix = boundaries.get(k)
            if matrix is None:
                matrix = SparseMatrix(len(self.bases[k - 1]), [{} for _ in self.bases[k]])
            if matrix.shape != (len(self.bases[k - 1]), len(self.bases[k])):
                raise ChainComplexError(
                    f"∂_{k} has shape {matrix.shape}, expected {(len(self.bases[k - 1]), len(self.bases[k]))}"
                )
            self.boundaries[k] = matrix
        self._index: List[Dict[Hashable, int]] = [{cell: i for i, cell in enumerate(b)} for b in self.bases]

    @property
    def top_degree(self) -> int:
        return len(self.bases) - 1

    def rank(self, k: int) -> int:
        if 0 <= k < len(self.bases):
            return len(self.bases[k])
        return 0

    def counts(self) -> List[int]:
        return [len(b) for b in self.bases]

    def cells(self, k: int) -> List[Hashable]:
        return self.bases[k] if 0 <= k < len(self.bases) else []

    def index_of(self, cell: Hashable, k: Optional[int] = None) -> int:
        k = cell.degree if k is None else k
        try:
            return self._index[k][cell]
        except (IndexError, KeyError):
            raise ChainComplexError(f"cell {cell} is not in the degree-{k} basis", witness=cell) from None

    def contains(self, cell: Hashable, k: Optional[int] = None) -> bool:
        k = cell.degree if k is None else k
        return 0 <= k < len(self._index) and cell in self._index[k]

    def boundary_matrix(self, k: int) -> SparseMatrix:
        if k in self.boundaries:
            return self.boundaries[k]
        return SparseMatrix(self.rank(k - 1), [{} for _ in range(self.rank(k))])

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def chain_to_vector(self, chain: Chain) -> Dict[int, int]:
        if chain.is_zero():
            return {}
        return {self.index_of(cell, chain.degree): c for cell, c in chain.items()}

    def vector_to_chain(self, vector: Dict[int, int], k: int) -> Chain:
        return Chain({self.bases[k][i]: v for i, v in vector.items() if v}, degree=k)

    def check_d_squared(self) -> None:
        """Raise ``ChainComplexError`` with a witness column if ∂∘∂ ≠ 0."""
        for k in range(2, len(self.bases)):
            product = self.boundaries[k - 1].compose(self.boundaries[k])
            for col, column in enumerate(product.columns):
                if column:
                    witness = self.bases[k][col]
                    logger.error(f"∂∘∂ ≠ 0 at degree {k} on {witness}")
                    raise ChainComplexError(f"∂_{k - 1}∘∂_{k} ≠ 0 on cell {witness}", witness=witness)

    def __repr__(self) -> str:
        return f"ChainComplex(component={self.component}, counts={self.counts()})"


# -- enumeration ------------------------------------------------------------------


def degree_zero_cells(flavor: Flavor, g: int, m: int) -> List[Diagram]:
    """The cells of degree 0: a single ground point with everything attached to it."""
    flavor = Flavor(flavor)
    if flavor.parametrized:
        leaves = [-(j + 1) for j in range(m)]
        found = {}
        for a in leaves:
            cycles = [(0, a)] + [(l,) for l in leaves if l != a]
            lam = Permutation.from_cycles(cycles)
            cell = canonicalize(Diagram(flavor, 0, lam, [GhostSurface.make(g, 0, cycles)]))
            found[cell.key()] = cell
            if flavor is Flavor.PAR_UNEN:
                break
        return list(found.values())
    lam = Permutation({0: 0})
    if flavor is Flavor.UNPAR_UNEN:
        return [Diagram(flavor, 0, lam, [GhostSurface.make(g, m - 1, [(0,)])])]
    cells = []
    for label in range(1, m + 1):
        rest = [x for x in range(1, m + 1) if x != label]
        cells.append(Diagram(flavor, 0, lam, [GhostSurface.make(g, m - 1, [(0,)], rest)], (label,)))
    return cells


def _coface_layer(cells: Sequence[Diagram], threads: int = 1) -> List[Diagram]:
    def work(cell: Diagram) -> List[Diagram]:
        return [canonicalize(c) for c in cofaces(cell, 0)]

    found: Dict[str, Diagram] = {}
    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            layers = list(pool.map(work, cells))
    else:
        layers = [work(cell) for cell in cells]
    for layer in layers:
        for cell in layer:
            found.setdefault(cell.to_text(), cell)
    return [found[k] for k in sorted(found)]


def enumerate_all(
    flavor: Flavor,
    g: int,
    m: int,
    max_degree: Optional[int] = None,
    budget_cells: Optional[int] = None,
    threads: int = 1,
    progress: bool = False,
) -> List[List[Diagram]]:
    """Bases of every degree 0..max_degree (default: the top degree).

    Every cell of degree n+1 is a coface at index 0 of a cell of degree n, so
    the bases are generated degree by degree.

    Raises:
        BudgetExceededError: If the total cell count exceeds ``budget_cells``.
    """
    flavor = Flavor(flavor)
    if g < 0 or m < 1:
        raise ValueError(f"component needs g >= 0 and m >= 1, got g={g}, m={m}")
    top = top_degree(flavor, g, m)
    last = top if max_degree is None else min(max_degree, top)
    bases = [sorted(degree_zero_cells(flavor, g, m), key=lambda d: d.to_text())]
    total = len(bases[0])
    degrees = range(1, last + 1)
    if progress:
        degrees = tqdm(degrees, desc=f"{flavor.value} g={g} m={m}", unit="degree")
    for k in degrees:
        layer = _coface_layer(bases[-1], threads)
        total += len(layer)
        if budget_cells is not None and total > budget_cells:
            logger.error(f"Cell budget {budget_cells} exceeded at degree {k} of ({flavor.value}, {g}, {m})")
            raise BudgetExceededError(f"more than {budget_cells} cells in ({flavor.value}, g={g}, m={m})")
        logger.debug(f"Degree {k}: {len(layer)} cells")
        if not layer:
            break
        bases.append(layer)
    return bases


def enumerate_cells(flavor: Flavor, g: int, m: int, k: int, budget_cells: Optional[int] = None) -> List[Diagram]:
    """All canonical cells of component (flavor, g, m) in degree k, sorted by text form."""
    if k < 0 or k > top_degree(flavor, g, m):
        return []
    bases = enumerate_all(flavor, g, m, max_degree=k, budget_cells=budget_cells)
    return bases[k] if k < len(bases) else []


def _set_partitions(items: Sequence[Hashable]) -> Iterator[List[List[Hashable]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for k in range(len(partition)):
            yield partition[:k] + [[first] + partition[k]] + partition[k + 1 :]
        yield [[first]] + partition


def enumerate_direct(flavor: Flavor, g: int, m: int, k: int) -> List[Diagram]:
    """Cells of degree k generated straight from the combinatorial data.

    Runs over every λ on the symbols of degree k, every partition of its cycles
    into ghost surfaces and every distribution of genus (and punctures) among
    them, keeping what validates in the component. The search is factorial in k,
    so it only serves as a cross-check of ``enumerate_all`` on tiny components.

    Raises:
        UnsupportedDiagramError: For the unparametrized enumerated flavor.
    """
    flavor = Flavor(flavor)
    if flavor is Flavor.UNPAR_ENUM:
        raise UnsupportedDiagramError("direct generation does not label ρ-cycles")
    symbols = list(range(k + 1))
    if flavor.parametrized:
        symbols += [-(j + 1) for j in range(m)]
    max_punctures = 0 if flavor.parametrized else m - 1
    found: Dict[str, Diagram] = {}
    for image in itertools.permutations(symbols):
        lam = Permutation(dict(zip(symbols, image)))
        for blocks in _set_partitions(list(lam.cycles())):
            for genera in itertools.product(range(g + 1), repeat=len(blocks)):
                if sum(genera) > g:
                    continue
                for punctures in itertools.product(range(max_punctures + 1), repeat=len(blocks)):
                    if sum(punctures) > max_punctures:
                        continue
                    surfaces = [GhostSurface.make(gi, mi, block) for gi, mi, block in zip(genera, punctures, blocks)]
                    d = Diagram(flavor, k, lam, surfaces, check=False)
                    try:
                        validate(d, g, m)
                    except DiagramValidationError:
                        continue
                    cell = canonicalize(d)
                    found.setdefault(cell.to_text(), cell)
    logger.debug(f"Direct generation: {len(found)} cells of degree {k} in ({flavor.value}, {g}, {m})")
    return [found[key] for key in sorted(found)]


def _boundary_columns(
    cells: Sequence[Diagram], index: Dict[Diagram, int], degree: int
) -> List[Dict[int, int]]:
    columns = []
    for cell in cells:
        column: Dict[int, int] = {}
        for face_cell, c in boundary(cell).items():
            row = index.get(face_cell)
            if row is None:
                logger.error(f"Face {face_cell} of {cell} missing from degree {degree - 1}")
                raise ChainComplexError(f"face of {cell} is not a basis cell", witness=face_cell)
            column[row] = c
        columns.append(column)
    return columns


def build_complex(
    flavor: Flavor,
    g: int,
    m: int,
    budget_cells: Optional[int] = None,
    threads: int = 1,
    progress: bool = False,
) -> ChainComplex:
    """Enumerate the component and assemble its boundary matrices.

    Raises:
        BudgetExceededError: On exceeding the cell budget.
        ChainComplexError: If a face leaves the basis or ∂∘∂ ≠ 0.
    """
    flavor = Flavor(flavor)
    bases = enumerate_all(flavor, g, m, budget_cells=budget_cells, threads=threads, progress=progress)
    indices = [{cell: i for i, cell in enumerate(b)} for b in bases]

    def assemble(k: int) -> SparseMatrix:
        return SparseMatrix(len(bases[k - 1]), _boundary_columns(bases[k], indices[k - 1], k))

    degrees = list(range(1, len(bases)))
    if threads > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            matrices = dict(zip(degrees, pool.map(assemble, degrees)))
    else:
        matrices = {k: assemble(k) for k in degrees}
    complex_ = ChainComplex(bases, matrices, component=(flavor, g, m))
    complex_.check_d_squared()
    logger.info(f"Built {flavor.symbol} g={g} m={m}: counts {complex_.counts()}")
    return complex_


# -- sub-complexes and quotients -----------------------------------------------------


def in_B(k: int) -> Callable[[Diagram], bool]:
    """Predicate of the sub-complex B_k: at least k degenerate boundary cycles."""

    def predicate(d: Diagram) -> bool:
        return degenerate_count(d) >= k

    predicate.__name__ = f"in_B{k}"
    return predicate


def in_stabilization_image(d: Diagram) -> bool:
    """A cell lies in the image of stabilization iff its ghost at position 0 has positive genus."""
    return d.surfaces[d.ghost_of[0]].genus > 0


class SubQuotient:
    """A face-closed selection of cells and the complex it determines.

    In mode ``"sub"`` the complex is spanned by the selected cells, in mode
    ``"quotient"`` by the remaining ones with the selected cells set to zero.
    """

    def __init__(self, parent: ChainComplex, selected: Sequence[Sequence[int]], mode: str = "sub"):
        if mode not in ("sub", "quotient"):
            raise ValueError(f"mode must be 'sub' or 'quotient', got {mode!r}")
        self.parent = parent
        self.mode = mode
        self.selected: List[List[int]] = [sorted(s) for s in selected]
        self._check_closed()
        self.kept: List[List[int]] = []
        for k in range(len(parent.bases)):
            chosen = set(self.selected[k])
            if mode == "sub":
                self.kept.append(sorted(chosen))
            else:
                self.kept.append([i for i in range(parent.rank(k)) if i not in chosen])
        bases = [[parent.bases[k][i] for i in rows] for k, rows in enumerate(self.kept)]
        matrices = {
            k: parent.boundary_matrix(k).submatrix(self.kept[k - 1], self.kept[k])
            for k in range(1, len(bases))
        }
        self.complex = ChainComplex(bases, matrices, component=parent.component)

    def _check_closed(self) -> None:
        for k in range(1, len(self.parent.bases)):
            allowed = {self.parent.bases[k - 1][i] for i in self.selected[k - 1]}
            for col in self.selected[k]:
                cell = self.parent.bases[k][col]
                for f in _face_cells(self.parent, k, col):
                    if f not in allowed:
                        logger.error(f"Selection not closed under faces at {cell}: {f} is missing")
                        raise ChainComplexError(
                            f"selected cell {cell} has the face {f} outside the selection",
                            witness=f,
                        )

    def project(self, chain: Chain) -> Chain:
        """Image of a parent chain in the sub-quotient (drops unselected / selected cells)."""
        if chain.is_zero():
            return chain
        k = chain.degree
        keep = {self.parent.bases[k][i] for i in self.kept[k]}
        return Chain({cell: c for cell, c in chain.items() if cell in keep}, degree=k)

    def __repr__(self) -> str:
        return f"SubQuotient(mode={self.mode}, counts={self.complex.counts()})"


def _face_cells(c: ChainComplex, k: int, col: int) -> List[Hashable]:
    """Every face of basis cell ``col`` in degree k, including faces that cancel in the boundary."""
    cell = c.bases[k][col]
    if isinstance(cell, Diagram):
        return [canonicalize(face(i, cell)) for i in range(cell.n + 1)]
    return [c.bases[k - 1][row] for row in c.boundary_matrix(k).columns[col]]


def subquotient(c: ChainComplex, predicate: Callable[[Hashable], bool], mode: str = "sub") -> SubQuotient:
    """Select the cells satisfying ``predicate`` and build the sub- or quotient complex.

    Raises:
        ChainComplexError: If the selection is not closed under faces.
    """
    selected = [[i for i, cell in enumerate(basis) if predicate(cell)] for basis in c.bases]
    result = SubQuotient(c, selected, mode)
    logger.debug(f"Sub-quotient ({mode}) by {getattr(predicate, '__name__', 'predicate')}: {result.complex.counts()}")
    return result


def suspension_pairing(c: ChainComplex) -> Dict[int, Tuple[int, int]]:
    """Check that suspension is a degreewise bijection unsuspended(k) -> suspended(k+1).

    Returns:
        Per degree k, the pair (#unsuspended in degree k, #suspended in degree k+1).

    Raises:
        ChainComplexError: If a suspension leaves the basis or is not a bijection.
    """
    report = {}
    for k in range(len(c.bases)):
        unsuspended = [d for d in c.cells(k) if not is_suspended(d)]
        suspended = {d for d in c.cells(k + 1) if is_suspended(d)}
        images = set()
        for d in unsuspended:
            image = canonicalize(suspend(d))
            if image not in suspended:
                raise ChainComplexError(f"suspension of {d} is not a suspended basis cell", witness=d)
            if canonicalize(face(0, image)) != d:
                raise ChainComplexError(f"d_0 does not invert suspension on {d}", witness=d)
            images.add(image)
        if images != suspended:
            witness = next(iter(suspended - images))
            raise ChainComplexError(f"suspended cell {witness} has no unsuspended preimage", witness=witness)
        report[k] = (len(unsuspended), len(suspended))
    return report
