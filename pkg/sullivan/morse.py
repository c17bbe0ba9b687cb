"""
Discrete Morse theory on built chain complexes.

``build_matching`` classifies every cell with the flows of ``flows.py`` and pairs
each collapsible cell with its redundant face. The matching is checked for
disjointness, unit coefficients and acyclicity; ``morse_complex`` then reduces
the complex to its essential cells.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .chain import Chain
from .complex import ChainComplex, SparseMatrix
from .diagram import canonicalize, face
from .exceptions import MatchingError
from .flows import Classification, classify, degeneracy
from .models import CellStatus

logger = logging.getLogger(__name__)

Vertex = Tuple[int, int]


class CellularGraph:
    """Cells (degree, index) of a complex with an edge to every face of non-zero incidence."""

    def __init__(self, complex_: ChainComplex):
        self.complex = complex_

    def vertices(self) -> Iterator[Vertex]:
        for k in range(len(self.complex.bases)):
            for i in range(self.complex.rank(k)):
                yield (k, i)

    def edges(self, k: int) -> Iterator[Tuple[int, int, int]]:
        """(cell in degree k, face in degree k-1, coefficient)."""
        if k < 1 or k > self.complex.top_degree:
            return
        for i, column in enumerate(self.complex.boundary_matrix(k).columns):
            for j, value in sorted(column.items()):
                yield i, j, value

    def coefficient(self, k: int, i: int, j: int) -> int:
        return self.complex.boundary_matrix(k).columns[i].get(j, 0)

    def cell(self, vertex: Vertex) -> Hashable:
        k, i = vertex
        return self.complex.bases[k][i]


@dataclass
class Matching:
    """An acyclic matching: collapsible cells paired with redundant faces.

    Attributes:
        complex: The matched complex.
        status: Per degree, the status of every cell.
        up: Redundant (k, j) -> index of its collapsible partner in degree k+1.
        down: Collapsible (k, i) -> index of its redundant partner in degree k-1.
        face_index: Collapsible (k, i) -> face index used for the pairing, if known.
    """

    complex: ChainComplex
    status: List[List[CellStatus]]
    up: Dict[Vertex, int] = field(default_factory=dict)
    down: Dict[Vertex, int] = field(default_factory=dict)
    face_index: Dict[Vertex, Optional[int]] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, complex_: ChainComplex, pairs: Dict[int, Sequence[Tuple[int, int]]]) -> "Matching":
        """Build a matching from explicit (collapsible, redundant) index pairs per degree.

        Raises:
            MatchingError: If a cell occurs in two pairs.
        """
        status = [[CellStatus.ESSENTIAL] * complex_.rank(k) for k in range(len(complex_.bases))]
        matching = cls(complex_, status)
        for k, items in pairs.items():
            for i, j in items:
                matching._pair(k, i, j, None)
        return matching

    def _pair(self, k: int, i: int, j: int, index: Optional[int]) -> None:
        if self.status[k][i] is not CellStatus.ESSENTIAL or self.status[k - 1][j] is not CellStatus.ESSENTIAL:
            raise MatchingError(
                f"cell pairing ({k},{i}) -> ({k - 1},{j}) reuses a matched cell",
                witness=[self.complex.bases[k][i], self.complex.bases[k - 1][j]],
            )
        self.status[k][i] = CellStatus.COLLAPSIBLE
        self.status[k - 1][j] = CellStatus.REDUNDANT
        self.down[(k, i)] = j
        self.up[(k - 1, j)] = i
        self.face_index[(k, i)] = index

    def essentials(self, k: int) -> List[int]:
        if k >= len(self.status):
            return []
        return [i for i, s in enumerate(self.status[k]) if s is CellStatus.ESSENTIAL]

    def pairs(self, k: int) -> List[Tuple[int, int]]:
        """(collapsible in degree k, redundant in degree k-1), sorted."""
        return sorted((i, j) for (d, i), j in self.down.items() if d == k)

    def counts(self) -> Dict[str, List[int]]:
        return {
            status.value: [sum(1 for s in row if s is status) for row in self.status]
            for status in CellStatus
        }

    def export(self) -> str:
        """Audit format: one line ``degree<TAB>collapsible<TAB>redundant<TAB>face`` per pair."""
        lines = []
        for k in range(1, len(self.status)):
            for i, j in self.pairs(k):
                index = self.face_index.get((k, i))
                lines.append(
                    "\t".join(
                        [
                            str(k),
                            _text(self.complex.bases[k][i]),
                            _text(self.complex.bases[k - 1][j]),
                            "" if index is None else str(index),
                        ]
                    )
                )
        return "\n".join(lines)


def _text(cell: Hashable) -> str:
    to_text = getattr(cell, "to_text", None)
    return to_text() if callable(to_text) else str(cell)


def _classify_all(cells: Sequence, threads: int) -> List[Classification]:
    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(classify, cells))
    return [classify(cell) for cell in cells]


def build_matching(c: ChainComplex, strict: bool = True, threads: int = 1, check: bool = True) -> Matching:
    """Pair every collapsible cell with its redundant face.

    Args:
        c: A built complex (or a sub-quotient of one).
        strict: Require the flow to close up inside c: every collapsible finds its
            partner, and the cells that pair up are exactly the ones classified
            redundant. Without it, cells whose partner is missing stay essential
            (restriction of the flow to a quotient).
        threads: Worker threads for classification.
        check: Verify acyclicity after assembly.

    Raises:
        MatchingError: With a witness cell, pair or loop on any violation.
    """
    graph = CellularGraph(c)
    status = [[CellStatus.ESSENTIAL] * c.rank(k) for k in range(len(c.bases))]
    matching = Matching(c, status)
    rule: List[List[Classification]] = [_classify_all(c.cells(k), threads) for k in range(len(c.bases))]

    for k in range(1, len(c.bases)):
        for i, cls in enumerate(rule[k]):
            if cls.status is not CellStatus.COLLAPSIBLE:
                continue
            cell = c.bases[k][i]
            partner = canonicalize(face(cls.index, cell))
            if not c.contains(partner, k - 1):
                if strict:
                    logger.error(f"Partner of collapsible {cell} is missing from degree {k - 1}")
                    raise MatchingError(f"redundant partner of {cell} is not a cell of the complex", witness=cell)
                continue
            j = c.index_of(partner, k - 1)
            if rule[k - 1][j].status is not CellStatus.REDUNDANT:
                if strict:
                    logger.error(f"Face {partner} of collapsible {cell} is {rule[k - 1][j].status.value}")
                    raise MatchingError(f"face {partner} of collapsible {cell} is not redundant", witness=cell)
                continue
            if abs(graph.coefficient(k, i, j)) != 1:
                raise MatchingError(
                    f"incidence of {cell} and {partner} is {graph.coefficient(k, i, j)}, not a unit",
                    witness=[cell, partner],
                )
            if (k - 1, j) in matching.up:
                other = c.bases[k][matching.up[(k - 1, j)]]
                raise MatchingError(f"{partner} is the partner of both {other} and {cell}", witness=[other, cell, partner])
            matching._pair(k, i, j, cls.index)

    if strict:
        for k in range(len(c.bases)):
            for j, cls in enumerate(rule[k]):
                if cls.status is CellStatus.REDUNDANT and (k, j) not in matching.up:
                    cell = c.bases[k][j]
                    logger.error(f"Redundant cell {cell} has no collapsible partner")
                    raise MatchingError(f"redundant cell {cell} is unmatched", witness=cell)

    if check:
        acyclic, loop = check_acyclic(graph, matching)
        if not acyclic:
            raise MatchingError("matching has a closed path", witness=loop)
    logger.info(f"Matching on {c.component}: {matching.counts()}")
    return matching


def _inverted_graph(graph: CellularGraph, matching: Matching, k: int) -> nx.DiGraph:
    """Edges between degrees k and k-1 with matched edges reversed."""
    g = nx.DiGraph()
    for i, j, _ in graph.edges(k):
        if matching.down.get((k, i)) == j:
            g.add_edge((k - 1, j), (k, i))
        else:
            g.add_edge((k, i), (k - 1, j))
    return g


def check_acyclic(graph: CellularGraph, matching: Matching) -> Tuple[bool, Optional[List[Hashable]]]:
    """Whether the graph with matched edges reversed has no closed path.

    Closed paths can only run between two adjacent degrees, so each degree pair is
    checked on its own.

    Returns:
        (True, None), or (False, cells along a closed path).
    """
    for k in range(1, graph.complex.top_degree + 1):
        g = _inverted_graph(graph, matching, k)
        try:
            loop = nx.find_cycle(g)
        except nx.NetworkXNoCycle:
            continue
        cells = [graph.cell(u) for u, _ in loop]
        logger.warning(f"Closed path through {len(cells)} cells between degrees {k - 1} and {k}")
        return False, cells
    return True, None


def degeneracy_certificate(matching: Matching) -> Tuple[bool, Optional[Tuple[Hashable, Hashable, Hashable]]]:
    """Check that the degree of degeneracy drops along every step c ↘ r ↗ c'.

    Here c ≠ c' are collapsible, r is a face of c and c' is the partner of r.

    Returns:
        (True, None), or (False, (c, r, c')) for the first violation.
    """
    c = matching.complex
    graph = CellularGraph(c)
    keys: Dict[Vertex, tuple] = {}

    def key(k: int, i: int) -> tuple:
        if (k, i) not in keys:
            keys[(k, i)] = degeneracy(c.bases[k][i]).as_tuple()
        return keys[(k, i)]

    for k in range(1, c.top_degree + 1):
        for i, j, _ in graph.edges(k):
            if matching.status[k][i] is not CellStatus.COLLAPSIBLE or matching.down.get((k, i)) == j:
                continue
            other = matching.up.get((k - 1, j))
            if other is None or other == i:
                continue
            if not key(k, other) < key(k, i):
                witness = (c.bases[k][i], c.bases[k - 1][j], c.bases[k][other])
                logger.warning(f"Degeneracy does not drop along {[_text(x) for x in witness]}")
                return False, witness
    return True, None


# -- Morse complex -----------------------------------------------------------------------


class MorseComplex(ChainComplex):
    """The complex on essential cells with the path-sum differential.

    Attributes:
        parent: The reduced complex.
        matching: The matching used for the reduction.
        essential_index: Per degree, the parent indices of the essential cells.
    """

    def __init__(self, parent: ChainComplex, matching: Matching, threads: int = 1):
        self.parent = parent
        self.matching = matching
        graph = CellularGraph(parent)
        self.essential_index = [matching.essentials(k) for k in range(len(parent.bases))]
        self._orders = {k: self._redundant_order(graph, k) for k in range(len(parent.bases))}
        self._lifts: Dict[Vertex, Dict[int, int]] = {}
        bases = [[parent.bases[k][i] for i in rows] for k, rows in enumerate(self.essential_index)]

        def differential(k: int) -> SparseMatrix:
            position = {i: r for r, i in enumerate(self.essential_index[k - 1])}
            columns = []
            for i in self.essential_index[k]:
                boundary, _ = self._flow(k, {i: 1})
                columns.append({position[j]: v for j, v in boundary.items() if j in position})
            return SparseMatrix(len(self.essential_index[k - 1]), columns)

        degrees = list(range(1, len(bases)))
        if threads > 1 and len(degrees) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                matrices = dict(zip(degrees, pool.map(differential, degrees)))
        else:
            matrices = {k: differential(k) for k in degrees}
        super().__init__(bases, matrices, component=parent.component)

    def _redundant_order(self, graph: CellularGraph, k: int) -> List[int]:
        """Redundant cells of degree k, each before every redundant face of its partner."""
        g = nx.DiGraph()
        redundant = [j for j, s in enumerate(self.matching.status[k]) if s is CellStatus.REDUNDANT] if k < len(self.matching.status) else []
        g.add_nodes_from(redundant)
        for j in redundant:
            partner = self.matching.up[(k, j)]
            for r in self.parent.boundary_matrix(k + 1).columns[partner]:
                if r != j and self.matching.status[k][r] is CellStatus.REDUNDANT:
                    g.add_edge(j, r)
        return list(nx.lexicographical_topological_sort(g))

    def _flow(self, k: int, vector: Dict[int, int]) -> Tuple[Dict[int, int], Dict[int, int]]:
        """Push the boundary of a degree-k vector past every redundant face.

        Returns:
            (reduced boundary in degree k-1, correction in degree k), where the
            correction is the combination of collapsible cells added to the vector.
        """
        if k < 1:
            return {}, {}
        matrix = self.parent.boundary_matrix(k)
        boundary = matrix.apply(vector)
        correction: Dict[int, int] = {}
        for r in self._orders.get(k - 1, []):
            a = boundary.get(r, 0)
            if not a:
                continue
            c = self.matching.up[(k - 1, r)]
            column = matrix.columns[c]
            factor = a * column[r]
            correction[c] = correction.get(c, 0) - factor
            for row, value in column.items():
                updated = boundary.get(row, 0) - factor * value
                if updated:
                    boundary[row] = updated
                else:
                    boundary.pop(row, None)
        return boundary, correction

    def include(self, chain: Chain) -> Chain:
        """The inclusion ι of Morse chains into the parent complex.

        An essential cell e goes to e plus the collapsible cells that cancel the
        redundant part of its boundary.
        """
        if chain.is_zero():
            return chain
        k = chain.degree
        acc: Dict[int, int] = {}
        for cell, coefficient in chain.items():
            i = self.parent.index_of(cell, k)
            if self.matching.status[k][i] is not CellStatus.ESSENTIAL:
                raise MatchingError(f"{cell} is not an essential cell", witness=cell)
            if (k, i) not in self._lifts:
                _, correction = self._flow(k, {i: 1})
                lift = dict(correction)
                lift[i] = lift.get(i, 0) + 1
                self._lifts[(k, i)] = lift
            for j, v in self._lifts[(k, i)].items():
                acc[j] = acc.get(j, 0) + coefficient * v
        return self.parent.vector_to_chain({j: v for j, v in acc.items() if v}, k)

    def project(self, chain: Chain) -> Chain:
        """Essential part of a parent chain."""
        if chain.is_zero():
            return chain
        k = chain.degree
        keep = {self.parent.bases[k][i] for i in self.essential_index[k]}
        return Chain({cell: v for cell, v in chain.items() if cell in keep}, degree=k)


def morse_complex(c: ChainComplex, matching: Optional[Matching] = None, threads: int = 1) -> MorseComplex:
    """Reduce c to the complex on the essential cells of an acyclic matching.

    Raises:
        MatchingError: If the matching is not acyclic.
    """
    if matching is None:
        matching = build_matching(c, threads=threads)
    else:
        acyclic, loop = check_acyclic(CellularGraph(c), matching)
        if not acyclic:
            raise MatchingError("matching has a closed path", witness=loop)
    result = MorseComplex(c, matching, threads=threads)
    result.check_d_squared()
    logger.info(f"Morse complex of {c.component}: counts {result.counts()} (from {c.counts()})")
    return result
