"""
Operations on Sullivan diagrams and their chains.

Provides:
- The named cycle families ζ, η, μ̃, ω̃, γ̃ and the composed classes Ω̃ and Γ̃.
- ``compose``: gluing enumerated parametrized diagrams along incoming boundaries.
- ``stabilize`` and the forgetful maps ``forget_enum`` / ``forget_param``.
- The transfer between enumerated and unenumerated quotients by B_2.
- Boundary witnesses and the homology support and stabilization checks.
"""

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .chain import Chain
from .complex import ChainComplex, SparseMatrix, SubQuotient, build_complex, in_B, in_stabilization_image, subquotient
from .diagram import (
    Diagram,
    GhostSurface,
    boundary,
    canonicalize,
    cofaces,
    degenerate_count,
    top_type,
)
from .exceptions import UnsupportedDiagramError
from .homology import HomologyGroup, boundary_solver, homology, homology_row, is_boundary, kernel_basis, snf, solve_integer
from .models import Flavor
from .morse import build_matching
from .permutation import Permutation, Symbol, rho_from_lambda

logger = logging.getLogger(__name__)

CellOrChain = Union[Diagram, Chain]


def _as_chain(x: CellOrChain) -> Chain:
    return Chain.of(x) if isinstance(x, Diagram) else x


def _require(d: Diagram, flavors: Sequence[Flavor], operation: str) -> None:
    if d.flavor not in flavors:
        allowed = ", ".join(f.value for f in flavors)
        raise UnsupportedDiagramError(f"{operation} needs a diagram of flavor {allowed}, got {d.flavor.value}")


# -- named classes -----------------------------------------------------------------------


def _diagram(flavor: Flavor, lam_text: str, one_ghost: bool = False) -> Diagram:
    """Genus-0 diagram from λ; every cycle bounds its own disk unless ``one_ghost``."""
    flavor = Flavor(flavor)
    lam = Permutation.parse(lam_text)
    n = len(lam.ground) - 1
    cycles = lam.cycles()
    groups = [cycles] if one_ghost else [[c] for c in cycles]
    surfaces = [GhostSurface.make(0, 0, group) for group in groups]
    labels: Tuple[int, ...] = ()
    if flavor is Flavor.UNPAR_ENUM:
        labels = tuple(range(1, len(rho_from_lambda(lam, n).cycles()) + 1))
    return canonicalize(Diagram(flavor, n, lam, surfaces, labels))


def class_zeta(m: int, flavor: Flavor = Flavor.UNPAR_UNEN) -> Diagram:
    """ζ^m with λ = (0 1 … m−1); parametrized: (0 l1 1 l2 … m−1 lm).

    A cycle exactly when m is even (unparametrized flavors).
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    flavor = Flavor(flavor)
    if flavor.parametrized:
        text = "(" + " ".join(f"{p} l{p + 1}" for p in range(m)) + ")"
    else:
        text = "(" + " ".join(str(p) for p in range(m)) + ")"
    return _diagram(flavor, text, one_ghost=True)


def class_eta(m: int, flavor: Flavor = Flavor.UNPAR_UNEN) -> Diagram:
    """η^m with λ = (0)(1 2 … m); parametrized: (0)(l1 1 l2 2 … lm m).

    Suspended by construction; a cycle exactly when m is odd (unparametrized flavors).
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    flavor = Flavor(flavor)
    if flavor.parametrized:
        text = "(0)(" + " ".join(f"l{p} {p}" for p in range(1, m + 1)) + ")"
    else:
        text = "(0)(" + " ".join(str(p) for p in range(1, m + 1)) + ")"
    return _diagram(flavor, text)


def class_mu(m: int) -> Chain:
    """μ̃_m = (0 2 … 2m−2)(1 l1)(3 l2)…(2m−1 lm) in SD̃_{0,m}."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    text = "(" + " ".join(str(2 * i) for i in range(m)) + ")"
    text += "".join(f"({2 * i - 1} l{i})" for i in range(1, m + 1))
    return Chain.of(_diagram(Flavor.PAR_ENUM, text))


def _omega_terms(m: int) -> Tuple[Diagram, Diagram]:
    odd = " ".join(str(2 * i - 1) for i in range(1, m + 1))
    tail = "".join(f"({2 * i - 2} l{i})" for i in range(2, m + 1))
    first = _diagram(Flavor.PAR_ENUM, f"(0)({odd} l1){tail}")
    second = _diagram(Flavor.PAR_ENUM, f"(0 l1)({odd}){tail}")
    return first, second


def class_omega(m: int) -> Chain:
    """ω̃_m = ω̃_{m,1} − ω̃_{m,2} in SD̃_{0,m}, m > 1."""
    if m < 2:
        raise ValueError(f"ω̃_m needs m > 1, got {m}")
    first, second = _omega_terms(m)
    return Chain.of(first) - Chain.of(second)


GAMMA_TERMS = ("(0)(l1 1 3 2)", "(0)(1 3 l1 2)", "(0 l1)(1 3 2)")
GAMMA_SIGNS = (1, 1, -1)


def gamma_terms() -> List[Diagram]:
    return [_diagram(Flavor.PAR_ENUM, text) for text in GAMMA_TERMS]


def class_gamma() -> Chain:
    """γ̃ = γ̃_1 + γ̃_2 − γ̃_3 in SD̃_{1,1}."""
    return Chain.sum(zip(GAMMA_SIGNS, gamma_terms()))


def class_Omega(cs: Sequence[int]) -> Chain:
    """Ω̃_(c_1..c_m) = ζ̃_m ∘ (ω̃_{c_1} ⊗ … ⊗ ω̃_{c_m}), a cycle of degree 2Σc_i − 1."""
    if not cs or any(c < 2 for c in cs):
        raise ValueError(f"Ω̃ needs a non-empty sequence of integers > 1, got {list(cs)}")
    return compose(class_zeta(len(cs), Flavor.PAR_ENUM), [class_omega(c) for c in cs])


def class_Gamma(m: int) -> Chain:
    """Γ̃_m = ζ̃_m ∘ γ̃^{⊗m}, a cycle of degree 4m − 1 in SD̃_{m,m}."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    gamma = class_gamma()
    return compose(class_zeta(m, Flavor.PAR_ENUM), [gamma] * m)


def named_class(name: str, args: Sequence[int] = (), flavor: Flavor = Flavor.UNPAR_UNEN) -> Chain:
    """Look up a named class by its command line identifier.

    Args:
        name: One of ``zeta``, ``eta``, ``mu``, ``omega``, ``gamma``, ``Omega``, ``Gamma``.
        args: Integer parameters (m, or c_1..c_m for ``Omega``).
        flavor: Flavor for ``zeta`` and ``eta``; the other classes are enumerated parametrized.
    """
    builders: Dict[str, Callable[[], Chain]] = {
        "zeta": lambda: Chain.of(class_zeta(args[0], flavor)),
        "eta": lambda: Chain.of(class_eta(args[0], flavor)),
        "mu": lambda: class_mu(args[0]),
        "omega": lambda: class_omega(args[0]),
        "gamma": class_gamma,
        "Omega": lambda: class_Omega(args),
        "Gamma": lambda: class_Gamma(args[0]),
    }
    if name not in builders:
        raise ValueError(f"unknown class '{name}', expected one of {', '.join(builders)}")
    if name not in ("gamma", "Omega") and not args:
        raise ValueError(f"class '{name}' needs a parameter")
    return builders[name]()


# -- composition -------------------------------------------------------------------------


def _chambers(rho: Permutation, leaf: Symbol) -> List[int]:
    """Ground positions of the ρ-cycle of ``leaf``, in ρ-order after the leaf."""
    out = []
    s = rho(leaf)
    while s != leaf:
        out.append(s)
        s = rho(s)
    return out


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered splittings of ``total`` into ``parts`` non-negative block sizes."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _ground_predecessor(lam: Permutation, leaf: Symbol) -> int:
    inverse = lam.inverse()
    s = inverse(leaf)
    while s < 0 and s != leaf:
        s = inverse(s)
    return s if s >= 0 else 0


def _glue(
    outer: Diagram,
    inners: Sequence[Diagram],
    chambers: Sequence[Sequence[int]],
    split: Sequence[Tuple[int, ...]],
    offsets: Sequence[int],
) -> Optional[Diagram]:
    placed: Dict[int, List[Tuple[int, int]]] = {}
    for k, (cells, sizes) in enumerate(zip(chambers, split)):
        x = 1
        for q, size in zip(cells, sizes):
            placed.setdefault(q, []).extend((k, x + t) for t in range(size))
            x += size
    new_outer: Dict[int, int] = {}
    new_inner: Dict[Tuple[int, int], int] = {}
    counter = 0
    for q in range(outer.n + 1):
        new_outer[q] = counter
        counter += 1
        for key in placed.get(q, ()):
            new_inner[key] = counter
            counter += 1

    def inner_symbol(k: int, s: Symbol) -> Symbol:
        return new_inner[(k, s)] if s > 0 else -(offsets[k] - s)

    def splice(k: int) -> List[Symbol]:
        tail = inners[k].lam.cycle_of(0)[1:]
        return [inner_symbol(k, s) for s in tail]

    genus = [s.genus for s in outer.surfaces]
    cycles: List[List[List[Symbol]]] = []
    for surface in outer.surfaces:
        mapped = []
        for cycle in surface.boundary:
            seq: List[Symbol] = []
            for s in cycle:
                if s >= 0:
                    seq.append(new_outer[s])
                else:
                    seq.extend(splice(-s - 1))
            if not seq:
                return None
            mapped.append(seq)
        cycles.append(mapped)

    for k, inner in enumerate(inners):
        zero_ghost = inner.ghost_of[0]
        host = outer.ghost_of[-(k + 1)]
        for j, surface in enumerate(inner.surfaces):
            mapped = [[inner_symbol(k, s) for s in c] for c in surface.boundary if 0 not in c]
            if j == zero_ghost:
                genus[host] += surface.genus
                cycles[host].extend(mapped)
            else:
                genus.append(surface.genus)
                cycles.append(mapped)

    mapping: Dict[Symbol, Symbol] = {}
    for group in cycles:
        for seq in group:
            for i, s in enumerate(seq):
                mapping[s] = seq[(i + 1) % len(seq)]
    surfaces = [GhostSurface.make(g, 0, group) for g, group in zip(genus, cycles)]
    return Diagram(Flavor.PAR_ENUM, counter - 1, Permutation(mapping), surfaces)


def compose_diagrams(outer: Diagram, inners: Sequence[Diagram]) -> Chain:
    """Glue inner k along the k-th incoming boundary of ``outer``.

    The positions 1..n_k of inner k are cut into consecutive blocks, one per chamber
    of the ρ-cycle of the outer leaf l_k, and inserted behind those chambers; the
    λ-cycle of 0 in inner k replaces l_k. The result sums over all block splittings.

    Raises:
        UnsupportedDiagramError: On flavors other than par-enum or an arity mismatch.
    """
    _require(outer, [Flavor.PAR_ENUM], "compose")
    for inner in inners:
        _require(inner, [Flavor.PAR_ENUM], "compose")
    if len(inners) != len(outer.leaves):
        raise UnsupportedDiagramError(f"outer diagram has {len(outer.leaves)} incoming boundaries, got {len(inners)} inputs")
    rho = outer.rho
    chambers = [_chambers(rho, -(k + 1)) for k in range(len(inners))]
    offsets = list(itertools.accumulate([0] + [len(inner.leaves) for inner in inners[:-1]]))
    exponent = sum(inner.n * _ground_predecessor(outer.lam, -(k + 1)) for k, inner in enumerate(inners))
    sign = (-1) ** exponent
    degree = outer.n + sum(inner.n for inner in inners)
    splits = [list(_compositions(inner.n, len(cells))) for inner, cells in zip(inners, chambers)]
    terms = []
    for split in itertools.product(*splits):
        glued = _glue(outer, inners, chambers, split, offsets)
        if glued is not None:
            terms.append((sign, glued))
    return Chain.sum(terms, degree=degree)


def compose(outer: CellOrChain, inners: Sequence[CellOrChain]) -> Chain:
    """Multilinear extension of ``compose_diagrams`` to chains."""
    outer_chain = _as_chain(outer)
    inner_chains = [_as_chain(x) for x in inners]
    acc: Dict[Diagram, int] = {}
    for d, a in outer_chain.items():
        for choice in itertools.product(*(list(x.items()) for x in inner_chains)):
            coefficient = a * math.prod(c for _, c in choice)
            for cell, c in compose_diagrams(d, [cell for cell, _ in choice]).items():
                acc[cell] = acc.get(cell, 0) + coefficient * c
    return Chain(acc)


# -- stabilization and forgetful maps -----------------------------------------------------


def stabilize(d: Diagram) -> Diagram:
    """Increase the genus of the ghost surface attached at 0 by one."""
    k = d.ghost_of[0]
    surfaces = [replace(s, genus=s.genus + 1) if i == k else s for i, s in enumerate(d.surfaces)]
    return canonicalize(Diagram(d.flavor, d.n, d.lam, surfaces, d.rho_labels))


def stabilize_chain(x: Chain) -> Chain:
    return x.map(lambda d: Chain.of(stabilize(d)))


def forget_enum(d: Diagram) -> Diagram:
    """ω̂ / ω: drop the labels of the incoming boundaries.

    Raises:
        UnsupportedDiagramError: For unenumerated flavors.
    """
    _require(d, [Flavor.UNPAR_ENUM, Flavor.PAR_ENUM], "forget_enum")
    if d.flavor is Flavor.PAR_ENUM:
        return canonicalize(Diagram(Flavor.PAR_UNEN, d.n, d.lam, d.surfaces, check=False))
    surfaces = [GhostSurface.make(s.genus, s.punctures, s.boundary) for s in d.surfaces]
    return Diagram(Flavor.UNPAR_UNEN, d.n, d.lam, surfaces, check=False)


def forget_param(d: Diagram) -> Optional[Diagram]:
    """ϑ / ϑ̃: forget the leaves; a leaf fixed point becomes a puncture.

    Returns None (the zero chain) when a ghost disk carries only a leaf and a ground
    point other than 0, i.e. a leaf sits on the outgoing circle away from position 0.

    Raises:
        UnsupportedDiagramError: For unparametrized flavors.
    """
    _require(d, [Flavor.PAR_ENUM, Flavor.PAR_UNEN], "forget_param")
    target = Flavor.UNPAR_ENUM if d.flavor is Flavor.PAR_ENUM else Flavor.UNPAR_UNEN
    surfaces = []
    for s in d.surfaces:
        kept, labels = [], []
        for cycle in s.boundary:
            ground = [x for x in cycle if x >= 0]
            if ground:
                kept.append(ground)
            else:
                labels.append(-cycle[0])
        if s.genus == 0 and not labels and len(kept) == 1 and len(kept[0]) == 1 and kept[0][0] > 0:
            return None
        puncture_labels = labels if target is Flavor.UNPAR_ENUM else ()
        surfaces.append(GhostSurface.make(s.genus, len(labels), kept, puncture_labels))
    mapping = {}
    for cycle in d.lam.cycles():
        ground = [x for x in cycle if x >= 0]
        for i, x in enumerate(ground):
            mapping[x] = ground[(i + 1) % len(ground)]
    lam = Permutation(mapping)
    rho_labels: Tuple[int, ...] = ()
    if target is Flavor.UNPAR_ENUM:
        old = d.rho
        rho_labels = tuple(-next(x for x in old.cycle_of(c[0]) if x < 0) for c in rho_from_lambda(lam, d.n).cycles())
    return Diagram(target, d.n, lam, surfaces, rho_labels)


def _cellwise(x: Chain, fn: Callable[[Diagram], Optional[Diagram]]) -> Chain:
    acc: Dict[Diagram, int] = {}
    for d, c in x.items():
        image = fn(d)
        if image is not None:
            acc[image] = acc.get(image, 0) + c
    return Chain(acc, degree=x.degree)


def forget_enum_chain(x: Chain) -> Chain:
    return _cellwise(x, forget_enum)


def forget_param_chain(x: Chain) -> Chain:
    return _cellwise(x, forget_param)


# -- enumerations and transfer ----------------------------------------------------------


def enumerations(d: Diagram) -> List[Diagram]:
    """All enumerated cells over an unenumerated one, i.e. the preimages under ``forget_enum``."""
    _require(d, [Flavor.UNPAR_UNEN, Flavor.PAR_UNEN], "enumerations")
    m = top_type(d).m
    found = set()
    if d.flavor is Flavor.PAR_UNEN:
        base = Diagram(Flavor.PAR_ENUM, d.n, d.lam, d.surfaces, check=False)
        for perm in itertools.permutations(range(1, m + 1)):
            found.add(base.relabel_leaves({-(j + 1): -perm[j] for j in range(m)}))
        return sorted(found)
    r = len(d.rho.cycles())
    for perm in itertools.permutations(range(1, m + 1)):
        rest = list(perm[r:])
        surfaces = []
        for s in d.surfaces:
            labels, rest = rest[: s.punctures], rest[s.punctures :]
            surfaces.append(GhostSurface.make(s.genus, s.punctures, s.boundary, labels))
        found.add(Diagram(Flavor.UNPAR_ENUM, d.n, d.lam, surfaces, perm[:r], check=False))
    return sorted(found)


def label_orbit_size(d: Diagram) -> int:
    """Number of distinct cells obtained from an enumerated cell by permuting its labels."""
    return len(enumerations(forget_enum(d)))


def transfer(d: Diagram) -> Chain:
    """Sum of all enumerations of an unenumerated cell."""
    return Chain.sum((1, e) for e in enumerations(d))


def _identity(n: int, factor: int = 1) -> SparseMatrix:
    return SparseMatrix(n, [{i: factor} for i in range(n)])


def _commutes(f: Dict[int, SparseMatrix], source: ChainComplex, target: ChainComplex) -> Optional[int]:
    """First degree k where ∂∘f_k ≠ f_{k−1}∘∂, or None."""
    for k in range(1, len(source.bases)):
        if k >= len(target.bases):
            break
        left = target.boundary_matrix(k).compose(f[k])
        right = f[k - 1].compose(source.boundary_matrix(k))
        if left != right:
            return k
    return None


@dataclass
class TransferMap:
    """Transfer tr: SD/B → SD̃/B̃ and projection P: SD̃/B̃ → SD/B, degreewise.

    ``tr[k]`` has rows indexed by the enumerated quotient basis in degree k and
    columns by the unenumerated one; ``P[k]`` goes the other way.
    """

    source: SubQuotient
    target: SubQuotient
    tr: Dict[int, SparseMatrix]
    P: Dict[int, SparseMatrix]
    factor: int

    def covering_degree_ok(self) -> bool:
        """P∘tr = m!·id in every degree."""
        for k, matrix in self.tr.items():
            if self.P[k].compose(matrix) != _identity(matrix.n_cols, self.factor):
                logger.error(f"P∘tr ≠ {self.factor}·id in degree {k}")
                return False
        return True

    def is_chain_map(self) -> bool:
        return _commutes(self.tr, self.source.complex, self.target.complex) is None

    def projection_is_chain_map(self) -> bool:
        return _commutes(self.P, self.target.complex, self.source.complex) is None

    def report(self) -> Dict[str, bool]:
        return {
            "tr_chain_map": self.is_chain_map(),
            "P_chain_map": self.projection_is_chain_map(),
            "P_tr_is_multiple": self.covering_degree_ok(),
        }


def transfer_chain_map(
    flavor: Flavor,
    g: int,
    m: int,
    b: int = 2,
    source: Optional[ChainComplex] = None,
    target: Optional[ChainComplex] = None,
    budget_cells: Optional[int] = None,
    threads: int = 1,
) -> TransferMap:
    """Build tr and P between the quotients by B_b of an unenumerated component and its enumeration.

    Args:
        flavor: ``unpar-unen`` or ``par-unen``.
        g, m: The component.
        b: Quotient by B_b, b >= 2.
        source, target: Already built complexes of both flavors, if at hand.

    Raises:
        UnsupportedDiagramError: If ``flavor`` is enumerated.
    """
    flavor = Flavor(flavor)
    if flavor.enumerated:
        raise UnsupportedDiagramError(f"transfer starts from an unenumerated flavor, got {flavor.value}")
    if b < 2:
        raise ValueError(f"transfer needs a quotient by B_b with b >= 2, got b={b}")
    source = source or build_complex(flavor, g, m, budget_cells=budget_cells, threads=threads)
    target = target or build_complex(flavor.enumeration, g, m, budget_cells=budget_cells, threads=threads)
    sq = subquotient(source, in_B(b), "quotient")
    tq = subquotient(target, in_B(b), "quotient")
    tr: Dict[int, SparseMatrix] = {}
    P: Dict[int, SparseMatrix] = {}
    for k in range(len(sq.complex.bases)):
        columns = []
        for d in sq.complex.cells(k):
            column: Dict[int, int] = {}
            for e in enumerations(d):
                if tq.complex.contains(e, k):
                    i = tq.complex.index_of(e, k)
                    column[i] = column.get(i, 0) + 1
            columns.append(column)
        tr[k] = SparseMatrix(tq.complex.rank(k), columns)
        P[k] = SparseMatrix(
            sq.complex.rank(k),
            [{sq.complex.index_of(forget_enum(e), k): 1} for e in tq.complex.cells(k)],
        )
    result = TransferMap(sq, tq, tr, P, math.factorial(m))
    logger.info(f"Transfer {flavor.symbol} g={g} m={m} modulo B_{b}: {[matrix.nnz() for matrix in tr.values()]} entries")
    return result


def find_symmetric_cell(c: ChainComplex) -> Optional[Diagram]:
    """An enumerated cell whose labels can be permuted without changing it, if any.

    For such a cell σ the composite tr∘P(σ) has fewer than m! terms, so tr∘P ≠ m!·id.
    """
    for k in range(len(c.bases)):
        for d in c.cells(k):
            m = top_type(d).m
            if label_orbit_size(d) < math.factorial(m):
                return d
    return None


# -- boundary witnesses -----------------------------------------------------------------


def _coface_candidates(cells: Sequence[Diagram]) -> List[Diagram]:
    found = set()
    for d in cells:
        for i in range(d.n + 2):
            found.update(canonicalize(c) for c in cofaces(d, i))
    return sorted(found)


def find_boundary_witness(x: Chain, c: Optional[ChainComplex] = None, max_local: int = 400) -> Optional[Chain]:
    """A chain y with ∂y = x.

    Tries single cofaces of the support first, then integer combinations of them,
    then (given the complex) the full solve in the next degree.

    Returns:
        The witness, or None when none was found.
    """
    if x.is_zero():
        return Chain.zero(None if x.degree is None else x.degree + 1)
    candidates = _coface_candidates(list(x.support()))
    logger.debug(f"Boundary search for a chain of degree {x.degree}: {len(candidates)} cofaces")
    for y in candidates:
        db = boundary(y)
        if db == x:
            return Chain.of(y)
        if db == -x:
            return Chain.of(y, -1)
    if len(candidates) <= max_local:
        rows = sorted(set(x.support()) | {f for y in candidates for f in boundary(y).support()})
        index = {cell: i for i, cell in enumerate(rows)}
        A = np.zeros((len(rows), len(candidates)), dtype=object)
        for j, y in enumerate(candidates):
            for f, v in boundary(y).items():
                A[index[f], j] = v
        z = solve_integer(A, [x.coefficient(cell) for cell in rows])
        if z is not None:
            return Chain({candidates[j]: int(z[j]) for j in range(len(candidates)) if z[j]})
    if c is not None:
        found, witness = is_boundary(x, c)
        return witness if found else None
    return None


def generates_homology(x: Chain, c: ChainComplex) -> bool:
    """Whether the cycle x generates H_k(c) ≅ Z, k = deg x.

    True iff H_k is infinite cyclic and the columns of ∂_{k+1} together with x span
    a saturated lattice of one more rank: then they span all cycles.
    """
    k = x.degree
    group = homology(c)[k]
    if group.betti != 1 or group.torsion:
        return False
    vector = c.chain_to_vector(x)
    if k >= 1 and c.boundary_matrix(k).apply(vector):
        return False
    image = c.boundary_matrix(k + 1) if k < c.top_degree else SparseMatrix(c.rank(k), [])
    extended = SparseMatrix(c.rank(k), list(image.columns) + [vector])
    base, full = snf(image), snf(extended)
    return full.rank == base.rank + 1 and all(f == 1 for f in full.factors)


# -- support and stabilization checks ----------------------------------------------------


def support_splitting_check(
    flavor: Flavor,
    g: int,
    m: int,
    b: int = 2,
    c: Optional[ChainComplex] = None,
    budget_cells: Optional[int] = None,
) -> Dict[str, object]:
    """Check that SD → SD/B_b is injective in homology in positive degrees.

    Every cycle of B_b in positive degree must bound in SD; then H_*(B_b) → H_*(SD)
    vanishes and the long exact sequence makes the projection injective. The Morse
    flow's essential cells of positive degree must avoid degenerate cells.

    Returns:
        Report with ``injective``, ``morse_support``, the homology rows of SD and SD/B_b
        and a ``witness`` cycle of B_b that survives in SD, if any.
    """
    flavor = Flavor(flavor)
    c = c or build_complex(flavor, g, m, budget_cells=budget_cells)
    sub = subquotient(c, in_B(b), "sub")
    quotient = subquotient(c, in_B(b), "quotient")
    injective, witness = True, None
    for k in range(1, sub.complex.top_degree + 1):
        inclusion = [c.index_of(cell, k) for cell in sub.complex.cells(k)]
        if not inclusion:
            continue
        cycles = kernel_basis(sub.complex.boundary_matrix(k).to_dense())
        if not cycles:
            continue
        solver = boundary_solver(c, k + 1) if k < c.top_degree else None
        for z in cycles:
            rhs = [0] * c.rank(k)
            for position, value in zip(inclusion, z):
                rhs[position] = int(value)
            if solver is None or solver.solve(rhs) is None:
                injective = False
                witness = c.vector_to_chain({i: v for i, v in enumerate(rhs) if v}, k)
                break
        if not injective:
            break
    matching = build_matching(c)
    stray = [
        c.bases[k][i]
        for k in range(1, len(c.bases))
        for i in matching.essentials(k)
        if degenerate_count(c.bases[k][i]) > 0
    ]
    if stray:
        logger.warning(f"{len(stray)} essential cells of positive degree are degenerate, first {stray[0]}")
    report = {
        "injective": injective,
        "morse_support": not stray,
        "homology": homology_row(homology(c)),
        "quotient_homology": homology_row(homology(quotient.complex)),
        "witness": witness,
    }
    logger.info(f"Support check {flavor.symbol} g={g} m={m} B_{b}: injective={injective}")
    return report


def stabilization_quotient_check(
    flavor: Flavor,
    g: int,
    m: int,
    c: Optional[ChainComplex] = None,
    budget_cells: Optional[int] = None,
) -> Dict[str, object]:
    """Quotient of the (g+1, m) component by the image of stabilization.

    Expected: no essential cells of the restricted flow below degree m+g−1 and
    vanishing homology through degree g+m−2.

    Returns:
        Report with the essential counts, the quotient homology row and the two verdicts.
    """
    flavor = Flavor(flavor)
    c = c or build_complex(flavor, g + 1, m, budget_cells=budget_cells)
    quotient = subquotient(c, in_stabilization_image, "quotient")
    matching = build_matching(quotient.complex, strict=False)
    essentials = [len(matching.essentials(k)) for k in range(len(quotient.complex.bases))]
    groups: Dict[int, HomologyGroup] = homology(quotient.complex)
    bound = m + g - 1
    report = {
        "essential_counts": essentials,
        "quotient_homology": homology_row(groups),
        "no_low_essentials": all(count == 0 for count in essentials[:bound]),
        "vanishing": all(groups[k].is_zero() for k in groups if k <= g + m - 2),
    }
    logger.info(f"Stabilization quotient {flavor.symbol} g={g + 1} m={m}: essentials {essentials}")
    return report
