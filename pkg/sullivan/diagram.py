"""
Combinatorial 1-Sullivan diagrams.

A diagram of degree ``n`` consists of a fat structure λ on {0..n} ∪ L, a list of
ghost surfaces partitioning the cycles of λ, and (for the unparametrized
enumerated flavor) labels on the cycles of ρ and on the punctures.

Provides:
- ``GhostSurface`` and ``Diagram`` value types with the canonical text format.
- ``validate``, ``euler_char``, ``top_type`` and the degeneracy helpers.
- Face maps ``face``/``boundary``, their complete inverse ``cofaces`` and the
  suspension ``suspend``.
- ``canonicalize`` for the parametrized unenumerated flavor, with the brute-force
  ``orbit_representative`` to check it against.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exceptions import DegreeError, DiagramValidationError, PermutationError
from .models import Flavor
from .permutation import (
    Cycle,
    Permutation,
    Symbol,
    canonical_cycle,
    compose,
    cycle_key,
    face_D,
    format_cycles,
    orbit_canonical,
    parse_cycles,
    rho_from_lambda,
    symbol_key,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GhostSurface:
    """A ghost surface S = (g, m, A) attached to the ground circle.

    Attributes:
        genus: Genus g of the surface.
        punctures: Number of punctures m.
        boundary: Cycles of λ forming the boundary A, canonical and sorted.
        puncture_labels: Labels of the punctures (unparametrized enumerated flavor only).
    """

    genus: int
    punctures: int
    boundary: Tuple[Cycle, ...]
    puncture_labels: Tuple[int, ...] = ()

    @classmethod
    def make(
        cls,
        genus: int,
        punctures: int,
        boundary: Iterable[Sequence[Symbol]],
        puncture_labels: Iterable[int] = (),
    ) -> "GhostSurface":
        cycles = tuple(sorted((canonical_cycle(c) for c in boundary), key=cycle_key))
        return cls(genus, punctures, cycles, tuple(sorted(puncture_labels)))

    @property
    def ground_positions(self) -> Tuple[int, ...]:
        return tuple(sorted(s for c in self.boundary for s in c if s >= 0))

    @property
    def foot(self) -> Optional[int]:
        """First position on the ground circle the surface is attached to."""
        positions = self.ground_positions
        return positions[0] if positions else None

    @property
    def end(self) -> Optional[int]:
        """Last position on the ground circle the surface is attached to."""
        positions = self.ground_positions
        return positions[-1] if positions else None

    @property
    def leaf_fixed_points(self) -> Tuple[Symbol, ...]:
        return tuple(c[0] for c in self.boundary if len(c) == 1 and c[0] < 0)

    def is_suspension_disk(self) -> bool:
        return self.genus == 0 and self.punctures == 0 and self.boundary == ((0,),)

    def euler_char(self) -> int:
        return 2 - 2 * self.genus - len(self.boundary) - self.punctures - len(self.ground_positions)

    def key(self) -> tuple:
        return (
            self.genus,
            self.punctures,
            tuple(cycle_key(c) for c in self.boundary),
            self.puncture_labels,
        )

    def to_text(self) -> str:
        cycles = ",".join(format_cycles([c]) for c in self.boundary)
        return f"({self.genus},{self.punctures},{{{cycles}}})"


def _surface_order(surface: GhostSurface) -> tuple:
    foot = surface.foot
    if foot is not None:
        return (0, foot)
    return (1, min(symbol_key(s) for c in surface.boundary for s in c))


@dataclass(frozen=True)
class TopType:
    """Topological type of a diagram's thickened surface."""

    genus: int
    m: int
    flavor: Flavor


class Diagram:
    """A combinatorial 1-Sullivan diagram (one cell of a component).

    Diagrams are immutable. Surfaces are kept sorted by foot-point; for the
    unparametrized enumerated flavor ``rho_labels`` is aligned with the canonical
    cycles of ρ.
    """

    __slots__ = ("flavor", "n", "lam", "surfaces", "rho_labels", "_rho", "_key", "_ghost_of", "_text")

    def __init__(
        self,
        flavor: Flavor,
        n: int,
        lam: Permutation,
        surfaces: Iterable[GhostSurface],
        rho_labels: Sequence[int] = (),
        check: bool = True,
    ):
        self.flavor = Flavor(flavor)
        self.n = n
        self.lam = lam
        self.surfaces: Tuple[GhostSurface, ...] = tuple(sorted(surfaces, key=_surface_order))
        self.rho_labels: Tuple[int, ...] = tuple(rho_labels)
        self._rho: Optional[Permutation] = None
        self._key: Optional[tuple] = None
        self._ghost_of: Optional[Dict[Symbol, int]] = None
        self._text: Optional[str] = None
        if check:
            validate(self)

    @classmethod
    def build(
        cls,
        flavor: Flavor,
        lam: str,
        surfaces: Sequence[Tuple[int, int, str]],
        beta1: Optional[Mapping[str, int]] = None,
        beta2: Optional[Sequence[Sequence[int]]] = None,
    ) -> "Diagram":
        """Convenience constructor from cycle text.

        Args:
            flavor: Flavor of the diagram.
            lam: λ in cycle notation, fixed points included.
            surfaces: Triples (genus, punctures, boundary cycles as text).
            beta1: For the unparametrized enumerated flavor, ρ-cycle text to label.
            beta2: For the unparametrized enumerated flavor, puncture labels per surface
                (in the order given in ``surfaces``).

        Returns:
            The validated diagram.
        """
        perm = Permutation.parse(lam)
        n = len(perm.ground) - 1
        ghosts = []
        for k, (genus, punctures, text) in enumerate(surfaces):
            labels = tuple(beta2[k]) if beta2 is not None else ()
            ghosts.append(GhostSurface.make(genus, punctures, parse_cycles(text.replace(",", " ")), labels))
        rho_labels: Tuple[int, ...] = ()
        if beta1 is not None:
            rho = rho_from_lambda(perm, n)
            lookup = {canonical_cycle(parse_cycles(k)[0]): v for k, v in beta1.items()}
            try:
                rho_labels = tuple(lookup[c] for c in rho.cycles())
            except KeyError as e:
                raise DiagramValidationError("v", f"no label for ρ-cycle {e}") from None
        return cls(flavor, n, perm, ghosts, rho_labels)

    # -- derived data ---------------------------------------------------------

    @property
    def rho(self) -> Permutation:
        if self._rho is None:
            self._rho = rho_from_lambda(self.lam, self.n)
        return self._rho

    @property
    def degree(self) -> int:
        return self.n

    @property
    def leaves(self) -> Tuple[Symbol, ...]:
        return self.lam.leaves

    @property
    def ghost_of(self) -> Dict[Symbol, int]:
        """Map each symbol to the index of the surface whose boundary contains it."""
        if self._ghost_of is None:
            self._ghost_of = {
                s: k for k, surface in enumerate(self.surfaces) for c in surface.boundary for s in c
            }
        return self._ghost_of

    def rho_label_of(self, s: Symbol) -> int:
        """Label of the ρ-cycle containing ``s`` (unparametrized enumerated flavor)."""
        index = self.rho.cycle_index()[s]
        return self.rho_labels[index]

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                self.flavor.value,
                self.n,
                self.lam.key(),
                tuple(s.key() for s in self.surfaces),
                self.rho_labels,
            )
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "Diagram") -> bool:
        return self.key() < other.key()

    # -- text format ----------------------------------------------------------

    def to_text(self) -> str:
        if self._text is None:
            parts = [f"flavor={self.flavor.value}", f"n={self.n}", f"lambda={self.lam.to_text()}"]
            parts += [f"S{k + 1}={s.to_text()}" for k, s in enumerate(self.surfaces)]
            if self.flavor is Flavor.UNPAR_ENUM:
                beta1 = ",".join(
                    f"{format_cycles([c])}:{label}" for c, label in zip(self.rho.cycles(), self.rho_labels)
                )
                beta2 = ",".join(
                    f"{label}:S{k + 1}"
                    for k, s in enumerate(self.surfaces)
                    for label in s.puncture_labels
                )
                parts += [f"beta1={{{beta1}}}", f"beta2={{{beta2}}}"]
            self._text = "; ".join(parts)
        return self._text

    @classmethod
    def parse(cls, text: str) -> "Diagram":
        """Parse the canonical text format produced by ``to_text``."""
        fields: Dict[str, str] = {}
        for part in text.split(";"):
            if not part.strip():
                continue
            if "=" not in part:
                raise DiagramValidationError("syntax", f"malformed field '{part.strip()}'")
            name, value = part.split("=", 1)
            fields[name.strip()] = value.strip()
        try:
            flavor = Flavor(fields["flavor"])
            n = int(fields["n"])
            lam = Permutation.parse(fields["lambda"])
        except (KeyError, ValueError, PermutationError) as e:
            raise DiagramValidationError("syntax", f"cannot parse diagram '{text}': {e}") from None
        surface_re = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*,\s*\{(.*)\}\s*\)$")
        names = sorted((k for k in fields if re.fullmatch(r"S\d+", k)), key=lambda k: int(k[1:]))
        raw = []
        for name in names:
            match = surface_re.match(fields[name])
            if not match:
                raise DiagramValidationError("syntax", f"malformed surface {name}={fields[name]}")
            cycles = parse_cycles(match.group(3).replace(",", " "))
            raw.append((int(match.group(1)), int(match.group(2)), cycles))
        labels: Dict[int, List[int]] = {k: [] for k in range(len(raw))}
        for match in re.finditer(r"(\d+)\s*:\s*S(\d+)", fields.get("beta2", "")):
            labels.setdefault(int(match.group(2)) - 1, []).append(int(match.group(1)))
        surfaces = [GhostSurface.make(g, p, cycles, labels.get(k, ())) for k, (g, p, cycles) in enumerate(raw)]
        rho_labels: Tuple[int, ...] = ()
        if "beta1" in fields:
            lookup = {
                canonical_cycle(parse_cycles(f"({m.group(1)})")[0]): int(m.group(2))
                for m in re.finditer(r"\(([^()]*)\)\s*:\s*(\d+)", fields["beta1"])
            }
            try:
                rho = rho_from_lambda(lam, n)
                rho_labels = tuple(lookup[c] for c in rho.cycles())
            except (KeyError, PermutationError) as e:
                raise DiagramValidationError("v", f"incomplete beta1 in '{text}': {e}") from None
        return cls(flavor, n, lam, surfaces, rho_labels)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Diagram('{self.to_text()}')"

    # -- structural edits -------------------------------------------------------

    def relabel_leaves(self, rename: Mapping[Symbol, Symbol]) -> "Diagram":
        """Rename leaves (old symbol -> new symbol); ground symbols are untouched."""
        lam = Permutation({rename.get(x, x): rename.get(y, y) for x, y in self.lam.items()})
        surfaces = [
            GhostSurface.make(s.genus, s.punctures, ([rename.get(x, x) for x in c] for c in s.boundary), s.puncture_labels)
            for s in self.surfaces
        ]
        return Diagram(self.flavor, self.n, lam, surfaces, self.rho_labels, check=False)

    def with_surfaces(self, surfaces: Iterable[GhostSurface]) -> "Diagram":
        return Diagram(self.flavor, self.n, self.lam, surfaces, self.rho_labels, check=False)


# -- validation and invariants -------------------------------------------------


def validate(d: Diagram, g: Optional[int] = None, m: Optional[int] = None) -> None:
    """Check the defining conditions of the diagram's flavor.

    Args:
        d: Diagram to check.
        g: Expected genus of the component, if known.
        m: Expected number of punctures / incoming boundaries, if known.

    Raises:
        DiagramValidationError: Naming the first violated condition.
    """
    flavor = d.flavor
    if d.n < 0 or d.lam.ground != tuple(range(d.n + 1)):
        raise DiagramValidationError("syntax", f"ground symbols of λ must be 0..{d.n}")
    leaves = d.lam.leaves
    if flavor.parametrized:
        if not leaves:
            raise DiagramValidationError("flavor", "parametrized diagrams need at least one leaf")
        if leaves != tuple(-(k + 1) for k in range(len(leaves))):
            raise DiagramValidationError("syntax", "leaves must be exactly l1..lm")
    elif leaves:
        raise DiagramValidationError("flavor", "unparametrized diagrams carry no leaves")

    listed = [c for s in d.surfaces for c in s.boundary]
    if any(not s.boundary for s in d.surfaces):
        raise DiagramValidationError("i", "a ghost surface has empty boundary")
    if len(listed) != len(set(listed)) or set(listed) != set(d.lam.cycles()):
        raise DiagramValidationError("i", "boundaries of the ghost surfaces do not partition the cycles of λ")
    for s in d.surfaces:
        if s.genus < 0 or s.punctures < 0:
            raise DiagramValidationError("syntax", f"negative genus or punctures in {s.to_text()}")
        if flavor.parametrized and s.punctures:
            raise DiagramValidationError("flavor", "parametrized ghost surfaces have no punctures")
        if (
            s.genus == 0
            and s.punctures == 0
            and len(s.boundary) == 1
            and len(s.boundary[0]) == 1
            and s.boundary[0][0] > 0
        ):
            raise DiagramValidationError("ii", f"disk {s.to_text()} must be attached at 0")
        if flavor.parametrized and s.foot is None:
            raise DiagramValidationError("iii", f"{s.to_text()} has no cycle meeting the ground circle")

    if flavor.parametrized:
        for cycle in d.rho.cycles():
            if sum(1 for x in cycle if x < 0) != 1:
                raise DiagramValidationError("iv", f"ρ-cycle {format_cycles([cycle])} must contain exactly one leaf")
    else:
        for s in d.surfaces:
            if s.foot is None:
                raise DiagramValidationError("iii", f"{s.to_text()} is not attached to the ground circle")

    if flavor is Flavor.UNPAR_ENUM:
        if len(d.rho_labels) != len(d.rho.cycles()):
            raise DiagramValidationError("v", "every ρ-cycle needs a label")
        for s in d.surfaces:
            if len(s.puncture_labels) != s.punctures:
                raise DiagramValidationError("v", f"{s.to_text()} needs {s.punctures} puncture labels")
        used = list(d.rho_labels) + [x for s in d.surfaces for x in s.puncture_labels]
        if sorted(used) != list(range(1, len(used) + 1)):
            raise DiagramValidationError("v", f"labels {sorted(used)} are not 1..{len(used)}")
    elif d.rho_labels or any(s.puncture_labels for s in d.surfaces):
        raise DiagramValidationError("flavor", "only the unparametrized enumerated flavor carries labels")

    tt = top_type(d)
    if (g is not None and tt.genus != g) or (m is not None and tt.m != m):
        raise DiagramValidationError("type", f"diagram has type (g={tt.genus}, m={tt.m}), expected (g={g}, m={m})")


def is_valid(d: Diagram) -> bool:
    try:
        validate(d)
    except DiagramValidationError:
        return False
    return True


def euler_char(d: Diagram) -> int:
    """χ of the thickened surface, summed over ghost surfaces."""
    return sum(s.euler_char() for s in d.surfaces)


def incoming_count(d: Diagram) -> int:
    if d.flavor.parametrized:
        return len(d.leaves)
    return len(d.rho.cycles()) + sum(s.punctures for s in d.surfaces)


def top_type(d: Diagram) -> TopType:
    """Genus and number of punctures (or incoming boundaries) of the diagram.

    Raises:
        DiagramValidationError: If the genus comes out negative or non-integral.
    """
    m = incoming_count(d)
    twice_genus = 1 - m - euler_char(d)
    if twice_genus < 0 or twice_genus % 2:
        raise DiagramValidationError("type", f"genus (1-m-χ)/2 = {twice_genus}/2 is not a non-negative integer")
    return TopType(twice_genus // 2, m, d.flavor)


def degree(d: Diagram) -> int:
    return d.n


def is_suspended(d: Diagram) -> bool:
    return any(s.is_suspension_disk() for s in d.surfaces)


def leaf_fixed_points(d: Diagram) -> Tuple[Symbol, ...]:
    return tuple(c[0] for c in d.rho.cycles() if len(c) == 1 and c[0] < 0)


def degenerate_count(d: Diagram) -> int:
    """Number of boundary cycles without an admissible edge."""
    count = sum(s.punctures for s in d.surfaces)
    if d.flavor.parametrized:
        count += len(leaf_fixed_points(d))
    return count


def is_fan_chamber(d: Diagram, p: int) -> bool:
    """Whether position p is a chamber of a fan.

    Unparametrized: p is a fixed point of ρ. Parametrized: ρ(p) is a leaf and
    p a fixed point of ρ².
    """
    rho = d.rho
    if d.flavor.parametrized:
        q = rho(p)
        return q < 0 and rho(q) == p
    return rho(p) == p


def fan_length(d: Diagram, foot: int) -> int:
    length = 0
    while foot + length <= d.n and is_fan_chamber(d, foot + length):
        length += 1
    return length


def top_degree(flavor: Flavor, g: int, m: int) -> int:
    """Largest degree of a cell in the component (flavor, g, m)."""
    top = 2 * (m + 2 * g - 1)
    return top + m if Flavor(flavor).parametrized else top


# -- faces ----------------------------------------------------------------------


def _transposition(a: Symbol, b: Symbol, domain: Iterable[Symbol]) -> Permutation:
    return Permutation.from_cycles([(a, b)], domain)


def face(i: int, d: Diagram) -> Diagram:
    """The face d_i: collapse the i-th edge of the ground circle.

    With a = ρ(i), the new fat structure is D_i(λ∘(a i)). The ghost surfaces
    follow the three cases: a = i adds a puncture, merging two cycles adds genus
    or merges two surfaces, splitting a cycle leaves the surfaces alone.

    Raises:
        DegreeError: If d has degree 0 or i is out of range.
    """
    n = d.n
    if n < 1:
        raise DegreeError("degree-0 cells have no faces")
    if not 0 <= i <= n:
        raise DegreeError(f"face index {i} out of range 0..{n}")
    lam = d.lam
    a = d.rho(i)
    ghost_of = d.ghost_of
    genus = [s.genus for s in d.surfaces]
    punctures = [s.punctures for s in d.surfaces]
    labels = [list(s.puncture_labels) for s in d.surfaces]
    target = list(range(len(d.surfaces)))
    gi = ghost_of[i]
    if a == i:
        full = lam
        punctures[gi] += 1
        if d.flavor is Flavor.UNPAR_ENUM:
            labels[gi].append(d.rho_label_of(i))
    else:
        full = compose(lam, _transposition(a, i, lam.domain))
        cycle_index = lam.cycle_index()
        if cycle_index[a] != cycle_index[i]:
            ga = ghost_of[a]
            if ga != gi:
                genus[gi] += genus[ga]
                punctures[gi] += punctures[ga]
                labels[gi] += labels[ga]
                target[ga] = gi
            else:
                genus[gi] += 1
    new_lam = face_D(i, full)

    def old(s: Symbol) -> Symbol:
        return s + 1 if s >= i else s

    groups: Dict[int, List[Cycle]] = {}
    for cycle in new_lam.cycles():
        groups.setdefault(target[ghost_of[old(cycle[0])]], []).append(cycle)
    surfaces = [GhostSurface.make(genus[k], punctures[k], cycles, labels[k]) for k, cycles in groups.items()]
    rho_labels: Tuple[int, ...] = ()
    if d.flavor is Flavor.UNPAR_ENUM:
        new_rho = rho_from_lambda(new_lam, n - 1)
        rho_labels = tuple(d.rho_label_of(old(c[0])) for c in new_rho.cycles())
    return Diagram(d.flavor, n - 1, new_lam, surfaces, rho_labels, check=False)


def boundary(d: Diagram) -> "Chain":
    """Σ_j (−1)^j d_j(d) with like terms combined; empty for degree 0."""
    from .chain import Chain

    terms: Dict[Diagram, int] = {}
    if d.n > 0:
        for j in range(d.n + 1):
            f = canonicalize(face(j, d))
            terms[f] = terms.get(f, 0) + (-1) ** j
    return Chain(terms, degree=d.n - 1)


# -- cofaces --------------------------------------------------------------------


def _transport_rho_labels(d: Diagram, lam: Permutation, i: int, new_label: Optional[int]) -> Tuple[int, ...]:
    """ρ-labels of a coface c of d at index i, read back through D_i."""
    rho = rho_from_lambda(lam, d.n + 1)
    labels = []
    for cycle in rho.cycles():
        if cycle == (i,):
            labels.append(new_label)
            continue
        s = next(x for x in cycle if x != i)
        labels.append(d.rho_label_of(s - 1 if s > i else s))
    return tuple(labels)


def cofaces(d: Diagram, i: int) -> List[Diagram]:
    """All valid cells c of degree n+1 with d_i(c) = d.

    Shift the ground symbols ≥ i up, insert i in front of its successor on the
    ground circle, and undo the face for every possible value a = ρ(i).

    Args:
        d: A valid diagram of degree n.
        i: Face index, 0 <= i <= n+1.

    Returns:
        The cofaces, sorted by canonical key (not canonicalized).
    """
    n = d.n
    top = n + 1
    if not 0 <= i <= top:
        raise DegreeError(f"coface index {i} out of range 0..{top}")

    def up(s: Symbol) -> Symbol:
        return s + 1 if s >= i else s

    mapping = {up(x): up(y) for x, y in d.lam.items()}
    succ = i + 1 if i < top else 0
    pred = next(x for x, y in mapping.items() if y == succ)
    mapping[pred] = i
    mapping[i] = succ
    lam_p = Permutation(mapping)
    ghost_of = {up(s): k for s, k in d.ghost_of.items()}
    ghost_of[i] = ghost_of[succ]
    enumerated = d.flavor is Flavor.UNPAR_ENUM
    base = [(s.genus, s.punctures, s.puncture_labels) for s in d.surfaces]
    p_index = lam_p.cycle_index()
    found: Dict[tuple, Diagram] = {}

    def emit(lam: Permutation, ghosts: List[tuple], assign: Dict[Cycle, int], new_label: Optional[int] = None) -> None:
        groups: Dict[int, List[Cycle]] = {}
        for cycle, k in assign.items():
            groups.setdefault(k, []).append(cycle)
        surfaces = [GhostSurface.make(ghosts[k][0], ghosts[k][1], cycles, ghosts[k][2]) for k, cycles in groups.items()]
        rho_labels = _transport_rho_labels(d, lam, i, new_label) if enumerated else ()
        candidate = Diagram(d.flavor, top, lam, surfaces, rho_labels, check=False)
        if is_valid(candidate):
            found.setdefault(candidate.key(), candidate)

    for a in sorted(lam_p.domain, key=symbol_key):
        lam = lam_p if a == i else compose(lam_p, _transposition(a, i, lam_p.domain))
        assign = {c: ghost_of[c[0]] for c in lam.cycles()}
        gi = ghost_of[i]
        if a == i:
            genus, punctures, labels = base[gi]
            if punctures < 1:
                continue
            choices = labels if enumerated else (None,)
            for label in choices:
                ghosts = list(base)
                rest = tuple(x for x in labels if x != label) if enumerated else ()
                ghosts[gi] = (genus, punctures - 1, rest)
                emit(lam, ghosts, assign, label)
        elif p_index[a] == p_index[i]:
            c1 = lam.cycle_of(i)
            c2 = lam.cycle_of(a)
            genus, punctures, labels = base[gi]
            if genus >= 1:
                ghosts = list(base)
                ghosts[gi] = (genus - 1, punctures, labels)
                emit(lam, ghosts, assign)
            others = [c for c, k in assign.items() if k == gi and c not in (c1, c2)]
            new = len(base)
            for mask in itertools.product((False, True), repeat=len(others)):
                split = dict(assign)
                split[c2] = new
                for c, moved in zip(others, mask):
                    if moved:
                        split[c] = new
                for g2 in range(genus + 1):
                    if enumerated:
                        label_splits = [
                            (tuple(x for x in labels if x not in sub), sub)
                            for r in range(len(labels) + 1)
                            for sub in itertools.combinations(labels, r)
                        ]
                    else:
                        label_splits = [((), ()) for _ in range(punctures + 1)]
                    for p2, (keep, moved_labels) in enumerate(label_splits):
                        if enumerated:
                            p2 = len(moved_labels)
                        ghosts = list(base)
                        ghosts[gi] = (genus - g2, punctures - p2, keep)
                        ghosts.append((g2, p2, moved_labels))
                        emit(lam, ghosts, split)
        else:
            if ghost_of[a] != gi:
                continue
            emit(lam, list(base), assign)
    return [found[k] for k in sorted(found)]


def suspend(d: Diagram) -> Diagram:
    """The suspension Ψ: add the suspension disk at position 0.

    The result c satisfies d_0(c) = d.

    Raises:
        DegreeError: If d is already suspended.
    """
    if is_suspended(d):
        raise DegreeError("diagram is already suspended")
    mapping = {(x + 1 if x >= 0 else x): (y + 1 if y >= 0 else y) for x, y in d.lam.items()}
    pred = next(x for x, y in mapping.items() if y == 1)
    mapping[pred] = 1
    mapping[0] = 0
    lam = Permutation(mapping)
    surfaces = [
        GhostSurface.make(s.genus, s.punctures, ([x + 1 if x >= 0 else x for x in c] for c in s.boundary), s.puncture_labels)
        for s in d.surfaces
    ]
    surfaces.append(GhostSurface(0, 0, ((0,),)))
    rho_labels = _transport_rho_labels(d, lam, 0, None) if d.flavor is Flavor.UNPAR_ENUM else ()
    return Diagram(d.flavor, d.n + 1, lam, surfaces, rho_labels, check=False)


# -- canonical forms --------------------------------------------------------------


def _leaf_keys(d: Diagram) -> Dict[Symbol, tuple]:
    lam = d.lam
    inverse = lam.inverse()
    keys: Dict[Symbol, tuple] = {}
    ghost_of = d.ghost_of
    for cycle in lam.cycles():
        for s in cycle:
            if s >= 0:
                continue
            if all(x < 0 for x in cycle):
                keys[s] = (1, d.surfaces[ghost_of[s]].foot, 0)
                continue
            steps, t = 1, inverse(s)
            while t < 0:
                steps += 1
                t = inverse(t)
            keys[s] = (0, t, steps)
    return keys


def canonicalize(d: Diagram) -> Diagram:
    """Unique representative of d's cell.

    Only the parametrized unenumerated flavor has a nontrivial equivalence
    (relabeling leaves); leaves are renamed l1..lm in the order of their position
    behind the ground symbols of λ, leaf fixed points last by foot-point.
    """
    if d.flavor is not Flavor.PAR_UNEN:
        return d
    keys = _leaf_keys(d)
    order = sorted(keys, key=lambda s: (keys[s], symbol_key(s)))
    rename = {old: -(k + 1) for k, old in enumerate(order)}
    if all(old == new for old, new in rename.items()):
        return d
    return d.relabel_leaves(rename)


def orbit_representative(d: Diagram, max_leaves: int = 8) -> Diagram:
    """Brute-force canonical form of a parametrized unenumerated cell.

    Minimizes over all leaf relabelings; slow, but independent of ``canonicalize``.

    Raises:
        PermutationError: For more than ``max_leaves`` leaves.
    """
    if d.flavor is not Flavor.PAR_UNEN:
        return d
    _, sigma = orbit_canonical(d.lam, [s.boundary for s in d.surfaces], max_leaves)
    return d.relabel_leaves({sigma(x): x for x in d.leaves})
