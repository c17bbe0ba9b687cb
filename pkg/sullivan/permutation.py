"""
Permutations on mixed ground and leaf symbols.

Symbols are plain integers: the ground symbol ``k`` is the integer ``k >= 0`` and
the leaf ``l_j`` is the integer ``-j``. The total order used for every canonical
form puts all ground symbols first (ascending), then all leaves (ascending by
index).

Provides:
- ``Permutation``, an immutable bijection with a canonical cycle form.
- ``compose``, ``rho_from_lambda``, ``face_D``, ``conjugate`` and ``orbit_canonical``.
- Parsing and serializing the cycle text form, e.g. ``(0 l2)(1 3)(4 l5)(2 6 5)``.
"""

import itertools
import logging
import re
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exceptions import PermutationError

logger = logging.getLogger(__name__)

Symbol = int
Cycle = Tuple[Symbol, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def leaf(j: int) -> Symbol:
    """Return the symbol of leaf ``l_j`` (j >= 1)."""
    if j < 1:
        raise PermutationError(f"leaf index must be positive, got {j}")
    return -j


def is_leaf(s: Symbol) -> bool:
    return s < 0


def is_ground(s: Symbol) -> bool:
    return s >= 0


def symbol_key(s: Symbol) -> Tuple[bool, int]:
    """Sort key realizing the order Ground(0) < ... < Ground(n) < Leaf(1) < ..."""
    return (s < 0, abs(s))


def format_symbol(s: Symbol) -> str:
    return f"l{-s}" if s < 0 else str(s)


def parse_symbol(token: str) -> Symbol:
    """Parse ``"3"`` or ``"l3"`` into a symbol."""
    token = token.strip()
    try:
        if token.startswith("l"):
            return leaf(int(token[1:]))
        value = int(token)
    except ValueError as e:
        raise PermutationError(f"cannot parse symbol '{token}'") from e
    if value < 0:
        raise PermutationError(f"ground symbols are non-negative, got '{token}'")
    return value


def canonical_cycle(cycle: Sequence[Symbol]) -> Cycle:
    """Rotate a cycle so that it starts at its minimal symbol."""
    if not cycle:
        raise PermutationError("empty cycle")
    start = min(range(len(cycle)), key=lambda k: symbol_key(cycle[k]))
    return tuple(cycle[start:]) + tuple(cycle[:start])


def cycle_key(cycle: Cycle) -> Tuple[Tuple[bool, int], ...]:
    return tuple(symbol_key(s) for s in cycle)


def format_cycles(cycles: Iterable[Cycle]) -> str:
    return "".join("(" + " ".join(format_symbol(s) for s in c) + ")" for c in cycles)


def parse_cycles(text: str) -> List[Cycle]:
    """Parse the parenthesized cycle notation into a list of cycles.

    Args:
        text: Cycle text such as ``"(0 l2)(1 3)"``. Whitespace is ignored.

    Returns:
        The cycles in the order they appear.

    Raises:
        PermutationError: On malformed text.
    """
    stripped = text.strip()
    if not stripped:
        return []
    cycles = []
    position = 0
    for match in _CYCLE_RE.finditer(stripped):
        if stripped[position:match.start()].strip():
            raise PermutationError(f"unexpected text in cycle notation: '{text}'")
        tokens = match.group(1).split()
        if not tokens:
            raise PermutationError(f"empty cycle in '{text}'")
        cycles.append(tuple(parse_symbol(t) for t in tokens))
        position = match.end()
    if stripped[position:].strip():
        raise PermutationError(f"unexpected text in cycle notation: '{text}'")
    return cycles


class Permutation:
    """An immutable bijection of a finite symbol set.

    Equality and hashing go through the canonical cycle form, so two permutations
    are equal exactly when they have the same domain and the same map.
    """

    __slots__ = ("_map", "_cycles", "_hash")

    def __init__(self, mapping: Mapping[Symbol, Symbol]):
        self._map: Dict[Symbol, Symbol] = dict(mapping)
        if set(self._map.values()) != set(self._map.keys()):
            raise PermutationError(f"mapping is not a bijection of its domain: {mapping}")
        self._cycles: Optional[Tuple[Cycle, ...]] = None
        self._hash: Optional[int] = None

    @classmethod
    def from_cycles(
        cls, cycles: Iterable[Sequence[Symbol]], domain: Optional[Iterable[Symbol]] = None
    ) -> "Permutation":
        """Build a permutation from cycles; symbols of ``domain`` not listed are fixed."""
        mapping: Dict[Symbol, Symbol] = {}
        for cycle in cycles:
            for k, s in enumerate(cycle):
                if s in mapping:
                    raise PermutationError(f"symbol {format_symbol(s)} occurs twice")
                mapping[s] = cycle[(k + 1) % len(cycle)]
        if domain is not None:
            for s in domain:
                mapping.setdefault(s, s)
        return cls(mapping)

    @classmethod
    def identity(cls, domain: Iterable[Symbol]) -> "Permutation":
        return cls({s: s for s in domain})

    @classmethod
    def parse(cls, text: str, domain: Optional[Iterable[Symbol]] = None) -> "Permutation":
        """Parse cycle notation; see ``parse_cycles``."""
        return cls.from_cycles(parse_cycles(text), domain)

    @property
    def domain(self) -> FrozenSet[Symbol]:
        return frozenset(self._map)

    @property
    def leaves(self) -> Tuple[Symbol, ...]:
        return tuple(sorted((s for s in self._map if s < 0), key=symbol_key))

    @property
    def ground(self) -> Tuple[Symbol, ...]:
        return tuple(sorted(s for s in self._map if s >= 0))

    def __call__(self, s: Symbol) -> Symbol:
        try:
            return self._map[s]
        except KeyError:
            raise PermutationError(f"symbol {format_symbol(s)} not in domain") from None

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, s: Symbol) -> bool:
        return s in self._map

    def items(self) -> Iterator[Tuple[Symbol, Symbol]]:
        return iter(self._map.items())

    def cycles(self) -> Tuple[Cycle, ...]:
        """Canonical cycle form, fixed points included."""
        if self._cycles is None:
            seen = set()
            found = []
            for s in sorted(self._map, key=symbol_key):
                if s in seen:
                    continue
                cycle = [s]
                seen.add(s)
                t = self._map[s]
                while t != s:
                    cycle.append(t)
                    seen.add(t)
                    t = self._map[t]
                found.append(tuple(cycle))
            self._cycles = tuple(found)
        return self._cycles

    def cycle_of(self, s: Symbol) -> Cycle:
        for cycle in self.cycles():
            if s in cycle:
                return cycle
        raise PermutationError(f"symbol {format_symbol(s)} not in domain")

    def cycle_index(self) -> Dict[Symbol, int]:
        """Map each symbol to the index of its cycle in ``cycles()``."""
        return {s: k for k, cycle in enumerate(self.cycles()) for s in cycle}

    def inverse(self) -> "Permutation":
        return Permutation({v: k for k, v in self._map.items()})

    def is_identity(self) -> bool:
        return all(k == v for k, v in self._map.items())

    def fixed_points(self) -> Tuple[Symbol, ...]:
        return tuple(c[0] for c in self.cycles() if len(c) == 1)

    def key(self) -> Tuple[Tuple[Tuple[bool, int], ...], ...]:
        return tuple(cycle_key(c) for c in self.cycles())

    def to_text(self, omit_ground_fixed: bool = False) -> str:
        cycles = self.cycles()
        if omit_ground_fixed:
            cycles = tuple(c for c in cycles if len(c) > 1 or c[0] < 0)
        return format_cycles(cycles)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.cycles())
        return self._hash

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Permutation('{self.to_text()}')"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return p∘q, i.e. ``x -> p(q(x))``.

    Raises:
        PermutationError: If the domains differ.
    """
    if p.domain != q.domain:
        raise PermutationError("cannot compose permutations with different domains")
    return Permutation({x: p(y) for x, y in q.items()})


def long_cycle(n: int, leaves: Iterable[Symbol] = ()) -> Permutation:
    """The cycle (0 1 ... n) on {0..n}, fixing the given leaves."""
    mapping = {k: (k + 1) % (n + 1) for k in range(n + 1)}
    for s in leaves:
        mapping[s] = s
    return Permutation(mapping)


def rho_from_lambda(lam: Permutation, n: int) -> Permutation:
    """Non-degenerate boundary ρ = λ⁻¹∘(0 1 … n).

    Raises:
        PermutationError: If the ground symbols of λ are not exactly {0..n}.
    """
    if lam.ground != tuple(range(n + 1)):
        raise PermutationError(f"ground symbols of {lam} do not match n={n}")
    return compose(lam.inverse(), long_cycle(n, lam.leaves))


def face_D(i: int, alpha: Permutation) -> Permutation:
    """Remove the ground symbol ``i`` from its cycle and renumber the ground symbols above it.

    Args:
        i: Ground symbol to delete, 0 <= i <= n.
        alpha: Permutation of {0..n} ∪ L with n >= 1.

    Returns:
        The permutation D_i(α) of {0..n-1} ∪ L.
    """
    ground = alpha.ground
    n = len(ground) - 1
    if ground != tuple(range(n + 1)):
        raise PermutationError(f"ground symbols of {alpha} are not consecutive")
    if n < 1:
        raise PermutationError("face_D needs at least two ground symbols")
    if not 0 <= i <= n:
        raise PermutationError(f"face index {i} out of range 0..{n}")

    def shift(s: Symbol) -> Symbol:
        return s - 1 if s > i else s

    mapping = {}
    for x, y in alpha.items():
        if x == i:
            continue
        if y == i:
            y = alpha(i)
        mapping[shift(x)] = shift(y)
    return Permutation(mapping)


def conjugate(alpha: Permutation, sigma: Permutation) -> Permutation:
    """Leaf conjugation c_σ(α) = σ⁻¹∘α∘σ.

    Raises:
        PermutationError: If σ moves a ground symbol or a symbol outside α's domain.
    """
    for x, y in sigma.items():
        if x >= 0 and x != y:
            raise PermutationError(f"conjugating permutation moves ground symbol {x}")
        if x != y and x not in alpha:
            raise PermutationError(f"conjugating permutation moves {format_symbol(x)} outside the domain")

    def s(x: Symbol) -> Symbol:
        return sigma(x) if x in sigma else x

    inverse = sigma.inverse()

    def s_inv(x: Symbol) -> Symbol:
        return inverse(x) if x in inverse else x

    return Permutation({x: s_inv(alpha(s(x))) for x in alpha.domain})


def relabel_cycles(cycles: Iterable[Sequence[Symbol]], rename: Mapping[Symbol, Symbol]) -> Tuple[Cycle, ...]:
    """Rename symbols of each cycle and return the cycles in canonical order."""
    renamed = [canonical_cycle([rename.get(s, s) for s in c]) for c in cycles]
    return tuple(sorted(renamed, key=cycle_key))


def orbit_canonical(
    alpha: Permutation,
    payload: Sequence[Iterable[Sequence[Symbol]]] = (),
    max_leaves: int = 8,
) -> Tuple[Permutation, Permutation]:
    """Lexicographically minimal representative of the Symm(L)-orbit of (α, payload).

    Brute force over all leaf permutations σ. The payload is a sequence of cycle
    groups (for example the boundary cycles of each ghost surface); each group is
    relabeled along with α and takes part in the comparison.

    Args:
        alpha: Permutation whose leaves are acted on.
        payload: Extra cycle groups relabeled with α.
        max_leaves: Refuse orbits over more leaves than this.

    Returns:
        Tuple (c_σ(α), σ) for the minimizing σ.

    Raises:
        PermutationError: If α has more than ``max_leaves`` leaves.
    """
    leaves = alpha.leaves
    if len(leaves) > max_leaves:
        raise PermutationError(
            f"orbit over {len(leaves)} leaves exceeds the brute-force bound {max_leaves}"
        )
    best_key = None
    best: Optional[Tuple[Permutation, Permutation]] = None
    for image in itertools.permutations(leaves):
        sigma = Permutation(dict(zip(leaves, image)))
        candidate = conjugate(alpha, sigma) if leaves else alpha
        rename = {v: k for k, v in zip(leaves, image)}
        key = (candidate.key(), tuple(tuple(cycle_key(c) for c in relabel_cycles(group, rename)) for group in payload))
        if best_key is None or key < best_key:
            best_key = key
            best = (candidate, sigma)
    assert best is not None
    return best
