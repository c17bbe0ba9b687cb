"""
The discrete Morse flows on Sullivan diagram complexes.

Type 0 pairs cells by collapsing a chamber of the fan at a surface's foot-point
(unenumerated flavors) or by the sentence calculus (enumerated flavors). Type 1
extends the flow on the remaining cells by fences at a surface's endpoint.
``classify`` decides the status of a single cell; the matching itself is
assembled in ``morse.py``.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .diagram import Diagram, degenerate_count, fan_length
from .models import CellStatus
from .sentences import decomposition, sentence

logger = logging.getLogger(__name__)


# -- fans and fences ------------------------------------------------------------------


def fan_profile(d: Diagram) -> List[Tuple[int, int]]:
    """(foot-point, length of the fan it starts with) for every surface."""
    return [(s.foot, fan_length(d, s.foot)) for s in d.surfaces if s.foot is not None]


def surface_degenerate_count(d: Diagram, k: int) -> int:
    """Punctures, or leaf fixed points for parametrized flavors, of surface k."""
    surface = d.surfaces[k]
    if d.flavor.parametrized:
        return len(surface.leaf_fixed_points)
    return surface.punctures


def fence_length(d: Diagram, k: int) -> int:
    """Length of the fence surface k ends with (0 for the surface at position 0).

    Counts the λ-fixed ground points of the surface going down from its endpoint;
    the point below them must be attached to the surface as well, otherwise the
    lowest fixed point serves as that attaching point.
    """
    surface = d.surfaces[k]
    if not surface.foot:
        return 0
    positions = set(surface.ground_positions)
    end = surface.end
    run = 0
    while end - run in positions and d.lam(end - run) == end - run:
        run += 1
    if end - run in positions:
        return run
    return max(run - 1, 0)


def fence_profile(d: Diagram) -> List[Tuple[int, int]]:
    """(endpoint, fence length) for every surface not attached at 0."""
    return [(s.end, fence_length(d, k)) for k, s in enumerate(d.surfaces) if s.foot]


# -- degree of degeneracy -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class DegenTuple:
    """(dim, s, m, −l, g, −L), compared lexicographically."""

    dim: int
    surfaces: int
    degenerate: int
    neg_fans: int
    reduced_genus: int = 0
    neg_fences: int = 0

    def as_tuple(self) -> Tuple[int, ...]:
        return (self.dim, self.surfaces, self.degenerate, self.neg_fans, self.reduced_genus, self.neg_fences)


def degeneracy(d: Diagram) -> DegenTuple:
    return DegenTuple(
        dim=d.n,
        surfaces=len(d.surfaces),
        degenerate=degenerate_count(d),
        neg_fans=-sum(length for _, length in fan_profile(d)),
        reduced_genus=sum(s.genus for s in d.surfaces if s.foot),
        neg_fences=-sum(length for _, length in fence_profile(d)),
    )


# -- classification ----------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    """Status of a cell under the flow.

    Attributes:
        status: Essential, collapsible or redundant.
        kind: 0 for fans or sentences, 1 for fences, None for essential cells.
        index: Face index of the redundant partner for collapsible cells; coface index
            of the collapsible partner for redundant cells when the rule fixes it.
    """

    status: CellStatus
    kind: Optional[int] = None
    index: Optional[int] = None

    @property
    def is_essential(self) -> bool:
        return self.status is CellStatus.ESSENTIAL


ESSENTIAL = Classification(CellStatus.ESSENTIAL)


def _classify_fans(d: Diagram) -> Optional[Classification]:
    for k, surface in enumerate(d.surfaces):
        foot = surface.foot
        if foot is None:
            continue
        if fan_length(d, foot) % 2 == 1:
            return Classification(CellStatus.COLLAPSIBLE, 0, foot)
        if surface_degenerate_count(d, k) > 0:
            return Classification(CellStatus.REDUNDANT, 0, foot)
    return None


def _classify_sentence(d: Diagram) -> Optional[Classification]:
    t = sentence(d)
    found = decomposition(t.words, t.n)
    if found is not None:
        j, _ = found
        return Classification(CellStatus.COLLAPSIBLE, 0, t.letter_positions[j - 1])
    if t.free_word is not None:
        return Classification(CellStatus.REDUNDANT, 0, None)
    return None


def _classify_fences(d: Diagram) -> Optional[Classification]:
    ends = sorted(((s.end, k) for k, s in enumerate(d.surfaces) if s.foot), reverse=True)
    for end, k in ends:
        if fence_length(d, k) % 2 == 1:
            return Classification(CellStatus.COLLAPSIBLE, 1, end - 1)
        if d.surfaces[k].genus > 0:
            return Classification(CellStatus.REDUNDANT, 1, end)
    return None


def classify(d: Diagram) -> Classification:
    """Status of a cell: type 0 first, then type 1.

    A cell that would be collapsible in degree 0 has no face to pair with and is
    essential.
    """
    result = _classify_sentence(d) if d.flavor.enumerated else _classify_fans(d)
    if result is None:
        result = _classify_fences(d)
    if result is None:
        return ESSENTIAL
    if result.status is CellStatus.COLLAPSIBLE and d.n == 0:
        return ESSENTIAL
    return result

