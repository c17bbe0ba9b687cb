"""
Finite integer combinations of cells.

A ``Chain`` is a sparse map from canonical diagrams to non-zero integer
coefficients, all of one degree. Chains are immutable; arithmetic returns new
chains.
"""

import logging
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .exceptions import DegreeError

if TYPE_CHECKING:
    from .diagram import Diagram

logger = logging.getLogger(__name__)


class Chain:
    """Sparse integer combination of diagrams of a single degree."""

    __slots__ = ("_terms", "degree")

    def __init__(self, terms: Optional[Mapping["Diagram", int]] = None, degree: Optional[int] = None):
        cleaned: Dict["Diagram", int] = {}
        for cell, coefficient in (terms or {}).items():
            if coefficient:
                cleaned[cell] = cleaned.get(cell, 0) + int(coefficient)
        self._terms = {cell: c for cell, c in cleaned.items() if c}
        degrees = {cell.degree for cell in self._terms}
        if len(degrees) > 1:
            raise DegreeError(f"chain mixes degrees {sorted(degrees)}")
        if degrees:
            (found,) = degrees
            if degree is not None and degree != found:
                raise DegreeError(f"chain declared in degree {degree} holds cells of degree {found}")
            degree = found
        self.degree = degree

    @classmethod
    def of(cls, cell: "Diagram", coefficient: int = 1) -> "Chain":
        return cls({cell: coefficient}, degree=cell.degree)

    @classmethod
    def zero(cls, degree: Optional[int] = None) -> "Chain":
        return cls({}, degree=degree)

    @classmethod
    def sum(cls, terms: Iterable[Tuple[int, "Diagram"]], degree: Optional[int] = None) -> "Chain":
        """Build a chain from (coefficient, cell) pairs, combining like terms."""
        acc: Dict["Diagram", int] = {}
        for coefficient, cell in terms:
            acc[cell] = acc.get(cell, 0) + coefficient
        return cls(acc, degree=degree)

    # -- container protocol ------------------------------------------------------

    def coefficient(self, cell: "Diagram") -> int:
        return self._terms.get(cell, 0)

    def support(self) -> Tuple["Diagram", ...]:
        """Cells with non-zero coefficient, sorted by canonical key."""
        return tuple(sorted(self._terms, key=lambda d: d.key()))

    def items(self) -> Iterator[Tuple["Diagram", int]]:
        for cell in self.support():
            yield cell, self._terms[cell]

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator["Diagram"]:
        return iter(self.support())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic -----------------------------------------------------------------

    def _check(self, other: "Chain") -> Optional[int]:
        if self.degree is not None and other.degree is not None and self.degree != other.degree:
            raise DegreeError(f"cannot add chains of degree {self.degree} and {other.degree}")
        return self.degree if self.degree is not None else other.degree

    def __add__(self, other: "Chain") -> "Chain":
        degree = self._check(other)
        terms = dict(self._terms)
        for cell, c in other._terms.items():
            terms[cell] = terms.get(cell, 0) + c
        return Chain(terms, degree=degree)

    def __neg__(self) -> "Chain":
        return Chain({cell: -c for cell, c in self._terms.items()}, degree=self.degree)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, scalar: int) -> "Chain":
        return Chain({cell: scalar * c for cell, c in self._terms.items()}, degree=self.degree)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Chain):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- topology ---------------------------------------------------------------------

    def boundary(self) -> "Chain":
        """Linear extension of ``diagram.boundary``."""
        from .diagram import boundary

        acc: Dict["Diagram", int] = {}
        for cell, c in self._terms.items():
            for face_cell, f in boundary(cell).items():
                acc[face_cell] = acc.get(face_cell, 0) + c * f
        degree = self.degree - 1 if self.degree is not None else None
        return Chain(acc, degree=degree)

    def map(self, fn) -> "Chain":
        """Apply a linear map given on cells (``fn(cell) -> Chain``)."""
        acc: Dict["Diagram", int] = {}
        degree = None
        for cell, c in self._terms.items():
            image = fn(cell)
            degree = image.degree if image.degree is not None else degree
            for target, f in image.items():
                acc[target] = acc.get(target, 0) + c * f
        return Chain(acc, degree=degree)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for cell, c in self.items():
            parts.append(f"{c:+d} [{cell.to_text()}]")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Chain(degree={self.degree}, terms={len(self._terms)})"
