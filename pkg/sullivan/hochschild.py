"""
Hochschild operations of Sullivan diagrams on A = Z[x]/(x²).

A = Z⟨1, x⟩ is the Frobenius algebra with product x·x = 0, coproduct
ν(1) = 1⊗x + x⊗1, ν(x) = x⊗x, unit 1 and counit ε(1) = 0, ε(x) = 1. Arithmetic
treats x as an even element, so no Koszul signs occur.

A parametrized diagram whose ghost surfaces are disks acts on degree-0
Hochschild chains: each ghost multiplies the inputs at its leaves and
comultiplies the product onto the ground positions on its boundary. The result
is a Hochschild chain of length n+1, reduced to normalized chains A ⊗ Ā^{⊗n}
unless asked otherwise.
"""

import itertools
import logging
import re
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .chain import Chain
from .complex import ChainComplex, SparseMatrix
from .diagram import Diagram
from .exceptions import UnsupportedDiagramError
from .homology import HomologyGroup, homology

logger = logging.getLogger(__name__)

ONE = 0
X = 1
LETTERS = {ONE: "1", X: "x"}

Word = Tuple[int, ...]

SHAPES = ("left", "right", "balanced")


class Tensor:
    """Integer combination of words over the basis {1, x}, all of one length."""

    __slots__ = ("_terms", "length")

    def __init__(self, terms: Optional[Mapping[Word, int]] = None, length: Optional[int] = None):
        cleaned: Dict[Word, int] = {}
        for word, c in (terms or {}).items():
            cleaned[tuple(word)] = cleaned.get(tuple(word), 0) + int(c)
        self._terms = {w: c for w, c in cleaned.items() if c}
        lengths = {len(w) for w in self._terms}
        if len(lengths) > 1:
            raise ValueError(f"tensor mixes lengths {sorted(lengths)}")
        self.length = lengths.pop() if lengths else length

    @classmethod
    def monomial(cls, letters: str, coefficient: int = 1) -> "Tensor":
        """Tensor from a compact word such as ``"1xxx"``."""
        try:
            word = tuple({"1": ONE, "x": X}[ch] for ch in letters)
        except KeyError as e:
            raise ValueError(f"unknown letter {e} in '{letters}'") from None
        return cls({word: coefficient})

    @classmethod
    def zero(cls, length: Optional[int] = None) -> "Tensor":
        return cls({}, length)

    @classmethod
    def parse(cls, text: str) -> "Tensor":
        """Parse a printed tensor like ``"2 1⊗x - x⊗1"``."""
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms: Dict[Word, int] = {}
        for raw in re.sub(r"\s*-\s*", " + -", text).split("+"):
            raw = raw.strip()
            if not raw:
                continue
            match = re.fullmatch(r"(-?\d*)\s*-?\s*([1x](?:\s*⊗\s*[1x])*)", raw)
            if not match:
                raise ValueError(f"cannot parse tensor term '{raw}'")
            sign_text = match.group(1)
            coefficient = -1 if sign_text == "-" else int(sign_text) if sign_text else 1
            word = tuple(ONE if ch == "1" else X for ch in re.findall(r"[1x]", match.group(2)))
            terms[word] = terms.get(word, 0) + coefficient
        return cls(terms)

    def items(self) -> Iterable[Tuple[Word, int]]:
        return sorted(self._terms.items())

    def coefficient(self, word: Word) -> int:
        return self._terms.get(tuple(word), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "Tensor") -> "Tensor":
        terms = dict(self._terms)
        for w, c in other._terms.items():
            terms[w] = terms.get(w, 0) + c
        return Tensor(terms, self.length if self.length is not None else other.length)

    def __neg__(self) -> "Tensor":
        return Tensor({w: -c for w, c in self._terms.items()}, self.length)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def __mul__(self, scalar: int) -> "Tensor":
        return Tensor({w: scalar * c for w, c in self._terms.items()}, self.length)

    __rmul__ = __mul__

    def __matmul__(self, other: "Tensor") -> "Tensor":
        """Tensor product."""
        terms: Dict[Word, int] = {}
        for (a, c), (b, d) in itertools.product(self._terms.items(), other._terms.items()):
            terms[a + b] = terms.get(a + b, 0) + c * d
        length = None if self.length is None or other.length is None else self.length + other.length
        return Tensor(terms, length)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def equals_up_to_sign(self, other: "Tensor") -> bool:
        return self == other or self == -other

    def normalized(self) -> "Tensor":
        """Image in the normalized complex: words with a unit after position 0 vanish."""
        return Tensor({w: c for w, c in self._terms.items() if ONE not in w[1:]}, self.length)

    def x_degree(self) -> Optional[int]:
        """Number of x factors, if all words agree on it."""
        degrees = {sum(w) for w in self._terms}
        return degrees.pop() if len(degrees) == 1 else None

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for word, c in self.items():
            body = "⊗".join(LETTERS[a] for a in word)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c} {body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Tensor('{self.to_text()}')"


FrobElement = Tensor


class FrobeniusAlgebra:
    """The Frobenius algebra Z[x]/(x²) with the structure maps as tensor operations.

    Each structure map acts on chosen positions of a tensor; the others pass
    through unchanged.
    """

    name = "Z[x]/(x^2)"

    def one(self) -> Tensor:
        return Tensor({(ONE,): 1})

    def x(self) -> Tensor:
        return Tensor({(X,): 1})

    def element(self, a: int = 0, b: int = 0) -> Tensor:
        """a·1 + b·x."""
        return Tensor({(ONE,): a, (X,): b}, 1)

    @staticmethod
    def _product(a: int, b: int) -> Optional[int]:
        return None if a == X and b == X else a + b

    @staticmethod
    def _coproduct(a: int) -> List[Tuple[int, int]]:
        return [(X, X)] if a == X else [(ONE, X), (X, ONE)]

    def mult(self, t: Tensor, i: int = 0) -> Tensor:
        """Multiply the factors at positions i and i+1."""
        terms: Dict[Word, int] = {}
        for w, c in t.items():
            p = self._product(w[i], w[i + 1])
            if p is None:
                continue
            new = w[:i] + (p,) + w[i + 2 :]
            terms[new] = terms.get(new, 0) + c
        return Tensor(terms, t.length - 1 if t.length else None)

    def comult(self, t: Tensor, i: int = 0) -> Tensor:
        """Comultiply the factor at position i into positions i, i+1."""
        terms: Dict[Word, int] = {}
        for w, c in t.items():
            for a, b in self._coproduct(w[i]):
                new = w[:i] + (a, b) + w[i + 1 :]
                terms[new] = terms.get(new, 0) + c
        return Tensor(terms, t.length + 1 if t.length is not None else None)

    def unit(self, t: Tensor, i: int = 0) -> Tensor:
        """Insert the unit at position i."""
        return Tensor({w[:i] + (ONE,) + w[i:]: c for w, c in t.items()}, t.length + 1 if t.length is not None else None)

    def counit(self, t: Tensor, i: int = 0) -> Tensor:
        """Apply ε at position i."""
        return Tensor({w[:i] + w[i + 1 :]: c for w, c in t.items() if w[i] == X}, t.length - 1 if t.length else None)

    def twist(self, t: Tensor, i: int = 0) -> Tensor:
        """Swap the factors at positions i and i+1."""
        return Tensor({w[:i] + (w[i + 1], w[i]) + w[i + 2 :]: c for w, c in t.items()}, t.length)

    def handle(self, t: Tensor) -> Tensor:
        """H = μ∘ν on a single factor; H(1) = 2x, H(x) = 0."""
        return self.mult(self.comult(t, 0), 0)

    def product(self, elements: Sequence[Tensor], shape: str = "left") -> Tensor:
        """Product of single-factor elements along a binary tree of the given shape."""
        if shape not in SHAPES:
            raise ValueError(f"unknown tree shape '{shape}', expected one of {SHAPES}")
        if not elements:
            return self.one()
        if len(elements) == 1:
            return elements[0]
        if shape == "balanced":
            half = len(elements) // 2
            both = self.product(elements[:half], shape) @ self.product(elements[half:], shape)
            return self.mult(both, 0)
        t = elements[0]
        for e in elements[1:]:
            t = t @ e
        for _ in range(len(elements) - 1):
            t = self.mult(t, 0 if shape == "left" else t.length - 2)
        return t

    def coproduct(self, element: Tensor, outputs: int, shape: str = "left") -> Tensor:
        """Iterated coproduct ν^(q) of a single-factor element onto q outputs."""
        if shape not in SHAPES:
            raise ValueError(f"unknown tree shape '{shape}', expected one of {SHAPES}")
        if outputs < 1:
            raise ValueError("a coproduct needs at least one output")
        if outputs == 1:
            return element
        if shape == "balanced":
            half = outputs // 2
            split = self.comult(element, 0)
            return self._split_balanced(split, half, outputs - half)
        t = element
        for _ in range(outputs - 1):
            t = self.comult(t, 0 if shape == "left" else t.length - 1)
        return t

    def _split_balanced(self, pair: Tensor, left: int, right: int) -> Tensor:
        terms: Dict[Word, int] = {}
        for (a, b), c in pair.items():
            lhs = self.coproduct(Tensor({(a,): 1}), left, "balanced")
            rhs = self.coproduct(Tensor({(b,): 1}), right, "balanced")
            for w, d in (lhs @ rhs).items():
                terms[w] = terms.get(w, 0) + c * d
        return Tensor(terms, left + right)


def _check_disks(d: Diagram) -> None:
    if not d.flavor.parametrized:
        raise UnsupportedDiagramError(f"Hochschild evaluation needs a parametrized diagram, got {d.flavor.value}")
    for s in d.surfaces:
        if s.genus or s.punctures or len(s.boundary) != 1:
            raise UnsupportedDiagramError(f"ghost surface {s.to_text()} of {d} is not a disk")


def evaluate_diagram(
    d: Diagram,
    inputs: Sequence[Tensor],
    algebra: Optional[FrobeniusAlgebra] = None,
    shape: str = "left",
) -> Tensor:
    """Unnormalized Hochschild chain of length n+1 produced by one diagram.

    Raises:
        UnsupportedDiagramError: For ghost surfaces that are not disks or a wrong
            number of inputs.
    """
    algebra = algebra or FrobeniusAlgebra()
    _check_disks(d)
    if len(inputs) != len(d.leaves):
        raise UnsupportedDiagramError(f"{d} has {len(d.leaves)} leaves, got {len(inputs)} inputs")
    partial: Dict[Tuple[Tuple[int, int], ...], int] = {(): 1}
    for s in d.surfaces:
        (cycle,) = s.boundary
        leaves = [inputs[-x - 1] for x in cycle if x < 0]
        positions = [x for x in cycle if x >= 0]
        out = algebra.coproduct(algebra.product(leaves, shape), len(positions), shape)
        merged: Dict[Tuple[Tuple[int, int], ...], int] = {}
        for assignment, c in partial.items():
            for word, e in out.items():
                key = assignment + tuple(zip(positions, word))
                merged[key] = merged.get(key, 0) + c * e
        partial = {k: v for k, v in merged.items() if v}
    terms: Dict[Word, int] = {}
    for assignment, c in partial.items():
        letters = dict(assignment)
        word = tuple(letters[p] for p in range(d.n + 1))
        terms[word] = terms.get(word, 0) + c
    return Tensor(terms, d.n + 1)


def hochschild_eval(
    x: Union[Chain, Diagram],
    inputs: Sequence[Tensor],
    algebra: Optional[FrobeniusAlgebra] = None,
    shape: str = "left",
    normalized: bool = True,
) -> Tensor:
    """The operation of a chain of disk-ghost diagrams on degree-0 Hochschild chains.

    Args:
        x: Chain (or single diagram) of a parametrized flavor.
        inputs: One single-factor element per leaf, leaf l_j taking ``inputs[j-1]``.
        algebra: The Frobenius algebra; Z[x]/(x²) by default.
        shape: Tree shape used to resolve the products and coproducts of each ghost.
        normalized: Reduce to normalized Hochschild chains.

    Raises:
        UnsupportedDiagramError: If a ghost surface is not a disk.
    """
    chain = Chain.of(x) if isinstance(x, Diagram) else x
    total = Tensor.zero(None if chain.degree is None else chain.degree + 1)
    for d, c in chain.items():
        total = total + evaluate_diagram(d, inputs, algebra, shape) * c
    if normalized:
        total = total.normalized()
    logger.debug(f"Hochschild evaluation on {len(chain)} cells: {total.to_text()}")
    return total


def hochschild_homology(n: int, algebra: Optional[FrobeniusAlgebra] = None) -> Dict[int, HomologyGroup]:
    """HH_k(A, A) for k = 0..n from the standard Hochschild complex A^{⊗k+1}.

    b = Σ_i (−1)^i d_i with d_i multiplying the factors i and i+1 and d_k moving
    the last factor to the front and multiplying.
    """
    algebra = algebra or FrobeniusAlgebra()
    bases: List[List[Word]] = [list(itertools.product((ONE, X), repeat=k + 1)) for k in range(n + 2)]
    matrices: Dict[int, SparseMatrix] = {}
    for k in range(1, n + 2):
        index = {w: i for i, w in enumerate(bases[k - 1])}
        columns = []
        for word in bases[k]:
            column: Dict[int, int] = {}
            for i in range(k + 1):
                if i < k:
                    image = algebra.mult(Tensor({word: 1}), i)
                else:
                    image = algebra.mult(Tensor({(word[-1],) + word[:-1]: 1}), 0)
                for w, c in image.items():
                    row = index[w]
                    column[row] = column.get(row, 0) + (-1) ** i * c
            columns.append({r: v for r, v in column.items() if v})
        matrices[k] = SparseMatrix(len(bases[k - 1]), columns)
    groups = homology(ChainComplex(bases, matrices))
    return {k: groups[k] for k in range(n + 1)}
