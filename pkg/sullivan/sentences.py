"""
Sentences: the combinatorics behind the flow on enumerated flavors.

A word is a sequence of letters 1, 2, ... and the placeholder ε. Words are read
from right to left, so internally a word is stored in *reading order*: the
letter at the foot-point comes first. A sentence holds one word per ghost
surface, in foot-point order. The printed form reverses both, so the sentence
of a two-surface diagram prints as ``(), (3 4)`` with the word of the surface
at position 0 last.

The sets A_n, I_n, J_n, B_n and the insertion maps f_n^i are computed lazily
and memoized; ``SentenceUniverse`` tabulates them for small n and k.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .diagram import fan_length
from .exceptions import BudgetExceededError, UnsupportedDiagramError
from .models import Flavor

logger = logging.getLogger(__name__)

EPS = 0

Word = Tuple[int, ...]
Words = Tuple[Word, ...]


def reduce_word(word: Sequence[int]) -> Word:
    """Fuse consecutive placeholders."""
    out: List[int] = []
    for x in word:
        if x == EPS and out and out[-1] == EPS:
            continue
        out.append(x)
    return tuple(out)


def word_key(word: Word) -> Tuple[float, ...]:
    """Order key of a word: letters compared in reading order, ε above every letter."""
    return tuple(math.inf if x == EPS else x for x in word)


def letters(words: Words) -> List[int]:
    return sorted(x for w in words for x in w if x != EPS)


def alpha(words: Words, j: int) -> Words:
    """α_{j,n}: replace letters larger than j by ε."""
    return tuple(reduce_word(EPS if x > j else x for x in w) for w in words)


def insert_letter(words: Words, i: int, letter: int) -> Words:
    """Place ``letter`` into word i so that the word gets minimal order type."""
    word = words[i]
    candidates = [reduce_word(word[:p] + (letter,) + word[p:]) for p in range(len(word) + 1)]
    best = min(candidates, key=word_key)
    return words[:i] + (best,) + words[i + 1 :]


def remove_letter(words: Words, letter: int) -> Tuple[Words, int]:
    """Delete ``letter`` from its word.

    Returns:
        The reduced sentence and the index of the word that held the letter.
    """
    for i, word in enumerate(words):
        if letter in word:
            rest = reduce_word(x for x in word if x != letter)
            return words[:i] + (rest,) + words[i + 1 :], i
    raise ValueError(f"letter {letter} does not occur in {format_words(words)}")


def f_map(words: Words, i: int, n: int) -> Words:
    """f_n^i: insert the letter n+1 into word i at the minimal position."""
    return insert_letter(words, i, n + 1)


@lru_cache(maxsize=None)
def in_I(words: Words, n: int) -> bool:
    """Membership in I_n = ⊔_i Im(f_{n-1}^i)."""
    if n < 1:
        return False
    rest, i = remove_letter(words, n)
    if in_J(rest, n - 1):
        return False
    return f_map(rest, i, n - 1) == words


@lru_cache(maxsize=None)
def in_J(words: Words, n: int) -> bool:
    """Membership in J_n = ∪_j α_{j,n}⁻¹(I_j)."""
    return decomposition(words, n) is not None


def decomposition(words: Words, n: int) -> Optional[Tuple[int, int]]:
    """The unique (j, i) with α_{j,n}(T) ∈ Im(f_{j-1}^i), or None for T ∈ B_n."""
    for j in range(1, n + 1):
        truncated = alpha(words, j)
        if in_I(truncated, j):
            _, i = remove_letter(truncated, j)
            return j, i
    return None


def format_word(word: Word) -> str:
    return "(" + " ".join("ε" if x == EPS else str(x) for x in reversed(word)) + ")"


def format_words(words: Words) -> str:
    return ", ".join(format_word(w) for w in reversed(words))


def parse_words(text: str) -> Words:
    """Parse the printed form, e.g. ``"(), (ε 1 ε)"``; 'e' is accepted for ε."""
    words = []
    for group in text.split(")"):
        group = group.strip().lstrip(",").strip()
        if not group:
            continue
        if not group.startswith("("):
            raise ValueError(f"malformed sentence '{text}'")
        tokens = group[1:].split()
        word = [EPS if t in ("ε", "e", "eps") else int(t) for t in tokens]
        words.append(reduce_word(reversed(word)))
    return tuple(reversed(words))


# -- universes ----------------------------------------------------------------------


def universe_size(n: int, k: int) -> int:
    """|A_n| for k words: arrangements of n letters times ε choices in n+k gaps."""
    arrangements = math.factorial(n) * math.comb(n + k - 1, k - 1)
    return arrangements * 2 ** (n + k)


def all_sentences(n: int, k: int) -> List[Words]:
    """A_n for k words, sorted."""
    found = set()
    for order in itertools.permutations(range(1, n + 1)):
        for cuts in itertools.combinations_with_replacement(range(n + 1), k - 1):
            bounds = (0,) + cuts + (n,)
            bare = [order[bounds[w] : bounds[w + 1]] for w in range(k)]
            for gaps in itertools.product((False, True), repeat=n + k):
                words, g = [], 0
                for w in bare:
                    word: List[int] = []
                    for x in w:
                        if gaps[g]:
                            word.append(EPS)
                        word.append(x)
                        g += 1
                    if gaps[g]:
                        word.append(EPS)
                    g += 1
                    words.append(reduce_word(word))
                found.add(tuple(words))
    return sorted(found, key=lambda ws: tuple(word_key(w) for w in ws))


class SentenceUniverse:
    """Tables of A_n, I_n, J_n, B_n and f_n^i for fixed n and k.

    Attributes:
        A, I, J, B: Lists of sentences.
        f: Map (sentence in B_n, word index) -> sentence in A_{n+1}.
    """

    def __init__(self, n: int, k: int, budget: Optional[int] = 1_000_000):
        if n < 0 or k < 1:
            raise ValueError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
        size = universe_size(n, k)
        if budget is not None and size > budget:
            logger.error(f"Sentence universe n={n} k={k} has {size} elements, budget {budget}")
            raise BudgetExceededError(f"|A_{n}| = {size} exceeds the budget {budget}")
        self.n = n
        self.k = k
        self.A = all_sentences(n, k)
        self.I = [t for t in self.A if in_I(t, n)]
        self.J = [t for t in self.A if in_J(t, n)]
        self.B = [t for t in self.A if not in_J(t, n)]
        self.f: Dict[Tuple[Words, int], Words] = {(t, i): f_map(t, i, n) for t in self.B for i in range(k)}
        logger.debug(f"Universe n={n} k={k}: |A|={len(self.A)} |I|={len(self.I)} |J|={len(self.J)}")

    def strata(self) -> Dict[Tuple[int, int], List[Words]]:
        """J_n split into the pieces α_{j,n}⁻¹(Im f_{j-1}^i), keyed by (j, i)."""
        pieces: Dict[Tuple[int, int], List[Words]] = {}
        for t in self.J:
            pieces.setdefault(decomposition(t, self.n), []).append(t)
        return pieces


def sentence_universe(n: int, k: int, budget: Optional[int] = 1_000_000) -> SentenceUniverse:
    return SentenceUniverse(n, k, budget)


# -- sentences of diagrams ------------------------------------------------------------


@dataclass(frozen=True)
class Sentence:
    """Normalized sentence of an enumerated cell.

    Attributes:
        words: One reduced word per surface, in foot-point order, reading order inside.
        n: Number of letters; they are exactly 1..n.
        free_word: Surface index carrying the free letter n+1, or None without free letters.
        letter_positions: Ground position of the chamber of letter j at index j-1.
    """

    words: Words
    n: int
    free_word: Optional[int] = None
    letter_positions: Tuple[int, ...] = ()

    @property
    def free_letter(self) -> Optional[int]:
        return None if self.free_word is None else self.n + 1

    def to_text(self) -> str:
        return format_words(self.words)

    def __str__(self) -> str:
        return self.to_text()


def unnormalized_sentence(d) -> Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], Dict[int, int]]:
    """Raw words and free letters of an enumerated cell.

    Returns:
        ``(words, free)``: per surface the (label, position) pairs of its initial fan
        in reading order, and a map from each free letter to its surface index.

    Raises:
        UnsupportedDiagramError: For unenumerated flavors.
    """
    if not d.flavor.enumerated:
        raise UnsupportedDiagramError(f"sentences are defined for enumerated flavors, not {d.flavor.value}")
    words = []
    free: Dict[int, int] = {}
    for k, surface in enumerate(d.surfaces):
        foot = surface.foot
        length = fan_length(d, foot) if foot is not None else 0
        chambers = []
        for p in range(foot or 0, (foot or 0) + length):
            label = d.rho_label_of(p) if d.flavor is Flavor.UNPAR_ENUM else -d.rho(p)
            chambers.append((label, p))
        words.append(tuple(chambers))
        if d.flavor is Flavor.UNPAR_ENUM:
            degenerate = surface.puncture_labels
        else:
            degenerate = tuple(-x for x in surface.leaf_fixed_points)
        for z in degenerate:
            free[z] = k
    return tuple(words), free


def normalize(raw_words, free: Dict[int, int]) -> Sentence:
    """Keep letters below the smallest free letter, turn the rest into ε, renumber."""
    used = sorted(label for w in raw_words for label, _ in w)
    position = {label: p for w in raw_words for label, p in w}
    if free:
        z0 = min(free)
        kept = [x for x in used if x < z0]
        free_word: Optional[int] = free[z0]
    else:
        kept = used
        free_word = None
    rename = {x: r + 1 for r, x in enumerate(kept)}
    words = tuple(reduce_word(rename.get(label, EPS) for label, _ in w) for w in raw_words)
    return Sentence(words, len(kept), free_word, tuple(position[x] for x in kept))


def sentence(d) -> Sentence:
    """Normalized sentence of an enumerated cell."""
    raw_words, free = unnormalized_sentence(d)
    return normalize(raw_words, free)
