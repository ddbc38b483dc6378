from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .poly import Word


@dataclass(frozen=True)
class MonomialOrder:
    """Weighted deg-lex order.

    Words are compared by weighted degree, then lexicographically letter by
    letter; ``precedence`` lists generator indices from largest to smallest.
    """

    weights: Tuple[int, ...]
    precedence: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.weights)
        if sorted(self.precedence) != list(range(n)):
            raise ValueError(f"precedence {self.precedence} is not a permutation of range({n})")
        score = [0] * n
        for rank, g in enumerate(self.precedence):
            score[g] = n - rank
        object.__setattr__(self, "_score", tuple(score))
        object.__setattr__(self, "_neg", tuple(-x for x in score))
        # with unit weights and index precedence the word itself sorts correctly
        object.__setattr__(self, "_plain", set(self.weights) <= {1} and self.precedence == tuple(range(n)))

    @classmethod
    def deglex(cls, weights: Sequence[int], precedence: Sequence[int] | None = None):
        weights = tuple(weights)
        if precedence is None:
            precedence = range(len(weights))
        return cls(weights, tuple(precedence))

    @property
    def kind(self) -> str:
        return "deg-lex"

    def key(self, word: Word):
        s = self._score
        w = self.weights
        return (sum(map(w.__getitem__, word)), tuple(map(s.__getitem__, word)))

    def neg_key(self, word: Word):
        """Key that sorts the largest word first."""
        if self._plain:
            return (-len(word), word)
        s = self._neg
        w = self.weights
        return (-sum(map(w.__getitem__, word)), tuple(map(s.__getitem__, word)))

    def leading(self, terms) -> Word:
        return max(terms, key=self.key)

    def sorted(self, words, descending: bool = False):
        return sorted(words, key=self.key, reverse=descending)
