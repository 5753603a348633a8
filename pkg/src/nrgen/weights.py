"""Exact integer weights and the table of language weights per length.

Rational terminal weights are multiplied by the least common denominator
``D`` of all weights. Every word of length ``n`` is then scaled by the same
``D**n``, so the weighted distribution at a fixed length is unchanged and
all downstream arithmetic runs on Python integers.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Iterator

from .bcnf import ensure_bcnf
from .errors import ExhaustedError, GrammarValidationError, NotInLanguageError
from .grammar import Epsilon, Product, Terminal, Union, WeightedGrammar, nullable_set, zero_length_edges


@dataclass(frozen=True)
class ScaledGrammar:
    grammar: WeightedGrammar  # always BCNF
    scale: int
    int_weights: dict

    def rules(self):
        return self.grammar.bcnf_rules()


def scale_to_integer(g: WeightedGrammar) -> ScaledGrammar:
    """Normalize ``g`` to BCNF and scale its weights to integers.

    >>> from fractions import Fraction as F
    >>> sg = scale_to_integer(WeightedGrammar("S", {"S": (("a",),)}, {"a": F(1, 2)}))
    >>> sg.scale, sg.int_weights
    (2, {'a': 1})
    """
    g = ensure_bcnf(g)
    scale = 1
    for w in g.weights.values():
        scale = math.lcm(scale, w.denominator)
    int_weights = {t: int(w * scale) for t, w in g.weights.items()}
    return ScaledGrammar(g, scale, int_weights)


def boustrophedon(lo: int, hi: int) -> Iterator[int]:
    """Yield ``lo, hi, lo+1, hi-1, ...`` covering ``[lo, hi]`` once."""
    while lo < hi:
        yield lo
        yield hi
        lo += 1
        hi -= 1
    if lo == hi:
        yield lo


class WeightTable:
    """Weights ``pi(N_m)`` of every nonterminal ``N`` for ``0 <= m <= n_max``.

    The table also fixes the order in which product splits are visited
    (``splits``); samplers, ``rank`` and ``unrank`` all go through it, so
    they agree on one total order of words.
    """

    def __init__(self, sg: ScaledGrammar, n_max: int):
        self.sg = sg
        self.n_max = n_max
        self.rules = sg.rules()
        self.axiom = sg.grammar.axiom
        self.nullable = frozenset(nullable_set(sg.grammar))
        edges = zero_length_edges(sg.grammar, self.nullable)
        try:
            # dependencies among nonterminals at equal length
            self.order = list(TopologicalSorter(edges).static_order())
        except CycleError as exc:
            raise GrammarValidationError(f"nullable cycle: {exc.args[1]}") from None
        self.table: dict[str, list[int]] = {nt: [0] * (n_max + 1) for nt in self.rules}
        self._fill()

    def _fill(self):
        table, rules, n = self.table, self.rules, self.n_max
        support: dict[str, list[int]] = {nt: [] for nt in rules}
        weights = self.sg.int_weights
        for m in range(n + 1):
            for nt in self.order:
                rule = rules[nt]
                if isinstance(rule, Terminal):
                    value = weights[rule.symbol] if m == 1 else 0
                elif isinstance(rule, Epsilon):
                    value = 1 if m == 0 else 0
                elif isinstance(rule, Union):
                    value = table[rule.first][m] + table[rule.second][m]
                else:
                    value = self._convolve(rule, m, support)
                table[nt][m] = value
                if value:
                    support[nt].append(m)

    def _convolve(self, rule: Product, m: int, support) -> int:
        left, right = self.table[rule.left], self.table[rule.right]
        lengths = support[rule.left]
        lengths = lengths[:bisect_right(lengths, m)]
        if rule.left == rule.right:
            # symmetric: pair i with m - i once
            total = 0
            for i in lengths:
                j = m - i
                if j < i:
                    break
                if right[j]:
                    term = left[i] * right[j]
                    total += term if i == j else 2 * term
            return total
        return sum(left[i] * right[m - i] for i in lengths if right[m - i])

    def weight(self, nt: str, m: int) -> int:
        return self.table[nt][m] if 0 <= m <= self.n_max else 0

    def total(self, n: int | None = None) -> int:
        return self.weight(self.axiom, self.n_max if n is None else n)

    def splits(self, nt: str, m: int) -> Iterator[int]:
        """Left lengths of the non-empty splits of product ``nt`` at length ``m``."""
        # Visiting 0 and m first (they carry weight only when a factor is
        # nullable) keeps one order whatever the nullable sides are.
        rule = self.rules[nt]
        left, right = self.table[rule.left], self.table[rule.right]
        for i in boustrophedon(0, m):
            if left[i] and right[m - i]:
                yield i

    def word_weight(self, word: str) -> int:
        return word_weight(self.sg, word)


def build_weight_table(sg: ScaledGrammar, n: int) -> WeightTable:
    return WeightTable(sg, n)


def table_for(g: WeightedGrammar, n: int) -> WeightTable:
    return WeightTable(scale_to_integer(g), n)


def word_weight(sg: ScaledGrammar, word: str) -> int:
    result = 1
    for letter in word:
        try:
            result *= sg.int_weights[letter]
        except KeyError:
            raise NotInLanguageError(f"unknown terminal {letter!r}") from None
    return result


def word_probability(sg: ScaledGrammar, wt: WeightTable, word: str) -> Fraction:
    """Probability of ``word`` among all words of its length (membership is
    the caller's responsibility)."""
    total = wt.total(len(word))
    if total == 0:
        raise ExhaustedError(f"the language has no word of length {len(word)}")
    return Fraction(word_weight(sg, word), total)
