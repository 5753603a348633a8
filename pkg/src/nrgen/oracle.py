"""Brute-force enumeration of fixed-length languages.

Works directly on the written alternatives (CNF, BCNF or a mix), without
normalization or weight tables, so it can check both. Words come out in the
same total order the samplers and ``rank`` use: alternatives in written
order, product splits by left length in the order 0, m, 1, m-1, 2, ...,
then lexicographically by (left part, right part).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GrammarValidationError
from .grammar import WeightedGrammar, nullable_set


def _split_order(m):
    lo, hi = 0, m
    out = []
    while lo < hi:
        out += [lo, hi]
        lo, hi = lo + 1, hi - 1
    if lo == hi:
        out.append(lo)
    return out


def enumerate_derivations(g: WeightedGrammar, n: int, start: str | None = None) -> list[tuple[str, Fraction]]:
    """All (word, weight) pairs of length ``n``, one per derivation tree."""
    memo: dict[tuple[str, int], list] = {}
    active: set[tuple[str, int]] = set()
    nullable = nullable_set(g)

    def gen(sym, m):
        if sym in g.weights:
            return [(sym, g.weights[sym])] if m == 1 else []
        if m == 0 and sym not in nullable:
            return []
        key = (sym, m)
        if key in memo:
            return memo[key]
        if key in active:
            raise GrammarValidationError(f"nullable cycle through {sym}")
        active.add(key)
        out = []
        for alt in g.rules[sym]:
            if not alt:
                if m == 0:
                    out.append(("", Fraction(1)))
            elif len(alt) == 1:
                out.extend(gen(alt[0], m))
            else:
                for i in _split_order(m):
                    if (i == 0 and alt[0] not in nullable) or (i == m and alt[1] not in nullable):
                        continue
                    lefts = gen(alt[0], i)
                    if not lefts:
                        continue
                    rights = gen(alt[1], m - i)
                    for u, wu in lefts:
                        for v, wv in rights:
                            out.append((u + v, wu * wv))
        active.discard(key)
        memo[key] = out
        return out

    return list(gen(start or g.axiom, n))


def enumerate_words(g: WeightedGrammar, n: int, start: str | None = None) -> list[tuple[str, Fraction]]:
    """Distinct words of length ``n`` with their exact weights, in rank order."""
    seen = set()
    out = []
    for word, weight in enumerate_derivations(g, n, start):
        if word not in seen:
            seen.add(word)
            out.append((word, weight))
    return out


@dataclass
class AmbiguityReport:
    n_max: int
    counts: dict  # length -> (parse trees, distinct words)

    @property
    def ambiguous_lengths(self) -> list[int]:
        return [m for m, (trees, words) in self.counts.items() if trees != words]

    @property
    def ambiguous(self) -> bool:
        return bool(self.ambiguous_lengths)

    def verdict(self, m: int) -> str:
        trees, words = self.counts[m]
        if trees != words:
            return f"ambiguous at length {m}: {trees} parse trees for {words} words"
        return f"no ambiguity detected at length {m}"

    def summary(self) -> str:
        if self.ambiguous:
            return "; ".join(self.verdict(m) for m in self.ambiguous_lengths)
        return f"no ambiguity detected up to {self.n_max}"


def ambiguity_probe(g: WeightedGrammar, n_max: int) -> AmbiguityReport:
    """Compare parse-tree counts (unit weights) with distinct word counts.

    Agreement up to ``n_max`` does not prove the grammar unambiguous.
    """
    from .weights import table_for

    unit = WeightedGrammar(g.axiom, g.rules, {t: Fraction(1) for t in g.weights})
    table = table_for(unit, n_max)
    counts = {}
    for m in range(1, n_max + 1):
        counts[m] = (table.total(m), len(enumerate_words(g, m)))
    return AmbiguityReport(n_max, counts)
