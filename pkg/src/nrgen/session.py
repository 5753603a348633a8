"""Sets of distinct words: the sequential driver, rejection, and exact oracles.

Three engines produce ``k`` distinct words of length ``n``:

* ``rejection`` draws from the unconstrained distribution and throws away
  words it has already produced (or that are externally forbidden);
* ``recursive`` and ``unranking`` never produce a seen word, because every
  output is excluded from the next draw.

External forbidden words are handled lazily by the last two: a draw that
lands on one is recorded like an output, but not returned, and the draw is
repeated.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Collection, Iterable

from .errors import AttemptCapExceeded, ExhaustedError, NotInLanguageError
from .grammar import WeightedGrammar
from .randomness import SEED_LIMIT, make_rng, rand_below
from .recursive import RecursiveSession
from .unranking import RankInterval, UnrankingSession, rank, unrank
from .weights import WeightTable, table_for

ENGINES = ("rejection", "recursive", "unranking")


class RejectionSession:
    """Draw from the full language and reject what must not be returned.

    Every draw is a uniform rank unranked into a word. Intervals of words
    already seen are cached in sorted order, so a repeated word is
    recognized by a binary search instead of a second unranking; the
    outcome of each draw is the same either way.
    """

    engine = "rejection"

    def __init__(self, wt: WeightTable, n: int, rng, external_forbidden=frozenset(),
                 max_attempts: int | None = None):
        if n > wt.n_max:
            raise ValueError(f"table only covers lengths up to {wt.n_max}")
        self.wt = wt
        self.n = n
        self.rng = rng
        self.external = frozenset(external_forbidden)
        self.max_attempts = max_attempts
        self.total = wt.total(n)
        self.attempts = 0
        self.external_hits = 0
        self.produced: set[str] = set()
        self._lows: list[int] = []
        self._seen: dict[int, tuple[str, int]] = {}  # low -> (word, high)
        self._rejected_mass = 0

    def _lookup(self, r: int) -> str | None:
        i = bisect_right(self._lows, r) - 1
        if i >= 0:
            word, high = self._seen[self._lows[i]]
            if r < high:
                return word
        return None

    def sample(self) -> str:
        while True:
            if self.total == 0 or self._rejected_mass >= self.total:
                raise ExhaustedError(f"all words of length {self.n} are forbidden")
            if self.max_attempts is not None and self.attempts >= self.max_attempts:
                raise AttemptCapExceeded(self.attempts)
            r = rand_below(self.rng, self.total)
            self.attempts += 1
            word = self._lookup(r)
            if word is not None:
                continue
            word, interval = unrank(self.wt, self.wt.axiom, self.n, r)
            insort(self._lows, interval.low)
            self._seen[interval.low] = (word, interval.high)
            self._rejected_mass += interval.width
            if word in self.external:
                self.external_hits += 1
                continue
            self.produced.add(word)
            return word


def naive_rejection(wt: WeightTable, forbidden: Collection[str], rng, n: int | None = None,
                    max_attempts: int | None = None) -> tuple[str, int]:
    """One word of the weighted distribution on ``L_n`` minus ``forbidden``,
    with the number of draws it took."""
    n = wt.n_max if n is None else n
    total = wt.total(n)
    if total == 0:
        raise ExhaustedError(f"the language has no word of length {n}")
    attempts = 0
    while max_attempts is None or attempts < max_attempts:
        word, _ = unrank(wt, wt.axiom, n, rand_below(rng, total))
        attempts += 1
        if word not in forbidden:
            return word, attempts
    raise AttemptCapExceeded(attempts)


def expected_attempts_uniform(l_n: int, k: int) -> Fraction:
    """Mean number of uniform draws needed to see ``k`` distinct words out of
    ``l_n``: ``l_n * (H(l_n) - H(l_n - k))``.

    >>> expected_attempts_uniform(5, 5)
    Fraction(137, 12)
    """
    if not 1 <= k <= l_n:
        raise ValueError(f"need 1 <= k <= l_n, got k={k}, l_n={l_n}")
    return l_n * sum((Fraction(1, i) for i in range(l_n - k + 1, l_n + 1)), Fraction(0))


def set_probability(wt: WeightTable, words: Iterable[str], n: int | None = None) -> Fraction:
    """Exact probability that a sequential session returns exactly ``words``
    (in any order) as its first ``len(words)`` outputs.

    Sums over all orderings, so keep the set small.
    """
    words = list(dict.fromkeys(words))
    if not words:
        raise ValueError("the word set must not be empty")
    n = len(words[0]) if n is None else n
    total = wt.total(n)
    weights = []
    for w in words:
        if len(w) != n:
            raise NotInLanguageError(f"{w!r} does not have length {n}")
        weights.append(rank(wt, w).width)  # raises when w is not in the language
    result = Fraction(0)
    for order in itertools.permutations(weights):
        p, left = Fraction(1), total
        for w in order:
            p *= Fraction(w, left)
            left -= w
        result += p
    return result


@dataclass
class SessionConfig:
    grammar: WeightedGrammar
    n: int
    k: int
    engine: str = "recursive"
    seed: int = 0
    external_forbidden: frozenset = frozenset()
    max_attempts: int | None = None  # rejection engine only

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {', '.join(ENGINES)}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.external_forbidden = frozenset(self.external_forbidden)


@dataclass
class GeneratedSet:
    words: list[str]
    attempts: int
    per_word_probability: list[Fraction] = field(default_factory=list)
    exhausted: bool = False


def make_session(wt: WeightTable, n: int, engine: str, rng, external_forbidden=frozenset(),
                 max_attempts: int | None = None):
    if engine == "rejection":
        return RejectionSession(wt, n, rng, external_forbidden, max_attempts)
    if engine == "recursive":
        return RecursiveSession(wt, n, rng, external_forbidden)
    if engine == "unranking":
        return UnrankingSession(wt, n, rng, external_forbidden)
    raise ValueError(f"unknown engine {engine!r}")


def generate_distinct(cfg: SessionConfig, table: WeightTable | None = None) -> GeneratedSet:
    """``cfg.k`` distinct words, or all admissible ones with ``exhausted`` set.

    ``per_word_probability`` holds each word's probability under the
    unconstrained distribution on ``L_n``. A reusable ``table`` covering
    length ``cfg.n`` may be passed in to skip precomputation.
    """
    wt = table if table is not None and table.n_max >= cfg.n else table_for(cfg.grammar, cfg.n)
    session = make_session(wt, cfg.n, cfg.engine, make_rng(cfg.seed), cfg.external_forbidden,
                           cfg.max_attempts)
    words, exhausted = [], False
    for _ in range(cfg.k):
        try:
            words.append(session.sample())
        except ExhaustedError:
            exhausted = True
            break
    total = wt.total(cfg.n)
    probs = [Fraction(wt.word_weight(w), total) for w in words]
    return GeneratedSet(words, session.attempts, probs, exhausted)


@dataclass
class BlowupStats:
    k_max: int
    trials: int
    mean_attempts: list[float]  # index k - 1
    completed: list[int]  # runs that reached k distinct words

    def growth_ratios(self) -> list[float]:
        m = self.mean_attempts
        return [m[i + 1] / m[i] for i in range(len(m) - 1)]


def rejection_blowup_stats(wt: WeightTable, k_max: int, trials: int, rng, n: int | None = None,
                           external_forbidden=frozenset()) -> BlowupStats:
    """Mean number of rejection draws needed to collect ``k`` distinct words,
    for every ``k <= k_max``, over ``trials`` independent runs sharing ``rng``."""
    n = wt.n_max if n is None else n
    sums = [0] * k_max
    completed = [0] * k_max
    for _ in range(trials):
        session = RejectionSession(wt, n, rng, external_forbidden)
        for k in range(k_max):
            try:
                session.sample()
            except ExhaustedError:
                break
            sums[k] += session.attempts
            completed[k] += 1
    means = [s / c if c else math.nan for s, c in zip(sums, completed)]
    return BlowupStats(k_max, trials, means, completed)
