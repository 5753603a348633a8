"""Ranking and unranking of weighted words, and sampling around forbidden ranks.

Words of length ``n`` are laid out on ``[0, pi(axiom_n))``, each word
owning a half-open interval as wide as its (scaled) weight. The layout
follows the order fixed by :class:`~nrgen.weights.WeightTable`: first
union branch first, product splits in table order, then the left factor's
rank, then the right factor's rank. Everything is an integer, so unranking
uses floor division and every boundary is exact.

Forbidden words are excluded by drawing ``r`` in ``[0, pi - pi(F))`` and
shifting it past the forbidden intervals lying to its left, which are
stored in an AVL tree whose nodes remember the forbidden mass of their
left subtree.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple

from .errors import ExhaustedError, InvariantError, NotInLanguageError, OverlapError, RankOutOfRangeError
from .grammar import Epsilon, Terminal, Union
from .randomness import rand_below
from .weights import WeightTable


class RankInterval(NamedTuple):
    low: int
    high: int

    @property
    def width(self) -> int:
        return self.high - self.low

    def __str__(self):
        return f"[{self.low},{self.high})"


def rank(wt: WeightTable, word: str, nt: str | None = None) -> RankInterval:
    """Interval of ``word`` among the words of ``nt`` (default: the axiom).

    Bottom-up over all spans of ``word``; cubic in its length.
    """
    nt = nt or wt.axiom
    n = len(word)
    if n > wt.n_max:
        raise NotInLanguageError(f"word longer than the table ({wt.n_max})")
    rules, weights = wt.rules, wt.sg.int_weights
    # found[(nt, start, length)] = (low, width) of word[start:start+length]
    found: dict[tuple[str, int, int], tuple[int, int]] = {}
    for length in range(n + 1):
        for start in range(n - length + 1):
            for x in wt.order:
                rule = rules[x]
                hit = None
                if isinstance(rule, Terminal):
                    if length == 1 and word[start] == rule.symbol:
                        hit = (0, weights[rule.symbol])
                elif isinstance(rule, Epsilon):
                    if length == 0:
                        hit = (0, 1)
                elif isinstance(rule, Union):
                    hit = found.get((rule.first, start, length))
                    if hit is None:
                        second = found.get((rule.second, start, length))
                        if second is not None:
                            hit = (second[0] + wt.weight(rule.first, length), second[1])
                else:
                    base = 0
                    for i in wt.splits(x, length):
                        right_total = wt.weight(rule.right, length - i)
                        u = found.get((rule.left, start, i))
                        v = found.get((rule.right, start + i, length - i)) if u is not None else None
                        if v is not None:
                            hit = (base + u[0] * right_total + v[0] * u[1], u[1] * v[1])
                            break
                        base += wt.weight(rule.left, i) * right_total
                if hit is not None:
                    found[(x, start, length)] = hit
    hit = found.get((nt, 0, n))
    if hit is None:
        raise NotInLanguageError(f"{word!r} is not generated by {nt} at length {n}")
    return RankInterval(hit[0], hit[0] + hit[1])


_GO, _SHIFT, _AFTER_LEFT, _AFTER_RIGHT = range(4)


def unrank(wt: WeightTable, nt: str, m: int, r: int, walk: list | None = None) -> tuple[str, RankInterval]:
    """The word of ``nt_m`` whose interval contains ``r``, with that interval.

    Leftmost-first and iterative; when ``walk`` is a list, the parse walk
    keys are appended to it.
    """
    total = wt.weight(nt, m)
    if not 0 <= r < total:
        raise RankOutOfRangeError(f"rank {r} outside [0, {total})")
    table, rules, weights = wt.table, wt.rules, wt.sg.int_weights
    letters: list[str] = []
    results: list[tuple[int, int]] = []  # (low, width) of finished subwords
    tasks: list[tuple] = [(_GO, nt, m, r)]
    while tasks:
        task = tasks.pop()
        kind = task[0]
        if kind == _GO:
            _, x, m, r = task
            rule = rules[x]
            key = 0
            if isinstance(rule, Terminal):
                letters.append(rule.symbol)
                results.append((0, weights[rule.symbol]))
            elif isinstance(rule, Epsilon):
                results.append((0, 1))
            elif isinstance(rule, Union):
                first = table[rule.first][m]
                if r < first:
                    tasks.append((_GO, rule.first, m, r))
                else:
                    key = 1
                    tasks.append((_SHIFT, first))
                    tasks.append((_GO, rule.second, m, r - first))
            else:
                left, right = table[rule.left], table[rule.right]
                base = 0
                for key in wt.splits(x, m):
                    right_total = right[m - key]
                    block = left[key] * right_total
                    if r < block:
                        break
                    r -= block
                    base += block
                else:
                    raise InvariantError(f"rank search fell through at {x}_{m}")
                tasks.append((_AFTER_LEFT, rule.right, m - key, base, right_total, r))
                tasks.append((_GO, rule.left, key, r // right_total))
            if walk is not None:
                walk.append(key)
        elif kind == _SHIFT:
            low, width = results.pop()
            results.append((low + task[1], width))
        elif kind == _AFTER_LEFT:
            _, right_nt, right_len, base, right_total, r = task
            low_left, width_left = results.pop()
            tasks.append((_AFTER_RIGHT, base, low_left, width_left, right_total))
            tasks.append((_GO, right_nt, right_len, (r - low_left * right_total) // width_left))
        else:
            _, base, low_left, width_left, right_total = task
            low_right, width_right = results.pop()
            results.append((base + low_left * right_total + low_right * width_left, width_left * width_right))
    (low, width), = results
    return "".join(letters), RankInterval(low, low + width)


def walk_of(wt: WeightTable, word: str) -> list[int]:
    """Parse walk (leftmost derivation keys) of a word of the language."""
    walk: list[int] = []
    unrank(wt, wt.axiom, len(word), rank(wt, word).low, walk)
    return walk


# -- AVL tree of forbidden intervals -------------------------------------------

class ITNode:
    __slots__ = ("word", "low", "high", "delta", "left", "right", "height")

    def __init__(self, word, low, high):
        self.word = word
        self.low = low
        self.high = high
        self.delta = 0  # total width of the intervals in the left subtree
        self.left: ITNode | None = None
        self.right: ITNode | None = None
        self.height = 1

    @property
    def interval(self) -> RankInterval:
        return RankInterval(self.low, self.high)


def _height(node):
    return node.height if node is not None else 0


def _fix_height(node):
    node.height = 1 + max(_height(node.left), _height(node.right))


def _rotate_right(y: ITNode) -> ITNode:
    #     y          x
    #    / \        / \
    #   x   C  ->  A   y
    #  / \            / \
    # A   B          B   C
    # x keeps A on its left; y's left becomes B, whose mass is what y used
    # to count minus A and x itself.
    x = y.left
    y.left = x.right
    x.right = y
    y.delta -= x.delta + (x.high - x.low)
    _fix_height(y)
    _fix_height(x)
    return x


def _rotate_left(x: ITNode) -> ITNode:
    #   x              y
    #  / \            / \
    # A   y    ->    x   C
    #    / \        / \
    #   B   C      A   B
    # x keeps A; y's left subtree now holds A, x and B.
    y = x.right
    x.right = y.left
    y.left = x
    y.delta += x.delta + (x.high - x.low)
    _fix_height(x)
    _fix_height(y)
    return y


def _rebalance(node: ITNode) -> ITNode:
    _fix_height(node)
    balance = _height(node.left) - _height(node.right)
    if balance > 1:
        if _height(node.left.left) < _height(node.left.right):
            node.left = _rotate_left(node.left)
        return _rotate_right(node)
    if balance < -1:
        if _height(node.right.right) < _height(node.right.left):
            node.right = _rotate_right(node.right)
        return _rotate_left(node)
    return node


class IntervalTree:
    """Disjoint forbidden rank intervals in an AVL tree."""

    def __init__(self):
        self.root: ITNode | None = None
        self.size = 0
        self.mass = 0

    def insert(self, word: str, interval: RankInterval) -> None:
        low, high = interval
        if not low < high:
            raise ValueError(f"empty interval {interval}")
        self.root = self._insert(self.root, word, low, high)
        self.size += 1
        self.mass += high - low

    def _insert(self, node, word, low, high):
        if node is None:
            return ITNode(word, low, high)
        if high <= node.low:
            node.left = self._insert(node.left, word, low, high)
            # only reached when the insertion below succeeded
            node.delta += high - low
        elif low >= node.high:
            node.right = self._insert(node.right, word, low, high)
        else:
            raise OverlapError(f"[{low},{high}) overlaps {node.interval} ({node.word!r})")
        return _rebalance(node)

    def __iter__(self) -> Iterator[ITNode]:
        stack, node = [], self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node
            node = node.right

    def __len__(self):
        return self.size

    def mod_random(self, r: int) -> int:
        return mod_random(r, self.root)


def interval_tree_insert(tree: IntervalTree, word: str, interval: RankInterval) -> IntervalTree:
    tree.insert(word, interval)
    return tree


def mod_random(r: int, node: ITNode | None) -> int:
    """Map ``r`` in ``[0, total - forbidden)`` to the ``r``-th admissible rank."""
    while node is not None:
        if r < node.low - node.delta:
            node = node.left
        else:
            r += node.delta + node.high - node.low
            node = node.right
    return r


class UnrankingSession:
    """Sequential non-redundant sampling through unranking."""

    engine = "unranking"

    def __init__(self, wt: WeightTable, n: int, rng, external_forbidden=frozenset()):
        if n > wt.n_max:
            raise ValueError(f"table only covers lengths up to {wt.n_max}")
        self.wt = wt
        self.n = n
        self.rng = rng
        self.external = frozenset(external_forbidden)
        self.tree = IntervalTree()
        self.total = wt.total(n)
        self.attempts = 0
        self.external_hits = 0

    def sample(self) -> str:
        while True:
            free = self.total - self.tree.mass
            if free <= 0:
                raise ExhaustedError(f"all words of length {self.n} are forbidden")
            r = mod_random(rand_below(self.rng, free), self.tree.root)
            word, interval = unrank(self.wt, self.wt.axiom, self.n, r)
            self.attempts += 1
            self.tree.insert(word, interval)
            if word in self.external:
                self.external_hits += 1
                continue
            return word


def sample_unranking(session: UnrankingSession) -> str:
    return session.sample()
