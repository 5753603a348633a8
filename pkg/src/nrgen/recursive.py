"""Step-by-step recursive generation avoiding a set of forbidden words.

A generation is a parse walk: starting from the axiom with its prescribed
length, the leftmost nonterminal is rewritten until only terminals remain.
An immature word is a tuple whose items are either terminal letters (plain
one-character strings) or ``(nonterminal, length)`` pairs.

Each step of a walk is identified, relative to its parent immature word, by
a small integer key: the branch index (0 or 1) of a union, the left length
of a product split, and 0 for terminal and epsilon rules. Since the
rewritten position is fixed by the leftmost policy, the key alone pins the
derivation, and a walk is just the sequence of keys.

Forbidden words are kept in a prefix tree over walks whose nodes carry the
total weight of the forbidden words reachable from them. Branch choices
subtract that weight from the precomputed language weights, so forbidden
words get probability zero while the others keep their relative weights.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import DuplicateWordError, ExhaustedError, InvariantError
from .grammar import Epsilon, Terminal, Union
from .randomness import rand_below
from .weights import WeightTable

ImmatureWord = tuple
ParseWalk = tuple


def apply_policy(omega: ImmatureWord) -> int | None:
    """Index of the leftmost nonterminal item, ``None`` for a mature word."""
    for i, item in enumerate(omega):
        if not isinstance(item, str):
            return i
    return None


def derive(wt: WeightTable, omega: ImmatureWord, key: int) -> ImmatureWord:
    """Apply the atomic derivation ``key`` at the leftmost nonterminal."""
    pos = apply_policy(omega)
    if pos is None:
        raise ValueError("cannot derive a mature word")
    nt, m = omega[pos]
    rule = wt.rules[nt]
    if isinstance(rule, Terminal):
        repl = (rule.symbol,) if m == 1 else None
    elif isinstance(rule, Epsilon):
        repl = () if m == 0 else None
    elif isinstance(rule, Union):
        repl = ((rule.second if key else rule.first, m),)
    else:
        repl = ((rule.left, key), (rule.right, m - key)) if 0 <= key <= m else None
    if repl is None:
        raise ValueError(f"derivation {key} does not apply to {nt}_{m}")
    return omega[:pos] + repl + omega[pos + 1:]


def replay_walk(wt: WeightTable, walk: Iterable[int], omega: ImmatureWord | None = None) -> list[ImmatureWord]:
    """The sequence of immature words visited by ``walk``."""
    if omega is None:
        omega = ((wt.axiom, wt.n_max),)
    steps = [omega]
    for key in walk:
        omega = derive(wt, omega, key)
        steps.append(omega)
    return steps


def immature_weight(wt: WeightTable, omega: ImmatureWord) -> int:
    result = 1
    for item in omega:
        if isinstance(item, str):
            result *= wt.sg.int_weights[item]
        else:
            result *= wt.weight(*item)
    return result


def mature_word(omega: ImmatureWord) -> str:
    return "".join(omega)


# -- weighted tree of forbidden walks ------------------------------------------

class TrieNode:
    __slots__ = ("children", "fmass")

    def __init__(self):
        self.children: dict[int, TrieNode] = {}
        self.fmass = 0


class ForbiddenTrie:
    """Prefix tree over parse walks of forbidden words.

    Children are kept in a dict keyed by derivation key, which gives
    constant expected lookup time.
    """

    def __init__(self):
        self.root = TrieNode()
        self.size = 0

    def find(self, walk: Iterable[int]) -> TrieNode | None:
        node = self.root
        for key in walk:
            node = node.children.get(key)
            if node is None:
                return None
        return node

    def insert(self, walk: Sequence[int], weight: int) -> None:
        if weight <= 0:
            raise ValueError("weight must be positive")
        if self.find(walk) is not None:
            raise DuplicateWordError("walk is already in the tree")
        node = self.root
        node.fmass += weight
        for key in walk:
            child = node.children.get(key)
            if child is None:
                child = node.children[key] = TrieNode()
            child.fmass += weight
            node = child
        self.size += 1

    def nodes(self) -> Iterator[tuple[tuple, TrieNode]]:
        """Every (walk prefix, node) pair, depth first."""
        todo = [((), self.root)]
        while todo:
            path, node = todo.pop()
            yield path, node
            for key, child in node.children.items():
                todo.append((path + (key,), child))


def trie_child_mass(node: TrieNode | None, delta: int) -> int:
    if node is None:
        return 0
    child = node.children.get(delta)
    return 0 if child is None else child.fmass


def trie_insert_walk(trie: ForbiddenTrie, walk: Sequence[int], weight: int) -> ForbiddenTrie:
    trie.insert(walk, weight)
    return trie


# -- generation ----------------------------------------------------------------

def branch_masses(wt: WeightTable, omega: ImmatureWord, mu: int, node: TrieNode | None) -> list[tuple[int, int, int]]:
    """Candidate derivations of ``omega`` as ``(key, mu', F')`` triples, in
    the order the sampler visits them."""
    pos = apply_policy(omega)
    if pos is None:
        return []
    nt, m = omega[pos]
    rule = wt.rules[nt]
    if isinstance(rule, (Terminal, Epsilon)):
        return [(0, mu, trie_child_mass(node, 0))]
    cofactor = mu // wt.weight(nt, m)
    if isinstance(rule, Union):
        return [(b, cofactor * wt.weight(child, m), trie_child_mass(node, b))
                for b, child in enumerate((rule.first, rule.second))]
    return [(i, cofactor * wt.weight(rule.left, i) * wt.weight(rule.right, m - i), trie_child_mass(node, i))
            for i in wt.splits(nt, m)]


def _walk_bound(wt: WeightTable, n: int) -> int:
    # n terminal steps, at most n - 1 products, unions chains bounded by |N|
    return (2 * n + 1) * (len(wt.rules) + 1)


def generate(wt: WeightTable, omega: ImmatureWord, mu: int, node: TrieNode | None, rng,
             debug: bool = False) -> tuple[str, list[int]]:
    """Draw a word of ``L(omega)`` minus the forbidden words; return it with its walk.

    ``mu`` must equal the weight of ``omega`` and ``node`` the trie node
    of ``omega`` (``None`` when no forbidden word derives from it).
    """
    table, rules = wt.table, wt.rules
    letters: list[str] = []
    walk: list[int] = []
    stack = list(reversed(omega))
    length = sum(1 if isinstance(item, str) else item[1] for item in omega)
    bound = _walk_bound(wt, length)
    if mu <= (node.fmass if node is not None else 0):
        raise ExhaustedError("every word of this sublanguage is forbidden")

    while stack:
        item = stack.pop()
        if isinstance(item, str):
            letters.append(item)
            continue
        nt, m = item
        rule = rules[nt]
        if debug and node is not None:
            rest = tuple(letters) + (item,) + tuple(reversed(stack))
            if immature_weight(wt, rest) != mu:
                raise InvariantError(f"mu drifted from the weight of {rest}")

        if isinstance(rule, Terminal):
            letters.append(rule.symbol)
            key = 0
        elif isinstance(rule, Epsilon):
            key = 0
        elif node is None:
            # no forbidden word below: plain recursive method on local weights
            r = rand_below(rng, table[nt][m])
            if isinstance(rule, Union):
                if r < table[rule.first][m]:
                    key, child = 0, rule.first
                else:
                    key, child = 1, rule.second
                stack.append((child, m))
            else:
                left, right = table[rule.left], table[rule.right]
                for key in wt.splits(nt, m):
                    r -= left[key] * right[m - key]
                    if r < 0:
                        break
                else:
                    raise InvariantError(f"split search fell through at {nt}_{m}")
                stack.append((rule.right, m - key))
                stack.append((rule.left, key))
        else:
            forbidden = node.fmass
            if mu <= forbidden:
                raise InvariantError("reached a fully forbidden immature word")
            cofactor = mu // table[nt][m]
            r = rand_below(rng, mu - forbidden)
            children = node.children
            if isinstance(rule, Union):
                mu_first = cofactor * table[rule.first][m]
                first = children.get(0)
                r -= mu_first - (first.fmass if first is not None else 0)
                if r < 0:
                    key, child, mu = 0, rule.first, mu_first
                else:
                    key, child, mu = 1, rule.second, cofactor * table[rule.second][m]
                stack.append((child, m))
            else:
                left, right = table[rule.left], table[rule.right]
                for key in wt.splits(nt, m):
                    mu_split = cofactor * left[key] * right[m - key]
                    sub = children.get(key)
                    r -= mu_split - (sub.fmass if sub is not None else 0)
                    if r < 0:
                        break
                else:
                    raise InvariantError(f"split search fell through at {nt}_{m}")
                mu = mu_split
                stack.append((rule.right, m - key))
                stack.append((rule.left, key))
        if node is not None:
            node = node.children.get(key)
        walk.append(key)
        if len(walk) > bound:
            raise InvariantError("parse walk exceeds the length bound; is the grammar ambiguous?")
    return "".join(letters), walk


def step_by_step(wt: WeightTable, omega: ImmatureWord, mu: int, node: TrieNode | None, rng,
                 debug: bool = False) -> str:
    return generate(wt, omega, mu, node, rng, debug)[0]


class RecursiveSession:
    """Sequential non-redundant sampling with the step-by-step generator.

    Owned by one caller at a time; the weight table may be shared.
    """

    engine = "recursive"

    def __init__(self, wt: WeightTable, n: int, rng, external_forbidden=frozenset(), debug: bool = False):
        if n > wt.n_max:
            raise ValueError(f"table only covers lengths up to {wt.n_max}")
        self.wt = wt
        self.n = n
        self.rng = rng
        self.external = frozenset(external_forbidden)
        self.debug = debug
        self.trie = ForbiddenTrie()
        self.total = wt.total(n)
        self.attempts = 0
        self.external_hits = 0

    def sample(self) -> str:
        start = ((self.wt.axiom, self.n),)
        while True:
            if self.trie.root.fmass >= self.total:
                raise ExhaustedError(f"all words of length {self.n} are forbidden")
            word, walk = generate(self.wt, start, self.total, self.trie.root, self.rng, self.debug)
            self.attempts += 1
            self.trie.insert(walk, self.wt.word_weight(word))
            if word in self.external:
                self.external_hits += 1
                continue
            return word


def sample_recursive(session: RecursiveSession) -> str:
    return session.sample()
