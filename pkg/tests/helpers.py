"""Shared fixtures for the test suite: grammar texts and brute-force oracles."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from nrgen.grammar import load_grammar, parse_grammar
from nrgen.oracle import enumerate_words

GRAMMAR_DIR = Path(__file__).resolve().parent.parent / "grammars"


def grammar_path(name: str) -> str:
    return str(GRAMMAR_DIR / f"{name}.wcfg")


@lru_cache(maxsize=None)
def named(name: str):
    return load_grammar(grammar_path(name))


# Ten grammars in Chomsky normal form (the axiom alone may derive the empty
# word and then never occurs on a right-hand side). "unambiguous" marks the
# ones whose words each have exactly one parse tree.
CNF_ZOO = {
    "a_star_b_star": ("""
        axiom S
        terminal a weight 1
        terminal b weight 2
        S -> _eps_ | a | b | A S1 | B T1
        S1 -> a | b | A S1 | B T1
        T1 -> b | B T1
        A -> a
        B -> b
    """, True),
    "binary_trees": ("""
        axiom S
        S -> b | A U
        U -> S S
        A -> a
    """, True),
    "dyck_ambiguous": ("""
        axiom S
        terminal l weight 1
        terminal r weight 1
        S -> _eps_ | P P | L R | L Z
        P -> P P | L R | L Z
        Z -> P R
        L -> l
        R -> r
    """, False),
    "palindromes": ("""
        axiom S
        terminal a weight 2
        terminal b weight 3
        S -> _eps_ | a | b | A A | B B | A T | B U
        P -> a | b | A A | B B | A T | B U
        T -> P A
        U -> P B
        A -> a
        B -> b
    """, True),
    "a_n_b_n": ("""
        axiom S
        S -> _eps_ | A B | A T
        N -> A B | A T
        T -> N B
        A -> a
        B -> b
    """, True),
    "expressions": ("""
        axiom E
        terminal x weight 1
        terminal + weight 1/2
        terminal ( weight 1/3
        terminal ) weight 1/3
        E -> x | L M | E Q
        M -> E R
        Q -> P E
        P -> +
        L -> (
        R -> )
    """, False),
    "even_length": ("""
        axiom S
        terminal a weight 1/2
        terminal b weight 3/2
        S -> _eps_ | X O
        E -> X O
        O -> a | b | X E
        X -> a | b
    """, True),
    "all_words_abc": ("""
        axiom S
        terminal a weight 1/2
        terminal b weight 1/3
        terminal c weight 1/4
        S -> a | b | c | C S
        C -> a | b | c
    """, True),
    "ab_plus": ("""
        axiom S
        S -> A B | A T
        T -> B S
        A -> a
        B -> b
    """, True),
    "motzkin_ambiguous": ("""
        axiom M
        terminal u weight 3
        terminal d weight 1
        terminal h weight 1/2
        M -> h | M M | U D | U V
        V -> M D
        U -> u
        D -> d
    """, False),
}


def zoo(name: str):
    return parse_grammar(CNF_ZOO[name][0])


def unambiguous_zoo():
    return [name for name, (_, unamb) in CNF_ZOO.items() if unamb]


def language_of(g, omega) -> list[tuple[str, Fraction]]:
    """Words (with weights) derivable from an immature word, brute force.

    ``g`` must be the BCNF grammar the items refer to.
    """
    parts = []
    for item in omega:
        if isinstance(item, str):
            parts.append([(item, g.weights[item])])
        else:
            nt, m = item
            parts.append(_words_of(g, nt, m))
    out = []
    for combo in itertools.product(*parts):
        word = "".join(w for w, _ in combo)
        weight = Fraction(1)
        for _, w in combo:
            weight *= w
        out.append((word, weight))
    return out


_WORDS_CACHE: dict = {}


def _words_of(g, nt, m):
    key = (id(g), nt, m)
    if key not in _WORDS_CACHE:
        _WORDS_CACHE[key] = (g, enumerate_words(g, m, start=nt))
    return _WORDS_CACHE[key][1]


def exact_outcomes(run, patch):
    """Exact distribution of ``run()`` over every sequence of uniform draws.

    ``patch(draw)`` must install ``draw(rng, bound)`` in place of the
    uniform-integer primitive used by the code under test. Returns a dict
    mapping each outcome to its exact probability.
    """
    dist: dict = {}
    todo = [()]
    while todo:
        prefix = todo.pop()
        bounds: list[int] = []

        def draw(rng, bound, prefix=prefix, bounds=bounds):
            i = len(bounds)
            bounds.append(bound)
            return prefix[i] if i < len(prefix) else 0

        patch(draw)
        out = run()
        if len(bounds) > len(prefix):
            todo.extend(prefix + (v,) for v in range(bounds[len(prefix)]))
            continue
        p = Fraction(1)
        for b in bounds:
            p /= b
        dist[out] = dist.get(out, 0) + p
    return dist
