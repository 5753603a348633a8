"""Weighted grammar model, text format, and static validation.

A grammar stores, for every nonterminal, the tuple of its alternatives in
the order they were written. An alternative is a tuple of at most two
symbols: ``()`` is the empty word, ``(x,)`` a single terminal or
nonterminal, ``(x, y)`` a concatenation. This covers both Chomsky normal
form and binary Chomsky normal form (BCNF), where every nonterminal has
exactly one rule of one of the four shapes below::

    N -> A B        Product
    N -> A | B      Union
    N -> t          Terminal
    N -> _eps_      Epsilon

Symbols are plain strings. Terminals are single characters so that words
can be handled as ``str``; nonterminals are identifiers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union as _Union

from .errors import GrammarSyntaxError

EPS_TOKEN = "_eps_"

Alternative = tuple  # tuple[str, ...] of length 0, 1 or 2


@dataclass(frozen=True)
class Product:
    left: str
    right: str


@dataclass(frozen=True)
class Union:
    first: str
    second: str


@dataclass(frozen=True)
class Terminal:
    symbol: str


@dataclass(frozen=True)
class Epsilon:
    pass


Rule = _Union[Product, Union, Terminal, Epsilon]


@dataclass(frozen=True, eq=True)
class WeightedGrammar:
    """An immutable weighted grammar.

    ``weights`` maps every terminal to a strictly positive ``Fraction``;
    ``rules`` maps every nonterminal to its alternatives. Neither mapping
    may be mutated after construction.
    """

    axiom: str
    rules: Mapping[str, tuple]
    weights: Mapping[str, Fraction]
    _bcnf: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(self.rules)

    @property
    def terminals(self) -> frozenset:
        return frozenset(self.weights)

    def is_terminal(self, symbol: str) -> bool:
        return symbol in self.weights

    def is_bcnf(self) -> bool:
        try:
            self.bcnf_rules()
        except ValueError:
            return False
        return True

    def bcnf_rules(self) -> dict[str, Rule]:
        """Typed BCNF view of the rules; ``ValueError`` if the shape is wrong."""
        if self._bcnf is not None:
            return self._bcnf
        typed = {}
        for nt, alts in self.rules.items():
            typed[nt] = self._bcnf_rule(nt, alts)
        object.__setattr__(self, "_bcnf", typed)
        return typed

    def _bcnf_rule(self, nt, alts) -> Rule:
        nts = self.rules
        if len(alts) == 2:
            a, b = alts
            if len(a) == 1 and len(b) == 1 and a[0] in nts and b[0] in nts:
                return Union(a[0], b[0])
        elif len(alts) == 1:
            (alt,) = alts
            if len(alt) == 0:
                return Epsilon()
            if len(alt) == 1 and alt[0] in self.weights:
                return Terminal(alt[0])
            if len(alt) == 2 and alt[0] in nts and alt[1] in nts:
                return Product(alt[0], alt[1])
        raise ValueError(f"rule for {nt} is not in BCNF: {format_alternatives(alts)}")


def format_alternatives(alts: Iterable[tuple]) -> str:
    return " | ".join(" ".join(alt) if alt else EPS_TOKEN for alt in alts)


# -- text format -------------------------------------------------------------

_NT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_TOKEN_RE = re.compile(r"\S+")
_IMPLICIT_TERMINAL_RE = re.compile(r"[a-z0-9]\Z")


def _parse_weight(text, line, col) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise GrammarSyntaxError(f"malformed weight {text!r}", line, col) from None
    if value <= 0:
        raise GrammarSyntaxError(f"weight must be positive, got {text}", line, col)
    return value


def parse_grammar(text: str) -> WeightedGrammar:
    """Parse the line-oriented grammar format.

    >>> g = parse_grammar("axiom S\\nS -> a S | b")
    >>> g.rules["S"]
    (('a', 'S'), ('b',))
    """
    axiom = None
    declared: dict[str, Fraction] = {}
    raw_rules: dict[str, tuple[int, list]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN_RE.finditer(body)]
        if not tokens:
            continue
        head, col = tokens[0]
        if head == "axiom":
            if len(tokens) != 2:
                raise GrammarSyntaxError("expected 'axiom <NT>'", lineno, col)
            if axiom is not None:
                raise GrammarSyntaxError("axiom declared twice", lineno, col)
            axiom = tokens[1][0]
            if not _NT_RE.match(axiom):
                raise GrammarSyntaxError(f"invalid nonterminal name {axiom!r}", lineno, tokens[1][1])
        elif head == "terminal":
            if len(tokens) != 4 or tokens[2][0] != "weight":
                raise GrammarSyntaxError("expected 'terminal <t> weight <w>'", lineno, col)
            name, ncol = tokens[1]
            if len(name) != 1 or name in "#|":
                raise GrammarSyntaxError(f"terminal must be a single character, got {name!r}", lineno, ncol)
            if name in declared:
                raise GrammarSyntaxError(f"terminal {name!r} declared twice", lineno, ncol)
            declared[name] = _parse_weight(tokens[3][0], lineno, tokens[3][1])
        else:
            if len(tokens) < 3 or tokens[1][0] != "->":
                raise GrammarSyntaxError("expected '<NT> -> <rhs>'", lineno, col)
            if not _NT_RE.match(head):
                raise GrammarSyntaxError(f"invalid nonterminal name {head!r}", lineno, col)
            if head in raw_rules:
                raise GrammarSyntaxError(
                    f"duplicate rule for {head} (first on line {raw_rules[head][0]}); "
                    "put all alternatives on one line", lineno, col)
            alts, current = [], []
            for tok, tcol in tokens[2:] + [("|", None)]:
                if tok == "|":
                    if not current:
                        raise GrammarSyntaxError("empty alternative", lineno, tcol)
                    if len(current) > 2:
                        raise GrammarSyntaxError(
                            "alternative has more than two symbols; only CNF/BCNF shapes are accepted",
                            lineno, current[2][1])
                    if any(t == EPS_TOKEN for t, _ in current) and len(current) != 1:
                        raise GrammarSyntaxError(f"{EPS_TOKEN} must stand alone", lineno, current[0][1])
                    alts.append(current)
                    current = []
                else:
                    current.append((tok, tcol))
            raw_rules[head] = (lineno, alts)

    if axiom is None:
        raise GrammarSyntaxError("missing 'axiom' declaration")
    if axiom not in raw_rules:
        raise GrammarSyntaxError(f"axiom {axiom} has no rule")

    weights = dict(declared)
    clash = set(declared) & set(raw_rules)
    if clash:
        raise GrammarSyntaxError(f"symbols used both as terminal and nonterminal: {sorted(clash)}")

    rules = {}
    for nt, (lineno, alts) in raw_rules.items():
        resolved = []
        for alt in alts:
            if alt[0][0] == EPS_TOKEN:
                resolved.append(())
                continue
            syms = []
            for tok, tcol in alt:
                if tok in weights or tok in raw_rules:
                    syms.append(tok)
                elif _IMPLICIT_TERMINAL_RE.match(tok):
                    weights[tok] = Fraction(1)
                    syms.append(tok)
                else:
                    raise GrammarSyntaxError(f"unknown symbol {tok!r}", lineno, tcol)
            resolved.append(tuple(syms))
        rules[nt] = tuple(resolved)
    return WeightedGrammar(axiom, rules, weights)


def serialize_grammar(g: WeightedGrammar) -> str:
    lines = [f"axiom {g.axiom}"]
    for t, w in g.weights.items():
        lines.append(f"terminal {t} weight {w}")
    for nt, alts in g.rules.items():
        lines.append(f"{nt} -> {format_alternatives(alts)}")
    return "\n".join(lines) + "\n"


def load_grammar(path) -> WeightedGrammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    unproductive: list = field(default_factory=list)
    nullable_cycles: list = field(default_factory=list)
    epsilon_violations: list = field(default_factory=list)
    unreachable: list = field(default_factory=list)

    @property
    def errors(self) -> list[str]:
        out = [f"unproductive nonterminal: {nt}" for nt in self.unproductive]
        out += ["nullable cycle: " + " -> ".join(cyc + [cyc[0]]) for cyc in self.nullable_cycles]
        out += [f"epsilon rule of {nt} feeds a nullable cycle" for nt in self.epsilon_violations]
        return out

    @property
    def warnings(self) -> list[str]:
        return [f"unreachable nonterminal: {nt}" for nt in self.unreachable]

    @property
    def ok(self) -> bool:
        return not self.errors


def nullable_set(g: WeightedGrammar) -> set[str]:
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for nt, alts in g.rules.items():
            if nt not in nullable and any(all(s in nullable for s in alt) for alt in alts):
                nullable.add(nt)
                changed = True
    return nullable


def productive_set(g: WeightedGrammar) -> set[str]:
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for nt, alts in g.rules.items():
            if nt in productive:
                continue
            if any(all(s in productive or s in g.weights for s in alt) for alt in alts):
                productive.add(nt)
                changed = True
    return productive


def zero_length_edges(g: WeightedGrammar, nullable=None) -> dict[str, set[str]]:
    """Edges N -> X such that N derives a sentential form reduced to X
    once the remaining symbols vanish; a cycle here is a nullable cycle."""
    if nullable is None:
        nullable = nullable_set(g)
    edges = {nt: set() for nt in g.rules}
    for nt, alts in g.rules.items():
        for alt in alts:
            for i, s in enumerate(alt):
                if s in g.rules and all(o in nullable for j, o in enumerate(alt) if j != i):
                    edges[nt].add(s)
    return edges


def _reachable(edges, start) -> set:
    seen, todo = set(), list(edges.get(start, ()))
    while todo:
        x = todo.pop()
        if x not in seen:
            seen.add(x)
            todo.extend(edges.get(x, ()))
    return seen


def validate(g: WeightedGrammar) -> ValidationReport:
    """Report static defects; never raises."""
    report = ValidationReport()
    productive = productive_set(g)
    report.unproductive = [nt for nt in g.rules if nt not in productive]

    edges = zero_length_edges(g)
    reach = {nt: _reachable(edges, nt) for nt in g.rules}
    on_cycle = [nt for nt in g.rules if nt in reach[nt]]
    done: set[str] = set()
    for nt in on_cycle:
        if nt in done:
            continue
        component = [x for x in on_cycle if x in reach[nt] and nt in reach[x]]
        done.update(component)
        report.nullable_cycles.append(component)
    if on_cycle:
        derives = {nt: {s for alt in alts for s in alt if s in g.rules} for nt, alts in g.rules.items()}
        feeding = set()
        for nt in on_cycle:
            feeding |= {x for x in _reachable(derives, nt) | {nt} if () in g.rules[x]}
        report.epsilon_violations = [nt for nt in g.rules if nt in feeding]

    derives = {nt: {s for alt in alts for s in alt if s in g.rules} for nt, alts in g.rules.items()}
    reachable = _reachable(derives, g.axiom) | {g.axiom}
    report.unreachable = [nt for nt in g.rules if nt not in reachable]
    return report
