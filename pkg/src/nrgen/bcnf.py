"""Normalization of CNF (or mixed CNF/BCNF) grammars into BCNF.

The rewrite runs in five passes:

1. every terminal (and the empty word) that is not already the sole
   alternative of its nonterminal gets a dedicated wrapper nonterminal;
2. occurrences are replaced by their wrappers;
3. a product alternative of a nonterminal with several alternatives is
   moved to a fresh nonterminal of its own;
4. nonterminals with more than two (now unit) alternatives are turned into
   a right-leaning chain of binary unions;
5. nonterminals left with a single unit alternative are removed and their
   occurrences replaced by their target.

Alternatives keep their written order, so the first branch of every union
stays first. Fresh names start with ``__`` and are numbered per owner,
which makes the output reproducible.
"""

from __future__ import annotations

from .errors import GrammarValidationError, InvariantError
from .grammar import WeightedGrammar, validate


def _wrapper_name(t: str) -> str:
    return f"__t_{t}" if t.isalnum() else f"__t_x{ord(t):x}"


def to_bcnf(g: WeightedGrammar) -> WeightedGrammar:
    """Return an equivalent BCNF grammar; BCNF input is returned as is."""
    if g.is_bcnf():
        return g
    report = validate(g)
    if not report.ok:
        raise GrammarValidationError("cannot normalize an invalid grammar: " + "; ".join(report.errors), report)

    taken = set(g.rules) | set(g.weights)

    def fresh(name):
        candidate, i = name, 1
        while candidate in taken:
            i += 1
            candidate = f"{name}_{i}"
        taken.add(candidate)
        return candidate

    wrappers: dict[object, str] = {}

    def wrap(symbol):
        # None stands for the empty word
        if symbol not in wrappers:
            wrappers[symbol] = fresh("__eps" if symbol is None else _wrapper_name(symbol))
        return wrappers[symbol]

    out: dict[str, list] = {}
    for nt, alts in g.rules.items():
        if len(alts) == 1 and (len(alts[0]) == 0 or (len(alts[0]) == 1 and alts[0][0] in g.weights)):
            out[nt] = [alts[0]]
            continue
        # steps i/ii
        alts = [
            (wrap(None),) if len(alt) == 0
            else tuple(wrap(s) if s in g.weights else s for s in alt)
            for alt in alts
        ]
        helpers = []
        # step iii
        if len(alts) > 1:
            unit_alts = []
            for alt in alts:
                if len(alt) == 2:
                    name = fresh(f"__{nt}_p{len(helpers) + 1}")
                    helpers.append((name, [alt]))
                    unit_alts.append((name,))
                else:
                    unit_alts.append(alt)
            alts = unit_alts
        # step iv
        if len(alts) > 2:
            chain = [fresh(f"__{nt}_u{i}") for i in range(1, len(alts) - 1)]
            for j, head in enumerate(chain):
                rest = (chain[j + 1],) if j + 1 < len(chain) else alts[-1]
                helpers.append((head, [alts[j + 1], rest]))
            alts = [alts[0], (chain[0],)]
        out[nt] = list(alts)
        for name, rule in helpers:
            out[name] = rule
    for symbol, name in wrappers.items():
        out[name] = [()] if symbol is None else [(symbol,)]

    # step v
    def is_unit(alts):
        return len(alts) == 1 and len(alts[0]) == 1 and alts[0][0] in out

    def resolve(nt):
        seen = set()
        while is_unit(out[nt]):
            if nt in seen:
                raise GrammarValidationError(f"unit cycle through {nt}")
            seen.add(nt)
            nt = out[nt][0][0]
        return nt

    target = {nt: resolve(nt) for nt in out}
    rules = {
        nt: tuple(tuple(target.get(s, s) for s in alt) for alt in alts)
        for nt, alts in out.items()
        if target[nt] == nt
    }
    result = WeightedGrammar(target[g.axiom], rules, dict(g.weights))
    if not result.is_bcnf():
        raise InvariantError("normalization produced a non-BCNF grammar")
    return result


def ensure_bcnf(g: WeightedGrammar) -> WeightedGrammar:
    return g if g.is_bcnf() else to_bcnf(g)
