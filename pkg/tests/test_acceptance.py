"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The verdict lines are also collected into an "acceptance criteria" section
at the end of the pytest run (see conftest.py).
"""

import math
import random
import time
from collections import Counter
from fractions import Fraction

from nrgen.bcnf import to_bcnf
from nrgen.grammar import validate
from nrgen.oracle import enumerate_derivations, enumerate_words
from nrgen.randomness import make_rng
from nrgen.recursive import ForbiddenTrie, replay_walk
from nrgen.session import (ENGINES, SessionConfig, expected_attempts_uniform, generate_distinct, make_session,
                           rejection_blowup_stats, set_probability)
from nrgen.unranking import IntervalTree, RankInterval, rank, unrank, walk_of
from nrgen.weights import build_weight_table, scale_to_integer, table_for

from helpers import CNF_ZOO, language_of, named, zoo


def within_3_sigma(count, trials, p):
    p = float(p)
    return abs(count / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials)


def test_c01_oracle_counting(criterion):
    start = time.perf_counter()
    mismatches = []
    for name in ("g_bt", "g_ab"):
        g = named(name)
        sg = scale_to_integer(g)
        wt = build_weight_table(sg, 12)
        for m in range(13):
            oracle = sum((w for _, w in enumerate_words(g, m)), Fraction(0)) * sg.scale ** m
            if wt.total(m) != oracle:
                mismatches.append((name, m, wt.total(m), oracle))
    elapsed = time.perf_counter() - start
    criterion(1, not mismatches and elapsed < 5,
              f"table vs oracle for m<=12 on g_bt, g_ab: {len(mismatches)} mismatches, {elapsed:.2f}s (< 5s)")


def test_c02_rank_round_trip(criterion):
    start = time.perf_counter()
    failures = []
    checked = 0
    for name, n_max in (("g_bt", 13), ("g_ab", 12)):
        g = named(name)
        wt = table_for(g, n_max)
        for m in range(n_max + 1):
            previous_high = 0
            for word, _ in enumerate_words(g, m):
                iv = rank(wt, word)
                checked += 1
                ok = (iv.low == previous_high
                      and unrank(wt, wt.axiom, m, iv.low)[0] == word
                      and unrank(wt, wt.axiom, m, iv.high - 1)[0] == word)
                if not ok:
                    failures.append((name, word))
                previous_high = iv.high
            if previous_high != wt.total(m):
                failures.append((name, m, "tiling"))
    elapsed = time.perf_counter() - start
    criterion(2, not failures and elapsed < 10,
              f"{checked} words round-tripped and tiled, {len(failures)} failures, {elapsed:.2f}s (< 10s)")


def test_c03_coupon_collection(criterion):
    failures = []
    runs = 0
    for name, lengths in (("g_bt", (5, 7, 9)), ("g_ab", (3, 4, 5))):
        g = named(name)
        table = table_for(g, max(lengths))
        for n in lengths:
            expected = [w for w, _ in enumerate_words(g, n)]
            for engine in ("recursive", "unranking"):
                for seed in range(100):
                    result = generate_distinct(SessionConfig(g, n, len(expected), engine, seed), table)
                    runs += 1
                    if sorted(result.words) != sorted(expected) or result.exhausted:
                        failures.append((name, n, engine, seed))
    criterion(3, not failures, f"{runs} full collections, {len(failures)} differ from the oracle set")


def test_c04_single_word_distribution(criterion):
    g = named("g_ab")
    wt = table_for(g, 4)
    exact = {w: Fraction(wt.word_weight(w), wt.total(4)) for w, _ in enumerate_words(g, 4)}
    trials = 100_000
    outside = []
    for engine in ENGINES:
        rng = make_rng(4)
        counts = Counter(make_session(wt, 4, engine, rng).sample() for _ in range(trials))
        for word, p in exact.items():
            if not within_3_sigma(counts[word], trials, p):
                outside.append((engine, word, counts[word] / trials, float(p)))
    criterion(4, not outside,
              f"g_ab n=4, {trials} draws x {len(ENGINES)} engines, {len(outside)} frequencies outside 3 sigma")


def test_c05_set_distribution(criterion):
    g = named("g_ab")
    wt = table_for(g, 2)
    p = set_probability(wt, ["aa", "ab"])
    trials = 200_000
    details, ok = [], p == Fraction(11, 105)
    for engine in ("recursive", "unranking"):
        rng = make_rng(5)
        hits = 0
        for _ in range(trials):
            session = make_session(wt, 2, engine, rng)
            if {session.sample(), session.sample()} == {"aa", "ab"}:
                hits += 1
        ok = ok and within_3_sigma(hits, trials, p)
        details.append(f"{engine} {hits / trials:.5f}")
    criterion(5, ok, f"P(aa,ab) = {p} ~ {float(p):.5f}; empirical " + ", ".join(details))


def random_intervals(rng, total, count):
    cuts = sorted(rng.sample(range(total + 1), 2 * count))
    return [RankInterval(cuts[2 * i], cuts[2 * i + 1]) for i in range(count) if cuts[2 * i] < cuts[2 * i + 1]]


def test_c06_mod_random_bijection(criterion):
    rng = random.Random(6)
    violations = 0
    for _ in range(1000):
        total = rng.randint(1, 10_000)
        intervals = random_intervals(rng, total, rng.randint(0, min(50, total // 2)))
        rng.shuffle(intervals)
        tree = IntervalTree()
        for i, iv in enumerate(intervals):
            tree.insert(str(i), iv)
        image = [tree.mod_random(r) for r in range(total - tree.mass)]
        forbidden = sorted(intervals)
        for a, b in zip(image, image[1:]):
            if not a < b:  # monotone, hence injective
                violations += 1
        j = 0
        for x in image:
            while j < len(forbidden) and forbidden[j].high <= x:
                j += 1
            if j < len(forbidden) and forbidden[j].low <= x:
                violations += 1
            if not 0 <= x < total:
                violations += 1
    criterion(6, violations == 0, f"1000 instances checked exhaustively, {violations} violations")


def test_c07_trie_mass_invariant(criterion):
    g = named("g_bt")
    n = 9
    wt = table_for(g, n)
    bcnf = wt.sg.grammar
    words = [w for w, _ in enumerate_words(g, n)]
    walks = {w: walk_of(wt, w) for w in words}
    below: dict[tuple, frozenset] = {}  # walk prefix -> words derivable from its immature word

    def words_below(path):
        if path not in below:
            omega = replay_walk(wt, path, ((wt.axiom, n),))[-1]
            below[path] = frozenset(w for w, _ in language_of(bcnf, omega))
        return below[path]

    rng = random.Random(7)
    checks = violations = 0
    for _ in range(100):
        order = words[:]
        rng.shuffle(order)
        trie, forbidden = ForbiddenTrie(), set()
        for w in order:
            trie.insert(walks[w], wt.word_weight(w))
            forbidden.add(w)
            for path, node in trie.nodes():
                checks += 1
                brute = sum(wt.word_weight(x) for x in words_below(path) & forbidden)
                if node.fmass != brute:
                    violations += 1
    criterion(7, violations == 0, f"g_bt n=9, 100 orders, {checks} node checks, {violations} violations")


def test_c08_delta_invariant(criterion):
    rng = random.Random(8)
    violations = checks = 0

    def visit(node):
        nonlocal violations, checks
        if node is None:
            return 0, 0
        lh, lmass = visit(node.left)
        rh, rmass = visit(node.right)
        checks += 1
        if node.delta != lmass or abs(lh - rh) > 1 or node.height != 1 + max(lh, rh):
            violations += 1
        return 1 + max(lh, rh), lmass + rmass + node.high - node.low

    for _ in range(1000):
        intervals = random_intervals(rng, 10_000, rng.randint(1, 50))
        rng.shuffle(intervals)
        tree = IntervalTree()
        for i, iv in enumerate(intervals):
            tree.insert(str(i), iv)
            visit(tree.root)
    criterion(8, violations == 0, f"1000 insertion sequences, {checks} node checks, {violations} violations")


def test_c09_uniform_rejection_expectation(criterion):
    g = named("g_bt")
    table = table_for(g, 9)
    runs = 10_000
    total = sum(generate_distinct(SessionConfig(g, 9, 14, "rejection", seed), table).attempts for seed in range(runs))
    mean = total / runs
    expected = float(expected_attempts_uniform(14, 14))
    rel = abs(mean - expected) / expected
    criterion(9, rel <= 0.05, f"mean attempts {mean:.3f} vs 14*H14 = {expected:.3f} ({rel:.2%} off, <= 5%)")


def test_c10_weighted_rejection_blowup(criterion):
    g = named("g_ab")
    wt = table_for(g, 15)
    stats = rejection_blowup_stats(wt, 10, 2000, make_rng(10), 15)
    means = stats.mean_attempts
    growth = (means[9] / means[5]) ** (1 / 4)  # geometric mean of the ratios for k = 6..10
    exact_draws = True
    for engine in ("recursive", "unranking"):
        for k in range(1, 11):
            for seed in range(5):
                if generate_distinct(SessionConfig(g, 15, k, engine, seed), wt).attempts != k:
                    exact_draws = False
    detail = ", ".join(f"k={k}: {means[k - 1]:.1f}" for k in range(6, 11))
    criterion(10, growth >= 1.5 and exact_draws,
              f"rejection means {detail}; growth per k {growth:.2f} (>= 1.5); "
              f"non-redundant engines use exactly k draws: {exact_draws}")


def test_c11_bcnf_transform(criterion):
    failures = []
    for name in CNF_ZOO:
        g = zoo(name)
        b = to_bcnf(g)
        if not (b.is_bcnf() and validate(b).ok):
            failures.append((name, "not BCNF"))
            continue
        for m in range(11):
            if Counter(enumerate_derivations(b, m)) != Counter(enumerate_derivations(g, m)):
                failures.append((name, m))
    criterion(11, not failures, f"{len(CNF_ZOO)} CNF grammars, languages equal for m<=10, failures: {failures}")


def timed_sampling(g, n, k, engine):
    best = math.inf
    for seed in range(2):
        start = time.perf_counter()
        result = generate_distinct(SessionConfig(g, n, k, engine, seed))
        best = min(best, time.perf_counter() - start)
        assert len(set(result.words)) == k
    return best


def test_c12_scaling_trend(criterion):
    # binary trees only have odd lengths, so 1001/2001 stand in for 1000/2000
    g = named("g_bt")
    lines, ok = [], True
    for engine in ("recursive", "unranking"):
        t1 = timed_sampling(g, 1001, 100, engine)
        t2 = timed_sampling(g, 2001, 100, engine)
        ok = ok and t1 < 60 and t2 < 5 * t1
        lines.append(f"{engine}: {t1:.2f}s at n=1001, {t2:.2f}s at n=2001 (ratio {t2 / t1:.2f})")
    criterion(12, ok, "; ".join(lines) + " (< 60s, ratio < 5)")
