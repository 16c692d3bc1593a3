"""Shared builders for the test suite: fixture loading, the worked example
rows with their chain roles, the mutual-exclusion family, and the random
generators used by the property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from taxprob import (BOTTOM, TOP, Interval, KnowledgeBase,
                     ProbabilisticFormula, TaxonomicFormula, TaxonomyStore,
                     Universe, conjoin, conjunction, parse_kb,
                     validate_coherence)

FIXTURES = Path(__file__).parent / "fixtures"

# chain roles (A, B, C) for the worked example rows, by fixture name
ROW_ROLES = {
    "row_a": ("A", "B", "C"),
    "row_b": ("A", "B", "C"),
    "row_c": ("A", "B", "C"),
    "row_d": ("A", "B", "C"),
    "row_e": ("A", "B", "A C"),
    "row_f": ("A", "B", "C"),
    "row_g": ("A", "B", "C"),
    "row_h": ("A", "B", "C"),
    "row_i": ("A", "B", "C"),
    "row_j": ("A", "B", "A C"),
    "row_k": ("A", "B", "C"),
}


def load_fixture(name):
    text = (FIXTURES / f"{name}.kb").read_text(encoding="utf-8")
    return parse_kb(text)


def load_row(name):
    """KB plus the chain roles for one of the worked example rows."""
    parsed = load_fixture(name)
    roles = tuple(conjunction(spec.split()) for spec in ROW_ROLES[name])
    return parsed.kb, roles


def mutex_kb(n):
    """n pairwise-exclusive events, each with probability at least 1/n."""
    names = [f"B{i:03d}" for i in range(1, n + 1)]
    universe = Universe(names)
    evs = {nm: conjunction([nm]) for nm in names}
    tax = TaxonomyStore(universe, [
        TaxonomicFormula(conjoin(evs[a], evs[b]), BOTTOM)
        for i, a in enumerate(names) for b in names[i + 1:]])
    pkb = [ProbabilisticFormula(evs[nm], TOP, Interval.make(Fraction(1, n), 1))
           for nm in names]
    return KnowledgeBase(universe, tax, pkb), evs, names


# -- random generation --------------------------------------------------------

GRID = [Fraction(i, 20) for i in range(21)]


def random_event(rng, names, top_weight=0.12):
    if rng.random() < top_weight:
        return TOP
    k = rng.randint(1, min(3, len(names)))
    return conjunction(rng.sample(names, k))


def random_taxonomy(rng, universe, names, max_formulas=3, bottom_weight=0.15):
    formulas = []
    for _ in range(rng.randint(0, max_formulas)):
        lhs = conjunction(rng.sample(names, rng.randint(1, min(2, len(names)))))
        if rng.random() < bottom_weight:
            rhs = BOTTOM
        else:
            rhs = conjunction(rng.sample(names, rng.randint(1, min(2, len(names)))))
        formulas.append(TaxonomicFormula(lhs, rhs))
    return TaxonomyStore(universe, formulas)


def draw_interval(rng, forced_one=False, forced_zero=False):
    if forced_zero:
        return Interval.make(0, 0)
    if forced_one:
        return Interval.make(1, 1)
    lo = rng.choice(GRID[:-1])
    hi = rng.choice([h for h in GRID if h >= lo and h > 0])
    return Interval.make(lo, hi)


def random_chain_kb(rng, max_basics=4):
    """A random coherent chain KB with its roles, or None when the draw is
    rejected (taxonomy-false role, or an impossible bound combination)."""
    n = rng.randint(2, max_basics)
    names = ["a", "b", "c", "d"][:n]
    universe = Universe(names)
    tax = random_taxonomy(rng, universe, names)
    roles = [random_event(rng, names) for _ in range(3)]
    if any(tax.forces_false(r) for r in roles):
        return None
    a, b, c = roles
    drawn = {}
    for concl, prem in ((b, a), (a, b), (c, b), (b, c)):
        key = (concl.uid, prem.uid)
        if key in drawn:
            continue
        forced_one = tax.entails(prem, concl)
        forced_zero = tax.forces_false(conjoin(prem, concl))
        if forced_one and forced_zero:
            return None
        drawn[key] = ProbabilisticFormula(
            concl, prem, draw_interval(rng, forced_one, forced_zero))
    kb = KnowledgeBase(universe, tax, list(drawn.values()))
    if validate_coherence(kb):
        return None
    return kb, a, b, c


def random_small_kb(rng, max_basics=4, max_formulas=6):
    """A random coherent KB (not necessarily satisfiable)."""
    n = rng.randint(2, max_basics)
    names = ["a", "b", "c", "d"][:n]
    universe = Universe(names)
    tax = random_taxonomy(rng, universe, names, max_formulas=2)
    formulas = {}
    for _ in range(rng.randint(1, max_formulas)):
        concl = random_event(rng, names, top_weight=0.05)
        prem = random_event(rng, names)
        if tax.forces_false(prem) or concl.is_top:
            continue
        key = (concl.uid, prem.uid)
        if key in formulas:
            continue
        forced_one = tax.entails(prem, concl)
        forced_zero = tax.forces_false(conjoin(prem, concl))
        if forced_one and forced_zero:
            continue
        formulas[key] = ProbabilisticFormula(
            concl, prem, draw_interval(rng, forced_one, forced_zero))
    if not formulas:
        return None
    kb = KnowledgeBase(universe, tax, list(formulas.values()))
    if validate_coherence(kb):
        return None
    return kb


def random_store(rng, n, max_formulas=5):
    names = [f"e{i}" for i in range(n)]
    universe = Universe(names)
    return random_taxonomy(rng, universe, names,
                           max_formulas=max_formulas), universe, names
