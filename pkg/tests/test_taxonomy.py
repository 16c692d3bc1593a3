import random

from hypothesis import given, settings, strategies as st

from taxprob import (BOTTOM, TOP, TaxonomicFormula, TaxonomyStore, Universe,
                     conjunction, normalize_event)

from helpers import load_row, random_store


def store_over(names, *formulas):
    u = Universe(names)
    built = [TaxonomicFormula(normalize_event(lhs.split()),
                              normalize_event(rhs.split()))
             for lhs, rhs in formulas]
    return TaxonomyStore(u, built)


def test_closure_fires_rules():
    s = store_over(["A", "B", "C"], ("C", "A"), ("A B", "C"))
    r = s.closure({"A", "B"})
    assert r.reached == {"A", "B", "C"} and not r.falsum
    r = s.closure({"C"})
    assert r.reached == {"A", "C"} and not r.falsum


def test_closure_ex_falso():
    s = store_over(["A", "B", "C"], ("A B C", "false"))
    r = s.closure({"A", "B", "C"})
    assert r.falsum and r.reached == {"A", "B", "C"}


def test_entails_examples():
    empty = store_over(["A", "B", "C"])
    assert empty.entails(conjunction(["A", "C"]), conjunction(["A"]))
    s = store_over(["A", "B", "C"], ("C", "A"))
    assert s.entails(conjunction(["B", "C"]), conjunction(["A"]))
    s2 = store_over(["A", "B", "C"], ("A B", "false"))
    assert s2.entails(conjunction(["A", "B"]), conjunction(["C"]))


def test_entails_bottom_and_top_edges():
    s = store_over(["A", "B"])
    assert s.entails(BOTTOM, conjunction(["A"]))
    assert s.entails(conjunction(["A"]), TOP)
    assert not s.entails(conjunction(["A"]), BOTTOM)


def test_forces_false():
    s = store_over(["A", "B", "C"], ("A B C", "false"))
    assert s.forces_false(conjunction(["A", "B", "C"]))
    assert not s.forces_false(conjunction(["A", "B"]))
    assert s.forces_false(BOTTOM)


def test_tautological_formulas_are_inert():
    s = store_over(["A", "B"], ("false", "A"), ("A", "true"))
    assert s.closure({"B"}).reached == {"B"}
    assert not s.forces_false(conjunction(["A"]))


def test_guard_flags_row_g():
    kb, (a, b, c) = load_row("row_g")
    flags = kb.taxonomy.guard_flags(a, b, c)
    assert (flags.beta, flags.delta, flags.epsilon) == (True, True, True)
    assert not (flags.alpha or flags.gamma or flags.zeta)


def test_guard_flags_row_j_structural():
    kb, (a, b, c) = load_row("row_j")
    flags = kb.taxonomy.guard_flags(a, b, c)
    assert flags.beta and flags.delta
    assert not (flags.alpha or flags.gamma or flags.epsilon or flags.zeta)


def test_guard_flags_row_k_all_clear():
    kb, (a, b, c) = load_row("row_k")
    flags = kb.taxonomy.guard_flags(a, b, c)
    assert flags.bits == 0


seeds = st.lists(st.sampled_from(["e0", "e1", "e2", "e3"]), max_size=4)


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6), seeds, seeds)
def test_closure_hull_laws(seed, s1, s2):
    rng = random.Random(seed)
    store, universe, names = random_store(rng, 4)
    s1 = frozenset(s1)
    s2 = frozenset(s2)
    r1 = store.closure(s1)
    # extensive
    assert s1 <= r1.reached
    # idempotent
    again = store.closure(r1.reached)
    assert again.reached == r1.reached and again.falsum == r1.falsum
    # monotone
    joint = store.closure(s1 | s2)
    assert r1.reached <= joint.reached
    if r1.falsum:
        assert joint.falsum
        assert r1.reached == frozenset(names)


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_guard_implications(seed):
    # entailment is preserved when premises gain conjuncts, so beta implies
    # delta and gamma implies epsilon
    rng = random.Random(seed)
    store, universe, names = random_store(rng, 4)
    evs = [conjunction(rng.sample(names, rng.randint(1, 3))) for _ in range(3)]
    flags = store.guard_flags(*evs)
    assert not flags.beta or flags.delta
    assert not flags.gamma or flags.epsilon


def test_guard_swap_remap():
    rng = random.Random(11)
    for _ in range(50):
        store, universe, names = random_store(rng, 4)
        a, b, c = (conjunction(rng.sample(names, rng.randint(1, 2)))
                   for _ in range(3))
        fwd = store.guard_flags(a, b, c)
        rev = store.guard_flags(c, b, a)
        assert fwd.swap() == rev
        assert fwd.swap().swap() == fwd
