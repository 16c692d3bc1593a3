import itertools

import pytest
from hypothesis import given, strategies as st

from taxprob import (BOTTOM, TOP, AtomicEvent, Universe, UnknownEventError,
                     atom_implies, conjoin, conjunction, enumerate_atoms,
                     normalize_event)
from taxprob.errors import AtomSpaceError
from taxprob.events import enumerate_atom_masks
from taxprob.taxonomy import TaxonomicFormula, TaxonomyStore

from helpers import mutex_kb

names = st.sampled_from(["a", "b", "c", "d"])
events = st.one_of(
    st.just(BOTTOM),
    st.lists(names, min_size=0, max_size=4).map(conjunction),
)


def test_normalize_collapses_duplicates():
    assert normalize_event(["A", "A", "B"]) == conjunction(["A", "B"])


def test_normalize_false_absorbs():
    assert normalize_event(["false", "A"]) is BOTTOM
    assert normalize_event(["A", "false"]) is BOTTOM


def test_normalize_true_is_neutral():
    assert normalize_event(["true"]) is TOP
    assert normalize_event(["true", "A"]) == conjunction(["A"])


def test_normalize_rejects_unknown_names_with_universe():
    u = Universe(["A", "B"])
    with pytest.raises(UnknownEventError):
        normalize_event(["A", "Z"], u)


def test_normalize_rejects_empty():
    with pytest.raises(ValueError):
        normalize_event([])


def test_conjunction_is_canonically_ordered():
    assert conjunction(["b", "a"]).names == ("a", "b")
    assert str(conjunction(["b", "a"])) == "a b"
    assert conjunction(["a", "b"]) is conjunction(["b", "a", "a"])


def test_conjoin_examples():
    a = conjunction(["A"])
    ac = conjunction(["A", "C"])
    assert conjoin(a, ac) is ac
    assert conjoin(BOTTOM, conjunction(["B"])) is BOTTOM
    assert conjoin(TOP, conjunction(["C"])) == conjunction(["C"])


@given(events, events, events)
def test_conjoin_algebra(c, d, e):
    assert conjoin(c, d) is conjoin(d, c)
    assert conjoin(c, c) is c
    assert conjoin(conjoin(c, d), e) is conjoin(c, conjoin(d, e))
    assert conjoin(c, TOP) is c
    assert conjoin(c, BOTTOM) is BOTTOM


def test_atom_implies_examples():
    u = Universe(["A", "B", "C"])
    atom = AtomicEvent.from_signs(u, {"A": True, "B": False, "C": True})
    assert atom_implies(atom, conjunction(["A", "C"]))
    assert not atom_implies(atom, conjunction(["A", "B"]))
    assert atom_implies(atom, TOP)
    assert not atom_implies(atom, BOTTOM)


@given(st.integers(0, 7), events, events)
def test_atom_implies_distributes_over_conjoin(mask, g, h):
    u = Universe(["a", "b", "c"])
    ok = all(n in u.index for n in g.names) and all(n in u.index for n in h.names)
    if not ok:
        return
    atom = AtomicEvent(u, mask)
    assert atom_implies(atom, conjoin(g, h)) == (
        atom_implies(atom, g) and atom_implies(atom, h))


def test_enumerate_atoms_counts():
    assert len(list(enumerate_atoms(Universe(["a", "b"])))) == 4
    assert len(list(enumerate_atoms(Universe(["a", "b", "c"])))) == 8


def test_enumerate_atoms_pairwise_exclusion_n10():
    kb, _, _ = mutex_kb(10)
    atoms = list(enumerate_atoms(kb.universe, kb.taxonomy))
    # brute-force expectation: at most one positive sign per atom
    expected = [m for m in range(2 ** 10) if bin(m).count("1") <= 1]
    assert sorted(a.mask for a in atoms) == expected
    assert len(atoms) == 11


def test_enumerate_atoms_cap():
    u = Universe([f"x{i}" for i in range(8)])
    with pytest.raises(AtomSpaceError):
        list(enumerate_atoms(u, cap=100))


def test_pruned_enumeration_equals_filtered_enumeration():
    # pruning must yield exactly the unpruned atoms passing the rule check
    import random
    rng = random.Random(5)
    for trial in range(20):
        n = rng.randint(2, 6)
        names = [f"x{i}" for i in range(n)]
        u = Universe(names)
        formulas = []
        for _ in range(rng.randint(0, 4)):
            lhs = conjunction(rng.sample(names, rng.randint(1, 2)))
            rhs = (BOTTOM if rng.random() < 0.3
                   else conjunction(rng.sample(names, rng.randint(1, 2))))
            formulas.append(TaxonomicFormula(lhs, rhs))
        store = TaxonomyStore(u, formulas)
        pruned = set(enumerate_atom_masks(u, store))

        def consistent(mask):
            for fm in store.formulas:
                lm = u.mask_of(fm.lhs)
                rm = u.mask_of(fm.rhs)
                if lm is None:
                    continue
                if lm & ~mask == 0:  # atom implies lhs
                    if rm is None or rm & ~mask != 0:
                        return False
            return True

        unpruned = {m for m in range(2 ** n) if consistent(m)}
        assert pruned == unpruned


def test_atoms_stream_in_deterministic_order():
    u = Universe(["a", "b", "c"])
    masks = [a.mask for a in enumerate_atoms(u)]
    assert masks == sorted(masks)
