"""Taxonomic formulas and linear-time entailment via a hull operator.

A taxonomic formula G -> H constrains probabilistic interpretations to
Pr(G) = Pr(GH).  Over conjunctive events these formulas behave exactly like
functional dependencies, so entailment reduces to an attribute-set closure:
the smallest superset of a seed that fires every rule whose left-hand side it
covers.  Closure is computed with a counter-based worklist, linear in the
total size of the store, and memoized per seed because guard computation and
saturation ask the same queries over and over.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

from .events import BOTTOM, ConjunctiveEvent, Universe, conjoin


@dataclass(frozen=True)
class TaxonomicFormula:
    """An implication between two conjunctive events."""

    lhs: ConjunctiveEvent
    rhs: ConjunctiveEvent

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class ClosureResult:
    """Closure of a seed set: the reached names plus whether falsum was hit.

    When falsum is reached the closure is the whole universe (from a
    zero-probability event everything follows).
    """

    reached: FrozenSet[str]
    falsum: bool


@dataclass(frozen=True)
class GuardFlags:
    """The six taxonomic entailments that switch rule operands on and off.

    For chain roles A, B, C: alpha is ABC -> false, beta is C -> A,
    gamma is A -> C, delta is BC -> A, epsilon is AB -> C, zeta is AC -> B.
    """

    alpha: bool
    beta: bool
    gamma: bool
    delta: bool
    epsilon: bool
    zeta: bool

    @property
    def bits(self) -> int:
        return (self.alpha | self.beta << 1 | self.gamma << 2
                | self.delta << 3 | self.epsilon << 4 | self.zeta << 5)

    def swap(self) -> "GuardFlags":
        """Guard remap under the chain mirror (A, B, C) -> (C, B, A)."""
        return GuardFlags(self.alpha, self.gamma, self.beta,
                          self.epsilon, self.delta, self.zeta)

    def __str__(self):
        names = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta")
        on = [n for n in names if getattr(self, n)]
        return "{" + ", ".join(on) + "}"


class TaxonomyStore:
    """An immutable set of taxonomic formulas over one universe."""

    def __init__(self, universe: Universe,
                 formulas: Iterable[TaxonomicFormula] = ()):
        self.universe = universe
        seen = {}
        for fm in formulas:
            universe.check_event(fm.lhs)
            universe.check_event(fm.rhs)
            seen[(fm.lhs.uid, fm.rhs.uid)] = fm
        self.formulas: Tuple[TaxonomicFormula, ...] = tuple(
            sorted(seen.values(),
                   key=lambda f: (f.lhs.sort_key, f.rhs.sort_key)))

        # per-formula: lhs name set, rhs name tuple (None = bottom), plus an
        # index from name to the formulas whose lhs mentions it
        self._lhs_sets = []
        self._rhs_adds = []
        self._by_lhs_name: dict = {n: [] for n in universe.names}
        self._root_rules = []  # formulas with an empty (top) lhs
        for idx, fm in enumerate(self.formulas):
            if fm.lhs.is_bottom or fm.rhs.is_top:
                # bottom -> H and G -> top are tautologies
                self._lhs_sets.append(None)
                self._rhs_adds.append(None)
                continue
            lhs = frozenset(fm.lhs.names)
            rhs = None if fm.rhs.is_bottom else fm.rhs.names
            self._lhs_sets.append(lhs)
            self._rhs_adds.append(rhs)
            if lhs:
                for n in lhs:
                    self._by_lhs_name[n].append(idx)
            else:
                self._root_rules.append(idx)

        self._closure_memo: dict = {}
        self._entails_memo: dict = {}
        self._false_memo: dict = {}
        self._guard_memo: dict = {}

    # -- closure -----------------------------------------------------------

    def closure(self, seed: Iterable[str]) -> ClosureResult:
        """Smallest rule-closed superset of the seed (memoized)."""
        seed_set = frozenset(seed)
        cached = self._closure_memo.get(seed_set)
        if cached is not None:
            return cached
        result = self._compute_closure(seed_set)
        self._closure_memo[seed_set] = result
        return result

    def _compute_closure(self, seed_set: frozenset) -> ClosureResult:
        for n in seed_set:
            if n not in self.universe.index:
                raise ValueError(f"seed name {n!r} not in universe")
        reached = set(seed_set)
        # per touched formula: how many lhs members have not been processed
        # yet; every reached name is processed exactly once, so each formula
        # fires exactly when its whole lhs has been reached
        pending: dict = {}
        falsum = False
        todo = list(seed_set)

        def fire(idx: int) -> bool:
            # returns True when falsum is reached
            adds = self._rhs_adds[idx]
            if adds is None:
                return True
            for name in adds:
                if name not in reached:
                    reached.add(name)
                    todo.append(name)
            return False

        for idx in self._root_rules:
            if fire(idx):
                falsum = True

        while todo and not falsum:
            name = todo.pop()
            for idx in self._by_lhs_name[name]:
                remaining = pending.get(idx)
                if remaining is None:
                    remaining = len(self._lhs_sets[idx])
                remaining -= 1
                pending[idx] = remaining
                if remaining == 0 and fire(idx):
                    falsum = True
                    break

        if falsum:
            return ClosureResult(frozenset(self.universe.names), True)
        return ClosureResult(frozenset(reached), False)

    # -- entailment --------------------------------------------------------

    def entails(self, g: ConjunctiveEvent, h: ConjunctiveEvent) -> bool:
        """Does the store entail g -> h?"""
        key = (g.uid, h.uid)
        cached = self._entails_memo.get(key)
        if cached is not None:
            return cached
        result = self._compute_entails(g, h)
        self._entails_memo[key] = result
        return result

    def _compute_entails(self, g: ConjunctiveEvent, h: ConjunctiveEvent) -> bool:
        if g.is_bottom or h.is_top:
            return True
        cl = self.closure(g.names)
        if cl.falsum:
            return True
        if h.is_bottom:
            return False
        return frozenset(h.names) <= cl.reached

    def forces_false(self, g: ConjunctiveEvent) -> bool:
        """Does the store entail g -> false?"""
        cached = self._false_memo.get(g.uid)
        if cached is None:
            cached = self.entails(g, BOTTOM)
            self._false_memo[g.uid] = cached
        return cached

    def guard_flags(self, a: ConjunctiveEvent, b: ConjunctiveEvent,
                    c: ConjunctiveEvent) -> GuardFlags:
        """The six guard entailments for chain roles (a, b, c)."""
        key = (a.uid, b.uid, c.uid)
        cached = self._guard_memo.get(key)
        if cached is not None:
            return cached
        ab = conjoin(a, b)
        bc = conjoin(b, c)
        ac = conjoin(a, c)
        flags = GuardFlags(
            alpha=self.forces_false(conjoin(ab, c)),
            beta=self.entails(c, a),
            gamma=self.entails(a, c),
            delta=self.entails(bc, a),
            epsilon=self.entails(ab, c),
            zeta=self.entails(ac, b),
        )
        self._guard_memo[key] = flags
        return flags
