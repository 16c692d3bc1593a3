"""Globally complete tight answers by linear programming over atomic events.

A probabilistic interpretation is a nonnegative mass vector over the
taxonomy-consistent atoms summing to one; each asserted conditional
(H|G)[l, u] contributes the two homogeneous rows

    sum_{A => GH} m_A - l * sum_{A => G} m_A >= 0
    u * sum_{A => G} m_A - sum_{A => GH} m_A >= 0.

For a goal (F|E), whether any model gives the premise positive probability is
decided by maximizing Pr(E) over the mass polytope.  If so, the conditional
ratio is linearized by rescaling: over y >= 0 with the homogeneous rows and
sum_{A => E} y_A = 1, the objective sum_{A => EF} y_A ranges exactly over the
achievable values of Pr(EF)/Pr(E) (divide any feasible y by its total mass to
recover a model).  Minimizing and maximizing it yields the attained tight
bounds; the objective lives in [0, 1], so an unbounded status is impossible.

This module is the ground truth the rule suites are validated against, so it
never takes a floating-point shortcut.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InternalSolverError
from .events import (DEFAULT_ATOM_CAP, AtomicEvent, ConjunctiveEvent, Universe,
                     conjoin, enumerate_atom_masks, mask_implies)
from .intervals import Interval
from .kb import KnowledgeBase, QueryAnswer
from .lp import solve_lp
from .taxonomy import TaxonomyStore

ATOM_CAP_ENV = "TAXPROB_ATOM_CAP"


def atom_cap(default: int = DEFAULT_ATOM_CAP) -> int:
    raw = os.environ.get(ATOM_CAP_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


@dataclass(frozen=True)
class AtomSystem:
    """Taxonomy-consistent atoms and the constraint rows over their masses.

    Every row means `coeffs . m >= 0`; there are two per probabilistic
    formula.  Rows whose coefficients are all nonnegative are trivially
    satisfied by any nonnegative mass vector; solvers skip them.
    """

    universe: Universe
    atom_masks: Tuple[int, ...]
    rows: Tuple[Tuple[Fraction, ...], ...]

    @property
    def atoms(self) -> Tuple[AtomicEvent, ...]:
        return tuple(AtomicEvent(self.universe, m) for m in self.atom_masks)

    def indicator(self, event: ConjunctiveEvent) -> List[int]:
        mask = self.universe.mask_of(event)
        return [1 if mask_implies(am, mask) else 0 for am in self.atom_masks]

    def active_rows(self):
        return [r for r in self.rows if any(c < 0 for c in r)]


def build_atom_system(kb: KnowledgeBase, cap: Optional[int] = None) -> AtomSystem:
    """Enumerate consistent atoms and assemble the constraint rows."""
    if kb._atom_system is not None and cap is None:
        return kb._atom_system
    masks = tuple(enumerate_atom_masks(kb.universe, kb.taxonomy,
                                       cap if cap is not None else atom_cap()))
    rows: List[Tuple[Fraction, ...]] = []
    for fm in kb.probabilistic:
        g_mask = kb.universe.mask_of(fm.premise)
        gh_mask = kb.universe.mask_of(conjoin(fm.premise, fm.conclusion))
        lo, hi = fm.interval.lo, fm.interval.hi
        lower = []
        upper = []
        for am in masks:
            if not mask_implies(am, g_mask):
                lower.append(Fraction(0))
                upper.append(Fraction(0))
                continue
            in_gh = mask_implies(am, gh_mask)
            lower.append((1 - lo) if in_gh else -lo)
            upper.append((hi - 1) if in_gh else hi)
        rows.append(tuple(Fraction(c) for c in lower))
        rows.append(tuple(Fraction(c) for c in upper))
    system = AtomSystem(kb.universe, masks, tuple(rows))
    if cap is None:
        kb._atom_system = system
    return system


def _mass_rows(system: AtomSystem):
    n = len(system.atom_masks)
    rows = [(row, ">=", Fraction(0)) for row in system.active_rows()]
    rows.append(([Fraction(1)] * n, "==", Fraction(1)))
    return rows


def kb_satisfiable(kb: KnowledgeBase) -> bool:
    """Is there any probabilistic interpretation satisfying the KB?"""
    system = build_atom_system(kb)
    n = len(system.atom_masks)
    if n == 0:
        return False
    res = solve_lp([Fraction(0)] * n, _mass_rows(system), maximize=True)
    return res.status == "optimal"


def max_event_probability(kb: KnowledgeBase,
                          event: ConjunctiveEvent) -> Optional[Fraction]:
    """Largest Pr(event) over all models; None when the KB is unsatisfiable."""
    system = build_atom_system(kb)
    n = len(system.atom_masks)
    if n == 0:
        return None
    obj = [Fraction(c) for c in system.indicator(event)]
    res = solve_lp(obj, _mass_rows(system), maximize=True)
    if res.status != "optimal":
        return None
    return res.value


def tight_answer(kb: KnowledgeBase,
                 goal: Tuple[ConjunctiveEvent, ConjunctiveEvent]) -> QueryAnswer:
    """The exact tight bounds entailed by the whole KB for (F|E)."""
    f, e = goal
    kb.universe.check_event(f)
    kb.universe.check_event(e)
    best_e = max_event_probability(kb, e)
    if best_e is None or best_e == 0:
        return QueryAnswer.empty_answer()

    system = build_atom_system(kb)
    n = len(system.atom_masks)
    e_ind = system.indicator(e)
    ef_ind = system.indicator(conjoin(e, f))
    rows = [(row, ">=", Fraction(0)) for row in system.active_rows()]
    rows.append(([Fraction(c) for c in e_ind], "==", Fraction(1)))
    obj = [Fraction(c) for c in ef_ind]

    bounds = []
    for maximize in (False, True):
        res = solve_lp(obj, rows, maximize=maximize)
        if res.status != "optimal":
            raise InternalSolverError(
                f"rescaled query LP reported {res.status}; the objective is "
                "bounded in [0, 1] and the premise was shown feasible")
        bounds.append(res.value)
    return QueryAnswer(bounds[0], bounds[1], False, ())


def tight_interval(kb: KnowledgeBase, f: ConjunctiveEvent,
                   e: ConjunctiveEvent) -> Optional[Interval]:
    """Like tight_answer but as an Interval; None for the empty answer."""
    ans = tight_answer(kb, (f, e))
    if ans.empty:
        return None
    return Interval.make(ans.lower, ans.upper)


def entails_bruteforce(store: TaxonomyStore, g: ConjunctiveEvent,
                       h: ConjunctiveEvent, cap: Optional[int] = None) -> bool:
    """Semantic taxonomic entailment: every consistent atom implying g
    implies h (for h = bottom: no consistent atom implies g)."""
    g_mask = store.universe.mask_of(g)
    h_mask = store.universe.mask_of(h)
    if g_mask is None:
        return True
    for am in enumerate_atom_masks(store.universe, store,
                                   cap if cap is not None else atom_cap()):
        if mask_implies(am, g_mask) and not mask_implies(am, h_mask):
            return False
    return True
