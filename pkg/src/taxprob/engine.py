"""Iterative local deduction: seed, saturate, query.

The engine keeps one best-known interval per (conclusion, premise) pair,
defaulting to the canonical (taxonomy-forced) interval, and repeatedly applies
the inference rules to candidate chains until no interval strictly shrinks.

Candidate selection: a chain whose four input conditionals all sit at their
canonical values cannot improve anything — the rules are locally complete, so
their output is then exactly the tight consequence of the taxonomy alone,
which the canonical defaults already encode.  Each sweep therefore only
evaluates chains that read at least one *informative* pair (an interval
strictly tighter than its taxonomy-forced value): initially the asserted
bounds, later anything a rule improved.  Chains containing a taxonomy-false
role event are skipped entirely; such premises cannot belong to a coherent
chain, and every conditional over them is already settled by convention.

Rule evaluation is cached by the chain's value signature (the four interval
identities, the guard bits and the product-false flags), which collapses the
large families of isomorphic chains that big uniform knowledge bases produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .chains import ChainPremise, ConsistencyVerdict, check_consistency
from .errors import CoherenceError, ProbabilisticConflictError
from .events import TOP, ConjunctiveEvent, conjoin
from .intervals import Interval
from .kb import KnowledgeBase, QueryAnswer, validate_coherence
from .rules import ALL_RULES, evaluate_slots

POOL_POLICIES = ("kb-events", "kb-plus-products")


@dataclass(frozen=True)
class EngineConfig:
    enabled_rules: FrozenSet[str] = ALL_RULES
    both_orientations: bool = True
    pool_policy: str = "kb-plus-products"
    max_sweeps: int = 100
    pool_cap: int = 512

    def __post_init__(self):
        if not self.enabled_rules:
            raise ValueError("enabled_rules must be nonempty")
        unknown = self.enabled_rules - ALL_RULES
        if unknown:
            raise ValueError(f"unknown rules: {sorted(unknown)}")
        if self.pool_policy not in POOL_POLICIES:
            raise ValueError(f"pool_policy must be one of {POOL_POLICIES}")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be positive")


@dataclass(frozen=True)
class TraceStep:
    """One strict interval improvement and the chain that produced it."""

    rule: str
    a: ConjunctiveEvent
    b: ConjunctiveEvent
    c: ConjunctiveEvent
    u: Interval
    v: Interval
    x: Interval
    y: Interval
    conclusion: ConjunctiveEvent
    premise: ConjunctiveEvent
    old: Interval
    new: Interval
    lower_tags: Tuple[str, ...]
    upper_tags: Tuple[str, ...]

    @property
    def produced_key(self):
        return (self.conclusion.uid, self.premise.uid)

    @property
    def input_keys(self):
        return ((self.b.uid, self.a.uid), (self.a.uid, self.b.uid),
                (self.c.uid, self.b.uid), (self.b.uid, self.c.uid))

    def __str__(self):
        return (f"{self.rule}: ({self.conclusion} | {self.premise}) "
                f"{self.old} -> {self.new} "
                f"[chain A={self.a}, B={self.b}, C={self.c}; "
                f"lower: {', '.join(self.lower_tags) or '-'}; "
                f"upper: {', '.join(self.upper_tags) or '-'}]")


@dataclass(frozen=True)
class ChainDiagnostic:
    a: ConjunctiveEvent
    b: ConjunctiveEvent
    c: ConjunctiveEvent
    verdict: ConsistencyVerdict

    def __str__(self):
        return f"chain A={self.a}, B={self.b}, C={self.c}: {self.verdict}"


class DeductionState:
    """Mutable saturation state over an immutable KB."""

    def __init__(self, kb: KnowledgeBase, config: EngineConfig,
                 pool: Sequence[ConjunctiveEvent],
                 role_pool: Sequence[ConjunctiveEvent]):
        self.kb = kb
        self.config = config
        self.pool = tuple(pool)
        self.role_pool = tuple(role_pool)
        self.intervals: Dict[Tuple[int, int], Interval] = {}
        self.events_by_uid: Dict[int, ConjunctiveEvent] = {}
        self.informative: set = set()
        self.trace: List[TraceStep] = []
        self.diagnostics: List[ChainDiagnostic] = []
        self.sweeps_run = 0
        self.stop_reason: Optional[str] = None
        self._slot_cache: dict = {}

    def register(self, event: ConjunctiveEvent) -> ConjunctiveEvent:
        self.events_by_uid[event.uid] = event
        return event

    def get_interval(self, conclusion: ConjunctiveEvent,
                     premise: ConjunctiveEvent) -> Interval:
        """Best known interval: a stored improvement or the canonical default."""
        stored = self.intervals.get((conclusion.uid, premise.uid))
        if stored is not None:
            return stored
        return self.kb.canonical_interval(conclusion, premise)

    def store(self, conclusion: ConjunctiveEvent, premise: ConjunctiveEvent,
              interval: Interval):
        self.register(conclusion)
        self.register(premise)
        self.intervals[(conclusion.uid, premise.uid)] = interval


def seed_state(kb: KnowledgeBase, config: EngineConfig = EngineConfig(),
               queries: Iterable[Tuple[ConjunctiveEvent, ConjunctiveEvent]] = ()
               ) -> DeductionState:
    """Build the event pool and seed asserted intervals.

    The pool holds every event occurring in the KB, the true event, and the
    goal events of any queries (including each goal's conjunction); under the
    kb-plus-products policy it is extended by one level of pairwise
    conjunctions, capped deterministically.
    """
    base: Dict[int, ConjunctiveEvent] = {TOP.uid: TOP}
    for ev in kb.events_in_formulas():
        base[ev.uid] = ev
    for f, e in queries:
        for ev in (f, e, conjoin(f, e)):
            if not ev.is_bottom:
                kb.universe.check_event(ev)
                base[ev.uid] = ev
    pool = sorted(base.values(), key=lambda e: e.sort_key)

    if config.pool_policy == "kb-plus-products" and len(pool) < config.pool_cap:
        products: Dict[int, ConjunctiveEvent] = {}
        for i, ev1 in enumerate(pool):
            for ev2 in pool[i + 1:]:
                prod = conjoin(ev1, ev2)
                if prod.uid not in base:
                    products[prod.uid] = prod
        extra = sorted(products.values(), key=lambda e: e.sort_key)
        room = config.pool_cap - len(pool)
        pool = pool + extra[:room]
        pool.sort(key=lambda e: e.sort_key)

    tax = kb.taxonomy
    role_pool = [ev for ev in pool if not tax.forces_false(ev)]

    state = DeductionState(kb, config, pool, role_pool)
    for fm in kb.probabilistic:
        iv = kb.canonical_interval(fm.conclusion, fm.premise)
        state.store(fm.conclusion, fm.premise, iv)
        if iv != kb.canonical_taxonomic(fm.conclusion, fm.premise):
            state.informative.add((fm.conclusion.uid, fm.premise.uid))
    return state


def _links_of(state: DeductionState, pair_keys: Iterable[Tuple[int, int]]):
    """Unordered role-event pairs behind the given interval keys."""
    role_uids = {ev.uid for ev in state.role_pool}
    links = set()
    for cuid, puid in pair_keys:
        if cuid in role_uids and puid in role_uids:
            x = state.events_by_uid[cuid]
            y = state.events_by_uid[puid]
            if x.sort_key > y.sort_key:
                x, y = y, x
            links.add((x, y))
    return links


def _candidate_triples(state: DeductionState, links) -> List[tuple]:
    """Chains reading at least one linked pair, deduped up to mirroring."""
    seen = set()
    out = []
    for x, y in links:
        for z in state.role_pool:
            for a, b, c in ((x, y, z), (y, x, z), (z, x, y), (z, y, x)):
                if a.sort_key > c.sort_key:
                    a, c = c, a
                key = (a.uid, b.uid, c.uid)
                if key not in seen:
                    seen.add(key)
                    out.append((a, b, c))
    # middle-role-major order: chains sharing a linking event run together,
    # which also lets chaining derivations through B land before equivalent
    # mirrored-sharpening ones on chains routed through the premise
    out.sort(key=lambda t: (t[1].sort_key, t[0].sort_key, t[2].sort_key))
    return out


def _state_chain(state: DeductionState, a, b, c) -> ChainPremise:
    tax = state.kb.taxonomy
    return ChainPremise(
        a=a, b=b, c=c,
        u=state.get_interval(b, a),
        v=state.get_interval(a, b),
        x=state.get_interval(c, b),
        y=state.get_interval(b, c),
        guards=tax.guard_flags(a, b, c),
        ab_false=tax.forces_false(conjoin(a, b)),
        ac_false=tax.forces_false(conjoin(a, c)),
        bc_false=tax.forces_false(conjoin(b, c)),
    )


def _evaluate_cached(state: DeductionState, chain: ChainPremise):
    """Verdict plus prepared slot actions, cached by value signature.

    Empty (taxonomy-false premise) slots are dropped here: those conditionals
    are settled by the (1, 0) convention and never stored.  Each kept action
    carries a ready-made Interval so the sweep loop never rebuilds one.
    """
    key = chain.signature
    cached = state._slot_cache.get(key)
    if cached is None:
        verdict = check_consistency(chain)
        if verdict.consistent:
            actions = []
            for res in evaluate_slots(chain, state.config.enabled_rules,
                                      state.config.both_orientations):
                if res.empty:
                    continue
                actions.append((res.slot[0], res.slot[1],
                                Interval.make(res.lower, res.upper),
                                res.rule, res.lower_tags, res.upper_tags))
        else:
            actions = None
        cached = (verdict, actions)
        state._slot_cache[key] = cached
    return cached


def saturate(state: DeductionState) -> DeductionState:
    """Sweep candidate chains until fixpoint or the sweep budget runs out."""
    config = state.config
    kb = state.kb
    intervals = state.intervals
    links = _links_of(state, state.informative)
    state.stop_reason = "fixpoint"
    for sweep in range(1, config.max_sweeps + 1):
        if not links:
            break
        state.sweeps_run = sweep
        improved_keys: set = set()
        for a, b, c in _candidate_triples(state, links):
            chain = _state_chain(state, a, b, c)
            verdict, actions = _evaluate_cached(state, chain)
            if actions is None:
                if len(state.diagnostics) < 200:
                    state.diagnostics.append(ChainDiagnostic(a, b, c, verdict))
                continue
            roles = {"A": a, "B": b, "C": c}
            for cspec, pspec, new_iv, rule, lo_tags, hi_tags in actions:
                concl = roles[cspec[0]] if len(cspec) == 1 else \
                    conjoin(roles[cspec[0]], roles[cspec[1]])
                prem = roles[pspec[0]] if len(pspec) == 1 else \
                    conjoin(roles[pspec[0]], roles[pspec[1]])
                key = (concl.uid, prem.uid)
                old_iv = intervals.get(key)
                if old_iv is None:
                    old_iv = kb.canonical_interval(concl, prem)
                if new_iv is old_iv:
                    continue
                # strict improvement iff new raises the lower bound or cuts
                # the upper one (integer cross-multiplication, no Fractions)
                raises_lo = (new_iv.lo_n * old_iv.lo_d
                             > old_iv.lo_n * new_iv.lo_d)
                cuts_hi = (new_iv.hi_n * old_iv.hi_d
                           < old_iv.hi_n * new_iv.hi_d)
                if not (raises_lo or cuts_hi):
                    continue
                meet = old_iv.intersect(new_iv)
                if meet is None:
                    raise ProbabilisticConflictError(
                        concl, prem, old_iv, new_iv,
                        f"while applying {rule} to chain A={a}, B={b}, C={c}")
                state.store(concl, prem, meet)
                state.informative.add(key)
                improved_keys.add(key)
                state.trace.append(TraceStep(
                    rule=rule, a=a, b=b, c=c,
                    u=chain.u, v=chain.v, x=chain.x, y=chain.y,
                    conclusion=concl, premise=prem,
                    old=old_iv, new=meet,
                    lower_tags=lo_tags, upper_tags=hi_tags))
        if not improved_keys:
            state.stop_reason = "fixpoint"
            break
        links = _links_of(state, improved_keys)
        state.stop_reason = "max-sweeps"
    return state


def trace_slice(trace: Sequence[TraceStep],
                goal_key: Tuple[int, int]) -> Tuple[TraceStep, ...]:
    """The minimal trace subsequence whose steps fed the goal pair."""
    needed = {goal_key}
    kept: List[TraceStep] = []
    for step in reversed(trace):
        if step.produced_key in needed:
            kept.append(step)
            needed.update(step.input_keys)
    kept.reverse()
    return tuple(kept)


def local_query(kb: KnowledgeBase,
                goal: Tuple[ConjunctiveEvent, ConjunctiveEvent],
                config: EngineConfig = EngineConfig(),
                check_coherence: bool = True) -> QueryAnswer:
    """Saturate and answer one goal; correct (contains the tight answer),
    not necessarily tight."""
    f, e = goal
    kb.universe.check_event(f)
    kb.universe.check_event(e)
    if check_coherence:
        violations = validate_coherence(kb)
        if violations:
            raise CoherenceError(
                "knowledge base is incoherent: "
                + "; ".join(str(v) for v in violations))
    if kb.taxonomy.forces_false(e):
        return QueryAnswer.empty_answer()
    state = seed_state(kb, config, queries=[goal])
    saturate(state)
    iv = state.get_interval(f, e)
    steps = trace_slice(state.trace, (f.uid, e.uid))
    return QueryAnswer(iv.lo, iv.hi, False, steps)


def survey_chains(kb: KnowledgeBase, config: EngineConfig = EngineConfig(),
                  full_scan_limit: int = 30) -> List[ChainDiagnostic]:
    """Consistency-check the KB's pool chains (for the check command).

    Scans all mirror-deduped triples when the role pool is small; for large
    pools it falls back to the informative-link candidates, which is where
    fireable conditions can occur (conditions need strict bound inequalities
    that all-canonical chains cannot produce).
    """
    state = seed_state(kb, config)
    findings: List[ChainDiagnostic] = []
    if len(state.role_pool) <= full_scan_limit:
        triples = []
        rp = state.role_pool
        for a in rp:
            for b in rp:
                for c in rp:
                    if a.sort_key <= c.sort_key:
                        triples.append((a, b, c))
    else:
        triples = _candidate_triples(state, _links_of(state, state.informative))
    for a, b, c in triples:
        chain = _state_chain(state, a, b, c)
        verdict = check_consistency(chain)
        if not verdict.consistent:
            findings.append(ChainDiagnostic(a, b, c, verdict))
    return findings
