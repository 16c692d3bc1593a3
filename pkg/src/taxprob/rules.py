"""The four guarded inference rules over chain premises.

Each rule deduces tight bounds for one or two conditionals built from the
chain roles A, B, C:

* sharpening  -> (B|A) and (A|B)
* chaining    -> (C|A)
* fusion      -> (B|AC) and (AC|B)
* combination -> (C|AB) and (AB|C)

A bound is the max (lower) or min (upper) of a list of operands; an operand
participates only when all of its guard conditions hold.  Operands are kept
as data (guard predicate + expression + printable tag) rather than inlined
arithmetic so that traces can report which operand attained a bound and each
formula can be unit-tested in isolation.  Every operand containing a division
carries a guard that makes its denominator strictly positive.

The mirror symmetry of the premise ((A,B,C,u,v,x,y) -> (C,B,A,y,x,v,u)) turns
the same four rules into deductions for (B|C), (C|B), (A|C), (A|BC) and
(BC|A); `apply_all` runs both orientations and merges coinciding conclusions
by intersection.

One lower-bound operand of chaining exists in two candidate closed forms (see
CHAINING_LOWER_VARIANTS): the additive form can exceed 1 (u1=v1=x1=0.6 gives
2.2), so it cannot be a sound lower bound; the multiplicative form
u1(v1+x1-1)/v1 mirrors the corresponding combination operand.  The shipped
tables use the multiplicative form, and the test suite validates that choice
against the exact LP oracle on random consistent chains with v1 + x1 > 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Tuple

from .chains import ChainPremise, ConsistencyVerdict, check_consistency
from .events import ConjunctiveEvent, conjoin
from .intervals import Interval
from .taxonomy import GuardFlags

RULE_NAMES = ("sharpening", "chaining", "fusion", "combination")
ALL_RULES: FrozenSet[str] = frozenset(RULE_NAMES)

_ONE = Fraction(1)
_ZERO = Fraction(0)


@dataclass(frozen=True)
class Operand:
    tag: str
    guard: Callable[[ChainPremise], bool]
    expr: Callable[[ChainPremise], Fraction]


def _always(_c: ChainPremise) -> bool:
    return True


def _const(value: Fraction) -> Callable[[ChainPremise], Fraction]:
    return lambda _c: value


# guard predicates in plain integer arithmetic (bounds are nonnegative, so
# positivity is a numerator test and strict comparison is cross-multiplication)

def _pos(q: Fraction) -> bool:
    return q.numerator > 0


def _lt1(q: Fraction) -> bool:
    return q.numerator < q.denominator


def _gt(a: Fraction, b: Fraction) -> bool:
    return a.numerator * b.denominator > b.numerator * a.denominator


def _sum_gt1(a: Fraction, b: Fraction) -> bool:
    return (a.numerator * b.denominator + b.numerator * a.denominator
            > a.denominator * b.denominator)


# -- operand tables, one per rule part ---------------------------------------

SHARPENING_BA_LOWER = (
    Operand("u1", _always, lambda c: c.u1),
    Operand("v1y1/(v1y1+x2(1-y1))",
            lambda c: c.gamma and _pos(c.v1) and _pos(c.y1),
            lambda c: c.v1 * c.y1 / (c.v1 * c.y1 + c.x2 * (1 - c.y1))),
    Operand("y1", lambda c: c.gamma and c.delta, lambda c: c.y1),
)

SHARPENING_BA_UPPER = (
    Operand("u2", _always, lambda c: c.u2),
    Operand("v2y2/(v2y2+x1(1-y2))",
            lambda c: c.beta and _pos(c.v2) and _pos(c.y2),
            lambda c: c.v2 * c.y2 / (c.v2 * c.y2 + c.x1 * (1 - c.y2))),
    Operand("y2", lambda c: c.beta and c.epsilon, lambda c: c.y2),
)

SHARPENING_AB_LOWER = (
    Operand("u1x1(1-y2)/(y2(1-u1))",
            lambda c: c.beta and _lt1(c.u1) and _gt(c.u1, c.y2) and _pos(c.y2),
            lambda c: c.u1 * c.x1 * (1 - c.y2) / (c.y2 * (1 - c.u1))),
    Operand("v1", _always, lambda c: c.v1),
    Operand("x1", lambda c: c.delta, lambda c: c.x1),
)

SHARPENING_AB_UPPER = (
    Operand("1-x1", lambda c: c.alpha, lambda c: 1 - c.x1),
    Operand("u2x2(1-y1)/(y1(1-u2))",
            lambda c: c.gamma and _gt(c.y1, c.u2),
            lambda c: c.u2 * c.x2 * (1 - c.y1) / (c.y1 * (1 - c.u2))),
    Operand("v2", _always, lambda c: c.v2),
    Operand("x2", lambda c: c.epsilon, lambda c: c.x2),
)

CHAINING_LOWER_VARIANTS: Dict[str, Operand] = {
    # As the additive form can exceed 1 it cannot be sound; both candidates
    # stay available so the validation suite can adjudicate against the
    # oracle.  Only the multiplicative one is shipped in the default table.
    "additive": Operand("u1+u1/v1+u1x1/v1",
                        lambda c: _sum_gt1(c.v1, c.x1),
                        lambda c: c.u1 + c.u1 / c.v1 + c.u1 * c.x1 / c.v1),
    "multiplicative": Operand("u1(v1+x1-1)/v1",
                              lambda c: _sum_gt1(c.v1, c.x1),
                              lambda c: c.u1 * (c.v1 + c.x1 - 1) / c.v1),
}

DEFAULT_CHAINING_LOWER_VARIANT = "multiplicative"


def chaining_lower_operands(variant: str = DEFAULT_CHAINING_LOWER_VARIANT):
    return (
        Operand("0", _always, _const(_ZERO)),
        CHAINING_LOWER_VARIANTS[variant],
        Operand("u1", lambda c: c.epsilon, lambda c: c.u1),
        Operand("u1x1/v2",
                lambda c: c.delta and _pos(c.v2),
                lambda c: c.u1 * c.x1 / c.v2),
        Operand("u1x1/(v2y2)",
                lambda c: c.beta and _pos(c.v2) and _pos(c.y2),
                lambda c: c.u1 * c.x1 / (c.v2 * c.y2)),
        Operand("u1/y2",
                lambda c: c.beta and c.epsilon and _pos(c.y2),
                lambda c: c.u1 / c.y2),
        Operand("1", lambda c: c.gamma, _const(_ONE)),
    )


CHAINING_CA_LOWER = chaining_lower_operands()

CHAINING_CA_UPPER = (
    Operand("1", _always, _const(_ONE)),
    Operand("1-u1+u1x2/v1",
            lambda c: _gt(c.v1, c.x2),
            lambda c: 1 - c.u1 + c.u1 * c.x2 / c.v1),
    Operand("u2x2/(v1y1)",
            lambda c: _pos(c.v1) and _pos(c.y1),
            lambda c: c.u2 * c.x2 / (c.v1 * c.y1)),
    Operand("x2/(v1y1+x2(1-y1))",
            lambda c: _gt(c.v1, c.x2) and _pos(c.y1),
            lambda c: c.x2 / (c.v1 * c.y1 + c.x2 * (1 - c.y1))),
    Operand("1-u1", lambda c: c.alpha, lambda c: 1 - c.u1),
    Operand("u2-u2x2/v1+u2x2/(v1y1)",
            lambda c: _pos(c.v1) and _pos(c.y1),
            lambda c: c.u2 - c.u2 * c.x2 / c.v1 + c.u2 * c.x2 / (c.v1 * c.y1)),
    Operand("u2/y1",
            lambda c: c.delta and _gt(c.y1, c.u2),
            lambda c: c.u2 / c.y1),
    Operand("(1-u1)/(1-y2)",
            lambda c: c.beta and _gt(c.u1, c.y2),
            lambda c: (1 - c.u1) / (1 - c.y2)),
    Operand("u2x2/v1",
            lambda c: c.zeta and _gt(c.v1, c.x2),
            lambda c: c.u2 * c.x2 / c.v1),
    Operand("u2", lambda c: c.zeta, lambda c: c.u2),
    Operand("u2(1-y1)min(x2,1-v1)/(v1y1)",
            lambda c: c.alpha and _pos(c.v1) and _pos(c.y1),
            lambda c: c.u2 * (1 - c.y1) / (c.v1 * c.y1) * min(c.x2, 1 - c.v1)),
    Operand("0", lambda c: c.alpha and c.zeta, _const(_ZERO)),
    Operand("(1-y1)min(x2,1-v1)/(v1y1+(1-y1)min(x2,1-v1))",
            lambda c: c.alpha and _pos(c.v1) and _pos(c.y1),
            lambda c: ((1 - c.y1) * min(c.x2, 1 - c.v1)
                       / (c.v1 * c.y1 + (1 - c.y1) * min(c.x2, 1 - c.v1)))),
)

FUSION_BAC_LOWER = (
    Operand("max(y1(v1+x1-1)/(y1(v1-1)+x1), u1(x1+v1-1)/(u1(x1-1)+v1))",
            lambda c: _sum_gt1(c.x1, c.v1),
            lambda c: max(c.y1 * (c.v1 + c.x1 - 1) / (c.y1 * (c.v1 - 1) + c.x1),
                          c.u1 * (c.x1 + c.v1 - 1) / (c.u1 * (c.x1 - 1) + c.v1))),
    Operand("u1", lambda c: c.epsilon, lambda c: c.u1),
    Operand("y1", lambda c: c.delta, lambda c: c.y1),
    Operand("v1y1/(v1y1+x2(1-y1))",
            lambda c: c.epsilon and _pos(c.v1) and _pos(c.y1),
            lambda c: c.v1 * c.y1 / (c.v1 * c.y1 + c.x2 * (1 - c.y1))),
    Operand("x1u1/(x1u1+v2(1-u1))",
            lambda c: c.delta and _pos(c.x1) and _pos(c.u1),
            lambda c: c.x1 * c.u1 / (c.x1 * c.u1 + c.v2 * (1 - c.u1))),
    Operand("0", _always, _const(_ZERO)),
    Operand("1", lambda c: c.zeta, _const(_ONE)),
)

FUSION_BAC_UPPER = (
    Operand("1", _always, _const(_ONE)),
    Operand("u2", lambda c: c.gamma, lambda c: c.u2),
    Operand("y2", lambda c: c.beta, lambda c: c.y2),
    Operand("0", lambda c: c.alpha, _const(_ZERO)),
)

FUSION_ACB_LOWER = (
    Operand("0", _always, _const(_ZERO)),
    Operand("x1+v1-1", _always, lambda c: c.x1 + c.v1 - 1),
    Operand("x1", lambda c: c.delta, lambda c: c.x1),
    Operand("v1", lambda c: c.epsilon, lambda c: c.v1),
)

FUSION_ACB_UPPER = (
    Operand("v2", _always, lambda c: c.v2),
    Operand("x2", _always, lambda c: c.x2),
    Operand("u2x2(1-y1)/(y1(1-u2))",
            lambda c: c.gamma and _gt(c.y1, c.u2),
            lambda c: c.u2 * c.x2 * (1 - c.y1) / (c.y1 * (1 - c.u2))),
    Operand("v2y2(1-u1)/(u1(1-y2))",
            lambda c: c.beta and _gt(c.u1, c.y2),
            lambda c: c.v2 * c.y2 * (1 - c.u1) / (c.u1 * (1 - c.y2))),
    Operand("0", lambda c: c.alpha, _const(_ZERO)),
)

COMBINATION_CAB_LOWER = (
    Operand("0", _always, _const(_ZERO)),
    Operand("1-1/v1+x1/v1",
            lambda c: _sum_gt1(c.v1, c.x1),
            lambda c: 1 - 1 / c.v1 + c.x1 / c.v1),
    Operand("1", lambda c: c.epsilon, _const(_ONE)),
    Operand("x1/v2",
            lambda c: c.delta and _pos(c.v2),
            lambda c: c.x1 / c.v2),
)

COMBINATION_CAB_UPPER = (
    Operand("1", _always, _const(_ONE)),
    Operand("y2(1-u1)/(u1(1-y2))",
            lambda c: c.beta and _gt(c.u1, c.y2),
            lambda c: c.y2 * (1 - c.u1) / (c.u1 * (1 - c.y2))),
    Operand("0", lambda c: c.alpha, _const(_ZERO)),
    Operand("x2/v1",
            lambda c: _gt(c.v1, c.x2),
            lambda c: c.x2 / c.v1),
)

COMBINATION_ABC_LOWER = (
    Operand("0", _always, _const(_ZERO)),
    Operand("v1y1/x1-y1/x1+y1",
            lambda c: _sum_gt1(c.v1, c.x1),
            lambda c: c.v1 * c.y1 / c.x1 - c.y1 / c.x1 + c.y1),
    Operand("y1", lambda c: c.delta, lambda c: c.y1),
    Operand("u1", lambda c: c.beta and c.epsilon, lambda c: c.u1),
    Operand("u1x1/(u1x1+v2(1-u1))",
            lambda c: c.beta and _pos(c.u1) and _pos(c.x1),
            lambda c: c.u1 * c.x1 / (c.u1 * c.x1 + c.v2 * (1 - c.u1))),
    Operand("v1y1/x2",
            lambda c: c.epsilon and _pos(c.x2),
            lambda c: c.v1 * c.y1 / c.x2),
)

COMBINATION_ABC_UPPER = (
    Operand("v2y2/x1",
            lambda c: _gt(c.x1, c.v2),
            lambda c: c.v2 * c.y2 / c.x1),
    Operand("u2(1-y1)/(1-u2)",
            lambda c: c.gamma and _lt1(c.u2),
            lambda c: c.u2 * (1 - c.y1) / (1 - c.u2)),
    Operand("u2v2/(u2x1+v2(1-u2))",
            lambda c: c.gamma and _gt(c.x1, c.v2) and _pos(c.v2),
            lambda c: c.u2 * c.v2 / (c.u2 * c.x1 + c.v2 * (1 - c.u2))),
    Operand("0", lambda c: c.alpha, _const(_ZERO)),
    Operand("y2", _always, lambda c: c.y2),
    Operand("u2", lambda c: c.gamma, lambda c: c.u2),
)


# -- evaluation ---------------------------------------------------------------

def evaluate_bound(operands: Iterable[Operand], chain: ChainPremise,
                   maximize: bool) -> Tuple[Fraction, Tuple[str, ...]]:
    """Best operand value among those whose guards hold, plus attained tags."""
    best = None
    tags: list = []
    for op in operands:
        if not op.guard(chain):
            continue
        value = op.expr(chain)
        if best is None or (value > best if maximize else value < best):
            best = value
            tags = [op.tag]
        elif value == best:
            tags.append(op.tag)
    if best is None:
        raise AssertionError("operand list with no unconditional member")
    return best, tuple(tags)


@dataclass(frozen=True)
class SlotResult:
    """One deduced conditional, identity-free.

    `slot` names the conclusion and premise as role combinations, e.g.
    ("B", "AC").  `empty` marks the partial-rule case where the premise is
    taxonomy-false and the conditional therefore gets the (1, 0) answer.
    """

    slot: Tuple[str, str]
    rule: str
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    lower_tags: Tuple[str, ...]
    upper_tags: Tuple[str, ...]
    empty: bool = False


def sharpening(chain: ChainPremise) -> Tuple[SlotResult, ...]:
    z1, t1 = evaluate_bound(SHARPENING_BA_LOWER, chain, True)
    z2, t2 = evaluate_bound(SHARPENING_BA_UPPER, chain, False)
    w1, s1 = evaluate_bound(SHARPENING_AB_LOWER, chain, True)
    w2, s2 = evaluate_bound(SHARPENING_AB_UPPER, chain, False)
    return (SlotResult(("B", "A"), "sharpening", z1, z2, t1, t2),
            SlotResult(("A", "B"), "sharpening", w1, w2, s1, s2))


def chaining(chain: ChainPremise,
             lower_variant: str = DEFAULT_CHAINING_LOWER_VARIANT
             ) -> Tuple[SlotResult, ...]:
    lower_ops = (CHAINING_CA_LOWER
                 if lower_variant == DEFAULT_CHAINING_LOWER_VARIANT
                 else chaining_lower_operands(lower_variant))
    z1, t1 = evaluate_bound(lower_ops, chain, True)
    z2, t2 = evaluate_bound(CHAINING_CA_UPPER, chain, False)
    return (SlotResult(("C", "A"), "chaining", z1, z2, t1, t2),)


def fusion(chain: ChainPremise) -> Tuple[SlotResult, ...]:
    out = []
    if chain.ac_false:
        # the premise AC is taxonomy-false, so (B|AC) gets the empty answer
        out.append(SlotResult(("B", "AC"), "fusion", None, None, (), (), True))
    else:
        z1, t1 = evaluate_bound(FUSION_BAC_LOWER, chain, True)
        z2, t2 = evaluate_bound(FUSION_BAC_UPPER, chain, False)
        out.append(SlotResult(("B", "AC"), "fusion", z1, z2, t1, t2))
    w1, s1 = evaluate_bound(FUSION_ACB_LOWER, chain, True)
    w2, s2 = evaluate_bound(FUSION_ACB_UPPER, chain, False)
    out.append(SlotResult(("AC", "B"), "fusion", w1, w2, s1, s2))
    return tuple(out)


def combination(chain: ChainPremise) -> Tuple[SlotResult, ...]:
    out = []
    if chain.ab_false:
        out.append(SlotResult(("C", "AB"), "combination",
                              None, None, (), (), True))
    else:
        z1, t1 = evaluate_bound(COMBINATION_CAB_LOWER, chain, True)
        z2, t2 = evaluate_bound(COMBINATION_CAB_UPPER, chain, False)
        out.append(SlotResult(("C", "AB"), "combination", z1, z2, t1, t2))
    w1, s1 = evaluate_bound(COMBINATION_ABC_LOWER, chain, True)
    w2, s2 = evaluate_bound(COMBINATION_ABC_UPPER, chain, False)
    out.append(SlotResult(("AB", "C"), "combination", w1, w2, s1, s2))
    return tuple(out)


_RULE_FUNCS = {
    "sharpening": sharpening,
    "chaining": chaining,
    "fusion": fusion,
    "combination": combination,
}


def swap_chain(chain: ChainPremise) -> ChainPremise:
    """Mirror a chain: (A,B,C,u,v,x,y) -> (C,B,A,y,x,v,u), guards remapped."""
    return ChainPremise(
        a=chain.c, b=chain.b, c=chain.a,
        u=chain.y, v=chain.x, x=chain.v, y=chain.u,
        guards=chain.guards.swap(),
        ab_false=chain.bc_false,
        ac_false=chain.ac_false,
        bc_false=chain.ab_false,
    )


_SWAP_ROLE = {"A": "C", "B": "B", "C": "A"}


def _swap_slot(slot: Tuple[str, str]) -> Tuple[str, str]:
    def remap(combo: str) -> str:
        return "".join(sorted(_SWAP_ROLE[r] for r in combo))
    return (remap(slot[0]), remap(slot[1]))


def evaluate_slots(chain: ChainPremise,
                   enabled: FrozenSet[str] = ALL_RULES,
                   both_orientations: bool = True) -> Tuple[SlotResult, ...]:
    """Run the enabled rules on the chain (and its mirror), identity-free.

    Slots of the mirrored run are expressed in the original roles, so the
    result depends only on the chain's value signature.
    """
    results = []
    for name in RULE_NAMES:
        if name in enabled:
            results.extend(_RULE_FUNCS[name](chain))
    if both_orientations:
        mirrored = swap_chain(chain)
        for name in RULE_NAMES:
            if name not in enabled:
                continue
            for res in _RULE_FUNCS[name](mirrored):
                results.append(SlotResult(
                    _swap_slot(res.slot), res.rule, res.lower, res.upper,
                    res.lower_tags, res.upper_tags, res.empty))
    return tuple(results)


@dataclass(frozen=True)
class RuleConclusion:
    conclusion: ConjunctiveEvent
    premise: ConjunctiveEvent
    interval: Optional[Interval]  # None in the empty (taxonomy-false premise) case
    rule: str
    lower_tags: Tuple[str, ...]
    upper_tags: Tuple[str, ...]

    @property
    def empty(self) -> bool:
        return self.interval is None

    def __str__(self):
        iv = "[1, 0] (empty)" if self.empty else str(self.interval)
        return f"({self.conclusion} | {self.premise}) {iv} via {self.rule}"


@dataclass(frozen=True)
class RuleOutput:
    conclusions: Tuple[RuleConclusion, ...]
    verdict: Optional[ConsistencyVerdict] = None


def resolve_slot_event(slot_part: str, chain: ChainPremise) -> ConjunctiveEvent:
    roles = {"A": chain.a, "B": chain.b, "C": chain.c}
    ev = roles[slot_part[0]]
    for r in slot_part[1:]:
        ev = conjoin(ev, roles[r])
    return ev


def apply_all(chain: ChainPremise,
              enabled: FrozenSet[str] = ALL_RULES,
              both_orientations: bool = True) -> RuleOutput:
    """Consistency-check a chain, then run the enabled rules on it.

    Inconsistent chains produce no conclusions; the verdict is attached
    instead.  Conclusions whose (conclusion, premise) events coincide (this
    happens when roles overlap, and for the mirrored fusion run) are merged
    by intersecting their intervals.
    """
    verdict = check_consistency(chain)
    if not verdict.consistent:
        return RuleOutput((), verdict)
    merged: dict = {}
    order: list = []
    for res in evaluate_slots(chain, enabled, both_orientations):
        concl = resolve_slot_event(res.slot[0], chain)
        prem = resolve_slot_event(res.slot[1], chain)
        key = (concl.uid, prem.uid)
        if res.empty:
            new = RuleConclusion(concl, prem, None, res.rule, (), ())
        else:
            new = RuleConclusion(concl, prem,
                                 Interval.make(res.lower, res.upper),
                                 res.rule, res.lower_tags, res.upper_tags)
        old = merged.get(key)
        if old is None:
            merged[key] = new
            order.append(key)
            continue
        merged[key] = _merge_conclusions(old, new)
    return RuleOutput(tuple(merged[k] for k in order), verdict)


def _merge_conclusions(a: RuleConclusion, b: RuleConclusion) -> RuleConclusion:
    if a.empty or b.empty:
        keep = a if a.empty else b
        return keep
    meet = a.interval.intersect(b.interval)
    if meet is None:
        # two locally complete deductions for one conditional cannot disagree
        raise AssertionError(
            f"contradictory rule outputs for ({a.conclusion} | {a.premise}): "
            f"{a.interval} vs {b.interval}")
    rule = a.rule if a.rule == b.rule else f"{a.rule}+{b.rule}"
    lo_tags = a.lower_tags if meet.lo == a.interval.lo else b.lower_tags
    hi_tags = a.upper_tags if meet.hi == a.interval.hi else b.upper_tags
    return RuleConclusion(a.conclusion, a.premise, meet, rule, lo_tags, hi_tags)
