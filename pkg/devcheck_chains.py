"""Dev harness: random coherent consistent chains, rules vs oracle, exact."""
import random
import sys
from fractions import Fraction as F

from taxprob import *
from taxprob.oracle import tight_answer, max_event_probability


def random_event(rng, names, allow_top=True):
    if allow_top and rng.random() < 0.12:
        return TOP
    k = rng.choice([1, 1, 1, 2, 2, 3][:max(1, len(names))] if len(names) >= 3
                   else [1, 1, 2][:len(names) + 1])
    k = min(k, len(names))
    return conjunction(rng.sample(names, k))


def random_taxonomy(rng, universe, names):
    formulas = []
    for _ in range(rng.randint(0, 3)):
        lhs = conjunction(rng.sample(names, rng.randint(1, min(2, len(names)))))
        if rng.random() < 0.15:
            rhs = BOTTOM
        else:
            rhs = conjunction(rng.sample(names, rng.randint(1, min(2, len(names)))))
        formulas.append(TaxonomicFormula(lhs, rhs))
    return TaxonomyStore(universe, formulas)


GRID = [F(i, 20) for i in range(0, 21)]


def draw_interval(rng, forced_one, forced_zero):
    if forced_zero:
        return Interval.make(0, 0)
    if forced_one:
        return Interval.make(1, 1)
    lo = rng.choice(GRID[:-1])  # lo != 1
    hi_choices = [h for h in GRID if h >= lo and h > 0]
    hi = rng.choice(hi_choices)
    return Interval.make(lo, hi)


def gen_chain(rng):
    n = rng.randint(2, 4)
    names = ["a", "b", "c", "d"][:n]
    universe = Universe(names)
    tax = random_taxonomy(rng, universe, names)
    roles = [random_event(rng, names) for _ in range(3)]
    if any(tax.forces_false(r) for r in roles):
        return None
    A, B, C = roles
    pairs = [(B, A), (A, B), (C, B), (B, C)]
    drawn = {}
    for concl, prem in pairs:
        key = (concl.uid, prem.uid)
        if key in drawn:
            continue
        forced_one = tax.entails(prem, concl)
        forced_zero = tax.forces_false(conjoin(prem, concl))
        if forced_one and forced_zero:
            return None
        drawn[key] = ProbabilisticFormula(concl, prem,
                                          draw_interval(rng, forced_one, forced_zero))
    kb = KnowledgeBase(universe, tax, list(drawn.values()))
    if validate_coherence(kb):
        return None
    return kb, A, B, C


def main(seed, target):
    rng = random.Random(seed)
    tested = inconsistent = 0
    mismatches = []
    while tested < target:
        made = gen_chain(rng)
        if made is None:
            continue
        kb, A, B, C = made
        chain = build_chain(kb, A, B, C)
        out = apply_all(chain)
        if not out.verdict.consistent:
            inconsistent += 1
            # cross-check: some premise role must be forced to zero
            prem_roles = {id(A): A, id(B): B, id(C): C}
            forced = [max_event_probability(kb, r) in (0, None)
                      for r in (A, B, C)]
            if not any(forced):
                mismatches.append(("verdict", kb, A, B, C, out.verdict, None, None))
                print("VERDICT MISMATCH", out.verdict)
            continue
        tested += 1
        for concl in out.conclusions:
            ans = tight_answer(kb, (concl.conclusion, concl.premise))
            if concl.empty:
                ok = ans.empty
            else:
                ok = (not ans.empty and ans.lower == concl.interval.lo
                      and ans.upper == concl.interval.hi)
            if not ok:
                mismatches.append((kb, A, B, C, concl, ans))
                print("MISMATCH")
                print("  tax:", [str(f) for f in kb.taxonomy.formulas])
                print("  pkb:", [str(f) for f in kb.probabilistic])
                print("  roles:", A, "/", B, "/", C)
                print("  chain:", chain)
                print(f"  rule ({concl.conclusion}|{concl.premise}) {concl.rule}: "
                      f"{'EMPTY' if concl.empty else concl.interval} "
                      f"tags lo={concl.lower_tags} hi={concl.upper_tags}")
                print(f"  oracle: empty={ans.empty} [{ans.lower}, {ans.upper}]")
    print(f"tested {tested} consistent chains ({inconsistent} inconsistent), "
          f"{len(mismatches)} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    target = int(sys.argv[2]) if len(sys.argv) > 2 else 100
    sys.exit(main(seed, target))
