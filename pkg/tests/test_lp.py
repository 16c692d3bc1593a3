import random
from fractions import Fraction as F

import pytest

from taxprob.errors import InternalSolverError
from taxprob.lp import solve_lp


def test_basic_maximization():
    res = solve_lp([F(3), F(2)],
                   [([F(1), F(1)], "<=", F(4)), ([F(1), F(0)], "<=", F(2))])
    assert res.status == "optimal"
    assert res.value == 10
    assert res.x == [F(2), F(2)]


def test_basic_minimization():
    res = solve_lp([F(1), F(1)],
                   [([F(1), F(1)], ">=", F(3)), ([F(1), F(0)], "<=", F(1))],
                   maximize=False)
    assert res.status == "optimal" and res.value == 3


def test_equality_row():
    res = solve_lp([F(1), F(-1)], [([F(1), F(1)], "==", F(1))])
    assert res.status == "optimal" and res.value == 1
    assert res.x == [F(1), F(0)]


def test_infeasible():
    res = solve_lp([F(1)], [([F(1)], "<=", F(1)), ([F(1)], ">=", F(2))])
    assert res.status == "infeasible"


def test_unbounded():
    assert solve_lp([F(1)], []).status == "unbounded"
    res = solve_lp([F(1), F(0)], [([F(0), F(1)], "<=", F(1))])
    assert res.status == "unbounded"


def test_exact_fractions_survive():
    # optimum at x = 1/3 exactly
    res = solve_lp([F(1)], [([F(3)], "<=", F(1))])
    assert res.value == F(1, 3)


def test_degenerate_homogeneous_rows():
    # rows with zero right-hand sides force heavy degeneracy; Bland's rule
    # must still terminate at the optimum
    rows = [([F(1), F(-1), F(0)], ">=", F(0)),
            ([F(0), F(1), F(-1)], ">=", F(0)),
            ([F(1), F(1), F(1)], "==", F(1))]
    res = solve_lp([F(0), F(0), F(1)], rows, maximize=True)
    assert res.status == "optimal" and res.value == F(1, 3)
    res = solve_lp([F(1), F(0), F(0)], rows, maximize=False)
    assert res.status == "optimal" and res.value == F(1, 3)


def test_negative_rhs_normalization():
    # -x <= -2 is x >= 2
    res = solve_lp([F(1)], [([F(-1)], "<=", F(-2)), ([F(1)], "<=", F(5))],
                   maximize=False)
    assert res.status == "optimal" and res.value == 2


def test_redundant_equalities():
    rows = [([F(1), F(1)], "==", F(1)), ([F(2), F(2)], "==", F(2))]
    res = solve_lp([F(1), F(0)], rows)
    assert res.status == "optimal" and res.value == 1


def test_random_lps_match_vertex_enumeration():
    # cross-check the simplex against brute-force vertex enumeration on
    # random bounded problems: max c.x over {x >= 0, Ax <= b}
    rng = random.Random(99)
    for _ in range(40):
        n = rng.randint(2, 3)
        m = rng.randint(2, 4)
        A = [[F(rng.randint(0, 4)) for _ in range(n)] for _ in range(m)]
        # ensure boundedness: every variable capped
        A.append([F(1)] * n)
        b = [F(rng.randint(1, 6)) for _ in range(m)] + [F(8)]
        c = [F(rng.randint(-3, 5)) for _ in range(n)]
        res = solve_lp(c, [(row, "<=", rhs) for row, rhs in zip(A, b)])
        assert res.status == "optimal"
        best = _vertex_optimum(A, b, c)
        assert res.value == best


def _vertex_optimum(A, b, c):
    """Enumerate all basic feasible points of {x >= 0, Ax <= b} by solving
    every n-subset of the active constraint candidates."""
    from itertools import combinations
    n = len(c)
    cands = [(row, rhs) for row, rhs in zip(A, b)]
    cands += [([F(1 if j == i else 0) for j in range(n)], F(0))
              for i in range(n)]
    best = None
    for subset in combinations(range(len(cands)), n):
        rows = [cands[i][0] for i in subset]
        rhs = [cands[i][1] for i in subset]
        x = _solve_square(rows, rhs)
        if x is None or any(v < 0 for v in x):
            continue
        if any(sum(r * v for r, v in zip(row, x)) > bb for row, bb in zip(A, b)):
            continue
        val = sum(cv * v for cv, v in zip(c, x))
        if best is None or val > best:
            best = val
    return best


def _solve_square(rows, rhs):
    n = len(rhs)
    M = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pivval = M[col][col]
        M[col] = [v / pivval for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]
