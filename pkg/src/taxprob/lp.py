"""Exact rational linear programming via an integer-pivoting simplex.

The oracle needs optima as exact rationals: equality checks against the
inference rules, and strict guard comparisons downstream, leave no room for
floating-point error.  Instead of pivoting on `fractions.Fraction` (whose
per-operation gcd makes dense pivots slow), the tableau is kept in plain
integers: every row is an integer multiple of the canonical simplex row,
which is harmless because each row is an equation and the pivot element is
kept positive.  Pivoting is then two integer multiplications per entry, and a
row is divided by its gcd only when its entries grow large.

Bland's rule (smallest eligible index, for both the entering and the leaving
variable) guarantees termination under the heavy degeneracy these homogeneous
constraint systems exhibit.

Variables are implicitly nonnegative.  Rows may use '<=', '>=' or '=='.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InternalSolverError

Row = Tuple[Sequence[Fraction], str, Fraction]

_GROWTH_BITS = 64  # gcd-reduce a row once entries exceed this many bits


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    x: Optional[List[Fraction]] = None


def solve_lp(objective: Sequence[Fraction], rows: Sequence[Row],
             maximize: bool = True) -> LpResult:
    """Optimize objective . x over {x >= 0} subject to the given rows."""
    tab = _Tableau(len(objective), rows)
    if not tab.phase_one():
        return LpResult("infeasible")
    status = tab.phase_two(objective, maximize)
    if status == "unbounded":
        return LpResult("unbounded")
    x = tab.solution()
    value = sum((c * xi for c, xi in zip(objective, x)), Fraction(0))
    return LpResult("optimal", value, x)


def _scaled_ints(values: Sequence[Fraction]) -> List[int]:
    denom = 1
    for v in values:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    return [int(v * denom) for v in values]


class _Tableau:
    def __init__(self, n_vars: int, rows: Sequence[Row]):
        self.n = n_vars
        specs = []  # (int coeffs, sense, int rhs) with rhs >= 0
        for coeffs, sense, rhs in rows:
            coeffs = list(coeffs)
            if len(coeffs) != n_vars:
                raise ValueError("row length does not match variable count")
            ints = _scaled_ints([Fraction(c) for c in coeffs] + [Fraction(rhs)])
            icoeffs, irhs = ints[:-1], ints[-1]
            if irhs < 0:
                icoeffs = [-c for c in icoeffs]
                irhs = -irhs
                sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
            if sense == ">=" and irhs == 0:
                icoeffs = [-c for c in icoeffs]
                sense = "<="
            specs.append((icoeffs, sense, irhs))

        n_slack = sum(1 for _, sense, _ in specs if sense != "==")
        n_art = sum(1 for _, sense, _ in specs if sense != "<=")
        self.total = self.n + n_slack + n_art
        self.art_start = self.n + n_slack
        self.rows: List[List[int]] = []
        self.basis: List[int] = []
        self.banned = [False] * self.total

        slack_at = self.n
        art_at = self.art_start
        for icoeffs, sense, irhs in specs:
            row = icoeffs + [0] * (n_slack + n_art) + [irhs]
            if sense == "<=":
                row[slack_at] = 1
                self.basis.append(slack_at)
                slack_at += 1
            elif sense == ">=":
                row[slack_at] = -1  # surplus
                slack_at += 1
                row[art_at] = 1
                self.basis.append(art_at)
                art_at += 1
            else:  # "=="
                row[art_at] = 1
                self.basis.append(art_at)
                art_at += 1
            self.rows.append(row)
        self.z: List[int] = [0] * (self.total + 1)

    # -- pivoting machinery --------------------------------------------------

    def _reduce_row(self, row: List[int]):
        g = 0
        for v in row:
            if v:
                g = math.gcd(g, v)
                if g == 1:
                    return
        if g > 1:
            for j in range(len(row)):
                row[j] //= g

    def _pivot(self, r: int, col: int):
        rows = self.rows
        prow = rows[r]
        p = prow[col]
        assert p > 0
        width = self.total + 1
        for k in range(len(rows)):
            if k == r:
                continue
            row = rows[k]
            f = row[col]
            if f == 0:
                continue  # rows are independently scaled; nothing to eliminate
            for j in range(width):
                row[j] = row[j] * p - f * prow[j]
        zf = self.z[col]
        for j in range(width):
            self.z[j] = self.z[j] * p - zf * prow[j]
        self.basis[r] = col
        if max(abs(v) for v in prow).bit_length() > _GROWTH_BITS:
            self._reduce_row(prow)
        for row in rows:
            if max(abs(v) for v in row).bit_length() > _GROWTH_BITS:
                self._reduce_row(row)
        if max(abs(v) for v in self.z).bit_length() > _GROWTH_BITS:
            self._reduce_row(self.z)

    def _entering(self) -> Optional[int]:
        # Bland: the smallest-index improvable column
        for j in range(self.total):
            if not self.banned[j] and self.z[j] < 0:
                return j
        return None

    def _leaving(self, col: int) -> Optional[int]:
        best = None  # (num, den, basis var, row index)
        for i, row in enumerate(self.rows):
            a = row[col]
            if a <= 0:
                continue
            num, den = row[-1], a
            if best is None:
                best = (num, den, self.basis[i], i)
                continue
            cmp = num * best[1] - best[0] * den
            if cmp < 0 or (cmp == 0 and self.basis[i] < best[2]):
                best = (num, den, self.basis[i], i)
        return None if best is None else best[3]

    def _optimize(self) -> str:
        while True:
            col = self._entering()
            if col is None:
                return "optimal"
            r = self._leaving(col)
            if r is None:
                return "unbounded"
            self._pivot(r, col)

    def _rebuild_z(self, coeffs: List[int]):
        """Set the objective row to -coeffs and reduce it against the basis."""
        self.z = [-c for c in coeffs] + [0] * (self.total - len(coeffs)) + [0]
        for i, b in enumerate(self.basis):
            zb = self.z[b]
            if zb == 0:
                continue
            row = self.rows[i]
            p = row[b]
            for j in range(self.total + 1):
                self.z[j] = self.z[j] * p - zb * row[j]
        if self.z and max(abs(v) for v in self.z).bit_length() > _GROWTH_BITS:
            self._reduce_row(self.z)

    # -- the two phases --------------------------------------------------------

    def phase_one(self) -> bool:
        """Drive the artificial variables to zero; False when infeasible."""
        if self.art_start == self.total:
            return True
        coeffs = [0] * self.total
        for j in range(self.art_start, self.total):
            coeffs[j] = -1  # maximize -(sum of artificials)
        self._rebuild_z(coeffs)
        status = self._optimize()
        if status == "unbounded":
            raise InternalSolverError("phase-1 objective cannot be unbounded")
        for i, b in enumerate(self.basis):
            if b >= self.art_start and self.rows[i][-1] != 0:
                return False
        # pivot out artificials that remain basic at value zero
        for i, b in enumerate(self.basis):
            if b < self.art_start:
                continue
            row = self.rows[i]
            for j in range(self.art_start):
                if row[j] != 0 and not self.banned[j]:
                    if row[j] < 0:
                        for k in range(self.total + 1):
                            row[k] = -row[k]
                    self._pivot(i, j)
                    break
            # a row with no usable column is redundant; its artificial stays
            # basic at zero and the banned columns keep it inert
        for j in range(self.art_start, self.total):
            self.banned[j] = True
        return True

    def phase_two(self, objective: Sequence[Fraction], maximize: bool) -> str:
        sign = 1 if maximize else -1
        scaled = _scaled_ints([sign * Fraction(c) for c in objective])
        self._rebuild_z(scaled)
        return self._optimize()

    def solution(self) -> List[Fraction]:
        x = [Fraction(0)] * self.n
        for i, b in enumerate(self.basis):
            if b < self.n:
                x[b] = Fraction(self.rows[i][-1], self.rows[i][b])
        return x
