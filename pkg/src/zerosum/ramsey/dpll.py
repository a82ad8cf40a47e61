"""A small DPLL solver: two-watched-literal unit propagation, chronological backtracking.

No clause learning.  Good enough to settle the small zero-sum-free
instances exported by :mod:`zerosum.ramsey.cnf`; anything bigger should go to
an external solver via DIMACS.
"""
from __future__ import annotations

from typing import Sequence

__all__ = ['dpll', 'DpllBudgetExceeded']


class DpllBudgetExceeded(RuntimeError):
    pass


def dpll(num_vars: int, clauses: Sequence[Sequence[int]], phase: Sequence[bool] | None = None,
         max_decisions: int | None = None) -> dict[int, bool] | None:
    """Return a satisfying assignment {var: bool} or None if unsatisfiable.

    Branches on the lowest-numbered unassigned variable; ``phase[v]`` picks
    the value tried first (default True).
    """
    val = [0] * (num_vars + 1)          # 1 true, -1 false, 0 free
    watches: dict[int, list[list[int]]] = {}
    trail: list[int] = []
    units: list[int] = []
    for c in clauses:
        c = list(dict.fromkeys(c))
        if any(-l in c for l in c):
            continue
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
            continue
        watches.setdefault(c[0], []).append(c)
        watches.setdefault(c[1], []).append(c)

    def value(lit: int) -> int:
        v = val[abs(lit)]
        return v if lit > 0 else -v

    def assign(lit: int) -> bool:
        v = value(lit)
        if v == 1:
            return True
        if v == -1:
            return False
        val[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)
        return True

    qhead = 0

    def propagate() -> bool:
        nonlocal qhead
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            ws = watches.get(false_lit)
            if not ws:
                continue
            keep = []
            i = 0
            conflict = False
            while i < len(ws):
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                other = c[0]
                if value(other) == 1:
                    keep.append(c)
                    continue
                for k in range(2, len(c)):
                    if value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches.setdefault(c[1], []).append(c)
                        break
                else:
                    keep.append(c)
                    if value(other) == -1:
                        conflict = True
                        keep.extend(ws[i:])
                        break
                    assign(other)
            watches[false_lit] = keep
            if conflict:
                return False
        return True

    for u in units:
        if not assign(u):
            return None
    if not propagate():
        return None

    # decision stack entries: (trail length before decision, literal, already flipped)
    stack: list[tuple[int, int, bool]] = []
    next_var = 1
    decisions = 0
    while True:
        while next_var <= num_vars and val[next_var] != 0:
            next_var += 1
        if next_var > num_vars:
            return {v: val[v] == 1 for v in range(1, num_vars + 1)}
        decisions += 1
        if max_decisions is not None and decisions > max_decisions:
            raise DpllBudgetExceeded(f'more than {max_decisions} decisions')
        lit = next_var if (phase is None or phase[next_var]) else -next_var
        stack.append((len(trail), lit, False))
        assign(lit)
        while not propagate():
            # undo to the most recent unflipped decision and flip it
            while stack and stack[-1][2]:
                stack.pop()
            if not stack:
                return None
            mark, lit, _ = stack.pop()
            for l in trail[mark:]:
                val[abs(l)] = 0
            del trail[mark:]
            qhead = mark
            stack.append((mark, -lit, True))
            assign(-lit)
            next_var = 1
