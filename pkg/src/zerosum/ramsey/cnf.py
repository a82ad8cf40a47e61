"""SAT model for "K_n has a zero-sum-free A-labelling".

Variables x[arc, g] say arc carries g (one-hot per arc).  For each simple
directed cycle e_1 .. e_k, partial-sum variables s[cycle, j, g] are forced
true by the implications

    s[j-1, g] & x[e_j, h]  ->  s[j, g + h]

with s[1, g] <-> x[e_1, g], and a final clause per g forbids
s[k-1, g] & x[e_k, -g].  Arcs (0, v) are fixed to 0 by unit clauses
(canonical switching representative), which keeps satisfiability unchanged.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..abelian import TableGroup, parse_group_spec
from ..labelling import ArcLabelling
from ..oracle import find_zero_sum_cycle_exhaustive
from .dpll import dpll

__all__ = ['CnfInstance', 'ModelError', 'SAT_MAX_N', 'arc_order', 'sat_export', 'sat_solve',
           'sat_import_verify', 'parse_model', 'decode_model']

SAT_MAX_N = 7


class ModelError(ValueError):
    pass


def arc_order(n: int) -> list[tuple[int, int]]:
    """Arcs sorted by larger endpoint, then smaller endpoint, forward before back."""
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return sorted(arcs, key=lambda a: (max(a), min(a), a[0] > a[1]))


def _simple_cycles(n: int):
    for s in range(n):
        rest = range(s + 1, n)
        for k in range(1, n - s):
            for combo in itertools.permutations(rest, k):
                yield (s,) + combo


@dataclass
class CnfInstance:
    group: TableGroup
    n: int
    num_vars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    annotations: dict[int, tuple] = field(default_factory=dict)
    x: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    cycles: list[tuple[int, ...]] = field(default_factory=list)

    def new_var(self, note: tuple) -> int:
        self.num_vars += 1
        self.annotations[self.num_vars] = note
        return self.num_vars

    def to_dimacs(self) -> str:
        g = self.group
        lines = [f'c zero-sum-free {g.name}-labelling of K_{self.n}']
        for v, note in self.annotations.items():
            res = ','.join(map(str, g.residues(note[-1])))
            if note[0] == 'x':
                lines.append(f'c x {v} arc {note[1][0]} {note[1][1]} label {res}')
            else:
                lines.append(f'c s {v} cycle {note[1]} pos {note[2]} partial {res}')
        lines.append(f'p cnf {self.num_vars} {len(self.clauses)}')
        lines.extend(' '.join(map(str, c)) + ' 0' for c in self.clauses)
        return '\n'.join(lines) + '\n'

    def phase(self) -> list[bool]:
        """Preferred DPLL polarity: try labels (x) true, partial sums false."""
        out = [True] * (self.num_vars + 1)
        for v, note in self.annotations.items():
            out[v] = note[0] == 'x'
        return out

    @property
    def unit_clauses(self) -> list[tuple[int, ...]]:
        return [c for c in self.clauses if len(c) == 1]


def sat_export(spec: TableGroup, n: int, symmetry_break: bool = False) -> CnfInstance:
    """Build the CNF instance; satisfiable iff a zero-sum-free labelling of K_n exists.

    With ``symmetry_break`` the labels w(v, 0), v = 1..n-1, are additionally
    required to be non-decreasing in code order; relabelling vertices 1..n-1
    achieves this without leaving the canonical class.
    """
    if n < 2:
        raise ValueError('n must be >= 2')
    if n > SAT_MAX_N:
        raise ValueError(f'n={n} exceeds the SAT export cycle budget ({SAT_MAX_N})')
    k = spec.order
    add = spec._add_rows
    neg = [int(x) for x in spec.neg_table]
    inst = CnfInstance(spec, n)
    for arc in arc_order(n):
        inst.x[arc] = [inst.new_var(('x', arc, g)) for g in range(k)]
    for arc, xs in inst.x.items():
        inst.clauses.append(tuple(xs))
        inst.clauses.extend((-a, -b) for a, b in itertools.combinations(xs, 2))
    for v in range(1, n):
        inst.clauses.append((inst.x[(0, v)][0],))
    if symmetry_break:
        for v in range(1, n - 1):
            for g in range(k):
                for h in range(g):
                    inst.clauses.append((-inst.x[(v, 0)][g], -inst.x[(v + 1, 0)][h]))
    for cid, cyc in enumerate(_simple_cycles(n)):
        inst.cycles.append(cyc)
        arcs = [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        prev = [inst.new_var(('s', cid, 1, g)) for g in range(k)]
        for g in range(k):
            inst.clauses.append((-prev[g], inst.x[arcs[0]][g]))
            inst.clauses.append((prev[g], -inst.x[arcs[0]][g]))
        for j in range(2, len(arcs)):
            cur = [inst.new_var(('s', cid, j, g)) for g in range(k)]
            xs = inst.x[arcs[j - 1]]
            for g in range(k):
                for h in range(k):
                    inst.clauses.append((-prev[g], -xs[h], cur[add[g][h]]))
            prev = cur
        last = inst.x[arcs[-1]]
        for g in range(k):
            inst.clauses.append((-prev[g], -last[neg[g]]))
    return inst


def parse_model(text: str) -> set[int]:
    """True variables from solver output ("v" lines; "s"/"c" lines ignored).

    Plain lines of signed integers are accepted as well.
    """
    true = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in 'cs':
            continue
        if line.startswith('v'):
            line = line[1:]
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ModelError(f'bad token {tok!r} in model') from None
            if lit > 0:
                true.add(lit)
    return true


def decode_model(true_vars, spec: TableGroup, n: int) -> ArcLabelling:
    """Labelling encoded by the x variables of a model; one-hot is enforced."""
    if isinstance(true_vars, dict):
        true_vars = {v for v, b in true_vars.items() if b}
    true_vars = set(true_vars)
    k = spec.order
    t = np.full((n, n), -1, dtype=np.int32)
    var = 1
    for arc in arc_order(n):
        hot = [g for g in range(k) if var + g in true_vars]
        if len(hot) != 1:
            raise ModelError(f'arc {arc} has {len(hot)} true label variables')
        t[arc] = hot[0]
        var += k
    return ArcLabelling(spec, t)


def sat_import_verify(model, spec: TableGroup | str, n: int) -> ArcLabelling:
    """Decode a model and confirm zero-sum-freeness with the oracle."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if isinstance(model, str):
        model = parse_model(model)
    w = decode_model(model, spec, n)
    bad = find_zero_sum_cycle_exhaustive(w)
    if bad is not None:
        raise ModelError(f'decoded labelling has zero-sum cycle {bad.vertices}; '
                         f'model is wrong or the encoder is buggy')
    return w


def sat_solve(inst: CnfInstance, max_decisions: int | None = None) -> dict[int, bool] | None:
    """Run the built-in DPLL on an exported instance."""
    return dpll(inst.num_vars, inst.clauses, inst.phase(), max_decisions)
