"""Exact n(A) by exhaustive search over canonical labellings.

Only labellings with w(0, v) = 0 for all v are searched: every labelling is
switching-equivalent to exactly one of these and switching preserves
zero-sum-freeness.  The search adds vertices one at a time.  When vertex k
joins a zero-sum-free labelling of K_k, the new cycles are exactly
k -> a ~> b -> k for a simple path a ~> b among the old vertices (a = b gives
a digon), so the new labels must satisfy

    w(k, a) + w(b, k) not in  -S(a, b)

where S(a, b) is the set of old a ~> b path sums (S(a, a) = {0}).  Sets are
bitmasks over element codes, and each new label is drawn from the bitmask of
values that survive all constraints against labels already placed.  Arcs are
therefore fixed in order of their larger endpoint, so digons and triangles
close, and prune, as early as possible.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..abelian import GroupSpec, TableGroup
from ..labelling import ArcLabelling
from ..oracle import find_zero_sum_cycle_exhaustive, shift_mask

log = logging.getLogger(__name__)

__all__ = ['SearchBudgetExceeded', 'SearchStats', 'SearchResult', 'exists_zero_sum_free',
           'compute_nA', 'iter_zero_sum_free', 'zero_sum_free_extensions', 'DEFAULT_NODE_BUDGET']

DEFAULT_NODE_BUDGET = 10 ** 10


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: dict = field(default_factory=lambda: {'digon': 0, 'cycle': 0})
    wall_time: float = 0.0

    def merge(self, other: 'SearchStats') -> None:
        self.nodes += other.nodes
        for k, v in other.prunes.items():
            self.prunes[k] = self.prunes.get(k, 0) + v

    def summary(self) -> str:
        return (f'nodes={self.nodes} prunes(digon)={self.prunes["digon"]} '
                f'prunes(cycle)={self.prunes["cycle"]} time={self.wall_time:.2f}s')

    def to_json(self) -> dict:
        return {'nodes': self.nodes, 'prunes': dict(self.prunes), 'wall_time': self.wall_time}


@dataclass
class SearchResult:
    group: TableGroup
    value: int
    witness: ArcLabelling
    stats: SearchStats
    per_n: dict = field(default_factory=dict)


class _Search:
    def __init__(self, group: TableGroup, node_budget: int, symmetry_break: bool):
        self.group = group
        self.k = group.order
        self.full = (1 << self.k) - 1
        self.add = group._add_rows
        self.neg = [int(x) for x in group.neg_table]
        self.node_budget = node_budget
        self.symmetry_break = symmetry_break
        self.stats = SearchStats()
        # shift[g][mask] = mask + g
        self.shift = [[shift_mask(group, m, g) for m in range(1 << self.k)] for g in range(self.k)] \
            if self.k <= 10 else None

    def _shift(self, mask: int, g: int) -> int:
        if self.shift is not None:
            return self.shift[g][mask]
        return shift_mask(self.group, mask, g)

    def path_sums(self, rows: list[list[int]]) -> list[list[int]]:
        """S[a][b]: bitmask of simple a ~> b path sums; S[a][a] = {0}."""
        m = len(rows)
        out = [[0] * m for _ in range(m)]
        for a in range(m):
            out[a][a] = 1
            layer = {(1 << a, a): 1}
            while layer:
                nxt = {}
                for (used, cur), sums in layer.items():
                    r = rows[cur]
                    for b in range(m):
                        if used >> b & 1:
                            continue
                        s = self._shift(sums, r[b])
                        out[a][b] |= s
                        key = (used | 1 << b, b)
                        nxt[key] = nxt.get(key, 0) | s
                layer = nxt
        return out

    def extensions(self, rows: list[list[int]], first_out_min: int = 0):
        """Yield (out, inn) label lists for a new vertex keeping zero-sum-freeness.

        out[a] = w(new, a), inn[b] = w(b, new), inn[0] = 0 by canonicity.
        """
        m = len(rows)
        S = self.path_sums(rows)
        # neg_forb[a][b] = -S(a, b): values of out[a] + inn[b] that close a zero-sum cycle
        neg_forb = [[0] * m for _ in range(m)]
        for a in range(m):
            for b in range(m):
                mask, acc = S[a][b], 0
                while mask:
                    low = mask & -mask
                    acc |= 1 << self.neg[low.bit_length() - 1]
                    mask ^= low
                neg_forb[a][b] = acc
        # variable order: out[0], inn[1], out[1], inn[2], out[2], ...
        order = [('o', 0)] + [x for j in range(1, m) for x in (('i', j), ('o', j))]
        out = [None] * m
        inn = [None] * m
        inn[0] = 0
        stats = self.stats
        full = self.full
        shift = self._shift
        neg = self.neg

        def allowed(kind: str, j: int) -> tuple[int, int]:
            digon = cyc = 0
            if kind == 'o':
                for b in range(m):
                    y = inn[b]
                    if y is None:
                        continue
                    # out[j] must avoid -S(j,b) - inn[b]
                    bad = shift(neg_forb[j][b], neg[y])
                    if b == j:
                        digon |= bad
                    else:
                        cyc |= bad
            else:
                for a in range(m):
                    x = out[a]
                    if x is None:
                        continue
                    bad = shift(neg_forb[a][j], neg[x])
                    if a == j:
                        digon |= bad
                    else:
                        cyc |= bad
            return digon, cyc

        def rec(idx: int):
            if idx == len(order):
                yield list(out), list(inn)
                return
            kind, j = order[idx]
            digon, cyc = allowed(kind, j)
            stats.prunes['digon'] += bin(digon & full).count('1')
            stats.prunes['cycle'] += bin(cyc & ~digon & full).count('1')
            free = full & ~digon & ~cyc
            if kind == 'o' and j == 0 and first_out_min:
                free &= ~((1 << first_out_min) - 1)
            while free:
                low = free & -free
                free ^= low
                stats.nodes += 1
                if stats.nodes > self.node_budget:
                    raise SearchBudgetExceeded(f'node budget {self.node_budget} exceeded')
                val = low.bit_length() - 1
                if kind == 'o':
                    out[j] = val
                else:
                    inn[j] = val
                yield from rec(idx + 1)
                if kind == 'o':
                    out[j] = None
                else:
                    inn[j] = None

        yield from rec(0)

    @staticmethod
    def grow(rows: list[list[int]], out: list[int], inn: list[int]) -> list[list[int]]:
        m = len(rows)
        new = [r + [inn[a]] for a, r in enumerate(rows)]
        new.append(list(out) + [-1])
        return new

    def dfs(self, rows: list[list[int]], n: int):
        """Yield every canonical zero-sum-free labelling of K_n extending ``rows``."""
        m = len(rows)
        if m == n:
            yield rows
            return
        lo = rows[m - 1][0] if (self.symmetry_break and m >= 2) else 0
        for out, inn in self.extensions(rows, first_out_min=lo):
            yield from self.dfs(self.grow(rows, out, inn), n)


_ROOT = [[-1]]


def _to_labelling(group: TableGroup, rows) -> ArcLabelling:
    return ArcLabelling(group, np.array(rows, dtype=np.int32))


def iter_zero_sum_free(spec: TableGroup, n: int, symmetry_break: bool = False,
                       node_budget: int = DEFAULT_NODE_BUDGET):
    """Every canonical zero-sum-free labelling of K_n, in search order."""
    s = _Search(spec, node_budget, symmetry_break)
    for rows in s.dfs(_ROOT, n):
        yield _to_labelling(spec, rows)


def zero_sum_free_extensions(w: ArcLabelling) -> list[ArcLabelling]:
    """All canonical one-vertex extensions of a zero-sum-free canonical labelling."""
    s = _Search(w.group, DEFAULT_NODE_BUDGET, False)
    return [_to_labelling(w.group, s.grow(w.rows, o, i)) for o, i in s.extensions(w.rows)]


def _search_from(args):
    factors_or_group, n, prefix, budget, symmetry_break = args
    group = GroupSpec(factors_or_group) if isinstance(factors_or_group, tuple) else factors_or_group
    s = _Search(group, budget, symmetry_break)
    for rows in s.dfs(prefix, n):
        return rows, s.stats
    return None, s.stats


def exists_zero_sum_free(spec: TableGroup, n: int, threads: int = 1,
                         node_budget: int = DEFAULT_NODE_BUDGET, symmetry_break: bool = False,
                         stats: SearchStats | None = None) -> ArcLabelling | None:
    """A canonical zero-sum-free labelling of K_n, or None if none exists.

    Complete search.  With ``threads`` > 1 the zero-sum-free labellings of a
    small prefix are split across worker processes; the witness reported is
    the first in sequential search order either way.
    """
    if n < 2:
        raise ValueError('n must be >= 2')
    stats = stats if stats is not None else SearchStats()
    t0 = time.perf_counter()
    try:
        if threads <= 1 or n <= 3:
            s = _Search(spec, node_budget, symmetry_break)
            try:
                for rows in s.dfs(_ROOT, n):
                    w = _to_labelling(spec, rows)
                    if find_zero_sum_cycle_exhaustive(w) is not None:
                        raise AssertionError('search produced a labelling with a zero-sum cycle')
                    return w
                return None
            finally:
                stats.merge(s.stats)
        head = _Search(spec, node_budget, symmetry_break)
        prefixes = list(head.dfs(_ROOT, 3))
        stats.merge(head.stats)
        key = spec.factors if isinstance(spec, GroupSpec) else spec
        jobs = [(key, n, p, node_budget, symmetry_break) for p in prefixes]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_search_from, jobs))
        found = None
        for rows, st in results:
            stats.merge(st)
            if rows is not None and found is None:
                found = rows
        if found is None:
            return None
        w = _to_labelling(spec, found)
        if find_zero_sum_cycle_exhaustive(w) is not None:
            raise AssertionError('search produced a labelling with a zero-sum cycle')
        return w
    finally:
        stats.wall_time += time.perf_counter() - t0


def compute_nA(spec: TableGroup, n_max: int = 8, threads: int = 1,
               node_budget: int = DEFAULT_NODE_BUDGET, symmetry_break: bool = False) -> SearchResult:
    """Least n <= n_max with no zero-sum-free labelling of K_n.

    Stops at the first such n: a zero-sum-free labelling of K_{n+1} restricts
    to one of K_n, so absence is monotone in n.
    """
    if n_max < 2:
        raise ValueError('n_max must be >= 2')
    stats = SearchStats()
    witness = None
    per_n = {}
    for n in range(2, n_max + 1):
        w = exists_zero_sum_free(spec, n, threads, node_budget, symmetry_break, stats)
        per_n[n] = w is not None
        log.info('%s n=%d zero-sum-free labelling %s; %s', spec.name, n,
                 'found' if w is not None else 'absent', stats.summary())
        if w is None:
            if witness is None:
                # only n = 2 can fail first, and K_2 always admits one
                raise AssertionError('no zero-sum-free labelling of K_2')
            return SearchResult(spec, n, witness, stats, per_n)
        witness = w
    raise SearchBudgetExceeded(
        f'n({spec.name}) > {n_max}: a zero-sum-free labelling exists on K_{n_max}')
