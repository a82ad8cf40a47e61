"""Brute-force ground truth over simple directed cycles and paths.

Everything here is exponential in n and guarded by explicit budgets.  Sums
and path-sum sets are element codes of the labelling's group.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

from .abelian import TableGroup
from .labelling import ArcLabelling

__all__ = [
    'BudgetError', 'DiPath', 'DiCycle', 'MAX_ENUMERATION_N', 'WARN_ENUMERATION_N',
    'find_zero_sum_cycle_exhaustive', 'is_zero_sum_free', 'iter_cycles', 'cycle_count',
    'path_sum_set', 'path_sum_mask', 'is_complete_at', 'verify_cycle', 'verify_path',
    'witness_to_json', 'mask_to_codes', 'shift_mask',
]

MAX_ENUMERATION_N = 12
WARN_ENUMERATION_N = 9


class BudgetError(RuntimeError):
    """Requested enumeration exceeds the documented budget."""


@dataclass(frozen=True)
class DiPath:
    vertices: tuple[int, ...]
    sum: int

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(int(v) for v in self.vertices))
        if len(self.vertices) < 2 or len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f'not a simple path: {self.vertices}')

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        """Number of arcs."""
        return len(self.vertices) - 1


@dataclass(frozen=True)
class DiCycle:
    """Simple directed cycle; the closing arc last -> first is implicit.

    Stored in canonical rotation (smallest vertex first).
    """
    vertices: tuple[int, ...]
    sum: int

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vertices)
        if len(vs) < 2 or len(set(vs)) != len(vs):
            raise ValueError(f'not a simple cycle: {vs}')
        k = vs.index(min(vs))
        object.__setattr__(self, 'vertices', vs[k:] + vs[:k])

    def __len__(self) -> int:
        return len(self.vertices)

    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def cycle_count(n: int) -> int:
    """Number of simple directed cycles (length >= 2) in the complete digraph."""
    return sum(math.comb(n, k) * math.factorial(k - 1) for k in range(2, n + 1))


def _check_budget(n: int) -> None:
    if n > MAX_ENUMERATION_N:
        raise BudgetError(f'n={n} exceeds the enumeration budget ({MAX_ENUMERATION_N})')
    if n > WARN_ENUMERATION_N:
        warnings.warn(f'exhaustive enumeration on n={n} may be slow', RuntimeWarning, stacklevel=3)


def iter_cycles(w: ArcLabelling, min_len: int = 2) -> Iterator[DiCycle]:
    """Every simple directed cycle once, minimal vertex first, in DFS order."""
    _check_budget(w.n)
    rows, add, n = w.rows, w.group._add_rows, w.n
    for s in range(n):
        path = [s]

        def dfs(cur: int, total: int, used: int):
            if len(path) >= max(2, min_len):
                yield DiCycle(tuple(path), add[total][rows[cur][s]])
            for nxt in range(s + 1, n):
                if not used >> nxt & 1:
                    path.append(nxt)
                    yield from dfs(nxt, add[total][rows[cur][nxt]], used | 1 << nxt)
                    path.pop()

        yield from dfs(s, 0, 1 << s)


def find_zero_sum_cycle_exhaustive(w: ArcLabelling, min_len: int = 2) -> DiCycle | None:
    """First zero-sum simple cycle of length >= min_len in DFS order, else None.

    DFS from each start s over vertices > s.  A state (visited set, current
    vertex, partial sum) that has failed once is never expanded again; this
    keeps the DFS order and so the reported witness.
    """
    _check_budget(w.n)
    rows, add, n = w.rows, w.group._add_rows, w.n
    need = max(2, min_len)
    for s in range(n):
        dead: set[tuple[int, int, int]] = set()
        path = [s]

        def dfs(cur: int, total: int, used: int) -> bool:
            if len(path) >= need and add[total][rows[cur][s]] == 0:
                return True
            key = (used, cur, total)
            if key in dead:
                return False
            for nxt in range(s + 1, n):
                if not used >> nxt & 1:
                    path.append(nxt)
                    if dfs(nxt, add[total][rows[cur][nxt]], used | 1 << nxt):
                        return True
                    path.pop()
            dead.add(key)
            return False

        if dfs(s, 0, 1 << s):
            return DiCycle(tuple(path), 0)
    return None


def is_zero_sum_free(w: ArcLabelling, min_len: int = 2) -> bool:
    return find_zero_sum_cycle_exhaustive(w, min_len) is None


@functools.lru_cache(maxsize=64)
def _shift_table(group: TableGroup) -> list[list[int]] | None:
    k = group.order
    if k > 10:
        return None
    add = group._add_rows
    table = []
    for g in range(k):
        row = [0] * (1 << k)
        for mask in range(1, 1 << k):
            low = mask & -mask
            row[mask] = row[mask ^ low] | 1 << add[low.bit_length() - 1][g]
        table.append(row)
    return table


def shift_mask(group: TableGroup, mask: int, g: int) -> int:
    """{x + g : x in mask} for a bitmask of element codes."""
    t = _shift_table(group)
    if t is not None:
        return t[g][mask]
    add = group._add_rows
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << add[low.bit_length() - 1][g]
        mask ^= low
    return out


def mask_to_codes(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def path_sum_mask(w: ArcLabelling, u: int, v: int, min_len: int = 1,
                  vertices: Sequence[int] | None = None) -> int:
    """Bitmask of label sums over simple u->v paths with >= min_len arcs.

    ``vertices`` restricts the paths to an induced subdigraph.
    """
    if u == v:
        raise ValueError('path endpoints must differ')
    allowed = set(range(w.n)) if vertices is None else set(vertices)
    if u not in allowed or v not in allowed:
        raise ValueError('endpoints outside the allowed vertex set')
    _check_budget(len(allowed))
    group = w.group
    rows = w.rows
    others = sorted(allowed)
    layer = {(1 << u, u): 1}
    result = 0
    arcs = 0
    while layer:
        arcs += 1
        nxt_layer: dict[tuple[int, int], int] = {}
        for (used, cur), sums in layer.items():
            for nxt in others:
                if used >> nxt & 1:
                    continue
                shifted = shift_mask(group, sums, rows[cur][nxt])
                if nxt == v:
                    if arcs >= min_len:
                        result |= shifted
                    continue
                key = (used | 1 << nxt, nxt)
                nxt_layer[key] = nxt_layer.get(key, 0) | shifted
        layer = nxt_layer
    return result


def path_sum_set(w: ArcLabelling, u: int, v: int, min_len: int = 1) -> frozenset[int]:
    """Set of element codes realized as sums of simple directed u->v paths."""
    return mask_to_codes(path_sum_mask(w, u, v, min_len))


def is_complete_at(w: ArcLabelling, u: int, v: int, min_len: int = 1) -> bool:
    return path_sum_mask(w, u, v, min_len) == (1 << w.group.order) - 1


def _fold(w: ArcLabelling, vs: Sequence[int], closed: bool) -> int:
    n = w.n
    for x in vs:
        if not isinstance(x, int) or not 0 <= x < n:
            raise ValueError(f'vertex {x!r} out of range')
    if len(set(vs)) != len(vs):
        raise ValueError(f'repeated vertex in {list(vs)}')
    if len(vs) < 2:
        raise ValueError('need at least two vertices')
    add, rows = w.group._add_rows, w.rows
    total = 0
    for a, b in zip(vs, vs[1:]):
        total = add[total][rows[a][b]]
    if closed:
        total = add[total][rows[vs[-1]][vs[0]]]
    return total


def verify_cycle(w: ArcLabelling, c: DiCycle | Sequence[int]) -> int:
    """Label sum of a simple cycle, recomputed from the labelling alone."""
    vs = list(c.vertices if isinstance(c, DiCycle) else c)
    return _fold(w, [int(x) for x in vs], closed=True)


def verify_path(w: ArcLabelling, p: DiPath | Sequence[int]) -> int:
    vs = list(p.vertices if isinstance(p, DiPath) else p)
    return _fold(w, [int(x) for x in vs], closed=False)


def witness_to_json(w: ArcLabelling, x: DiCycle | DiPath) -> dict:
    kind = 'cycle' if isinstance(x, DiCycle) else 'path'
    return {'kind': kind, 'vertices': list(x.vertices), 'sum': w.group.residues(x.sum)}
