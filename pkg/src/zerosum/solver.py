"""Constructive zero-sum cycle finders.

``solve_general`` works over any finite Abelian group: a chain of triangles
either certifies that every element is a path sum between two vertices
(close the right path with the reverse arc) or confines a large vertex set to
a proper subgroup B, where the search recurses with B as the label group.
``solve_prime`` handles Z_p with chains of K4's.  Every witness is re-checked
against the caller's labelling before it is returned.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .abelian import GroupError, GroupSpec, is_prime
from .chains import (Complete, InsufficientVertices, Stalled, ZeroSumFound, build_k4_chain,
                     build_triangle_chain)
from .labelling import ArcLabelling, EdgeLabelling, Switching, lift_undirected
from .oracle import (MAX_ENUMERATION_N, DiCycle, find_zero_sum_cycle_exhaustive, verify_cycle,
                     witness_to_json)

log = logging.getLogger(__name__)

__all__ = [
    'NoWitnessError', 'SolveReport', 'solve_general', 'solve_prime', 'solve_undirected',
    'solve_exhaustive', 'solve', 'general_threshold', 'prime_threshold', 'report_to_json',
]

GENERAL = 'general-recursive'
PRIME = 'prime-chain'
EXHAUSTIVE = 'exhaustive-fallback'


class NoWitnessError(RuntimeError):
    """No zero-sum cycle was produced.

    ``verdict`` is ``'zero-sum-free'`` when exhaustive search proved there is
    none, ``'inconclusive'`` when the input was beyond every budget.
    """

    def __init__(self, verdict: str, message: str):
        super().__init__(message)
        self.verdict = verdict


class _Stall(Exception):
    pass


@dataclass
class SolveReport:
    witness: DiCycle
    method: str
    trace: list[tuple[int, int]] = field(default_factory=list)
    switchings: list[Switching] = field(default_factory=list)
    guaranteed: bool = False


def general_threshold(order: int) -> int:
    return 8 * order


def prime_threshold(p: int) -> int:
    return (3 * p - 1) // 2


def _finish(w: ArcLabelling, cycle, min_len: int, method: str, trace, switchings, guaranteed) -> SolveReport:
    vs = tuple(int(v) for v in cycle)
    total = verify_cycle(w, vs)
    if total != 0 or len(vs) < max(2, min_len):
        raise AssertionError(f'{method} produced an invalid witness {vs} (sum code {total})')
    return SolveReport(DiCycle(vs, 0), method, list(trace),
                       [Switching(v, c) for v, c in switchings], guaranteed)


def _fallback(w: ArcLabelling, min_len: int, reason: str, guaranteed: bool) -> SolveReport:
    if guaranteed:
        log.warning('constructive search stalled above its guarantee threshold '
                    '(n=%d, |A|=%d): %s', w.n, w.group.order, reason)
    if w.n > MAX_ENUMERATION_N:
        raise NoWitnessError('inconclusive',
                             f'constructive search stalled ({reason}) and n={w.n} is beyond '
                             f'the exhaustive budget')
    c = find_zero_sum_cycle_exhaustive(w, min_len)
    if c is None:
        raise NoWitnessError('zero-sum-free', 'zero-sum-free, verified exhaustively')
    return _finish(w, c.vertices, min_len, EXHAUSTIVE, [], [], guaranteed)


def _general(w: ArcLabelling, min_len: int, trace: list) -> tuple[list[int], list[tuple[int, int]]]:
    n, order = w.n, w.group.order
    out = build_triangle_chain(w, min_path_len=max(1, min_len - 1))
    if isinstance(out, Stalled):
        raise _Stall(out.diagnostic)
    sw = [(s.vertex, int(s.value)) for s in out.switchings]
    if isinstance(out, Complete):
        u, v = out.endpoints
        lab = out.labelling
        path = out.certificate.path_for_target(w.group.neg_code(lab.code(v, u)))
        return list(path.vertices), sw

    verts, b = out.vertices, out.subgroup
    assert len(verts) >= n - 4 * order, 'concentrated pool smaller than n - 4|A|'
    trace.append((len(verts), b.order))
    need = max(2, min_len)
    if b.is_trivial():
        # every arc inside the pool is 0, so any short cycle there is zero-sum
        if len(verts) < need:
            raise _Stall(f'pool of {len(verts)} vertices concentrated in {{0}} is too small')
        return list(verts[:need]), sw
    if len(verts) < 2:
        raise _Stall('concentrated pool has fewer than two vertices')
    lut = np.full(order, -1, dtype=np.int32)
    lut[list(b.codes)] = np.arange(b.order)
    sub = out.labelling.restrict(verts).regroup(b.as_group, lut)
    cyc, sub_sw = _general(sub, min_len, trace)
    return [verts[x] for x in cyc], sw + [(verts[v], b.embed(c)) for v, c in sub_sw]


def solve_general(w: ArcLabelling, min_len: int = 2) -> SolveReport:
    """Zero-sum cycle of length >= min_len via chains of triangles and subgroup recursion.

    Always attempted; success is guaranteed for n >= 8|A|.  If the
    construction stalls, falls back to exhaustive search when n is within the
    oracle budget, else raises :class:`NoWitnessError`.
    """
    guaranteed = w.n >= general_threshold(w.group.order)
    trace: list[tuple[int, int]] = []
    try:
        cyc, sw = _general(w, min_len, trace)
    except _Stall as e:
        return _fallback(w, min_len, str(e), guaranteed)
    return _finish(w, cyc, min_len, GENERAL, trace, sw, guaranteed)


def solve_prime(w: ArcLabelling) -> SolveReport:
    """Zero-sum cycle over Z_p (p odd prime) via a chain of (p-1)/2 K4's.

    The segment value sets {0, s1, s2} have three elements each, so by
    Cauchy-Davenport their iterated sumset is all of Z_p and the path with
    sum -w(x_last, x_0) closes into a zero-sum cycle.
    """
    g = w.group
    if not (isinstance(g, GroupSpec) and len(g.factors) == 1 and g.factors[0] >= 3 and is_prime(g.factors[0])):
        raise GroupError(f'solve_prime needs Z_p with p an odd prime, got {g.name}')
    p = g.factors[0]
    guaranteed = w.n >= prime_threshold(p)
    try:
        chain = build_k4_chain(w)
    except ZeroSumFound as e:
        return _finish(w, e.cycle.vertices, 2, PRIME, [], [], guaranteed)
    except InsufficientVertices as e:
        return _fallback(w, 2, str(e), guaranteed)
    lab = chain.labelling
    a = g.neg_code(lab.code(chain.target, chain.source))
    if a not in chain.reachable():
        raise AssertionError('K4 chain sumset is not all of Z_p')
    path = chain.path_for_target(a)
    sw = [(s.vertex, int(s.value)) for s in chain.switchings]
    return _finish(w, path.vertices, 2, PRIME, [], sw, guaranteed)


def solve_undirected(e: EdgeLabelling) -> SolveReport:
    """Zero-sum cycle of length >= 3 in an edge-labelled complete graph."""
    return solve_general(lift_undirected(e), min_len=3)


def solve_exhaustive(w: ArcLabelling, min_len: int = 2) -> SolveReport:
    c = find_zero_sum_cycle_exhaustive(w, min_len)
    if c is None:
        raise NoWitnessError('zero-sum-free', 'zero-sum-free, verified exhaustively')
    return _finish(w, c.vertices, min_len, EXHAUSTIVE, [], [], False)


def solve(w: ArcLabelling, method: str = 'auto', min_len: int = 2) -> SolveReport:
    """Dispatch: 'constructive', 'prime', 'exhaustive', or 'auto'.

    'auto' prefers the constructive solver whose guarantee covers the input,
    then exhaustive search within budget, then the general construction.
    """
    if method == 'constructive':
        return solve_general(w, min_len)
    if method == 'prime':
        if min_len > 2:
            raise ValueError('the prime solver does not support min_len > 2')
        return solve_prime(w)
    if method == 'exhaustive':
        return solve_exhaustive(w, min_len)
    if method != 'auto':
        raise ValueError(f'unknown method {method!r}')
    g = w.group
    if (min_len <= 2 and isinstance(g, GroupSpec) and g.is_prime_cyclic and g.factors[0] >= 3
            and w.n >= prime_threshold(g.factors[0])):
        return solve_prime(w)
    if w.n >= general_threshold(g.order) or w.n > MAX_ENUMERATION_N:
        return solve_general(w, min_len)
    return solve_exhaustive(w, min_len)


def report_to_json(w: ArcLabelling, report: SolveReport) -> dict:
    g = w.group
    return {
        'witness': witness_to_json(w, report.witness),
        'method': report.method,
        'trace': [list(t) for t in report.trace],
        'switchings': [[s.vertex, g.residues(s.code_in(g))] for s in report.switchings],
        'guaranteed': report.guaranteed,
    }
