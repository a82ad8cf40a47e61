"""Path-sum certificates: chains of triangles and of K4's.

A chain is a spine x_0 -> x_1 -> ... -> x_i whose spine arcs are labelled 0,
with one or two detours per segment.  Choosing, per segment, the spine arc or
a detour realizes every element of an iterated sumset as an x_0 -> x_i path
sum.  :func:`build_triangle_chain` runs the inductive construction on a
labelling and ends in one of three outcomes: a completeness certificate, a
vertex set whose labels are concentrated in a proper subgroup, or a stall
when an explicit length budget runs out.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .abelian import GroupError, GroupSpec, QuotientMap, Subgroup, TableGroup, is_prime
from .labelling import ArcLabelling, Switching, _switch_table, apply_switching_sequence, b_factor
from .oracle import DiCycle, DiPath, find_zero_sum_cycle_exhaustive, mask_to_codes, shift_mask, verify_path

log = logging.getLogger(__name__)

__all__ = [
    'ZeroSumFound', 'CertificateError', 'InsufficientVertices',
    'TriangleChain', 'K4Chain', 'CompositeCertificate', 'K3Extraction',
    'Complete', 'SubgroupConcentration', 'Stalled', 'ChainOutcome',
    'k3_extract', 'build_triangle_chain', 'build_k4_chain', 'chain_path_for_target',
    'sumset', 'cauchy_davenport_holds', 'iterated_sumset',
    'certificate_to_json', 'replay_certificate',
]


class ZeroSumFound(ValueError):
    """Raised when a construction trips over a zero-sum cycle.

    Not a failure for callers hunting zero-sum cycles: ``cycle`` is a valid
    witness (sums are switching-invariant, so it holds for the input too).
    """

    def __init__(self, cycle: DiCycle):
        super().__init__(f'zero-sum cycle {cycle.vertices}')
        self.cycle = cycle


class InsufficientVertices(ValueError):
    pass


class CertificateError(ValueError):
    pass


def _to_switchings(pairs: Iterable[tuple[int, int]]) -> tuple[Switching, ...]:
    return tuple(Switching(int(v), int(c)) for v, c in pairs)


class _SegmentChain:
    """Shared machinery: per segment a list of (sum, interior vertices) options."""

    labelling: ArcLabelling
    spine: tuple[int, ...]
    switchings: tuple[Switching, ...]

    def _options(self) -> list[list[tuple[int, tuple[int, ...]]]]:
        raise NotImplementedError

    @property
    def group(self) -> TableGroup:
        return self.labelling.group

    @property
    def source(self) -> int:
        return self.spine[0]

    @property
    def target(self) -> int:
        return self.spine[-1]

    @property
    def length(self) -> int:
        return len(self.spine) - 1

    def reachable_mask(self) -> int:
        mask = 1
        g = self.group
        for opts in self._options():
            acc = 0
            for s, _ in opts:
                acc |= shift_mask(g, mask, s)
            mask = acc
        return mask

    def reachable(self) -> frozenset[int]:
        """All x_0 -> x_i path sums the chain can realize (element codes)."""
        return mask_to_codes(self.reachable_mask())

    def path_for_target(self, a: int) -> DiPath:
        """Simple x_0 -> x_i path through the chain with label sum ``a``.

        Dynamic programming over segments; earlier options (the spine arc
        first) win ties, so a = 0 gives the bare spine.
        """
        g = self.group
        opts = self._options()
        # back[j][s] = (previous sum, option index) for prefix sum s after j segments
        back: list[dict[int, tuple[int, int]]] = []
        layer = {0: None}
        for seg in opts:
            nxt: dict[int, tuple[int, int]] = {}
            for prev in layer:
                for k, (s, _) in enumerate(seg):
                    x = g.add_codes(prev, s)
                    if x not in nxt:
                        nxt[x] = (prev, k)
            back.append(nxt)
            layer = nxt
        a = int(a)
        if a not in layer:
            raise CertificateError(f'target {g.residues(a)} not reachable through this chain')
        choice = []
        cur = a
        for j in range(len(opts) - 1, -1, -1):
            prev, k = back[j][cur]
            choice.append(k)
            cur = prev
        choice.reverse()
        verts = [self.spine[0]]
        for j, k in enumerate(choice):
            verts.extend(opts[j][k][1])
            verts.append(self.spine[j + 1])
        path = DiPath(tuple(verts), a)
        if verify_path(self.labelling, path) != a:
            raise CertificateError('chain labels inconsistent with its labelling')
        return path


@dataclass(frozen=True, eq=False)
class TriangleChain(_SegmentChain):
    labelling: ArcLabelling
    spine: tuple[int, ...]
    detours: tuple[int, ...]
    detour_sums: tuple[int, ...]
    switchings: tuple[Switching, ...] = ()

    def _options(self):
        return [[(0, ()), (s, (y,))] for y, s in zip(self.detours, self.detour_sums)]

    def check(self) -> None:
        """Re-derive every structural invariant from ``labelling``."""
        w = self.labelling
        verts = list(self.spine) + list(self.detours)
        if len(set(verts)) != len(verts) or len(self.detours) != self.length:
            raise CertificateError('chain vertices are not distinct')
        add = w.group._add_rows
        for j in range(self.length):
            x, y, x2 = self.spine[j], self.detours[j], self.spine[j + 1]
            if w.code(x, x2) != 0:
                raise CertificateError(f'spine arc ({x}, {x2}) is not 0')
            if add[w.code(x, y)][w.code(y, x2)] != self.detour_sums[j]:
                raise CertificateError(f'detour sum mismatch at segment {j + 1}')


@dataclass(frozen=True, eq=False)
class K4Chain(_SegmentChain):
    labelling: ArcLabelling
    spine: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    paths: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    sums: tuple[tuple[int, int], ...]
    switchings: tuple[Switching, ...] = ()

    def _options(self):
        return [[(0, ())] + [(s, tuple(p[1:-1])) for s, p in zip(ss, ps)]
                for ss, ps in zip(self.sums, self.paths)]

    def segment_values(self) -> list[frozenset[int]]:
        return [frozenset((0,) + tuple(ss)) for ss in self.sums]

    def check(self) -> None:
        w = self.labelling
        verts = list(self.spine) + [v for p in self.pairs for v in p]
        if len(set(verts)) != len(verts) or len(self.pairs) != self.length:
            raise CertificateError('chain vertices are not distinct')
        for j in range(self.length):
            x, x2 = self.spine[j], self.spine[j + 1]
            seg = {x, x2, *self.pairs[j]}
            if w.code(x, x2) != 0:
                raise CertificateError(f'spine arc ({x}, {x2}) is not 0')
            for p, s in zip(self.paths[j], self.sums[j]):
                if p[0] != x or p[-1] != x2 or not set(p) <= seg:
                    raise CertificateError(f'detour {p} leaves its segment')
                if verify_path(w, p) != s:
                    raise CertificateError(f'detour sum mismatch on {p}')
            if len({0, *self.sums[j]}) != 3:
                raise CertificateError(f'segment {j + 1} values not pairwise distinct')


@dataclass(frozen=True, eq=False)
class CompositeCertificate:
    """Completeness at (x_0, v') assembled from a chain prefix and a quotient certificate.

    The prefix chain realizes every element of a subgroup B as a path sum;
    ``inner`` is complete for the B-factor of ``labelling`` on ``pool`` (after
    its own switchings, recorded as per-vertex totals in ``inner_offsets``).
    A target a is met by taking an inner path with sum a + B, reading off the
    discrepancy b in B, and cancelling it with a prefix path of sum -b.
    """
    labelling: ArcLabelling
    prefix: TriangleChain
    pool: tuple[int, ...]
    quotient: QuotientMap
    inner: 'Certificate'
    inner_offsets: tuple[int, ...]

    @property
    def group(self) -> TableGroup:
        return self.labelling.group

    @property
    def source(self) -> int:
        return self.prefix.source

    @property
    def target(self) -> int:
        return self.pool[self.inner.target]

    def reachable_mask(self) -> int:
        return (1 << self.group.order) - 1

    def reachable(self) -> frozenset[int]:
        return frozenset(range(self.group.order))

    def path_for_target(self, a: int) -> DiPath:
        g, h = self.group, self.quotient.group
        u_loc, v_loc = self.inner.source, self.inner.target
        t = h.add_codes(self.quotient.project(a),
                        h.sub_codes(self.inner_offsets[u_loc], self.inner_offsets[v_loc]))
        inner_path = self.inner.path_for_target(t)
        tail = [self.pool[x] for x in inner_path.vertices]
        s = verify_path(self.labelling, tail)
        b = g.sub_codes(s, int(a))
        if b not in self.quotient.kernel:
            raise CertificateError('inner path does not lift to the requested coset')
        head = self.prefix.path_for_target(g.neg_code(b))
        path = DiPath(head.vertices + tuple(tail), int(a))
        if verify_path(self.labelling, path) != a:
            raise CertificateError('composite path sum mismatch')
        return path


Certificate = Union[TriangleChain, K4Chain, CompositeCertificate]


def chain_path_for_target(chain: Certificate, a) -> DiPath:
    return chain.path_for_target(chain.group.code(a))


@dataclass(frozen=True, eq=False)
class Complete:
    """``labelling`` (input after ``switchings``) is complete at certificate.source/target."""
    certificate: Certificate
    labelling: ArcLabelling
    switchings: tuple[Switching, ...]
    kind: str = field(default='complete', init=False)

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.certificate.source, self.certificate.target


@dataclass(frozen=True, eq=False)
class SubgroupConcentration:
    """Every arc inside ``vertices`` carries a label of ``subgroup`` under ``labelling``."""
    vertices: tuple[int, ...]
    subgroup: Subgroup
    labelling: ArcLabelling
    switchings: tuple[Switching, ...]
    kind: str = field(default='concentration', init=False)


@dataclass(frozen=True, eq=False)
class Stalled:
    diagnostic: str
    chain: TriangleChain | None = None
    kind: str = field(default='stalled', init=False)


ChainOutcome = Union[Complete, SubgroupConcentration, Stalled]


def _largest_contained_subgroup(group: TableGroup, mask: int) -> Subgroup | None:
    best = None
    for b in group.subgroups:
        if b.is_trivial() or b.mask & ~mask:
            continue
        if best is None or b.order > best.order:
            best = b
    return best


def build_triangle_chain(w: ArcLabelling, budget: int | None = None,
                         min_path_len: int = 1) -> ChainOutcome:
    """Grow a chain of triangles from vertex 0 until an outcome is forced.

    Each step first switches every unused vertex y by w(x_last, y), making all
    arcs from the chain end into the pool 0.  Then:

    * if the current sum set contains a non-trivial subgroup B, the pool's
      B-factor is handled recursively over A/B and the result is lifted back
      (a concentration in a preimage subgroup, or completeness assembled
      through the chain);
    * otherwise the first non-zero arc (y, x) inside the pool extends the
      chain, strictly growing the sum set; with no such arc the pool itself
      is concentrated in {0}.

    ``budget`` caps the number of segments (Stalled when hit).  With
    ``min_path_len`` = 2 every certified path has at least two arcs.
    """
    group = w.group
    full = (1 << group.order) - 1
    t = np.array(w.table)
    switches: list[tuple[int, int]] = []
    spine, detours, sums = [0], [], []
    used = {0}
    reach = 1

    def snapshot() -> ArcLabelling:
        return ArcLabelling(group, t)

    def chain(lab: ArcLabelling) -> TriangleChain:
        return TriangleChain(lab, tuple(spine), tuple(detours), tuple(sums), _to_switchings(switches))

    while True:
        complete = reach == full
        if complete and len(spine) - 1 >= min_path_len:
            lab = snapshot()
            return Complete(chain(lab), lab, _to_switchings(switches))
        if budget is not None and len(detours) >= budget:
            return Stalled(f'chain length budget {budget} reached with |A_i| = '
                           f'{bin(reach).count("1")} of {group.order}', chain(snapshot()))
        last = spine[-1]
        pool = [v for v in range(w.n) if v not in used]
        for y in pool:
            c = int(t[last, y])
            if c:
                _switch_table(t, group, y, c)
                switches.append((y, c))

        if complete:
            # sum set already full; pad with one more segment so paths get longer
            if len(pool) < 2:
                return Stalled('pool exhausted while lengthening complete chain', chain(snapshot()))
            y, x = pool[0], pool[1]
        else:
            b = _largest_contained_subgroup(group, reach)
            if b is not None:
                return _quotient_step(w, t, switches, spine, detours, sums, pool, b)
            nz = [(y, x) for y in pool for x in pool if y != x and t[y, x] != 0]
            if not nz:
                lab = snapshot()
                return SubgroupConcentration(tuple(pool), group.trivial_subgroup(), lab,
                                             _to_switchings(switches))
            y, x = nz[0]
        a = int(t[y, x])
        new_reach = reach | shift_mask(group, reach, a)
        if not complete and new_reach == reach:
            raise AssertionError('extension failed to grow the sum set')
        reach = new_reach
        detours.append(y)
        sums.append(a)  # arc (x_last, y) is 0 after switching
        spine.append(x)
        used.update((y, x))


def _quotient_step(w, t, switches, spine, detours, sums, pool, b: Subgroup) -> ChainOutcome:
    group = w.group
    lab = ArcLabelling(group, t)
    if len(pool) < 2:
        return SubgroupConcentration(tuple(pool), b, lab, _to_switchings(switches))
    qm = QuotientMap(group, b)
    factor = b_factor(lab, pool, qm)
    sub = build_triangle_chain(factor.labelling)
    if isinstance(sub, Stalled):
        return Stalled(f'quotient by subgroup of order {b.order}: {sub.diagnostic}')
    if isinstance(sub, SubgroupConcentration):
        lifted = [(pool[s.vertex], qm.representative(int(s.value))) for s in sub.switchings]
        for v, c in lifted:
            _switch_table(t, group, v, c)
        lab = ArcLabelling(group, t)
        big = qm.preimage(sub.subgroup)
        verts = tuple(pool[x] for x in sub.vertices)
        if not lab.labels_in(big, verts):
            raise AssertionError('lifted switchings do not concentrate labels in the preimage')
        return SubgroupConcentration(verts, big, lab, _to_switchings(list(switches) + lifted))
    h = qm.group
    offsets = [0] * len(pool)
    for s in sub.switchings:
        offsets[s.vertex] = h.add_codes(offsets[s.vertex], int(s.value))
    prefix = TriangleChain(lab, tuple(spine), tuple(detours), tuple(sums), _to_switchings(switches))
    cert = CompositeCertificate(lab, prefix, tuple(pool), qm, sub.certificate, tuple(offsets))
    return Complete(cert, lab, _to_switchings(switches))


@dataclass(frozen=True)
class K3Extraction:
    vertex: int
    p1: DiPath
    p2: DiPath
    case: int


def _require_odd_prime(group: TableGroup) -> int:
    if not (isinstance(group, GroupSpec) and len(group.factors) == 1
            and group.factors[0] >= 3 and is_prime(group.factors[0])):
        raise GroupError(f'{group.name} is not Z_p for an odd prime p')
    return group.factors[0]


def k3_extract(w: ArcLabelling) -> K3Extraction:
    """Two non-trivial paths into a common vertex with 0, s1, s2 pairwise distinct.

    ``w`` is a zero-sum-free Z_p labelling of the complete digraph on 3
    vertices (p an odd prime).  Follows the four-case ladder: order the
    vertices so that all forward arcs are non-zero, then branch on
    w(v1,v2) + w(v2,v3), w(v1,v3) and w(v3,v2).
    """
    _require_odd_prime(w.group)
    if w.n != 3:
        raise ValueError('k3_extract needs exactly 3 vertices')
    bad = find_zero_sum_cycle_exhaustive(w)
    if bad is not None:
        raise ZeroSumFound(bad)
    g = w.group
    for order in itertools.permutations(range(3)):
        if all(w.code(order[i], order[j]) for i in range(3) for j in range(i + 1, 3)):
            break
    else:
        raise AssertionError('zero arcs contain a cycle in a zero-sum-free labelling')
    v1, v2, v3 = order
    a = w.code(v2, v3)
    w12 = w.code(v1, v2)
    if g.add_codes(w12, a) not in (0, a):
        p1, p2, v, case = (v2, v3), (v1, v2, v3), v3, 1
    elif w.code(v1, v3) != a:
        p1, p2, v, case = (v1, v3), (v2, v3), v3, 2
    elif w.code(v3, v2) != 0:
        p1, p2, v, case = (v1, v2), (v3, v2), v2, 3
    else:
        p1, p2, v, case = (v1, v3, v2), (v1, v2), v2, 4
    out = K3Extraction(v, DiPath(p1, verify_path(w, p1)), DiPath(p2, verify_path(w, p2)), case)
    if len({0, out.p1.sum, out.p2.sum}) != 3:
        raise AssertionError('k3 ladder produced coinciding sums')
    return out


def build_k4_chain(w: ArcLabelling, segments: int | None = None) -> K4Chain:
    """Chain of K4's from vertex 0 over Z_p, (p-1)/2 segments by default.

    Each segment switches the pool so arcs from the chain end are 0, takes
    the first three unused vertices and applies :func:`k3_extract` to them.
    A zero-sum cycle inside a triple raises :class:`ZeroSumFound` with the
    cycle in this labelling's vertex numbering.
    """
    p = _require_odd_prime(w.group)
    k = (p - 1) // 2 if segments is None else segments
    if w.n < 3 * k + 1:
        raise InsufficientVertices(f'{k} segments need {3 * k + 1} vertices, have {w.n}')
    group = w.group
    t = np.array(w.table)
    switches: list[tuple[int, int]] = []
    spine, pairs, paths, sums = [0], [], [], []
    used = {0}
    for _ in range(k):
        last = spine[-1]
        pool = [v for v in range(w.n) if v not in used]
        for y in pool:
            c = int(t[last, y])
            if c:
                _switch_table(t, group, y, c)
                switches.append((y, c))
        triple = pool[:3]
        sub = ArcLabelling(group, t[np.ix_(triple, triple)])
        try:
            ext = k3_extract(sub)
        except ZeroSumFound as e:
            raise ZeroSumFound(DiCycle(tuple(triple[x] for x in e.cycle.vertices), 0)) from None
        x = triple[ext.vertex]
        y, z = [v for v in triple if v != x]
        segment_paths = tuple((last,) + tuple(triple[q] for q in pth.vertices) for pth in (ext.p1, ext.p2))
        # arcs (last, u) into the pool are 0, so extended sums equal the K3 sums
        spine.append(x)
        pairs.append((y, z))
        paths.append(segment_paths)
        sums.append((ext.p1.sum, ext.p2.sum))
        used.update(triple)
    return K4Chain(ArcLabelling(group, t), tuple(spine), tuple(pairs), tuple(paths),
                   tuple(sums), _to_switchings(switches))


def sumset(S: Iterable, T: Iterable, group: TableGroup | None = None) -> set:
    """{s + t}.  GroupElems add directly; integer codes need ``group``."""
    S, T = list(S), list(T)
    if group is None:
        return {s + t for s in S for t in T}
    return {group.add_codes(int(s), int(t)) for s in S for t in T}


def iterated_sumset(sets: Sequence[Iterable], group: TableGroup | None = None) -> set:
    acc = None
    for s in sets:
        acc = set(s) if acc is None else sumset(acc, s, group)
    return acc if acc is not None else set()


def cauchy_davenport_holds(S: Iterable, T: Iterable, p: int) -> bool:
    """|S + T| >= min(p, |S| + |T| - 1) for residues mod a prime p."""
    S = {int(getattr(s, 'residues', (s,))[0]) % p for s in S}
    T = {int(getattr(t, 'residues', (t,))[0]) % p for t in T}
    if not S or not T:
        raise ValueError('Cauchy-Davenport needs non-empty sets')
    st = {(s + t) % p for s in S for t in T}
    return len(st) >= min(p, len(S) + len(T) - 1)


# certificate file format

def _elem(group: TableGroup, c: int) -> list[int]:
    return group.residues(int(c))


def certificate_to_json(cert: Certificate) -> dict:
    g = cert.group
    if isinstance(cert, TriangleChain):
        doc = {'kind': 'triangle', 'spine': list(cert.spine), 'detours': list(cert.detours),
               'sums': [_elem(g, s) for s in cert.detour_sums]}
        sw = cert.switchings
    elif isinstance(cert, K4Chain):
        doc = {'kind': 'k4', 'spine': list(cert.spine), 'detours': [list(p) for p in cert.pairs],
               'paths': [[list(p) for p in ps] for ps in cert.paths],
               'sums': [[_elem(g, s) for s in ss] for ss in cert.sums]}
        sw = cert.switchings
    else:
        # explicit per-target paths; replayable without the quotient machinery
        doc = {'kind': 'composite', 'source': cert.source, 'target': cert.target,
               'kernel': [_elem(g, c) for c in cert.quotient.kernel.codes],
               'targets': [[_elem(g, a), list(cert.path_for_target(a).vertices)]
                           for a in range(g.order)]}
        sw = cert.prefix.switchings
    doc['switchings'] = [[s.vertex, _elem(g, s.code_in(g))] for s in sw]
    return doc


def replay_certificate(w: ArcLabelling, doc: dict) -> frozenset[int]:
    """Check a certificate document against ``w``; return the certified sum set.

    Applies the recorded switchings to ``w`` and re-verifies every claim from
    labels alone.
    """
    g = w.group
    try:
        sw = [Switching(int(v), g.code_from_residues(r)) for v, r in doc['switchings']]
        lab = apply_switching_sequence(w, sw)
        kind = doc['kind']
        if kind == 'triangle':
            chain = TriangleChain(lab, tuple(doc['spine']), tuple(doc['detours']),
                                  tuple(g.code_from_residues(r) for r in doc['sums']))
            chain.check()
            return chain.reachable()
        if kind == 'k4':
            chain = K4Chain(lab, tuple(doc['spine']), tuple(tuple(p) for p in doc['detours']),
                            tuple(tuple(tuple(p) for p in ps) for ps in doc['paths']),
                            tuple(tuple(g.code_from_residues(r) for r in ss) for ss in doc['sums']))
            chain.check()
            return chain.reachable()
        if kind == 'composite':
            got = set()
            for res, verts in doc['targets']:
                a = g.code_from_residues(res)
                if verts[0] != doc['source'] or verts[-1] != doc['target']:
                    raise CertificateError('path endpoints differ from the certificate')
                if verify_path(lab, DiPath(tuple(verts), a)) != a:
                    raise CertificateError(f'path {verts} does not sum to {res}')
                got.add(a)
            return frozenset(got)
    except (KeyError, TypeError, GroupError) as e:
        raise CertificateError(f'malformed certificate: {e}') from None
    except ValueError as e:
        if isinstance(e, CertificateError):
            raise
        raise CertificateError(str(e)) from None
    raise CertificateError(f'unknown certificate kind {doc.get("kind")!r}')
