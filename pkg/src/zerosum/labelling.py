"""Arc labellings of the complete digraph and the switching operation."""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .abelian import GroupElem, GroupError, GroupSpec, QuotientMap, Subgroup, TableGroup, parse_group_spec

__all__ = [
    'FormatError', 'ArcLabelling', 'EdgeLabelling', 'Switching', 'BFactor',
    'apply_switching', 'apply_switching_sequence', 'canonicalize',
    'switching_equivalent', 'b_factor', 'lower_bound_labelling',
    'random_labelling', 'random_edge_labelling', 'lift_undirected',
    'labelling_to_json', 'labelling_from_json', 'load_labelling', 'dump_labelling',
]

NO_ARC = -1


class FormatError(ValueError):
    """Malformed labelling file or object."""


@dataclass(frozen=True, eq=False)
class ArcLabelling:
    """Total map from ordered pairs (u, v), u != v, of {0..n-1} to element codes.

    ``table[u, v]`` holds the code of w(u, v); the diagonal holds -1.
    """
    group: TableGroup
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError('label table must be square')
        n = t.shape[0]
        if n < 2:
            raise ValueError('a labelling needs at least 2 vertices')
        off = ~np.eye(n, dtype=bool)
        if (t[off] < 0).any() or (t[off] >= self.group.order).any():
            raise ValueError('label code out of range')
        t[np.eye(n, dtype=bool)] = NO_ARC
        t.flags.writeable = False
        object.__setattr__(self, 'table', t)

    @classmethod
    def from_function(cls, group: TableGroup, n: int, f) -> 'ArcLabelling':
        """Build from ``f(u, v)`` returning a code or a GroupElem."""
        t = np.full((n, n), NO_ARC, dtype=np.int32)
        for u in range(n):
            for v in range(n):
                if u != v:
                    t[u, v] = group.code(f(u, v))
        return cls(group, t)

    @classmethod
    def constant(cls, group: TableGroup, n: int, value=0) -> 'ArcLabelling':
        c = group.code(value)
        return cls(group, np.full((n, n), c, dtype=np.int32))

    @property
    def n(self) -> int:
        return self.table.shape[0]

    @property
    def spec(self) -> TableGroup:
        return self.group

    def code(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError('no self-loops in the complete digraph')
        return int(self.table[u, v])

    def label(self, u: int, v: int):
        return self.group.label(self.code(u, v))

    def __getitem__(self, arc: tuple[int, int]) -> int:
        return self.code(*arc)

    @functools.cached_property
    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    def arcs(self) -> Iterable[tuple[int, int]]:
        n = self.n
        return ((u, v) for u in range(n) for v in range(n) if u != v)

    def restrict(self, vertices: Sequence[int]) -> 'ArcLabelling':
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError('repeated vertex in restriction')
        return ArcLabelling(self.group, self.table[np.ix_(vs, vs)])

    def regroup(self, group: TableGroup, codes: Sequence[int]) -> 'ArcLabelling':
        """Re-express labels in another group through the code map ``codes``."""
        lut = np.asarray(codes, dtype=np.int32)
        t = self.table.copy()
        off = ~np.eye(self.n, dtype=bool)
        t[off] = lut[t[off]]
        return ArcLabelling(group, t)

    def labels_in(self, sub: Subgroup, vertices: Sequence[int] | None = None) -> bool:
        vs = list(range(self.n)) if vertices is None else list(vertices)
        s = sub._set
        return all(self.rows[x][y] in s for x in vs for y in vs if x != y)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ArcLabelling) and other.group == self.group
                and np.array_equal(other.table, self.table))

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f'ArcLabelling({self.group.name}, n={self.n})'


@dataclass(frozen=True)
class Switching:
    """S_{c,v}: add c to arcs leaving v, subtract c from arcs entering v.

    ``value`` is an element code or a GroupElem.
    """
    vertex: int
    value: object

    def code_in(self, group: TableGroup) -> int:
        return group.code(self.value)


def _switch_table(t: np.ndarray, group: TableGroup, v: int, c: int) -> None:
    if c == 0:
        return
    n = t.shape[0]
    add = group.add_table
    others = np.arange(n) != v
    t[v, others] = add[t[v, others], c]
    t[others, v] = add[t[others, v], group.neg_table[c]]


def apply_switching(w: ArcLabelling, s: Switching) -> ArcLabelling:
    if not 0 <= s.vertex < w.n:
        raise ValueError(f'switching vertex {s.vertex} out of range for n={w.n}')
    t = w.table.copy()
    _switch_table(t, w.group, s.vertex, s.code_in(w.group))
    return ArcLabelling(w.group, t)


def apply_switching_sequence(w: ArcLabelling, switchings: Iterable[Switching]) -> ArcLabelling:
    t = w.table.copy()
    for s in switchings:
        if not 0 <= s.vertex < w.n:
            raise ValueError(f'switching vertex {s.vertex} out of range for n={w.n}')
        _switch_table(t, w.group, s.vertex, s.code_in(w.group))
    return ArcLabelling(w.group, t)


def canonicalize(w: ArcLabelling) -> tuple[ArcLabelling, list[Switching]]:
    """Switching-equivalent labelling with w'(0, v) = 0 for every v != 0.

    Switches by w(0, v) at each v != 0 in ascending order; the returned list
    records those switchings (in codes).
    """
    seq = [Switching(v, w.code(0, v)) for v in range(1, w.n)]
    return apply_switching_sequence(w, seq), seq


def switching_equivalent(w1: ArcLabelling, w2: ArcLabelling) -> bool:
    if w1.n != w2.n or w1.group != w2.group:
        return False
    return canonicalize(w1)[0] == canonicalize(w2)[0]


class BFactor(NamedTuple):
    labelling: ArcLabelling
    vertices: tuple[int, ...]
    quotient: QuotientMap


def b_factor(w: ArcLabelling, vertices: Sequence[int], b: Subgroup | QuotientMap) -> BFactor:
    """Project labels inside ``vertices`` through A -> A/B.

    Vertices are re-indexed 0..|V|-1 in the given order; ``vertices`` of the
    result maps local index -> original vertex.
    """
    vs = tuple(vertices)
    if len(vs) < 2:
        raise ValueError('b_factor needs at least two vertices')
    qm = b if isinstance(b, QuotientMap) else QuotientMap(w.group, b)
    return BFactor(w.restrict(vs).regroup(qm.group, qm.projection), vs, qm)


def lower_bound_labelling(q: int) -> ArcLabelling:
    """Z_q labelling of K_q: 1 on arcs (i, j) with i < j, 0 on the rest."""
    if q < 2:
        raise ValueError('q must be >= 2')
    g = GroupSpec((q,))
    return ArcLabelling(g, np.triu(np.ones((q, q), dtype=np.int32), 1))


def random_labelling(spec: TableGroup, n: int, seed: int) -> ArcLabelling:
    if n < 2:
        raise ValueError('n must be >= 2')
    rng = np.random.default_rng(seed)
    return ArcLabelling(spec, rng.integers(0, spec.order, size=(n, n)))


@dataclass(frozen=True, eq=False)
class EdgeLabelling:
    """Labels on unordered pairs {u, v}; stored as a symmetric table."""
    group: TableGroup
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int32)
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n < 2:
            raise ValueError('edge table must be square with n >= 2')
        iu = np.triu_indices(n, 1)
        t.T[iu] = t[iu]
        if (t[iu] < 0).any() or (t[iu] >= self.group.order).any():
            raise ValueError('label code out of range')
        np.fill_diagonal(t, NO_ARC)
        t.flags.writeable = False
        object.__setattr__(self, 'table', t)

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def code(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError('no loops')
        return int(self.table[u, v])

    def __eq__(self, other) -> bool:
        return (isinstance(other, EdgeLabelling) and other.group == self.group
                and np.array_equal(other.table, self.table))


def random_edge_labelling(spec: TableGroup, n: int, seed: int) -> EdgeLabelling:
    rng = np.random.default_rng(seed)
    return EdgeLabelling(spec, np.triu(rng.integers(0, spec.order, size=(n, n)), 1))


def lift_undirected(e: EdgeLabelling) -> ArcLabelling:
    return ArcLabelling(e.group, e.table)


# file format

def _elem_json(group: TableGroup, code: int) -> list[int]:
    return group.residues(code)


def labelling_to_json(w: ArcLabelling | EdgeLabelling) -> dict:
    if not isinstance(w.group, GroupSpec):
        raise FormatError('only labellings over a GroupSpec can be serialized')
    doc = {'group': w.group.name, 'n': w.n}
    if isinstance(w, EdgeLabelling):
        doc['edges'] = [[u, v, _elem_json(w.group, w.code(u, v))]
                        for u in range(w.n) for v in range(u + 1, w.n)]
    else:
        doc['arcs'] = [[u, v, _elem_json(w.group, w.code(u, v))] for u, v in w.arcs()]
    return doc


def labelling_from_json(doc: dict) -> ArcLabelling | EdgeLabelling:
    """Parse the JSON labelling format, rejecting anything not exactly total."""
    if not isinstance(doc, dict):
        raise FormatError('labelling document must be an object')
    try:
        group = parse_group_spec(doc['group'])
        n = doc['n']
    except KeyError as e:
        raise FormatError(f'missing field {e}') from None
    except GroupError as e:
        raise FormatError(str(e)) from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise FormatError('"n" must be an integer >= 2')
    if ('arcs' in doc) == ('edges' in doc):
        raise FormatError('exactly one of "arcs" or "edges" is required')
    undirected = 'edges' in doc
    entries = doc['edges' if undirected else 'arcs']
    if not isinstance(entries, list):
        raise FormatError('arc list must be an array')
    t = np.full((n, n), NO_ARC, dtype=np.int32)
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise FormatError(f'bad entry {entry!r}; expected [u, v, residues]')
        u, v, res = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
            raise FormatError(f'bad vertex in {entry!r}')
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f'vertex out of range in {entry!r}')
        if u == v:
            raise FormatError(f'self-loop {entry!r}')
        if undirected and u > v:
            raise FormatError(f'edge {entry!r} must have u < v')
        if not isinstance(res, list):
            raise FormatError(f'element must be a residue array in {entry!r}')
        try:
            c = group.code_from_residues(res)
        except GroupError as e:
            raise FormatError(f'{e} in {entry!r}') from None
        if t[u, v] != NO_ARC:
            raise FormatError(f'duplicate entry for ({u}, {v})')
        t[u, v] = c
    expected = n * (n - 1) // 2 if undirected else n * (n - 1)
    if len(entries) != expected:
        raise FormatError(f'expected {expected} entries, found {len(entries)}')
    if undirected:
        return EdgeLabelling(group, t)
    return ArcLabelling(group, t)


def load_labelling(path) -> ArcLabelling | EdgeLabelling:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f'invalid JSON: {e}') from None
    return labelling_from_json(doc)


def dump_labelling(w, path) -> None:
    with open(path, 'w') as f:
        json.dump(labelling_to_json(w), f)
        f.write('\n')
