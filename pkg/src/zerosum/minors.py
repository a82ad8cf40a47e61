"""Cycles of length divisible by q from explicit minor models.

A model consists of m pairs of disjoint vertex sets (X_i^+, X_i^-) in a host
graph G.  Exactly one edge x_i^+ x_i^- joins the two halves of each pair, and
for i != j the induced subgraph G[X_i^+ | X_j^-] is a tree.  Giving arc (i, j)
of K_m the label 1 + (length of the tree path x_i^+ ~> x_j^-) mod q turns a
zero-sum directed cycle of K_m into a host cycle whose length is divisible by
q: walk each tree path, then cross the contact edge of the next pair.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .abelian import GroupSpec
from .labelling import ArcLabelling, FormatError
from .solver import NoWitnessError, SolveReport, solve

__all__ = [
    'HostGraph', 'MinorModel', 'MinorModelError', 'ExtractionError', 'HostCycle',
    'validate_minor_model', 'model_warnings', 'contact_edges', 'tree_path', 'auxiliary_labelling',
    'extract_divisible_cycle', 'model_to_json', 'model_from_json', 'load_model', 'dump_model',
    'cycle_to_json', 'random_minor_model',
]


class MinorModelError(ValueError):
    def __init__(self, violations: Sequence[str]):
        super().__init__('invalid minor model: ' + '; '.join(violations))
        self.violations = list(violations)


class ExtractionError(RuntimeError):
    pass


@dataclass(frozen=True)
class HostGraph:
    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError('vertex count must be non-negative')
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f'self-loop at {u}')
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f'edge {e} out of range')
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'edges', frozenset(norm))
        adj = [set() for _ in range(self.n)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, '_adj', tuple(frozenset(a) for a in adj))

    @classmethod
    def complete(cls, n: int) -> 'HostGraph':
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))

    def neighbours(self, v: int) -> frozenset:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def induced_edge_count(self, verts: set) -> int:
        return sum(1 for u in verts for v in self._adj[u] if v in verts) // 2


@dataclass(frozen=True)
class MinorModel:
    """Pairs (X_i^+, X_i^-), indexed from 0."""
    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, 'pairs',
                           tuple((frozenset(p), frozenset(q)) for p, q in self.pairs))

    @property
    def m(self) -> int:
        return len(self.pairs)

    def plus(self, i: int) -> frozenset:
        return self.pairs[i][0]

    def minus(self, i: int) -> frozenset:
        return self.pairs[i][1]

    def supernodes(self) -> list[tuple[str, frozenset]]:
        out = []
        for i, (p, q) in enumerate(self.pairs):
            out.append((f'X{i}+', p))
            out.append((f'X{i}-', q))
        return out


def _connected(g: HostGraph, verts: set) -> bool:
    if not verts:
        return False
    start = next(iter(verts))
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for v in g.neighbours(u):
            if v in verts and v not in seen:
                seen.add(v)
                todo.append(v)
    return len(seen) == len(verts)


def validate_minor_model(g: HostGraph, model: MinorModel) -> list[str]:
    """Every violated model condition, as human-readable strings (empty when valid)."""
    bad = []
    nodes = model.supernodes()
    owner = {}
    for name, s in nodes:
        if not s:
            bad.append(f'{name} is empty')
        for v in sorted(s):
            if not (isinstance(v, (int, np.integer)) and 0 <= v < g.n):
                bad.append(f'{name} contains {v!r}, not a host vertex')
            elif v in owner:
                bad.append(f'vertex {v} lies in both {owner[v]} and {name}')
            else:
                owner[v] = name
    if bad:
        return bad
    for i in range(model.m):
        p, q = model.pairs[i]
        k = sum(1 for u in p for v in g.neighbours(u) if v in q)
        if k != 1:
            bad.append(f'pair {i} has {k} edges between X{i}+ and X{i}-, need exactly 1')
    for i in range(model.m):
        for j in range(model.m):
            if i == j:
                continue
            u = set(model.plus(i)) | set(model.minus(j))
            e = g.induced_edge_count(u)
            if e != len(u) - 1 or not _connected(g, u):
                bad.append(f'X{i}+ with X{j}- does not induce a tree '
                           f'({len(u)} vertices, {e} edges)')
    return bad


def model_warnings(g: HostGraph, model: MinorModel) -> list[str]:
    """Supernodes that do not induce a connected subgraph on their own.

    The tree conditions on unions do not force this and the extraction does
    not need it, so it is reported separately from violations.
    """
    return [f'{name} does not induce a connected subgraph'
            for name, s in model.supernodes() if s and not _connected(g, set(s))]


def _require_valid(g: HostGraph, model: MinorModel) -> None:
    bad = validate_minor_model(g, model)
    if bad:
        raise MinorModelError(bad)


def contact_edges(g: HostGraph, model: MinorModel) -> list[tuple[int, int]]:
    """(x_i^+, x_i^-) for each pair of a valid model."""
    out = []
    for p, q in model.pairs:
        out.append(next((u, v) for u in sorted(p) for v in sorted(g.neighbours(u)) if v in q))
    return out


def tree_path(g: HostGraph, verts: Iterable[int], s: int, t: int) -> list[int]:
    """Vertices of the s ~> t path inside G[verts] found by breadth-first search."""
    verts = set(verts)
    prev = {s: None}
    todo = deque([s])
    while todo:
        u = todo.popleft()
        if u == t:
            break
        for v in sorted(g.neighbours(u)):
            if v in verts and v not in prev:
                prev[v] = u
                todo.append(v)
    if t not in prev:
        raise ValueError(f'{t} is unreachable from {s} in the induced subgraph')
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _all_tree_paths(g: HostGraph, model: MinorModel) -> tuple[list, dict]:
    xs = contact_edges(g, model)
    paths = {}
    for i in range(model.m):
        for j in range(model.m):
            if i != j:
                paths[i, j] = tree_path(g, model.plus(i) | model.minus(j), xs[i][0], xs[j][1])
    return xs, paths


def auxiliary_labelling(g: HostGraph, model: MinorModel, q: int) -> ArcLabelling:
    """Z_q labelling of K_m: w(i, j) = 1 + tree-path length from x_i^+ to x_j^-."""
    if q < 2:
        raise ValueError('q must be >= 2')
    _require_valid(g, model)
    if model.m < 2:
        raise MinorModelError([f'need at least 2 pairs, got {model.m}'])
    _, paths = _all_tree_paths(g, model)
    return _aux_from_paths(model.m, q, paths)


def _aux_from_paths(m: int, q: int, paths: dict) -> ArcLabelling:
    t = np.full((m, m), -1, dtype=np.int32)
    for (i, j), p in paths.items():
        t[i, j] = len(p) % q        # path has len(p) - 1 edges, plus one
    return ArcLabelling(GroupSpec((q,)), t)


@dataclass
class HostCycle:
    cycle: list[int]
    q: int
    aux_cycle: tuple[int, ...] = ()
    report: SolveReport | None = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.cycle)


def _check_host_cycle(g: HostGraph, cyc: Sequence[int]) -> None:
    if len(cyc) < 3:
        raise AssertionError(f'host cycle {cyc} has fewer than 3 vertices')
    if len(set(cyc)) != len(cyc):
        raise AssertionError(f'host cycle {cyc} repeats a vertex')
    for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
        if not g.has_edge(a, b):
            raise AssertionError(f'host cycle {cyc} uses non-edge ({a}, {b})')


def extract_divisible_cycle(g: HostGraph, model: MinorModel, q: int, method: str = 'auto') -> HostCycle:
    """A simple host cycle of length divisible by q.

    Finds a zero-sum cycle of the auxiliary labelling (constructive solvers
    first, exhaustive search for small m) and expands each auxiliary arc
    (i, j) into the tree path x_i^+ ~> x_j^- followed by the contact edge
    x_j^- x_j^+.
    """
    if q < 2:
        raise ValueError('q must be >= 2')
    _require_valid(g, model)
    if model.m < 2:
        raise MinorModelError([f'need at least 2 pairs, got {model.m}'])
    _, paths = _all_tree_paths(g, model)
    w = _aux_from_paths(model.m, q, paths)
    try:
        rep = solve(w, method)
    except NoWitnessError as e:
        raise ExtractionError(f'no zero-sum cycle in the auxiliary labelling on K_{model.m}: {e}') from e
    aux = rep.witness.vertices
    cyc = []
    for a, b in zip(aux, aux[1:] + aux[:1]):
        cyc.extend(paths[a, b])
    _check_host_cycle(g, cyc)
    if len(cyc) % q:
        raise AssertionError(f'extracted cycle has length {len(cyc)}, not divisible by {q}')
    return HostCycle(cyc, q, tuple(aux), rep)


def cycle_to_json(c: HostCycle) -> dict:
    return {'cycle': [int(v) for v in c.cycle], 'length': c.length, 'q': c.q}


def model_to_json(g: HostGraph, model: MinorModel) -> dict:
    return {
        'host': {'n': g.n, 'edges': [list(e) for e in sorted(g.edges)]},
        'pairs': [{'plus': sorted(int(v) for v in p), 'minus': sorted(int(v) for v in q)}
                  for p, q in model.pairs],
    }


def _int_list(x, what: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise FormatError(f'{what} must be an array of integers')
    return x


def model_from_json(doc: dict) -> tuple[HostGraph, MinorModel]:
    if not isinstance(doc, dict):
        raise FormatError('model document must be an object')
    try:
        host, pairs = doc['host'], doc['pairs']
        n, edges = host['n'], host['edges']
    except (KeyError, TypeError) as e:
        raise FormatError(f'missing field {e}') from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError('"host.n" must be a non-negative integer')
    if not isinstance(edges, list):
        raise FormatError('"host.edges" must be an array')
    seen = set()
    for e in edges:
        e = _int_list(e, 'edge')
        if len(e) != 2:
            raise FormatError(f'edge {e} must have two endpoints')
        key = (min(e), max(e))
        if key in seen:
            raise FormatError(f'duplicate edge {e}')
        seen.add(key)
    try:
        g = HostGraph(n, frozenset(tuple(e) for e in edges))
    except ValueError as e:
        raise FormatError(str(e)) from None
    if not isinstance(pairs, list):
        raise FormatError('"pairs" must be an array')
    out = []
    for p in pairs:
        if not isinstance(p, dict) or 'plus' not in p or 'minus' not in p:
            raise FormatError('each pair needs "plus" and "minus"')
        plus, minus = _int_list(p['plus'], 'plus'), _int_list(p['minus'], 'minus')
        if len(set(plus)) != len(plus) or len(set(minus)) != len(minus):
            raise FormatError('repeated vertex inside a supernode')
        out.append((plus, minus))
    return g, MinorModel(tuple(out))


def load_model(path) -> tuple[HostGraph, MinorModel]:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f'invalid JSON: {e}') from None
    return model_from_json(doc)


def dump_model(g: HostGraph, model: MinorModel, path) -> None:
    with open(path, 'w') as f:
        json.dump(model_to_json(g, model), f)
        f.write('\n')


def _random_tree_edges(rng, verts: list[int]) -> list[tuple[int, int]]:
    # attach each vertex to a uniformly chosen earlier one
    return [(verts[int(rng.integers(k))], verts[k]) for k in range(1, len(verts))]


def random_minor_model(m: int, seed: int, variant: str = 'tree', max_size: int = 3,
                       noise: float = 0.3, extra_vertices: int = 0) -> tuple[HostGraph, MinorModel]:
    """A random valid model with m pairs.

    'singleton' uses one vertex per supernode; 'tree' draws supernodes of
    1..max_size vertices, each inducing a random tree.  Every required
    cross edge (one per ordered pair (i, j), plus each contact edge) joins
    random endpoints, so tree-path lengths vary.  Edges between two plus sets
    or two minus sets, and edges to extra unused vertices, are sprinkled in
    with probability ``noise``; none of them affect validity.
    """
    if m < 1:
        raise ValueError('m must be >= 1')
    if variant not in ('singleton', 'tree'):
        raise ValueError(f'unknown variant {variant!r}')
    rng = np.random.default_rng(seed)
    sizes = [1 if variant == 'singleton' else int(rng.integers(1, max_size + 1)) for _ in range(2 * m)]
    total = sum(sizes) + extra_vertices
    perm = [int(x) for x in rng.permutation(total)]
    sets, pos = [], 0
    for s in sizes:
        sets.append(perm[pos:pos + s])
        pos += s
    extras = perm[pos:]
    plus, minus = sets[0::2], sets[1::2]
    edges = set()
    for s in sets:
        edges.update(_random_tree_edges(rng, s))

    def pick(s):
        return s[int(rng.integers(len(s)))]

    for i in range(m):
        for j in range(m):
            # i == j gives the contact edge
            edges.add((pick(plus[i]), pick(minus[j])))
    for side in (plus, minus):
        for a in range(m):
            for b in range(a + 1, m):
                for u in side[a]:
                    for v in side[b]:
                        if rng.random() < noise:
                            edges.add((u, v))
    for x in extras:
        for v in range(total):
            if v != x and rng.random() < noise:
                edges.add((x, v))
    g = HostGraph(total, frozenset(edges))
    return g, MinorModel(tuple(zip(plus, minus)))
