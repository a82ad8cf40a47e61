"""Finite Abelian groups as products of cyclic factors.

Two layers live here.  :class:`GroupSpec` and :class:`GroupElem` are the
user-facing objects (``Z2xZ4`` and residue vectors).  Every group, including
subgroups and quotients re-expressed as groups in their own right, also has a
dense integer *code* for each element and an addition table over those codes;
the combinatorial modules work on codes only.  Code ``0`` is always the
identity.
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    'GroupError', 'TableGroup', 'GroupSpec', 'GroupElem', 'FiniteGroup',
    'Subgroup', 'QuotientMap', 'parse_group_spec', 'add', 'neg', 'zero',
    'enumerate_subgroups', 'cyclic_subgroup', 'generated_subgroup',
    'quotient', 'smallest_prime_divisor', 'is_prime',
]

SUBGROUP_ENUMERATION_BOUND = 512


class GroupError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


class TableGroup:
    """Shared code-level arithmetic.  Subclasses provide ``_build_table``."""

    name: str

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        t = self._build_table()
        t.flags.writeable = False
        return t

    @functools.cached_property
    def neg_table(self) -> np.ndarray:
        t = np.argmin(self.add_table, axis=1)
        # argmin finds the column holding code 0, i.e. the inverse
        t.flags.writeable = False
        return t

    @functools.cached_property
    def _add_rows(self) -> list[list[int]]:
        return self.add_table.tolist()

    @property
    def order(self) -> int:
        raise NotImplementedError

    def _build_table(self) -> np.ndarray:
        raise NotImplementedError

    def add_codes(self, a: int, b: int) -> int:
        return self._add_rows[a][b]

    def neg_code(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub_codes(self, a: int, b: int) -> int:
        return self._add_rows[a][int(self.neg_table[b])]

    def multiple(self, k: int, a: int) -> int:
        out = 0
        for _ in range(k % self.element_order(a)):
            out = self._add_rows[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self._add_rows[x][a]
            k += 1
        return k

    def label(self, code: int):
        """Human-facing value of an element code."""
        raise NotImplementedError

    def residues(self, code: int) -> list[int]:
        """Residue vector used in every file format."""
        raise NotImplementedError

    def code_from_residues(self, residues: Sequence[int]) -> int:
        raise NotImplementedError

    def code(self, x) -> int:
        if isinstance(x, GroupElem):
            return self.code_from_residues(x.residues)
        if isinstance(x, (int, np.integer)):
            x = int(x)
            if not 0 <= x < self.order:
                raise GroupError(f'element code {x} out of range for {self.name}')
            return x
        return self.code_from_residues(x)

    @functools.cached_property
    def subgroups(self) -> tuple['Subgroup', ...]:
        return tuple(enumerate_subgroups(self))

    def trivial_subgroup(self) -> 'Subgroup':
        return Subgroup(self, (0,))

    def whole(self) -> 'Subgroup':
        return Subgroup(self, tuple(range(self.order)))

    def __len__(self) -> int:
        return self.order


@dataclass(frozen=True)
class GroupSpec(TableGroup):
    """Direct product Z_{q_1} x ... x Z_{q_k}; factor order is significant.

    Element codes use mixed radix with the first factor most significant, so
    code order coincides with lexicographic order of residue vectors.
    """
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'factors', tuple(int(q) for q in self.factors))
        if not self.factors:
            raise GroupError('empty group spec')
        for q in self.factors:
            if q < 2:
                raise GroupError(f'factor Z{q} is trivial; every factor must be >= 2')

    @classmethod
    def parse(cls, text: str) -> 'GroupSpec':
        return parse_group_spec(text)

    @property
    def name(self) -> str:
        return 'x'.join(f'Z{q}' for q in self.factors)

    def __str__(self) -> str:
        return self.name

    @functools.cached_property
    def _order(self) -> int:
        return math.prod(self.factors)

    @property
    def order(self) -> int:
        return self._order

    @functools.cached_property
    def _radix(self) -> tuple[int, ...]:
        r, out = 1, []
        for q in reversed(self.factors):
            out.append(r)
            r *= q
        return tuple(reversed(out))

    @functools.cached_property
    def _residue_rows(self) -> np.ndarray:
        codes = np.arange(self.order)
        return np.stack([(codes // r) % q for r, q in zip(self._radix, self.factors)], axis=1)

    def _build_table(self) -> np.ndarray:
        res = self._residue_rows
        s = (res[:, None, :] + res[None, :, :]) % np.array(self.factors)
        return (s * np.array(self._radix)).sum(axis=2).astype(np.int32)

    def residues(self, code: int) -> list[int]:
        return [int(x) for x in self._residue_rows[code]]

    def code_from_residues(self, residues: Sequence[int]) -> int:
        residues = list(residues)
        if len(residues) != len(self.factors):
            raise GroupError(f'element {residues} has wrong length for {self.name}')
        for r, q in zip(residues, self.factors):
            if not isinstance(r, (int, np.integer)) or not 0 <= r < q:
                raise GroupError(f'residue {r!r} not reduced modulo {q}')
        return int(sum(int(r) * w for r, w in zip(residues, self._radix)))

    def elem(self, *residues) -> 'GroupElem':
        """Element from residues, reducing each modulo its factor."""
        if len(residues) == 1 and isinstance(residues[0], (tuple, list)):
            residues = tuple(residues[0])
        if len(residues) != len(self.factors):
            raise GroupError(f'element {list(residues)} has wrong length for {self.name}')
        return GroupElem(self, tuple(int(r) % q for r, q in zip(residues, self.factors)))

    def label(self, code: int) -> 'GroupElem':
        return GroupElem(self, tuple(self.residues(code)))

    def zero(self) -> 'GroupElem':
        return GroupElem(self, (0,) * len(self.factors))

    def elements(self) -> list['GroupElem']:
        return [self.label(c) for c in range(self.order)]

    @property
    def is_prime_cyclic(self) -> bool:
        return len(self.factors) == 1 and is_prime(self.factors[0])


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class GroupElem:
    spec: GroupSpec
    residues: tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != len(self.spec.factors):
            raise GroupError('residue vector length does not match the group')
        for r, q in zip(self.residues, self.spec.factors):
            if not 0 <= r < q:
                raise GroupError(f'residue {r} not reduced modulo {q}')

    def _check(self, other: 'GroupElem') -> None:
        if not isinstance(other, GroupElem) or other.spec != self.spec:
            raise GroupError('operands belong to different groups')

    def __add__(self, other: 'GroupElem') -> 'GroupElem':
        self._check(other)
        return GroupElem(self.spec, tuple((a + b) % q for a, b, q in
                                          zip(self.residues, other.residues, self.spec.factors)))

    def __neg__(self) -> 'GroupElem':
        return GroupElem(self.spec, tuple((-a) % q for a, q in zip(self.residues, self.spec.factors)))

    def __sub__(self, other: 'GroupElem') -> 'GroupElem':
        return self + (-other)

    def __mul__(self, k: int) -> 'GroupElem':
        return GroupElem(self.spec, tuple((k * a) % q for a, q in zip(self.residues, self.spec.factors)))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElem) and self.spec == other.spec and self.residues == other.residues

    def __lt__(self, other: 'GroupElem') -> bool:
        self._check(other)
        return self.residues < other.residues

    def __hash__(self) -> int:
        return hash((self.spec.factors, self.residues))

    @property
    def code(self) -> int:
        return self.spec.code_from_residues(self.residues)

    def is_zero(self) -> bool:
        return not any(self.residues)

    def __repr__(self) -> str:
        return f'({",".join(map(str, self.residues))})'


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``Z<int>(xZ<int>)*``, e.g. ``Z2xZ4``."""
    s = text.strip().replace(' ', '')
    if not s:
        raise GroupError('empty group spec')
    if not re.fullmatch(r'Z\d+(?:[x×]Z\d+)*', s):
        raise GroupError(f'malformed group spec {text!r}; expected e.g. Z2xZ4')
    return GroupSpec(tuple(int(q) for q in re.findall(r'Z(\d+)', s)))


def add(a: GroupElem, b: GroupElem) -> GroupElem:
    return a + b


def neg(a: GroupElem) -> GroupElem:
    return -a


def zero(spec: GroupSpec) -> GroupElem:
    return spec.zero()


class FiniteGroup(TableGroup):
    """An Abelian group given only by its operation table.

    Used for subgroups and quotients that the algorithms treat as groups in
    their own right.  ``residue_of`` maps each code to a residue vector of the
    ambient group (the element itself, or a coset representative).
    """

    def __init__(self, table: np.ndarray, name: str, residue_of: Sequence[Sequence[int]],
                 labels: Sequence | None = None):
        table = np.asarray(table, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
            raise GroupError('operation table must be square')
        if not np.array_equal(table[0], np.arange(table.shape[0])):
            raise GroupError('code 0 must be the identity')
        self._table = table
        self.name = name
        self._residue_of = [list(map(int, r)) for r in residue_of]
        self._labels = list(labels) if labels is not None else list(range(table.shape[0]))

    def __repr__(self) -> str:
        return f'FiniteGroup({self.name}, order={self.order})'

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteGroup) and other.name == self.name
                and np.array_equal(other._table, self._table) and other._residue_of == self._residue_of)

    def __hash__(self) -> int:
        return hash((self.name, self._table.tobytes()))

    @property
    def order(self) -> int:
        return self._table.shape[0]

    def _build_table(self) -> np.ndarray:
        return self._table.copy()

    def residues(self, code: int) -> list[int]:
        return list(self._residue_of[code])

    def code_from_residues(self, residues: Sequence[int]) -> int:
        residues = [int(r) for r in residues]
        try:
            return self._residue_of.index(residues)
        except ValueError:
            raise GroupError(f'{residues} is not an element of {self.name}') from None

    def label(self, code: int):
        return self._labels[code]


class Subgroup:
    """Explicit element set of a subgroup, stored as sorted codes."""

    def __init__(self, group: TableGroup, codes: Iterable[int], check: bool = True):
        self.group = group
        self.codes = tuple(sorted(set(int(c) for c in codes)))
        if check:
            self._validate()

    def _validate(self) -> None:
        s = set(self.codes)
        if 0 not in s:
            raise GroupError('subgroup must contain the identity')
        t = self.group.add_table
        for a in self.codes:
            if int(self.group.neg_table[a]) not in s:
                raise GroupError('element set not closed under negation')
            for b in self.codes:
                if int(t[a, b]) not in s:
                    raise GroupError('element set not closed under addition')

    @classmethod
    def from_elements(cls, spec: TableGroup, elements: Iterable) -> 'Subgroup':
        return cls(spec, [spec.code(e) for e in elements])

    @property
    def spec(self) -> TableGroup:
        return self.group

    @property
    def order(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, code) -> bool:
        if isinstance(code, GroupElem):
            code = self.group.code(code)
        return int(code) in self._set

    @functools.cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.codes)

    @functools.cached_property
    def mask(self) -> int:
        return sum(1 << c for c in self.codes)

    @property
    def elements(self) -> list:
        return [self.group.label(c) for c in self.codes]

    def is_trivial(self) -> bool:
        return len(self.codes) == 1

    def is_proper(self) -> bool:
        return len(self.codes) < self.group.order

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.group == self.group and other.codes == self.codes

    def __hash__(self) -> int:
        return hash(self.codes)

    def __repr__(self) -> str:
        return f'Subgroup({self.group.name}, {[self.group.residues(c) for c in self.codes]})'

    @functools.cached_property
    def as_group(self) -> FiniteGroup:
        """This subgroup as an abstract group; codes index ``self.codes``."""
        idx = {c: i for i, c in enumerate(self.codes)}
        t = self.group.add_table
        table = np.array([[idx[int(t[a, b])] for b in self.codes] for a in self.codes], dtype=np.int32)
        return FiniteGroup(table, f'<{len(self.codes)}-subgroup of {self.group.name}>',
                           [self.group.residues(c) for c in self.codes],
                           [self.group.label(c) for c in self.codes])

    def embed(self, local_code: int) -> int:
        """Code in the ambient group of an element of :attr:`as_group`."""
        return self.codes[local_code]


def generated_subgroup(group: TableGroup, generators: Iterable[int]) -> Subgroup:
    t = group.add_table
    elems = {0}
    frontier = [0]
    gens = [int(g) for g in generators]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(t[x, g])
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(group, elems, check=False)


def cyclic_subgroup(a, group: TableGroup | None = None) -> Subgroup:
    """{0, a, 2a, ...}.  ``a`` may be a GroupElem or a code (with ``group``)."""
    if isinstance(a, GroupElem):
        group = a.spec
    if group is None:
        raise GroupError('an element code needs its group')
    return generated_subgroup(group, [group.code(a)])


def enumerate_subgroups(group: TableGroup, bound: int = SUBGROUP_ENUMERATION_BOUND) -> list[Subgroup]:
    """All subgroups, by closing generated sets one generator at a time.

    Sorted by order, then by element codes.
    """
    if group.order > bound:
        raise GroupError(f'group order {group.order} exceeds enumeration bound {bound}')
    t = group.add_table
    found: dict[frozenset, None] = {}
    start = frozenset({0})
    found[start] = None
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for g in range(group.order):
                if g in s:
                    continue
                # <s, g> = s + <g>
                cyc = [0]
                x = g
                while x != 0:
                    cyc.append(x)
                    x = int(t[x, g])
                new = frozenset(int(t[a, c]) for a in s for c in cyc)
                if new not in found:
                    found[new] = None
                    nxt.append(new)
        frontier = nxt
    subs = [Subgroup(group, s, check=False) for s in found]
    subs.sort(key=lambda b: (b.order, b.codes))
    return subs


class QuotientMap:
    """Canonical projection A -> A/B.

    Cosets are ordered by their representative, the minimal code (for a
    GroupSpec this is the lexicographically least residue vector), so the
    coset of 0 is code 0 of :attr:`group`.
    """

    def __init__(self, spec: TableGroup, kernel: Subgroup):
        if kernel.group != spec:
            raise GroupError('kernel is not a subgroup of this group')
        kernel._validate()
        self.spec = spec
        self.kernel = kernel
        t = spec.add_table
        seen = [-1] * spec.order
        cosets = []
        for g in range(spec.order):
            if seen[g] >= 0:
                continue
            coset = tuple(sorted(int(t[g, b]) for b in kernel.codes))
            for x in coset:
                seen[x] = len(cosets)
            cosets.append(coset)
        self.cosets = tuple(cosets)
        self.representatives = tuple(c[0] for c in cosets)
        self._proj = seen
        reps = self.representatives
        table = np.array([[seen[int(t[a, b])] for b in reps] for a in reps], dtype=np.int32)
        self.group = FiniteGroup(table, f'{spec.name}/<{kernel.order}>',
                                 [spec.residues(r) for r in reps],
                                 [spec.label(r) for r in reps])

    def project(self, code) -> int:
        if isinstance(code, GroupElem):
            code = self.spec.code(code)
        return self._proj[int(code)]

    @property
    def projection(self) -> list[int]:
        return list(self._proj)

    def representative(self, coset_code: int) -> int:
        return self.representatives[coset_code]

    def preimage(self, sub: Subgroup) -> Subgroup:
        """Full preimage in A of a subgroup of the quotient."""
        return Subgroup(self.spec, [x for c in sub.codes for x in self.cosets[c]], check=False)

    @property
    def order(self) -> int:
        return len(self.cosets)


def quotient(spec: TableGroup, b: Subgroup, proper: bool = False) -> QuotientMap:
    if proper and not b.is_proper():
        raise GroupError('a proper subgroup is required for this quotient')
    return QuotientMap(spec, b)


def smallest_prime_divisor(spec: TableGroup | int) -> int:
    n = spec if isinstance(spec, int) else spec.order
    for p in range(2, n + 1):
        if n % p == 0:
            return p
    raise GroupError('order must be >= 2')
