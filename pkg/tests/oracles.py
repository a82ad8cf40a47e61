"""Brute-force reference implementations, written independently of the package.

Plain Python over residue tuples and itertools; nothing here shares code with
the DFS, bitmask or table machinery under test.
"""
import itertools
import math


def residues_all(factors):
    return list(itertools.product(*[range(q) for q in factors]))


def radd(factors, a, b):
    return tuple((x + y) % q for x, y, q in zip(a, b, factors))


def rneg(factors, a):
    return tuple((-x) % q for x, q in zip(a, factors))


def rzero(factors):
    return tuple(0 for _ in factors)


def subgroups_by_subset_closure(factors):
    """All subgroups, by testing closure of every subset that contains 0."""
    elems = residues_all(factors)
    z = rzero(factors)
    rest = [e for e in elems if e != z]
    out = set()
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            s = set(combo) | {z}
            if all(radd(factors, a, b) in s for a in s for b in s):
                out.add(frozenset(s))
    return out


def simple_cycles(n):
    """Every simple directed cycle of K_n, smallest vertex first, via permutations."""
    for k in range(2, n + 1):
        for vs in itertools.permutations(range(n), k):
            if vs[0] == min(vs):
                yield vs


def cycle_count_formula(n):
    return sum(math.comb(n, k) * math.factorial(k - 1) for k in range(2, n + 1))


def label_sum(label, factors, vs, closed):
    acc = rzero(factors)
    pairs = list(zip(vs, vs[1:]))
    if closed:
        pairs.append((vs[-1], vs[0]))
    for u, v in pairs:
        acc = radd(factors, acc, label(u, v))
    return acc


def zero_sum_cycles(label, factors, n, min_len=2):
    z = rzero(factors)
    return [c for c in simple_cycles(n) if len(c) >= min_len and label_sum(label, factors, c, True) == z]


def path_sums(label, factors, n, u, v, min_len=1):
    out = set()
    others = [x for x in range(n) if x not in (u, v)]
    for k in range(len(others) + 1):
        for mid in itertools.permutations(others, k):
            if k + 1 >= min_len:
                out.add(label_sum(label, factors, (u,) + mid + (v,), False))
    return out


def all_tables(factors, n):
    """Every labelling of K_n as a dict arc -> residues (exponential; tiny sizes only)."""
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    elems = residues_all(factors)
    for vals in itertools.product(elems, repeat=len(arcs)):
        yield dict(zip(arcs, vals))


def zero_sum_free_exists(factors, n):
    for t in all_tables(factors, n):
        if not zero_sum_cycles(lambda u, v: t[u, v], factors, n):
            return True
    return False
