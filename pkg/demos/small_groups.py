"""
Exact values of n(A) for small groups
=====================================

n(A) is the least n such that every A-labelling of the complete digraph
K_n has a directed cycle whose labels sum to zero.  The search below
settles it for groups of order up to 4 in well under a second.
"""

from zerosum import compute_nA, lower_bound_labelling, parse_group_spec, find_zero_sum_cycle_exhaustive

# each value is |A| + 1; the extremal labelling found by the search is kept
for name in ['Z2', 'Z3', 'Z4', 'Z2xZ2']:
    res = compute_nA(parse_group_spec(name))
    print(f'n({name}) = {res.value}   {res.stats.summary()}')
    print(res.witness.table)

# the matching lower bound: a zero-sum-free Z_q labelling of K_q
w = lower_bound_labelling(5)
print(w.table)
print('zero-sum cycle:', find_zero_sum_cycle_exhaustive(w))
