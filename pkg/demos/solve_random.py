"""
Constructive zero-sum cycles
============================

On K_{8|A|} every labelling has a zero-sum cycle; the solver builds one
by the triangle-chain argument and records what it did.  For Z_p with p
prime a much smaller K_{(3p-1)/2} suffices.
"""

from zerosum import parse_group_spec, random_labelling, solve_general, solve_prime, verify_cycle
from zerosum.abelian import GroupSpec
from zerosum.solver import general_threshold, prime_threshold

g = parse_group_spec('Z2xZ4')
w = random_labelling(g, general_threshold(g.order), seed=3)
rep = solve_general(w)
print(rep.method, rep.witness.vertices, 'sum code', verify_cycle(w, rep.witness.vertices))

# prime case: 200 random labellings of K_10 over Z_7
p = 7
ok = 0
for seed in range(200):
    w = random_labelling(GroupSpec((p,)), prime_threshold(p), seed)
    ok += verify_cycle(w, solve_prime(w).witness.vertices) == 0
print(f'{ok}/200 verified over Z{p}')
