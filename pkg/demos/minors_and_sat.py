"""
Cycles of length divisible by q, and the SAT view
=================================================

A minor model of the oriented complete graph in a host graph yields a host
cycle whose length is a multiple of q.  Separately, the existence question
for n(A) can be posed as a CNF instance and checked with the bundled DPLL.
"""

from zerosum import extract_divisible_cycle, parse_group_spec
from zerosum.minors import random_minor_model
from zerosum.ramsey import sat_export, sat_import_verify, sat_solve

host, model = random_minor_model(m=6, seed=1, variant='tree')
cyc = extract_divisible_cycle(host, model, q=5)
print('host vertices', host.n, 'cycle', cyc.cycle, 'length', cyc.length)

g = parse_group_spec('Z3')
for n in (3, 4):
    inst = sat_export(g, n)
    model = sat_solve(inst)
    print(f'K_{n} over Z3: {inst.num_vars} vars, {len(inst.clauses)} clauses,',
          'SAT' if model else 'UNSAT')
    if model:
        print(sat_import_verify(model, g, n).table)
