"""Command-line interface: ``zerosum <subcommand> ...``.

Exit codes: 0 success, 1 negative result, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .abelian import GroupError, parse_group_spec
from .labelling import (ArcLabelling, EdgeLabelling, FormatError, labelling_to_json, lift_undirected,
                        load_labelling, lower_bound_labelling, random_edge_labelling, random_labelling)
from .minors import (ExtractionError, MinorModelError, cycle_to_json, extract_divisible_cycle, load_model,
                     model_to_json, model_warnings, random_minor_model)
from .oracle import BudgetError, find_zero_sum_cycle_exhaustive, witness_to_json
from .ramsey import (ModelError, SearchBudgetExceeded, compute_nA, parse_model, sat_export,
                     sat_import_verify, sat_solve)
from .ramsey.dpll import DpllBudgetExceeded
from .solver import NoWitnessError, report_to_json, solve

log = logging.getLogger('zerosum')

OK, NEGATIVE, INPUT_ERROR, BUDGET = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _seed(text: str) -> int:
    s = int(text)
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError('seed must be an unsigned 64-bit integer')
    return s


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError('must be a positive integer')
    return v


def _group(text: str):
    try:
        return parse_group_spec(text)
    except GroupError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='zerosum', description='Zero-sum cycles in group-labelled complete digraphs.')
    p.add_argument('-v', '--verbose', action='store_true', help='log progress to stderr')
    sub = p.add_subparsers(dest='command', required=True)

    def common(sp, json_flag=True, out_help=None):
        if json_flag:
            sp.add_argument('--json', action='store_true', help='print a single JSON document')
        if out_help:
            sp.add_argument('-o', dest='output', metavar='PATH', help=out_help)

    sp = sub.add_parser('check', help='test a labelling file for zero-sum cycles (exhaustive)')
    sp.add_argument('labelling')
    sp.add_argument('--min-len', type=int, choices=(2, 3), default=None,
                    help='shortest cycle counted (default 2, or 3 for edge labellings)')
    common(sp)

    sp = sub.add_parser('solve', help='find a zero-sum cycle in a labelling file')
    sp.add_argument('labelling')
    sp.add_argument('--method', choices=('constructive', 'exhaustive', 'prime', 'auto'), default='auto')
    sp.add_argument('--min-len', type=int, choices=(2, 3), default=None)
    sp.add_argument('--json', action='store_true', help='print a single JSON document')
    sp.add_argument('-o', '--emit-report', dest='output', metavar='PATH',
                    help='write the full solve report (JSON) here')

    sp = sub.add_parser('na', help='compute n(A) by exhaustive search')
    sp.add_argument('--group', type=_group, required=True)
    sp.add_argument('--max-n', type=int, default=8)
    sp.add_argument('--threads', type=_positive, default=1)
    sp.add_argument('--symmetry-break', action='store_true',
                    help='also require w(v, 0) non-decreasing in v')
    common(sp, out_help='write search statistics (JSON) here')

    sp = sub.add_parser('lowerbound', help='emit the zero-sum-free Z_q labelling of K_q')
    sp.add_argument('--q', type=int, required=True)
    common(sp, json_flag=False, out_help='write the labelling here instead of stdout')

    sp = sub.add_parser('sat-export', help='write the CNF instance for (group, n) in DIMACS')
    sp.add_argument('--group', type=_group, required=True)
    sp.add_argument('--n', type=int, required=True)
    sp.add_argument('--symmetry-break', action='store_true')
    sp.add_argument('--solve', action='store_true', help='also run the built-in DPLL')
    common(sp, out_help='DIMACS output path (default stdout, unless --solve)')

    sp = sub.add_parser('sat-verify', help='decode and verify a SAT model')
    sp.add_argument('model', help='solver output with "v" lines')
    sp.add_argument('--group', type=_group, required=True)
    sp.add_argument('--n', type=int, required=True)
    common(sp, out_help='write the decoded labelling here')

    sp = sub.add_parser('minor-extract', help='cycle of length divisible by q from a minor model')
    sp.add_argument('model')
    sp.add_argument('--q', type=int, required=True)
    sp.add_argument('--method', choices=('constructive', 'exhaustive', 'prime', 'auto'), default='auto')
    common(sp, out_help='write the cycle document here')

    sp = sub.add_parser('random', help='generate a seeded random fixture')
    sp.add_argument('--kind', choices=('arcs', 'edges', 'minor-model'), default='arcs')
    sp.add_argument('--group', type=_group, help='label group (arcs, edges)')
    sp.add_argument('--n', type=int, required=True, help='vertices, or pairs for minor-model')
    sp.add_argument('--seed', type=_seed, required=True)
    sp.add_argument('--variant', choices=('singleton', 'tree'), default='tree')
    common(sp, json_flag=False, out_help='write here instead of stdout')
    return p


def _emit_doc(doc, path=None) -> None:
    text = json.dumps(doc, sort_keys=True)
    if path:
        with open(path, 'w') as f:
            f.write(text + '\n')
    else:
        print(text)


def _load(path) -> ArcLabelling | EdgeLabelling:
    try:
        return load_labelling(path)
    except OSError as e:
        raise CliError(INPUT_ERROR, f'cannot read {path}: {e.strerror}') from None
    except FormatError as e:
        raise CliError(INPUT_ERROR, f'{path}: {e}') from None


def _as_arcs(w, min_len):
    if isinstance(w, EdgeLabelling):
        return lift_undirected(w), 3 if min_len is None else max(3, min_len)
    return w, 2 if min_len is None else min_len


def cmd_check(a) -> int:
    w, min_len = _as_arcs(_load(a.labelling), a.min_len)
    try:
        c = find_zero_sum_cycle_exhaustive(w, min_len)
    except BudgetError as e:
        raise CliError(BUDGET, str(e)) from None
    if a.json:
        _emit_doc({'zero_sum_free': c is None, 'witness': None if c is None else witness_to_json(w, c)})
    elif c is None:
        print('zero-sum-free')
    else:
        print('zero-sum cycle: ' + ' -> '.join(map(str, c.vertices + c.vertices[:1])))
    return NEGATIVE if c is None else OK


def cmd_solve(a) -> int:
    w, min_len = _as_arcs(_load(a.labelling), a.min_len)
    try:
        rep = solve(w, a.method, min_len)
    except NoWitnessError as e:
        code = NEGATIVE if e.verdict == 'zero-sum-free' else BUDGET
        if a.json:
            _emit_doc({'witness': None, 'verdict': e.verdict})
        else:
            print(e.verdict)
        return code
    except (ValueError, GroupError) as e:
        raise CliError(INPUT_ERROR, str(e)) from None
    doc = report_to_json(w, rep)
    if a.output:
        _emit_doc(doc, a.output)
    if a.json:
        _emit_doc(doc)
    else:
        print(f'zero-sum cycle ({rep.method}): ' + ' -> '.join(map(str, rep.witness.vertices + rep.witness.vertices[:1])))
    return OK


def cmd_na(a) -> int:
    try:
        res = compute_nA(a.group, a.max_n, threads=a.threads, symmetry_break=a.symmetry_break)
    except SearchBudgetExceeded as e:
        raise CliError(BUDGET, str(e)) from None
    except ValueError as e:
        raise CliError(INPUT_ERROR, str(e)) from None
    stats = res.stats
    if a.output:
        _emit_doc({'group': a.group.name, 'value': res.value, **stats.to_json()}, a.output)
    if a.json:
        # no wall time here so that repeated runs print identical bytes
        _emit_doc({'group': a.group.name, 'value': res.value,
                   'per_n': {str(k): v for k, v in res.per_n.items()},
                   'nodes': stats.nodes, 'prunes': stats.prunes,
                   'witness': labelling_to_json(res.witness)})
    else:
        print(f'n({a.group.name}) = {res.value}')
        print(stats.summary(), file=sys.stderr)
    return OK


def cmd_lowerbound(a) -> int:
    if a.q < 2:
        raise CliError(INPUT_ERROR, 'q must be >= 2')
    _emit_doc(labelling_to_json(lower_bound_labelling(a.q)), a.output)
    return OK


def cmd_sat_export(a) -> int:
    try:
        inst = sat_export(a.group, a.n, a.symmetry_break)
    except ValueError as e:
        code = BUDGET if 'budget' in str(e) else INPUT_ERROR
        raise CliError(code, str(e)) from None
    if a.output:
        with open(a.output, 'w') as f:
            f.write(inst.to_dimacs())
    elif not a.solve:
        sys.stdout.write(inst.to_dimacs())
    if not a.solve:
        return OK
    try:
        model = sat_solve(inst)
    except DpllBudgetExceeded as e:
        raise CliError(BUDGET, str(e)) from None
    w = None if model is None else sat_import_verify(model, a.group, a.n)
    if a.json:
        _emit_doc({'satisfiable': w is not None, 'num_vars': inst.num_vars,
                   'num_clauses': len(inst.clauses),
                   'labelling': None if w is None else labelling_to_json(w)})
    else:
        print('SAT' if w is not None else 'UNSAT')
    return OK if w is not None else NEGATIVE


def cmd_sat_verify(a) -> int:
    try:
        with open(a.model) as f:
            text = f.read()
        true = parse_model(text)
    except OSError as e:
        raise CliError(INPUT_ERROR, f'cannot read {a.model}: {e.strerror}') from None
    except ModelError as e:
        raise CliError(INPUT_ERROR, str(e)) from None
    try:
        w = sat_import_verify(true, a.group, a.n)
    except ModelError as e:
        if 'zero-sum cycle' in str(e):
            if a.json:
                _emit_doc({'verified': False, 'reason': str(e)})
            else:
                print(f'rejected: {e}')
            return NEGATIVE
        raise CliError(INPUT_ERROR, str(e)) from None
    if a.output:
        _emit_doc(labelling_to_json(w), a.output)
    if a.json:
        _emit_doc({'verified': True, 'labelling': labelling_to_json(w)})
    else:
        print('verified zero-sum-free')
    return OK


def cmd_minor_extract(a) -> int:
    if a.q < 2:
        raise CliError(INPUT_ERROR, 'q must be >= 2')
    try:
        g, model = load_model(a.model)
    except OSError as e:
        raise CliError(INPUT_ERROR, f'cannot read {a.model}: {e.strerror}') from None
    except FormatError as e:
        raise CliError(INPUT_ERROR, f'{a.model}: {e}') from None
    for msg in model_warnings(g, model):
        log.warning('%s', msg)
    try:
        c = extract_divisible_cycle(g, model, a.q, a.method)
    except MinorModelError as e:
        raise CliError(INPUT_ERROR, str(e)) from None
    except ExtractionError as e:
        verdict = getattr(e.__cause__, 'verdict', 'inconclusive')
        raise CliError(NEGATIVE if verdict == 'zero-sum-free' else BUDGET, str(e)) from None
    doc = cycle_to_json(c)
    if a.output:
        _emit_doc(doc, a.output)
    if a.json:
        _emit_doc(doc)
    else:
        print(f'cycle of length {c.length} (divisible by {c.q}): ' + ' '.join(map(str, c.cycle)))
    return OK


def cmd_random(a) -> int:
    if a.kind == 'minor-model':
        if a.n < 1:
            raise CliError(INPUT_ERROR, '--n must be >= 1')
        g, model = random_minor_model(a.n, a.seed, a.variant)
        _emit_doc(model_to_json(g, model), a.output)
        return OK
    if a.group is None:
        raise CliError(INPUT_ERROR, '--group is required for labellings')
    if a.n < 2:
        raise CliError(INPUT_ERROR, '--n must be >= 2')
    make = random_labelling if a.kind == 'arcs' else random_edge_labelling
    _emit_doc(labelling_to_json(make(a.group, a.n, a.seed)), a.output)
    return OK


COMMANDS = {
    'check': cmd_check, 'solve': cmd_solve, 'na': cmd_na, 'lowerbound': cmd_lowerbound,
    'sat-export': cmd_sat_export, 'sat-verify': cmd_sat_verify, 'minor-extract': cmd_minor_extract,
    'random': cmd_random,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        return COMMANDS[a.command](a)
    except CliError as e:
        print(f'zerosum: {e}', file=sys.stderr)
        return e.code
    except OSError as e:
        print(f'zerosum: {e}', file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == '__main__':
    main()
