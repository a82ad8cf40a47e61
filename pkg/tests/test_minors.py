import json

import pytest
from hypothesis import given, strategies as st

from zerosum.labelling import FormatError
from zerosum.minors import (ExtractionError, HostGraph, MinorModel, MinorModelError, auxiliary_labelling,
                            contact_edges, cycle_to_json, dump_model, extract_divisible_cycle, load_model,
                            model_from_json, model_to_json, model_warnings, random_minor_model, tree_path,
                            validate_minor_model)


def singleton_model(m):
    return HostGraph.complete(2 * m), MinorModel(tuple(([2 * i], [2 * i + 1]) for i in range(m)))


def is_simple_cycle(g, cyc):
    return (len(cyc) >= 3 and len(set(cyc)) == len(cyc)
            and all(g.has_edge(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])))


def test_singleton_model_valid():
    g, mm = singleton_model(4)
    assert validate_minor_model(g, mm) == []
    assert model_warnings(g, mm) == []


def test_shared_vertex():
    g = HostGraph.complete(4)
    mm = MinorModel((([0], [1]), ([1], [3])))
    bad = validate_minor_model(g, mm)
    assert any('lies in both' in b for b in bad)


def test_empty_and_out_of_range():
    g = HostGraph.complete(4)
    assert any('empty' in b for b in validate_minor_model(g, MinorModel((([], [1]), ([2], [3])))))
    assert any('not a host vertex' in b for b in validate_minor_model(g, MinorModel((([0], [9]), ([2], [3])))))


def test_tree_violation():
    # X0+ = {0, 4} with X1- = {3}: edges 0-4, 4-3, 0-3 form a triangle
    edges = {(0, 1), (2, 3), (0, 3), (2, 1), (0, 4), (4, 3)}
    g = HostGraph(5, frozenset(edges))
    mm = MinorModel((([0, 4], [1]), ([2], [3])))
    bad = validate_minor_model(g, mm)
    assert any('X0+ with X1-' in b for b in bad)


def test_contact_edge_count():
    g = HostGraph(4, frozenset({(0, 3), (2, 1)}))
    bad = validate_minor_model(g, MinorModel((([0], [1]), ([2], [3]))))
    assert any('pair 0 has 0 edges' in b for b in bad)
    g = HostGraph(5, frozenset({(0, 1), (0, 4), (2, 3), (0, 3), (2, 1), (2, 4)}))
    bad = validate_minor_model(g, MinorModel((([0], [1, 4]), ([2], [3]))))
    assert any('pair 0 has 2 edges' in b for b in bad)


def test_disconnected_supernode_is_a_warning_only():
    # X0+ = {0, 4} is connected only through X1- = {3}
    edges = {(0, 1), (2, 3), (0, 3), (4, 3), (2, 1)}
    g = HostGraph(5, frozenset(edges))
    mm = MinorModel((([0, 4], [1]), ([2], [3])))
    assert validate_minor_model(g, mm) == []
    assert model_warnings(g, mm) == ['X0+ does not induce a connected subgraph']


def test_host_graph_rejects():
    with pytest.raises(ValueError):
        HostGraph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        HostGraph(3, frozenset({(1, 3)}))
    assert HostGraph(3, frozenset({(2, 0)})).edges == {(0, 2)}


def test_auxiliary_singletons():
    for q in (2, 3, 5):
        g, mm = singleton_model(5)
        w = auxiliary_labelling(g, mm, q)
        assert all(w.code(i, j) == 2 % q for i, j in w.arcs())


def test_auxiliary_hand_built():
    # X0+ = {0, 4, 5} is the path 0-4-5; the contact x0+ = 0; x1- = 3 hangs off 5
    edges = {(0, 1), (2, 3), (0, 4), (4, 5), (5, 3), (2, 1)}
    g = HostGraph(6, frozenset(edges))
    mm = MinorModel((([0, 4, 5], [1]), ([2], [3])))
    assert validate_minor_model(g, mm) == []
    assert contact_edges(g, mm) == [(0, 1), (2, 3)]
    assert tree_path(g, {0, 4, 5, 3}, 0, 3) == [0, 4, 5, 3]
    for q in (2, 3, 5, 7):
        w = auxiliary_labelling(g, mm, q)
        assert w.code(0, 1) == (1 + 3) % q
        assert w.code(1, 0) == 2 % q


def test_extract_digon_q2():
    g, mm = singleton_model(2)
    c = extract_divisible_cycle(g, mm, 2)
    assert c.length == 4 and is_simple_cycle(g, c.cycle)
    assert cycle_to_json(c) == {'cycle': c.cycle, 'length': 4, 'q': 2}


def test_invalid_model_rejected_before_search():
    g = HostGraph.complete(4)
    with pytest.raises(MinorModelError) as ex:
        extract_divisible_cycle(g, MinorModel((([0], [1]), ([1], [3]))), 2)
    assert ex.value.violations
    with pytest.raises(MinorModelError):
        auxiliary_labelling(*singleton_model(1), 3)
    with pytest.raises(ValueError):
        auxiliary_labelling(*singleton_model(3), 1)


def test_too_few_pairs_gives_extraction_error():
    # singleton model, q = 5: all labels 2, m = 2 < n(Z5); digon sums to 4
    with pytest.raises(ExtractionError):
        extract_divisible_cycle(*singleton_model(2), 5)


@pytest.mark.parametrize('q,m', [(2, 3), (3, 4), (5, 6), (5, 7)])
@pytest.mark.parametrize('variant', ['singleton', 'tree'])
def test_random_models(q, m, variant):
    for seed in range(15):
        g, mm = random_minor_model(m, seed, variant, extra_vertices=seed % 3)
        assert validate_minor_model(g, mm) == []
        c = extract_divisible_cycle(g, mm, q)
        assert is_simple_cycle(g, c.cycle)
        assert c.length % q == 0
        w = auxiliary_labelling(g, mm, q)
        assert sum(w.code(a, b) for a, b in zip(c.aux_cycle, c.aux_cycle[1:] + c.aux_cycle[:1])) % q == 0


@given(st.integers(2, 6), st.integers(0, 2 ** 32), st.sampled_from(['singleton', 'tree']))
def test_random_models_are_valid(m, seed, variant):
    g, mm = random_minor_model(m, seed, variant, max_size=4, extra_vertices=seed % 4)
    assert validate_minor_model(g, mm) == []
    assert mm.m == m


def test_random_model_reproducible():
    assert random_minor_model(4, 9) == random_minor_model(4, 9)


def test_json_roundtrip(tmp_path):
    g, mm = random_minor_model(4, 3)
    doc = json.loads(json.dumps(model_to_json(g, mm)))
    assert model_from_json(doc) == (g, mm)
    p = tmp_path / 'm.json'
    dump_model(g, mm, p)
    assert load_model(p) == (g, mm)


@pytest.mark.parametrize('doc', [
    [],
    {'pairs': []},
    {'host': {'n': 3, 'edges': [[0, 1], [1, 0]]}, 'pairs': []},
    {'host': {'n': 3, 'edges': [[0, 0]]}, 'pairs': []},
    {'host': {'n': 3, 'edges': [[0, 1, 2]]}, 'pairs': []},
    {'host': {'n': -1, 'edges': []}, 'pairs': []},
    {'host': {'n': 3, 'edges': []}, 'pairs': [{'plus': [0]}]},
    {'host': {'n': 3, 'edges': []}, 'pairs': [{'plus': [0, 0], 'minus': [1]}]},
    {'host': {'n': 3, 'edges': []}, 'pairs': [{'plus': ['a'], 'minus': [1]}]},
])
def test_json_rejects(doc):
    with pytest.raises(FormatError):
        model_from_json(doc)
