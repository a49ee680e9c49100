####################################################################################################
#                                       test_dseparation.py                                        #
####################################################################################################
#                                                                                                  #
# Purpose: Tests for graph/dseparation.py: textbook chain / fork / collider cases, witness paths,  #
#          argument errors, implied independencies, and an exhaustive cross-check of the           #
#          reachability answer against path enumeration and networkx on every DAG up to 5 nodes.   #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import itertools
import os
import sys

import networkx as nx
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from shiftdiag.core.diagram import Node, build_diagram
from shiftdiag.core.errors import OverlappingSetsError, ShiftDiagError, UnknownNodeError
from shiftdiag.graph.dseparation import (
    Arrow,
    Independence,
    Path,
    d_separated,
    implied_independencies,
    is_open,
    open_paths,
)
from tests.utils.corpus import tiny

pytestmark = [pytest.mark.graph]


# ----------------------------------------------------------------- textbook cases
class TestBasicStructures:

    def test_chain(self):
        d = tiny('a -> b', 'b -> c')
        assert not d_separated(d, {'a'}, {'c'}).separated
        assert d_separated(d, {'a'}, {'c'}, {'b'}).separated

    def test_fork(self):
        d = tiny('b -> a', 'b -> c')
        assert not d_separated(d, {'a'}, {'c'}).separated
        assert d_separated(d, {'a'}, {'c'}, {'b'}).separated

    def test_fork_has_one_open_path(self):
        paths = open_paths(tiny('b -> a', 'b -> c'), 'a', 'c')
        assert [p.nodes for p in paths] == [('a', 'b', 'c')]
        assert not paths.truncated

    def test_chain_given_middle_has_no_open_path(self):
        assert len(open_paths(tiny('a -> b', 'b -> c'), 'a', 'c', {'b'})) == 0

    def test_collider(self):
        d = tiny('a -> b', 'c -> b')
        assert d_separated(d, {'a'}, {'c'}).separated
        assert not d_separated(d, {'a'}, {'c'}, {'b'}).separated

    def test_collider_opened_by_descendant(self):
        d = tiny('a -> b', 'c -> b', 'b -> e')
        assert not d_separated(d, {'a'}, {'c'}, {'e'}).separated

    def test_result_is_truthy_when_separated(self):
        d = tiny('a -> b', 'c -> b')
        assert d_separated(d, {'a'}, {'c'})
        assert not d_separated(d, {'a'}, {'b'})


class TestWitnesses:

    def test_selection_collider_opens_one_path(self):
        d = tiny('X -> S', 'Y -> S', selection=('S',))
        assert [p.render() for p in open_paths(d, 'X', 'Y', {'S'})] == ['X -> S <- Y']
        assert len(open_paths(d, 'X', 'Y')) == 0

    def test_berkson_open_paths(self, corpus_diagram):
        paths = open_paths(corpus_diagram('selection_d'), 'X', 'Y', {'S'})
        assert [p.render() for p in paths] == ['X -> S <- Y', 'X <- Y']

    def test_berkson_witness(self, corpus_diagram):
        result = d_separated(corpus_diagram('selection_d'), {'X'}, {'Y'}, {'S'})
        assert not result.separated
        assert [p.render() for p in result.witnesses] == ['X -> S <- Y', 'X <- Y']

    def test_witnesses_are_open(self, corpus_diagram):
        diagram = corpus_diagram('scaffold')
        result = d_separated(diagram, {'sel'}, {'seg'}, {'img'})
        assert not result.separated
        assert result.witnesses
        for path in result.witnesses:
            assert is_open(diagram, path, {'img'})
            assert path.nodes[0] == 'sel' and path.nodes[-1] == 'seg'

    def test_witness_cap_truncates(self):
        # four parallel a -> m_i -> b paths
        d = tiny(*[f'a -> m{i}' for i in range(4)], *[f'm{i} -> b' for i in range(4)])
        result = d_separated(d, {'a'}, {'b'}, witness_cap=2)
        assert len(result.witnesses) == 2
        assert result.truncated
        assert [p.render() for p in result.witnesses] == ['a -> m0 -> b', 'a -> m1 -> b']
        assert not d_separated(d, {'a'}, {'b'}, witness_cap=4).truncated

    def test_path_helpers(self):
        path = Path(('a', 'b', 'c'), (Arrow.FORWARD, Arrow.BACKWARD))
        assert str(path) == 'a -> b <- c'
        assert path.colliders() == ('b',)
        with pytest.raises(ValueError):
            Path(('a',), ())

    def test_open_paths_rejects_overlap(self):
        d = tiny('a -> b')
        with pytest.raises(OverlappingSetsError):
            open_paths(d, 'a', 'a')


class TestArgumentErrors:

    def test_unknown_node(self):
        with pytest.raises(UnknownNodeError):
            d_separated(tiny('a -> b'), {'a'}, {'ghost'})

    def test_overlapping_sets(self):
        with pytest.raises(OverlappingSetsError):
            d_separated(tiny('a -> b', 'b -> c'), {'a'}, {'c'}, {'a'})

    def test_empty_set(self):
        with pytest.raises(ShiftDiagError) as exc:
            d_separated(tiny('a -> b'), set(), {'b'})
        assert exc.value.code == 'EMPTY_SET'


class TestImpliedIndependencies:

    def test_chain(self):
        found = implied_independencies(tiny('a -> b', 'b -> c'))
        assert found == [Independence('a', 'c', ('b',))]
        assert str(found[0]) == 'a _||_ c | {b}'

    def test_complete_dag_implies_nothing(self):
        assert implied_independencies(tiny('a -> b', 'a -> c', 'b -> c'), max_conditioning=1) == []

    def test_annotation_shift_domain_is_marginally_independent(self, corpus_diagram):
        found = implied_independencies(corpus_diagram('shift_c'), max_conditioning=1)
        assert Independence('D', 'Z', ()) in found
        assert Independence('D', 'X', ()) in found
        assert all('Z' not in s.given for s in found)

    def test_unobserved_nodes_are_not_conditioned_on(self):
        found = implied_independencies(tiny('a -> b', 'b -> c', unobserved=('b',)))
        assert found == []

    def test_max_conditioning_zero(self):
        found = implied_independencies(tiny('a -> b', 'c -> b', 'b -> e'), max_conditioning=0)
        assert found == [Independence('a', 'c', ())]

    def test_negative_bound_rejected(self):
        with pytest.raises(ShiftDiagError):
            implied_independencies(tiny('a -> b'), max_conditioning=-1)


# ----------------------------------------------------------------- exhaustive cross-check
def _nx_separated(graph, a, b, given):
    check = getattr(nx, 'is_d_separator', None) or getattr(nx, 'd_separated')
    return check(graph, {a}, {b}, set(given))


def _every_dag(n_nodes):
    """All DAGs on ``v0..v{n-1}`` as edge subsets of the fixed order i < j."""
    ids = [f'v{i}' for i in range(n_nodes)]
    slots = list(itertools.combinations(ids, 2))
    for mask in itertools.product([0, 1], repeat=len(slots)):
        edges = [pair for pair, bit in zip(slots, mask) if bit]
        yield build_diagram(f'dag_{n_nodes}', [Node(i) for i in ids], edges)


@pytest.mark.slow
@pytest.mark.parametrize('n_nodes', [2, 3, 4, 5])
def test_reachability_matches_path_enumeration(n_nodes):
    queries = 0
    for diagram in _every_dag(n_nodes):
        graph = nx.DiGraph(diagram.graph)
        ids = diagram.node_ids
        for a, b in itertools.combinations(ids, 2):
            rest = [n for n in ids if n not in (a, b)]
            for size in range(len(rest) + 1):
                for given in itertools.combinations(rest, size):
                    separated = d_separated(diagram, {a}, {b}, given).separated
                    assert separated == d_separated(diagram, {b}, {a}, given).separated
                    paths = open_paths(diagram, a, b, given, cap=1000)
                    assert not paths.truncated
                    assert separated == (len(paths) == 0)
                    assert separated == _nx_separated(graph, a, b, given)
                    queries += 1
    pairs = n_nodes * (n_nodes - 1) // 2
    assert queries == 2 ** pairs * pairs * 2 ** (n_nodes - 2)
