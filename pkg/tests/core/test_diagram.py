####################################################################################################
#                                         test_diagram.py                                          #
####################################################################################################
#                                                                                                  #
# Purpose: Unit tests for core/diagram.py: structural validation codes, strict vs lenient domain  #
#          edges, the immutable CausalDiagram and its derived views.                               #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from shiftdiag.core.diagram import (
    CausalDiagram,
    Edge,
    Node,
    NodeKind,
    NodeRole,
    Relation,
    build_diagram,
    relatives,
    validate_diagram,
)
from shiftdiag.core.errors import DiagramValidationError, UnknownNodeError
from tests.utils.corpus import tiny

pytestmark = [pytest.mark.core, pytest.mark.unit]


def _codes(nodes, edges, mode='strict'):
    return validate_diagram('t', nodes, [Edge(*e) for e in edges], mode).codes()


# ----------------------------------------------------------------- validation
class TestValidation:

    def test_clean_diagram_has_no_issues(self):
        report = validate_diagram('t', [Node('x', role='image'), Node('y', role='target')], [Edge('x', 'y')])
        assert report.accepted
        assert report.errors == () and report.warnings == ()

    @pytest.mark.parametrize('nodes, edges, code', [
        ([Node('1x')], [], 'INVALID_ID'),
        ([Node('a'), Node('a')], [], 'DUP_ID'),
        ([Node('d', 'domain', 'image')], [], 'ROLE_ON_INDICATOR'),
        ([Node('s', 'selection', 'target')], [], 'ROLE_ON_INDICATOR'),
        ([Node('a', role='image'), Node('b', role='image')], [], 'DUP_ROLE'),
        ([Node('a')], [('a', 'ghost')], 'DANGLING_EDGE'),
        ([Node('a')], [('a', 'a')], 'SELF_LOOP'),
        ([Node('a'), Node('b')], [('a', 'b'), ('a', 'b')], 'DUP_EDGE'),
        ([Node('s', 'selection'), Node('b')], [('s', 'b')], 'SELECTION_OUT_EDGE'),
        ([Node('d', 'domain'), Node('b')], [('b', 'd')], 'DOMAIN_IN_EDGE'),
        ([Node('a'), Node('b'), Node('c')], [('a', 'b'), ('b', 'c'), ('c', 'a')], 'CYCLE'),
    ])
    def test_error_codes(self, nodes, edges, code):
        assert code in _codes(nodes, edges)

    def test_all_errors_are_collected(self):
        codes = _codes([Node('a', role='image'), Node('b', role='image'), Node('s', 'selection')],
                       [('s', 'a'), ('a', 'ghost')])
        assert set(codes) == {'DUP_ROLE', 'SELECTION_OUT_EDGE', 'DANGLING_EDGE'}

    def test_lenient_mode_downgrades_domain_in_edge(self):
        report = validate_diagram('t', [Node('d', 'domain'), Node('b')], [Edge('b', 'd')], 'lenient')
        assert report.accepted
        assert [w.code for w in report.warnings] == ['DOMAIN_IN_EDGE']

    def test_cycle_message_names_the_cycle(self):
        report = validate_diagram('t', [Node('a'), Node('b')], [Edge('a', 'b'), Edge('b', 'a')])
        (issue,) = report.errors
        assert issue.code == 'CYCLE'
        assert 'a' in issue.message and 'b' in issue.message

    def test_build_diagram_raises_with_report(self):
        with pytest.raises(DiagramValidationError) as exc:
            build_diagram('t', [Node('a'), Node('a')], [])
        assert exc.value.report.codes() == ['DUP_ID']
        assert exc.value.details() == ["DUP_ID: node 'a' is declared more than once"]


# ----------------------------------------------------------------- diagram
class TestCausalDiagram:

    @pytest.fixture
    def chain(self):
        return tiny('z -> x', 'x -> y', 'd -> z', image='x', target='y', anatomy='z',
                    unobserved=('z',), domain=('d',))

    def test_roles_and_kinds(self, chain):
        assert (chain.image, chain.target, chain.anatomy) == ('x', 'y', 'z')
        assert chain.nodes_of_kind(NodeKind.DOMAIN) == ('d',)
        assert chain.node('z').kind is NodeKind.UNOBSERVED
        assert NodeRole.IMAGE.symbol == 'X'

    def test_nodes_and_edges_are_sorted(self, chain):
        assert chain.node_ids == ('d', 'x', 'y', 'z')
        assert chain.edges == tuple(sorted(chain.edges))

    def test_topological_order_is_lexicographic(self):
        diagram = tiny('c -> a', 'b -> a', isolated=('z',))
        assert diagram.topological_order() == ('b', 'c', 'a', 'z')

    def test_relatives(self, chain):
        assert chain.parents('x') == {'z'}
        assert chain.children('d') == {'z'}
        assert chain.ancestors('y') == {'d', 'z', 'x'}
        assert chain.descendants('z') == {'x', 'y'}
        assert relatives(chain, 'y', Relation.PARENTS) == {'x'}
        with pytest.raises(UnknownNodeError):
            chain.parents('ghost')

    def test_directed_paths(self, chain):
        assert chain.directed_path('d', 'y') == ('d', 'z', 'x', 'y')
        assert chain.directed_path('y', 'd') is None
        assert chain.has_directed_path('z', 'y')
        assert not chain.has_directed_path('z', 'y', avoid=['x'])

    def test_directed_path_prefers_lexicographic_shortest(self):
        diagram = tiny('s -> b', 's -> a', 'a -> t', 'b -> t')
        assert diagram.directed_path('s', 't') == ('s', 'a', 't')

    def test_factorization(self, chain):
        assert chain.factorization() == 'P(d) P(z | d) P(x | z) P(y | x)'

    def test_equality_ignores_labels_and_order(self):
        a = build_diagram('t', [Node('x', label='Image'), Node('y')], [('x', 'y')])
        b = build_diagram('t', [Node('y'), Node('x')], [('x', 'y')])
        assert a == b
        assert a.renamed('other') != b

    def test_is_immutable(self, chain):
        with pytest.raises(AttributeError):
            chain.name = 'changed'

    def test_graph_view_is_read_only(self, chain):
        view = chain.graph
        with pytest.raises(Exception):
            view.add_edge('y', 'z')
        assert ('y', 'z') not in chain.graph.edges

    def test_edit_helpers_revalidate(self, chain):
        assert Edge('d', 'x') in chain.with_edge('d', 'x').edges
        assert Edge('z', 'x') not in chain.without_edge('z', 'x').edges
        with pytest.raises(DiagramValidationError):
            chain.with_edge('y', 'z')
        with pytest.raises(UnknownNodeError):
            chain.without_edge('x', 'z')

    def test_summary(self, chain):
        summary = chain.summary()
        assert summary['roles'] == {'image': 'x', 'target': 'y', 'anatomy': 'z'}
        assert summary['domain_nodes'] == ['d']
        assert summary['selection_nodes'] == []

    def test_cyclic_construction_is_rejected(self):
        with pytest.raises(DiagramValidationError):
            CausalDiagram('t', (Node('a'), Node('b')), (Edge('a', 'b'), Edge('b', 'a')))
