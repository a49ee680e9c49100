####################################################################################################
#                                          test_model.py                                           #
####################################################################################################
#                                                                                                  #
# Purpose: Tests for bn/model.py and bn/cpt_format.py: model validation codes, the joint tensor,  #
#          .cpt parsing errors with line numbers, and write -> read of corpus models.             #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import itertools
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from shiftdiag.bn.cpt_format import attach_model, serialize_model
from shiftdiag.bn.model import CPT, VariableSpec, build_model
from shiftdiag.core.errors import InferenceError, ModelSpecError
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS
from shiftdiag.core.paths import corpus_names
from tests.utils.corpus import tiny

pytestmark = [pytest.mark.bn]

HEADER = 'model for "tiny"\nvar a states 0, 1\nvar b states 0, 1\n'


@pytest.fixture
def ab():
    return tiny('a -> b')


def _spec_error(diagram, text):
    with pytest.raises(ModelSpecError) as exc:
        attach_model(diagram, text)
    return exc.value


# ----------------------------------------------------------------- build_model
class TestBuildModel:

    def test_joint_is_product_of_cpts(self, ab):
        model = build_model(ab, {'a': ['0', '1'], 'b': ['0', '1']},
                            {'a': [0.3, 0.7], 'b': [[0.9, 0.1], [0.2, 0.8]]})
        expected = np.array([[0.27, 0.03], [0.14, 0.56]])
        np.testing.assert_allclose(model.joint, expected)
        assert model.joint.sum() == pytest.approx(1.0)
        for assignment in model.assignments():
            index = tuple(int(assignment[n]) for n in model.order)
            assert model.factor_product(assignment) == pytest.approx(expected[index])

    def test_array_axes_follow_sorted_parents(self):
        diagram = tiny('b -> c', 'a -> c')
        tables = {'a': [0.5, 0.5], 'b': [0.5, 0.5],
                  # c[a, b]: c=1 only when a=1 and b=0
                  'c': [[[1, 0], [1, 0]], [[0, 1], [1, 0]]]}
        model = build_model(diagram, {n: ['0', '1'] for n in 'abc'}, tables)
        assert model.cpt('c').parents == ('a', 'b')
        assert model.joint[1, 0, 1] == pytest.approx(0.25)

    def test_joint_is_read_only(self, ab):
        model = build_model(ab, {'a': ['0', '1'], 'b': ['0', '1']},
                            {'a': [0.5, 0.5], 'b': [[0.5, 0.5], [0.5, 0.5]]})
        with pytest.raises(ValueError):
            model.joint[0, 0] = 1.0

    @pytest.mark.parametrize('states, tables, code', [
        ({'a': ['0', '1']}, {}, 'MISSING_VARIABLE'),
        ({'a': ['0', '1'], 'b': ['0', '1'], 'zz': ['0', '1']}, {}, 'UNKNOWN_NODE'),
        ({'a': ['0'], 'b': ['0', '1']}, {}, 'INVALID_STATES'),
        ({'a': ['0', '0'], 'b': ['0', '1']}, {}, 'INVALID_STATES'),
        ({'a': ['0', '1'], 'b': ['0', '1']}, {'a': [0.5, 0.5]}, 'MISSING_CPT'),
        ({'a': ['0', '1'], 'b': ['0', '1']},
         {'a': [0.5, 0.5], 'b': CPT('b', (), [0.5, 0.5])}, 'PARENT_MISMATCH'),
        ({'a': ['0', '1'], 'b': ['0', '1']}, {'a': [0.5, 0.5], 'b': [0.5, 0.5]}, 'TABLE_SHAPE'),
        ({'a': ['0', '1'], 'b': ['0', '1']},
         {'a': [1.5, -0.5], 'b': [[0.5, 0.5], [0.5, 0.5]]}, 'INVALID_PROBABILITY'),
        ({'a': ['0', '1'], 'b': ['0', '1']},
         {'a': [0.5, 0.5], 'b': [[0.5, 0.5], [0.5, 0.6]]}, 'ROW_NOT_NORMALIZED'),
    ])
    def test_error_codes(self, ab, states, tables, code):
        with pytest.raises(ModelSpecError) as exc:
            build_model(ab, states, tables)
        assert exc.value.code == code

    def test_row_error_names_the_row(self, ab):
        with pytest.raises(ModelSpecError) as exc:
            build_model(ab, {'a': ['lo', 'hi'], 'b': ['0', '1']},
                        {'a': [0.5, 0.5], 'b': [[0.5, 0.5], [0.5, 0.6]]})
        assert "'b'" in str(exc.value) and 'a=hi' in str(exc.value)

    def test_domain_and_selection_states_are_fixed(self, corpus_diagram):
        diagram = corpus_diagram('selection_b')
        with pytest.raises(ModelSpecError) as exc:
            build_model(diagram, {'Y': ['0', '1'], 'X': ['0', '1'], 'S': ['no', 'yes']}, {})
        assert exc.value.code == 'INVALID_STATES'

    def test_state_space_cap(self):
        diagram = tiny(isolated=tuple(f'v{i}' for i in range(4)))
        settings = DEFAULT_SETTINGS.override(max_joint_states=8)
        with pytest.raises(ModelSpecError) as exc:
            build_model(diagram, {f'v{i}': ['0', '1'] for i in range(4)}, {}, settings)
        assert exc.value.code == 'STATE_SPACE_TOO_LARGE'

    def test_unknown_state_lookup(self):
        with pytest.raises(InferenceError) as exc:
            VariableSpec('a', ('0', '1')).index('2')
        assert exc.value.code == 'UNKNOWN_STATE'


# ----------------------------------------------------------------- .cpt text
class TestCptFormat:

    def test_comments_and_order(self, ab):
        text = ('# leading comment\n' + HEADER +
                'cpt b given a  # rows in any order\n  row 1 : 0.2 0.8\n  row 0 : 0.9 0.1\n'
                'cpt a\n  row : .3 7e-1\n')
        model = attach_model(ab, text)
        np.testing.assert_allclose(model.joint, [[0.27, 0.03], [0.14, 0.56]])

    @pytest.mark.parametrize('body, code, line', [
        ('var a states 0, 1\n', 'DUPLICATE_DECLARATION', 4),
        ('var c states 0\n', 'INVALID_STATES', 4),
        ('cpt a\n  row : 0.5 0.5\ncpt a\n', 'DUPLICATE_DECLARATION', 6),
        ('row : 0.5 0.5\n', 'SYNTAX', 4),
        ('cpt a\n  row : 0.5 half\n', 'SYNTAX', 5),
        ('cpt a\n  row 0 : 0.5 0.5\n', 'SYNTAX', 5),
        ('cpt a\n  row : 0.5 0.5\n  row : 0.5 0.5\n', 'DUPLICATE_DECLARATION', 6),
        ('cpt a\n  row : 0.5 0.5\ncpt b given a\n  row 0 : 0.5 0.5\n', 'MISSING_ROW', 6),
        ('cpt a\n  row : 0.5 0.5\ncpt b given a\n  row 0 : 0.5 0.5\n  row 2 : 0.5 0.5\n', 'UNKNOWN_STATE', 8),
        ('cpt a\n  row : 0.5 0.5 0.0\n', 'SYNTAX', 5),
        ('cpt a\n  row : 0.5 0.5\ncpt b given c\n', 'MISSING_VARIABLE', 6),
        ('cpt a\n  row : 0.5 0.4\ncpt b given a\n  row 0 : 0.5 0.5\n  row 1 : 0.5 0.5\n',
         'ROW_NOT_NORMALIZED', 4),
        ('bogus\n', 'SYNTAX', 4),
    ])
    def test_error_codes_and_lines(self, ab, body, code, line):
        error = _spec_error(ab, HEADER + body)
        assert error.code == code
        assert error.line == line
        assert str(error).startswith(f'line {line}: ')

    def test_missing_header(self, ab):
        error = _spec_error(ab, 'var a states 0, 1\n')
        assert (error.code, error.line) == ('SYNTAX', 1)

    def test_name_mismatch(self, ab):
        error = _spec_error(ab, 'model for "other"\n')
        assert error.code == 'NAME_MISMATCH'

    def test_missing_cpt(self, ab):
        error = _spec_error(ab, HEADER + 'cpt a\n  row : 0.5 0.5\n')
        assert error.code == 'MISSING_CPT'

    @pytest.mark.parametrize('name', corpus_names())
    def test_corpus_models_round_trip(self, corpus_diagram, corpus_model, name):
        model = corpus_model(name)
        again = attach_model(corpus_diagram(name), serialize_model(model))
        np.testing.assert_array_equal(again.joint, model.joint)
        for node in model.order:
            assert again.states(node) == model.states(node)

    def test_corpus_joints_are_normalized(self, corpus_model):
        for name in corpus_names():
            assert corpus_model(name).joint.sum() == pytest.approx(1.0, abs=1e-12)

    def test_selection_d_is_deterministic_or(self, corpus_model):
        model = corpus_model('selection_d')
        cpt = model.cpt('S')
        for x, y in itertools.product(range(2), repeat=2):
            idx = tuple({'X': x, 'Y': y}[p] for p in cpt.parents)
            assert cpt.table[idx][1] == float(x or y)
