####################################################################################################
#                                        test_direction.py                                         #
####################################################################################################
#                                                                                                  #
# Purpose: Tests for taxonomy/direction.py: causal / anticausal / confounded / unrelated           #
#          classification and the semi-supervised learning and augmentation advisory.              #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from shiftdiag.core.errors import MissingRoleError
from shiftdiag.taxonomy.direction import advise_learning_strategies, classify_direction
from shiftdiag.taxonomy.types import AugmentationVerdict, Direction, SslVerdict
from tests.utils.corpus import tiny

pytestmark = [pytest.mark.taxonomy, pytest.mark.unit]


class TestClassifyDirection:

    def test_causal_with_evidence_path(self):
        result = classify_direction(tiny('x -> m', 'm -> y', image='x', target='y'))
        assert result.direction is Direction.CAUSAL
        assert result.evidence == 'x -> m -> y'
        assert not result.anticausal_like

    def test_anticausal(self, corpus_diagram):
        result = classify_direction(corpus_diagram('skin_lesion'))
        assert result.direction is Direction.ANTICAUSAL
        assert result.evidence_path == ('malignancy', 'dermoscopy')

    def test_confounded_picks_smallest_common_ancestor(self):
        diagram = tiny('u -> x', 'u -> y', 'c -> x', 'c -> y', image='x', target='y')
        result = classify_direction(diagram)
        assert result.direction is Direction.CONFOUNDED
        assert result.common_ancestor == 'c'
        assert result.anticausal_like

    def test_domain_indicator_is_not_a_confounder(self):
        diagram = tiny('d -> x', 'd -> y', image='x', target='y', domain=('d',))
        assert classify_direction(diagram).direction is Direction.UNRELATED

    def test_unrelated(self):
        result = classify_direction(tiny(image='x', target='y', isolated=('x', 'y')))
        assert result.direction is Direction.UNRELATED
        assert result.evidence is None

    def test_missing_role(self):
        with pytest.raises(MissingRoleError) as exc:
            classify_direction(tiny('x -> y', image='x'))
        assert exc.value.code == 'MISSING_ROLE'
        assert 'target' in str(exc.value)


class TestAdvisory:

    @pytest.mark.parametrize('direction, verdict', [
        (Direction.CAUSAL, SslVerdict.THEORETICALLY_FUTILE),
        (Direction.ANTICAUSAL, SslVerdict.MAY_HELP),
        (Direction.CONFOUNDED, SslVerdict.MAY_HELP),
        (Direction.UNRELATED, SslVerdict.INDETERMINATE),
    ])
    def test_ssl_verdicts(self, direction, verdict):
        from shiftdiag.taxonomy.types import PredictiveDirection
        advisory = advise_learning_strategies(PredictiveDirection(direction))
        assert advisory.ssl is verdict
        assert advisory.augmentation is AugmentationVerdict.SUITABLE
        assert advisory.ssl_rationale

    def test_augmentation_note_follows_direction(self, corpus_diagram):
        causal = advise_learning_strategies(classify_direction(corpus_diagram('shift_a')))
        anticausal = advise_learning_strategies(classify_direction(corpus_diagram('shift_d')))
        assert 'equivariantly' in causal.augmentation_note
        assert 'invariant' in anticausal.augmentation_note
