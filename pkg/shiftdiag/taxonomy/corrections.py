####################################################################################################
#                                          corrections.py                                          #
####################################################################################################
#                                                                                                  #
# Purpose: Correction planning. Exactly one plan item per finding, in input order (shifts first,   #
#          then selections); a finding with no known remedy gets an explicit ``none_known`` item.  #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

# own
from shiftdiag.taxonomy.types import (CorrectionPlan, Direction, PlanItem, PredictiveDirection,
                                      SelectionFinding, SelectionType, ShiftFinding, ShiftType, Strategy)

INPUT_WEIGHTS = "p_te(x)/p_tr(x)"
TARGET_WEIGHTS = "p_te(y)/p_tr(y)"

SUPPORT_CAVEAT = ("Importance weights are only valid if the training distribution covers the support of the "
                  "test distribution.")
INTERACTION_CAVEAT = ("Several findings co-occur; each is corrected independently and their interaction is "
                      "not modelled.")
CONFOUNDED_CAVEAT = "The predictive direction is confounded; the plan follows the anticausal case by analogy."


def _shift_item(finding: ShiftFinding) -> PlanItem:
    kind = finding.shift_type
    if kind is ShiftType.POPULATION:
        return PlanItem(finding.ref, Strategy.IMPORTANCE_WEIGHT_INPUTS, INPUT_WEIGHTS,
                        caveats=(SUPPORT_CAVEAT,))
    if kind is ShiftType.PREVALENCE:
        return PlanItem(finding.ref, Strategy.IMPORTANCE_WEIGHT_TARGETS, TARGET_WEIGHTS,
                        alternatives=(Strategy.GENERATIVE_BAYES_REUSE,),
                        caveats=(SUPPORT_CAVEAT,
                                 "Alternatively, reuse the estimated appearance model P(X|Y) with the test "
                                 "prevalence P(Y) via Bayes' rule."))
    if kind is ShiftType.ANNOTATION:
        return PlanItem(finding.ref, Strategy.REANNOTATION,
                        caveats=("No general solution is known; (partial) re-annotation of the training data "
                                 "under the test annotation policy may be required.",))
    if kind is ShiftType.MANIFESTATION:
        return PlanItem(finding.ref, Strategy.NONE_KNOWN,
                        caveats=("Correcting a change in P(Z|Y) requires strong parametric assumptions about "
                                 "how the manifestation differs.",))
    if kind is ShiftType.ACQUISITION:
        return PlanItem(finding.ref, Strategy.HARMONIZATION,
                        caveats=("Harmonize acquisition (spatial alignment, resampling, intensity normalization) "
                                 "or learn acquisition-invariant features.",))
    return PlanItem(finding.ref, Strategy.NONE_KNOWN,
                    caveats=("No correction is known for a mechanism change outside the taxonomy.",))


def _selection_item(finding: SelectionFinding) -> PlanItem:
    kind = finding.selection_type
    if kind is SelectionType.RANDOM:
        return PlanItem(finding.ref, Strategy.NOT_REQUIRED,
                        caveats=("Random selection introduces no bias.",))
    if kind is SelectionType.IMAGE_DEPENDENT:
        return PlanItem(finding.ref, Strategy.IMPORTANCE_WEIGHT_INPUTS, INPUT_WEIGHTS,
                        caveats=(SUPPORT_CAVEAT,))
    if kind is SelectionType.TARGET_DEPENDENT:
        return PlanItem(finding.ref, Strategy.IMPORTANCE_WEIGHT_TARGETS, TARGET_WEIGHTS,
                        alternatives=(Strategy.GENERATIVE_BAYES_REUSE,),
                        caveats=(SUPPORT_CAVEAT,))
    return PlanItem(finding.ref, Strategy.CONTROL_ADDITIONAL_VARIABLES,
                    caveats=("Selection depends on variables beyond the image and target; control for "
                             "additional variables to block the paths opened by selection.",))


def plan_corrections(direction: PredictiveDirection, shifts: Sequence[ShiftFinding],
                     selections: Sequence[SelectionFinding]) -> CorrectionPlan:
    items = [_shift_item(f) for f in shifts] + [_selection_item(f) for f in selections]
    if len(items) >= 2:
        items = [replace(i, caveats=i.caveats + (INTERACTION_CAVEAT,)) for i in items]
    if direction.direction is Direction.CONFOUNDED:
        items = [replace(i, caveats=i.caveats + (CONFOUNDED_CAVEAT,)) for i in items]
    return CorrectionPlan(tuple(items))
