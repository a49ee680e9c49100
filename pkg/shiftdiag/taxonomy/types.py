####################################################################################################
#                                             types.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: Result types of the shift taxonomy. Enum values are the names used in the JSON report. #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

# own
from shiftdiag.core.diagram import Edge


class Direction(str, Enum):
    CAUSAL = "causal"
    ANTICAUSAL = "anticausal"
    CONFOUNDED = "confounded"
    UNRELATED = "unrelated"


class ShiftType(str, Enum):
    POPULATION = "population_shift"
    ANNOTATION = "annotation_shift"
    PREVALENCE = "prevalence_shift"
    MANIFESTATION = "manifestation_shift"
    ACQUISITION = "acquisition_shift"
    UNCLASSIFIED = "unclassified_exogenous"


class Factor(str, Enum):
    P_Z = "P(Z)"
    P_Y_GIVEN_X = "P(Y|X)"
    P_Y = "P(Y)"
    P_Z_GIVEN_Y = "P(Z|Y)"
    P_X_GIVEN_Z = "P(X|Z)"
    OTHER = "other"


class SelectionType(str, Enum):
    RANDOM = "random"
    IMAGE_DEPENDENT = "image_dependent"
    TARGET_DEPENDENT = "target_dependent"
    JOINT_DEPENDENT = "joint_dependent"
    OTHER_DEPENDENT = "other_dependent"


class InducedBias(str, Enum):
    NONE = "none"
    POPULATION_SHIFT_LIKE = "population_shift_like"
    ACQUISITION_SHIFT_LIKE = "acquisition_shift_like"
    PREVALENCE_SHIFT_LIKE = "prevalence_shift_like"
    SPURIOUS_ASSOCIATION = "spurious_association"


class Strategy(str, Enum):
    IMPORTANCE_WEIGHT_INPUTS = "importance_weight_inputs"
    IMPORTANCE_WEIGHT_TARGETS = "importance_weight_targets"
    GENERATIVE_BAYES_REUSE = "generative_bayes_reuse"
    HARMONIZATION = "harmonization"
    REANNOTATION = "reannotation"
    CONTROL_ADDITIONAL_VARIABLES = "control_additional_variables"
    NONE_KNOWN = "none_known"
    NOT_REQUIRED = "not_required"


class SslVerdict(str, Enum):
    THEORETICALLY_FUTILE = "theoretically_futile"
    MAY_HELP = "may_help"
    INDETERMINATE = "indeterminate"


class AugmentationVerdict(str, Enum):
    SUITABLE = "suitable"


# Changed factor per shift type; the complementary factor is the one expected to stay invariant.
CHANGED_FACTOR = {
    ShiftType.POPULATION: Factor.P_Z,
    ShiftType.ANNOTATION: Factor.P_Y_GIVEN_X,
    ShiftType.PREVALENCE: Factor.P_Y,
    ShiftType.MANIFESTATION: Factor.P_Z_GIVEN_Y,
    ShiftType.ACQUISITION: Factor.P_X_GIVEN_Z,
    ShiftType.UNCLASSIFIED: Factor.OTHER,
}


@dataclass(frozen=True)
class PredictiveDirection:
    direction: Direction
    evidence_path: tuple[str, ...] | None = None    # directed path, causal/anticausal only
    common_ancestor: str | None = None               # confounded only

    @property
    def evidence(self) -> str | None:
        if self.evidence_path:
            return " -> ".join(self.evidence_path)
        return self.common_ancestor

    @property
    def anticausal_like(self) -> bool:
        return self.direction in (Direction.ANTICAUSAL, Direction.CONFOUNDED)


@dataclass(frozen=True)
class ShiftFinding:
    shift_type: ShiftType
    domain_node: str
    mechanism_edge: Edge
    changed_factor: Factor
    transportable: bool
    via: str | None = None              # role node reached from a non-role head
    affects_image: bool = False
    affects_target: bool = False
    caveats: tuple[str, ...] = ()

    @property
    def ref(self) -> str:
        return f"shift:{self.mechanism_edge.source}->{self.mechanism_edge.target}"


@dataclass(frozen=True)
class SelectionFinding:
    selection_node: str
    selection_type: SelectionType
    recoverable_predictive_relation: bool
    induced_bias: InducedBias
    parents: tuple[str, ...] = ()
    caveats: tuple[str, ...] = ()

    @property
    def ref(self) -> str:
        return f"selection:{self.selection_node}"


@dataclass(frozen=True)
class PlanItem:
    finding: str                        # ShiftFinding.ref / SelectionFinding.ref
    strategy: Strategy
    weight_formula: str | None = None
    alternatives: tuple[Strategy, ...] = ()
    caveats: tuple[str, ...] = ()


@dataclass(frozen=True)
class CorrectionPlan:
    items: tuple[PlanItem, ...] = ()

    def __len__(self) -> int:
        return len(self.items)

    def for_finding(self, ref: str) -> PlanItem | None:
        return next((item for item in self.items if item.finding == ref), None)


@dataclass(frozen=True)
class Advisory:
    ssl: SslVerdict
    ssl_rationale: str
    augmentation: AugmentationVerdict
    augmentation_note: str
