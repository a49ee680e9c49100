####################################################################################################
#                                            report.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: The analysis report bundle, its six-step study checklist and the exit-status contract. #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

# own
from shiftdiag.bn.verification import VerificationReport
from shiftdiag.core.diagram import CausalDiagram, NodeKind
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS, AnalysisSettings
from shiftdiag.taxonomy.types import (Advisory, CorrectionPlan, Direction, PredictiveDirection, SelectionFinding,
                                      SelectionType, ShiftFinding, ShiftType)

SCHEMA_VERSION = "1"

STEP_TITLES = (
    "Gather meta-information about the data collection and annotation processes to reconstruct the full "
    "story of the dataset",
    "Establish the predictive causal direction: does the image cause the prediction target or vice versa?",
    "Identify any evidence of mismatch between datasets",
    "Verify what types of differences in acquisition are expected, if any.",
    "Determine whether the data collection was biased with respect to the population of interest, and "
    "whether selection was based on the images, the targets, or both",
    "Draw the full causal diagram including postulated direction, shifts, and selections.",
)

META_ATTRIBUTES = {
    "causal direction": ("field of application", "task category", "annotation method",
                         "nature of annotations", "annotation reliability"),
    "data mismatch": ("cohort characteristics", "subject selection", "acquisition conditions",
                      "train-test split", "annotation process"),
}


class ExitStatus(IntEnum):
    CLEAN = 0
    ATTENTION = 1
    INPUT_ERROR = 2


class StepStatus(str, Enum):
    SATISFIED = "satisfied"
    ATTENTION = "attention"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class ChecklistStep:
    number: int
    title: str
    status: StepStatus
    note: str


@dataclass(frozen=True)
class AnalysisReport:
    diagram: CausalDiagram
    direction: PredictiveDirection
    shifts: tuple[ShiftFinding, ...]
    selections: tuple[SelectionFinding, ...]
    plan: CorrectionPlan
    advisory: Advisory
    checklist: tuple[ChecklistStep, ...]
    verification: VerificationReport | None = None
    settings: AnalysisSettings = DEFAULT_SETTINGS

    @property
    def summary(self) -> dict:
        return self.diagram.summary()

    @property
    def exit_status(self) -> ExitStatus:
        return exit_status(self)


def exit_status(report: AnalysisReport) -> ExitStatus:
    """ATTENTION for any shift, any non-random selection or any unconfirmed verification check."""
    if report.shifts:
        return ExitStatus.ATTENTION
    if any(s.selection_type is not SelectionType.RANDOM for s in report.selections):
        return ExitStatus.ATTENTION
    if report.verification is not None and not report.verification.ok:
        return ExitStatus.ATTENTION
    return ExitStatus.CLEAN


def build_checklist(diagram: CausalDiagram, direction: PredictiveDirection,
                    shifts: tuple[ShiftFinding, ...], selections: tuple[SelectionFinding, ...]) -> tuple[ChecklistStep, ...]:
    has_domain = bool(diagram.nodes_of_kind(NodeKind.DOMAIN))
    steps = []

    prompt = "; ".join(f"{group}: {', '.join(attrs)}" for group, attrs in META_ATTRIBUTES.items())
    steps.append((StepStatus.NOT_APPLICABLE,
                  f"Cannot be automated. Record the dataset's meta-information ({prompt})."))

    if direction.direction in (Direction.CAUSAL, Direction.ANTICAUSAL):
        steps.append((StepStatus.SATISFIED, f"{direction.direction.value} ({direction.evidence})"))
    elif direction.direction is Direction.CONFOUNDED:
        steps.append((StepStatus.ATTENTION,
                      f"confounded through '{direction.common_ancestor}'; treated like the anticausal case"))
    else:
        steps.append((StepStatus.ATTENTION, "no directed or confounding path between image and target"))

    mismatch = [s for s in shifts if s.shift_type is not ShiftType.ACQUISITION]
    acquisition = [s for s in shifts if s.shift_type is ShiftType.ACQUISITION]
    for found, what in ((mismatch, "dataset mismatch"), (acquisition, "acquisition difference")):
        if found:
            listed = ", ".join(f"{s.shift_type.value} ({s.mechanism_edge})" for s in found)
            steps.append((StepStatus.ATTENTION, f"{len(found)} {what}(s): {listed}"))
        elif has_domain:
            steps.append((StepStatus.SATISFIED, f"no {what} implied by the domain indicators"))
        else:
            steps.append((StepStatus.NOT_APPLICABLE, "the diagram has no domain indicator"))

    if not selections:
        steps.append((StepStatus.NOT_APPLICABLE, "the diagram has no selection node"))
    elif all(s.selection_type is SelectionType.RANDOM for s in selections):
        steps.append((StepStatus.SATISFIED, "selection is random"))
    else:
        listed = ", ".join(f"{s.selection_node}: {s.selection_type.value}" for s in selections)
        steps.append((StepStatus.ATTENTION, f"biased selection ({listed})"))

    steps.append((StepStatus.SATISFIED, "full diagram exported as DOT"))
    return tuple(ChecklistStep(i, title, status, note)
                 for i, (title, (status, note)) in enumerate(zip(STEP_TITLES, steps), start=1))
