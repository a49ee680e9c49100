####################################################################################################
#                                            shifts.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: Dataset-shift detection. Every edge leaving a domain indicator is one mechanism that    #
#          differs between training and test environments; it is classified by the role of its   #
#          head node and the predictive direction:                                                 #
#                                                                                                  #
#              head        causal          anticausal / confounded                                 #
#              anatomy     population      manifestation                                           #
#              image       acquisition     acquisition                                             #
#              target      annotation      prevalence                                              #
#                                                                                                  #
#          Heads without a role are traced to the role node(s) they influence.                     #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import logging

# own
from shiftdiag.core.diagram import CausalDiagram, Edge, NodeKind, NodeRole
from shiftdiag.taxonomy.direction import classify_direction
from shiftdiag.taxonomy.types import CHANGED_FACTOR, Direction, PredictiveDirection, ShiftFinding, ShiftType

logger = logging.getLogger(__name__)

CAVEATS = {
    ShiftType.POPULATION: "Population and manifestation shift are told apart by the predictive direction only; "
                          "with both image-side and target-side structure, either reading may apply.",
    ShiftType.MANIFESTATION: "Population and manifestation shift are told apart by the predictive direction only; "
                             "with both image-side and target-side structure, either reading may apply.",
    ShiftType.ACQUISITION: "Not directly transportable: the image formation P(X|Z) differs between domains.",
    ShiftType.ANNOTATION: "Annotation policy differs between domains; P(Y|X) learned on training data does not "
                          "hold in the test domain.",
    ShiftType.PREVALENCE: "Target prevalence differs between domains; the class-conditional P(X|Y) is expected "
                          "to be stable.",
    ShiftType.UNCLASSIFIED: "Mechanism change outside the shift taxonomy; inspect it manually.",
}


def _anatomy_rule(direction: PredictiveDirection) -> ShiftType:
    if direction.direction is Direction.CAUSAL:
        return ShiftType.POPULATION
    if direction.anticausal_like:
        return ShiftType.MANIFESTATION
    return ShiftType.UNCLASSIFIED


def _target_rule(direction: PredictiveDirection) -> ShiftType:
    if direction.direction is Direction.CAUSAL:
        return ShiftType.ANNOTATION
    if direction.anticausal_like:
        return ShiftType.PREVALENCE
    return ShiftType.UNCLASSIFIED


def classify_mechanism(diagram: CausalDiagram, head: str,
                       direction: PredictiveDirection) -> tuple[ShiftType, str | None]:
    """Shift type of a changed mechanism for ``head``, and the role node it was traced to."""
    node = diagram.node(head)
    image, target, anatomy = diagram.image, diagram.target, diagram.anatomy

    if node.kind is NodeKind.SELECTION:
        return ShiftType.UNCLASSIFIED, None
    if node.role is NodeRole.ANATOMY:
        return _anatomy_rule(direction), None
    if node.role is NodeRole.IMAGE:
        return ShiftType.ACQUISITION, None
    if node.role is NodeRole.TARGET:
        return _target_rule(direction), None

    # ancestor tracing for heads without a role
    below = diagram.descendants(head)
    if anatomy is not None and anatomy in below:
        return _anatomy_rule(direction), anatomy
    if image in below and not diagram.has_directed_path(head, target, avoid=[image]):
        return ShiftType.ACQUISITION, image
    if target in below and not diagram.has_directed_path(head, image, avoid=[target]):
        return _target_rule(direction), target
    return ShiftType.UNCLASSIFIED, None


def detect_dataset_shifts(diagram: CausalDiagram,
                          direction: PredictiveDirection | None = None) -> list[ShiftFinding]:
    """One finding per (domain indicator, outgoing edge), sorted by (domain id, edge)."""
    domains = sorted(diagram.nodes_of_kind(NodeKind.DOMAIN))
    if not domains:
        logger.warning("NO_DOMAIN_NODE: diagram '%s' has no domain indicator; no dataset shift to report",
                       diagram.name)
        return []
    direction = direction or classify_direction(diagram)
    image, target = diagram.image, diagram.target

    findings: list[ShiftFinding] = []
    for domain in domains:
        for head in sorted(diagram.children(domain)):
            shift_type, via = classify_mechanism(diagram, head, direction)
            below = diagram.descendants(head) | {head}
            caveats = [CAVEATS[shift_type]]
            if via is not None:
                caveats.append(f"Classified through '{via}', which '{head}' influences.")
            if diagram.node(head).kind is NodeKind.SELECTION:
                caveats.append("A domain indicator pointing at a selection node is not covered by the taxonomy.")
            if shift_type is ShiftType.UNCLASSIFIED and direction.direction is Direction.UNRELATED:
                caveats.append("The predictive direction is unrelated, so no taxonomy row applies.")
            findings.append(ShiftFinding(
                shift_type=shift_type,
                domain_node=domain,
                mechanism_edge=Edge(domain, head),
                changed_factor=CHANGED_FACTOR[shift_type],
                transportable=shift_type is ShiftType.POPULATION,
                via=via,
                affects_image=image in below,
                affects_target=target in below,
                caveats=tuple(caveats),
            ))
            logger.info("shift %s -> %s: %s", domain, head, shift_type.value)
    return findings
