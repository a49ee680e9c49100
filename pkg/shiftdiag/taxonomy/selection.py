####################################################################################################
#                                           selection.py                                           #
####################################################################################################
#                                                                                                  #
# Purpose: Sample-selection analysis. Each selection node is typed by what its parents trace back  #
#          to (image, target, both, neither), checked for recoverability of P(Y|X) via             #
#          d-separation of S and the target given the image, and mapped to the bias it induces.    #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import logging

# own
from shiftdiag.core.diagram import CausalDiagram, NodeKind
from shiftdiag.graph.dseparation import d_separated
from shiftdiag.taxonomy.direction import require_roles
from shiftdiag.taxonomy.types import InducedBias, SelectionFinding, SelectionType

logger = logging.getLogger(__name__)

INDUCED_BIAS = {
    SelectionType.RANDOM: InducedBias.NONE,
    SelectionType.IMAGE_DEPENDENT: InducedBias.POPULATION_SHIFT_LIKE,
    SelectionType.TARGET_DEPENDENT: InducedBias.PREVALENCE_SHIFT_LIKE,
    SelectionType.JOINT_DEPENDENT: InducedBias.SPURIOUS_ASSOCIATION,
}


def traces_to(diagram: CausalDiagram, parent: str, role_node: str, other_role: str) -> bool:
    """True if ``parent`` is ``role_node`` or descends from it without passing through ``other_role``."""
    if parent == role_node:
        return True
    if parent == other_role:
        return False
    return diagram.has_directed_path(role_node, parent, avoid=[other_role])


def classify_selection(diagram: CausalDiagram, parents: list[str], image: str, target: str) -> SelectionType:
    if not parents:
        return SelectionType.RANDOM
    to_image = [traces_to(diagram, p, image, target) for p in parents]
    to_target = [traces_to(diagram, p, target, image) for p in parents]
    if not all(i or t for i, t in zip(to_image, to_target)):
        return SelectionType.OTHER_DEPENDENT
    if any(to_image) and any(to_target):
        return SelectionType.JOINT_DEPENDENT
    return SelectionType.IMAGE_DEPENDENT if any(to_image) else SelectionType.TARGET_DEPENDENT


def analyze_selection(diagram: CausalDiagram) -> list[SelectionFinding]:
    """One finding per selection node, in id order; empty when there is none."""
    selections = sorted(diagram.nodes_of_kind(NodeKind.SELECTION))
    if not selections:
        return []
    image, target = require_roles(diagram)

    findings = []
    for node in selections:
        parents = sorted(diagram.parents(node))
        kind = classify_selection(diagram, parents, image, target)
        recoverable = d_separated(diagram, {node}, {target}, {image}).separated
        if kind is SelectionType.OTHER_DEPENDENT:
            bias = InducedBias.POPULATION_SHIFT_LIKE if recoverable else InducedBias.SPURIOUS_ASSOCIATION
        else:
            bias = INDUCED_BIAS[kind]

        caveats = []
        if kind is SelectionType.RANDOM:
            caveats.append("Selection is independent of every variable; the sample is representative.")
        elif recoverable:
            caveats.append("P(Y|X) is directly recoverable from the selected sample: S is independent of the "
                           "target given the image.")
        else:
            caveats.append("P(Y|X) is not recoverable from the selected sample: conditioning on S opens a path "
                           "between the image and the target.")
        if kind is SelectionType.IMAGE_DEPENDENT:
            caveats.append("Selection on image quality (QC) would induce acquisition shift instead; the diagram "
                           "does not distinguish the two.")
        findings.append(SelectionFinding(node, kind, recoverable, bias, tuple(parents), tuple(caveats)))
        logger.info("selection %s: %s (recoverable=%s)", node, kind.value, recoverable)
    return findings
