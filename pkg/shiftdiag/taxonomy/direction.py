####################################################################################################
#                                           direction.py                                           #
####################################################################################################
#                                                                                                  #
# Purpose: Predictive-direction classification (causal / anticausal / confounded / unrelated)     #
#          and the learning-strategy advisory that follows from it.                                #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import logging

# own
from shiftdiag.core.diagram import CausalDiagram, NodeKind
from shiftdiag.core.errors import MissingRoleError
from shiftdiag.taxonomy.types import Advisory, AugmentationVerdict, Direction, PredictiveDirection, SslVerdict

logger = logging.getLogger(__name__)


def require_roles(diagram: CausalDiagram) -> tuple[str, str]:
    """Return ``(image, target)`` or raise MissingRoleError."""
    missing = [role for role, node in (("image", diagram.image), ("target", diagram.target)) if node is None]
    if missing:
        raise MissingRoleError(f"diagram '{diagram.name}' has no {' or '.join(missing)} role")
    return diagram.image, diagram.target


def classify_direction(diagram: CausalDiagram) -> PredictiveDirection:
    image, target = require_roles(diagram)

    path = diagram.directed_path(image, target)
    if path is not None:
        return PredictiveDirection(Direction.CAUSAL, evidence_path=path)
    path = diagram.directed_path(target, image)
    if path is not None:
        return PredictiveDirection(Direction.ANTICAUSAL, evidence_path=path)

    # domain indicators mark mechanism changes, not common causes
    domains = set(diagram.nodes_of_kind(NodeKind.DOMAIN))
    common = (diagram.ancestors(image) & diagram.ancestors(target)) - domains
    if common:
        return PredictiveDirection(Direction.CONFOUNDED, common_ancestor=min(common))
    return PredictiveDirection(Direction.UNRELATED)


# ----------------------------- advisory --------------------------------------

_SSL_RATIONALE = {
    Direction.CAUSAL: (
        "The image causes the target: by independence of cause and mechanism, the distribution of "
        "unlabelled images carries no information about P(Y|X), so semi-supervised learning is "
        "theoretically futile."
    ),
    Direction.ANTICAUSAL: (
        "The target causes the image: P(X) is informative about P(Y|X), so semi-supervised learning "
        "may help. Beware of a target (prevalence) mismatch between labelled and unlabelled data."
    ),
    Direction.CONFOUNDED: (
        "Image and target share a common cause; this case is treated like the anticausal one, so "
        "semi-supervised learning may help. The analogy is heuristic: check for prevalence mismatch "
        "between labelled and unlabelled data."
    ),
    Direction.UNRELATED: (
        "No directed or confounding connection between image and target: the diagram gives no basis "
        "for judging semi-supervised learning."
    ),
}

_SSL_VERDICT = {
    Direction.CAUSAL: SslVerdict.THEORETICALLY_FUTILE,
    Direction.ANTICAUSAL: SslVerdict.MAY_HELP,
    Direction.CONFOUNDED: SslVerdict.MAY_HELP,
    Direction.UNRELATED: SslVerdict.INDETERMINATE,
}


def advise_learning_strategies(direction: PredictiveDirection) -> Advisory:
    kind = direction.direction
    if kind is Direction.CAUSAL:
        note = ("Augmentation is suitable. For a causal (e.g. segmentation) task, spatial transforms must "
                "be applied equivariantly to the image and its target.")
    else:
        note = ("Augmentation is suitable. For an anticausal (e.g. classification) task, the target must be "
                "invariant to the applied transforms.")
    return Advisory(_SSL_VERDICT[kind], _SSL_RATIONALE[kind], AugmentationVerdict.SUITABLE, note)
