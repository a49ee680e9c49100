####################################################################################################
#                                          verification.py                                         #
####################################################################################################
#                                                                                                  #
# Purpose: Check the taxonomy's claims numerically on a model of the analyzed diagram.             #
#                                                                                                  #
#          Check kinds:                                                                            #
#            - invariant_factor    : the factor a shift type leaves alone is identical across      #
#                                    domains (only when the diagram entails it)                    #
#            - changed_factor      : the flagged factor differs by at least ``shift_delta`` (TV)   #
#            - recoverability      : P(Y|X, S=in) against P(Y|X)                                    #
#            - correction_efficacy : the reweighted training risk against the test risk            #
#                                                                                                  #
#          Shift findings compare P(.|D=train) with P(.|D=test); selection findings compare the   #
#          selected sample P(.|S=in) with the full population.                                     #
#                                                                                                  #
####################################################################################################


#*************#
#   imports   #
#*************#
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

# own
from shiftdiag.bn.inference import conditional_table, evidence_probability, marginal_table
from shiftdiag.bn.model import BNModel
from shiftdiag.core.diagram import CausalDiagram
from shiftdiag.core.errors import InferenceError, VerificationError
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS, AnalysisSettings
from shiftdiag.graph.dseparation import d_separated
from shiftdiag.taxonomy.types import (CorrectionPlan, SelectionFinding, ShiftFinding, ShiftType, Strategy)

logger = logging.getLogger(__name__)


class CheckKind(str, Enum):
    INVARIANT_FACTOR = "invariant_factor"
    CHANGED_FACTOR = "changed_factor"
    RECOVERABILITY = "recoverability"
    CORRECTION_EFFICACY = "correction_efficacy"


@dataclass(frozen=True)
class VerificationCheck:
    finding: str
    kind: CheckKind
    claim: str
    measured: float
    threshold: float
    at_least: bool = False          # pass when measured >= threshold (else measured <= threshold)
    expected: bool = True           # what the analysis predicts for this measurement
    uncorrected: float | None = None
    corrected: float | None = None
    note: str | None = None

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.measured):
            return False
        return self.measured >= self.threshold if self.at_least else self.measured <= self.threshold

    @property
    def confirmed(self) -> bool:
        """The measurement agrees with the analysis."""
        return self.passed == self.expected


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[VerificationCheck, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def failed(self) -> tuple[VerificationCheck, ...]:
        return tuple(c for c in self.checks if not c.confirmed)

    @property
    def ok(self) -> bool:
        return not self.failed


# Factors as (targets, given) over the role symbols.
_SYMBOLIC = {
    "P(Z)": (("Z",), ()),
    "P(Y|X)": (("Y",), ("X",)),
    "P(Y)": (("Y",), ()),
    "P(X)": (("X",), ()),
    "P(X|Y)": (("X",), ("Y",)),
    "P(Z|Y)": (("Z",), ("Y",)),
    "P(X|Z)": (("X",), ("Z",)),
}

_INVARIANT = {
    ShiftType.POPULATION: ("P(Y|X)",),
    ShiftType.ANNOTATION: ("P(X)",),
    ShiftType.PREVALENCE: ("P(X|Y)",),
    ShiftType.MANIFESTATION: ("P(Y)",),
    ShiftType.ACQUISITION: ("P(Z)",),
}


def _roles(diagram: CausalDiagram) -> dict[str, str | None]:
    return {"X": diagram.image, "Y": diagram.target, "Z": diagram.anatomy}


def _resolve(symbolic: str, roles: Mapping[str, str | None]) -> tuple[list[str], list[str]] | None:
    targets, given = _SYMBOLIC[symbolic]
    nodes = [roles[s] for s in targets + given]
    if any(n is None for n in nodes):
        return None
    return nodes[:len(targets)], nodes[len(targets):]


def max_conditional_tv(model: BNModel, targets: Sequence[str], given: Sequence[str],
                       evidence_a: Mapping[str, str], evidence_b: Mapping[str, str]) -> float:
    """Largest TV between ``P(targets | given)`` under two evidences, over the shared support."""
    table_a, support_a = conditional_table(model, targets, given, evidence_a)
    table_b, support_b = conditional_table(model, targets, given, evidence_b)
    both = support_a & support_b
    if not both.any():
        return float("nan")
    return float(0.5 * np.abs(table_a[both] - table_b[both]).sum(axis=1).max())


# ----------------------------- individual checks -----------------------------

def _environments(model: BNModel, finding) -> tuple[dict, dict]:
    if isinstance(finding, ShiftFinding):
        return {finding.domain_node: "train"}, {finding.domain_node: "test"}
    return {finding.selection_node: "in"}, {}


def _factor_checks(model: BNModel, finding: ShiftFinding, settings: AnalysisSettings,
                   notes: list[str]) -> list[VerificationCheck]:
    diagram = model.diagram
    roles = _roles(diagram)
    train, test = _environments(model, finding)
    checks = []

    for symbolic in _INVARIANT.get(finding.shift_type, ()):
        if finding.shift_type is ShiftType.ACQUISITION and roles["Z"] is None:
            symbolic = "P(Y|X)" if diagram.directed_path(roles["X"], roles["Y"]) else "P(Y)"
        resolved = _resolve(symbolic, roles)
        if resolved is None:
            notes.append(f"{finding.ref}: {symbolic} needs a node role the diagram does not assign; not checked")
            continue
        targets, given = resolved
        if not d_separated(diagram, {finding.domain_node}, set(targets), set(given)).separated:
            notes.append(f"{finding.ref}: the diagram does not entail an invariant {symbolic}; not checked")
            continue
        checks.append(VerificationCheck(
            finding.ref, CheckKind.INVARIANT_FACTOR, f"{symbolic} is identical across domains",
            max_conditional_tv(model, targets, given, train, test), settings.exact_tolerance))

    symbolic = finding.changed_factor.value
    resolved = _resolve(symbolic, roles) if symbolic in _SYMBOLIC else None
    if resolved is None:
        head = finding.mechanism_edge.target
        given = sorted(diagram.parents(head) - {finding.domain_node})
        resolved = ([head], given)
        symbolic = f"P({head}|{','.join(given)})" if given else f"P({head})"
    targets, given = resolved
    checks.append(VerificationCheck(
        finding.ref, CheckKind.CHANGED_FACTOR, f"{symbolic} differs across domains",
        max_conditional_tv(model, targets, given, train, test), settings.shift_delta, at_least=True))
    return checks


def _recoverability_check(model: BNModel, finding: SelectionFinding,
                          settings: AnalysisSettings) -> VerificationCheck:
    image, target = model.diagram.image, model.diagram.target
    measured = max_conditional_tv(model, [target], [image], {finding.selection_node: "in"}, {})
    return VerificationCheck(
        finding.ref, CheckKind.RECOVERABILITY, "P(Y|X, S=in) equals P(Y|X)", measured, settings.exact_tolerance,
        expected=finding.recoverable_predictive_relation)


def zero_one_loss(model: BNModel, evidence: Mapping[str, str]) -> np.ndarray:
    """0-1 loss of the Bayes predictor argmax_y P(y|x) under ``evidence``, as ``[x, y]``."""
    image, target = model.diagram.image, model.diagram.target
    table, support = conditional_table(model, [target], [image], evidence)
    predict = np.argmax(np.where(np.isnan(table), -1.0, table), axis=1)
    loss = np.ones_like(table)
    loss[np.arange(len(predict)), predict] = 0.0
    return loss


def _efficacy_check(model: BNModel, finding, strategy: Strategy, loss: np.ndarray | None,
                    settings: AnalysisSettings) -> VerificationCheck:
    image, target = model.diagram.image, model.diagram.target
    train, test = _environments(model, finding)
    p_train = marginal_table(model, [image, target], train)
    p_train = p_train / p_train.sum()
    p_test = marginal_table(model, [image, target], test)
    p_test = p_test / p_test.sum()
    loss = zero_one_loss(model, train) if loss is None else np.asarray(loss, dtype=float)
    if loss.shape != p_train.shape:
        raise InferenceError(f"loss table has shape {loss.shape}, expected {p_train.shape}", "INVALID_ARGUMENT")

    axis = 1 if strategy is Strategy.IMPORTANCE_WEIGHT_INPUTS else 0   # marginalize the other variable
    marg_train = p_train.sum(axis=axis)
    marg_test = p_test.sum(axis=axis)
    formula = "p_te(x)/p_tr(x)" if axis == 1 else "p_te(y)/p_tr(y)"
    test_risk = float((p_test * loss).sum())
    train_risk = float((p_train * loss).sum())
    uncorrected = abs(train_risk - test_risk)
    claim = f"training risk reweighted by {formula} equals the test risk"

    if np.any((marg_test > 0.0) & (marg_train <= 0.0)):
        return VerificationCheck(finding.ref, CheckKind.CORRECTION_EFFICACY, claim, float("inf"),
                                 settings.exact_tolerance, uncorrected=uncorrected,
                                 note="the training distribution does not cover the test support")
    weights = np.divide(marg_test, marg_train, out=np.zeros_like(marg_test), where=marg_train > 0.0)
    weighted = p_train * (weights[:, None] if axis == 1 else weights[None, :])
    corrected = abs(float((weighted * loss).sum()) - test_risk)
    return VerificationCheck(finding.ref, CheckKind.CORRECTION_EFFICACY, claim, corrected,
                             settings.exact_tolerance, uncorrected=uncorrected, corrected=corrected)


# ----------------------------- operation -------------------------------------

WEIGHTING = (Strategy.IMPORTANCE_WEIGHT_INPUTS, Strategy.IMPORTANCE_WEIGHT_TARGETS)


def verify_findings(model: BNModel, shifts: Sequence[ShiftFinding], selections: Sequence[SelectionFinding],
                    plan: CorrectionPlan, *, diagram: CausalDiagram | None = None,
                    settings: AnalysisSettings = DEFAULT_SETTINGS,
                    loss: np.ndarray | None = None) -> VerificationReport:
    """Run every applicable check for ``shifts`` and ``selections``.

    Raises:
        VerificationError: the model was not built on the analyzed diagram, or lacks a finding's node.
    """
    if diagram is not None and model.diagram != diagram:
        raise VerificationError(f"model is for diagram '{model.diagram.name}', not the analyzed '{diagram.name}'")
    for node in [f.domain_node for f in shifts] + [f.selection_node for f in selections]:
        if node not in model.diagram:
            raise VerificationError(f"model has no node '{node}' named by a finding")

    checks: list[VerificationCheck] = []
    notes: list[str] = []

    for finding in shifts:
        train, test = _environments(model, finding)
        if evidence_probability(model, train) <= 0.0 or evidence_probability(model, test) <= 0.0:
            notes.append(f"{finding.ref}: a domain has probability zero under the model; not checked")
            continue
        checks.extend(_factor_checks(model, finding, settings, notes))

    for finding in selections:
        if evidence_probability(model, {finding.selection_node: "in"}) <= 0.0:
            notes.append(f"{finding.ref}: S=in has probability zero under the model; not checked")
            continue
        checks.append(_recoverability_check(model, finding, settings))

    findings = {f.ref: f for f in list(shifts) + list(selections)}
    for item in plan.items:
        finding = findings.get(item.finding)
        if finding is None or item.strategy not in WEIGHTING:
            continue
        train, test = _environments(model, finding)
        if evidence_probability(model, train) <= 0.0 or evidence_probability(model, test) <= 0.0:
            continue
        checks.append(_efficacy_check(model, finding, item.strategy, loss, settings))

    report = VerificationReport(tuple(checks), tuple(notes))
    for check in report.failed:
        logger.warning("verification: %s %s not confirmed (measured %.3g)", check.finding, check.kind.value,
                       check.measured)
    return report
