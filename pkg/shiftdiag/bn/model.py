####################################################################################################
#                                             model.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: Discrete Bayesian network over a causal diagram. Every node gets a categorical state    #
#          space and a conditional probability table stored as a numpy array shaped               #
#          ``(|pa_1|, ..., |pa_k|, |node|)``. The full joint is the product of the CPTs, built     #
#          once by broadcasting in topological order and cached on the (immutable) model.         #
#                                                                                                  #
####################################################################################################


#*************#
#   imports   #
#*************#
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping, Sequence

import numpy as np

# own
from shiftdiag.core.diagram import CausalDiagram, NodeKind
from shiftdiag.core.errors import InferenceError, ModelSpecError
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS, AnalysisSettings

logger = logging.getLogger(__name__)

DOMAIN_STATES = ("train", "test")
SELECTION_STATES = ("out", "in")


@dataclass(frozen=True)
class VariableSpec:
    node: str
    states: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) < 2:
            raise ModelSpecError(f"variable '{self.node}' needs at least two states", "INVALID_STATES")
        if len(set(self.states)) != len(self.states):
            raise ModelSpecError(f"variable '{self.node}' lists a state twice", "INVALID_STATES")

    @property
    def cardinality(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise InferenceError(
                f"unknown state '{state}' for '{self.node}' (states: {', '.join(self.states)})",
                "UNKNOWN_STATE") from None


@dataclass(frozen=True, eq=False)
class CPT:
    node: str
    parents: tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        table = np.array(self.table, dtype=float)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def row(self, parent_indices: Sequence[int]) -> np.ndarray:
        return self.table[tuple(parent_indices)]


#**************************************************************************************************#
#                                             BNModel                                              #
#**************************************************************************************************#
@dataclass(frozen=True, eq=False)
class BNModel:
    diagram: CausalDiagram
    variables: tuple[VariableSpec, ...]
    cpts: tuple[CPT, ...]

    @cached_property
    def order(self) -> tuple[str, ...]:
        return self.diagram.topological_order()

    @cached_property
    def _variables(self) -> dict[str, VariableSpec]:
        return {v.node: v for v in self.variables}

    @cached_property
    def _cpts(self) -> dict[str, CPT]:
        return {c.node: c for c in self.cpts}

    @cached_property
    def axis(self) -> dict[str, int]:
        """Axis of each node in :attr:`joint`."""
        return {node: i for i, node in enumerate(self.order)}

    def variable(self, node: str) -> VariableSpec:
        try:
            return self._variables[node]
        except KeyError:
            raise InferenceError(f"unknown variable '{node}'", "UNKNOWN_NODE") from None

    def cpt(self, node: str) -> CPT:
        self.variable(node)
        return self._cpts[node]

    def states(self, node: str) -> tuple[str, ...]:
        return self.variable(node).states

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(self._variables[n].cardinality for n in self.order)

    @property
    def state_space_size(self) -> int:
        return math.prod(self.cardinalities)

    @cached_property
    def joint(self) -> np.ndarray:
        """Full joint tensor, one axis per node in topological order."""
        cards = self.cardinalities
        joint = np.ones(cards, dtype=float)
        for node in self.order:
            cpt = self._cpts[node]
            axes = [self.axis[p] for p in cpt.parents] + [self.axis[node]]
            perm = np.argsort(axes)
            shape = [1] * len(cards)
            for a in axes:
                shape[a] = cards[a]
            joint = joint * np.transpose(cpt.table, perm).reshape(shape)
        joint.setflags(write=False)
        return joint

    def factor_product(self, assignment: Mapping[str, str]) -> float:
        """Product of CPT lookups for one complete assignment."""
        out = 1.0
        for node in self.order:
            cpt = self._cpts[node]
            idx = [self._variables[p].index(assignment[p]) for p in cpt.parents]
            out *= float(cpt.row(idx)[self._variables[node].index(assignment[node])])
        return out

    def assignments(self):
        """Every complete assignment, as ``{node: state}``, in joint (C) order."""
        spaces = [self._variables[n].states for n in self.order]
        for combo in itertools.product(*spaces):
            yield dict(zip(self.order, combo))


# ----------------------------- construction ----------------------------------

def _check_states(diagram: CausalDiagram, spec: VariableSpec) -> None:
    kind = diagram.node(spec.node).kind
    expected = {NodeKind.DOMAIN: DOMAIN_STATES, NodeKind.SELECTION: SELECTION_STATES}.get(kind)
    if expected is not None and spec.states != expected:
        raise ModelSpecError(
            f"{kind.value} node '{spec.node}' must have states {', '.join(expected)} (in this order)",
            "INVALID_STATES")


def _row_label(cpt: CPT, variables: Mapping[str, VariableSpec], index: tuple[int, ...]) -> str:
    if not cpt.parents:
        return "(no parents)"
    return ", ".join(f"{p}={variables[p].states[i]}" for p, i in zip(cpt.parents, index))


def _check_cpt(cpt: CPT, variables: Mapping[str, VariableSpec], tolerance: float) -> None:
    expected = tuple(variables[p].cardinality for p in cpt.parents) + (variables[cpt.node].cardinality,)
    if cpt.table.shape != expected:
        raise ModelSpecError(f"CPT of '{cpt.node}' has shape {cpt.table.shape}, expected {expected}",
                             "TABLE_SHAPE")
    if not np.all(np.isfinite(cpt.table)) or np.any(cpt.table < 0.0) or np.any(cpt.table > 1.0):
        raise ModelSpecError(f"CPT of '{cpt.node}' has a probability outside [0, 1]", "INVALID_PROBABILITY")
    for index in np.ndindex(*expected[:-1]):
        total = math.fsum(cpt.table[index].tolist())
        if abs(total - 1.0) > tolerance:
            raise ModelSpecError(
                f"CPT row of '{cpt.node}' for {_row_label(cpt, variables, index)} sums to {total!r}, not 1",
                "ROW_NOT_NORMALIZED")


def build_model(diagram: CausalDiagram, states: Mapping[str, Sequence[str]],
                tables: Mapping[str, Any], settings: AnalysisSettings = DEFAULT_SETTINGS) -> BNModel:
    """Validated model from state lists and CPTs.

    ``tables[node]`` is either a :class:`CPT` or an array whose parent axes follow the
    sorted parent ids of ``node``.
    """
    for node in states:
        if node not in diagram:
            raise ModelSpecError(f"variable '{node}' is not a node of diagram '{diagram.name}'", "UNKNOWN_NODE")
    for node in tables:
        if node not in diagram:
            raise ModelSpecError(f"CPT for '{node}' does not match a node of diagram '{diagram.name}'",
                                 "UNKNOWN_NODE")

    variables: dict[str, VariableSpec] = {}
    for node in diagram.topological_order():
        if node not in states:
            raise ModelSpecError(f"no states declared for node '{node}'", "MISSING_VARIABLE")
        spec = VariableSpec(node, tuple(states[node]))
        _check_states(diagram, spec)
        variables[node] = spec

    size = math.prod(v.cardinality for v in variables.values())
    if size > settings.max_joint_states:
        raise ModelSpecError(f"joint state space has {size} states (limit {settings.max_joint_states})",
                             "STATE_SPACE_TOO_LARGE")

    cpts = []
    for node in diagram.topological_order():
        if node not in tables:
            raise ModelSpecError(f"no CPT for node '{node}'", "MISSING_CPT")
        value = tables[node]
        cpt = value if isinstance(value, CPT) else CPT(node, tuple(sorted(diagram.parents(node))), value)
        if set(cpt.parents) != diagram.parents(node) or len(set(cpt.parents)) != len(cpt.parents):
            raise ModelSpecError(
                f"CPT of '{node}' is given {', '.join(cpt.parents) or 'no parents'} but the diagram has "
                f"{', '.join(sorted(diagram.parents(node))) or 'no parents'}", "PARENT_MISMATCH")
        _check_cpt(cpt, variables, settings.row_tolerance)
        cpts.append(cpt)

    logger.info("model for '%s': %d variables, %d joint states", diagram.name, len(variables), size)
    return BNModel(diagram, tuple(variables.values()), tuple(cpts))
