####################################################################################################
#                                           inference.py                                           #
####################################################################################################
#                                                                                                  #
# Purpose: Exact inference by enumeration over the cached joint tensor: conditional queries,       #
#          conditional tables with their support, and conditional mutual information.             #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import rel_entr

# own
from shiftdiag.bn.model import BNModel
from shiftdiag.core.errors import InferenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Normalized table over ``variables``; axis ``i`` enumerates ``states[i]``."""

    variables: tuple[str, ...]
    states: tuple[tuple[str, ...], ...]
    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.shape != tuple(len(s) for s in self.states) or len(self.states) != len(self.variables):
            raise ValueError("distribution table does not match its state spaces")
        if np.any(table < 0.0):
            raise ValueError("distribution has negative mass")
        total = table.sum()
        if total <= 0.0:
            raise ValueError("distribution has zero total mass")
        table = table / total
        table.setflags(write=False)
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "states", tuple(tuple(s) for s in self.states))
        object.__setattr__(self, "table", table)

    def probability(self, assignment: Mapping[str, str] | None = None, **states: str) -> float:
        """Probability of a (possibly partial) assignment, e.g. ``dist.probability(Y="1")``."""
        assignment = {**(assignment or {}), **states}
        index = []
        for var, options in zip(self.variables, self.states):
            if var in assignment:
                if assignment[var] not in options:
                    raise InferenceError(f"unknown state '{assignment[var]}' for '{var}'", "UNKNOWN_STATE")
                index.append(options.index(assignment[var]))
            else:
                index.append(slice(None))
        unknown = set(assignment) - set(self.variables)
        if unknown:
            raise InferenceError(f"distribution has no variable(s) {', '.join(sorted(unknown))}", "UNKNOWN_NODE")
        return float(np.sum(self.table[tuple(index)]))

    def as_dict(self) -> dict[tuple[str, ...], float]:
        return {combo: float(self.table[idx])
                for idx, combo in zip(np.ndindex(*self.table.shape), itertools.product(*self.states))}

    def total_variation(self, other: "Distribution") -> float:
        if self.variables != other.variables or self.states != other.states:
            raise ValueError("total variation needs distributions over the same variables and states")
        return 0.5 * float(np.abs(self.table - other.table).sum())

    def __repr__(self) -> str:
        return f"Distribution({', '.join(self.variables)})"


# ----------------------------- helpers ---------------------------------------

def _as_list(nodes: str | Iterable[str], model: BNModel) -> list[str]:
    if isinstance(nodes, str):
        return [nodes]
    if isinstance(nodes, (set, frozenset)):
        return sorted(nodes, key=lambda n: model.axis.get(n, -1))
    return list(nodes)


def _validate(model: BNModel, targets: Sequence[str], evidence: Mapping[str, str]) -> dict[str, int]:
    for node in list(targets) + list(evidence):
        model.variable(node)
    if len(set(targets)) != len(targets):
        raise InferenceError("query targets repeat a variable", "OVERLAPPING_SETS")
    shared = set(targets) & set(evidence)
    if shared:
        raise InferenceError(f"targets and evidence share {', '.join(sorted(shared))}", "OVERLAPPING_SETS")
    return {node: model.variable(node).index(state) for node, state in evidence.items()}


def _restricted(model: BNModel, evidence_idx: Mapping[str, int]) -> np.ndarray:
    index: list = [slice(None)] * len(model.order)
    for node, i in evidence_idx.items():
        index[model.axis[node]] = slice(i, i + 1)
    return model.joint[tuple(index)]


def evidence_probability(model: BNModel, evidence: Mapping[str, str]) -> float:
    idx = _validate(model, [], evidence)
    return float(_restricted(model, idx).sum())


def marginal_table(model: BNModel, targets: Sequence[str], evidence: Mapping[str, str] | None = None) -> np.ndarray:
    """Unnormalized ``P(targets, evidence)`` with axes in ``targets`` order."""
    evidence = dict(evidence or {})
    idx = _validate(model, targets, evidence)
    sub = _restricted(model, idx)
    keep = [model.axis[t] for t in targets]
    summed = sub.sum(axis=tuple(a for a in range(sub.ndim) if a not in keep))
    # remaining axes are in joint order; move them to the requested order
    return np.transpose(summed, np.argsort(np.argsort(keep))) if keep else summed


# ----------------------------- operations ------------------------------------

def query(model: BNModel, targets: str | Iterable[str],
          evidence: Mapping[str, str] | None = None) -> Distribution:
    """Exact ``P(targets | evidence)``.

    Raises:
        InferenceError: ZERO_PROBABILITY_EVIDENCE, UNKNOWN_STATE, UNKNOWN_NODE or OVERLAPPING_SETS.
    """
    targets = _as_list(targets, model)
    if not targets:
        raise InferenceError("query needs at least one target", "INVALID_ARGUMENT")
    evidence = dict(evidence or {})
    table = marginal_table(model, targets, evidence)
    if table.sum() <= 0.0:
        raise InferenceError(f"evidence {evidence} has probability zero", "ZERO_PROBABILITY_EVIDENCE")
    return Distribution(tuple(targets), tuple(model.states(t) for t in targets), table)


def conditional_table(model: BNModel, targets: Sequence[str], given: Sequence[str],
                      evidence: Mapping[str, str] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``P(targets | given, evidence)`` flattened to ``(given states, target states)``.

    Returns the table and a boolean support mask over the conditioning states; rows
    outside the support are NaN.
    """
    table = marginal_table(model, list(given) + list(targets), evidence)
    n_given = int(np.prod([len(model.states(g)) for g in given])) if given else 1
    table = table.reshape(n_given, -1)
    mass = table.sum(axis=1)
    support = mass > 0.0
    out = np.full_like(table, np.nan)
    out[support] = table[support] / mass[support, None]
    return out, support


def conditional_mutual_information(model: BNModel, a: str, b: str, given: Iterable[str] = ()) -> float:
    """Exact ``I(a; b | given)`` in nats, clamped at zero."""
    given = _as_list(given, model)
    if a == b or a in given or b in given:
        raise InferenceError("conditional mutual information needs distinct a, b outside the conditioning set",
                             "OVERLAPPING_SETS")
    p = query(model, [a, b] + given).table
    p_ac = p.sum(axis=1, keepdims=True)
    p_bc = p.sum(axis=0, keepdims=True)
    p_c = p.sum(axis=(0, 1), keepdims=True)
    denom = np.broadcast_to(p_c, p.shape)
    q = np.divide(p_ac * p_bc, denom, out=np.zeros_like(p), where=denom > 0.0)
    return max(0.0, float(rel_entr(p, q).sum()))
