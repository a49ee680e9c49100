####################################################################################################
#                                           sampling.py                                            #
####################################################################################################
#                                                                                                  #
# Purpose: Seeded ancestral sampling with rejection for evidence. One numpy Generator per call,   #
#          consumed in topological order one batch at a time, so (model, n, seed, evidence)       #
#          always yields the same dataset.                                                        #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping

import numpy as np
import pandas as pd

# own
from shiftdiag.bn.inference import evidence_probability
from shiftdiag.bn.model import BNModel
from shiftdiag.core.errors import InferenceError
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS, AnalysisSettings

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64


def _draw(model: BNModel, rng: np.random.Generator, size: int) -> dict[str, np.ndarray]:
    """State indices of ``size`` ancestral draws, per node."""
    codes: dict[str, np.ndarray] = {}
    for node in model.order:
        cpt = model.cpt(node)
        rows = cpt.table[tuple(codes[p] for p in cpt.parents)] if cpt.parents \
            else np.broadcast_to(cpt.table, (size, cpt.table.shape[-1]))
        cum = np.cumsum(rows, axis=1)
        u = rng.random(size)
        idx = (u[:, None] >= cum[:, :-1]).sum(axis=1)
        codes[node] = idx
    return codes


def sample(model: BNModel, n: int, seed: int, evidence: Mapping[str, str] | None = None,
           settings: AnalysisSettings = DEFAULT_SETTINGS) -> pd.DataFrame:
    """Draw ``n`` complete assignments; columns follow the topological order.

    Raises:
        InferenceError: INVALID_ARGUMENT, ZERO_PROBABILITY_EVIDENCE or REJECTION_TOO_SLOW.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InferenceError(f"sample size must be a positive integer, got {n!r}", "INVALID_ARGUMENT")
    if not isinstance(seed, (int, np.integer)) or not 0 <= seed < MAX_SEED:
        raise InferenceError(f"seed must be an integer in [0, 2^64), got {seed!r}", "INVALID_ARGUMENT")
    evidence = dict(evidence or {})
    if evidence and evidence_probability(model, evidence) <= 0.0:
        raise InferenceError(f"evidence {evidence} has probability zero", "ZERO_PROBABILITY_EVIDENCE")
    wanted = {node: model.variable(node).index(state) for node, state in evidence.items()}

    rng = np.random.default_rng(int(seed))
    if not wanted:
        codes = _draw(model, rng, n)
    else:
        kept: list[dict[str, np.ndarray]] = []
        accepted = drawn = 0
        while accepted < n:
            batch = _draw(model, rng, settings.rejection_probe)
            mask = np.ones(settings.rejection_probe, dtype=bool)
            for node, i in wanted.items():
                mask &= batch[node] == i
            drawn += settings.rejection_probe
            accepted += int(mask.sum())
            if drawn == settings.rejection_probe and accepted / drawn < settings.min_acceptance:
                raise InferenceError(
                    f"rejection sampling accepted {accepted} of {drawn} draws "
                    f"(rate below {settings.min_acceptance})", "REJECTION_TOO_SLOW")
            kept.append({node: values[mask] for node, values in batch.items()})
        codes = {node: np.concatenate([k[node] for k in kept])[:n] for node in model.order}
        logger.info("rejection sampling: %d accepted of %d draws", accepted, drawn)

    return pd.DataFrame({node: np.asarray(model.states(node), dtype=object)[codes[node]]
                         for node in model.order})


def dataset_to_csv(dataset: pd.DataFrame, path: str | Path | None = None) -> str:
    """CSV text (header = node ids, one state name per cell, LF endings); also written to ``path``."""
    text = dataset.to_csv(index=False, lineterminator="\n")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def empirical_distribution(dataset: pd.DataFrame, node: str, states: tuple[str, ...]) -> np.ndarray:
    """Relative frequency of each state of ``node``, in ``states`` order."""
    counts = dataset[node].value_counts()
    return np.array([counts.get(s, 0) for s in states], dtype=float) / len(dataset)
