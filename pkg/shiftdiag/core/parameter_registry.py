####################################################################################################
#                                       parameter_registry.py                                      #
####################################################################################################
#                                                                                                  #
# Purpose: Centralized registry of every tunable used by the analysis and verification pipeline,  #
#          with a human-readable description, units, typical range and default. Used by:           #
#            - __main__.py to fill the ``--help`` text of the flags that override a setting        #
#            - core/exporters.py to echo the settings used into the JSON report                    #
#                                                                                                  #
#          There is no environment-variable configuration: the defaults below are overridden only  #
#          by explicit CLI flags (or by constructing ``AnalysisSettings`` in library code).        #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any


@dataclass(frozen=True)
class ParamInfo:
    label: str                      # short display name
    description: str                # help body
    default: Any = None
    units: str = ""                 # e.g. "nats", "paths", "states"
    typical: str = ""               # e.g. "1e-9", "16 - 64"
    aliases: tuple = field(default_factory=tuple)
    cli_flag: str = ""              # flag overriding the default, if any


# ---- Registry ---------------------------------------------------------------
# Keyed by the AnalysisSettings field name.

REGISTRY: dict[str, ParamInfo] = {
    # --- Graph engine --------------------------------------------------------
    "witness_cap": ParamInfo(
        label="Witness cap",
        description=(
            "Maximum number of open paths reported as witnesses for a d-connected "
            "query. Enumeration stops at the cap and the result is flagged truncated."
        ),
        default=16,
        units="paths",
        typical="4 - 64",
    ),
    "max_conditioning": ParamInfo(
        label="Maximum conditioning-set size",
        description=(
            "Largest observed-node conditioning set enumerated when listing the "
            "independencies implied by a diagram."
        ),
        default=2,
        units="nodes",
        typical="0 - 3",
        cli_flag="--max-cond",
    ),

    # --- Exact verification --------------------------------------------------
    "exact_tolerance": ParamInfo(
        label="Exact-identity tolerance",
        description=(
            "Absolute tolerance for identities checked by full enumeration: "
            "conditional mutual information of d-separated triples, invariant "
            "factors across domains, recoverability and reweighted risks."
        ),
        default=1e-9,
        typical="1e-12 - 1e-9",
        aliases=("eps",),
    ),
    "row_tolerance": ParamInfo(
        label="CPT row tolerance",
        description="Maximum deviation from 1 accepted for a CPT row sum. Rows are checked, never renormalized.",
        default=1e-12,
        typical="1e-12",
    ),
    "shift_delta": ParamInfo(
        label="Shift magnitude (delta)",
        description=(
            "Minimum total-variation distance the factor flagged as changed must "
            "exhibit between the train and test domains of a verification model."
        ),
        default=0.05,
        units="TV",
        typical="0.01 - 0.2",
        aliases=("delta",),
        cli_flag="--delta",
    ),

    # --- Enumeration / sampling ----------------------------------------------
    "max_joint_states": ParamInfo(
        label="Joint state-space cap",
        description="Largest joint state space accepted for exact enumeration (product of all variable cardinalities).",
        default=2 ** 20,
        units="states",
        typical="2^20",
    ),
    "mc_tolerance": ParamInfo(
        label="Monte Carlo tolerance",
        description="Total-variation tolerance between empirical marginals of a seeded sample and the exact marginals.",
        default=0.01,
        units="TV",
        typical="0.01 at n = 1e5",
    ),
    "rejection_probe": ParamInfo(
        label="Rejection probe size",
        description="Number of ancestral draws after which the rejection-sampling acceptance rate is checked.",
        default=100_000,
        units="draws",
        typical="1e5",
    ),
    "min_acceptance": ParamInfo(
        label="Minimum acceptance rate",
        description="Rejection sampling aborts with REJECTION_TOO_SLOW when the probe's acceptance rate is below this.",
        default=1e-4,
        typical="1e-4",
    ),
}


# ----------- settings --------------------------------------------------------

@dataclass(frozen=True)
class AnalysisSettings:
    witness_cap: int = REGISTRY["witness_cap"].default
    max_conditioning: int = REGISTRY["max_conditioning"].default
    exact_tolerance: float = REGISTRY["exact_tolerance"].default
    row_tolerance: float = REGISTRY["row_tolerance"].default
    shift_delta: float = REGISTRY["shift_delta"].default
    max_joint_states: int = REGISTRY["max_joint_states"].default
    mc_tolerance: float = REGISTRY["mc_tolerance"].default
    rejection_probe: int = REGISTRY["rejection_probe"].default
    min_acceptance: float = REGISTRY["min_acceptance"].default

    def __post_init__(self):
        if self.witness_cap < 1:
            raise ValueError(f"witness_cap must be >= 1, got {self.witness_cap}")
        if self.max_conditioning < 0:
            raise ValueError(f"max_conditioning must be >= 0, got {self.max_conditioning}")
        if not 0.0 <= self.shift_delta <= 1.0:
            raise ValueError(f"shift_delta must lie in [0, 1], got {self.shift_delta}")

    def override(self, **changes) -> "AnalysisSettings":
        """Return a copy with the non-None ``changes`` applied (CLI flags)."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_SETTINGS = AnalysisSettings()


# ----------- helpers ---------------------------------------------------------

def get(param: str) -> ParamInfo:
    """Return the registry entry for ``param`` (aliases accepted)."""
    if param in REGISTRY:
        return REGISTRY[param]
    for key, info in REGISTRY.items():
        if param in info.aliases:
            return REGISTRY[key]
    raise KeyError(f"no registry entry for '{param}'")


def help_text(param: str) -> str:
    """One-paragraph help string suitable for argparse."""
    info = get(param)
    parts = [info.description]
    meta = [f"default: {info.default}"]
    if info.units:
        meta.append(f"units: {info.units}")
    if info.typical:
        meta.append(f"typical: {info.typical}")
    parts.append(f"({', '.join(meta)})")
    # argparse %-formats help strings
    return " ".join(parts).replace("%", "%%")


def cli_settings() -> dict[str, str]:
    """Setting name -> command-line flag, for the entries that have one."""
    return {k: v.cli_flag for k, v in REGISTRY.items() if v.cli_flag}


def to_dict() -> dict[str, dict[str, Any]]:
    """Serialisable form of the registry."""
    return {k: asdict(v) for k, v in REGISTRY.items()}
