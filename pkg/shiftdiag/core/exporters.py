####################################################################################################
#                                            exporters.py                                          #
####################################################################################################
#                                                                                                  #
# Purpose: Report renderers. ``render_report`` turns an AnalysisReport into one of:                #
#                                                                                                  #
#            - json      canonical (sorted keys, 2-space indent, trailing newline), schema v1     #
#            - markdown  organised by the six checklist steps, DOT source under step 6             #
#                                                                                                  #
#          The JSON echoes every setting from core.parameter_registry that was used, so a report  #
#          can be reproduced from its own content. Output carries no timestamps.                   #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import dataclasses
import json as _json
import math
from enum import Enum
from typing import Any

import numpy as np

# own
from shiftdiag.core.diagram import CausalDiagram, Edge
from shiftdiag.core.report import SCHEMA_VERSION, AnalysisReport, StepStatus
from shiftdiag.dsl.writer import export_dot

SUPPORTED_FORMATS = (
    "json",       # machine-readable, schema_version 1
    "markdown",   # human-readable checklist
)


def render_report(report: AnalysisReport, fmt: str = "json") -> str:
    if fmt not in SUPPORTED_FORMATS:
        raise ValueError(f"Unknown report format '{fmt}'. Supported: {', '.join(SUPPORTED_FORMATS)}")
    if fmt == "json":
        return render_json(report_to_dict(report))
    return _render_markdown(report)


# ----------------------------- JSON ------------------------------------------

def _tool_version() -> str:
    from shiftdiag import __version__
    return __version__


def _diagram_dict(diagram: CausalDiagram) -> dict[str, Any]:
    out = diagram.summary()
    out["nodes"] = [{"id": n.id, "kind": n.kind.value, "role": n.role.value, "label": n.label}
                    for n in diagram.nodes]
    out["edges"] = [_json_safe(e) for e in diagram.edges]
    out["node_count"], out["edge_count"] = len(diagram.nodes), len(diagram.edges)
    out["factorization"] = diagram.factorization()
    return out


def report_to_dict(report: AnalysisReport) -> dict[str, Any]:
    direction = report.direction
    verification = None
    if report.verification is not None:
        verification = {
            "checks": [dict(_json_safe(c), passed=c.passed, confirmed=c.confirmed)
                       for c in report.verification.checks],
            "notes": list(report.verification.notes),
            "ok": report.verification.ok,
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "shiftdiag",
        "tool_version": _tool_version(),
        "diagram": _diagram_dict(report.diagram),
        "direction": {
            "direction": direction.direction.value,
            "evidence": direction.evidence,
            "evidence_path": list(direction.evidence_path) if direction.evidence_path else None,
            "common_ancestor": direction.common_ancestor,
        },
        "shifts": [dict(_json_safe(s), ref=s.ref) for s in report.shifts],
        "selections": [dict(_json_safe(s), ref=s.ref) for s in report.selections],
        "plan": _json_safe(report.plan),
        "advisory": _json_safe(report.advisory),
        "checklist": [_json_safe(step) for step in report.checklist],
        "verification": verification,
        "settings": report.settings.to_dict(),
        "exit_code": int(report.exit_status),
    }


def render_json(data: dict[str, Any]) -> str:
    """Canonical JSON text; parsing and re-rendering gives the same bytes."""
    return _json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _json_safe(v):
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, (str, int, bool)) or v is None:
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, Edge):
        return {"from": v.source, "to": v.target}
    if dataclasses.is_dataclass(v) and not isinstance(v, type):
        return {f.name: _json_safe(getattr(v, f.name)) for f in dataclasses.fields(v) if not f.name.startswith("_")}
    if isinstance(v, dict):
        return {str(k): _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_json_safe(x) for x in v]
    if isinstance(v, np.ndarray):
        return _json_safe(v.tolist())
    if isinstance(v, (np.integer, np.floating)):
        return _json_safe(v.item())
    return str(v)


# ----------------------------- markdown --------------------------------------

_MARK = {StepStatus.SATISFIED: "satisfied", StepStatus.ATTENTION: "attention",
         StepStatus.NOT_APPLICABLE: "not applicable"}


def _bullets(lines: list[str], indent: str = "") -> list[str]:
    return [f"{indent}- {line}" for line in lines]


def _render_markdown(report: AnalysisReport) -> str:
    diagram = report.diagram
    plan = {item.finding: item for item in report.plan.items}
    out = [f"# Analysis report: {diagram.name}", "",
           f"{len(diagram.nodes)} nodes, {len(diagram.edges)} edges. Factorization: `{diagram.factorization()}`", ""]

    def finding_lines(ref: str, head: str, caveats: tuple[str, ...]) -> list[str]:
        lines = [head]
        item = plan.get(ref)
        if item is not None:
            strategy = item.strategy.value + (f" with weights `{item.weight_formula}`" if item.weight_formula else "")
            if item.alternatives:
                strategy += f" (alternatives: {', '.join(a.value for a in item.alternatives)})"
            lines += _bullets([f"correction: {strategy}"], "  ")
            caveats = caveats + tuple(c for c in item.caveats if c not in caveats)
        return lines + _bullets(list(caveats), "  ")

    for step in report.checklist:
        out += [f"## {step.number}. {step.title}", "", f"**Status:** {_MARK[step.status]}. {step.note}", ""]
        if step.number == 2:
            adv = report.advisory
            out += _bullets([f"direction: **{report.direction.direction.value}**"
                             + (f" (`{report.direction.evidence}`)" if report.direction.evidence else ""),
                             f"semi-supervised learning: {adv.ssl.value}. {adv.ssl_rationale}",
                             f"data augmentation: {adv.augmentation.value}. {adv.augmentation_note}"]) + [""]
        elif step.number in (3, 4):
            wanted = step.number == 4
            for s in report.shifts:
                if (s.shift_type.value == "acquisition_shift") == wanted:
                    head = (f"- **{s.shift_type.value}** on `{s.mechanism_edge}`: changed factor "
                            f"`{s.changed_factor.value}`, transportable: {'yes' if s.transportable else 'no'}")
                    out += finding_lines(s.ref, head, s.caveats)
            out.append("")
        elif step.number == 5:
            for s in report.selections:
                head = (f"- **{s.selection_type.value}** selection `{s.selection_node}`: induced bias "
                        f"{s.induced_bias.value}, P(Y|X) recoverable: "
                        f"{'yes' if s.recoverable_predictive_relation else 'no'}")
                out += finding_lines(s.ref, head, s.caveats)
            out.append("")
        elif step.number == 6:
            out += ["```dot", export_dot(diagram).rstrip("\n"), "```", ""]

    if report.verification is not None:
        out += ["## Verification", "", "| finding | check | claim | measured | threshold | result |",
                "|---|---|---|---|---|---|"]
        for c in report.verification.checks:
            result = "confirmed" if c.confirmed else "NOT CONFIRMED"
            out.append(f"| {c.finding} | {c.kind.value} | {c.claim} | {c.measured:.3g} | "
                       f"{'>=' if c.at_least else '<='} {c.threshold:g} | {result} |")
        out.append("")
        out += _bullets(list(report.verification.notes))
        if report.verification.notes:
            out.append("")
    return "\n".join(out).rstrip("\n") + "\n"
