####################################################################################################
#                                          cpt_format.py                                           #
####################################################################################################
#                                                                                                  #
# Purpose: Reader and writer for ``.cpt`` model files:                                             #
#                                                                                                  #
#              model for "diagram-name"                                                            #
#              var <IDENT> states <name> ("," <name>)+                                             #
#              cpt <IDENT> (given <IDENT> ("," <IDENT>)*)?                                         #
#                row (<parent-state> ("," <parent-state>)*)? : <p> (<p>)*                          #
#                                                                                                  #
#          Line oriented; ``#`` starts a comment. Declarations may come in any order; rows must    #
#          follow their ``cpt`` header and list one probability per state of the node.            #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# own
from shiftdiag.bn.model import CPT, BNModel, build_model
from shiftdiag.core.diagram import CausalDiagram
from shiftdiag.core.errors import ModelSpecError
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS, AnalysisSettings
from shiftdiag.dsl.writer import quote

logger = logging.getLogger(__name__)

IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
STATE = r"[A-Za-z0-9_][A-Za-z0-9_.+-]*"
NUMBER = r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"

_MODEL_RE = re.compile(r'model\s+for\s+"((?:[^"\\]|\\.)*)"')
_VAR_RE = re.compile(rf"var\s+({IDENT})\s+states\s+(.+)")
_CPT_RE = re.compile(rf"cpt\s+({IDENT})(?:\s+given\s+(.+))?")
_ROW_RE = re.compile(r"row\b(.*?):(.*)")
_STATE_RE = re.compile(STATE + r"\Z")
_IDENT_RE = re.compile(IDENT + r"\Z")
_NUMBER_RE = re.compile(NUMBER + r"\Z")
_UNESCAPE = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


@dataclass
class _CptBlock:
    node: str
    parents: tuple[str, ...]
    line: int
    rows: dict[tuple[str, ...], tuple[list[float], int]] = field(default_factory=dict)


def _strip_comment(line: str) -> str:
    # '#' inside the quoted model name is not a comment
    in_string = escaped = False
    for i, ch in enumerate(line):
        if escaped:
            escaped = False
        elif ch == "\\" and in_string:
            escaped = True
        elif ch == '"':
            in_string = not in_string
        elif ch == "#" and not in_string:
            return line[:i]
    return line


def _split_list(text: str, pattern: re.Pattern, what: str, line: int) -> list[str]:
    items = [item.strip() for item in text.split(",")]
    for item in items:
        if not pattern.match(item):
            raise ModelSpecError(f"invalid {what} {item!r}", "SYNTAX", line)
    return items


def _unescape(text: str) -> str:
    return re.sub(r"\\(.)", lambda m: _UNESCAPE.get(m.group(1), m.group(1)), text)


def parse_model_text(spec_text: str) -> tuple[str, dict[str, tuple[list[str], int]], list[_CptBlock]]:
    """Syntax pass: model name, ``{var: (states, line)}`` and the CPT blocks."""
    name: str | None = None
    variables: dict[str, tuple[list[str], int]] = {}
    blocks: list[_CptBlock] = []
    current: _CptBlock | None = None

    for number, raw in enumerate(spec_text.split("\n"), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if name is None:
            match = _MODEL_RE.fullmatch(line)
            if not match:
                raise ModelSpecError('expected `model for "<diagram-name>"`', "SYNTAX", number)
            name = _unescape(match.group(1))
            continue

        if match := _VAR_RE.fullmatch(line):
            node = match.group(1)
            if node in variables:
                raise ModelSpecError(f"variable '{node}' declared twice", "DUPLICATE_DECLARATION", number)
            states = _split_list(match.group(2), _STATE_RE, "state name", number)
            if len(states) < 2:
                raise ModelSpecError(f"variable '{node}' needs at least two states", "INVALID_STATES", number)
            variables[node] = (states, number)
            current = None
        elif match := _CPT_RE.fullmatch(line):
            node = match.group(1)
            if any(b.node == node for b in blocks):
                raise ModelSpecError(f"CPT for '{node}' declared twice", "DUPLICATE_DECLARATION", number)
            parents = _split_list(match.group(2), _IDENT_RE, "parent id", number) if match.group(2) else []
            current = _CptBlock(node, tuple(parents), number)
            blocks.append(current)
        elif match := _ROW_RE.fullmatch(line):
            if current is None:
                raise ModelSpecError("`row` outside a `cpt` block", "SYNTAX", number)
            head = match.group(1).strip()
            key = tuple(_split_list(head, _STATE_RE, "parent state", number)) if head else ()
            if len(key) != len(current.parents):
                raise ModelSpecError(
                    f"row of '{current.node}' names {len(key)} parent state(s), expected {len(current.parents)}",
                    "SYNTAX", number)
            if key in current.rows:
                raise ModelSpecError(f"row {', '.join(key) or '(no parents)'} of '{current.node}' given twice",
                                     "DUPLICATE_DECLARATION", number)
            values = match.group(2).split()
            if not values or not all(_NUMBER_RE.match(v) for v in values):
                raise ModelSpecError("expected decimal probabilities after `:`", "SYNTAX", number)
            current.rows[key] = ([float(v) for v in values], number)
        else:
            raise ModelSpecError("expected `var`, `cpt` or `row` statement", "SYNTAX", number)

    if name is None:
        raise ModelSpecError('expected `model for "<diagram-name>"`', "SYNTAX", 1)
    return name, variables, blocks


def _block_table(block: _CptBlock, variables: dict[str, tuple[list[str], int]]) -> np.ndarray:
    if block.node not in variables:
        raise ModelSpecError(f"CPT for undeclared variable '{block.node}'", "MISSING_VARIABLE", block.line)
    for parent in block.parents:
        if parent not in variables:
            raise ModelSpecError(f"CPT of '{block.node}' uses undeclared parent '{parent}'",
                                 "MISSING_VARIABLE", block.line)
    own = variables[block.node][0]
    parent_states = [variables[p][0] for p in block.parents]
    table = np.zeros([len(s) for s in parent_states] + [len(own)])
    for key, (probs, line) in block.rows.items():
        index = []
        for parent, state, options in zip(block.parents, key, parent_states):
            if state not in options:
                raise ModelSpecError(f"unknown state '{state}' for parent '{parent}'", "UNKNOWN_STATE", line)
            index.append(options.index(state))
        if len(probs) != len(own):
            raise ModelSpecError(f"row of '{block.node}' lists {len(probs)} probabilities, expected {len(own)}",
                                 "SYNTAX", line)
        table[tuple(index)] = probs
    expected = int(np.prod([len(s) for s in parent_states])) if parent_states else 1
    if len(block.rows) != expected:
        raise ModelSpecError(f"CPT of '{block.node}' has {len(block.rows)} of {expected} rows", "MISSING_ROW",
                             block.line)
    return table


def attach_model(diagram: CausalDiagram, spec_text: str,
                 settings: AnalysisSettings = DEFAULT_SETTINGS) -> BNModel:
    """Parse ``spec_text`` and validate it against ``diagram``.

    Raises:
        ModelSpecError: the first problem found, with its code and line.
    """
    name, variables, blocks = parse_model_text(spec_text)
    if name != diagram.name:
        raise ModelSpecError(f"model is for '{name}' but the diagram is '{diagram.name}'", "NAME_MISMATCH", 1)
    tables = {b.node: CPT(b.node, b.parents, _block_table(b, variables)) for b in blocks}
    try:
        return build_model(diagram, {n: s for n, (s, _) in variables.items()}, tables, settings)
    except ModelSpecError as exc:
        line = next((b.line for b in blocks if f"'{b.node}'" in str(exc)), None)
        if line is None or exc.line is not None:
            raise
        raise ModelSpecError(str(exc), exc.code, line) from None


def load_model(diagram: CausalDiagram, path: str | Path,
               settings: AnalysisSettings = DEFAULT_SETTINGS) -> BNModel:
    path = Path(path)
    return attach_model(diagram, path.read_text(encoding="utf-8"), settings)


def serialize_model(model: BNModel) -> str:
    """Write ``model`` back in the ``.cpt`` grammar (topological order)."""
    lines = [f"model for {quote(model.diagram.name)}", ""]
    for node in model.order:
        lines.append(f"var {node} states {', '.join(model.states(node))}")
    for node in model.order:
        cpt = model.cpt(node)
        lines.append("")
        lines.append(f"cpt {node}" + (f" given {', '.join(cpt.parents)}" if cpt.parents else ""))
        spaces = [model.states(p) for p in cpt.parents]
        for index in np.ndindex(*[len(s) for s in spaces]):
            head = ", ".join(spaces[i][j] for i, j in enumerate(index))
            probs = " ".join(repr(float(p)) for p in cpt.table[index])
            lines.append(f"  row {head} : {probs}" if head else f"  row : {probs}")
    return "\n".join(lines) + "\n"
