####################################################################################################
#                                            writer.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: Canonical ``.cdsl`` serialization and write-only DOT export of diagrams.                #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from pathlib import Path

# own
from shiftdiag.core.diagram import CausalDiagram, Node, NodeKind, NodeRole

INDENT = "  "

DOT_SHAPES = {
    NodeKind.OBSERVED: "shape=ellipse",
    NodeKind.UNOBSERVED: "shape=ellipse, style=dashed",
    NodeKind.DOMAIN: "shape=box",
    NodeKind.SELECTION: "shape=doublecircle",
}


def quote(value: str) -> str:
    """Double-quote ``value`` using the escapes both the DSL and DOT understand."""
    escaped = (value.replace("\\", "\\\\").replace('"', '\\"')
               .replace("\n", "\\n").replace("\t", "\\t"))
    return f'"{escaped}"'


def _node_line(node: Node) -> str:
    parts = ["node", node.id]
    if node.kind is not NodeKind.OBSERVED:
        parts.append(f"kind={node.kind.value}")
    if node.role is not NodeRole.NONE:
        parts.append(f"role={node.role.value}")
    if node.label is not None:
        parts.append(f"label={quote(node.label)}")
    return INDENT + " ".join(parts)


def serialize_dsl(diagram: CausalDiagram) -> str:
    """Canonical text: nodes by id, edges by (from, to), two-space indent, LF endings."""
    lines = [f"diagram {quote(diagram.name)} {{"]
    lines += [_node_line(n) for n in sorted(diagram.nodes, key=lambda n: n.id)]
    if diagram.edges:
        lines.append("")
        lines += [f"{INDENT}edge {e.source} -> {e.target}" for e in sorted(diagram.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_diagram(diagram: CausalDiagram, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(serialize_dsl(diagram), encoding="utf-8", newline="\n")
    return path


def export_dot(diagram: CausalDiagram) -> str:
    dot = f"digraph {quote(diagram.name)} {{\n"
    for node in sorted(diagram.nodes, key=lambda n: n.id):
        label = node.display
        if node.role is not NodeRole.NONE:
            label += f" ({node.role.symbol})"
        dot += f"{INDENT}{quote(node.id)} [label={quote(label)}, {DOT_SHAPES[node.kind]}];\n"
    for edge in sorted(diagram.edges):
        dot += f"{INDENT}{quote(edge.source)} -> {quote(edge.target)};\n"
    dot += "}\n"
    return dot
