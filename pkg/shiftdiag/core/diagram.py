####################################################################################################
#                                            diagram.py                                            #
####################################################################################################
#                                                                                                  #
# Purpose: Typed causal/selection diagram model. A diagram is an immutable DAG of observed,        #
#          unobserved, domain-indicator and selection nodes, where at most one node each carries   #
#          the image (X), target (Y) and anatomy (Z) role.                                          #
#                                                                                                  #
#          ``build_diagram`` is the validating constructor; every "mutation" returns a new,        #
#          re-validated diagram. Structural queries are backed by a cached networkx DiGraph.       #
#                                                                                                  #
####################################################################################################


#*************#
#   imports   #
#*************#
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import networkx as nx

# own
from shiftdiag.core.errors import DiagramValidationError, UnknownNodeError

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ----------------------------- node / edge types -----------------------------

class NodeKind(str, Enum):
    OBSERVED = "observed"
    UNOBSERVED = "unobserved"
    DOMAIN = "domain"
    SELECTION = "selection"


class NodeRole(str, Enum):
    IMAGE = "image"
    TARGET = "target"
    ANATOMY = "anatomy"
    NONE = "none"

    @property
    def symbol(self) -> str:
        return {"image": "X", "target": "Y", "anatomy": "Z"}.get(self.value, "")


class Relation(str, Enum):
    PARENTS = "parents"
    CHILDREN = "children"
    ANCESTORS = "ancestors"
    DESCENDANTS = "descendants"


class ValidationMode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True, order=True)
class Node:
    id: str
    kind: NodeKind = NodeKind.OBSERVED
    role: NodeRole = NodeRole.NONE
    label: str | None = field(default=None, compare=False)   # display only

    def __post_init__(self):
        # accept plain strings for convenience ("observed", "image", ...)
        object.__setattr__(self, "kind", NodeKind(self.kind))
        object.__setattr__(self, "role", NodeRole(self.role))

    @property
    def display(self) -> str:
        return self.label if self.label else self.id


@dataclass(frozen=True, order=True)
class Edge:
    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


# ----------------------------- validation ------------------------------------

@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    element: Node | Edge | None = None


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...] = ()
    warnings: tuple[ValidationIssue, ...] = ()
    mode: ValidationMode = ValidationMode.STRICT

    @property
    def accepted(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [issue.code for issue in self.errors]


def validate_diagram(name: str, nodes: Iterable[Node], edges: Iterable[Edge],
                     mode: ValidationMode | str = ValidationMode.STRICT) -> ValidationReport:
    """Run every structural check and return the collected issues (never raises)."""
    mode = ValidationMode(mode)
    nodes = list(nodes)
    edges = list(edges)
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    by_id: dict[str, Node] = {}
    role_owner: dict[NodeRole, str] = {}
    for node in nodes:
        if not isinstance(node.id, str) or not IDENT_RE.match(node.id):
            errors.append(ValidationIssue("INVALID_ID", f"node id {node.id!r} is not a valid identifier", node))
        if node.id in by_id:
            errors.append(ValidationIssue("DUP_ID", f"node '{node.id}' is declared more than once", node))
            continue
        by_id[node.id] = node
        if node.role is not NodeRole.NONE:
            if node.kind in (NodeKind.DOMAIN, NodeKind.SELECTION):
                errors.append(ValidationIssue(
                    "ROLE_ON_INDICATOR",
                    f"node '{node.id}' of kind {node.kind.value} cannot carry role {node.role.value}", node))
            elif node.role in role_owner:
                errors.append(ValidationIssue(
                    "DUP_ROLE",
                    f"role {node.role.value} is carried by both '{role_owner[node.role]}' and '{node.id}'", node))
            else:
                role_owner[node.role] = node.id

    graph = nx.DiGraph()
    graph.add_nodes_from(by_id)
    seen: set[tuple[str, str]] = set()
    for edge in edges:
        pair = (edge.source, edge.target)
        missing = [end for end in pair if end not in by_id]
        if missing:
            errors.append(ValidationIssue(
                "DANGLING_EDGE", f"edge {edge} refers to undeclared node(s) {', '.join(missing)}", edge))
            continue
        if edge.source == edge.target:
            errors.append(ValidationIssue("SELF_LOOP", f"edge {edge} connects a node to itself", edge))
            continue
        if pair in seen:
            errors.append(ValidationIssue("DUP_EDGE", f"edge {edge} is declared more than once", edge))
            continue
        seen.add(pair)
        if by_id[edge.source].kind is NodeKind.SELECTION:
            errors.append(ValidationIssue(
                "SELECTION_OUT_EDGE", f"selection node '{edge.source}' cannot have outgoing edge {edge}", edge))
        if by_id[edge.target].kind is NodeKind.DOMAIN:
            issue = ValidationIssue(
                "DOMAIN_IN_EDGE", f"domain indicator '{edge.target}' should be a root but has incoming edge {edge}",
                edge)
            (errors if mode is ValidationMode.STRICT else warnings).append(issue)
        graph.add_edge(*pair)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        path = " -> ".join([u for u, _ in cycle] + [cycle[0][0]])
        errors.append(ValidationIssue("CYCLE", f"edges form a directed cycle: {path}", Edge(*cycle[0][:2])))

    for issue in warnings:
        logger.warning("diagram '%s': %s: %s", name, issue.code, issue.message)
    return ValidationReport(tuple(errors), tuple(warnings), mode)


#**************************************************************************************************#
#                                          CausalDiagram                                           #
#**************************************************************************************************#
#                                                                                                  #
# Immutable value object. Equality is structural over (name, nodes with kind/role, edges); the     #
# attached validation report, the node labels and the cached graph do not take part in it.        #
#                                                                                                  #
#**************************************************************************************************#
@dataclass(frozen=True)
class CausalDiagram:
    name: str
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    validation: ValidationReport = field(default_factory=ValidationReport, compare=False, repr=False)
    _graph: nx.DiGraph = field(init=False, compare=False, repr=False)
    _order: tuple[str, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        graph = nx.DiGraph()
        graph.add_nodes_from(n.id for n in self.nodes)
        graph.add_edges_from((e.source, e.target) for e in self.edges)
        # accepted diagrams always admit a topological order
        try:
            order = tuple(nx.lexicographical_topological_sort(graph))
        except nx.NetworkXUnfeasible:
            raise DiagramValidationError(validate_diagram(self.name, self.nodes, self.edges))
        object.__setattr__(self, "_graph", graph)
        object.__setattr__(self, "_order", order)

    # ------------------------------------------------------------ lookups
    @property
    def graph(self) -> nx.DiGraph:
        """Read-only view of the backing graph."""
        return self._graph.copy(as_view=True)

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise UnknownNodeError(f"unknown node '{node_id}' in diagram '{self.name}'")

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._graph

    def nodes_of_kind(self, kind: NodeKind | str) -> tuple[str, ...]:
        kind = NodeKind(kind)
        return tuple(n.id for n in self.nodes if n.kind is kind)

    def role_node(self, role: NodeRole | str) -> str | None:
        role = NodeRole(role)
        for n in self.nodes:
            if n.role is role and role is not NodeRole.NONE:
                return n.id
        return None

    @property
    def image(self) -> str | None:
        return self.role_node(NodeRole.IMAGE)

    @property
    def target(self) -> str | None:
        return self.role_node(NodeRole.TARGET)

    @property
    def anatomy(self) -> str | None:
        return self.role_node(NodeRole.ANATOMY)

    def topological_order(self) -> tuple[str, ...]:
        """Deterministic (lexicographic tie-break) topological order."""
        return self._order

    def parents(self, node_id: str) -> frozenset[str]:
        return relatives(self, node_id, Relation.PARENTS)

    def children(self, node_id: str) -> frozenset[str]:
        return relatives(self, node_id, Relation.CHILDREN)

    def ancestors(self, node_id: str) -> frozenset[str]:
        return relatives(self, node_id, Relation.ANCESTORS)

    def descendants(self, node_id: str) -> frozenset[str]:
        return relatives(self, node_id, Relation.DESCENDANTS)

    def has_directed_path(self, source: str, target: str, avoid: Iterable[str] = ()) -> bool:
        """True if ``source`` reaches ``target`` without passing through ``avoid``."""
        avoid = set(avoid) - {source, target}
        if not avoid:
            return source != target and nx.has_path(self._graph, source, target)
        sub = nx.restricted_view(self._graph, avoid, [])
        return source != target and nx.has_path(sub, source, target)

    def directed_path(self, source: str, target: str) -> tuple[str, ...] | None:
        """Lexicographically smallest shortest directed path, or None."""
        if source == target or not nx.has_path(self._graph, source, target):
            return None
        return min(tuple(p) for p in nx.all_shortest_paths(self._graph, source, target))

    # ------------------------------------------------------------ derived
    def factorization(self) -> str:
        """Causal Markov factorization in topological order, e.g. ``P(Z) P(X | Z)``."""
        terms = []
        for v in self._order:
            pa = sorted(self._graph.predecessors(v))
            terms.append(f"P({v} | {', '.join(pa)})" if pa else f"P({v})")
        return " ".join(terms)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "nodes": len(self.nodes),
            "edges": len(self.edges),
            "roles": {role.value: self.role_node(role)
                      for role in (NodeRole.IMAGE, NodeRole.TARGET, NodeRole.ANATOMY)},
            "domain_nodes": list(self.nodes_of_kind(NodeKind.DOMAIN)),
            "selection_nodes": list(self.nodes_of_kind(NodeKind.SELECTION)),
        }

    # ------------------------------------------------------------ "mutation"
    def with_node(self, node: Node) -> "CausalDiagram":
        return build_diagram(self.name, list(self.nodes) + [node], self.edges, self.validation.mode)

    def with_edge(self, source: str, target: str) -> "CausalDiagram":
        return build_diagram(self.name, self.nodes, list(self.edges) + [Edge(source, target)],
                             self.validation.mode)

    def without_edge(self, source: str, target: str) -> "CausalDiagram":
        edge = Edge(source, target)
        if edge not in self.edges:
            raise UnknownNodeError(f"diagram '{self.name}' has no edge {edge}")
        return build_diagram(self.name, self.nodes, [e for e in self.edges if e != edge],
                             self.validation.mode)

    def renamed(self, name: str) -> "CausalDiagram":
        return build_diagram(name, self.nodes, self.edges, self.validation.mode)


# ----------------------------- public operations -----------------------------

def build_diagram(name: str, nodes: Iterable[Node], edges: Iterable[Edge | tuple[str, str]],
                  mode: ValidationMode | str = ValidationMode.STRICT) -> CausalDiagram:
    """Validate and freeze a diagram.

    Raises:
        DiagramValidationError: carrying the ValidationReport when any error was found.
    """
    nodes = list(nodes)
    edges = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
    report = validate_diagram(name, nodes, edges, mode)
    if not report.accepted:
        raise DiagramValidationError(report)
    return CausalDiagram(name, tuple(nodes), tuple(edges), report)


def relatives(diagram: CausalDiagram, node: str, relation: Relation | str) -> frozenset[str]:
    """Parents, children, ancestors or descendants of ``node`` (never including itself)."""
    relation = Relation(relation)
    if node not in diagram:
        raise UnknownNodeError(f"unknown node '{node}' in diagram '{diagram.name}'")
    graph = diagram._graph
    if relation is Relation.PARENTS:
        return frozenset(graph.predecessors(node))
    if relation is Relation.CHILDREN:
        return frozenset(graph.successors(node))
    if relation is Relation.ANCESTORS:
        return frozenset(nx.ancestors(graph, node))
    return frozenset(nx.descendants(graph, node))
