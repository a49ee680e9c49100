####################################################################################################
#                                          dseparation.py                                          #
####################################################################################################
#                                                                                                  #
# Purpose: Path semantics and d-separation over causal diagrams.                                   #
#                                                                                                  #
#          The boolean answer comes from the Bayes-ball reachability pass (linear in the size of   #
#          the diagram). Open paths are enumerated separately, only to give human-auditable        #
#          witnesses, by a depth-first search over sorted neighbours that prunes every prefix      #
#          already blocked; this yields paths in lexicographic order of their node sequences.     #
#                                                                                                  #
####################################################################################################


#*************#
#   imports   #
#*************#
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple

# own
from shiftdiag.core.diagram import CausalDiagram, NodeKind
from shiftdiag.core.errors import OverlappingSetsError, ShiftDiagError, UnknownNodeError
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)


# ----------------------------- types -----------------------------------------

class Arrow(str, Enum):
    FORWARD = "forward"     # nodes[i] -> nodes[i + 1]
    BACKWARD = "backward"   # nodes[i] <- nodes[i + 1]


@dataclass(frozen=True)
class Path:
    nodes: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(self.nodes) < 2 or len(self.arrows) != len(self.nodes) - 1:
            raise ValueError("a path needs at least two nodes and one arrow per step")

    def render(self) -> str:
        out = self.nodes[0]
        for arrow, node in zip(self.arrows, self.nodes[1:]):
            out += (" -> " if arrow is Arrow.FORWARD else " <- ") + node
        return out

    def __str__(self) -> str:
        return self.render()

    def colliders(self) -> tuple[str, ...]:
        return tuple(self.nodes[i] for i in range(1, len(self.nodes) - 1)
                     if self.arrows[i - 1] is Arrow.FORWARD and self.arrows[i] is Arrow.BACKWARD)


@dataclass(frozen=True)
class OpenPaths:
    paths: tuple[Path, ...] = ()
    truncated: bool = False

    def __iter__(self):
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class SeparationResult:
    separated: bool
    witnesses: tuple[Path, ...] = field(default_factory=tuple)
    truncated: bool = False

    def __bool__(self) -> bool:
        return self.separated


class Independence(NamedTuple):
    a: str
    b: str
    given: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.a} _||_ {self.b} | {{{', '.join(self.given)}}}"


# ----------------------------- helpers ---------------------------------------

def _check_ids(diagram: CausalDiagram, ids: Iterable[str]) -> None:
    missing = sorted(i for i in ids if i not in diagram)
    if missing:
        raise UnknownNodeError(f"unknown node(s) {', '.join(missing)} in diagram '{diagram.name}'")


def _conditioned_ancestry(diagram: CausalDiagram, given: frozenset[str]) -> frozenset[str]:
    """``given`` together with all of its ancestors: the colliders that are open."""
    out = set(given)
    for node in given:
        out |= diagram.ancestors(node)
    return frozenset(out)


def _reachable(diagram: CausalDiagram, sources: Iterable[str], given: frozenset[str]) -> set[str]:
    """Bayes-ball: nodes d-connected to ``sources`` given ``given``."""
    graph = diagram._graph
    opened = _conditioned_ancestry(diagram, given)
    # "up": arrived from a child; "down": arrived from a parent
    queue = deque((s, "up") for s in sources)
    visited: set[tuple[str, str]] = set()
    reached: set[str] = set()
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in given:
            reached.add(node)
        if direction == "up" and node not in given:
            queue.extend((p, "up") for p in graph.predecessors(node))
            queue.extend((c, "down") for c in graph.successors(node))
        elif direction == "down":
            if node not in given:
                queue.extend((c, "down") for c in graph.successors(node))
            if node in opened:
                queue.extend((p, "up") for p in graph.predecessors(node))
    return reached


def is_open(diagram: CausalDiagram, path: Path, given: Iterable[str]) -> bool:
    """True if no node on ``path`` blocks it given ``given``.

    A non-collider blocks iff it is conditioned on; a collider blocks iff neither
    it nor any of its descendants is conditioned on.
    """
    given = frozenset(given)
    opened = _conditioned_ancestry(diagram, given)
    for i in range(1, len(path.nodes) - 1):
        node = path.nodes[i]
        collider = path.arrows[i - 1] is Arrow.FORWARD and path.arrows[i] is Arrow.BACKWARD
        if collider and node not in opened:
            return False
        if not collider and node in given:
            return False
    return True


# ----------------------------- operations ------------------------------------

def open_paths(diagram: CausalDiagram, a: str, b: str, given: Iterable[str] = (),
               cap: int | None = None) -> OpenPaths:
    """Open paths between ``a`` and ``b`` given ``given``, lexicographic, at most ``cap``."""
    cap = DEFAULT_SETTINGS.witness_cap if cap is None else cap
    given = frozenset(given)
    _check_ids(diagram, {a, b} | given)
    if a == b or a in given or b in given:
        raise OverlappingSetsError(f"open_paths needs distinct endpoints outside the conditioning set ({a}, {b})")
    if cap <= 0:
        return OpenPaths((), bool(_reachable(diagram, [a], given) & {b}))

    graph = diagram._graph
    opened = _conditioned_ancestry(diagram, given)
    found: list[Path] = []

    def neighbours(node: str) -> list[tuple[str, Arrow]]:
        steps = [(c, Arrow.FORWARD) for c in graph.successors(node)]
        steps += [(p, Arrow.BACKWARD) for p in graph.predecessors(node)]
        return sorted(steps)

    # iterative DFS; each frame is (node sequence, arrows, pending neighbour iterator)
    stack = [([a], [], iter(neighbours(a)))]
    on_path = {a}
    while stack:
        nodes, arrows, pending = stack[-1]
        step = next(pending, None)
        if step is None:
            stack.pop()
            on_path.discard(nodes[-1])
            continue
        nxt, arrow = step
        if nxt in on_path:
            continue
        if len(nodes) >= 2:
            middle = nodes[-1]
            collider = arrows[-1] is Arrow.FORWARD and arrow is Arrow.BACKWARD
            if (collider and middle not in opened) or (not collider and middle in given):
                continue
        if nxt == b:
            if len(found) == cap:
                return OpenPaths(tuple(found), True)
            found.append(Path(tuple(nodes + [b]), tuple(arrows + [arrow])))
            continue
        on_path.add(nxt)
        stack.append((nodes + [nxt], arrows + [arrow], iter(neighbours(nxt))))
    return OpenPaths(tuple(found), False)


def d_separated(diagram: CausalDiagram, A: Iterable[str], B: Iterable[str], C: Iterable[str] = (),
                witness_cap: int | None = None) -> SeparationResult:
    """Decide whether every path between ``A`` and ``B`` is blocked given ``C``.

    Raises:
        UnknownNodeError: an id is not in the diagram.
        OverlappingSetsError: the sets are not pairwise disjoint.
    """
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    cap = DEFAULT_SETTINGS.witness_cap if witness_cap is None else witness_cap
    _check_ids(diagram, A | B | C)
    if not A or not B:
        raise ShiftDiagError("d-separation needs non-empty A and B", "EMPTY_SET")
    if A & B or A & C or B & C:
        raise OverlappingSetsError(
            f"node sets must be pairwise disjoint (shared: {', '.join(sorted((A & B) | (A & C) | (B & C)))})")

    if not _reachable(diagram, sorted(A), C) & B:
        return SeparationResult(True)

    witnesses: list[Path] = []
    truncated = False
    for a, b in itertools.product(sorted(A), sorted(B)):
        remaining = cap - len(witnesses)
        if remaining <= 0:
            if b in _reachable(diagram, [a], C):
                truncated = True
                break
            continue
        result = open_paths(diagram, a, b, C, remaining)
        witnesses.extend(result.paths)
        truncated = truncated or result.truncated
    logger.debug("d-connected %s / %s given %s: %d witness(es)", sorted(A), sorted(B), sorted(C), len(witnesses))
    return SeparationResult(False, tuple(witnesses), truncated)


def implied_independencies(diagram: CausalDiagram, max_conditioning: int | None = None) -> list[Independence]:
    """Every singleton d-separation statement with an observed conditioning set.

    Pairs ``a < b`` over all nodes; conditioning sets range over the observed nodes
    other than ``a`` and ``b``, by increasing size and then lexicographically.
    """
    max_conditioning = DEFAULT_SETTINGS.max_conditioning if max_conditioning is None else max_conditioning
    if max_conditioning < 0:
        raise ShiftDiagError(f"max_conditioning must be >= 0, got {max_conditioning}", "INVALID_ARGUMENT")
    observed = diagram.nodes_of_kind(NodeKind.OBSERVED)
    out: list[Independence] = []
    for a, b in itertools.combinations(diagram.node_ids, 2):
        pool = [n for n in observed if n not in (a, b)]
        for size in range(min(max_conditioning, len(pool)) + 1):
            for given in itertools.combinations(pool, size):
                if b not in _reachable(diagram, [a], frozenset(given)):
                    out.append(Independence(a, b, given))
    return out
