"""Parser state and the nine transitions that assemble a graph.

The parser walks a sentence with a stack and a buffer. Terminals start on
the buffer; Node grows fresh internal nodes; the four edge transitions
attach the top two stack items either way around, as primary or remote
edges; Swap reorders the stack to reach discontinuous attachments; Finish
closes the parse. Node ids double as creation indices: root is 0, the k-th
token is k, and every created node takes the next free integer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .graph import Edge, Graph, INTERNAL, Node, ROOT, TERMINAL, Token
from .labels import Label, PARSE_LABELS, label_from_string


class Kind(enum.Enum):
    SHIFT = "SHIFT"
    REDUCE = "REDUCE"
    NODE = "NODE"
    LEFT_EDGE = "LEFT-EDGE"
    RIGHT_EDGE = "RIGHT-EDGE"
    LEFT_REMOTE = "LEFT-REMOTE"
    RIGHT_REMOTE = "RIGHT-REMOTE"
    SWAP = "SWAP"
    FINISH = "FINISH"


LABELED_KINDS = frozenset(
    (Kind.NODE, Kind.LEFT_EDGE, Kind.RIGHT_EDGE, Kind.LEFT_REMOTE, Kind.RIGHT_REMOTE)
)
EDGE_KINDS = frozenset(
    (Kind.LEFT_EDGE, Kind.RIGHT_EDGE, Kind.LEFT_REMOTE, Kind.RIGHT_REMOTE)
)

# Tie-break order used whenever scores or oracles leave a choice open:
# edge transitions first, then Node, Reduce, Shift, Swap, Finish, with
# labels compared alphabetically inside a kind.
PREFERENCE_RANK = {
    Kind.LEFT_EDGE: 0,
    Kind.RIGHT_EDGE: 1,
    Kind.LEFT_REMOTE: 2,
    Kind.RIGHT_REMOTE: 3,
    Kind.NODE: 4,
    Kind.REDUCE: 5,
    Kind.SHIFT: 6,
    Kind.SWAP: 7,
    Kind.FINISH: 8,
}


@dataclass(frozen=True)
class Transition:
    kind: Kind
    label: Label | None = None

    def __repr__(self) -> str:
        return f"<{encode(self)}>"


def preference_key(t: Transition) -> tuple[int, str]:
    return (PREFERENCE_RANK[t.kind], t.label.value if t.label else "")


def encode(t: Transition) -> str:
    if t.label is not None:
        return f"{t.kind.value}-{t.label.value}"
    return t.kind.value


def decode(text: str) -> Transition:
    for kind in sorted(Kind, key=lambda k: -len(k.value)):
        if text == kind.value and kind not in LABELED_KINDS:
            return Transition(kind)
        prefix = kind.value + "-"
        if kind in LABELED_KINDS and text.startswith(prefix):
            try:
                return Transition(kind, label_from_string(text[len(prefix):]))
            except ValueError:
                raise ValueError(f"cannot decode transition {text!r}") from None
    raise ValueError(f"cannot decode transition {text!r}")


# The full set of transitions a classifier can score, in preference order,
# so that list position works as a stable transition id.
TRANSITION_INVENTORY: tuple[Transition, ...] = tuple(
    sorted(
        [Transition(k) for k in (Kind.SHIFT, Kind.REDUCE, Kind.SWAP, Kind.FINISH)]
        + [Transition(k, lab) for k in LABELED_KINDS for lab in PARSE_LABELS],
        key=preference_key,
    )
)
TRANSITION_ID = {t: i for i, t in enumerate(TRANSITION_INVENTORY)}


class IllegalTransition(Exception):
    def __init__(self, condition: str, message: str = ""):
        self.condition = condition
        super().__init__(message or condition)


class ActionCapError(Exception):
    pass


@dataclass(frozen=True)
class ParserState:
    """Immutable snapshot of a parse in progress.

    node_kinds[i] is the kind of node id i, so len(node_kinds) is the next
    free id. Stack top is the rightmost element, buffer head the leftmost.
    """

    tokens: tuple[Token, ...]
    stack: tuple[int, ...]
    buffer: tuple[int, ...]
    node_kinds: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    history: tuple[Transition, ...] = ()
    done: bool = False
    cap: int = 0

    # -- graph-shaped queries (same duck API as Graph) ----------------------

    @cached_property
    def _children(self) -> dict[int, tuple[Edge, ...]]:
        out: dict[int, list[Edge]] = {}
        for e in self.edges:
            out.setdefault(e.parent, []).append(e)
        return {nid: tuple(es) for nid, es in out.items()}

    @cached_property
    def _parents(self) -> dict[int, tuple[Edge, ...]]:
        out: dict[int, list[Edge]] = {}
        for e in self.edges:
            out.setdefault(e.child, []).append(e)
        return {nid: tuple(es) for nid, es in out.items()}

    @cached_property
    def _path_cache(self) -> dict[tuple[int, int], bool]:
        return {}

    def node_kind(self, nid: int) -> str:
        return self.node_kinds[nid]

    def is_terminal(self, nid: int) -> bool:
        return self.node_kinds[nid] == TERMINAL

    def child_edges(self, nid: int) -> tuple[Edge, ...]:
        return self._children.get(nid, ())

    def parent_edges(self, nid: int) -> tuple[Edge, ...]:
        return self._parents.get(nid, ())

    def primary_child_edges(self, nid: int) -> tuple[Edge, ...]:
        return tuple(e for e in self.child_edges(nid) if not e.remote)

    def primary_parent_edge(self, nid: int) -> Edge | None:
        for e in self.parent_edges(nid):
            if not e.remote:
                return e
        return None

    @cached_property
    def _yields(self) -> dict[int, frozenset[int]]:
        memo: dict[int, frozenset[int]] = {}

        def walk(nid: int) -> frozenset[int]:
            if nid in memo:
                return memo[nid]
            if self.node_kinds[nid] == TERMINAL:
                memo[nid] = frozenset((nid,))
                return memo[nid]
            memo[nid] = frozenset()  # guard; partial graphs are acyclic anyway
            acc: set[int] = set()
            for e in self._children.get(nid, ()):
                if not e.remote:
                    acc |= walk(e.child)
            memo[nid] = frozenset(acc)
            return memo[nid]

        for nid in range(len(self.node_kinds)):
            walk(nid)
        return memo

    def primary_yield(self, nid: int) -> frozenset[int]:
        return self._yields[nid]

    def has_edge(self, parent: int, child: int, label: Label, remote: bool) -> bool:
        return Edge(parent, child, label, remote) in self._edge_set

    @cached_property
    def _edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def reaches(self, src: int, dst: int) -> bool:
        """True iff dst is reachable from src over any edges."""
        key = (src, dst)
        cached = self._path_cache.get(key)
        if cached is not None:
            return cached
        seen = {src}
        frontier = [src]
        found = False
        while frontier:
            nid = frontier.pop()
            if nid == dst:
                found = True
                break
            for e in self._children.get(nid, ()):
                if e.child not in seen:
                    seen.add(e.child)
                    frontier.append(e.child)
        self._path_cache[key] = found
        return found

    def to_graph(self, graph_id: str = "") -> Graph:
        nodes = [Node(0, ROOT)]
        for k in range(1, len(self.tokens) + 1):
            nodes.append(Node(k, TERMINAL, k))
        for nid in range(len(self.tokens) + 1, len(self.node_kinds)):
            nodes.append(Node(nid, INTERNAL))
        return Graph(self.tokens, tuple(nodes), self.edges, graph_id)


def init_state(tokens, cap_multiplier: int = 20) -> ParserState:
    """Fresh state: root alone on the stack, all terminals on the buffer."""
    tokens = tuple(
        t if isinstance(t, Token) else Token(*t) for t in tokens
    )
    n = len(tokens)
    if n < 1:
        raise ValueError("cannot initialize a parse over an empty sentence")
    return ParserState(
        tokens=tokens,
        stack=(0,),
        buffer=tuple(range(1, n + 1)),
        node_kinds=(ROOT,) + (TERMINAL,) * n,
        cap=cap_multiplier * (n + 1),
    )


def check(state: ParserState, t: Transition) -> str | None:
    """Name the first violated legality condition, or None when legal.

    Condition names are stable identifiers used in error messages and
    tests: terminal-state, empty-buffer, empty-stack, reduce-root,
    missing-label, label-not-allowed, node-root, node-has-primary-parent,
    need-two-stack, parent-terminal, child-root, child-has-primary-parent,
    cycle, duplicate-edge, swap-root, swap-order, finish-stack,
    finish-buffer.
    """
    if state.done:
        return "terminal-state"
    kind = t.kind

    if kind in LABELED_KINDS:
        if t.label is None:
            return "missing-label"
        if t.label not in PARSE_LABELS:
            return "label-not-allowed"
    elif t.label is not None:
        return "label-not-allowed"

    if kind is Kind.SHIFT:
        if not state.buffer:
            return "empty-buffer"
        return None

    if kind is Kind.REDUCE:
        if not state.stack:
            return "empty-stack"
        if state.node_kinds[state.stack[-1]] == ROOT:
            return "reduce-root"
        return None

    if kind is Kind.NODE:
        if not state.stack:
            return "empty-stack"
        top = state.stack[-1]
        if state.node_kinds[top] == ROOT:
            return "node-root"
        if state.primary_parent_edge(top) is not None:
            return "node-has-primary-parent"
        return None

    if kind in EDGE_KINDS:
        if len(state.stack) < 2:
            return "need-two-stack"
        second, top = state.stack[-2], state.stack[-1]
        if kind in (Kind.LEFT_EDGE, Kind.LEFT_REMOTE):
            parent, child = top, second
        else:
            parent, child = second, top
        if state.node_kinds[parent] == TERMINAL:
            return "parent-terminal"
        if state.node_kinds[child] == ROOT:
            return "child-root"
        remote = kind in (Kind.LEFT_REMOTE, Kind.RIGHT_REMOTE)
        if state.reaches(child, parent):
            return "cycle"
        if state.has_edge(parent, child, t.label, remote):
            return "duplicate-edge"
        if not remote and state.primary_parent_edge(child) is not None:
            return "child-has-primary-parent"
        return None

    if kind is Kind.SWAP:
        if len(state.stack) < 2:
            return "need-two-stack"
        second, top = state.stack[-2], state.stack[-1]
        if state.node_kinds[second] == ROOT:
            return "swap-root"
        if second >= top:  # node ids are creation indices
            return "swap-order"
        return None

    if kind is Kind.FINISH:
        if len(state.stack) != 1 or state.node_kinds[state.stack[-1]] != ROOT:
            return "finish-stack"
        if state.buffer:
            return "finish-buffer"
        return None

    raise ValueError(f"unknown transition kind {kind!r}")


def legal_transitions(state: ParserState) -> frozenset[Transition]:
    """Every transition apply() would accept in this state."""
    if state.done:
        return frozenset()
    out = []
    for t in TRANSITION_INVENTORY:
        if check(state, t) is None:
            out.append(t)
    return frozenset(out)


def apply(state: ParserState, t: Transition) -> ParserState:
    """Apply one transition, returning the successor state.

    Raises IllegalTransition naming the violated condition, or
    ActionCapError once the transition budget is spent.
    """
    if state.done:
        raise IllegalTransition("terminal-state", f"{encode(t)} after Finish")
    if state.cap and len(state.history) >= state.cap:
        raise ActionCapError(f"action cap {state.cap} exceeded")
    cond = check(state, t)
    if cond is not None:
        raise IllegalTransition(cond, f"{encode(t)}: {cond}")

    stack, buffer = state.stack, state.buffer
    node_kinds, edges = state.node_kinds, state.edges
    done = state.done
    kind = t.kind

    if kind is Kind.SHIFT:
        stack = stack + (buffer[0],)
        buffer = buffer[1:]
    elif kind is Kind.REDUCE:
        stack = stack[:-1]
    elif kind is Kind.NODE:
        fresh = len(node_kinds)
        node_kinds = node_kinds + (INTERNAL,)
        edges = edges + (Edge(fresh, stack[-1], t.label, False),)
        buffer = (fresh,) + buffer
    elif kind is Kind.LEFT_EDGE:
        edges = edges + (Edge(stack[-1], stack[-2], t.label, False),)
    elif kind is Kind.RIGHT_EDGE:
        edges = edges + (Edge(stack[-2], stack[-1], t.label, False),)
    elif kind is Kind.LEFT_REMOTE:
        edges = edges + (Edge(stack[-1], stack[-2], t.label, True),)
    elif kind is Kind.RIGHT_REMOTE:
        edges = edges + (Edge(stack[-2], stack[-1], t.label, True),)
    elif kind is Kind.SWAP:
        second = stack[-2]
        stack = stack[:-2] + (stack[-1],)
        buffer = (second,) + buffer
    elif kind is Kind.FINISH:
        stack = stack[:-1]
        done = True

    return ParserState(
        tokens=state.tokens,
        stack=stack,
        buffer=buffer,
        node_kinds=node_kinds,
        edges=edges,
        history=state.history + (t,),
        done=done,
        cap=state.cap,
    )


def run_sequence(tokens, seq) -> Graph:
    """Fold a transition sequence into its final graph.

    The sequence must be legal step by step and end in a terminal state.
    """
    state = init_state(tokens)
    for i, t in enumerate(seq):
        try:
            state = apply(state, t)
        except IllegalTransition as exc:
            raise IllegalTransition(exc.condition, f"step {i}: {exc}") from None
    if not state.done:
        raise IllegalTransition("not-terminal", "sequence left the parse unfinished")
    return state.to_graph()
