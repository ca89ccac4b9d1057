"""Data model for rooted labeled DAGs over token sequences.

A graph has exactly one root, one terminal per token (the terminal's node id
equals its 1-based token position), and any number of internal nodes. Edges
carry a category label and a remote flag. Non-remote ("primary") edges form a
tree spanning every node; remote edges add reentrancy on top of that tree.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable

from .labels import Label, label_from_string

ROOT = "root"
INTERNAL = "internal"
TERMINAL = "terminal"

_KINDS = (ROOT, INTERNAL, TERMINAL)


class DataError(Exception):
    """Malformed input: bad file syntax or a graph violating invariants."""


def is_punct(form: str) -> bool:
    """True iff the form is non-empty and all-punctuation."""
    return bool(form) and all(unicodedata.category(c).startswith("P") for c in form)


@dataclass(frozen=True)
class Token:
    form: str
    pos: str = "_"
    dep: str = "_"


@dataclass(frozen=True)
class Node:
    id: int
    kind: str
    token: int | None = None  # 1-based token position, terminals only


@dataclass(frozen=True)
class Edge:
    parent: int
    child: int
    label: Label
    remote: bool = False


def edge_sort_key(e: Edge) -> tuple[int, int, str, bool]:
    return (e.parent, e.child, e.label.value, e.remote)


@dataclass(frozen=True)
class Graph:
    tokens: tuple[Token, ...]
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    graph_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    # -- cached lookups ----------------------------------------------------

    @cached_property
    def _node_by_id(self) -> dict[int, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def root_id(self) -> int:
        roots = [n.id for n in self.nodes if n.kind == ROOT]
        if len(roots) != 1:
            raise DataError(f"graph {self.graph_id!r}: expected one root, found {len(roots)}")
        return roots[0]

    @cached_property
    def _children(self) -> dict[int, tuple[Edge, ...]]:
        out: dict[int, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out.setdefault(e.parent, []).append(e)
        return {nid: tuple(es) for nid, es in out.items()}

    @cached_property
    def _parents(self) -> dict[int, tuple[Edge, ...]]:
        inc: dict[int, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            inc.setdefault(e.child, []).append(e)
        return {nid: tuple(es) for nid, es in inc.items()}

    @cached_property
    def _yields(self) -> dict[int, frozenset[int]]:
        memo: dict[int, frozenset[int]] = {}
        active: set[int] = set()

        def walk(nid: int) -> frozenset[int]:
            if nid in memo:
                return memo[nid]
            if nid in active:  # cycle guard; validate() reports the cycle itself
                return frozenset()
            node = self._node_by_id.get(nid)
            if node is not None and node.kind == TERMINAL:
                memo[nid] = frozenset((nid,))
                return memo[nid]
            active.add(nid)
            acc: set[int] = set()
            for e in self._children.get(nid, ()):
                if not e.remote:
                    acc |= walk(e.child)
            active.discard(nid)
            memo[nid] = frozenset(acc)
            return memo[nid]

        for n in self.nodes:
            walk(n.id)
        return memo

    # -- queries -----------------------------------------------------------

    def node(self, nid: int) -> Node:
        return self._node_by_id[nid]

    def has_node(self, nid: int) -> bool:
        return nid in self._node_by_id

    def is_terminal(self, nid: int) -> bool:
        n = self._node_by_id.get(nid)
        return n is not None and n.kind == TERMINAL

    def child_edges(self, nid: int) -> tuple[Edge, ...]:
        """All outgoing edges of a node, remote included."""
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

    def primary_yield(self, nid: int) -> frozenset[int]:
        """Token positions of terminals reachable via primary edges."""
        return self._yields.get(nid, frozenset())

    def edge_yield(self, edge: Edge) -> frozenset[int]:
        return self.primary_yield(edge.child)

    @property
    def terminal_ids(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.tokens) + 1))

    def punct_positions(self) -> frozenset[int]:
        return frozenset(
            i for i, tok in enumerate(self.tokens, start=1) if is_punct(tok.form)
        )


# -- validation --------------------------------------------------------------


def validate(graph: Graph) -> list[str]:
    """Check every structural invariant; return one message per violation.

    Messages are "invariant-name: detail". An empty list means the graph is
    well formed.
    """
    out: list[str] = []
    ids = [n.id for n in graph.nodes]
    if len(ids) != len(set(ids)):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        out.append(f"duplicate-node-id: {dupes}")
        return out  # everything else assumes unique ids

    by_id = {n.id: n for n in graph.nodes}
    roots = [n for n in graph.nodes if n.kind == ROOT]
    if len(roots) != 1:
        out.append(f"exactly-one-root: found {len(roots)}")

    for n in graph.nodes:
        if n.kind not in _KINDS:
            out.append(f"node-kind: node {n.id} has kind {n.kind!r}")
        if n.kind == TERMINAL:
            if n.token != n.id:
                out.append(f"terminal-ids: node {n.id} bound to token {n.token}")
        elif n.token is not None:
            out.append(f"token-binding: non-terminal {n.id} carries token {n.token}")

    n_tok = len(graph.tokens)
    for k in range(1, n_tok + 1):
        node = by_id.get(k)
        if node is None or node.kind != TERMINAL:
            out.append(f"terminal-ids: token {k} has no terminal node with id {k}")
    extra_terminals = [n.id for n in graph.nodes if n.kind == TERMINAL and not 1 <= n.id <= n_tok]
    if extra_terminals:
        out.append(f"terminal-ids: terminals {extra_terminals} outside token range 1..{n_tok}")

    seen: set[Edge] = set()
    for e in graph.edges:
        if e.parent not in by_id or e.child not in by_id:
            out.append(f"unknown-node: edge {e.parent}->{e.child}")
            continue
        if by_id[e.parent].kind == TERMINAL:
            out.append(f"terminal-parent: terminal {e.parent} has child {e.child}")
        if by_id[e.child].kind == ROOT:
            out.append(f"root-parent: root {e.child} has parent {e.parent}")
        if e in seen:
            out.append(f"duplicate-edge: {e.parent}->{e.child} {e.label.value} remote={e.remote}")
        seen.add(e)

    if out:
        # structural basics broken; the tree/cycle checks below would misfire
        return out

    for n in graph.nodes:
        if n.kind == ROOT:
            continue
        k = sum(1 for e in graph.edges if e.child == n.id and not e.remote)
        if k != 1:
            out.append(f"single-primary-parent: node {n.id} has {k} primary parents")

    # cycle detection over all edges
    color: dict[int, int] = {}  # 0/absent = white, 1 = on stack, 2 = done
    children = {n.id: [e.child for e in graph.edges if e.parent == n.id] for n in graph.nodes}

    def dfs(start: int) -> int | None:
        stack: list[tuple[int, int]] = [(start, 0)]
        color[start] = 1
        while stack:
            nid, idx = stack[-1]
            kids = children[nid]
            if idx < len(kids):
                stack[-1] = (nid, idx + 1)
                c = kids[idx]
                st = color.get(c, 0)
                if st == 1:
                    return c
                if st == 0:
                    color[c] = 1
                    stack.append((c, 0))
            else:
                color[nid] = 2
                stack.pop()
        return None

    for n in graph.nodes:
        if color.get(n.id, 0) == 0:
            hit = dfs(n.id)
            if hit is not None:
                out.append(f"acyclic: cycle through node {hit}")
                break

    if not out:
        reach = {graph.root_id}
        frontier = [graph.root_id]
        while frontier:
            nid = frontier.pop()
            for c in children[nid]:
                if c not in reach:
                    reach.add(c)
                    frontier.append(c)
        missing = sorted(n.id for n in graph.nodes if n.id not in reach)
        if missing:
            out.append(f"reachability: nodes {missing} unreachable from root")

    return out


# -- normalization -----------------------------------------------------------


def collapse_preterminals(graph: Graph) -> Graph:
    """Dissolve unary pre-terminals: an internal node whose sole outgoing edge
    is a primary Terminal-labeled edge to a terminal is replaced by that
    terminal, which inherits the pre-terminal's incoming edges.

    Pre-terminals sitting directly under the root are kept, so a bare
    root-over-token graph keeps its wrapping unit. Applied to a fixpoint.
    """
    nodes = list(graph.nodes)
    edges = list(graph.edges)
    try:
        root_id = graph.root_id
    except DataError:
        root_id = None
    while True:
        by_id = {n.id: n for n in nodes}
        children: dict[int, list[Edge]] = {}
        parents: dict[int, list[Edge]] = {}
        for e in edges:
            children.setdefault(e.parent, []).append(e)
            parents.setdefault(e.child, []).append(e)
        target = None
        for n in nodes:
            if n.kind != INTERNAL:
                continue
            out = children.get(n.id, [])
            if len(out) != 1:
                continue
            e = out[0]
            if e.remote or e.label is not Label.TERMINAL:
                continue
            child = by_id.get(e.child)
            if child is None or child.kind != TERMINAL:
                continue
            inc = parents.get(n.id, [])
            if root_id is not None and any(p.parent == root_id for p in inc):
                continue
            target = (n.id, e.child)
            break
        if target is None:
            break
        pre, term = target
        rewired: list[Edge] = []
        seen: set[Edge] = set()
        for e in edges:
            if e.parent == pre:
                continue  # the Terminal edge disappears
            if e.child == pre:
                e = Edge(e.parent, term, e.label, e.remote)
            if e not in seen:
                seen.add(e)
                rewired.append(e)
        edges = rewired
        nodes = [n for n in nodes if n.id != pre]
    return Graph(graph.tokens, tuple(nodes), tuple(edges), graph.graph_id)


def strip_unsupported(graph: Graph) -> Graph:
    """Remove constructions the parser does not model.

    Drops linkage nodes (any node with an outgoing LR- or LA-labeled edge)
    with all their incident edges, then every internal node whose primary
    yield is empty (unanchored units) with all its incident edges. Identity
    on clean graphs; idempotent.
    """
    linkage = {e.parent for e in graph.edges
               if e.label in (Label.LINK_RELATION, Label.LINK_ARGUMENT)}
    nodes = [n for n in graph.nodes if n.id not in linkage]
    edges = [e for e in graph.edges
             if e.parent not in linkage and e.child not in linkage
             and e.label not in (Label.LINK_RELATION, Label.LINK_ARGUMENT)]
    interim = Graph(graph.tokens, tuple(nodes), tuple(edges), graph.graph_id)

    empty = {n.id for n in interim.nodes
             if n.kind == INTERNAL and not interim.primary_yield(n.id)}
    nodes = [n for n in interim.nodes if n.id not in empty]
    edges = [e for e in interim.edges if e.parent not in empty and e.child not in empty]
    result = Graph(graph.tokens, tuple(nodes), tuple(edges), graph.graph_id)

    problems = validate(result)
    if problems:
        raise DataError(
            f"graph {graph.graph_id!r} invalid after strip: " + "; ".join(problems)
        )
    return result


# -- corpus statistics --------------------------------------------------------


@dataclass(frozen=True)
class StatsReport:
    """Corpus counts, excluding every root node and its incident edges."""

    sentences: int = 0
    nodes: int = 0
    terminals: int = 0
    internals: int = 0
    discontinuous: int = 0
    reentrant: int = 0
    edges: int = 0
    primary: int = 0
    remote: int = 0

    def _pct(self, part: int) -> float | None:
        return 100.0 * part / self.nodes if self.nodes else None

    @property
    def pct_terminal(self) -> float | None:
        return self._pct(self.terminals)

    @property
    def pct_internal(self) -> float | None:
        return self._pct(self.internals)

    @property
    def pct_discontinuous(self) -> float | None:
        return self._pct(self.discontinuous)

    @property
    def pct_reentrant(self) -> float | None:
        return self._pct(self.reentrant)

    @property
    def pct_primary(self) -> float | None:
        return 100.0 * self.primary / self.edges if self.edges else None

    @property
    def pct_remote(self) -> float | None:
        return 100.0 * self.remote / self.edges if self.edges else None

    @property
    def children_per_internal(self) -> float | None:
        return self.edges / self.internals if self.internals else None


def corpus_stats(graphs: Iterable[Graph]) -> StatsReport:
    """Aggregate counts over a corpus; raises DataError on an invalid graph."""
    sentences = nodes = terminals = internals = 0
    discontinuous = reentrant = 0
    edges = primary = remote = 0
    for g in graphs:
        problems = validate(g)
        if problems:
            raise DataError(f"graph {g.graph_id!r} invalid: " + "; ".join(problems))
        sentences += 1
        root = g.root_id
        for n in g.nodes:
            if n.kind == ROOT:
                continue
            nodes += 1
            if n.kind == TERMINAL:
                terminals += 1
            else:
                internals += 1
            y = sorted(g.primary_yield(n.id))
            if y and y[-1] - y[0] + 1 != len(y):
                discontinuous += 1
            if len(g.parent_edges(n.id)) > 1:
                reentrant += 1
        for e in g.edges:
            if e.parent == root:
                continue
            edges += 1
            if e.remote:
                remote += 1
            else:
                primary += 1
    return StatsReport(sentences, nodes, terminals, internals,
                       discontinuous, reentrant, edges, primary, remote)


def format_stats(report: StatsReport) -> str:
    def pct(v: float | None) -> str:
        return "--" if v is None else f"{v:.1f}%"

    lines = [
        f"sentences                {report.sentences}",
        f"nodes                    {report.nodes}",
        f"  terminal               {report.terminals} ({pct(report.pct_terminal)})",
        f"  non-terminal           {report.internals} ({pct(report.pct_internal)})",
        f"  discontinuous          {report.discontinuous} ({pct(report.pct_discontinuous)})",
        f"  reentrant              {report.reentrant} ({pct(report.pct_reentrant)})",
        f"edges                    {report.edges}",
        f"  primary                {report.primary} ({pct(report.pct_primary)})",
        f"  remote                 {report.remote} ({pct(report.pct_remote)})",
        "children per non-terminal "
        + ("--" if report.children_per_internal is None
           else f"{report.children_per_internal:.2f}"),
    ]
    return "\n".join(lines)


# -- JSONL serialization -------------------------------------------------------


def graph_to_dict(graph: Graph) -> dict:
    return {
        "id": graph.graph_id,
        "tokens": [{"form": t.form, "pos": t.pos, "dep": t.dep} for t in graph.tokens],
        "nodes": [
            {"id": n.id, "kind": n.kind, **({"token": n.token} if n.kind == TERMINAL else {})}
            for n in sorted(graph.nodes, key=lambda n: n.id)
        ],
        "edges": [
            {"parent": e.parent, "child": e.child, "label": e.label.value, "remote": e.remote}
            for e in sorted(graph.edges, key=edge_sort_key)
        ],
    }


def _check_fields(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise DataError(f"unknown field {sorted(unknown)[0]!r} in {where}")


def graph_from_dict(data: dict, normalize: bool = True) -> Graph:
    """Build a Graph from its JSON form. Unknown fields are rejected.

    Unary Terminal-labeled pre-terminals are collapsed on the way in unless
    normalize is False.
    """
    if not isinstance(data, dict):
        raise DataError("graph record is not an object")
    _check_fields(data, {"id", "tokens", "nodes", "edges"}, "graph")
    gid = data.get("id", "")
    if not isinstance(gid, str):
        raise DataError("graph id must be a string")
    tokens = []
    for i, t in enumerate(data.get("tokens", []), start=1):
        if not isinstance(t, dict):
            raise DataError(f"token {i} is not an object")
        _check_fields(t, {"form", "pos", "dep"}, f"token {i}")
        if "form" not in t or not isinstance(t["form"], str):
            raise DataError(f"token {i} needs a string form")
        tokens.append(Token(t["form"], str(t.get("pos", "_")), str(t.get("dep", "_"))))
    nodes = []
    for rec in data.get("nodes", []):
        if not isinstance(rec, dict):
            raise DataError("node record is not an object")
        _check_fields(rec, {"id", "kind", "token"}, f"node {rec.get('id')}")
        nid, kind = rec.get("id"), rec.get("kind")
        if not isinstance(nid, int) or isinstance(nid, bool):
            raise DataError(f"node id {nid!r} is not an integer")
        if kind not in _KINDS:
            raise DataError(f"node {nid} has unknown kind {kind!r}")
        token = rec.get("token")
        if token is not None and (not isinstance(token, int) or isinstance(token, bool)):
            raise DataError(f"node {nid} token binding {token!r} is not an integer")
        nodes.append(Node(nid, kind, token))
    edges = []
    for rec in data.get("edges", []):
        if not isinstance(rec, dict):
            raise DataError("edge record is not an object")
        _check_fields(rec, {"parent", "child", "label", "remote"},
                      f"edge {rec.get('parent')}->{rec.get('child')}")
        for key in ("parent", "child"):
            if not isinstance(rec.get(key), int) or isinstance(rec.get(key), bool):
                raise DataError(f"edge field {key!r} must be an integer")
        try:
            label = label_from_string(str(rec.get("label")))
        except ValueError as exc:
            raise DataError(str(exc)) from None
        remote = rec.get("remote", False)
        if not isinstance(remote, bool):
            raise DataError("edge field 'remote' must be a boolean")
        edges.append(Edge(rec["parent"], rec["child"], label, remote))
    g = Graph(tuple(tokens), tuple(nodes), tuple(edges), gid)
    return collapse_preterminals(g) if normalize else g


def read_graphs(fh: IO[str], normalize: bool = True) -> list[Graph]:
    """Read one JSON graph per line; blank lines are skipped."""
    out = []
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: bad JSON ({exc.msg})") from None
        try:
            out.append(graph_from_dict(data, normalize=normalize))
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
    return out


def write_graphs(graphs: Iterable[Graph], fh: IO[str]) -> None:
    for g in graphs:
        fh.write(json.dumps(graph_to_dict(g), ensure_ascii=False) + "\n")
