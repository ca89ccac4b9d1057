"""Conversions between graphs and bilexical dependency arcs.

to_bilexical projects every edge onto the head terminals of its endpoints,
keeping one labeled arc per projected edge (plus the remote flag) and the
head terminal of the root as the top. from_bilexical rebuilds a graph:
every terminal gets a pre-terminal wrapper, every terminal that heads
dependents also gets a unit node above the wrapper, dependents hang under
their head's unit, and the top's unit hangs under the root. Unary
pre-terminal wrappers are collapsed afterwards except directly under the
root, so a plain round trip reproduces yields whenever distinct units have
distinct head terminals. upper_bound measures exactly what survives.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import IO, Iterable

from .evaluate import ScoreReport, score_pair
from .features import head_terminal
from .graph import (
    DataError,
    Edge,
    Graph,
    INTERNAL,
    Node,
    ROOT,
    TERMINAL,
    Token,
    collapse_preterminals,
    is_punct,
    validate,
)
from .labels import Label, label_from_string


@dataclass(frozen=True)
class Arc:
    head: int
    dep: int
    label: Label
    remote: bool = False


@dataclass(frozen=True)
class BilexicalGraph:
    sent_id: str
    tokens: tuple[Token, ...]
    arcs: tuple[Arc, ...]
    top: int


def _arc_key(a: Arc):
    return (a.dep, a.head, a.label.value, a.remote)


def to_bilexical(graph: Graph) -> BilexicalGraph:
    """Project a graph onto arcs between head terminals."""
    heads: dict[int, int] = {}
    for n in graph.nodes:
        h = head_terminal(graph, n.id)
        if h is None:
            raise DataError(
                f"graph {graph.graph_id!r}: node {n.id} has no head terminal"
            )
        heads[n.id] = h
    arcs = {
        Arc(heads[e.parent], heads[e.child], e.label, e.remote)
        for e in graph.edges
        if heads[e.parent] != heads[e.child]
    }
    return BilexicalGraph(
        graph.graph_id,
        graph.tokens,
        tuple(sorted(arcs, key=_arc_key)),
        heads[graph.root_id],
    )


def _terminal_label(bi: BilexicalGraph, t: int) -> Label:
    """Category of the unit a terminal projects: punctuation, the head of a
    scene, the head of something with participants, or a plain center."""
    if is_punct(bi.tokens[t - 1].form):
        return Label.PUNCTUATION
    headed = {a.label for a in bi.arcs if a.head == t}
    if Label.PARALLEL_SCENE in headed:
        return Label.PARALLEL_SCENE
    if Label.PARTICIPANT in headed:
        return Label.PROCESS
    return Label.CENTER


def from_bilexical(bi: BilexicalGraph) -> Graph:
    """Rebuild a graph from arcs; inverse of to_bilexical up to yield loss."""
    n = len(bi.tokens)
    if n == 0:
        raise DataError(f"sentence {bi.sent_id!r} has no tokens")
    if not 1 <= bi.top <= n:
        raise DataError(f"sentence {bi.sent_id!r}: top {bi.top} out of range")
    arcs = sorted(set(bi.arcs), key=_arc_key)
    for a in arcs:
        if not (1 <= a.head <= n and 1 <= a.dep <= n):
            raise DataError(
                f"sentence {bi.sent_id!r}: arc {a.head}->{a.dep} out of range"
            )
        if a.head == a.dep:
            raise DataError(f"sentence {bi.sent_id!r}: token {a.dep} heads itself")

    heads_of: dict[int, list[Arc]] = {}
    for a in arcs:
        heads_of.setdefault(a.dep, []).append(a)

    def lead_arc(hs: list[Arc]) -> tuple[Arc, bool]:
        primary = [a for a in hs if not a.remote]
        if primary:
            return min(primary, key=lambda a: (a.head, a.label.value)), False
        return min(hs, key=lambda a: (a.head, a.label.value)), True

    # the primary head chain must not loop
    for start in heads_of:
        seen = {start}
        d = start
        while d in heads_of and d != bi.top:
            d = lead_arc(heads_of[d])[0].head
            if d in seen:
                raise DataError(
                    f"sentence {bi.sent_id!r}: head cycle involving token {d}"
                )
            seen.add(d)

    with_deps = sorted({a.head for a in arcs})
    pre = {t: n + t for t in range(1, n + 1)}
    inter = {t: 2 * n + 1 + i for i, t in enumerate(with_deps)}

    def unit(t: int) -> int:
        return inter.get(t, pre[t])

    edges = [Edge(pre[t], t, Label.TERMINAL) for t in range(1, n + 1)]
    edges += [Edge(inter[t], pre[t], _terminal_label(bi, t)) for t in with_deps]
    edges.append(Edge(0, unit(bi.top), Label.PARALLEL_SCENE))

    for d in range(1, n + 1):
        hs = heads_of.get(d, [])
        if d == bi.top:
            # the root edge owns the top; anything else pointing at it
            # can only be kept as a remote edge
            for a in hs:
                edges.append(Edge(inter[a.head], unit(d), a.label, True))
            continue
        if not hs:
            warnings.warn(
                f"sentence {bi.sent_id!r}: token {d} has no head; "
                "attaching it under the root"
            )
            edges.append(Edge(0, unit(d), _terminal_label(bi, d)))
            continue
        lead, promoted = lead_arc(hs)
        if promoted:
            warnings.warn(
                f"sentence {bi.sent_id!r}: token {d} only has remote heads; "
                "promoting the leftmost to primary"
            )
        edges.append(Edge(inter[lead.head], unit(d), lead.label, False))
        for a in hs:
            if a is not lead:
                edges.append(Edge(inter[a.head], unit(d), a.label, True))

    nodes = [Node(0, ROOT)]
    nodes += [Node(t, TERMINAL, t) for t in range(1, n + 1)]
    nodes += [Node(pre[t], INTERNAL) for t in range(1, n + 1)]
    nodes += [Node(inter[t], INTERNAL) for t in with_deps]

    g = collapse_preterminals(
        Graph(bi.tokens, tuple(nodes), tuple(dict.fromkeys(edges)), bi.sent_id)
    )
    problems = validate(g)
    if problems:
        raise DataError(
            f"sentence {bi.sent_id!r} invalid after conversion: "
            + "; ".join(problems)
        )
    return g


def to_tree(graph: Graph) -> Graph:
    """Drop remote edges, leaving the primary tree."""
    return Graph(
        graph.tokens,
        graph.nodes,
        tuple(e for e in graph.edges if not e.remote),
        graph.graph_id,
    )


def upper_bound(graph: Graph) -> ScoreReport:
    """Score the bilexical round trip of a graph against the graph itself."""
    return score_pair(from_bilexical(to_bilexical(graph)), graph)


# -- TSV serialization ---------------------------------------------------------


def write_bilexical(items: Iterable[BilexicalGraph], fh: IO[str]) -> None:
    """One block per sentence: '#id', token lines INDEX FORM POS DEP, arc
    lines HEAD DEP LABEL REMOTE, then 'TOP n', blank-line separated."""
    for bi in items:
        fh.write(f"#{bi.sent_id}\n")
        for i, tok in enumerate(bi.tokens, start=1):
            fh.write(f"{i}\t{tok.form}\t{tok.pos}\t{tok.dep}\n")
        for a in sorted(set(bi.arcs), key=_arc_key):
            fh.write(f"{a.head}\t{a.dep}\t{a.label.value}\t{int(a.remote)}\n")
        fh.write(f"TOP\t{bi.top}\n\n")


def read_bilexical(fh: IO[str]) -> list[BilexicalGraph]:
    """Parse blocks written by write_bilexical.

    Token lines are recognized by their first field counting up from 1;
    the first line breaking the count starts the arc section.
    """
    out: list[BilexicalGraph] = []
    sent_id = None
    tokens: list[Token] = []
    arcs: list[Arc] = []
    top = None
    in_arcs = False

    def flush(lineno: int) -> None:
        nonlocal sent_id, tokens, arcs, top, in_arcs
        if sent_id is None:
            return
        if top is None:
            raise DataError(f"line {lineno}: block {sent_id!r} has no TOP line")
        out.append(BilexicalGraph(sent_id, tuple(tokens), tuple(arcs), top))
        sent_id, tokens, arcs, top, in_arcs = None, [], [], None, False

    lineno = 0
    for lineno, line in enumerate(fh, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush(lineno)
            continue
        if line.startswith("#"):
            if sent_id is not None:
                raise DataError(f"line {lineno}: block {sent_id!r} not closed")
            sent_id = line[1:].strip()
            continue
        if sent_id is None:
            raise DataError(f"line {lineno}: content outside a block")
        fields = line.split("\t")
        if fields[0] == "TOP":
            if len(fields) != 2:
                raise DataError(f"line {lineno}: malformed TOP line")
            try:
                top = int(fields[1])
            except ValueError:
                raise DataError(f"line {lineno}: TOP index is not a number") from None
            continue
        if len(fields) != 4:
            raise DataError(f"line {lineno}: expected 4 tab-separated fields")
        if not in_arcs and fields[0] == str(len(tokens) + 1):
            tokens.append(Token(fields[1], fields[2], fields[3]))
            continue
        in_arcs = True
        try:
            head, dep = int(fields[0]), int(fields[1])
        except ValueError:
            raise DataError(f"line {lineno}: arc indices are not numbers") from None
        try:
            label = label_from_string(fields[2])
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        if fields[3] not in ("0", "1"):
            raise DataError(f"line {lineno}: remote flag must be 0 or 1")
        arcs.append(Arc(head, dep, label, fields[3] == "1"))
    flush(lineno + 1)
    return out
