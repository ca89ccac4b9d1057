import io

import pytest

from dagparse.graph import (
    DataError,
    Edge,
    Graph,
    INTERNAL,
    Node,
    ROOT,
    TERMINAL,
    Token,
    collapse_preterminals,
    corpus_stats,
    format_stats,
    graph_from_dict,
    graph_to_dict,
    is_punct,
    read_graphs,
    strip_unsupported,
    validate,
    write_graphs,
)
from dagparse.labels import Label

from conftest import build_graph


def same_graph(a, b):
    return (
        a.tokens == b.tokens
        and set(a.nodes) == set(b.nodes)
        and sorted(a.edges, key=repr) == sorted(b.edges, key=repr)
    )


# -- basic queries -----------------------------------------------------------


def test_fixtures_validate(mini_corpus):
    for g in mini_corpus:
        assert validate(g) == [], g.graph_id


def test_is_punct():
    assert is_punct(",")
    assert is_punct(".")
    assert is_punct("--")
    assert is_punct("(")
    assert not is_punct("word")
    assert not is_punct("a.")
    assert not is_punct("3")
    assert not is_punct("")


def test_primary_yields(after_graduation, gave_up):
    g = after_graduation
    assert g.primary_yield(9) == {4, 5, 6, 7}
    assert g.primary_yield(10) == {6, 7}
    # the remote participant does not join the yield
    assert g.primary_yield(8) == {2}
    assert g.primary_yield(0) == {1, 2, 3, 4, 5, 6, 7}
    assert g.primary_yield(4) == {4}
    assert gave_up.primary_yield(5) == {2, 4}


def test_parent_and_child_queries(after_graduation):
    g = after_graduation
    assert g.root_id == 0
    assert g.terminal_ids == (1, 2, 3, 4, 5, 6, 7)
    assert g.punct_positions() == {3}
    assert {e.parent for e in g.parent_edges(4)} == {8, 9}
    assert g.primary_parent_edge(4).parent == 9
    assert len(g.child_edges(8)) == 2
    assert len(g.primary_child_edges(8)) == 1
    assert g.is_terminal(3) and not g.is_terminal(8)


# -- validation --------------------------------------------------------------


def violations(g):
    return [msg.split(":")[0] for msg in validate(g)]


def test_validate_duplicate_node_id(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes + (Node(5, INTERNAL),), gave_up.edges)
    assert violations(g) == ["duplicate-node-id"]


def test_validate_exactly_one_root(gave_up):
    nodes = tuple(n for n in gave_up.nodes if n.kind != ROOT)
    edges = tuple(e for e in gave_up.edges if e.parent != 0)
    g = Graph(gave_up.tokens, nodes, edges)
    assert "exactly-one-root" in violations(g)


def test_validate_node_kind(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes + (Node(6, "weird"),), gave_up.edges)
    assert "node-kind" in violations(g)


def test_validate_terminal_id_binding():
    nodes = (Node(0, ROOT), Node(1, TERMINAL, 2), Node(2, TERMINAL, 1))
    g = Graph(
        (Token("a"), Token("b")),
        nodes,
        (Edge(0, 1, Label.PROCESS), Edge(0, 2, Label.PARTICIPANT)),
    )
    assert violations(g).count("terminal-ids") == 2


def test_validate_token_binding(gave_up):
    nodes = tuple(Node(5, INTERNAL, 3) if n.id == 5 else n for n in gave_up.nodes)
    g = Graph(gave_up.tokens, nodes, gave_up.edges)
    assert "token-binding" in violations(g)


def test_validate_unknown_node(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes,
              gave_up.edges + (Edge(5, 99, Label.ELABORATOR),))
    assert "unknown-node" in violations(g)


def test_validate_terminal_parent(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes,
              gave_up.edges + (Edge(1, 3, Label.ELABORATOR, True),))
    assert "terminal-parent" in violations(g)


def test_validate_root_parent(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes,
              gave_up.edges + (Edge(5, 0, Label.ELABORATOR, True),))
    assert "root-parent" in violations(g)


def test_validate_duplicate_edge(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes,
              gave_up.edges + (Edge(5, 2, Label.CENTER),))
    assert "duplicate-edge" in violations(g)


def test_validate_single_primary_parent(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes,
              gave_up.edges + (Edge(0, 2, Label.PARTICIPANT),))
    assert "single-primary-parent" in violations(g)
    g = Graph(gave_up.tokens, gave_up.nodes,
              tuple(e for e in gave_up.edges if e.child != 4))
    assert "single-primary-parent" in violations(g)


def test_validate_cycle(after_graduation):
    # a remote edge closing a loop still counts as a cycle
    g = Graph(after_graduation.tokens, after_graduation.nodes,
              after_graduation.edges + (Edge(10, 9, Label.ELABORATOR, True),))
    assert "acyclic" in violations(g)


def test_parallel_edges_with_distinct_labels_are_fine(gave_up):
    g = Graph(gave_up.tokens, gave_up.nodes,
              gave_up.edges + (Edge(0, 5, Label.PARTICIPANT, True),))
    assert validate(g) == []
    # and they serialize without complaint
    graph_to_dict(g)


# -- normalization -----------------------------------------------------------


def chain_graph():
    # root -> 3 -H-> pre-terminal 4 -Terminal-> 1, plus terminal 2 under 3
    return build_graph(
        "chain",
        [("a",), ("b",)],
        2,
        [(0, 3, "H"), (3, 4, "P"), (4, 1, "Terminal"), (3, 2, "A")],
    )


def test_collapse_preterminal():
    g = collapse_preterminals(chain_graph())
    assert {n.id for n in g.nodes} == {0, 1, 2, 3}
    assert set(g.edges) == {
        Edge(0, 3, Label.PARALLEL_SCENE),
        Edge(3, 1, Label.PROCESS),
        Edge(3, 2, Label.PARTICIPANT),
    }
    assert validate(g) == []


def test_collapse_keeps_root_parented_preterminal():
    g = build_graph("one", [("hi",)], 1, [(0, 2, "H"), (2, 1, "Terminal")])
    assert same_graph(collapse_preterminals(g), g)


def test_collapse_rewires_remote_parents():
    g = build_graph(
        "two-scenes",
        [("a",), ("b",)],
        3,
        [(0, 3, "H"), (0, 5, "H"), (3, 4, "P"), (4, 1, "Terminal"),
         (5, 2, "P"), (5, 4, "A", True)],
    )
    collapsed = collapse_preterminals(g)
    assert {n.id for n in collapsed.nodes} == {0, 1, 2, 3, 5}
    assert Edge(3, 1, Label.PROCESS) in collapsed.edges
    assert Edge(5, 1, Label.PARTICIPANT, True) in collapsed.edges
    assert validate(collapsed) == []


def test_collapse_runs_to_fixpoint():
    # pre-terminal over pre-terminal: both dissolve
    g = build_graph(
        "stacked",
        [("a",), ("b",)],
        3,
        [(0, 3, "H"), (3, 2, "A"), (3, 4, "P"),
         (4, 5, "Terminal"), (5, 1, "Terminal")],
    )
    collapsed = collapse_preterminals(g)
    assert {n.id for n in collapsed.nodes} == {0, 1, 2, 3}
    assert Edge(3, 1, Label.PROCESS) in collapsed.edges


def test_strip_removes_linkage(after_graduation):
    g = after_graduation
    with_linkage = Graph(
        g.tokens,
        g.nodes + (Node(11, INTERNAL),),
        g.edges + (
            Edge(11, 1, Label.LINK_RELATION),
            Edge(11, 8, Label.LINK_ARGUMENT),
            Edge(11, 9, Label.LINK_ARGUMENT),
        ),
        g.graph_id,
    )
    assert same_graph(strip_unsupported(with_linkage), g)


def test_strip_removes_unanchored_units(after_graduation):
    g = after_graduation
    with_empty = Graph(
        g.tokens,
        g.nodes + (Node(11, INTERNAL),),
        g.edges + (Edge(9, 11, Label.PARTICIPANT),),
        g.graph_id,
    )
    assert same_graph(strip_unsupported(with_empty), g)


def test_strip_is_identity_on_clean_graphs(mini_corpus):
    for g in mini_corpus:
        assert same_graph(strip_unsupported(g), g)


def test_strip_reports_unfixable_graphs(gave_up):
    # the only primary parent of terminal 1 is a linkage node: after the strip
    # the graph cannot stand
    g = gave_up
    edges = tuple(e for e in g.edges if e.child != 1) + (Edge(11, 1, Label.LINK_RELATION),)
    broken = Graph(g.tokens, g.nodes + (Node(11, INTERNAL),), edges, g.graph_id)
    with pytest.raises(DataError, match="invalid after strip"):
        strip_unsupported(broken)


# -- statistics ----------------------------------------------------------------


def test_corpus_stats(mini_corpus):
    r = corpus_stats(mini_corpus)
    assert r.sentences == 3
    assert r.nodes == 22
    assert r.terminals == 17
    assert r.internals == 5
    assert r.discontinuous == 1
    assert r.reentrant == 1
    assert r.edges == 13
    assert r.primary == 12
    assert r.remote == 1
    assert r.children_per_internal == pytest.approx(2.6)


def test_stats_formatting(mini_corpus):
    text = format_stats(corpus_stats(mini_corpus))
    assert "92.3%" in text
    assert "7.7%" in text
    assert "2.60" in text
    empty = format_stats(corpus_stats([]))
    assert "--" in empty


def test_stats_rejects_invalid(gave_up):
    broken = Graph(gave_up.tokens, gave_up.nodes,
                   gave_up.edges + (Edge(5, 0, Label.ELABORATOR),))
    with pytest.raises(DataError):
        corpus_stats([broken, gave_up])


# -- serialization -------------------------------------------------------------


def test_jsonl_round_trip(mini_corpus):
    buf = io.StringIO()
    write_graphs(mini_corpus, buf)
    buf.seek(0)
    loaded = read_graphs(buf)
    assert len(loaded) == 3
    for a, b in zip(mini_corpus, loaded):
        assert same_graph(a, b)
        assert a.graph_id == b.graph_id


def test_read_rejects_unknown_fields(after_graduation):
    rec = graph_to_dict(after_graduation)
    rec["extra"] = 1
    import json
    buf = io.StringIO(json.dumps(rec) + "\n")
    with pytest.raises(DataError, match="line 1.*unknown field 'extra'"):
        read_graphs(buf)


def test_read_rejects_unknown_token_fields(after_graduation):
    rec = graph_to_dict(after_graduation)
    rec["tokens"][0]["lemma"] = "after"
    import json
    with pytest.raises(DataError, match="unknown field 'lemma'"):
        read_graphs(io.StringIO(json.dumps(rec)))


def test_read_rejects_bad_json():
    with pytest.raises(DataError, match="line 2: bad JSON"):
        read_graphs(io.StringIO('{"id": "ok", "tokens": [], "nodes": [], "edges": []}\n{oops\n'))


def test_read_rejects_bad_label(after_graduation):
    rec = graph_to_dict(after_graduation)
    rec["edges"][0]["label"] = "XYZ"
    import json
    with pytest.raises(DataError, match="unknown edge label"):
        read_graphs(io.StringIO(json.dumps(rec)))


def test_read_rejects_non_bool_remote(after_graduation):
    rec = graph_to_dict(after_graduation)
    rec["edges"][0]["remote"] = 1
    import json
    with pytest.raises(DataError, match="remote"):
        read_graphs(io.StringIO(json.dumps(rec)))


def test_read_collapses_preterminals_by_default():
    rec = graph_to_dict(chain_graph())
    import json
    line = json.dumps(rec)
    normalized = read_graphs(io.StringIO(line))[0]
    assert {n.id for n in normalized.nodes} == {0, 1, 2, 3}
    raw = read_graphs(io.StringIO(line), normalize=False)[0]
    assert {n.id for n in raw.nodes} == {0, 1, 2, 3, 4}


def test_read_skips_blank_lines(after_graduation):
    buf = io.StringIO()
    buf.write("\n")
    write_graphs([after_graduation], buf)
    buf.write("\n")
    buf.seek(0)
    assert len(read_graphs(buf)) == 1
