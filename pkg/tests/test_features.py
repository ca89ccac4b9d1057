import dataclasses

from dagparse.features import (
    HASH_SPACE,
    RATIO_KEY,
    TEMPLATES,
    extract,
    extract_raw,
    feature_key,
    gap_profile,
    head_child_edge,
    head_terminal,
    navigate,
    ratio,
)
from dagparse.graph import Edge, Token
from dagparse.labels import Label
from dagparse.transitions import Kind, Transition, apply, init_state

SH = Transition(Kind.SHIFT)
RD = Transition(Kind.REDUCE)
SW = Transition(Kind.SWAP)


def advance(state, *ts):
    for t in ts:
        state = apply(state, t)
    return state


def RE(lab):
    return Transition(Kind.RIGHT_EDGE, Label(lab))


def NODE(lab):
    return Transition(Kind.NODE, Label(lab))


def raw_map(state):
    return dict(extract_raw(state))


def test_template_inventory():
    assert len(TEMPLATES) == 113
    assert len(set(TEMPLATES)) == 113
    for tid in ("s0wcq", "s0b0e", "a1", "s0xs1x", "s0ruwe", "b0wR"):
        assert tid in TEMPLATES


def test_head_descent_on_graph(after_graduation):
    g = after_graduation
    # the head of the whole graph walks H -> leftmost scene -> its process
    assert head_terminal(g, 0) == 2
    assert head_terminal(g, 9) == 5
    assert head_terminal(g, 10) == 7
    assert head_child_edge(g, 10).label is Label.CENTER
    assert head_terminal(g, 3) == 3


def test_gap_profile(gave_up):
    assert gap_profile(gave_up, 5) == ("gap", 1)
    assert gap_profile(gave_up, 0) == ("pass", 0)
    assert gap_profile(gave_up, 1) == ("none", 0)


def test_navigation(after_graduation):
    g = after_graduation
    # root's primary children by leftmost yield: After(1), 8, comma, 9
    assert navigate(g, 0, "l") == 1
    assert navigate(g, 0, "r") == 9
    assert navigate(g, 0, "u") is None
    assert navigate(g, 8, "u") == 2  # the remote child does not count
    assert navigate(g, 9, "rl") == 6
    assert navigate(g, 1, "l") is None


def test_initial_state_features():
    s = init_state([Token("John", "PROPN", "nsubj"), Token("gave", "VERB", "root"),
                    Token("everything", "PRON", "obj"), Token("up", "ADP", "prt")])
    fired = raw_map(s)
    assert fired["b0wtd"] == "John|PROPN|nsubj"
    assert fired["b3wtd"] == "up|ADP|prt"
    assert fired["b0wb1td"] == "John|VERB|root"
    assert fired["s0P"] == "0"
    assert fired["b0wC"] == "John|0"
    assert fired["s0R"] == "0"
    # the root has no yield yet and no children: every w/t/d/e/x template
    # on s0 is silent, and there is no history
    for tid in ("s0we", "s0tde", "s0xy", "a0", "a1", "s0s1", "s1wp"):
        assert tid not in fired


def test_stack_features_after_attachment():
    s = init_state([Token("John", "PROPN", "nsubj"), Token("left", "VERB", "root")])
    s = advance(s, SH, RE("A"))
    fired = raw_map(s)
    # s0 is the terminal John; s1 is the root, whose head is now John
    assert fired["s1we"] == "John|A"
    assert fired["s0xy"] == "none|0"
    assert fired["s0P"] == "1"
    assert fired["s1s0"] == "1"
    assert "s0s1" not in fired
    assert fired["a0"] == "RIGHT-EDGE-A"
    assert "s0we" not in fired  # terminals have no e
    assert fired["s0ws1w"] == "John|John"
    assert fired["a1"] == "SHIFT"


def test_separator_features():
    s = init_state([Token("a"), Token(","), Token("b")])
    s = advance(s, SH, SH, SH, SW)
    assert s.stack == (0, 1, 3)
    fired = raw_map(s)
    assert fired["s1wq"] == "a|1"
    assert fired["s1wp"] == "a|,"
    assert fired["s0wq"] == "b|1"
    # no-punctuation interval still fires q with 0
    s2 = advance(init_state([Token("a"), Token("b")]), SH, SH)
    fired2 = raw_map(s2)
    assert fired2["s0wq"] == "b|0"
    assert "s0wp" not in fired2


def test_gap_features_mid_parse(gave_up):
    seq = [SH, RE("A"), RD, SH, SH, SW, RE("A"), RD, SH, NODE("C"), RD,
           SH, SH, RE("C"), RD, RE("P"), RD]
    s = init_state(gave_up.tokens)
    s = advance(s, *seq)
    assert s.stack == (0,)
    fired = raw_map(s)
    # node 5 spans {2, 4}: the root sees a discontinuous child below it
    assert fired["s0xy"] == "pass|0"
    assert fired["s0C"] == "3"
    assert fired["s0R"] == "0"


def test_edge_label_template():
    toks = (Token("a"), Token("b"))
    s = init_state(toks)
    s = dataclasses.replace(
        s,
        stack=(0, 1, 3),
        buffer=(2,),
        node_kinds=s.node_kinds + ("internal",),
        edges=(Edge(3, 1, Label.CENTER), Edge(3, 2, Label.ELABORATOR, True),
               Edge(3, 2, Label.PARTICIPANT, True)),
    )
    fired = raw_map(s)
    assert fired["s0b0"] == "1"
    # two remote edges: alphabetically first label wins (A before E)
    assert fired["s0b0e"] == "A"
    assert "b0s0" not in fired
    assert fired["s0wcq"] == "a|C|0"


def test_hashing_and_ratio():
    k = feature_key("s0we", "x|A")
    assert 0 <= k < HASH_SPACE
    assert k == feature_key("s0we", "x|A")
    assert k != feature_key("s0we", "x|B")
    assert RATIO_KEY == HASH_SPACE

    s = init_state([Token("a"), Token("b")])
    assert ratio(s) == 2 / 3
    keys, r = extract(s)
    assert len(keys) == len(extract_raw(s))
    assert r == 2 / 3
    assert all(0 <= key < HASH_SPACE for key in keys)


def test_unary_navigation_after_node():
    s = init_state([Token("a"), Token("b")])
    s = advance(s, SH, NODE("P"), RD, SH)
    assert s.stack == (0, 3)
    fired = raw_map(s)
    # u lands on the node's only child, terminal a, whose e is absent,
    # so the full s0uwe template stays silent while s0we fires
    assert "s0uwe" not in fired
    assert fired["s0we"] == "a|P"
    assert fired["s0C"] == "1"
