"""Shared fixtures: three small hand-annotated graphs.

after_graduation has a remote edge (John participates in both scenes),
gave_up has a discontinuous unit (gave ... up), big_dog is a flat
single-scene sentence with punctuation.
"""

import pytest

from dagparse.graph import Edge, Graph, INTERNAL, Node, ROOT, TERMINAL, Token
from dagparse.labels import label_from_string


def build_graph(gid, tokens, n_internal, edges):
    """Assemble a graph from token triples and (parent, child, label[, remote])
    edge tuples. Internal node ids follow the terminals."""
    toks = tuple(Token(*t) for t in tokens)
    n = len(toks)
    nodes = [Node(0, ROOT)]
    nodes += [Node(k, TERMINAL, k) for k in range(1, n + 1)]
    nodes += [Node(n + 1 + j, INTERNAL) for j in range(n_internal)]
    built = []
    for spec in edges:
        parent, child, label = spec[:3]
        remote = bool(spec[3]) if len(spec) > 3 else False
        built.append(Edge(parent, child, label_from_string(label), remote))
    return Graph(toks, tuple(nodes), tuple(built), gid)


def after_graduation_graph():
    # After graduation, John moved to Paris.
    # Two scenes under the root; John is a remote participant of the first.
    # Internal nodes: 8 = "graduation" scene, 9 = "moved" scene, 10 = "to Paris".
    return build_graph(
        "after-graduation",
        [
            ("After", "ADP", "case"),
            ("graduation", "NOUN", "obl"),
            (",", "PUNCT", "punct"),
            ("John", "PROPN", "nsubj"),
            ("moved", "VERB", "root"),
            ("to", "ADP", "case"),
            ("Paris", "PROPN", "obl"),
        ],
        3,
        [
            (0, 1, "L"),
            (0, 8, "H"),
            (0, 3, "U"),
            (0, 9, "H"),
            (8, 2, "P"),
            (8, 4, "A", True),
            (9, 4, "A"),
            (9, 5, "P"),
            (9, 10, "A"),
            (10, 6, "R"),
            (10, 7, "C"),
        ],
    )


def gave_up_graph():
    # John gave everything up. Node 5 covers the discontinuous "gave ... up".
    return build_graph(
        "gave-up",
        [
            ("John", "PROPN", "nsubj"),
            ("gave", "VERB", "root"),
            ("everything", "PRON", "obj"),
            ("up", "ADP", "compound:prt"),
        ],
        1,
        [
            (0, 1, "A"),
            (0, 3, "A"),
            (0, 5, "P"),
            (5, 2, "C"),
            (5, 4, "C"),
        ],
    )


def big_dog_graph():
    # The very big dog barked. One flat participant unit, node 7.
    return build_graph(
        "big-dog",
        [
            ("The", "DET", "det"),
            ("very", "ADV", "advmod"),
            ("big", "ADJ", "amod"),
            ("dog", "NOUN", "nsubj"),
            ("barked", "VERB", "root"),
            (".", "PUNCT", "punct"),
        ],
        1,
        [
            (0, 7, "A"),
            (0, 5, "P"),
            (0, 6, "U"),
            (7, 1, "F"),
            (7, 2, "E"),
            (7, 3, "E"),
            (7, 4, "C"),
        ],
    )


@pytest.fixture
def after_graduation():
    return after_graduation_graph()


@pytest.fixture
def gave_up():
    return gave_up_graph()


@pytest.fixture
def big_dog():
    return big_dog_graph()


@pytest.fixture
def mini_corpus():
    return [after_graduation_graph(), gave_up_graph(), big_dog_graph()]
