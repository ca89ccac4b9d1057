"""Transition-based parsing of text into labeled DAGs.

The package covers the full pipeline: a graph data model with strict JSONL
serialization, an arc-eager-with-swap transition system that builds DAGs
over the tokens of a sentence, a dynamic oracle for training, a sparse
averaged-perceptron classifier, conversion to and from bilexical dependency
graphs (and to strict surface trees), and labeled-F evaluation.
"""

__version__ = "0.1.0"

from .graph import Edge, Graph, Node, Token
from .labels import Label

__all__ = ["Edge", "Graph", "Label", "Node", "Token", "__version__"]
