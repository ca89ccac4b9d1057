"""Labeled yield-based scoring of predicted graphs against gold graphs.

An edge is represented by the punctuation-excluded primary yield of its
child plus its label; primary and remote edges are scored separately as
multisets. Edges whose yield is empty after removing punctuation drop out
on both sides, so a misplaced comma costs nothing. Root-incident edges
count like any other.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .graph import DataError, Graph


@dataclass(frozen=True)
class ClassScore:
    matched: int = 0
    predicted: int = 0
    gold: int = 0

    @property
    def precision(self) -> float | None:
        return self.matched / self.predicted if self.predicted else None

    @property
    def recall(self) -> float | None:
        return self.matched / self.gold if self.gold else None

    @property
    def f1(self) -> float:
        p = self.precision or 0.0
        r = self.recall or 0.0
        if p + r == 0.0:
            # nothing predicted and nothing to find is perfect agreement
            return 1.0 if self.predicted == 0 and self.gold == 0 else 0.0
        return 2 * p * r / (p + r)

    def __add__(self, other: "ClassScore") -> "ClassScore":
        return ClassScore(self.matched + other.matched,
                          self.predicted + other.predicted,
                          self.gold + other.gold)


@dataclass(frozen=True)
class ScoreReport:
    primary: ClassScore = ClassScore()
    remote: ClassScore = ClassScore()
    punct_excluded: bool = True

    def __add__(self, other: "ScoreReport") -> "ScoreReport":
        return ScoreReport(self.primary + other.primary,
                           self.remote + other.remote,
                           self.punct_excluded and other.punct_excluded)


def signatures(graph: Graph) -> tuple[Counter, Counter]:
    """(primary, remote) multisets of (yield, label) pairs."""
    punct = graph.punct_positions()
    primary: Counter = Counter()
    remote: Counter = Counter()
    for e in graph.edges:
        y = graph.edge_yield(e) - punct
        if not y:
            continue
        (remote if e.remote else primary)[(y, e.label.value)] += 1
    return primary, remote


def _match(pred: Counter, gold: Counter) -> ClassScore:
    matched = sum((pred & gold).values())
    return ClassScore(matched, sum(pred.values()), sum(gold.values()))


def score_pair(pred: Graph, gold: Graph) -> ScoreReport:
    """Score one predicted graph against its gold counterpart."""
    if tuple(t.form for t in pred.tokens) != tuple(t.form for t in gold.tokens):
        raise DataError(
            f"token mismatch between {pred.graph_id!r} and {gold.graph_id!r}"
        )
    pp, pr = signatures(pred)
    gp, gr = signatures(gold)
    return ScoreReport(_match(pp, gp), _match(pr, gr))


def score_corpus(pairs: Iterable[tuple[Graph, Graph]]) -> ScoreReport:
    """Micro-average: pool the counts over all pairs."""
    total = ScoreReport()
    for pred, gold in pairs:
        total = total + score_pair(pred, gold)
    return total


@dataclass(frozen=True)
class MacroScore:
    """Plain averages of per-sentence percentages."""

    primary: tuple[float, float, float] = (0.0, 0.0, 0.0)
    remote: tuple[float, float, float] = (0.0, 0.0, 0.0)
    sentences: int = 0


def macro_average(reports: Iterable[ScoreReport]) -> MacroScore:
    reports = list(reports)
    if not reports:
        return MacroScore()

    def mean(cls_scores, attr):
        vals = [getattr(c, attr) for c in cls_scores]
        vals = [v if v is not None else 0.0 for v in vals]
        return sum(vals) / len(vals)

    prim = [r.primary for r in reports]
    rem = [r.remote for r in reports]
    return MacroScore(
        (mean(prim, "precision"), mean(prim, "recall"), mean(prim, "f1")),
        (mean(rem, "precision"), mean(rem, "recall"), mean(rem, "f1")),
        len(reports),
    )


def _pct(v: float | None) -> str:
    return "--" if v is None else f"{100.0 * v:.1f}"


def format_class(name: str, c: ClassScore) -> str:
    return (f"{name}: LP {_pct(c.precision)} | LR {_pct(c.recall)} | "
            f"LF {_pct(c.f1)} ({c.matched}/{c.predicted}/{c.gold})")


def format_report(report: ScoreReport) -> str:
    return "\n".join([
        format_class("primary", report.primary),
        format_class("remote ", report.remote),
    ])


def format_macro(m: MacroScore) -> str:
    def row(name, triple):
        p, r, f = triple
        return (f"{name}: LP {100.0 * p:.1f} | LR {100.0 * r:.1f} | "
                f"LF {100.0 * f:.1f} (macro over {m.sentences})")

    return "\n".join([row("primary", m.primary), row("remote ", m.remote)])
