"""Feature extraction for transition classification.

Features are hashed sparse indicators plus one real-valued terminal/node
ratio. A template names stack or buffer elements (s0..s3, b0..b3), optional
child navigations (l/r/u: leftmost, rightmost, only child), and attributes
of the resolved node. A template fires only when everything it mentions
resolves; the value is the joined attribute tuple.

Attributes: w/t/d are the form, tag and dependency relation of the node's
head terminal, found by descending to the highest-priority child at every
step. e is the label of the edge to that highest-priority child (absent on
childless nodes, terminals included). x is the gap profile of the node's
primary yield (none/pass/gap) and y the total gap length. p and q look at
punctuation between the head terminals of s0 and s1: q counts the tokens,
p is the single such token's form. P/C/R count parents, children and
remote children. The head and gap helpers work on finished graphs and
parser states alike.
"""

from __future__ import annotations

from hashlib import blake2b

from .graph import is_punct
from .labels import HEAD_PRIORITY
from .transitions import encode

HASH_BITS = 22
HASH_SPACE = 1 << HASH_BITS
RATIO_KEY = HASH_SPACE  # one slot past the hashed ids

_INF = float("inf")

TEMPLATES = (
    # node unigrams
    "s0tde", "s0we", "s1tde", "s1we", "s2tde", "s2we", "s3tde", "s3we",
    "b0wtd", "b1wtd", "b2wtd", "b3wtd",
    "s0lwe", "s0rwe", "s0uwe", "s1lwe", "s1rwe", "s1uwe",
    # bigrams
    "s0ws1w", "s0ws1e", "s0es1w", "s0es1e",
    "s0wb0w", "s0wb0td", "s0eb0w", "s0eb0td",
    "s1wb0w", "s1wb0td", "s1eb0w", "s1eb0td",
    "b0wb1w", "b0wb1td", "b0tdb1w", "b0tdb1td",
    # trigrams
    "s0es1es2w", "s0es1es2e", "s0es1eb0w", "s0es1eb0td",
    "s0es1wb0w", "s0es1wb0td", "s0ws1es2e", "s0ws1eb0td",
    # separating punctuation
    "s0wp", "s0wep", "s0wq", "s0wcq",
    "s0es1ep", "s0es1eq",
    "s1wp", "s1wep", "s1wq", "s1weq",
    # grandchild navigations
    "s0llwe", "s0lrwe", "s0luwe", "s0rlwe", "s0rrwe", "s0ruwe",
    "s0ulwe", "s0urwe", "s0uuwe",
    "s1llwe", "s1lrwe", "s1luwe", "s1rlwe", "s1rrwe", "s1ruwe",
    # discontinuity
    "s0xwe", "s1xwe", "s2xwe", "s3xwe",
    "s0xtde", "s1xtde", "s2xtde", "s3xtde",
    "s0xy", "s1xy", "s2xy", "s3xy",
    "s0xs1e", "s0xs1w", "s0xs1x", "s0ws1x", "s0es1x",
    "s0xs2e", "s0xs2w", "s0xs2x", "s0ws2x", "s0es2x",
    "s0ys1y", "s0ys2y",
    "s0xb0td", "s0xb0w",
    # degree counts
    "s0P", "s0C", "s0wP", "s0wC", "b0P", "b0C", "b0wP", "b0wC",
    # existing edges between the focus nodes
    "s0s1", "s1s0", "s0b0", "b0s0", "s0b0e", "b0s0e",
    # recent history
    "a0", "a1",
    # remote degree
    "s0R", "s0wR", "b0R", "b0wR",
)

# irregular ids the scanner below cannot handle
_EDGE_EXIST = {"s0s1": (("s", 0), ("s", 1)), "s1s0": (("s", 1), ("s", 0)),
               "s0b0": (("s", 0), ("b", 0)), "b0s0": (("b", 0), ("s", 0))}
_EDGE_LABEL = {"s0b0e": (("s", 0), ("b", 0)), "b0s0e": (("b", 0), ("s", 0))}
_HISTORY = {"a0": 0, "a1": 1}
_ALIASED = {"s0wcq": [("elem", "s", 0, ""), ("attr", "w"), ("attr", "e"), ("sep", "q")]}


def _scan(tid: str) -> list[tuple]:
    ops: list[tuple] = []
    i = 0
    while i < len(tid):
        c = tid[i]
        if c in "sb" and i + 1 < len(tid) and tid[i + 1].isdigit():
            idx = int(tid[i + 1])
            i += 2
            navs = ""
            while i < len(tid) and tid[i] in "lru":
                navs += tid[i]
                i += 1
            ops.append(("elem", c, idx, navs))
        elif c in "wtdexy":
            ops.append(("attr", c))
            i += 1
        elif c in "pq":
            ops.append(("sep", c))
            i += 1
        elif c in "PCR":
            ops.append(("count", c))
            i += 1
        else:
            raise ValueError(f"bad template {tid!r}")
    return ops


def _compile(tid: str):
    if tid in _EDGE_EXIST:
        return ("exist", _EDGE_EXIST[tid])
    if tid in _EDGE_LABEL:
        return ("edge-label", _EDGE_LABEL[tid])
    if tid in _HISTORY:
        return ("history", _HISTORY[tid])
    ops = _ALIASED.get(tid) or _scan(tid)
    return ("ops", ops)


_COMPILED = tuple((tid, _compile(tid)) for tid in TEMPLATES)


# -- head and gap helpers (shared with the bilexical conversion) ---------------


def head_child_edge(g, nid):
    """Outgoing edge whose child is most head-like, or None if childless.

    Remote children participate; ties break on label priority, then the
    leftmost yield position, then the child id.
    """
    edges = g.child_edges(nid)
    if not edges:
        return None

    def rank(e):
        y = g.primary_yield(e.child)
        return (HEAD_PRIORITY[e.label], min(y) if y else _INF, e.child)

    return min(edges, key=rank)


def head_terminal(g, nid):
    """Terminal reached by repeatedly stepping to the head child."""
    cur = nid
    while not g.is_terminal(cur):
        e = head_child_edge(g, cur)
        if e is None:
            return None
        cur = e.child
    return cur


def gap_profile(g, nid):
    """("none"|"pass"|"gap", total gap length), or None for yieldless units.

    gap: the node's own primary yield is discontinuous. pass: the yield is
    contiguous but some direct primary child's is not. Terminals are
    ("none", 0).
    """
    if g.is_terminal(nid):
        return ("none", 0)
    y = g.primary_yield(nid)
    if not y:
        return None
    gaps = max(y) - min(y) + 1 - len(y)
    if gaps:
        return ("gap", gaps)
    for e in g.primary_child_edges(nid):
        cy = g.primary_yield(e.child)
        if cy and max(cy) - min(cy) + 1 != len(cy):
            return ("pass", 0)
    return ("none", 0)


def _nav_children(g, nid):
    def key(e):
        y = g.primary_yield(e.child)
        return (min(y) if y else _INF, e.child)

    return sorted(g.primary_child_edges(nid), key=key)


def navigate(g, nid, navs: str):
    """Follow l/r/u steps through primary children; None when a step fails."""
    for step in navs:
        if nid is None or g.is_terminal(nid):
            return None
        kids = _nav_children(g, nid)
        if not kids:
            return None
        if step == "l":
            nid = kids[0].child
        elif step == "r":
            nid = kids[-1].child
        else:
            nid = kids[0].child if len(kids) == 1 else None
    return nid


# -- evaluation -----------------------------------------------------------------


class _Ctx:
    """Per-extraction caches so 113 templates share the expensive lookups."""

    def __init__(self, state):
        self.state = state
        self._heads: dict[int, int | None] = {}
        self._gaps: dict[int, tuple | None] = {}
        self.sep_p, self.sep_q = self._separators()

    def head(self, nid):
        if nid not in self._heads:
            self._heads[nid] = head_terminal(self.state, nid)
        return self._heads[nid]

    def gap(self, nid):
        if nid not in self._gaps:
            self._gaps[nid] = gap_profile(self.state, nid)
        return self._gaps[nid]

    def _separators(self):
        s = self.state
        if len(s.stack) < 2:
            return None, None
        h0, h1 = self.head(s.stack[-1]), self.head(s.stack[-2])
        if h0 is None or h1 is None:
            return None, None
        lo, hi = sorted((h0, h1))
        puncts = [s.tokens[i - 1].form for i in range(lo + 1, hi)
                  if is_punct(s.tokens[i - 1].form)]
        return (puncts[0] if len(puncts) == 1 else None), str(len(puncts))


def _element(state, src, idx):
    if src == "s":
        return state.stack[-1 - idx] if len(state.stack) > idx else None
    return state.buffer[idx] if len(state.buffer) > idx else None


def _attribute(state, ctx, nid, ch):
    if ch in "wtd":
        h = ctx.head(nid)
        if h is None:
            return None
        tok = state.tokens[h - 1]
        return tok.form if ch == "w" else tok.pos if ch == "t" else tok.dep
    if ch == "e":
        e = head_child_edge(state, nid)
        return None if e is None else e.label.value
    gp = ctx.gap(nid)
    if gp is None:
        return None
    return gp[0] if ch == "x" else str(gp[1])


def _count(state, nid, ch):
    if ch == "P":
        return str(len(state.parent_edges(nid)))
    if ch == "C":
        return str(len(state.child_edges(nid)))
    return str(sum(1 for e in state.child_edges(nid) if e.remote))


def _eval_ops(state, ctx, ops):
    parts = []
    cur = None
    for op in ops:
        if op[0] == "elem":
            _, src, idx, navs = op
            base = _element(state, src, idx)
            cur = navigate(state, base, navs) if base is not None else None
        elif op[0] == "attr":
            if cur is None:
                return None
            v = _attribute(state, ctx, cur, op[1])
            if v is None:
                return None
            parts.append(v)
        elif op[0] == "count":
            if cur is None:
                return None
            parts.append(_count(state, cur, op[1]))
        else:
            v = ctx.sep_p if op[1] == "p" else ctx.sep_q
            if v is None:
                return None
            parts.append(v)
    return parts


def _eval_template(state, ctx, compiled):
    form, arg = compiled
    if form == "ops":
        return _eval_ops(state, ctx, arg)
    if form == "exist":
        (sa, ia), (sb, ib) = arg
        a, b = _element(state, sa, ia), _element(state, sb, ib)
        if a is None or b is None:
            return None
        return ["1"] if any(e.child == b for e in state.child_edges(a)) else None
    if form == "edge-label":
        (sa, ia), (sb, ib) = arg
        a, b = _element(state, sa, ia), _element(state, sb, ib)
        if a is None or b is None:
            return None
        hits = [e for e in state.child_edges(a) if e.child == b]
        if not hits:
            return None
        best = min(hits, key=lambda e: (e.remote, e.label.value))
        return [best.label.value]
    # history
    k = arg
    if len(state.history) <= k:
        return None
    return [encode(state.history[-1 - k])]


def feature_key(template_id: str, value: str) -> int:
    digest = blake2b(f"{template_id}|{value}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little") % HASH_SPACE


def extract_raw(state) -> list[tuple[str, str]]:
    """(template id, value) pairs for every template that fires."""
    ctx = _Ctx(state)
    out = []
    for tid, compiled in _COMPILED:
        parts = _eval_template(state, ctx, compiled)
        if parts is not None:
            out.append((tid, "|".join(parts)))
    return out


def ratio(state) -> float:
    return len(state.tokens) / len(state.node_kinds)


def extract(state) -> tuple[list[int], float]:
    """Hashed feature keys plus the real-valued ratio feature."""
    keys = [feature_key(tid, value) for tid, value in extract_raw(state)]
    return keys, ratio(state)
