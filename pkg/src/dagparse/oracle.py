"""Dynamic oracle: which transitions move a parse toward the gold graph.

The oracle is set valued. Given a parse in progress and an alignment to
the gold graph, oracle_set() returns endorsed transitions: moves from
which the rest of the gold graph is still reachable, so a trainer can
count any of them as correct and follow whichever one the model prefers.
When moves that realize gold edges exist they are all endorsed and all
returned; otherwise verifying candidates is expensive enough that the
oracle stops at the first one it proves out and returns it alone.

Candidate moves come from a small set of rules built around one stacking
discipline. A new node always enters above everything alive, and a swap
can only move a lighter node under a heavier one, so the oracle keeps
every meeting downward: whoever is created last sweeps down the stack to
the partners parked below it, and whoever still owes an edge to an unborn
node digs itself down in advance so the creation happens above it.

  * Edge: an unrealized gold edge joins the two topmost stack nodes.
  * Reduce: nothing in the gold graph still needs the top node. Popping
    a spent node dominates everything else, so this move stands alone.
  * Node: the top node's gold primary parent is unborn, the top has no
    primary children left to collect, and every born partner of the
    prospective parent is parked on the stack below, where the newcomer's
    downward sweep can reach it.
  * Swap, sweeping: the top has a pending partner below the second, so
    the second floats out to the buffer and re-enters later, above.
  * Swap, digging: the top owes an edge to an unborn node and material
    for that creation sits below, so the top digs toward it, floating
    the future participants up past itself.
  * Swap, unburying: the second is about to be stranded under the top,
    a heavier node it can never float past again, so it ducks out now.
  * Shift: brings in fuel, floated nodes, and out-of-position partners.
  * Finish: every gold edge is realized and only the root remains.
  * Fallbacks for arrangements the discipline does not reach: creating
    the parent with partners still out of position, and a few older
    hand-tuned swap grounds.

The rules alone are not trustworthy: a pair's order can only be flipped
once, so one rearrangement at the wrong moment can wall a node off from a
partner it still needs. Before endorsing a candidate the oracle therefore
replays the parse forward from it, depth first over the candidate moves of
every successor state, and keeps the move only if some continuation
realizes the whole gold graph. Results are memoized per gold graph, and
states already on the probe path count as dead ends, so the probe visits
each reachable configuration at most once and in practice stays close to
linear in sentence length.

oracle_set raises GoldUnreachable when no candidate survives the probe.
That happens on malformed input (labels the machine cannot produce,
internal nodes with no primary children) or after an unendorsed deviation,
such as reducing a node that still has pending edges.
"""

from __future__ import annotations

from .graph import Edge, Graph, INTERNAL
from .labels import PARSE_LABELS
from .transitions import (
    ActionCapError,
    Kind,
    ParserState,
    Transition,
    apply,
    check,
    encode,
    init_state,
    preference_key,
)

_ALLOWED = frozenset(PARSE_LABELS)
_EDGE_KINDS = frozenset(
    (Kind.LEFT_EDGE, Kind.RIGHT_EDGE, Kind.LEFT_REMOTE, Kind.RIGHT_REMOTE)
)
_SHIFT = Transition(Kind.SHIFT)
_REDUCE = Transition(Kind.REDUCE)
_SWAP = Transition(Kind.SWAP)
_FINISH = Transition(Kind.FINISH)


class GoldUnreachable(Exception):
    """The gold graph cannot be completed from the current state."""


class GoldAlignment:
    """Correspondence between a parse in progress and its gold graph.

    Tracks which gold edges have been realized and which state node stands
    for which gold node. The root and the terminals are aligned from the
    start; an internal gold node becomes alive when a Node transition
    creates its counterpart. step() must be called with each applied
    transition, on the state the transition is applied to.
    """

    def __init__(self, gold: Graph):
        self.gold = gold
        for e in gold.edges:
            if e.label not in _ALLOWED:
                raise GoldUnreachable(
                    f"gold edge label {e.label.value!r} is outside the parser inventory"
                )
        for node in gold.nodes:
            if node.kind == INTERNAL and not gold.primary_child_edges(node.id):
                raise GoldUnreachable(
                    f"gold node {node.id} has no primary children"
                )

        incident: dict[int, list[Edge]] = {}
        for e in gold.edges:
            incident.setdefault(e.parent, []).append(e)
            incident.setdefault(e.child, []).append(e)
        self.incident = {g: tuple(es) for g, es in incident.items()}

        self._edges = frozenset(gold.edges)
        self._eidx = {e: i for i, e in enumerate(gold.edges)}
        self.fwd: dict[int, int] = {gold.root_id: 0}
        for t in gold.terminal_ids:
            self.fwd[t] = t
        self.rev = {s: g for g, s in self.fwd.items()}
        self.realized: set[Edge] = set()
        self.rmask = 0  # same set as a bitmask over _eidx, for signatures
        # reachability verdicts for configurations already probed, shared
        # by every copy of this alignment (the gold graph is the same)
        self.memo: dict = {}
        self.pend_nonroot = sum(1 for e in gold.edges if e.parent != gold.root_id)
        # unrealized incident edge counts, for O(1) rule tests; pend_nr
        # leaves out edges from the root, so pend and no pend_nr means a
        # node whose only remaining business is with the root
        self.pend: dict[int, int] = {}
        self.pend_nr: dict[int, int] = {}
        self.pend_children: dict[int, int] = {}
        for e in gold.edges:
            self.pend[e.parent] = self.pend.get(e.parent, 0) + 1
            self.pend[e.child] = self.pend.get(e.child, 0) + 1
            if e.parent != gold.root_id:
                self.pend_nr[e.parent] = self.pend_nr.get(e.parent, 0) + 1
                self.pend_nr[e.child] = self.pend_nr.get(e.child, 0) + 1
            if not e.remote:
                self.pend_children[e.parent] = self.pend_children.get(e.parent, 0) + 1

    def copy(self) -> "GoldAlignment":
        dup = object.__new__(GoldAlignment)
        dup.gold = self.gold
        dup.incident = self.incident
        dup._edges = self._edges
        dup._eidx = self._eidx
        dup.fwd = dict(self.fwd)
        dup.rev = dict(self.rev)
        dup.realized = set(self.realized)
        dup.rmask = self.rmask
        dup.pend = dict(self.pend)
        dup.pend_nr = dict(self.pend_nr)
        dup.pend_children = dict(self.pend_children)
        dup.memo = self.memo
        dup.pend_nonroot = self.pend_nonroot
        return dup

    def _mark_realized(self, e: Edge) -> None:
        self.realized.add(e)
        self.rmask |= 1 << self._eidx[e]
        self.pend[e.parent] -= 1
        self.pend[e.child] -= 1
        if not e.remote:
            self.pend_children[e.parent] -= 1
        if e.parent != self.gold.root_id:
            self.pend_nonroot -= 1
            self.pend_nr[e.parent] -= 1
            self.pend_nr[e.child] -= 1

    def step(self, state: ParserState, t: Transition) -> None:
        """Record the effect of applying t to state (call before apply)."""
        if t.kind is Kind.NODE:
            g = self.rev.get(state.stack[-1])
            if g is None:
                return
            pe = self.gold.primary_parent_edge(g)
            if pe is None or pe.parent in self.fwd or pe.label is not t.label:
                return  # the new node stands for nothing in the gold graph
            fresh = len(state.node_kinds)
            self.fwd[pe.parent] = fresh
            self.rev[fresh] = pe.parent
            self._mark_realized(pe)
        elif t.kind in _EDGE_KINDS:
            if t.kind in (Kind.LEFT_EDGE, Kind.LEFT_REMOTE):
                par, chi = state.stack[-1], state.stack[-2]
            else:
                par, chi = state.stack[-2], state.stack[-1]
            gp, gc = self.rev.get(par), self.rev.get(chi)
            remote = t.kind in (Kind.LEFT_REMOTE, Kind.RIGHT_REMOTE)
            e = Edge(gp, gc, t.label, remote) if gp is not None and gc is not None else None
            if e is None or e not in self._edges or e in self.realized:
                raise ValueError(
                    f"{encode(t)} does not realize a pending gold edge"
                )
            self._mark_realized(e)
        # Shift, Reduce, Swap and Finish change no alignment state.

    def complete(self) -> bool:
        return len(self.realized) == len(self._edges)


# -- the rules ---------------------------------------------------------------


def _edge_moves(state: ParserState, align: GoldAlignment) -> list[Transition]:
    """Transitions realizing an unrealized gold edge between the top two."""
    if len(state.stack) < 2:
        return []
    g0 = align.rev.get(state.stack[-1])
    g1 = align.rev.get(state.stack[-2])
    if g0 is None or g1 is None:
        return []
    out = []
    for e in align.incident.get(g0, ()):
        if e in align.realized:
            continue
        if e.parent == g1 and e.child == g0:
            kind = Kind.RIGHT_REMOTE if e.remote else Kind.RIGHT_EDGE
        elif e.parent == g0 and e.child == g1:
            kind = Kind.LEFT_REMOTE if e.remote else Kind.LEFT_EDGE
        else:
            continue
        t = Transition(kind, e.label)
        if check(state, t) is None:
            out.append(t)
    return out


def _node_strict(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Create the top node's gold primary parent at the safe moment.

    Safe means: the top has no primary children left to collect (parents
    appear strictly bottom-up), and every already-created partner of the
    prospective parent sits on the stack below the creator. The new node
    lands at the buffer head, enters above the creator, and melts downward
    realizing an edge with each parked partner it meets. A partner caught
    in the buffer at creation time would re-enter above the newcomer, and
    since the newcomer takes the highest id so far, nothing can ever dive
    back below it to fix the order.
    """
    g0 = align.rev.get(state.stack[-1]) if state.stack else None
    if g0 is None:
        return None
    pe = align.gold.primary_parent_edge(g0)
    if pe is None or pe.parent in align.fwd:
        return None
    if align.pend_children.get(g0, 0):
        return None  # collect your own children before creating the parent
    below = {align.rev.get(s) for s in state.stack[:-1]}
    root = align.gold.root_id
    for e in align.incident.get(pe.parent, ()):
        other = e.parent if e.child == pe.parent else e.child
        if other == g0 or other == root or other not in align.fwd:
            continue
        if other not in below:
            return None  # a born partner is out of position: wait for it
    t = Transition(Kind.NODE, pe.label)
    return t if check(state, t) is None else None


def _node_loose(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Create the top's gold primary parent on the bottom-up gate alone.

    Fallback for arrangements the parked-partner discipline cannot reach;
    whether the creation traps anything is left to the reachability probe.
    """
    g0 = align.rev.get(state.stack[-1]) if state.stack else None
    if g0 is None:
        return None
    pe = align.gold.primary_parent_edge(g0)
    if pe is None or pe.parent in align.fwd:
        return None
    if align.pend_children.get(g0, 0):
        return None
    t = Transition(Kind.NODE, pe.label)
    return t if check(state, t) is None else None


def _reduce_move(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Pop the top node once nothing in the gold graph still needs it."""
    if not state.stack:
        return None
    g0 = align.rev.get(state.stack[-1])
    if g0 is not None and align.pend.get(g0, 0):
        return None
    return _REDUCE if check(state, _REDUCE) is None else None


def _shift_move(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Bring the buffer head in once the stack top wants it.

    Shifting is productive when it sets up an immediate edge: the head
    must have a pending gold edge with the current top. Heads whose
    partners sit deeper, are unborn, or are the root wait in the buffer
    until assembly reaches them; pulling them in early only buries
    whoever they are waiting for.
    """
    if not state.buffer or not state.stack:
        return None
    gb = align.rev.get(state.buffer[0])
    g0 = align.rev.get(state.stack[-1])
    if gb is None or g0 is None or g0 == align.gold.root_id:
        return None
    for e in align.incident.get(gb, ()):
        if e in align.realized:
            continue
        other = e.parent if e.child == gb else e.child
        if other == g0:
            return _SHIFT if check(state, _SHIFT) is None else None
    return None


def _sweep_swap(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Retreat the second node so the top can melt down to a partner.

    The workhorse rearrangement: a freshly created node starts at the top
    of the stack and sweeps downward, realizing an edge with each pending
    partner it meets and floating everything else out to the buffer. The
    floated nodes re-enter above the sweeper, which is exactly where later
    assembly will look for them. The root only counts as a partner worth
    sweeping toward once no other edges are pending anywhere, because
    meetings with the root happen when the stack finally collapses.
    """
    if len(state.stack) < 3 or check(state, _SWAP) is not None:
        return None
    g0 = align.rev.get(state.stack[-1])
    if g0 is None:
        return None
    below = {align.rev.get(s) for s in state.stack[:-2]}
    root = align.gold.root_id
    endgame = align.pend_nonroot == 0
    for e in align.incident.get(g0, ()):
        if e in align.realized:
            continue
        other = e.parent if e.child == g0 else e.child
        if other == root and not endgame:
            continue
        if other in below:
            return _SWAP
    return None


def _dig_swap(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Retreat the second so material for the top's unborn partner floats up.

    When the top still owes an edge to a node that does not exist yet, the
    top must end up below the place where that node is created. Digging
    past anything that will take part in the creation (the unborn node's
    own future children or partners) floats those nodes out to the buffer;
    they re-enter above the digger, and the creation then happens with the
    digger parked safely underneath.
    """
    if len(state.stack) < 3 or check(state, _SWAP) is not None:
        return None
    g0 = align.rev.get(state.stack[-1])
    g1 = align.rev.get(state.stack[-2])
    if g0 is None or g1 is None:
        return None
    below = {align.rev.get(s) for s in state.stack[:-2]}
    root = align.gold.root_id
    for e in align.incident.get(g0, ()):
        if e in align.realized:
            continue
        p = e.parent if e.child == g0 else e.child
        if p in align.fwd:
            continue  # born partners are the sweep rule's business
        # Floating the second is only safe if it plays no part in p's
        # creation or can come back on top for it: a primary child of p
        # re-enters above the digger and can still fire the creation,
        # but p's parent or a remote partner must stay parked below.
        safe = True
        for e2 in align.incident.get(p, ()):
            o2 = e2.parent if e2.child == p else e2.child
            if o2 == g1 and not (e2.parent == p and not e2.remote):
                safe = False
                break
        if not safe:
            continue
        for e2 in align.incident.get(p, ()):
            other = e2.parent if e2.child == p else e2.child
            if other == g0 or other == root or other not in align.fwd:
                continue
            if other in below:
                return _SWAP
    return None


def _unbury_swap(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Retreat a future participant from under a heavier blocker.

    Floating is order preserving: a sweep sends both nodes to the buffer
    and they re-enter stacked exactly as before. So a node can be buried
    under a heavier one for good, and that is fatal in two shapes. If the
    buried node still owes an edge to an unborn partner, the creation can
    never put its creator on top of the blocker; that shape is clear once
    the blocker has nothing left but root business. If the buried node's
    partner is already born but sits in the buffer and is lighter than the
    blocker, the partner will re-enter above the blocker and is too light
    to ever sweep down through it. Either way, retreating under the
    blocker is the one move that inverts the pair.
    """
    if len(state.stack) < 3 or check(state, _SWAP) is not None:
        return None
    g0 = align.rev.get(state.stack[-1])
    g1 = align.rev.get(state.stack[-2])
    if g0 is None or g1 is None:
        return None
    root = align.gold.root_id
    if not align.pend.get(g0, 0):
        return None  # a spent blocker is better removed by Reduce
    top_sid = state.stack[-1]
    on_stack = set(state.stack)
    parked = not align.pend_nr.get(g0, 0)
    for e in align.incident.get(g1, ()):
        if e in align.realized:
            continue
        p = e.parent if e.child == g1 else e.child
        if p == root:
            continue
        if p not in align.fwd:
            if parked:
                return _SWAP
        else:
            p_sid = align.fwd[p]
            if p_sid not in on_stack and p_sid < top_sid:
                return _SWAP
    return None


def _swap_old(state: ParserState, align: GoldAlignment) -> Transition | None:
    """Retreat the second node on older, hand-tuned grounds.

    Fallback grounds that predate the sweep and dig rules and still cover
    a few arrangements they miss: the second is spent and in the way, the
    top has a partner strictly below the second, or the second is waiting
    for the node right at the buffer head.
    """
    if check(state, _SWAP) is not None:
        return None
    g0 = align.rev.get(state.stack[-1])
    g1 = align.rev.get(state.stack[-2])
    if g0 is None or g1 is None:
        return None
    if not align.pend.get(g0, 0):
        return None  # the top wants nothing, so there is nothing to reach
    if not align.pend.get(g1, 0):
        return _SWAP  # the second is dead weight: move it out from under
    # The root never counts as a partner worth approaching: meetings with
    # it happen when the stack finally collapses, not by moving closer.
    deeper = {align.rev.get(s) for s in state.stack[1:-2]}
    seen_deeper = False
    for e in align.incident.get(g0, ()):
        if e in align.realized:
            continue
        other = e.parent if e.child == g0 else e.child
        if other == g1:
            return None  # those two should realize their edge, not swap
        if other in deeper:
            seen_deeper = True
    if seen_deeper:
        return _SWAP
    # Or the second is waiting for the node right at the buffer head:
    # retreating makes the two of them enter back to back and meet.
    gb = align.rev.get(state.buffer[0]) if state.buffer else None
    if gb is not None:
        for e in align.incident.get(g1, ()):
            if e in align.realized:
                continue
            other = e.parent if e.child == g1 else e.child
            if other == gb:
                return _SWAP
    return None


def _finish_move(state: ParserState, align: GoldAlignment) -> Transition | None:
    if not align.complete():
        return None
    return _FINISH if check(state, _FINISH) is None else None


def _candidates(state: ParserState, align: GoldAlignment) -> list[Transition]:
    """Every move the rules put forward, most promising first.

    Realizing a gold edge (or finishing) leaves the configuration otherwise
    untouched and strictly shrinks the remaining work, so whenever such a
    move exists nothing else is worth considering.
    """
    out = _edge_moves(state, align)
    t = _finish_move(state, align)
    if t is not None:
        out.append(t)
    if out:
        out.sort(key=preference_key)
        return out
    t = _reduce_move(state, align)
    if t is not None:
        # a spent node takes part in nothing further, so popping it now
        # dominates every alternative: any completion that keeps it around
        # still works, minus the moves spent stepping over the corpse
        return [t]
    for rule in (
        _node_strict,
        _sweep_swap,
        _dig_swap,
        _unbury_swap,
        _shift_move,
    ):
        t = rule(state, align)
        if t is not None and t not in out:
            out.append(t)
    if state.buffer and _SHIFT not in out and check(state, _SHIFT) is None:
        # a plain shift is how floated nodes re-enter, junk crosses over
        # to be popped, and out-of-position partners come in to be parked
        out.append(_SHIFT)
    for rule in (_node_loose, _swap_old):
        t = rule(state, align)
        if t is not None and t not in out:
            out.append(t)
    return out


def _doomed(state: ParserState, align: GoldAlignment) -> bool:
    """A provable dead end: some pending pair is walled off for good.

    A node whose only remaining business is with the root can die only
    when everything between it and the root is gone. Suppose node a still
    needs partner b from the buffer, and such a wall node u outweighs b
    while a outweighs u. The meeting must happen above a, so u has to get
    out of the way, but u cannot sink below b (Swap moves lighter under
    heavier only), cannot die while a lives below it, and every retreat
    re-enters it between a and the incoming b; a in turn is too heavy to
    ever slip beneath u. Once u sits above a, or ahead of b in the buffer,
    the squeeze is circular and the parse can never complete.
    """
    root = align.gold.root_id
    walls = []
    for sid in state.stack:
        gu = align.rev.get(sid)
        if gu is None or gu == root or not align.pend.get(gu, 0):
            continue
        if not align.pend_nr.get(gu, 0):
            walls.append(sid)
    for sid in state.buffer:
        gu = align.rev.get(sid)
        if gu is None or not align.pend.get(gu, 0):
            continue
        if not align.pend_nr.get(gu, 0):
            walls.append(sid)
    if not walls:
        return False
    stack_pos = {sid: i for i, sid in enumerate(state.stack)}
    buf_pos = {sid: i for i, sid in enumerate(state.buffer)}
    for a_pos, a_sid in enumerate(state.stack):
        ga = align.rev.get(a_sid)
        if ga is None or ga == root:
            continue
        for e in align.incident.get(ga, ()):
            if e in align.realized:
                continue
            gb = e.parent if e.child == ga else e.child
            if gb == root:
                continue
            b_sid = align.fwd.get(gb)
            if b_sid is None:
                continue  # an unborn partner is born at the buffer head
            b_pos = buf_pos.get(b_sid)
            if b_pos is None:
                continue  # both on the stack: still sortable
            for u in walls:
                if not (a_sid > u > b_sid):
                    continue
                u_stack = stack_pos.get(u)
                if u_stack is not None and u_stack > a_pos:
                    return True
                u_buf = buf_pos.get(u)
                if u_buf is not None and u_buf < b_pos:
                    return True
    if align.pend_nonroot == 0:
        # Endgame shape: only root edges remain, so pinned nodes die one
        # at a time at the stack bottom and the heaviest must go last,
        # since nothing can ever top it to let it retreat. If some other
        # pinned node sits above it with no heavier node left anywhere to
        # lift it out of the way, the two block each other for good.
        present = [s for s in state.stack[1:]] + list(state.buffer)
        pinned = [
            s for s in present if align.pend.get(align.rev.get(s, -1), 0)
        ]
        if len(pinned) > 1:
            heavy = max(pinned)
            hpos = stack_pos.get(heavy)
            if hpos is not None:
                maxother = max(s for s in present if s != heavy)
                xpos = stack_pos.get(maxother)
                if (
                    xpos is not None
                    and xpos > hpos
                    and align.pend.get(align.rev.get(maxother, -1), 0)
                ):
                    return True
    return False


def _sig(state: ParserState, align: GoldAlignment):
    return (
        state.stack,
        state.buffer,
        align.rmask,
        tuple(sorted(align.fwd.items())),
    )


_PROBE_BUDGET = 500_000


def _probe(state: ParserState, align: GoldAlignment) -> bool:
    """Can some run of candidate moves realize the rest of the gold graph?

    Depth-first over _candidates with memoized verdicts. Configurations
    already on the probe path are treated as dead ends, so only simple
    paths are explored; a failure discovered through such a cycle is
    conditional and is not memoized.
    """
    memo = align.memo
    sig = _sig(state, align)
    hit = memo.get(sig)
    if hit is not None:
        return hit
    if _doomed(state, align):
        memo[sig] = False
        return False
    budget = _PROBE_BUDGET
    live = {sig}
    # frame: sig, state, alignment, candidates, next index, tainted
    frames = [[sig, state, align, _candidates(state, align), 0, False]]
    while frames:
        fr = frames[-1]
        pushed = won = False
        while fr[4] < len(fr[3]):
            t = fr[3][fr[4]]
            fr[4] += 1
            kid_align = fr[2].copy()
            kid_align.step(fr[1], t)
            try:
                kid = apply(fr[1], t)
            except ActionCapError:
                continue
            if kid.done:
                won = True
                break
            ksig = _sig(kid, kid_align)
            known = memo.get(ksig)
            if known is True:
                won = True
                break
            if known is False:
                continue
            if ksig in live:
                fr[5] = True
                continue
            if _doomed(kid, kid_align):
                memo[ksig] = False
                continue
            budget -= 1
            if budget < 0:
                raise GoldUnreachable(
                    f"probe budget exhausted "
                    f"(stack {list(state.stack)}, {len(state.buffer)} buffered)"
                )
            live.add(ksig)
            frames.append([ksig, kid, kid_align, _candidates(kid, kid_align), 0, False])
            pushed = True
            break
        if won:
            # the whole path below this frame wins with it
            for f in frames:
                memo[f[0]] = True
            return True
        if pushed:
            continue
        frames.pop()
        live.discard(fr[0])
        if fr[5]:
            if frames:
                frames[-1][5] = True
        else:
            memo[fr[0]] = False
    return False


def oracle_set(state: ParserState, align: GoldAlignment) -> tuple[Transition, ...]:
    """Every endorsed transition from this state, best kind first.

    Edge realizations and Finish are endorsed outright: they change nothing
    about the configuration and strictly shrink the remaining work. Any
    other candidate is endorsed only if the gold graph is provably still
    producible after it, and the first one that passes settles the matter:
    probing the rest would mostly mean refuting them, which is the
    expensive direction. Raises GoldUnreachable when nothing survives.
    """
    if state.done:
        raise ValueError("parse is already finished")
    cands = _candidates(state, align)
    if cands and (cands[0].kind in _EDGE_KINDS or cands[0].kind is Kind.FINISH):
        return tuple(cands)
    for t in cands:
        kid_align = align.copy()
        kid_align.step(state, t)
        try:
            kid = apply(state, t)
        except ActionCapError:
            continue
        if kid.done or _probe(kid, kid_align):
            return (t,)
    raise GoldUnreachable(
        f"no transition leads to the gold graph "
        f"(stack {list(state.stack)}, {len(state.buffer)} buffered)"
    )


def oracle_parse(gold: Graph) -> tuple[tuple[Transition, ...], Graph]:
    """Parse a sentence with the oracle alone.

    Returns the transition sequence and the graph it builds, which matches
    the gold graph edge for edge whenever the oracle covers the input.
    """
    state = init_state(gold.tokens)
    align = GoldAlignment(gold)
    seq: list[Transition] = []
    while not state.done:
        t = oracle_set(state, align)[0]
        align.step(state, t)
        state = apply(state, t)
        seq.append(t)
    return tuple(seq), state.to_graph(gold.graph_id)
