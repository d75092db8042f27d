"""Thinnest-path solvers: brute-force oracle, SPBA, TSBA, and exact search.

The problem is NP-complete in general (the gadgets module carries the
dominating-set reduction), so the lineup is:

- :func:`brute_force_thinnest` — the independent oracle.  Pure enumeration of
  simple hyperedge sequences, no pruning of any kind.  Desk-scale only; it
  exists so the clever solvers have something dumb to be checked against.
- :func:`spba` — shortest path under edge weight |T_e| (polynomial).
- :func:`tsba` — label-setting on true stored-cover width (polynomial).
- :func:`exact` — best-first search over (relay, cover) states with dominance
  pruning and a state budget (exponential worst case, fast on structured
  instances).

Width semantics are uniform: every solver reports the true cover width of
the path it returns, never a surrogate.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple
import heapq
import json
import math
import random

from .hypercore import (
    Hypergraph,
    Hyperpath,
    bits_of,
    cover_mask_of,
)


class BudgetExceededError(RuntimeError):
    """exact() ran out of its state budget — NOT the same as unreachable."""


class TieBreakMode(Enum):
    """How tsba resolves equal-width cover candidates.

    deterministic_edge_order  relax edges in construction order, keep incumbent
    reverse_edge_order        relax edges in reversed order, keep incumbent
    seeded_random             seeded shuffle of each vertex's relaxation order
    adversarial_oracle        a callback decides each tie (test fixtures only)
    """

    deterministic_edge_order = "deterministic_edge_order"
    reverse_edge_order = "reverse_edge_order"
    seeded_random = "seeded_random"
    adversarial_oracle = "adversarial_oracle"


TieOracle = Callable[[int, int, int], bool]  # (vertex, incumbent_mask, candidate_mask) -> replace?


@dataclass(frozen=True)
class SolveResult:
    """Solver outcome.  path and width are both present or both None;
    width always equals the true cover width of path."""

    path: Optional[Hyperpath]
    width: Optional[int]
    cover: Tuple[int, ...]
    states: int
    relaxations: int
    tie_break_mode: TieBreakMode = TieBreakMode.deterministic_edge_order


def result_to_json(res: SolveResult) -> str:
    doc = {
        "width": res.width,
        "edges": list(res.path.edges) if res.path is not None else None,
        "cover": list(res.cover),
        "states": res.states,
        "relaxations": res.relaxations,
    }
    return json.dumps(doc, indent=2) + "\n"


def _check_endpoints(h: Hypergraph, s: int, t: int) -> None:
    if not (0 <= s < h.vertex_count and 0 <= t < h.vertex_count):
        raise ValueError("source/target out of range")
    if s == t:
        raise ValueError("source and target must differ")


def _found(h: Hypergraph, edges: List[int], s: int, t: int,
           states: int, relaxations: int,
           tb: TieBreakMode = TieBreakMode.deterministic_edge_order) -> SolveResult:
    path = Hyperpath(edges=tuple(edges), origin=s, target=t)
    m = cover_mask_of(h, path)
    return SolveResult(
        path=path,
        width=m.bit_count(),
        cover=bits_of(m),
        states=states,
        relaxations=relaxations,
        tie_break_mode=tb,
    )


def _not_found(states: int, relaxations: int,
               tb: TieBreakMode = TieBreakMode.deterministic_edge_order) -> SolveResult:
    return SolveResult(None, None, (), states, relaxations, tb)


# -- brute-force oracle (built first; everything else is measured against it) --


def brute_force_thinnest(h: Hypergraph, s: int, t: int) -> SolveResult:
    """Minimum-width hyperpath by full enumeration.  No pruning.

    Enumerates every hyperedge sequence with pairwise-distinct transmitting
    sources, stopping a branch exactly when the target enters the cover.
    Complete because any hyperpath revisiting a transmitter can drop the
    loop between the two transmissions (the chain stays valid, the cover
    only shrinks), so some optimal path has distinct sources — and a path
    whose earlier edge already covers t truncates to a no-earlier-coverage
    path of no larger width, all of which this enumeration visits.

    Exponential; intended for n around 12 and below.
    """
    _check_endpoints(h, s, t)
    t_bit = 1 << t
    best_width = [None]  # type: List[Optional[int]]
    best_edges: List[Tuple[int, ...]] = [()]
    seq: List[int] = []
    counters = [0, 0]  # sequences visited, edge extensions

    def extend(u: int, cover: int, used: int) -> None:
        for eid in h.out_edges(u):
            counters[1] += 1
            dmask = h.dest_mask(eid)
            new_cover = cover | dmask
            seq.append(eid)
            counters[0] += 1
            if new_cover & t_bit:
                w = new_cover.bit_count()
                if best_width[0] is None or w < best_width[0]:
                    best_width[0] = w
                    best_edges[0] = tuple(seq)
            else:
                rest = dmask & ~used
                for v in bits_of(rest):
                    extend(v, new_cover, used | (1 << v))
            seq.pop()

    extend(s, 1 << s, 1 << s)
    if best_width[0] is None:
        return _not_found(counters[0], counters[1])
    res = _found(h, list(best_edges[0]), s, t, counters[0], counters[1])
    assert res.width == best_width[0]
    return res


def iter_simple_hyperpaths(h: Hypergraph, s: int, t: int):
    """Yield every valid s→t hyperpath with pairwise-distinct transmitters
    whose earlier edges do not already cover t.

    Same enumeration space as brute_force_thinnest (and complete for width
    questions by the same loop-excision argument); exposed separately so
    sweeps can inspect each alternative path instead of just the minimum.
    Yields Hyperpath objects; exponential — cap consumption with islice.
    """
    _check_endpoints(h, s, t)
    t_bit = 1 << t
    seq: List[int] = []

    def extend(u: int, cover: int, used: int):
        for eid in h.out_edges(u):
            dmask = h.dest_mask(eid)
            new_cover = cover | dmask
            seq.append(eid)
            if new_cover & t_bit:
                yield Hyperpath(edges=tuple(seq), origin=s, target=t)
            else:
                for v in bits_of(dmask & ~used):
                    yield from extend(v, new_cover, used | (1 << v))
            seq.pop()

    yield from extend(s, 1 << s, 1 << s)


# -- SPBA ----------------------------------------------------------------------


def spba(h: Hypergraph, s: int, t: int) -> SolveResult:
    """Shortest-path approximation: Dijkstra under edge weight |T_e|.

    dist(v) = min over edges e with v in T_e of dist(s_e) + |T_e|; all
    weights >= 1, so plain label setting with lazy heap deletion applies.
    The reported width is the true cover width of the reconstructed path
    (the length objective is only the search key).  Deterministic: ties keep
    the incumbent parent, edges relax in construction order.
    """
    _check_endpoints(h, s, t)
    dist: Dict[int, int] = {s: 0}
    parent: Dict[int, Tuple[int, int]] = {}
    settled = set()
    heap: List[Tuple[int, int, int]] = [(0, 0, s)]
    seq = 1
    states = relaxations = 0
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        states += 1
        if u == t:
            break
        for eid in h.out_edges(u):
            relaxations += 1
            e = h.edges[eid]
            nd = d + e.weight
            for v in e.destinations:
                if v not in settled and nd < dist.get(v, math.inf):
                    dist[v] = nd
                    parent[v] = (u, eid)
                    heapq.heappush(heap, (nd, seq, v))
                    seq += 1
    if t not in settled:
        return _not_found(states, relaxations)
    edges: List[int] = []
    v = t
    while v != s:
        u, eid = parent[v]
        edges.append(eid)
        v = u
    edges.reverse()
    return _found(h, edges, s, t, states, relaxations)


# -- TSBA ----------------------------------------------------------------------


def _tsba_core(
    h: Hypergraph,
    s: int,
    t: int,
    tb: TieBreakMode,
    seed: int,
    oracle: Optional[TieOracle],
):
    """Shared TSBA engine; returns (result, covers, settled_order)."""
    _check_endpoints(h, s, t)
    if tb is TieBreakMode.adversarial_oracle and oracle is None:
        raise ValueError("adversarial_oracle mode needs an oracle callback")
    rng = random.Random(seed) if tb is TieBreakMode.seeded_random else None

    cover: Dict[int, int] = {s: 1 << s}
    parent: Dict[int, Tuple[int, int]] = {}
    settled = set()
    heap: List[Tuple[int, int, int]] = [(1, 0, s)]
    seq = 1
    states = relaxations = 0

    while heap:
        w, _, u = heapq.heappop(heap)
        if u in settled or w != cover[u].bit_count():
            continue  # stale entry
        settled.add(u)
        states += 1
        if u == t:
            break
        order = list(h.out_edges(u))
        if tb is TieBreakMode.reverse_edge_order:
            order.reverse()
        elif rng is not None:
            rng.shuffle(order)
        cu = cover[u]
        for eid in order:
            relaxations += 1
            cand = cu | h.dest_mask(eid)
            w_cand = cand.bit_count()
            for v in h.edges[eid].destinations:
                if v in settled:
                    continue
                stored = cover.get(v)
                if stored is None or w_cand < stored.bit_count():
                    replace = True
                elif w_cand == stored.bit_count():
                    replace = (
                        tb is TieBreakMode.adversarial_oracle
                        and cand != stored
                        and oracle(v, stored, cand)
                    )
                else:
                    replace = False
                if replace:
                    cover[v] = cand
                    parent[v] = (u, eid)
                    heapq.heappush(heap, (w_cand, seq, v))
                    seq += 1

    if t not in settled:
        return _not_found(states, relaxations, tb), cover, settled
    edges: List[int] = []
    v = t
    while v != s:
        u, eid = parent[v]
        edges.append(eid)
        v = u
    edges.reverse()
    res = _found(h, edges, s, t, states, relaxations, tb)
    assert res.width == cover[t].bit_count()  # stored cover == path cover
    return res, cover, settled


def tsba(
    h: Hypergraph,
    s: int,
    t: int,
    tb: TieBreakMode = TieBreakMode.deterministic_edge_order,
    seed: int = 0,
    oracle: Optional[TieOracle] = None,
) -> SolveResult:
    """Thinnest-path approximation: label setting on stored cover width.

    Each vertex keeps ONE best-known cover (full vertex set, not just a
    number).  Settle the unsettled vertex of minimum stored width; relax
    every outgoing edge e of the settled vertex u with candidate cover
    C = cover(u) | T_e; every unsettled v in T_e with stored width > |C|
    adopts C.  Equal-width candidates are resolved per ``tb``.  Stops when
    t settles.  Keeping one cover per vertex is exactly what makes this an
    approximation: a wider-now cover can be thinner later.
    """
    res, _, _ = _tsba_core(h, s, t, tb, seed, oracle)
    return res


def check_tsba_tree_property(
    h: Hypergraph,
    s: int,
    t: int,
    tb: TieBreakMode = TieBreakMode.deterministic_edge_order,
    seed: int = 0,
    oracle: Optional[TieOracle] = None,
) -> bool:
    """Tree-structure invariant of the TSBA search at termination.

    For every edge e whose source settled, every v in T_e must satisfy
    width(v) <= |cover(s_e) | T_e| — settling order is monotone in width,
    so a settled source can never reveal a thinner route to a vertex than
    the one already stored.
    """
    _, cover, settled = _tsba_core(h, s, t, tb, seed, oracle)
    for e in h.edges:
        if e.source not in settled:
            continue
        bound = (cover[e.source] | h.dest_mask(e.id)).bit_count()
        for v in e.destinations:
            if v in cover and cover[v].bit_count() > bound:
                return False
    return True


# -- exact ----------------------------------------------------------------------


DEFAULT_STATE_BUDGET = 10**6


def exact(
    h: Hypergraph,
    s: int,
    t: int,
    budget: int = DEFAULT_STATE_BUDGET,
) -> SolveResult:
    """Provably minimum-width hyperpath via best-first state search.

    States are (relay vertex v, cover bitmask C), starting from (s, {s}).
    An edge e rooted at v yields (u, C | T_e) for every u in T_e.  The
    priority is |C|; covers only grow along transitions, so the first
    popped state whose cover contains t is optimal.  Dominance pruning
    discards (v, C) whenever a retained C' at v satisfies C' ⊆ C — any
    completion of C works at least as well for C'.

    Raises BudgetExceededError after ``budget`` state pops (deliberately
    distinct from the unreachable case, which returns a None-width result).
    """
    _check_endpoints(h, s, t)
    t_bit = 1 << t
    start = 1 << s
    retained: Dict[int, List[int]] = {s: [start]}
    parent: Dict[Tuple[int, int], Tuple[int, int, int]] = {}
    heap: List[Tuple[int, int, int, int]] = [(1, 0, s, start)]
    seq = 1
    states = relaxations = 0

    goal: Optional[Tuple[int, int]] = None
    while heap:
        w, _, v, c = heapq.heappop(heap)
        kept = retained.get(v)
        if kept is None or c not in kept:
            continue  # superseded by a dominating cover
        if states >= budget:
            raise BudgetExceededError(
                f"exact search exceeded its budget of {budget} states"
            )
        states += 1
        if c & t_bit:
            goal = (v, c)
            break
        for eid in h.out_edges(v):
            relaxations += 1
            dmask = h.dest_mask(eid)
            nc = c | dmask
            for u in bits_of(dmask):
                if u == v and nc == c:
                    continue
                bucket = retained.setdefault(u, [])
                if any(m & ~nc == 0 for m in bucket):
                    continue  # dominated by a retained subset
                bucket[:] = [m for m in bucket if nc & ~m != 0]
                bucket.append(nc)
                parent[(u, nc)] = (v, c, eid)
                heapq.heappush(heap, (nc.bit_count(), seq, u, nc))
                seq += 1

    if goal is None:
        return _not_found(states, relaxations)
    edges: List[int] = []
    v, c = goal
    while (v, c) != (s, start):
        pv, pc, eid = parent[(v, c)]
        edges.append(eid)
        v, c = pv, pc
    edges.reverse()
    res = _found(h, edges, s, t, states, relaxations)
    assert res.width == goal[1].bit_count()
    return res


# -- approximation-ratio bounds ---------------------------------------------------


def spba_bound(n: int) -> float:
    """Worst-case SPBA approximation factor sqrt(n/2)."""
    return math.sqrt(n / 2.0)


def tsba_bound(n: int) -> float:
    """Worst-case TSBA approximation factor n / (2 sqrt(n-1))."""
    return n / (2.0 * math.sqrt(n - 1))


def spba_bound_holds(w_alg: int, w_opt: int, n: int) -> bool:
    """w_alg <= sqrt(n/2) * w_opt, checked in exact integer arithmetic."""
    return 2 * w_alg * w_alg <= n * w_opt * w_opt


def tsba_bound_holds(w_alg: int, w_opt: int, n: int) -> bool:
    """w_alg <= n/(2 sqrt(n-1)) * w_opt, checked in exact integer arithmetic."""
    return 4 * (n - 1) * w_alg * w_alg <= n * n * w_opt * w_opt


@dataclass(frozen=True)
class BoundReport:
    """Outcome of verify_ratio_bounds.  Ratio fields are None when the
    target is unreachable; all check fields are None when incomplete."""

    n: int
    complete: bool
    spba_width: Optional[int] = None
    tsba_width: Optional[int] = None
    exact_width: Optional[int] = None
    spba_ratio: Optional[float] = None
    tsba_ratio: Optional[float] = None
    spba_bound: Optional[float] = None
    tsba_bound: Optional[float] = None
    ring_bound: Optional[float] = None
    spba_bound_ok: Optional[bool] = None
    tsba_bound_ok: Optional[bool] = None
    ring_bound_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        if not self.complete:
            return False
        return all(
            flag is not False
            for flag in (self.spba_bound_ok, self.tsba_bound_ok, self.ring_bound_ok)
        )


def verify_ratio_bounds(
    h: Hypergraph,
    s: int,
    t: int,
    geometry=None,
    budget: int = DEFAULT_STATE_BUDGET,
    tb: TieBreakMode = TieBreakMode.deterministic_edge_order,
) -> BoundReport:
    """Run all three solvers and check the approximation guarantees.

    SPBA ratio vs sqrt(n/2) and TSBA ratio vs n/(2 sqrt(n-1)) are checked
    in exact integer arithmetic.  When a GeometricInstance is supplied, both
    ratios are additionally checked against the ring guarantee 2(1+2α)^d.
    A budget-exhausted exact run yields complete=False rather than a guess.
    """
    n = h.vertex_count
    try:
        opt = exact(h, s, t, budget=budget)
    except BudgetExceededError:
        return BoundReport(n=n, complete=False)
    a = spba(h, s, t)
    b = tsba(h, s, t, tb=tb)
    if opt.width is None:
        return BoundReport(
            n=n, complete=True,
            spba_width=a.width, tsba_width=b.width, exact_width=None,
        )
    ring_bound_val = ring_ok = None
    if geometry is not None:
        from .geom import compute_alpha, ring_width_bound

        ring_bound_val = ring_width_bound(compute_alpha(geometry), geometry.dim)
        ring_ok = (
            a.width <= ring_bound_val * opt.width
            and b.width <= ring_bound_val * opt.width
        )
    return BoundReport(
        n=n,
        complete=True,
        spba_width=a.width,
        tsba_width=b.width,
        exact_width=opt.width,
        spba_ratio=a.width / opt.width,
        tsba_ratio=b.width / opt.width,
        spba_bound=spba_bound(n),
        tsba_bound=tsba_bound(n),
        ring_bound=ring_bound_val,
        spba_bound_ok=spba_bound_holds(a.width, opt.width, n),
        tsba_bound_ok=tsba_bound_holds(b.width, opt.width, n),
        ring_bound_ok=ring_ok,
    )
