"""Parametric instance constructors and the dominating-set reduction.

Contents:

- ``reduce_mds`` — the hardness reduction: a minimum dominating set of size
  W in a simple graph corresponds exactly to a thinnest v_1→v_{n+1} path of
  width W·n_s + n + 1 in the built hypergraph.
- ``mds_bruteforce`` — subset-enumeration MDS oracle for cross-checking.
- ``build_family`` — named worst-case families with their expected widths:
  * ``tsba_worst``: the ladder on which TSBA's stored-cover greediness is
    maximally wrong (ratio exactly n / (2√(n−1))).
  * ``spba_worst``: the red/blue two-chain instance on which the shortest
    path is far from the thinnest (ratio (k²+k+2)/(2k+4)).
  * ``fig5_fixture``: a small fixed instance where SPBA is optimal and TSBA
    is not — loaded from packaged JSON and certified on every build.
- ``calibrate_spba_worst`` — resolves the blue-chain length k′ so that the
  shorter-by-length chain is unambiguously the blue one.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, Optional, Tuple
import importlib.resources

from .hypercore import Hypergraph, instance_from_json, path_length
from .solvers import TieBreakMode, exact, spba, tsba


class GadgetError(ValueError):
    """Bad constructor parameters or a broken packaged fixture."""


# -- simple graphs and the MDS reduction --------------------------------------


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise GadgetError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GadgetError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GadgetError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GadgetError(f"duplicate edge ({u},{v})")
            seen.add(key)

    def closed_neighborhood(self, v: int) -> Tuple[int, ...]:
        """v plus its one-hop neighbors — the vertices that dominate v."""
        dom = {v}
        for a, b in self.edges:
            if a == v:
                dom.add(b)
            elif b == v:
                dom.add(a)
        return tuple(sorted(dom))


def mds_bruteforce(g: SimpleGraph) -> int:
    """Minimum dominating set size by smallest-first subset enumeration.

    Capped at n <= 20 (the point is an oracle, not a solver).
    """
    if g.n > 20:
        raise GadgetError("mds_bruteforce is capped at 20 vertices")
    if g.n == 0:
        return 0
    dominated_by = [set(g.closed_neighborhood(v)) for v in range(g.n)]
    everyone = set(range(g.n))
    for k in range(1, g.n + 1):
        for subset in combinations(range(g.n), k):
            covered = set()
            for v in subset:
                covered |= dominated_by[v]
            if covered == everyone:
                return k
    raise AssertionError("unreachable: the full vertex set always dominates")


@dataclass(frozen=True)
class ReductionInstance:
    """Hypergraph encoding of a dominating-set instance.

    Vertex layout: normals v_1..v_{n+1} are ids 0..n; then one block of n_s
    ids per original graph vertex, contiguously, recorded in super_blocks.
    Rooted at each normal id i < n are exactly |closed_neighborhood(i)|
    hyperedges, one per dominator j, each T = {i+1} ∪ block_j.  Block
    vertices have no outgoing edges, so every v_1→v_{n+1} path takes exactly
    n hops and pays n_s extra width per distinct dominator block it touches
    — hence thinnest width = MDS·n_s + n + 1.
    """

    hypergraph: Hypergraph
    n_original: int
    n_s: int
    super_blocks: Tuple[Tuple[int, ...], ...]
    source: int
    target: int


def reduce_mds(g: SimpleGraph, n_s: int) -> ReductionInstance:
    if g.n < 1:
        raise GadgetError("reduction needs at least one graph vertex")
    if n_s < 1:
        raise GadgetError("super-vertex size must be >= 1")
    n = g.n
    blocks = []
    base = n + 1
    for j in range(n):
        blocks.append(tuple(range(base + j * n_s, base + (j + 1) * n_s)))
    edges = []
    for i in range(n):
        for j in g.closed_neighborhood(i):
            edges.append((i, [i + 1, *blocks[j]]))
    total = (n + 1) + n * n_s
    h = Hypergraph(total, edges, vertex_cap=max(total, 4096))
    return ReductionInstance(
        hypergraph=h,
        n_original=n,
        n_s=n_s,
        super_blocks=tuple(blocks),
        source=0,
        target=n,
    )


# -- worst-case families --------------------------------------------------------


class Family(Enum):
    spba_worst = "spba_worst"
    tsba_worst = "tsba_worst"
    fig5_fixture = "fig5_fixture"


@dataclass(frozen=True)
class FamilyParams:
    family: Family
    k: int = 2
    k_prime: Optional[int] = None

    def __post_init__(self):
        if self.family is not Family.fig5_fixture and self.k < 2:
            raise GadgetError("family parameter k must be >= 2")
        if self.k_prime is not None and self.family is not Family.spba_worst:
            raise GadgetError("k_prime only applies to spba_worst")


def _build_tsba_worst(k: int) -> Tuple[Hypergraph, Dict]:
    """Ladder of k rungs: normals v_0..v_{k-1} then t (ids 0..k); each
    v_{i-1} offers a private-block edge e_i (i <= k-1) and a shared-block
    edge e'_i; all edges weigh k, so every tie-break decision is between a
    fresh private block and the one shared block.  Optimal takes the shared
    block every time: width 2k.  A tie-break that avoids the shared block
    pays k-1 fresh vertices per hop: width k²+1 = n."""
    t = k
    base = k + 1
    private = [
        tuple(range(base + i * (k - 1), base + (i + 1) * (k - 1)))
        for i in range(k - 1)
    ]
    shared = tuple(range(base + (k - 1) * (k - 1), base + k * (k - 1)))
    n = base + k * (k - 1)
    assert n == k * k + 1
    edges = []
    for i in range(1, k + 1):
        head = i if i < k else t
        if i <= k - 1:
            edges.append((i - 1, [head, *private[i - 1]]))
        edges.append((i - 1, [head, *shared]))
    h = Hypergraph(n, edges, vertex_cap=max(n, 4096))
    expected = {
        "opt_width": 2 * k,
        "approx_width": k * k + 1,
        "ratio": (k * k + 1) / (2 * k),
        "source": 0,
        "target": t,
    }
    return h, expected


def shared_block_avoider(k: int):
    """Adversarial tie oracle for tsba_worst(k): on equal-width candidates,
    prefer the cover that avoids the shared block — the worst possible
    choice regardless of relaxation order."""
    base = k + 1
    shared_mask = 0
    for v in range(base + (k - 1) * (k - 1), base + k * (k - 1)):
        shared_mask |= 1 << v

    def oracle(_vertex: int, incumbent: int, candidate: int) -> bool:
        return (candidate & shared_mask) == 0 and (incumbent & shared_mask) != 0

    return oracle


def _build_spba_worst(k: int, k_prime: int) -> Tuple[Hypergraph, Dict]:
    """Two disjoint chains from s to t.  The red chain v_1..v_k is thin
    (width k+2) but long: hop i drags all earlier reds back in, costing
    length i.  The blue chain u_1..u_{k'} is unit-weight, longer in hops
    but shorter in length when k' < k(k+1)/2 + 1, and wide (width k'+2).
    A shortest-length search therefore picks blue and pays the width."""
    s = 0
    t = k + 1
    blue0 = k + 2
    n = k + k_prime + 2
    edges = [(s, [1]), (s, [blue0])]
    for i in range(1, k + 1):
        nxt = i + 1 if i < k else t
        edges.append((i, [*range(1, i), nxt]))
    for j in range(k_prime):
        u = blue0 + j
        nxt = u + 1 if j < k_prime - 1 else t
        edges.append((u, [nxt]))
    h = Hypergraph(n, edges, vertex_cap=max(n, 4096))
    expected = {
        "opt_width": k + 2,
        "approx_width": k_prime + 2,
        "ratio": (k_prime + 2) / (k + 2),
        "source": s,
        "target": t,
    }
    return h, expected


def default_k_prime(k: int) -> int:
    """Blue-chain length that makes the blue chain strictly shorter in
    length than the red chain (red totals 1 + k(k+1)/2, blue totals k'+1),
    so the shortest-path choice needs no tie luck."""
    return k * (k + 1) // 2 - 1


def calibrate_spba_worst(k: int) -> int:
    """Search k' near k(k+1)/2 for the value where the shortest-length path
    is certifiably the blue chain: the returned path must have blue's hop
    count and length, and the exact solver must confirm the red width is
    optimal.  Raises GadgetError if no candidate qualifies."""
    base = k * (k + 1) // 2
    for k_prime in (base - 1, base, base + 1):
        if k_prime < 1:
            continue
        h, expected = _build_spba_worst(k, k_prime)
        res = spba(h, expected["source"], expected["target"])
        if res.path is None or path_length(h, res.path) != k_prime + 1:
            continue
        if len(res.path.edges) != k_prime + 1 or res.width != k_prime + 2:
            continue
        opt = exact(h, expected["source"], expected["target"])
        if opt.width != k + 2:
            continue
        if k_prime + 1 < 1 + k * (k + 1) // 2:  # strictly shorter: no tie luck
            return k_prime
    raise GadgetError(f"no blue-forcing k_prime found near {base} for k={k}")


_FIG5_RESOURCE = "fig5.json"


def load_fig5() -> Tuple[Hypergraph, int, int]:
    """Load the packaged fixed instance (8 vertices, 6 edges)."""
    text = (
        importlib.resources.files("thinpath.data")
        .joinpath(_FIG5_RESOURCE)
        .read_text()
    )
    return instance_from_json(text)


def _build_fig5() -> Tuple[Hypergraph, Dict]:
    """Load and certify the fixed SPBA-beats-TSBA instance.

    The defining property — SPBA matches the exact width while TSBA exceeds
    it under both deterministic relaxation orders — is re-proved on every
    build, so a corrupted fixture file fails loudly instead of silently
    weakening the regression suite.
    """
    h, s, t = load_fig5()
    opt = exact(h, s, t)
    a = spba(h, s, t)
    b_det = tsba(h, s, t, tb=TieBreakMode.deterministic_edge_order)
    b_rev = tsba(h, s, t, tb=TieBreakMode.reverse_edge_order)
    if opt.width is None or a.width != opt.width:
        raise GadgetError("fig5 fixture broken: SPBA no longer optimal on it")
    if not (b_det.width > opt.width and b_rev.width > opt.width):
        raise GadgetError("fig5 fixture broken: TSBA no longer suboptimal on it")
    expected = {
        "opt_width": opt.width,
        "approx_width": b_det.width,
        "ratio": b_det.width / opt.width,
        "source": s,
        "target": t,
    }
    return h, expected


def build_family(p: FamilyParams) -> Tuple[Hypergraph, Dict]:
    """Construct a named family instance.

    Returns (hypergraph, expected) where expected carries opt_width,
    approx_width, ratio, source and target.  approx_width means: the width
    the family's victim algorithm is driven to (TSBA under the shared-block
    avoider for tsba_worst, SPBA for spba_worst, TSBA deterministic for the
    fig5 fixture).
    """
    if p.family is Family.tsba_worst:
        return _build_tsba_worst(p.k)
    if p.family is Family.spba_worst:
        k_prime = p.k_prime if p.k_prime is not None else default_k_prime(p.k)
        if k_prime < 1:
            raise GadgetError("k_prime must be >= 1")
        return _build_spba_worst(p.k, k_prime)
    if p.family is Family.fig5_fixture:
        return _build_fig5()
    raise GadgetError(f"unknown family {p.family!r}")
