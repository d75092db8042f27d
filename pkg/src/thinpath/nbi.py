"""Nested backward induction: linear-time thinnest paths on a line.

A LineInstance is n vertices on a line with interval-monotone reach: when a
vertex transmits at some power it covers a contiguous coordinate interval
around itself, and raising power only grows that interval.  Two
parametrizations are supported —

- disk:     symmetric radius R_i; power r ∈ (0, R_i] covers [x_i − r, x_i + r]
- interval: maximal interval [x_i − a_i, x_i + b_i]; power λ ∈ (0, 1]
            covers [x_i − λ·a_i, x_i + λ·b_i]

Non-contiguous reach sets are deliberately out of scope: the backward-
induction argument needs every sub-zone to be swallowed by the hop that
leaves it, which is a property of contiguous coverage only.

All reach decisions go through one canonical function, :func:`power_needed`,
computed in exact rational arithmetic over the float inputs, so the solver,
the hypergraph materializer, and the cover computation can never disagree
about a boundary.

The algorithm (two steps, O(n) vertex examinations total, see
:func:`nbi_operation_count`):

1. Walk predecessor links from the target: ρ(v) is the rightmost vertex
   strictly left of v that can reach v.  The walk stops at the first chain
   vertex u_l with x(u_l) ≤ x(s).  Scans for consecutive ρ's cover disjoint
   index ranges, so step 1 examines each vertex at most once.
2. If u_l ≠ s, a two-pointer breadth-first search confined to the terminal
   zone [x(u_l), x(u_{l-1})) finds any path s → u_l; discovered vertices
   always form one contiguous index block, so each dequeue pays at most two
   failed reach checks and every success is a new discovery: ≤ 3·|zone|
   checks.  Any vertices this sub-path covers inside the zone are covered
   again by u_l's own hop, which is what makes "any path" good enough.

The reported width is the true cover width of the returned path — the
union of every hop's coverage — not a positional count; broadcasts can
spill left of u_l and those receivers count.
"""

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import json
import math

from .hypercore import Hypergraph, Hyperpath, validate_hyperpath
from .solvers import SolveResult, TieBreakMode

LINE_MODELS = ("disk", "interval")


class LineInstanceError(ValueError):
    """Malformed line instance or an input outside the 1-D model."""


class UnsupportedModelError(LineInstanceError):
    """Operation requires the disk propagation model."""


@dataclass(frozen=True)
class LineInstance:
    """Vertices on a line with per-vertex contiguous reach.

    x must be sorted ascending (ties allowed, stable by index).  For the
    disk model supply ``r``; for the interval model supply ``ab`` pairs
    (leftward reach a_i, rightward reach b_i).  source/target may sit in
    either coordinate order — solvers mirror internally — but may not
    coincide in position.
    """

    x: Tuple[float, ...]
    model: str
    r: Optional[Tuple[float, ...]] = None
    ab: Optional[Tuple[Tuple[float, float], ...]] = None
    source: int = 0
    target: int = 0

    def __post_init__(self):
        n = len(self.x)
        if n < 2:
            raise LineInstanceError("need at least 2 vertices")
        if any(not math.isfinite(v) for v in self.x):
            raise LineInstanceError("non-finite coordinate")
        if any(a > b for a, b in zip(self.x, self.x[1:])):
            raise LineInstanceError("positions must be sorted ascending")
        if self.model not in LINE_MODELS:
            raise LineInstanceError(f"unknown reach model '{self.model}'")
        if self.model == "disk":
            if self.r is None or self.ab is not None:
                raise LineInstanceError("disk model needs 'r' and no 'ab'")
            if len(self.r) != n:
                raise LineInstanceError("'r' must have one entry per vertex")
            if any(not (math.isfinite(v) and v >= 0) for v in self.r):
                raise LineInstanceError("radii must be finite and >= 0")
        else:
            if self.ab is None or self.r is not None:
                raise LineInstanceError("interval model needs 'ab' and no 'r'")
            if len(self.ab) != n:
                raise LineInstanceError("'ab' must have one entry per vertex")
            for a, b in self.ab:
                if not (math.isfinite(a) and math.isfinite(b) and a >= 0 and b >= 0):
                    raise LineInstanceError("reaches must be finite and >= 0")
        for name, v in (("source", self.source), ("target", self.target)):
            if not (0 <= v < n):
                raise LineInstanceError(f"{name} index out of range")
        if self.source == self.target:
            raise LineInstanceError("source and target must differ")
        if self.x[self.source] == self.x[self.target]:
            raise LineInstanceError("source and target positions coincide")
        # exact rational views of the inputs, shared by every reach decision
        object.__setattr__(self, "_fx", tuple(Fraction(v) for v in self.x))

    @property
    def n(self) -> int:
        return len(self.x)


def power_needed(inst: LineInstance, u: int, w: int) -> Optional[Fraction]:
    """Minimum power for u to cover w, or None if out of reach at full power.

    The scale is model-specific but consistent per transmitter: the needed
    radius for the disk model, the needed fraction of the maximal interval
    for the interval model.  Comparing these values orders w by how soon it
    enters u's coverage, which is the only ordering anything here uses.
    """
    dx = inst._fx[w] - inst._fx[u]
    if inst.model == "disk":
        need = abs(dx)
        return need if need <= Fraction(inst.r[u]) else None
    if dx == 0:
        return Fraction(0)
    side = Fraction(inst.ab[u][1] if dx > 0 else inst.ab[u][0])
    if side == 0:
        return None
    need = abs(dx) / side
    return need if need <= 1 else None


def reaches(inst: LineInstance, u: int, w: int) -> bool:
    """Can u cover w at full power?"""
    return power_needed(inst, u, w) is not None


# -- predecessor chain (step 1) ----------------------------------------------


@dataclass(frozen=True)
class PredecessorChain:
    """ρ-walk from the target: chain[0] = ρ(t), chain[i+1] = ρ(chain[i]),
    ending at u_l with x(u_l) ≤ x(s).  terminal_zone is (u_l, previous chain
    vertex or t), whose positions bound the step-2 search zone."""

    chain: Tuple[int, ...]
    terminal_zone: Tuple[int, int]


def predecessor(inst: LineInstance, v: int) -> Optional[int]:
    """Rightmost vertex strictly left (in coordinate) of v that reaches v."""
    u, _ = _rho_scan(inst, v)
    return u


def _rho_scan(inst: LineInstance, v: int) -> Tuple[Optional[int], int]:
    """Leftward scan for ρ(v); returns (vertex or None, examinations)."""
    ops = 0
    xv = inst.x[v]
    for j in range(v - 1, -1, -1):
        ops += 1
        if inst.x[j] == xv:
            continue  # not strictly left
        if reaches(inst, j, v):
            return j, ops
    return None, ops


def _build_chain(inst: LineInstance):
    """Step 1.  Returns (PredecessorChain or None, examinations)."""
    s, t = inst.source, inst.target
    ops = 0
    chain: List[int] = []
    v = t
    while True:
        u, scanned = _rho_scan(inst, v)
        ops += scanned
        if u is None:
            return None, ops
        chain.append(u)
        if inst.x[u] <= inst.x[s]:
            prev = chain[-2] if len(chain) >= 2 else t
            return PredecessorChain(chain=tuple(chain), terminal_zone=(u, prev)), ops
        v = u


# -- the solver ----------------------------------------------------------------


def _mirrored(inst: LineInstance) -> Tuple[LineInstance, Tuple[int, ...]]:
    """Reflect the line so the source lands left of the target.

    Returns (mirrored instance, perm) with perm[new_index] = old_index.
    """
    n = inst.n
    perm = tuple(range(n - 1, -1, -1))
    x = tuple(-inst.x[old] for old in perm)
    kwargs = {}
    if inst.model == "disk":
        kwargs["r"] = tuple(inst.r[old] for old in perm)
    else:
        kwargs["ab"] = tuple((inst.ab[old][1], inst.ab[old][0]) for old in perm)
    m = LineInstance(
        x=x,
        model=inst.model,
        source=n - 1 - inst.source,
        target=n - 1 - inst.target,
        **kwargs,
    )
    return m, perm


def _solve_hops(inst: LineInstance):
    """Run both steps on an instance with x_s < x_t.

    Returns (hops or None, total_ops, step2_checks); each hop is a
    (transmitter, vertex-it-must-reach) pair, in path order.
    """
    s, t = inst.source, inst.target
    chain_res, ops = _build_chain(inst)
    if chain_res is None:
        return None, ops, 0
    chain = list(chain_res.chain)
    u_l, prev = chain_res.terminal_zone

    sub: List[Tuple[int, int]] = []
    checks = 0
    if u_l != s:
        lo = bisect_left(inst.x, inst.x[u_l])
        hi = bisect_left(inst.x, inst.x[prev])
        parent: Dict[int, int] = {}
        k_l = k_r = s
        queue = deque([s])
        found = False
        while queue and not found:
            w = queue.popleft()
            while k_l - 1 >= lo:
                cand = k_l - 1
                checks += 1
                if not reaches(inst, w, cand):
                    break
                parent[cand] = w
                queue.append(cand)
                k_l = cand
                if cand == u_l:
                    found = True
                    break
            while not found and k_r + 1 < hi:
                cand = k_r + 1
                checks += 1
                if not reaches(inst, w, cand):
                    break
                parent[cand] = w
                queue.append(cand)
                k_r = cand
                if cand == u_l:
                    found = True
                    break
        if not found:
            return None, ops + checks, checks
        v = u_l
        while v != s:
            sub.append((parent[v], v))
            v = parent[v]
        sub.reverse()

    # chain is [ρ(t), ρ(ρ(t)), ..., u_l]; traverse it forward from u_l
    hops = sub[:]
    for i in range(len(chain) - 1, 0, -1):
        hops.append((chain[i], chain[i - 1]))
    hops.append((chain[0], t))
    return hops, ops + checks, checks


def build_line_hypergraph(inst: LineInstance) -> Hypergraph:
    """Materialize the broadcast hypergraph: one edge per vertex per
    distinct needed-power level among its reachable neighbors, destination
    sets nested by level (equal levels enter together)."""
    n = inst.n
    edges = []
    for u in range(n):
        levels: List[Tuple[Fraction, int]] = []
        for w in range(n):
            if w == u:
                continue
            p = power_needed(inst, u, w)
            if p is not None:
                levels.append((p, w))
        levels.sort()
        prefix: List[int] = []
        k = 0
        while k < len(levels):
            p = levels[k][0]
            while k < len(levels) and levels[k][0] == p:
                prefix.append(levels[k][1])
                k += 1
            edges.append((u, list(prefix)))
    return Hypergraph(n, edges, vertex_cap=max(n, 4096))


def _hop_edge_id(h: Hypergraph, u: int, target: int) -> int:
    """Lowest-power edge of u covering target (levels are nested, so the
    first hit in construction order is the minimal one)."""
    bit = 1 << target
    for eid in h.out_edges(u):
        if h.dest_mask(eid) & bit:
            return eid
    raise LineInstanceError(f"no edge from {u} reaches {target}")


def nbi_solve(inst: LineInstance, h: Optional[Hypergraph] = None) -> SolveResult:
    """Thinnest path on a line by nested backward induction.

    Edge ids in the result refer to :func:`build_line_hypergraph` of the
    same instance (pass a prebuilt one via ``h`` to skip rebuilding).
    Diagnostics: ``states`` is the examination count of the raw algorithm
    (the ≤ 4n quantity), ``relaxations`` the step-2 reach checks alone.
    """
    if inst.x[inst.source] < inst.x[inst.target]:
        hops, ops, checks = _solve_hops(inst)
    else:
        m, perm = _mirrored(inst)
        mhops, ops, checks = _solve_hops(m)
        hops = (
            None
            if mhops is None
            else [(perm[a], perm[b]) for a, b in mhops]
        )
    if hops is None:
        return SolveResult(None, None, (), ops, checks)
    if h is None:
        h = build_line_hypergraph(inst)
    edges = [_hop_edge_id(h, a, b) for a, b in hops]
    path = Hyperpath(edges=tuple(edges), origin=inst.source, target=inst.target)
    mask = 1 << inst.source
    for eid in edges:
        mask |= h.dest_mask(eid)
    cover = []
    v = 0
    mm = mask
    while mm:
        if mm & 1:
            cover.append(v)
        mm >>= 1
        v += 1
    return SolveResult(
        path=path,
        width=mask.bit_count(),
        cover=tuple(cover),
        states=ops,
        relaxations=checks,
        tie_break_mode=TieBreakMode.deterministic_edge_order,
    )


def nbi_operation_count(inst: LineInstance) -> int:
    """Vertex examinations of the raw two-step algorithm (no hypergraph
    materialization, no cover computation).  Always ≤ 4n: step 1's scans
    are disjoint index ranges (≤ n) and step 2 pays ≤ 3·|zone| ≤ 3n."""
    if inst.x[inst.source] < inst.x[inst.target]:
        _, ops, _ = _solve_hops(inst)
    else:
        m, _ = _mirrored(inst)
        _, ops, _ = _solve_hops(m)
    return ops


# -- 1.5-D cost -----------------------------------------------------------------


@dataclass(frozen=True)
class EveField:
    """Eavesdroppers in the ambient space containing the line (the line is
    coordinate axis 0).  Each in-network node inside a covered area costs a
    fixed 1; each eavesdropper inside costs its own c ≥ 0."""

    eves: Tuple[Tuple[Tuple[float, ...], float], ...] = ()

    def __post_init__(self):
        dims = {len(p) for p, _ in self.eves}
        if len(dims) > 1:
            raise LineInstanceError("eavesdropper dimensions differ")
        for p, c in self.eves:
            if not all(math.isfinite(v) for v in p):
                raise LineInstanceError("non-finite eavesdropper coordinate")
            if not (math.isfinite(c) and c >= 0):
                raise LineInstanceError("eavesdropper cost must be finite and >= 0")

    @property
    def dim(self) -> int:
        return len(self.eves[0][0]) if self.eves else 1


def path_cost_1p5d(
    inst: LineInstance,
    field: EveField,
    p: Hyperpath,
    g=None,
) -> float:
    """Secrecy cost of a path: exposed in-network nodes (1 each) plus the
    costs of exposed eavesdroppers, membership judged against the union of
    per-hop disks.  Disk propagation model only.

    ``g`` may supply the GeometricInstance embedding to take the covered
    area from; by default the disks are derived from the line instance
    itself (centers on axis 0).
    """
    from .geom import CoveredArea, area_contains, covered_area

    if inst.model != "disk":
        raise UnsupportedModelError("1.5-D cost requires the disk model")
    dim = field.dim
    if g is not None:
        area = covered_area(g, p)
        if area.dim != dim and field.eves:
            raise LineInstanceError("eavesdropper/instance dimension mismatch")
        dim = area.dim
    else:
        h = build_line_hypergraph(inst)
        if not validate_hyperpath(h, p):
            raise LineInstanceError("path is not valid for this instance")
        disks = []
        for eid in p.edges:
            e = h.edge(eid)
            cx = inst.x[e.source]
            r = max(abs(inst.x[v] - cx) for v in e.destinations)
            center = (cx,) + (0.0,) * (dim - 1)
            disks.append((center, r, r * r))
        area = CoveredArea(dim=dim, disks=tuple(disks))

    cost = 0.0
    for v in range(inst.n):
        q = (inst.x[v],) + (0.0,) * (dim - 1)
        if area_contains(area, q):
            cost += 1.0
    for q, c in field.eves:
        if area_contains(area, q):
            cost += c
    return cost


# -- JSON and conversions --------------------------------------------------------


def line_to_json(inst: LineInstance) -> str:
    reach = (
        {"model": "disk", "r": list(inst.r)}
        if inst.model == "disk"
        else {"model": "interval", "ab": [list(p) for p in inst.ab]}
    )
    doc = {
        "x": list(inst.x),
        "reach": reach,
        "source": inst.source,
        "target": inst.target,
    }
    return json.dumps(doc, indent=2) + "\n"


def line_from_json(text: str) -> LineInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LineInstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise LineInstanceError("line document must be a JSON object")
    for f in ("x", "reach", "source", "target"):
        if f not in doc:
            raise LineInstanceError(f"missing field '{f}'")
    reach = doc["reach"]
    if not isinstance(reach, dict) or "model" not in reach:
        raise LineInstanceError("field 'reach' must be an object with 'model'")
    model = reach["model"]
    kwargs = {}
    if model == "disk":
        if "r" not in reach:
            raise LineInstanceError("missing field 'reach.r'")
        kwargs["r"] = tuple(float(v) for v in reach["r"])
    elif model == "interval":
        if "ab" not in reach:
            raise LineInstanceError("missing field 'reach.ab'")
        kwargs["ab"] = tuple((float(a), float(b)) for a, b in reach["ab"])
    else:
        raise LineInstanceError(f"unknown reach model '{model}'")
    try:
        return LineInstance(
            x=tuple(float(v) for v in doc["x"]),
            model=model,
            source=doc["source"],
            target=doc["target"],
            **kwargs,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, LineInstanceError):
            raise
        raise LineInstanceError(f"malformed line instance: {exc}") from exc


def line_from_geometric(g) -> LineInstance:
    """Interpret a geometric instance as a line instance when it is one:
    points already sorted along axis 0, zero off-axis coordinates, a
    zero-rmin disk-style model.  Vertex indices then coincide 1:1 (any
    eavesdroppers are dropped — they never enter line solving).
    """
    if g.model == "disk_graph":
        raise LineInstanceError("nbi requires 1-D instance (disk_graph unsupported)")
    if any(r != 0 for r in g.rmin):
        raise LineInstanceError("nbi requires 1-D instance (rmin must be 0)")
    xs = []
    for p in g.points:
        if any(c != 0 for c in p[1:]):
            raise LineInstanceError("nbi requires 1-D instance (points off axis)")
        xs.append(p[0])
    if any(a > b for a, b in zip(xs, xs[1:])):
        raise LineInstanceError("nbi requires 1-D instance (points not sorted)")
    return LineInstance(
        x=tuple(xs),
        model="disk",
        r=tuple(g.rmax),
        source=g.source,
        target=g.target,
    )
