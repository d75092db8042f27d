"""Geometric instance models: ring/disk hypergraph builders, covered areas.

Vertices live in 1-, 2- or 3-dimensional Euclidean space.  Each in-network
point i carries an annulus (r_i, R_i]: transmitting at power r ∈ (r_i, R_i]
reaches exactly the other vertices whose distance d satisfies r_i < d ≤ r.
Eavesdroppers are extra vertices that can receive (they appear in
destination sets) but never transmit (no outgoing edges).

Vertex ids in built hypergraphs: in-network points first (input order),
then eavesdroppers.

All membership comparisons are exact comparisons of squared distances
computed by the single canonical expression :func:`dist2` — no epsilons.
Instance generators elsewhere in the package keep point sets away from
adversarially near-tied distances, so float rounding never flips topology
in practice.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple
import json
import math

import numpy as np

from .hypercore import Hypergraph, Hyperpath, HypergraphError, validate_hyperpath

GEOMETRIC_MODELS = ("ring", "disk_hypergraph", "disk_graph", "unit_disk")


class GeometryError(ValueError):
    """Malformed or inconsistent geometric instance."""


class DegenerateGeometryError(GeometryError):
    """Geometry collapses a required quantity to zero (e.g. alpha denominator)."""


class DimensionMismatchError(GeometryError):
    """Operands live in different ambient dimensions."""


def dist2(p: Sequence[float], q: Sequence[float]) -> float:
    """Squared Euclidean distance — the one comparison expression used
    everywhere in this module, so builders and membership tests can never
    disagree about a boundary."""
    s = 0.0
    for a, b in zip(p, q):
        d = a - b
        s += d * d
    return s


@dataclass(frozen=True)
class GeometricInstance:
    """Point set with per-vertex annulus ranges and optional eavesdroppers.

    Invariants (checked at construction)
    - 0 ≤ r_i ≤ R_i, all finite
    - model consistent with the ranges:
      disk_hypergraph ⇔ all r_i = 0; unit_disk ⇔ r_i = 0, R_i = 1;
      disk_graph ⇔ r_i = R_i;  ring is unconstrained
    - source/target index in-network points
    """

    points: Tuple[Tuple[float, ...], ...]
    rmin: Tuple[float, ...]
    rmax: Tuple[float, ...]
    source: int
    target: int
    eves: Tuple[Tuple[Tuple[float, ...], float], ...] = ()
    model: str = "ring"

    def __post_init__(self):
        n = len(self.points)
        if n == 0:
            raise GeometryError("instance needs at least one point")
        dim = len(self.points[0])
        if dim not in (1, 2, 3):
            raise GeometryError(f"dimension must be 1, 2 or 3, got {dim}")
        for p in self.points:
            if len(p) != dim:
                raise DimensionMismatchError("points have inconsistent dimensions")
            if not all(math.isfinite(c) for c in p):
                raise GeometryError("non-finite coordinate")
        if len(self.rmin) != n or len(self.rmax) != n:
            raise GeometryError("rmin/rmax must have one entry per point")
        for i, (r, R) in enumerate(zip(self.rmin, self.rmax)):
            if not (math.isfinite(r) and math.isfinite(R)):
                raise GeometryError(f"non-finite range at point {i}")
            if r < 0 or R < r:
                raise GeometryError(f"need 0 <= rmin <= rmax at point {i}")
        for p, c in self.eves:
            if len(p) != dim:
                raise DimensionMismatchError("eavesdropper dimension mismatch")
            if not all(math.isfinite(x) for x in p):
                raise GeometryError("non-finite eavesdropper coordinate")
            if not (math.isfinite(c) and c >= 0):
                raise GeometryError("eavesdropper cost must be finite and >= 0")
        if self.model not in GEOMETRIC_MODELS:
            raise GeometryError(f"unknown model '{self.model}'")
        if self.model in ("disk_hypergraph", "unit_disk") and any(r != 0 for r in self.rmin):
            raise GeometryError(f"model '{self.model}' requires rmin = 0 everywhere")
        if self.model == "unit_disk" and any(R != 1 for R in self.rmax):
            raise GeometryError("model 'unit_disk' requires rmax = 1 everywhere")
        if self.model == "disk_graph" and any(r != R for r, R in zip(self.rmin, self.rmax)):
            raise GeometryError("model 'disk_graph' requires rmin = rmax everywhere")
        for name, v in (("source", self.source), ("target", self.target)):
            if not (0 <= v < n):
                raise GeometryError(f"{name} index out of range")

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def vertex_count(self) -> int:
        return len(self.points) + len(self.eves)

    def coords(self, v: int) -> Tuple[float, ...]:
        """Embedding of hypergraph vertex v (point or eavesdropper)."""
        if v < len(self.points):
            return self.points[v]
        return self.eves[v - len(self.points)][0]


# -- hypergraph builders -----------------------------------------------------


def build_ring_hypergraph(g: GeometricInstance) -> Hypergraph:
    """One hyperedge per point per distinct in-annulus neighbor distance.

    For point i, sweep the power r over (r_i, R_i]: each distinct distance
    value d with r_i < d ≤ R_i yields the edge whose destination set is every
    vertex (eavesdroppers included) at distance in (r_i, d].  Equidistant
    vertices always enter together — one transmit power cannot split them.
    A neighbor at exactly distance r_i is unreachable (strict inner bound).

    The output always passes check_monotone_nesting: per-vertex destination
    sets are prefixes of one distance-sorted list.
    """
    n = g.vertex_count
    edges: List[Tuple[int, List[int]]] = []
    for i in range(g.n_points):
        lo = g.rmin[i] * g.rmin[i]
        hi = g.rmax[i] * g.rmax[i]
        cand = []
        for j in range(n):
            if j == i:
                continue
            d2 = dist2(g.points[i], g.coords(j))
            if lo < d2 <= hi:
                cand.append((d2, j))
        cand.sort()
        prefix: List[int] = []
        k = 0
        while k < len(cand):
            d2 = cand[k][0]
            while k < len(cand) and cand[k][0] == d2:
                prefix.append(cand[k][1])
                k += 1
            edges.append((i, list(prefix)))
    return Hypergraph(n, edges, vertex_cap=max(n, 4096))


def build_disk_graph(g: GeometricInstance) -> Hypergraph:
    """Fixed-power convention for r_i = R_i: one closed-ball edge per point.

    T = {u ≠ v : d(v,u) ≤ R_v}; points with empty neighborhoods get no edge.
    Raises GeometryError unless rmin = rmax everywhere.
    """
    if any(r != R for r, R in zip(g.rmin, g.rmax)):
        raise GeometryError("build_disk_graph requires rmin = rmax everywhere")
    n = g.vertex_count
    edges = []
    for i in range(g.n_points):
        hi = g.rmax[i] * g.rmax[i]
        dests = [
            j
            for j in range(n)
            if j != i and dist2(g.points[i], g.coords(j)) <= hi
        ]
        if dests:
            edges.append((i, dests))
    return Hypergraph(n, edges, vertex_cap=max(n, 4096))


def build_hypergraph(g: GeometricInstance) -> Hypergraph:
    """Dispatch on g.model."""
    if g.model == "disk_graph":
        return build_disk_graph(g)
    return build_ring_hypergraph(g)


# -- covered areas ------------------------------------------------------------


@dataclass(frozen=True)
class CoveredArea:
    """Union of closed balls, one per path edge.

    Each disk is (center, radius, radius2); radius2 = radius**2 is stored so
    membership tests compare squared distances exactly, the same way the
    builders did.
    """

    dim: int
    disks: Tuple[Tuple[Tuple[float, ...], float, float], ...]


def covered_area(
    g: GeometricInstance, p: Hyperpath, h: Optional[Hypergraph] = None
) -> CoveredArea:
    """One disk per path edge, radius = the minimum power inducing the edge
    (max distance from the transmitter to its destination set).

    ``h`` may pass a prebuilt hypergraph for ``g`` to skip rebuilding.
    Raises GeometryError if ``p`` is not a valid hyperpath of the build.
    """
    if h is None:
        h = build_hypergraph(g)
    if not validate_hyperpath(h, p):
        raise GeometryError("hyperpath is not valid for this instance")
    disks = []
    for eid in p.edges:
        e = h.edge(eid)
        c = g.coords(e.source)
        r2 = max(dist2(c, g.coords(v)) for v in e.destinations)
        disks.append((c, math.sqrt(r2), r2))
    return CoveredArea(dim=g.dim, disks=tuple(disks))


def area_contains(a: CoveredArea, q: Sequence[float]) -> bool:
    """Closed-ball membership in the union."""
    if len(q) != a.dim:
        raise DimensionMismatchError(
            f"query point has dimension {len(q)}, area has {a.dim}"
        )
    return any(dist2(c, q) <= r2 for c, _r, r2 in a.disks)


class AreaRelation(Enum):
    SUBSET = "subset"
    NOT_SUBSET = "not_subset"
    UNKNOWN = "unknown"


def _merged_intervals(a: CoveredArea) -> List[Tuple[float, float]]:
    ivals = sorted((c[0] - r, c[0] + r) for c, r, _r2 in a.disks)
    merged: List[Tuple[float, float]] = []
    for lo, hi in ivals:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def area_subset(
    inner: CoveredArea,
    outer: CoveredArea,
    samples: int = 10_000,
    seed: int = 1729,
) -> AreaRelation:
    """Is the inner union of balls contained in the outer union?

    1-D: exact (interval unions merged and compared), never UNKNOWN.
    d ≥ 2: sufficient test first — every inner ball inside a single outer
    ball (center distance ≤ R_outer − r_inner, the nested-ball criterion) —
    then a seeded randomized witness search over the inner balls.  An exact
    union-of-balls arrangement in d ≥ 2 is out of scope, hence UNKNOWN when
    neither side resolves.
    """
    if inner.dim != outer.dim:
        raise DimensionMismatchError("areas have different dimensions")
    if not inner.disks:
        return AreaRelation.SUBSET
    if inner.dim == 1:
        merged = _merged_intervals(outer)
        for c, r, _r2 in inner.disks:
            lo, hi = c[0] - r, c[0] + r
            if not any(mlo <= lo and hi <= mhi for mlo, mhi in merged):
                return AreaRelation.NOT_SUBSET
        return AreaRelation.SUBSET

    if all(
        any(
            math.sqrt(dist2(ci, co)) <= ro - ri
            for co, ro, _ro2 in outer.disks
        )
        for ci, ri, _ri2 in inner.disks
    ):
        return AreaRelation.SUBSET

    rng = np.random.default_rng(seed)
    d = inner.dim
    n_disks = len(inner.disks)
    for _ in range(samples):
        ci, ri, _ri2 = inner.disks[rng.integers(n_disks)]
        direction = rng.normal(size=d)
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            continue
        radius = ri * float(rng.random()) ** (1.0 / d)
        q = tuple(ci[k] + direction[k] / norm * radius for k in range(d))
        if not area_contains(outer, q):
            return AreaRelation.NOT_SUBSET
    return AreaRelation.UNKNOWN


# -- ring-bound parameter -----------------------------------------------------


def compute_alpha(g: GeometricInstance) -> float:
    """alpha = max_i R_i / max(min_i r_i, min pairwise vertex distance).

    The minimum pairwise distance ranges over all vertices, eavesdroppers
    included (they are vertices of the built hypergraph).  Raises
    DegenerateGeometryError when the denominator is zero (coincident points
    with all r_i = 0).
    """
    if g.vertex_count < 2:
        raise GeometryError("alpha needs at least 2 vertices")
    pts = [g.coords(v) for v in range(g.vertex_count)]
    min_d2 = min(
        dist2(pts[i], pts[j])
        for i in range(len(pts))
        for j in range(i + 1, len(pts))
    )
    denom = max(min(g.rmin), math.sqrt(min_d2))
    if denom == 0:
        raise DegenerateGeometryError(
            "alpha undefined: coincident points with all rmin = 0"
        )
    return max(g.rmax) / denom


def ring_width_bound(alpha: float, dim: int) -> float:
    """The ring-instance approximation guarantee 2·(1+2α)^d."""
    return 2.0 * (1.0 + 2.0 * alpha) ** dim


# -- JSON ---------------------------------------------------------------------


def geometric_to_json(g: GeometricInstance) -> str:
    doc = {
        "dim": g.dim,
        "points": [list(p) for p in g.points],
        "rmin": list(g.rmin),
        "rmax": list(g.rmax),
        "source": g.source,
        "target": g.target,
        "eves": [{"p": list(p), "c": c} for p, c in g.eves],
        "model": g.model,
    }
    return json.dumps(doc, indent=2) + "\n"


def geometric_from_json(text: str) -> GeometricInstance:
    """Parse the geometric instance schema; GeometryError names bad fields."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GeometryError("geometric document must be a JSON object")
    for f in ("dim", "points", "rmin", "rmax", "source", "target"):
        if f not in doc:
            raise GeometryError(f"missing field '{f}'")
    if not isinstance(doc["points"], list) or not all(
        isinstance(p, list) for p in doc["points"]
    ):
        raise GeometryError("field 'points' must be a list of coordinate lists")
    eves = []
    for k, e in enumerate(doc.get("eves", [])):
        if not isinstance(e, dict) or "p" not in e or "c" not in e:
            raise GeometryError(f"field 'eves[{k}]' must be an object with 'p' and 'c'")
        eves.append((tuple(float(x) for x in e["p"]), float(e["c"])))
    try:
        return GeometricInstance(
            points=tuple(tuple(float(x) for x in p) for p in doc["points"]),
            rmin=tuple(float(x) for x in doc["rmin"]),
            rmax=tuple(float(x) for x in doc["rmax"]),
            source=doc["source"],
            target=doc["target"],
            eves=tuple(eves),
            model=doc.get("model", "ring"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GeometryError):
            raise
        raise GeometryError(f"malformed geometric instance: {exc}") from exc
