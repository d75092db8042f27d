"""Directed hypergraph core: types, path validation, covers, serialization.

A hyperedge has a single source vertex and a non-empty destination set; its
weight is the destination-set size.  A hyperpath is a chained edge sequence
(each edge's source must appear in the previous edge's destination set) and
its cover is the union of all destination sets plus the origin vertex.  The
cover size is the path's *width* — the quantity everything else in this
package minimizes.

Invariants
- vertex ids are dense ints in [0, vertex_count)
- destination sets non-empty; a source may appear in its own destinations
- duplicate (source, destination-set) edges are dropped at construction and
  counted in ``duplicate_edges_removed``
- covers are represented as int bitmasks internally (cheap unions and
  subset tests); ``Cover`` exposes them as frozensets
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import json

DEFAULT_VERTEX_CAP = 4096


class HypergraphError(ValueError):
    """Malformed hypergraph input (bad ids, empty destination sets, ...)."""


class UnknownEdgeError(HypergraphError):
    """A hyperpath referenced an edge id the hypergraph does not contain.

    Raised (rather than returning False) so that structural garbage is
    distinguishable from a well-formed-but-invalid path.
    """


def mask_of(vertices: Iterable[int]) -> int:
    """Pack vertex ids into an int bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> Tuple[int, ...]:
    """Unpack a bitmask into sorted vertex ids."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class Hyperedge:
    """One directed hyperedge: ``source`` broadcasts to ``destinations``.

    ``destinations`` is stored sorted and deduplicated; ``weight`` is its
    size (the quantity SPBA sums along a path).
    """

    id: int
    source: int
    destinations: Tuple[int, ...]

    @property
    def weight(self) -> int:
        return len(self.destinations)


@dataclass(frozen=True)
class Hyperpath:
    """An edge-id sequence from ``origin`` that must end covering ``target``."""

    edges: Tuple[int, ...]
    origin: int
    target: int


@dataclass(frozen=True)
class Cover:
    """The vertex set a hyperpath exposes, with its size (the width)."""

    members: frozenset
    width: int


class Hypergraph:
    """Immutable directed hypergraph over dense integer vertex ids.

    Parameters
    ----------
    vertex_count:
        Number of vertices; ids are 0..vertex_count-1.
    edges:
        Iterable of (source, destinations) pairs.  Destination iterables are
        sorted/deduplicated; exact duplicates of an earlier (source, set)
        pair are dropped and counted.
    vertex_cap:
        Hard limit on vertex_count (bitmask covers get wide); raise it
        explicitly for bigger instances.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[Tuple[int, Iterable[int]]],
        vertex_cap: int = DEFAULT_VERTEX_CAP,
    ) -> None:
        if vertex_count < 0:
            raise HypergraphError("vertex_count must be non-negative")
        if vertex_count > vertex_cap:
            raise HypergraphError(
                f"vertex_count {vertex_count} exceeds vertex cap {vertex_cap}"
            )
        self.vertex_count = vertex_count
        self.duplicate_edges_removed = 0

        seen = set()
        edge_list: List[Hyperedge] = []
        masks: List[int] = []
        for source, dests in edges:
            dd = tuple(sorted(set(dests)))
            if not dd:
                raise HypergraphError(f"edge from {source} has empty destination set")
            if not (0 <= source < vertex_count):
                raise HypergraphError(f"edge source {source} out of range")
            if dd[0] < 0 or dd[-1] >= vertex_count:
                raise HypergraphError(f"edge from {source} has out-of-range destination")
            key = (source, dd)
            if key in seen:
                self.duplicate_edges_removed += 1
                continue
            seen.add(key)
            edge_list.append(Hyperedge(id=len(edge_list), source=source, destinations=dd))
            masks.append(mask_of(dd))

        self.edges: Tuple[Hyperedge, ...] = tuple(edge_list)
        self._dest_masks: Tuple[int, ...] = tuple(masks)

        out: List[List[int]] = [[] for _ in range(vertex_count)]
        inc: List[List[int]] = [[] for _ in range(vertex_count)]
        for e in self.edges:
            out[e.source].append(e.id)
            for v in e.destinations:
                inc[v].append(e.id)
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(x) for x in inc)

    # -- accessors ---------------------------------------------------------

    def edge(self, edge_id: int) -> Hyperedge:
        if not (0 <= edge_id < len(self.edges)):
            raise UnknownEdgeError(f"unknown edge id {edge_id}")
        return self.edges[edge_id]

    def dest_mask(self, edge_id: int) -> int:
        if not (0 <= edge_id < len(self.edges)):
            raise UnknownEdgeError(f"unknown edge id {edge_id}")
        return self._dest_masks[edge_id]

    def out_edges(self, v: int) -> Tuple[int, ...]:
        """Edge ids rooted at v, in construction order."""
        return self._out[v]

    def in_edges(self, v: int) -> Tuple[int, ...]:
        """Edge ids whose destination set contains v."""
        return self._in[v]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Hypergraph(n={self.vertex_count}, m={len(self.edges)})"


# -- path operations --------------------------------------------------------


def validate_hyperpath(h: Hypergraph, p: Hyperpath) -> bool:
    """Check the chaining rules for ``p`` against ``h``.

    Returns False for a well-formed path that breaks a rule (wrong origin,
    broken chain, target not covered by the last edge's destinations).
    Raises UnknownEdgeError for edge ids ``h`` doesn't contain — structural
    garbage is an error, not a falsy validation result.
    """
    if not p.edges:
        return False
    if not (0 <= p.origin < h.vertex_count and 0 <= p.target < h.vertex_count):
        return False
    edges = [h.edge(i) for i in p.edges]  # raises UnknownEdgeError eagerly
    if edges[0].source != p.origin:
        return False
    for prev, cur in zip(edges, edges[1:]):
        if cur.source not in prev.destinations:
            return False
    return p.target in edges[-1].destinations


def cover_mask_of(h: Hypergraph, p: Hyperpath) -> int:
    """Bitmask form of cover_of (internal fast path)."""
    m = 1 << p.origin
    for i in p.edges:
        m |= h.dest_mask(i)
    return m


def cover_of(h: Hypergraph, p: Hyperpath) -> Cover:
    """Union of the path's destination sets plus its origin.

    Order-insensitive by construction; assumes ``p`` is valid.
    """
    m = cover_mask_of(h, p)
    return Cover(members=frozenset(bits_of(m)), width=m.bit_count())


def path_length(h: Hypergraph, p: Hyperpath) -> int:
    """Sum of destination-set sizes along the path (the SPBA objective)."""
    return sum(h.edge(i).weight for i in p.edges)


def check_monotone_nesting(h: Hypergraph) -> bool:
    """True iff each vertex's destination sets form a strict-inclusion chain.

    Broadcast monotonicity: sweeping transmit power upward can only grow the
    audience, so the edge family rooted at one vertex must be totally ordered
    by strict inclusion.  Cardinality may jump by more than one when several
    receivers sit at exactly the same threshold (ties enter together), so
    only the chain property is required, not a +1 step.
    """
    for v in range(h.vertex_count):
        dests = sorted((set(h.edge(i).destinations) for i in h.out_edges(v)), key=len)
        for a, b in zip(dests, dests[1:]):
            if not (a < b):
                return False
    return True


# -- JSON -------------------------------------------------------------------


def instance_to_json(h: Hypergraph, source: int, target: int) -> str:
    """Serialize deterministically: edges sorted by (src, dst lexicographic)."""
    edges = sorted(
        ({"src": e.source, "dst": list(e.destinations)} for e in h.edges),
        key=lambda d: (d["src"], d["dst"]),
    )
    doc = {"n": h.vertex_count, "edges": edges, "source": source, "target": target}
    return json.dumps(doc, indent=2) + "\n"


def _require(doc: Dict, field: str, kind) -> object:
    if field not in doc:
        raise HypergraphError(f"missing field '{field}'")
    value = doc[field]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise HypergraphError(f"field '{field}' must be an integer")
    if kind is list and not isinstance(value, list):
        raise HypergraphError(f"field '{field}' must be a list")
    return value


def instance_from_json(text: str, vertex_cap: int = DEFAULT_VERTEX_CAP):
    """Parse the hypergraph instance schema; returns (Hypergraph, source, target).

    Malformed input raises HypergraphError naming the offending field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise HypergraphError("instance document must be a JSON object")
    n = _require(doc, "n", int)
    raw_edges = _require(doc, "edges", list)
    source = _require(doc, "source", int)
    target = _require(doc, "target", int)
    pairs = []
    for k, item in enumerate(raw_edges):
        if not isinstance(item, dict) or "src" not in item or "dst" not in item:
            raise HypergraphError(f"field 'edges[{k}]' must be an object with 'src' and 'dst'")
        src = item["src"]
        dst = item["dst"]
        if not isinstance(src, int) or isinstance(src, bool):
            raise HypergraphError(f"field 'edges[{k}].src' must be an integer")
        if not isinstance(dst, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in dst
        ):
            raise HypergraphError(f"field 'edges[{k}].dst' must be a list of integers")
        pairs.append((src, dst))
    h = Hypergraph(n, pairs, vertex_cap=vertex_cap)
    for name, v in (("source", source), ("target", target)):
        if not (0 <= v < n):
            raise HypergraphError(f"field '{name}' out of range for n={n}")
    return h, source, target
