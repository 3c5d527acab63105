"""Interaction networks: generation, degree structure, and edge-list files.

All graphs are undirected, simple, connected, with dense integer ids
0..Z-1.  Adjacency is stored as one sorted int32 array per node; a CSR view
(indptr, indices) is built lazily for the simulation kernel.

Generators
----------
complete            everyone interacts with everyone (well-mixed)
lattice             periodic LxL grid, 4- or 8-neighbourhood
barabasi_albert     growth + degree-preferential attachment
dms                 growth + random-edge attachment (both endpoints of each
                    drawn edge), which yields the same degree exponent as
                    preferential attachment but with high clustering

Both growth models add m edges per new node and, at m = 2, reach mean degree
-> 4 and edge count 3 + m (Z - 3).

Edge-list files
---------------
Line 1:   ``# generator=<tag> seed=<u64> Z=<int> m=<int>``
Then one ``u v`` pair per line with u < v, in ascending lexicographic order.
``save_edge_list`` / ``load_edge_list`` round-trip graphs bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ParseError, ValidationError
from .rng import SplitMix64

__all__ = [
    "Provenance",
    "Graph",
    "GraphMetrics",
    "DegreeClass",
    "complete",
    "lattice",
    "barabasi_albert",
    "dms",
    "degree_class",
    "degree_classes",
    "check_hub_classes",
    "rank_by_degree",
    "graph_metrics",
    "nominal_connectivity",
    "save_edge_list",
    "load_edge_list",
]


@dataclass(frozen=True)
class Provenance:
    """How a graph was made: generator tag, seed, and size parameter.

    ``m`` holds the attachment parameter for growth models, the side length
    for lattices, and 0 for complete graphs.  Deterministic generators use
    seed 0.
    """

    generator: str
    seed: int
    m: int


class Graph:
    """Undirected simple graph with per-node sorted adjacency arrays."""

    def __init__(self, adj, provenance: Provenance):
        self.adj = [np.asarray(a, dtype=np.int32) for a in adj]
        self.n = len(self.adj)
        self.provenance = provenance
        self._csr = None
        self._degrees = None
        self._max_degree = None

    @classmethod
    def from_edges(cls, n: int, edges, provenance: Provenance) -> "Graph":
        """Build a graph from (u, v) pairs; validates simplicity bounds."""
        lists: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) out of range for Z={n}")
            seen.add(key)
            lists[u].append(v)
            lists[v].append(u)
        return cls([np.array(sorted(l), dtype=np.int32) for l in lists], provenance)

    def degree(self, node: int) -> int:
        return len(self.adj[node])

    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = np.array([len(a) for a in self.adj], dtype=np.int64)
        return self._degrees

    @property
    def max_degree(self) -> int:
        if self._max_degree is None:
            self._max_degree = int(self.degrees().max())
        return self._max_degree

    @property
    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def edges(self):
        """Yield edges as (u, v) with u < v, ascending lexicographic."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield u, int(v)

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency view (indptr int64, indices int32), cached."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            indptr[1:] = np.cumsum(self.degrees())
            indices = (np.concatenate(self.adj).astype(np.int32)
                       if self.n else np.empty(0, dtype=np.int32))
            self._csr = (indptr, indices)
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n
                and self.provenance == other.provenance
                and all(np.array_equal(a, b) for a, b in zip(self.adj, other.adj)))

    def __reduce__(self):
        return (Graph, (self.adj, self.provenance))

    def __repr__(self):
        return (f"Graph(n={self.n}, edges={self.edge_count}, "
                f"provenance={self.provenance})")


def complete(Z: int) -> Graph:
    """Complete graph on Z >= 2 nodes."""
    if Z < 2:
        raise ValidationError(f"complete graph needs Z >= 2, got {Z}")
    ids = np.arange(Z, dtype=np.int32)
    adj = [np.delete(ids, i) for i in range(Z)]
    return Graph(adj, Provenance("complete", 0, 0))


def lattice(L: int, neighborhood: int = 4) -> Graph:
    """Periodic LxL lattice; neighborhood 4 (edge) or 8 (edge + diagonal).

    L >= 3 keeps wrapped neighbour offsets distinct.
    """
    if L < 3:
        raise ValidationError(f"lattice needs L >= 3, got {L}")
    if neighborhood == 4:
        offsets = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    elif neighborhood == 8:
        offsets = [(-1, -1), (-1, 0), (-1, 1), (0, -1),
                   (0, 1), (1, -1), (1, 0), (1, 1)]
    else:
        raise ValidationError(f"neighborhood must be 4 or 8, got {neighborhood}")
    adj = []
    for r in range(L):
        for c in range(L):
            nbrs = sorted(((r + dr) % L) * L + ((c + dc) % L) for dr, dc in offsets)
            adj.append(np.array(nbrs, dtype=np.int32))
    return Graph(adj, Provenance(f"lattice{neighborhood}", 0, L))


def barabasi_albert(Z: int, m: int, seed: int) -> Graph:
    """Growing network with degree-preferential attachment.

    Starts from a complete graph on m + 1 nodes; each new node attaches to m
    distinct existing nodes drawn proportionally to degree (implemented by
    sampling the edge-endpoint multiset with rejection of duplicates).
    Requires Z > m + 1 and m >= 1.
    """
    if m < 1:
        raise ValidationError(f"barabasi_albert needs m >= 1, got {m}")
    if Z <= m + 1:
        raise ValidationError(f"barabasi_albert needs Z > m + 1, got Z={Z}, m={m}")
    rng = SplitMix64(seed)
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            edges.append((u, v))
            repeated.append(u)
            repeated.append(v)
    for new in range(m + 1, Z):
        targets: set[int] = set()
        while len(targets) < m:
            cand = repeated[rng.next_below(len(repeated))]
            if cand not in targets:
                targets.add(cand)
        for t in sorted(targets):
            edges.append((t, new))
            repeated.append(t)
            repeated.append(new)
    return Graph.from_edges(Z, edges, Provenance("ba", seed & ((1 << 64) - 1), m))


def dms(Z: int, m: int, seed: int) -> Graph:
    """Growing network attaching to both endpoints of random existing edges.

    Starts from a triangle; each new node draws m/2 existing edges uniformly
    (redrawing when an endpoint repeats an already chosen target) and links to
    both endpoints of every drawn edge.  Preferential attachment emerges
    because a node's chance of being an endpoint is proportional to its
    degree, and closing each drawn edge into a triangle makes the graph
    strongly clustered.  Requires Z > 3 and m = 2 (larger even m would need
    more distinct attachment targets than the seed triangle can offer).
    """
    if m < 2 or m % 2 != 0:
        raise ValidationError(f"dms needs even m >= 2, got {m}")
    if m > 2:
        # first arrival needs m distinct targets among the 3 seed nodes
        raise ValidationError(
            f"dms with m={m} cannot be grown from a triangle seed")
    if Z <= 3:
        raise ValidationError(f"dms needs Z > 3, got {Z}")
    rng = SplitMix64(seed)
    edges: list[tuple[int, int]] = [(0, 1), (0, 2), (1, 2)]
    for new in range(3, Z):
        targets: set[int] = set()
        picked = 0
        while picked < m // 2:
            u, v = edges[rng.next_below(len(edges))]
            if u in targets or v in targets:
                continue
            targets.add(u)
            targets.add(v)
            picked += 1
        for t in sorted(targets):
            edges.append((t, new))
    return Graph.from_edges(Z, edges, Provenance("dms", seed & ((1 << 64) - 1), m))


class DegreeClass(IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2


def degree_class(g: Graph, node: int, z: float) -> DegreeClass:
    """Degree class of a node relative to nominal connectivity z.

    LOW for degree < z, HIGH for degree >= k_max / 3, MEDIUM between, with
    the LOW test applied first (so a graph whose maximum degree is below 3z
    would misfile its hubs; see :func:`check_hub_classes`).
    """
    k = g.degree(node)
    if k < z:
        return DegreeClass.LOW
    if k < g.max_degree / 3:
        return DegreeClass.MEDIUM
    return DegreeClass.HIGH


def degree_classes(g: Graph, z: float) -> np.ndarray:
    """Vector of degree-class codes (int8) for all nodes."""
    ks = g.degrees()
    out = np.full(g.n, DegreeClass.MEDIUM, dtype=np.int8)
    out[ks >= g.max_degree / 3] = DegreeClass.HIGH
    # LOW wins over HIGH, matching the check order in degree_class
    out[ks < z] = DegreeClass.LOW
    return out


def check_hub_classes(g: Graph, z: float) -> None:
    """Validate that degree classes are well separated: k_max >= 3 z.

    Heterogeneous instances whose maximum degree is below 3 z would put hub
    nodes into LOW/MEDIUM bins; experiment drivers reject such instances.
    """
    if g.max_degree < 3 * z:
        p = g.provenance
        raise ValidationError(
            f"degree classes ill-separated: max degree {g.max_degree} < 3 z = {3 * z} "
            f"(generator={p.generator}, seed={p.seed}, Z={g.n}, m={p.m})")


def rank_by_degree(g: Graph) -> np.ndarray:
    """Node ids sorted by descending degree, ties broken by ascending id."""
    return np.lexsort((np.arange(g.n), -g.degrees())).astype(np.int64)


@dataclass(frozen=True)
class GraphMetrics:
    mean_degree: float
    max_degree: int
    mean_local_clustering: float
    degree_histogram: np.ndarray  # counts indexed by degree, length max_degree + 1

    def __eq__(self, other):
        if not isinstance(other, GraphMetrics):
            return NotImplemented
        return (self.mean_degree == other.mean_degree
                and self.max_degree == other.max_degree
                and self.mean_local_clustering == other.mean_local_clustering
                and np.array_equal(self.degree_histogram, other.degree_histogram))


def graph_metrics(g: Graph) -> GraphMetrics:
    """Mean degree, max degree, mean local clustering, degree histogram.

    Local clustering of node i is (links among neighbours) / (k_i choose 2),
    defined as 0 for k_i < 2; the mean runs over all nodes.
    """
    ks = g.degrees()
    sets = [set(a.tolist()) for a in g.adj]
    total = 0.0
    for i in range(g.n):
        k = len(g.adj[i])
        if k < 2:
            continue
        paths = 0
        si = sets[i]
        for j in g.adj[i]:
            paths += len(si & sets[j])
        # paths counts each neighbour-neighbour link twice
        total += paths / (k * (k - 1))
    hist = np.bincount(ks, minlength=g.max_degree + 1).astype(np.int64)
    return GraphMetrics(
        mean_degree=float(ks.mean()),
        max_degree=g.max_degree,
        mean_local_clustering=total / g.n,
        degree_histogram=hist,
    )


def nominal_connectivity(g: Graph) -> float:
    """Nominal mean degree implied by the generator (fallback: measured mean).

    complete -> Z - 1; lattice4/8 -> 4/8; growth models -> 2 m.
    """
    tag = g.provenance.generator
    if tag == "complete":
        return float(g.n - 1)
    if tag == "lattice4":
        return 4.0
    if tag == "lattice8":
        return 8.0
    if tag in ("ba", "dms"):
        return 2.0 * g.provenance.m
    return float(g.degrees().mean())


def save_edge_list(g: Graph, path) -> None:
    """Write the header + ascending ``u v`` edge lines."""
    p = g.provenance
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"# generator={p.generator} seed={p.seed} Z={g.n} m={p.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def load_edge_list(path) -> Graph:
    """Read a graph written by :func:`save_edge_list`.

    Raises :class:`ParseError` (with line number) on malformed content and
    :class:`ValidationError` on structural problems: ids out of range,
    u >= v, duplicate edges, or isolated nodes.
    """
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header.startswith("# "):
            raise ParseError(path, 1, "missing header line '# generator=... seed=... Z=... m=...'")
        fields = {}
        for tok in header[2:].split():
            if "=" not in tok:
                raise ParseError(path, 1, f"malformed header token {tok!r}")
            key, _, val = tok.partition("=")
            fields[key] = val
        for key in ("generator", "seed", "Z", "m"):
            if key not in fields:
                raise ParseError(path, 1, f"header missing field {key!r}")
        try:
            seed = int(fields["seed"])
            Z = int(fields["Z"])
            m = int(fields["m"])
        except ValueError as exc:
            raise ParseError(path, 1, f"non-integer header field: {exc}") from None
        edges = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(path, lineno, f"expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer node id in {line!r}") from None
            if not (0 <= u < Z and 0 <= v < Z):
                raise ValidationError(f"{path}:{lineno}: edge ({u}, {v}) out of range for Z={Z}")
            if u >= v:
                raise ValidationError(f"{path}:{lineno}: edges must satisfy u < v, got ({u}, {v})")
            edges.append((u, v))
    g = Graph.from_edges(Z, edges, Provenance(fields["generator"], seed, m))
    isolated = np.flatnonzero(g.degrees() == 0)
    if isolated.size:
        raise ValidationError(f"{path}: isolated node(s) {isolated[:5].tolist()}")
    return g
