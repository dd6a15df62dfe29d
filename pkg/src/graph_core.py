"""
Graph Core Module
Immutable graphs over dense vertex indices, component analysis after vertex
removal, and graph6 ingestion.

Vertex sets are plain Python ints used as bitmasks (bit v set <=> v in X).
Python ints are unbounded, so the same representation serves every n.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import networkx as nx

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"

VertexSet = int


class GraphFormatError(ValueError):
    """Raised for malformed graph input (edge lists or graph6 text)"""


def mask_of(vertices: Iterable[int]) -> VertexSet:
    """Bitmask with one bit per vertex"""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def vertices_of(mask: VertexSet) -> List[int]:
    """Vertices of a bitmask in increasing order"""
    result = []
    while mask:
        low = mask & -mask
        result.append(low.bit_length() - 1)
        mask ^= low
    return result


def popcount(mask: VertexSet) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph on vertices 0..n-1.

    adj[v] is the neighbor bitmask of v. Build instances through from_edges()
    or the graph6 helpers; the constructor trusts its arguments.
    """
    n: int
    adj: Tuple[int, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """
        Build a graph from an edge list

        Args:
            n: Vertex count
            edges: Pairs (u, v); duplicates and reversed duplicates are merged

        Returns:
            Graph with exactly those edges

        Raises:
            GraphFormatError: On negative n, out-of-range endpoints or self-loops
        """
        if n < 0:
            raise GraphFormatError(f"Vertex count must be non-negative, got {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"Edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise GraphFormatError(f"Self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def vertex_mask(self) -> VertexSet:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> List[int]:
        return vertices_of(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> List[Tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order"""
        return [(u, v) for u in range(self.n) for v in vertices_of(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def neighborhood(self, mask: VertexSet) -> VertexSet:
        """N_G(U): union of neighbor masks of the vertices in U"""
        result = 0
        for v in vertices_of(mask):
            result |= self.adj[v]
        return result

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class ComponentProfile:
    """Components of G - X, each a vertex bitmask, sorted by minimum vertex"""
    components: Tuple[VertexSet, ...]
    counts: Dict[int, int]

    def count(self, order: int) -> int:
        """c_i: number of components with exactly `order` vertices"""
        return self.counts.get(order, 0)

    def of_order(self, order: int) -> List[VertexSet]:
        return [c for c in self.components if popcount(c) == order]


def _coerce_mask(G: Graph, X: Union[VertexSet, Iterable[int], None]) -> VertexSet:
    if X is None:
        return 0
    if isinstance(X, int):
        mask = X
    else:
        mask = mask_of(X)
    if mask < 0:
        raise GraphFormatError(f"Negative vertex mask {mask}")
    if mask >> G.n:
        raise GraphFormatError(f"Vertex set {vertices_of(mask)} is not inside [0, {G.n})")
    return mask


def _flood(adj: Tuple[int, ...], start: VertexSet, allowed: VertexSet) -> VertexSet:
    """Connected component of `start` inside the vertex set `allowed`"""
    comp = start
    frontier = start
    while frontier:
        reach = 0
        while frontier:
            low = frontier & -frontier
            reach |= adj[low.bit_length() - 1]
            frontier ^= low
        frontier = reach & allowed & ~comp
        comp |= frontier
    return comp


def component_masks(G: Graph, removed: VertexSet = 0) -> List[VertexSet]:
    """Components of G - removed as bitmasks, ordered by minimum vertex"""
    remaining = G.vertex_mask & ~removed
    adj = G.adj
    result = []
    while remaining:
        comp = _flood(adj, remaining & -remaining, remaining)
        result.append(comp)
        remaining &= ~comp
    return result


def component_sizes(G: Graph, removed: VertexSet = 0) -> List[int]:
    """Orders of the components of G - removed (sweep fast path)"""
    return [popcount(c) for c in component_masks(G, removed)]


def components_after_removal(G: Graph, X: Union[VertexSet, Iterable[int], None] = None) -> ComponentProfile:
    """
    Component profile of G - X

    Args:
        G: Host graph
        X: Removed vertices (bitmask or iterable of indices)

    Returns:
        ComponentProfile with components sorted by minimum vertex

    Raises:
        GraphFormatError: If X leaves the vertex range of G
    """
    mask = _coerce_mask(G, X)
    components = component_masks(G, mask)

    remaining = G.vertex_mask & ~mask
    union = 0
    for comp in components:
        assert not (union & comp), "components overlap"
        assert not (G.neighborhood(comp) & remaining & ~comp), "component is not maximal"
        union |= comp
    assert union == remaining, "components do not cover V(G) - X"

    counts = Counter(popcount(c) for c in components)
    return ComponentProfile(tuple(components), dict(counts))


def join(G1: Graph, G2: Graph) -> Graph:
    """G1 + G2: disjoint union plus every edge between the two vertex sets"""
    union = disjoint_union(G1, G2)
    left = G1.vertex_mask
    right = G2.vertex_mask << G1.n
    adj = [a | right if v < G1.n else a | left for v, a in enumerate(union.adj)]
    return Graph(union.n, tuple(adj))


def disjoint_union(G1: Graph, G2: Graph) -> Graph:
    """G1 ⊎ G2 with the vertices of G2 shifted by |V(G1)|"""
    return Graph(G1.n + G2.n, G1.adj + tuple(a << G1.n for a in G2.adj))


def induced_subgraph(G: Graph, mask: VertexSet) -> Tuple[Graph, Tuple[int, ...]]:
    """
    G[mask] relabelled to 0..k-1

    Returns:
        (subgraph, labels) where labels[i] is the vertex of G behind vertex i
    """
    labels = tuple(vertices_of(mask))
    index = {v: i for i, v in enumerate(labels)}
    adj = tuple(mask_of(index[u] for u in vertices_of(G.adj[v] & mask)) for v in labels)
    return Graph(len(labels), adj), labels


def remove_edge(G: Graph, u: int, v: int) -> Graph:
    if not G.has_edge(u, v):
        raise GraphFormatError(f"Edge ({u}, {v}) not in graph")
    adj = list(G.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(G.n, tuple(adj))


def to_networkx(G: Graph) -> nx.Graph:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(G.n))
    nx_graph.add_edges_from(G.edges())
    return nx_graph


def from_networkx(nx_graph: nx.Graph) -> Graph:
    """Convert a networkx graph, relabelling nodes in sorted order"""
    nodes = sorted(nx_graph.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), ((index[u], index[v]) for u, v in nx_graph.edges()))


def parse_graph6(line: str) -> Graph:
    """
    Decode one graph6 line

    Args:
        line: graph6 text, optionally with the >>graph6<< header and a trailing newline

    Returns:
        Decoded graph (vertex i of the encoding is vertex i of the result)

    Raises:
        GraphFormatError: On empty input, bad characters or a wrong length
    """
    text = line.strip()
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER):]
    if not text:
        raise GraphFormatError("Empty graph6 line")
    bad = [c for c in text if not 63 <= ord(c) <= 126]
    if bad:
        raise GraphFormatError(f"Invalid graph6 character {bad[0]!r} in {text!r}")
    try:
        nx_graph = nx.from_graph6_bytes(text.encode("ascii"))
    except (nx.NetworkXError, ValueError, IndexError) as e:
        raise GraphFormatError(f"Malformed graph6 line {text!r}: {e}") from e
    return from_networkx(nx_graph)


def to_graph6(G: Graph) -> str:
    """Encode as a graph6 line without header or newline"""
    return nx.to_graph6_bytes(to_networkx(G), header=False).decode("ascii").strip()


def read_graph6_stream(lines: Iterable[str]) -> Iterator[Tuple[int, Union[Graph, GraphFormatError]]]:
    """
    Decode a graph6 stream lazily

    Yields:
        (line_number, Graph) for good lines, (line_number, GraphFormatError) for
        malformed ones. Blank lines are skipped.
    """
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield line_number, parse_graph6(line)
        except GraphFormatError as e:
            logger.debug(f"Line {line_number}: {e}")
            yield line_number, e


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphFormatError(f"Cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def edgeless_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def relabel_path(path: Iterable[int], labels: Tuple[int, ...]) -> List[int]:
    """Map a path of an induced subgraph back to host-graph labels"""
    return [labels[v] for v in path]


def first_vertex(mask: VertexSet) -> Optional[int]:
    return (mask & -mask).bit_length() - 1 if mask else None
