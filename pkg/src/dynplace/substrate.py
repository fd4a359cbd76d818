"""Substrate network model: generators, edge-list ingestion, latencies.

A substrate graph is a connected, undirected graph of nodes with abstract
capacities and links with latencies (and bandwidths, which are stored for
fidelity but never charged by the cost model). All-pairs shortest-path
latencies are precomputed at construction; every query the algorithms need
(request latency, network center) reads the matrix.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

import numpy as np

from .errors import DisconnectedGraphError, InvalidParameterError, ParseError

NodeId = int

DEFAULT_BW_CHOICES = (1.544, 6.312)  # T1 / T2 line rates, Mbit/s
DEFAULT_LATENCY_RANGE = (1.0, 10.0)


@dataclass(frozen=True)
class SubstrateNode:
    id: NodeId
    capacity: float = 1.0

    def __post_init__(self):
        if self.capacity <= 0:
            raise InvalidParameterError(f"node {self.id}: capacity must be > 0")


@dataclass(frozen=True)
class Link:
    """Undirected link; endpoints are stored with u < v."""

    u: NodeId
    v: NodeId
    latency: float
    bandwidth: float = DEFAULT_BW_CHOICES[0]

    def __post_init__(self):
        if self.u == self.v:
            raise InvalidParameterError("link endpoints must be distinct")
        if self.latency <= 0:
            raise InvalidParameterError("link latency must be > 0")
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)


@dataclass(frozen=True, eq=False)
class SubstrateGraph:
    nodes: tuple[SubstrateNode, ...]
    links: tuple[Link, ...]
    access_points: tuple[NodeId, ...]
    latency_matrix: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def capacity(self, v: NodeId) -> float:
        return self.nodes[v].capacity

    def latency(self, u: NodeId, v: NodeId) -> float:
        return float(self.latency_matrix[u, v])

    def capacities(self) -> np.ndarray:
        return np.array([node.capacity for node in self.nodes])


def _adjacency(n: int, links: Iterable[Link]) -> dict[NodeId, list[NodeId]]:
    adj: dict[NodeId, list[NodeId]] = {v: [] for v in range(n)}
    for link in links:
        adj[link.u].append(link.v)
        adj[link.v].append(link.u)
    return adj


def _is_connected(n: int, links: Iterable[Link]) -> bool:
    if n == 0:
        return False
    adj = _adjacency(n, links)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _apsp(n: int, links: Iterable[Link]) -> np.ndarray:
    """All-pairs shortest-path latencies via vectorized Floyd-Warshall."""
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for link in links:
        if link.latency < dist[link.u, link.v]:
            dist[link.u, link.v] = link.latency
            dist[link.v, link.u] = link.latency
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    if np.isinf(dist).any():
        raise DisconnectedGraphError("graph is not connected")
    return dist


def _make_graph(nodes, links, access_points) -> SubstrateGraph:
    matrix = _apsp(len(nodes), links)
    return SubstrateGraph(
        nodes=tuple(nodes),
        links=tuple(links),
        access_points=tuple(sorted(access_points)),
        latency_matrix=matrix,
    )


def all_pairs_latency(graph: SubstrateGraph) -> np.ndarray:
    """Recompute the shortest-path latency matrix from the link list."""
    return _apsp(graph.n, graph.links)


def build_erdos_renyi(
    n: int,
    p_conn: float,
    *,
    capacity: float | Callable[[random.Random, int], float] = 1.0,
    bw_choices: tuple[float, ...] = DEFAULT_BW_CHOICES,
    latency_range: tuple[float, float] = DEFAULT_LATENCY_RANGE,
    seed: int = 0,
) -> SubstrateGraph:
    """G(n, p) substrate with uniform random latencies and T1/T2 bandwidths.

    Deterministic given the seed. If the sampled graph is disconnected, a
    spanning chain 0-1-...-(n-1) with median parameters is added so that
    experiments always run on a connected substrate. All nodes are access
    points.
    """
    if n < 2:
        raise InvalidParameterError("erdos-renyi generator requires n >= 2")
    if not (0 < p_conn <= 1):
        raise InvalidParameterError("p_conn must be in (0, 1]")
    rng = random.Random(seed)
    cap_of = capacity if callable(capacity) else (lambda _rng, _i: capacity)
    nodes = [SubstrateNode(i, cap_of(rng, i)) for i in range(n)]
    links = []
    present = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_conn:
                links.append(
                    Link(i, j, rng.uniform(*latency_range), rng.choice(bw_choices))
                )
                present.add((i, j))
    if not _is_connected(n, links):
        med_lat = (latency_range[0] + latency_range[1]) / 2.0
        med_bw = statistics.median(bw_choices)
        for i in range(n - 1):
            if (i, i + 1) not in present:
                links.append(Link(i, i + 1, med_lat, med_bw))
    return _make_graph(nodes, links, range(n))


def build_line_graph(
    n: int, latency: float = 1.0, capacity: float = 1.0
) -> SubstrateGraph:
    """Path 0-1-...-(n-1) with uniform per-hop latency; all nodes access points."""
    if n < 1:
        raise InvalidParameterError("line graph requires n >= 1")
    nodes = [SubstrateNode(i, capacity) for i in range(n)]
    links = [
        Link(i, i + 1, latency, statistics.median(DEFAULT_BW_CHOICES))
        for i in range(n - 1)
    ]
    return _make_graph(nodes, links, range(n))


def load_edge_list(source: TextIO | str) -> SubstrateGraph:
    """Parse the edge-list text format into a substrate graph.

    Records, one per line (`#` starts a comment):
      n <id> <capacity>          optional per-node capacity override
      e <id> <id> <latency> <bw> one link; duplicates are an error
      a <id>                     optional access-point restriction

    Node count is max mentioned id + 1. Capacities default to 1.0. If no
    `a` records appear every node is an access point. Ingested graphs must
    be connected as-is; real topologies are never silently patched.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()

    caps: dict[int, float] = {}
    edges: dict[tuple[int, int], tuple[float, float]] = {}
    ap_records: list[int] = []
    max_id = -1

    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        kind = parts[0]
        try:
            if kind == "n":
                if len(parts) != 3:
                    raise ValueError("expected: n <id> <capacity>")
                v, cap = int(parts[1]), float(parts[2])
                if v < 0:
                    raise ValueError("negative node id")
                if v in caps:
                    raise ValueError(f"duplicate node record for {v}")
                if cap <= 0:
                    raise ValueError("capacity must be > 0")
                caps[v] = cap
                max_id = max(max_id, v)
            elif kind == "e":
                if len(parts) != 5:
                    raise ValueError("expected: e <id> <id> <latency> <bandwidth>")
                u, v = int(parts[1]), int(parts[2])
                lat, bw = float(parts[3]), float(parts[4])
                if u < 0 or v < 0:
                    raise ValueError("negative node id")
                if u == v:
                    raise ValueError("self-loop")
                if lat <= 0:
                    raise ValueError("latency must be > 0")
                key = (min(u, v), max(u, v))
                if key in edges:
                    raise ValueError(f"duplicate edge {key[0]}-{key[1]}")
                edges[key] = (lat, bw)
                max_id = max(max_id, u, v)
            elif kind == "a":
                if len(parts) != 2:
                    raise ValueError("expected: a <id>")
                v = int(parts[1])
                if v < 0:
                    raise ValueError("negative node id")
                ap_records.append(v)
                max_id = max(max_id, v)
            else:
                raise ValueError(f"unknown record type {kind!r}")
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None

    if max_id < 0:
        raise ParseError("empty edge-list source")
    n = max_id + 1
    nodes = [SubstrateNode(i, caps.get(i, 1.0)) for i in range(n)]
    links = [Link(u, v, lat, bw) for (u, v), (lat, bw) in sorted(edges.items())]
    access = sorted(set(ap_records)) if ap_records else list(range(n))
    if not _is_connected(n, links):
        raise DisconnectedGraphError("ingested graph is not connected")
    return _make_graph(nodes, links, access)


def serialize_edge_list(graph: SubstrateGraph) -> str:
    """Inverse of load_edge_list: text that round-trips to an equal graph."""
    out = []
    for node in graph.nodes:
        if node.capacity != 1.0:
            out.append(f"n {node.id} {node.capacity!r}")
    for link in sorted(graph.links, key=lambda l: (l.u, l.v)):
        out.append(f"e {link.u} {link.v} {link.latency!r} {link.bandwidth!r}")
    if tuple(graph.access_points) != tuple(range(graph.n)):
        for v in graph.access_points:
            out.append(f"a {v}")
    return "\n".join(out) + "\n"


def network_center(graph: SubstrateGraph) -> NodeId:
    """Node minimizing total latency to all access points; ties to smallest id."""
    aps = list(graph.access_points)
    sums = graph.latency_matrix[:, aps].sum(axis=1)
    return int(np.argmin(sums))


def graphs_equal(a: SubstrateGraph, b: SubstrateGraph) -> bool:
    link_key = lambda l: (l.u, l.v)
    return (
        a.nodes == b.nodes
        and sorted(a.links, key=link_key) == sorted(b.links, key=link_key)
        and a.access_points == b.access_points
        and np.allclose(a.latency_matrix, b.latency_matrix)
    )
