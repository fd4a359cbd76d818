#!/usr/bin/env python3
"""Build the bundled ISP-style topology file (data/isp_backbone.edges).

Produces a 115-node backbone-like graph: preferential attachment gives the
heavy-tailed degree distribution typical of measured AS topologies, nodes
get planar coordinates so link latencies behave like geographic
propagation delays (1..30 time units), and bandwidths are the usual T1/T2
line rates. Output is the package's edge-list format; regeneration is
deterministic.

Usage:
    python scripts/make_as_topology.py [out_path]
"""

import math
import random
import sys
from pathlib import Path

N_NODES = 115
ATTACH_LINKS = 2  # links each newcomer brings
EXTRA_LINKS = 25  # random shortcuts on top of the attachment tree
SEED = 41005
BW_CHOICES = (1.544, 6.312)
COORD_SCALE = 18.0  # spreads latencies over roughly 1..30
MIN_LATENCY = 1.0


def build_edges(rng):
    coords = [(rng.random(), rng.random()) for _ in range(N_NODES)]

    def latency(u, v):
        (x1, y1), (x2, y2) = coords[u], coords[v]
        dist = math.hypot(x1 - x2, y1 - y2)
        return round(MIN_LATENCY + COORD_SCALE * dist + rng.uniform(0, 1.5), 3)

    edges = {}
    degree_pool = [0, 1]  # nodes repeated by degree, seeds the attachment
    edges[(0, 1)] = latency(0, 1)
    for v in range(2, N_NODES):
        targets = set()
        while len(targets) < min(ATTACH_LINKS, v):
            targets.add(rng.choice(degree_pool))
        for u in sorted(targets):
            edges[(min(u, v), max(u, v))] = latency(u, v)
            degree_pool.append(u)
            degree_pool.append(v)
    added = 0
    while added < EXTRA_LINKS:
        u, v = rng.randrange(N_NODES), rng.randrange(N_NODES)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in edges:
            continue
        edges[key] = latency(u, v)
        added += 1
    return edges


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parents[1] / "data" / "isp_backbone.edges"
    )
    rng = random.Random(SEED)
    edges = build_edges(rng)
    lines = [
        "# ISP-style backbone topology, desk scale (115 nodes)",
        f"# deterministic output of scripts/make_as_topology.py (seed {SEED})",
    ]
    for (u, v), lat in sorted(edges.items()):
        bw = rng.choice(BW_CHOICES)
        lines.append(f"e {u} {v} {lat} {bw}")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{out}: {N_NODES} nodes, {len(edges)} links")


if __name__ == "__main__":
    main()
