"""Configurations, request routing, and the four cost components.

Every algorithm in the package charges costs through this module: access
cost (request latency plus server load), running cost (per active and
inactive server), and transition cost between configurations (migration
and creation charges). Types are immutable values and the operations are
pure functions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidParameterError, NoActiveServerError
from .substrate import NodeId, SubstrateGraph
from .workload import RoundDemand


class ServerState(enum.Enum):
    NOT_IN_USE = "not_in_use"
    INACTIVE = "inactive"
    ACTIVE = "active"


class LoadModel(enum.Enum):
    """Shape of the per-node load term added to a round's access cost."""

    CONSTANT = "constant"
    LINEAR = "linear"
    QUADRATIC = "quadratic"

    def load(self, capacity: float, count: int) -> float:
        if self is LoadModel.CONSTANT:
            return 0.0
        if self is LoadModel.LINEAR:
            return count / capacity
        return count * count / capacity

    def marginal(self, capacity: float, count_before: int) -> float:
        """Load increase when one more request lands on the node."""
        return self.load(capacity, count_before + 1) - self.load(
            capacity, count_before
        )


@dataclass(frozen=True)
class Configuration:
    """Server placement: which nodes host active and inactive servers.

    Nodes absent from both sets host no server. At most one server per
    node, so a node cannot appear in both sets.
    """

    active: frozenset[NodeId]
    inactive: frozenset[NodeId] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "active", frozenset(self.active))
        object.__setattr__(self, "inactive", frozenset(self.inactive))
        if self.active & self.inactive:
            raise InvalidParameterError("a node cannot host two servers")

    @property
    def nodes(self) -> frozenset[NodeId]:
        return self.active | self.inactive

    @property
    def total_servers(self) -> int:
        return len(self.active) + len(self.inactive)

    def state_at(self, v: NodeId) -> ServerState:
        if v in self.active:
            return ServerState.ACTIVE
        if v in self.inactive:
            return ServerState.INACTIVE
        return ServerState.NOT_IN_USE

    def placements(self) -> dict[NodeId, ServerState]:
        out = {v: ServerState.ACTIVE for v in self.active}
        out.update({v: ServerState.INACTIVE for v in self.inactive})
        return out

    def key(self) -> tuple:
        return (tuple(sorted(self.active)), tuple(sorted(self.inactive)))

    def __repr__(self) -> str:
        act, inact = self.key()
        return f"Configuration(active={list(act)}, inactive={list(inact)})"


@dataclass(frozen=True)
class CostParams:
    """Cost constants; defaults follow the simulation setup."""

    beta: float = 40.0  # migration
    create: float = 400.0  # server creation
    run_active: float = 2.5  # per active server per round
    run_inactive: float = 0.5  # per inactive server per round
    k_max: int = 10
    load_model: LoadModel = LoadModel.LINEAR

    def __post_init__(self):
        for name in ("beta", "create", "run_active", "run_inactive"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0")
        if self.k_max < 1:
            raise InvalidParameterError("k_max must be >= 1")


@dataclass
class RoutingAssignment:
    requests: tuple[tuple[NodeId, NodeId, float], ...]  # (origin, server, delay)
    counts: dict[NodeId, int]


@dataclass(frozen=True)
class CostBreakdown:
    access: float = 0.0
    running: float = 0.0
    transition: float = 0.0

    @property
    def total(self) -> float:
        return self.access + self.running + self.transition

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(
            self.access + other.access,
            self.running + other.running,
            self.transition + other.transition,
        )


def route_requests(
    graph: SubstrateGraph,
    config: Configuration,
    demand: RoundDemand | Iterable[NodeId],
    load_model: LoadModel,
) -> RoutingAssignment:
    """Assign requests to active servers, one at a time in canonical order.

    Requests are processed sorted by origin id; each goes to the active
    server minimizing latency plus the marginal load increase given the
    assignments made so far, ties to the smallest server id.
    """
    origins = demand.origins if isinstance(demand, RoundDemand) else tuple(demand)
    servers = sorted(config.active)
    if not servers and origins:
        raise NoActiveServerError("no active server to route requests to")
    counts: dict[NodeId, int] = {s: 0 for s in servers}
    assigned = []
    for origin in sorted(origins):
        best_server, best_score = None, None
        for s in servers:
            score = graph.latency(origin, s) + load_model.marginal(
                graph.capacity(s), counts[s]
            )
            if best_score is None or score < best_score:
                best_server, best_score = s, score
        counts[best_server] += 1
        assigned.append((origin, best_server, graph.latency(origin, best_server)))
    return RoutingAssignment(tuple(assigned), counts)


def access_cost(
    graph: SubstrateGraph,
    config: Configuration,
    demand: RoundDemand | Iterable[NodeId],
    load_model: LoadModel,
) -> float:
    """Sum of request delays plus per-node load terms under the routing above."""
    origins = demand.origins if isinstance(demand, RoundDemand) else tuple(demand)
    if not origins:
        return 0.0
    routing = route_requests(graph, config, origins, load_model)
    delays = sum(delay for _, _, delay in routing.requests)
    load = sum(
        load_model.load(graph.capacity(v), count)
        for v, count in routing.counts.items()
    )
    return delays + load


def running_cost(config: Configuration, params: CostParams) -> float:
    return (
        len(config.active) * params.run_active
        + len(config.inactive) * params.run_inactive
    )


def transition_cost(
    old: Configuration, new: Configuration, params: CostParams
) -> float:
    """Cheapest transformation between two configurations.

    Servers of `old` (any state) are matched to server slots of `new`:
    staying at the same node is free (state flips cost nothing), moving to
    a different node costs beta, an unmatched new slot costs a creation,
    and unmatched old servers fall out of use for free. Matching same-node
    pairs is always optimal, so the minimum has a closed form: surplus old
    servers cover as many new slots as migration is worth covering, the
    rest are created.
    """
    from_nodes = old.nodes
    to_nodes = new.nodes
    need = len(to_nodes - from_nodes)
    spare = len(from_nodes - to_nodes)
    migrations = min(spare, need) if params.beta < params.create else 0
    return migrations * params.beta + (need - migrations) * params.create


def round_cost(
    graph: SubstrateGraph,
    prev_config: Configuration,
    new_config: Configuration,
    demand: RoundDemand,
    params: CostParams,
) -> CostBreakdown:
    """One round of the synchronous game: serve, then reconfigure.

    Access is charged under the configuration in force when the requests
    arrive (prev_config); the transition and the running cost of the new
    configuration follow.
    """
    return CostBreakdown(
        access=access_cost(graph, prev_config, demand, params.load_model),
        running=running_cost(new_config, params),
        transition=transition_cost(prev_config, new_config, params),
    )


class AccessEvaluator:
    """Fast repeated access-cost queries against one graph and load model.

    For CONSTANT and LINEAR load the greedy routing score of a request at
    r served by s is latency(r, s) plus a per-server constant (0 or
    1/CAP(s)), independent of prior assignments, so the round access cost
    collapses to a min-sum over a precomputed score matrix. QUADRATIC load
    falls back to the sequential routing.

    score_rows() exposes the per-demand score matrix so that epoch
    evaluators can batch candidate configurations with numpy.
    """

    def __init__(self, graph: SubstrateGraph, load_model: LoadModel):
        self.graph = graph
        self.load_model = load_model
        self.fast = load_model in (LoadModel.CONSTANT, LoadModel.LINEAR)
        if self.fast:
            penalty = (
                1.0 / graph.capacities()
                if load_model is LoadModel.LINEAR
                else np.zeros(graph.n)
            )
            self._score = graph.latency_matrix + penalty[None, :]
            self._rows: dict[tuple, np.ndarray] = {}

    def score_rows(self, origins: tuple[NodeId, ...]) -> np.ndarray:
        """Score matrix (one row per request, one column per node)."""
        rows = self._rows.get(origins)
        if rows is None:
            rows = self._score[list(origins), :]
            self._rows[origins] = rows
        return rows

    def access(self, origins: tuple[NodeId, ...], active: Iterable[NodeId]) -> float:
        if not origins:
            return 0.0
        servers = sorted(active)
        if not servers:
            raise NoActiveServerError("no active server to route requests to")
        if self.fast:
            return float(self.score_rows(origins)[:, servers].min(axis=1).sum())
        return access_cost(
            self.graph, Configuration(frozenset(servers)), origins, self.load_model
        )
