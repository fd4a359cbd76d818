"""Hindsight schedules: the optimal dynamic program and its heuristics.

The dynamic program walks a matrix opt[round][configuration] over all
active-server placements of size 1..k_max: the problem has optimal
substructure, so the cheapest way to serve round t in configuration g is
the cheapest way to reach some g' at t-1 plus the transition, running, and
access cost of g at t. Schedules charge access under the configuration in
force when the round's demand is served (reconfiguration happens at the
round boundary before serving, which is cost-equivalent to the online
ordering).

The lookahead variants reuse the online epoch mechanics but score the
reconfiguration candidates against the upcoming epoch instead of the
passed one. The static baseline places servers greedily and never moves
them.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .costmodel import (
    AccessEvaluator,
    Configuration,
    CostBreakdown,
    CostParams,
    running_cost,
    transition_cost,
)
from .errors import CapacityError, InvalidParameterError
from .online_algs import (
    OnBr,
    OnTh,
    batched_access_sums,
    enumerate_active_sets,
)
from .substrate import NodeId, SubstrateGraph, network_center
from .workload import RequestTrace

BRUTE_FORCE_BOUND = 10_000_000
DP_CONFIG_BOUND = 4096


@dataclass(frozen=True)
class Schedule:
    """A configuration per round plus the cost ledger of executing them."""

    configs: tuple[Configuration, ...]
    breakdowns: tuple[CostBreakdown, ...]
    end_configs: tuple[Configuration, ...]
    total: float


@dataclass
class DpTable:
    configs: list[Configuration]
    opt: np.ndarray  # (rounds, configurations) best cost to serve round t in config j
    preds: np.ndarray  # predecessor config index, -1 in round 0

    def index_of(self, config: Configuration) -> int:
        return self.configs.index(config)

    def cost(self, t: int, config: Configuration) -> float:
        return float(self.opt[t, self.index_of(config)])


def enumerate_configurations(n: int, k_max: int) -> list[Configuration]:
    """All configurations with 1..k_max active servers, lexicographic order."""
    return [Configuration(a) for a in enumerate_active_sets(n, k_max)]


def default_initial(graph: SubstrateGraph) -> Configuration:
    return Configuration(frozenset({network_center(graph)}))


def _transition_matrix(configs, params) -> np.ndarray:
    n_cfg = len(configs)
    trans = np.empty((n_cfg, n_cfg))
    for i, ci in enumerate(configs):
        for j, cj in enumerate(configs):
            trans[i, j] = transition_cost(ci, cj, params)
    return trans


def _access_table(ev: AccessEvaluator, demands, active_sets) -> np.ndarray:
    acc = np.zeros((len(demands), len(active_sets)))
    for t, demand in enumerate(demands):
        origins = tuple(sorted(demand.origins))
        if not origins:
            continue
        for j, a in enumerate(active_sets):
            acc[t, j] = ev.access(origins, a)
    return acc


def optoff_with_table(
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    initial: Configuration | None = None,
) -> tuple[Schedule, DpTable]:
    demands = list(trace)
    if not demands:
        raise InvalidParameterError("trace must be non-empty")
    if initial is None:
        initial = default_initial(graph)
    active_sets = enumerate_active_sets(graph.n, params.k_max)
    if len(active_sets) > DP_CONFIG_BOUND:
        raise CapacityError(
            f"{len(active_sets)} configurations exceed the dynamic-program bound "
            f"{DP_CONFIG_BOUND}"
        )
    configs = [Configuration(a) for a in active_sets]
    ev = AccessEvaluator(graph, params.load_model)
    trans = _transition_matrix(configs, params)
    run_vec = np.array([running_cost(c, params) for c in configs])
    acc = _access_table(ev, demands, active_sets)
    init_trans = np.array([transition_cost(initial, c, params) for c in configs])

    n_rounds, n_cfg = len(demands), len(configs)
    opt = np.empty((n_rounds, n_cfg))
    preds = np.full((n_rounds, n_cfg), -1, dtype=np.int64)
    opt[0] = init_trans + run_vec + acc[0]
    for t in range(1, n_rounds):
        totals = opt[t - 1][:, None] + trans
        best_from = totals.argmin(axis=0)  # first index wins: lexicographic tie rule
        preds[t] = best_from
        opt[t] = totals[best_from, np.arange(n_cfg)] + run_vec + acc[t]

    j = int(opt[-1].argmin())
    path = [j]
    for t in range(n_rounds - 1, 0, -1):
        j = int(preds[t, j])
        path.append(j)
    path.reverse()

    breakdowns = []
    for t, j in enumerate(path):
        trans_cost = (
            float(init_trans[j]) if t == 0 else float(trans[path[t - 1], j])
        )
        breakdowns.append(
            CostBreakdown(
                access=float(acc[t, j]),
                running=float(run_vec[j]),
                transition=trans_cost,
            )
        )
    schedule_configs = tuple(configs[j] for j in path)
    schedule = Schedule(
        configs=schedule_configs,
        breakdowns=tuple(breakdowns),
        end_configs=schedule_configs,
        total=sum(b.total for b in breakdowns),
    )
    return schedule, DpTable(configs=configs, opt=opt, preds=preds)


def optoff(
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    initial: Configuration | None = None,
) -> Schedule:
    return optoff_with_table(graph, trace, params, initial)[0]


def brute_force_schedule(
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    initial: Configuration | None = None,
) -> Schedule:
    """Exhaustive minimum over all configuration sequences (test oracle)."""
    demands = list(trace)
    if not demands:
        raise InvalidParameterError("trace must be non-empty")
    if initial is None:
        initial = default_initial(graph)
    active_sets = enumerate_active_sets(graph.n, params.k_max)
    n_cfg, n_rounds = len(active_sets), len(demands)
    if n_cfg**n_rounds > BRUTE_FORCE_BOUND:
        raise CapacityError(
            f"{n_cfg}^{n_rounds} schedules exceed the brute-force bound"
        )
    configs = [Configuration(a) for a in active_sets]
    ev = AccessEvaluator(graph, params.load_model)
    trans = _transition_matrix(configs, params)
    run_vec = np.array([running_cost(c, params) for c in configs])
    acc = _access_table(ev, demands, active_sets)
    init_trans = np.array([transition_cost(initial, c, params) for c in configs])

    best_total = math.inf
    best_path: list[int] | None = None
    path: list[int] = []

    def explore(t: int, cost: float):
        nonlocal best_total, best_path
        if cost >= best_total:
            return  # keeps the first (lexicographically smallest) optimum
        if t == n_rounds:
            best_total = cost
            best_path = list(path)
            return
        for j in range(n_cfg):
            step = (
                (init_trans[j] if t == 0 else trans[path[-1], j])
                + run_vec[j]
                + acc[t, j]
            )
            path.append(j)
            explore(t + 1, cost + step)
            path.pop()

    explore(0, 0.0)
    breakdowns = []
    for t, j in enumerate(best_path):
        trans_cost = (
            float(init_trans[j]) if t == 0 else float(trans[best_path[t - 1], j])
        )
        breakdowns.append(
            CostBreakdown(float(acc[t, j]), float(run_vec[j]), trans_cost)
        )
    schedule_configs = tuple(configs[j] for j in best_path)
    return Schedule(
        configs=schedule_configs,
        breakdowns=tuple(breakdowns),
        end_configs=schedule_configs,
        total=sum(b.total for b in breakdowns),
    )


def replay_schedule(
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    configs,
    initial: Configuration | None = None,
) -> float:
    """Independent cost of executing a given configuration sequence."""
    if initial is None:
        initial = default_initial(graph)
    ev = AccessEvaluator(graph, params.load_model)
    total = 0.0
    prev = initial
    for demand, config in zip(trace, configs):
        origins = tuple(sorted(demand.origins))
        total += transition_cost(prev, config, params)
        total += running_cost(config, params)
        if origins:
            total += ev.access(origins, config.active)
        prev = config
    return total


class OffBr(OnBr):
    """Best-response with the candidate evaluation window looking forward."""

    name = "offbr"

    def __init__(self, graph, params, demands, **kwargs):
        super().__init__(graph, params, **kwargs)
        self._demands = demands
        self.current_round = -1

    def _evaluation_window(self):
        if self.threshold_mode == "fixed":
            theta = 2.0 * self.params.create
        else:
            theta = 2.0 * self.params.create / max(1, self.epoch_rounds)
        counts: Counter = Counter()
        rounds = 0
        cost = 0.0
        base_running = running_cost(self.config, self.params)
        for demand in self._demands[self.current_round + 1 :]:
            origins = tuple(sorted(demand.origins))
            access = self.ev.access(origins, self.active) if origins else 0.0
            cost += access + base_running
            rounds += 1
            if origins:
                counts[origins] += 1
            if cost >= theta:
                break
        return counts, rounds


class OffTh(OnTh):
    """Two-threshold strategy scoring small epochs against the upcoming window.

    The large-epoch trigger stays causal: it fires on accumulated past
    costs and places the new server against the passed large epoch.
    """

    name = "offth"

    def __init__(self, graph, params, demands, **kwargs):
        super().__init__(graph, params, **kwargs)
        self._demands = demands
        self.current_round = -1

    def _small_window(self):
        counts: Counter = Counter()
        rounds = 0
        cost = 0.0
        base_running = running_cost(self.config, self.params)
        for demand in self._demands[self.current_round + 1 :]:
            origins = tuple(sorted(demand.origins))
            access = self.ev.access(origins, self.active) if origins else 0.0
            cost += access + base_running
            rounds += 1
            if origins:
                counts[origins] += 1
            if cost >= self.small_threshold:
                break
        return counts, rounds


def _run_lookahead(alg, demands) -> Schedule:
    serving, end, rounds = [], [], []
    for t, demand in enumerate(demands):
        alg.current_round = t
        serving.append(alg.config)
        rounds.append(alg.step(demand))
        end.append(alg.config)
    return Schedule(
        configs=tuple(serving),
        breakdowns=tuple(rounds),
        end_configs=tuple(end),
        total=sum(b.total for b in rounds),
    )


def offbr(
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    threshold_mode: str = "fixed",
) -> Schedule:
    demands = list(trace)
    return _run_lookahead(
        OffBr(graph, params, demands, threshold_mode=threshold_mode), demands
    )


def offth(graph: SubstrateGraph, trace: RequestTrace, params: CostParams) -> Schedule:
    demands = list(trace)
    return _run_lookahead(OffTh(graph, params, demands), demands)


@dataclass(frozen=True)
class StatResult:
    """Static baseline: greedy placements and the per-server-count cost curve."""

    k_opt: int
    placement: tuple[NodeId, ...]  # greedy order; the first k_opt are used
    curve: tuple[float, ...]  # total trace cost for 1..len(curve) servers

    @property
    def chosen_nodes(self) -> tuple[NodeId, ...]:
        return tuple(sorted(self.placement[: self.k_opt]))

    @property
    def total(self) -> float:
        return self.curve[self.k_opt - 1]


def stat(
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    k_max: int | None = None,
) -> StatResult:
    """Greedy static placement with the best server count in hindsight.

    Servers are placed one at a time, each at the node minimizing the
    total access cost over the whole trace given the servers already
    placed (greedy placements are nested, so one pass yields every k).
    The total for k servers adds running cost for every round and one
    creation per server; the best k wins, ties to the smaller count.
    """
    demands = list(trace)
    if not demands:
        raise InvalidParameterError("trace must be non-empty")
    if k_max is None:
        k_max = params.k_max
    k_max = min(k_max, graph.n)
    ev = AccessEvaluator(graph, params.load_model)
    counts: Counter = Counter()
    for demand in demands:
        if demand.origins:
            counts[tuple(sorted(demand.origins))] += 1

    placement: list[NodeId] = []
    access_sums: list[float] = []
    for _ in range(k_max):
        candidates = [v for v in range(graph.n) if v not in placement]
        if not placement:
            scores = {
                v: sum(c * ev.access(o, [v]) for o, c in counts.items())
                for v in candidates
            }
        else:
            _, _, _, add = batched_access_sums(
                ev, counts, sorted(placement), [], candidates,
                include_deactivations=False,
            )
            scores = {v: add.get(v, 0.0) for v in candidates}
        best = min(candidates, key=lambda v: (scores[v], v))
        placement.append(best)
        access_sums.append(scores[best])

    horizon = len(demands)
    curve = [
        access_sums[i - 1]
        + horizon * i * params.run_active
        + i * params.create
        for i in range(1, k_max + 1)
    ]
    k_opt = 1 + min(range(k_max), key=lambda i: curve[i])  # ties to smaller k
    return StatResult(k_opt=k_opt, placement=tuple(placement), curve=tuple(curve))
