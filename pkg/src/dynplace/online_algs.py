"""Online placement strategies driven one round at a time.

Three strategies share a round loop (serve requests, update bookkeeping,
maybe reconfigure, pay running costs):

* counter-based: keeps a cost counter per enumerable configuration and
  randomly hops to a configuration whose counter is still under budget
  ("onconf");
* best-response: ends an epoch when accumulated cost crosses a threshold
  and adopts the single-change configuration that would have been cheapest
  for the passed epoch ("onbr", fixed or length-adaptive threshold);
* two-threshold: small epochs consider migrations and deactivations,
  large epochs add a server once access cost outweighs running cost
  ("onth").

Recently deactivated servers live in a FIFO cache of bounded size and age;
reactivating one in place is free and migrating the oldest one somewhere
else costs only the migration charge, which is how additions avoid full
creation cost whenever possible.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

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
from .substrate import NodeId, SubstrateGraph, network_center
from .workload import RequestTrace, RoundDemand

CONFIG_ENUMERATION_BOUND = 100_000

DEFAULT_CACHE_SIZE = 3
DEFAULT_CACHE_EXPIRY = 20  # epochs
DEFAULT_SMALL_EPOCH_FACTOR = 2.0  # small epoch ends at factor * beta

EMPTY_CONFIG = Configuration(frozenset())


def enumerate_active_sets(n: int, k_max: int) -> list[frozenset[NodeId]]:
    """All active-server placements of size 1..k_max, lexicographic order."""
    count = sum(math.comb(n, i) for i in range(1, min(k_max, n) + 1))
    if count > CONFIG_ENUMERATION_BOUND:
        raise CapacityError(
            f"{count} configurations exceed the enumeration bound "
            f"{CONFIG_ENUMERATION_BOUND}"
        )
    out: list[tuple[int, ...]] = []
    limit = min(k_max, n)

    def extend(prefix: list[int], start: int):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == limit:
            return
        for v in range(start, n):
            prefix.append(v)
            extend(prefix, v + 1)
            prefix.pop()

    extend([], 0)
    return [frozenset(t) for t in out]


class InactiveCache:
    """FIFO queue of deactivated servers with age-based expiry.

    Index 0 is the oldest entry. Entries mirror exactly the inactive nodes
    of the owning algorithm's configuration.
    """

    def __init__(self, capacity: int = DEFAULT_CACHE_SIZE,
                 expiry: int = DEFAULT_CACHE_EXPIRY):
        self.capacity = capacity
        self.expiry = expiry
        self.entries: list[tuple[NodeId, int]] = []  # (node, age in epochs)

    def nodes(self) -> list[NodeId]:
        return [node for node, _ in self.entries]

    def ages(self) -> list[int]:
        return [age for _, age in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def advance_epoch(self) -> list[NodeId]:
        """Age all entries one epoch; drop and return the expired ones."""
        aged = [(node, age + 1) for node, age in self.entries]
        self.entries = [(n, a) for n, a in aged if a < self.expiry]
        return [n for n, a in aged if a >= self.expiry]


def switch_active_set(
    old_active: frozenset[NodeId],
    entries: Sequence[tuple[NodeId, int]],
    new_active: frozenset[NodeId],
    params: CostParams,
    cache_capacity: int,
) -> tuple[tuple[NodeId, int], ...]:
    """Realize an active-set change against the inactive cache.

    Entering nodes first activate a cached server in place (free). When
    migration is cheaper than creation, remaining additions consume the
    oldest cached servers as migration donors, then displaced active
    servers; whatever is left is created fresh. Displaced servers that did
    not migrate deactivate into the cache, with FIFO eviction beyond the
    cache capacity or the total-server bound.

    Returns the new cache contents; the caller prices the move with
    transition_cost against the realized configuration.
    """
    entries = list(entries)
    entering = sorted(new_active - old_active)
    leaving = sorted(old_active - new_active)
    remaining = []
    for v in entering:
        if any(node == v for node, _ in entries):
            entries = [(n, a) for n, a in entries if n != v]
        else:
            remaining.append(v)
    if params.beta < params.create:
        while remaining and entries:
            entries.pop(0)  # oldest cached server migrates to the new slot
            remaining.pop(0)
        while remaining and leaving:
            leaving.pop(0)  # displaced active server migrates
            remaining.pop(0)
    for v in leaving:
        entries.append((v, 0))
    while entries and (
        len(entries) > cache_capacity
        or len(new_active) + len(entries) > params.k_max
    ):
        entries.pop(0)
    return tuple(entries)


@dataclass
class Candidate:
    new_active: frozenset[NodeId]
    new_entries: tuple[tuple[NodeId, int], ...]
    config: Configuration
    transition: float
    tie_key: tuple


def _tie_key(current: Configuration, candidate: Configuration) -> tuple:
    changed = sorted(
        v
        for v in (current.nodes | candidate.nodes)
        if current.state_at(v) is not candidate.state_at(v)
    )
    return (1 if changed else 0, len(changed), tuple(changed), candidate.key())


def batched_access_sums(
    ev: AccessEvaluator,
    demand_counts: Counter,
    active: Sequence[NodeId],
    migrate_targets: Sequence[NodeId],
    add_targets: Sequence[NodeId],
    include_deactivations: bool,
):
    """Replayed access totals for every single-change candidate at once.

    Returns (stay, deact[s], migrate[(s, v)], add[v]) where each value is
    the demand-weighted access sum for the candidate's active set. Exact
    for CONSTANT and LINEAR load (min-sum over the score matrix); falls
    back to sequential routing otherwise.
    """
    k = len(active)
    stay = 0.0
    deact: dict[NodeId, float] = Counter()
    mig: dict[tuple[NodeId, NodeId], float] = Counter()
    add: dict[NodeId, float] = Counter()
    mt = list(migrate_targets)
    at = list(add_targets)
    for origins, count in demand_counts.items():
        if not origins:
            continue
        if ev.fast:
            m_rows = ev.score_rows(origins)
            sub = m_rows[:, list(active)]
            best1 = sub.min(axis=1)
            stay += count * float(best1.sum())
            best2 = (
                np.partition(sub, 1, axis=1)[:, 1]
                if k >= 2
                else np.full(len(origins), np.inf)
            )
            bestpos = sub.argmin(axis=1)
            if at:
                sums = np.minimum(best1[:, None], m_rows[:, at]).sum(axis=0)
                for v, s_sum in zip(at, sums):
                    add[v] += count * float(s_sum)
            for si, s in enumerate(active):
                alt = np.where(bestpos == si, best2, best1)
                if include_deactivations and k >= 2:
                    deact[s] += count * float(alt.sum())
                if mt:
                    sums = np.minimum(alt[:, None], m_rows[:, mt]).sum(axis=0)
                    for v, s_sum in zip(mt, sums):
                        mig[(s, v)] += count * float(s_sum)
        else:
            stay += count * ev.access(origins, active)
            for v in at:
                add[v] += count * ev.access(origins, set(active) | {v})
            for s in active:
                without = set(active) - {s}
                if include_deactivations and k >= 2:
                    deact[s] += count * ev.access(origins, without)
                for v in mt:
                    mig[(s, v)] += count * ev.access(origins, without | {v})
    return stay, deact, mig, add


class OnlineAlgorithm:
    """Shared round loop and configuration/cache state."""

    name = "base"

    def __init__(
        self,
        graph: SubstrateGraph,
        params: CostParams,
        *,
        start: Configuration | None = None,
        rng: random.Random | None = None,
        cache_size: int = DEFAULT_CACHE_SIZE,
        cache_expiry: int = DEFAULT_CACHE_EXPIRY,
    ):
        self.graph = graph
        self.params = params
        self.rng = rng if rng is not None else random.Random(0)
        self.ev = AccessEvaluator(graph, params.load_model)
        if start is None:
            start = Configuration(frozenset({network_center(graph)}))
        if not start.active:
            raise InvalidParameterError("start configuration needs an active server")
        if start.total_servers > params.k_max:
            raise InvalidParameterError("start configuration exceeds k_max")
        self.active: frozenset[NodeId] = frozenset(start.active)
        self.cache = InactiveCache(cache_size, cache_expiry)
        for v in sorted(start.inactive):
            self.cache.entries.append((v, 0))
        self.init_cost = CostBreakdown(
            transition=transition_cost(EMPTY_CONFIG, start, params)
        )

    @property
    def config(self) -> Configuration:
        return Configuration(self.active, frozenset(self.cache.nodes()))

    def step(self, demand: RoundDemand) -> CostBreakdown:
        origins = tuple(sorted(demand.origins))
        access = self.ev.access(origins, self.active) if origins else 0.0
        transition = self._decide(origins, access)
        running = running_cost(self.config, self.params)
        return CostBreakdown(access=access, running=running, transition=transition)

    def _decide(self, origins: tuple[NodeId, ...], access: float) -> float:
        raise NotImplementedError

    # -- candidate plumbing shared by the threshold strategies --

    def _adopt(self, candidate: Candidate) -> float:
        self.active = candidate.new_active
        self.cache.entries = list(candidate.new_entries)
        return candidate.transition

    def _candidate(self, new_active: frozenset[NodeId], *, plain: bool = False) -> Candidate:
        current = self.config
        if plain:
            new_entries = tuple(self.cache.entries)
        else:
            new_entries = switch_active_set(
                self.active, self.cache.entries, new_active, self.params,
                self.cache.capacity,
            )
        config = Configuration(new_active, frozenset(n for n, _ in new_entries))
        return Candidate(
            new_active=new_active,
            new_entries=new_entries,
            config=config,
            transition=transition_cost(current, config, self.params),
            tie_key=_tie_key(current, config),
        )

    def _empty_nodes(self) -> list[NodeId]:
        occupied = self.active | set(self.cache.nodes())
        return [v for v in range(self.graph.n) if v not in occupied]

    def _addition_allowed(self, target_cached: bool) -> bool:
        if target_cached or len(self.cache) > 0:
            return True  # in-place activation or donor migration keeps totals
        return len(self.active) + len(self.cache) < self.params.k_max


class OnConf(OnlineAlgorithm):
    """Configuration-counter strategy over the enumerable placement space."""

    name = "onconf"

    def __init__(self, graph, params, **kwargs):
        super().__init__(graph, params, **kwargs)
        self.space = enumerate_active_sets(graph.n, params.k_max)
        self.counters: dict[frozenset[NodeId], float] | None = None

    def _begin_epoch(self):
        base = self.config
        self.counters = {
            a: transition_cost(base, Configuration(a), self.params)
            for a in self.space
        }

    def _decide(self, origins, access):
        if self.counters is None:
            self._begin_epoch()
        run_active = self.params.run_active
        for a in self.space:
            self.counters[a] += (
                self.ev.access(origins, a) if origins else 0.0
            ) + len(a) * run_active
        limit = self.params.k_max * self.params.create
        transition = 0.0
        if self.counters[self.active] >= limit:
            eligible = [a for a in self.space if self.counters[a] < limit]
            if eligible:
                target = self.rng.choice(eligible)
                transition = self._adopt(self._candidate(target))
            else:
                # epoch over: counters reset, next epoch starts next round
                self.counters = None
                self.cache.advance_epoch()
        return transition


class OnBr(OnlineAlgorithm):
    """Best-response strategy: re-optimize one change per epoch.

    An epoch ends when accumulated access plus running cost reaches the
    threshold (2c fixed, or 2c divided by the previous epoch length). The
    adopted move is whichever single change (stay, migrate one server to
    an empty node, deactivate one server, activate or add one server)
    would have been cheapest over the passed epoch.
    """

    name = "onbr"

    def __init__(self, graph, params, *, threshold_mode: str = "fixed", **kwargs):
        super().__init__(graph, params, **kwargs)
        if threshold_mode not in ("fixed", "dyn"):
            raise InvalidParameterError("threshold_mode must be 'fixed' or 'dyn'")
        self.threshold_mode = threshold_mode
        self.epoch_cost = 0.0
        self.epoch_rounds = 0
        self.demand_counts: Counter = Counter()
        self.prev_epoch_len = 1

    def threshold(self) -> float:
        if self.threshold_mode == "fixed":
            return 2.0 * self.params.create
        return 2.0 * self.params.create / self.prev_epoch_len

    def _decide(self, origins, access):
        self.epoch_cost += access + running_cost(self.config, self.params)
        self.epoch_rounds += 1
        if origins:
            self.demand_counts[origins] += 1
        if self.epoch_cost < self.threshold():
            return 0.0
        chosen = self._choose(*self._evaluation_window())
        transition = self._adopt(chosen)
        self.prev_epoch_len = max(1, self.epoch_rounds)
        self.epoch_cost = 0.0
        self.epoch_rounds = 0
        self.demand_counts = Counter()
        self.cache.advance_epoch()
        return transition

    def _evaluation_window(self):
        """Demand window the candidates are scored against (the passed epoch)."""
        return self.demand_counts, self.epoch_rounds

    def _choose(self, demand_counts, n_rounds) -> Candidate:
        empty = self._empty_nodes()
        cached = self.cache.nodes()
        candidates = [self._candidate(self.active)]  # no change
        for s in sorted(self.active):
            for v in empty:
                candidates.append(
                    self._candidate(self.active - {s} | {v}, plain=True)
                )
        if len(self.active) >= 2:
            for s in sorted(self.active):
                candidates.append(self._candidate(self.active - {s}))
        for v in sorted(cached) + empty:
            if self._addition_allowed(v in cached):
                candidates.append(self._candidate(self.active | {v}))
        return self._cheapest(candidates, demand_counts, n_rounds)

    def _cheapest(self, candidates, demand_counts, n_rounds):
        active_sorted = sorted(self.active)
        mig_targets = sorted(
            {
                next(iter(c.new_active - self.active))
                for c in candidates
                if len(c.new_active) == len(self.active)
                and c.new_active != self.active
            }
        )
        add_targets = sorted(
            {
                next(iter(c.new_active - self.active))
                for c in candidates
                if len(c.new_active) == len(self.active) + 1
            }
        )
        stay, deact, mig, add = batched_access_sums(
            self.ev, demand_counts, active_sorted, mig_targets, add_targets,
            include_deactivations=True,
        )

        def access_of(c: Candidate) -> float:
            if c.new_active == self.active:
                return stay
            gained = c.new_active - self.active
            lost = self.active - c.new_active
            if not gained:
                return deact[next(iter(lost))]
            if not lost:
                return add[next(iter(gained))]
            return mig[(next(iter(lost)), next(iter(gained)))]

        best = None
        for c in candidates:
            total = (
                access_of(c)
                + n_rounds * running_cost(c.config, self.params)
                + c.transition
            )
            key = (total, c.tie_key)
            if best is None or key < best[0]:
                best = (key, c)
        return best[1]


class OnTh(OnlineAlgorithm):
    """Two-threshold strategy with small and large epochs.

    Small epochs end after an accumulated cost of y * beta and consider
    staying, migrating one server, or deactivating one server, judged
    against the passed small epoch. A large epoch ends when accumulated
    access cost clearly outweighs running cost (access / (k+1) - running
    exceeds the creation cost); then one server is added at the position
    minimizing the large epoch's replayed access cost.
    """

    name = "onth"

    def __init__(self, graph, params, *, small_epoch_factor: float = DEFAULT_SMALL_EPOCH_FACTOR,
                 **kwargs):
        super().__init__(graph, params, **kwargs)
        self.small_threshold = small_epoch_factor * params.beta
        self.small_accum = 0.0
        self.small_rounds = 0
        self.small_counts: Counter = Counter()
        self.large_access = 0.0
        self.large_running = 0.0
        self.large_counts: Counter = Counter()

    def _decide(self, origins, access):
        running = running_cost(self.config, self.params)
        self.small_accum += access + running
        self.small_rounds += 1
        self.large_access += access
        self.large_running += running
        if origins:
            self.small_counts[origins] += 1
            self.large_counts[origins] += 1
        k_cur = len(self.active)
        if self.large_access / (k_cur + 1) - self.large_running > self.params.create:
            transition = self._grow()
            self.large_access = 0.0
            self.large_running = 0.0
            self.large_counts = Counter()
            return transition
        if self.small_accum >= self.small_threshold:
            chosen = self._choose_small(*self._small_window())
            k_changed = len(chosen.new_active) != k_cur
            transition = self._adopt(chosen)
            self.small_accum = 0.0
            self.small_rounds = 0
            self.small_counts = Counter()
            self.cache.advance_epoch()
            if k_changed:
                self.large_access = 0.0
                self.large_running = 0.0
                self.large_counts = Counter()
            return transition
        return 0.0

    def _grow(self) -> float:
        """Add one server where the large epoch's access would have been lowest."""
        cached = set(self.cache.nodes())
        targets = [
            v
            for v in range(self.graph.n)
            if v not in self.active and self._addition_allowed(v in cached)
        ]
        if not targets:
            return 0.0
        _, _, _, add = batched_access_sums(
            self.ev, self.large_counts, sorted(self.active), [], targets,
            include_deactivations=False,
        )
        best = min(targets, key=lambda v: (add.get(v, 0.0), v))
        return self._adopt(self._candidate(self.active | {best}))

    def _small_window(self):
        """Demand window small-epoch candidates are scored against."""
        return self.small_counts, self.small_rounds

    def _choose_small(self, demand_counts, n_rounds) -> Candidate:
        candidates = [self._candidate(self.active)]
        targets = [v for v in range(self.graph.n) if v not in self.active]
        for s in sorted(self.active):
            for v in targets:
                candidates.append(self._candidate(self.active - {s} | {v}))
        if len(self.active) >= 2:
            for s in sorted(self.active):
                candidates.append(self._candidate(self.active - {s}))
        return self._cheapest_small(candidates, targets, demand_counts, n_rounds)

    def _cheapest_small(self, candidates, targets, demand_counts, n_rounds) -> Candidate:
        active_sorted = sorted(self.active)
        stay, deact, mig, _ = batched_access_sums(
            self.ev, demand_counts, active_sorted, targets, [],
            include_deactivations=True,
        )

        def access_of(c: Candidate) -> float:
            if c.new_active == self.active:
                return stay
            lost = self.active - c.new_active
            gained = c.new_active - self.active
            if not gained:
                return deact[next(iter(lost))]
            return mig[(next(iter(lost)), next(iter(gained)))]

        best = None
        for c in candidates:
            total = (
                access_of(c)
                + n_rounds * running_cost(c.config, self.params)
                + c.transition
            )
            key = (total, c.tie_key)
            if best is None or key < best[0]:
                best = (key, c)
        return best[1]


@dataclass
class AlgorithmRun:
    """Ledger and configuration history of one simulated execution."""

    algorithm: str
    init_cost: CostBreakdown
    rounds: list[CostBreakdown]
    configs: list[Configuration]  # configuration that served each round
    end_configs: list[Configuration]  # configuration after each round's step
    final_config: Configuration

    @property
    def total(self) -> float:
        return self.init_cost.total + sum(r.total for r in self.rounds)

    @property
    def breakdown(self) -> CostBreakdown:
        out = self.init_cost
        for r in self.rounds:
            out = out + r
        return out


ALGORITHM_FACTORIES = {
    "onconf": lambda g, p, rng: OnConf(g, p, rng=rng),
    "onbr-fixed": lambda g, p, rng: OnBr(g, p, threshold_mode="fixed", rng=rng),
    "onbr-dyn": lambda g, p, rng: OnBr(g, p, threshold_mode="dyn", rng=rng),
    "onth": lambda g, p, rng: OnTh(g, p, rng=rng),
}


def make_algorithm(
    name: str, graph: SubstrateGraph, params: CostParams, seed: int = 0
) -> OnlineAlgorithm:
    try:
        factory = ALGORITHM_FACTORIES[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown online algorithm {name!r}; choose from "
            f"{sorted(ALGORITHM_FACTORIES)}"
        ) from None
    return factory(graph, params, random.Random(seed))


def run_online(
    graph: SubstrateGraph,
    trace: RequestTrace | Iterable[RoundDemand],
    params: CostParams,
    algorithm: str,
    seed: int = 0,
) -> AlgorithmRun:
    """Initialize at the network center and play the trace round by round."""
    demands = list(trace)
    if isinstance(trace, RequestTrace) and trace.n_nodes != graph.n:
        raise InvalidParameterError("trace was generated for a different graph")
    for demand in demands:
        for origin in demand.origins:
            if not (0 <= origin < graph.n):
                raise InvalidParameterError(f"origin {origin} outside graph")
    alg = make_algorithm(algorithm, graph, params, seed)
    rounds, configs, end_configs = [], [], []
    for demand in demands:
        configs.append(alg.config)
        rounds.append(alg.step(demand))
        end_configs.append(alg.config)
    return AlgorithmRun(
        algorithm=algorithm,
        init_cost=alg.init_cost,
        rounds=rounds,
        configs=configs,
        end_configs=end_configs,
        final_config=alg.config,
    )
