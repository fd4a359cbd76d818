"""Request-trace generation for the two demand scenarios.

Both scenario families produce a RequestTrace: one multiset of access-point
origins per round. Generators are pure functions of (graph, params, seed).

Time-zone scenario: a day is split into T periods; each period has a fixed
hotspot node (drawn once, reused every day) that attracts a fixed share of
each round's requests, the rest being uniform background. The active period
advances every `sojourn` rounds, so a day lasts T * sojourn rounds.

Commuter scenario: demand fans out from the network center and back once
per day. The day has T steps of `dwell` rounds each; step i uses the origin
set S(e) with e = i for i <= T/2 and e = T - i afterwards, where
S(0) = {center} and S(e) doubles in size up to 2^(T/2) origins. With static
load every round carries exactly 2^(T/2) requests split evenly over the
step's origins; with dynamic load each origin sends exactly one request.

The origin sets are nested and drawn once per trace (the same every day):
S(e+1) adds 2^e access points sampled uniformly from the pool of the
2 * 2^(T/2) access points closest to the network center. Sampling, rather
than always taking the closest points, keeps the fan-out location-diverse
between runs, which is what gives dynamic placement an edge over a static
one on small symmetric topologies.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import TextIO

from .errors import InvalidParameterError, ParseError
from .substrate import NodeId, SubstrateGraph, network_center

COMMUTER_POOL_FACTOR = 2  # pool size = factor * 2^(T/2) nearest-center APs
MAX_DAY_LENGTH = 30  # guard: 2^(T/2) requests must stay practical


@dataclass(frozen=True)
class RoundDemand:
    round: int
    origins: tuple[NodeId, ...]

    def __len__(self) -> int:
        return len(self.origins)


@dataclass(frozen=True)
class RequestTrace:
    rounds: tuple[RoundDemand, ...]
    n_nodes: int

    def __post_init__(self):
        if not self.rounds:
            raise InvalidParameterError("trace must contain at least one round")
        for t, demand in enumerate(self.rounds):
            if demand.round != t:
                raise InvalidParameterError("trace rounds must be consecutive from 0")

    def __len__(self) -> int:
        return len(self.rounds)

    def __iter__(self):
        return iter(self.rounds)


@dataclass(frozen=True)
class TimeZoneParams:
    periods_per_day: int
    hotspot_share: float  # percent, 0..100
    sojourn: int
    requests_per_round: int = 3

    def __post_init__(self):
        if self.periods_per_day < 1:
            raise InvalidParameterError("periods_per_day must be >= 1")
        if not (0 <= self.hotspot_share <= 100):
            raise InvalidParameterError("hotspot_share must be in [0, 100]")
        if self.sojourn < 1:
            raise InvalidParameterError("sojourn must be >= 1")
        if self.requests_per_round < 1:
            raise InvalidParameterError("requests_per_round must be >= 1")


@dataclass(frozen=True)
class CommuterParams:
    day_length: int  # T, even
    dwell: int  # rounds per pattern step
    load_mode: str = "static"  # "static" | "dynamic"

    def __post_init__(self):
        if self.day_length < 2 or self.day_length % 2 != 0:
            raise InvalidParameterError("day_length must be even and >= 2")
        if self.day_length > MAX_DAY_LENGTH:
            raise InvalidParameterError(f"day_length must be <= {MAX_DAY_LENGTH}")
        if self.dwell < 1:
            raise InvalidParameterError("dwell must be >= 1")
        if self.load_mode not in ("static", "dynamic"):
            raise InvalidParameterError("load_mode must be 'static' or 'dynamic'")

    @property
    def peak_origins(self) -> int:
        return 2 ** (self.day_length // 2)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def gen_time_zone(
    graph: SubstrateGraph, params: TimeZoneParams, horizon: int, seed: int = 0
) -> RequestTrace:
    if horizon < 1:
        raise InvalidParameterError("horizon must be >= 1")
    rng = random.Random(seed)
    aps = list(graph.access_points)
    hotspots = [rng.choice(aps) for _ in range(params.periods_per_day)]
    n_hot = _round_half_up(params.hotspot_share / 100.0 * params.requests_per_round)
    n_hot = min(n_hot, params.requests_per_round)
    rounds = []
    for t in range(horizon):
        period = (t // params.sojourn) % params.periods_per_day
        origins = [hotspots[period]] * n_hot
        origins += [rng.choice(aps) for _ in range(params.requests_per_round - n_hot)]
        rounds.append(RoundDemand(t, tuple(origins)))
    return RequestTrace(tuple(rounds), graph.n)


def commuter_origin_sets(
    graph: SubstrateGraph, params: CommuterParams, seed: int = 0
) -> list[list[NodeId]]:
    """Nested origin sets S(0)..S(T/2), ordered by insertion (center first)."""
    half = params.day_length // 2
    peak = params.peak_origins
    if len(graph.access_points) < peak:
        raise InvalidParameterError(
            f"need at least {peak} access points for day_length={params.day_length}"
        )
    center = network_center(graph)
    by_center_latency = sorted(
        graph.access_points, key=lambda v: (graph.latency(center, v), v)
    )
    pool = by_center_latency[: max(peak * COMMUTER_POOL_FACTOR, peak)]
    anchor = pool[0]  # the center itself when it is an access point
    rng = random.Random(seed)
    sets = [[anchor]]
    members = {anchor}
    for e in range(1, half + 1):
        extra = rng.sample(sorted(set(pool) - members), 2 ** (e - 1))
        new_set = sets[-1] + sorted(extra)
        members.update(extra)
        sets.append(new_set)
    return sets


def _commuter_step_exponent(i: int, day_length: int) -> int:
    half = day_length // 2
    return i if i <= half else day_length - i


def _gen_commuter(
    graph: SubstrateGraph, params: CommuterParams, horizon: int, seed: int
) -> RequestTrace:
    if horizon < 1:
        raise InvalidParameterError("horizon must be >= 1")
    sets = commuter_origin_sets(graph, params, seed)
    peak = params.peak_origins
    rounds = []
    for t in range(horizon):
        i = (t // params.dwell) % params.day_length
        origin_set = sets[_commuter_step_exponent(i, params.day_length)]
        if params.load_mode == "static":
            per_origin = peak // len(origin_set)
            origins = tuple(v for v in origin_set for _ in range(per_origin))
        else:
            origins = tuple(origin_set)
        rounds.append(RoundDemand(t, origins))
    return RequestTrace(tuple(rounds), graph.n)


def gen_commuter_static(
    graph: SubstrateGraph, params: CommuterParams, horizon: int, seed: int = 0
) -> RequestTrace:
    if params.load_mode != "static":
        raise InvalidParameterError("params.load_mode must be 'static'")
    return _gen_commuter(graph, params, horizon, seed)


def gen_commuter_dynamic(
    graph: SubstrateGraph, params: CommuterParams, horizon: int, seed: int = 0
) -> RequestTrace:
    if params.load_mode != "dynamic":
        raise InvalidParameterError("params.load_mode must be 'dynamic'")
    return _gen_commuter(graph, params, horizon, seed)


def save_trace(trace: RequestTrace, sink: TextIO) -> None:
    """Write the `t <round> <origin>...` replay format."""
    for demand in trace.rounds:
        sink.write("t " + str(demand.round))
        for origin in demand.origins:
            sink.write(" " + str(origin))
        sink.write("\n")


def load_trace(source: TextIO | str, n_nodes: int | None = None) -> RequestTrace:
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()
    rounds = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if parts[0] != "t" or len(parts) < 2:
            raise ParseError("expected: t <round> <origin>...", line=lineno)
        try:
            t = int(parts[1])
            origins = tuple(int(p) for p in parts[2:])
        except ValueError:
            raise ParseError("non-integer field", line=lineno) from None
        if t != len(rounds):
            raise ParseError(f"expected round {len(rounds)}, got {t}", line=lineno)
        rounds.append(RoundDemand(t, origins))
    if not rounds:
        raise ParseError("empty trace source")
    if n_nodes is None:
        n_nodes = max((max(d.origins) for d in rounds if d.origins), default=0) + 1
    return RequestTrace(tuple(rounds), n_nodes)


def largest_even_day_length(n_access_points: int) -> int:
    """Largest even T with 2^(T/2) <= n_access_points, capped by the guard."""
    if n_access_points < 1:
        raise InvalidParameterError("need at least one access point")
    t = 2 * int(math.log2(n_access_points))
    return max(2, min(t, MAX_DAY_LENGTH))
