import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynplace.costmodel import (
    AccessEvaluator,
    Configuration,
    CostBreakdown,
    CostParams,
    LoadModel,
    ServerState,
    access_cost,
    round_cost,
    route_requests,
    running_cost,
    transition_cost,
)
from dynplace.errors import InvalidParameterError, NoActiveServerError
from dynplace.substrate import build_erdos_renyi, build_line_graph
from dynplace.workload import RoundDemand

PARAMS = CostParams(beta=40.0, create=400.0, run_active=2.5, run_inactive=0.5, k_max=5)


def conf(active, inactive=()):
    return Configuration(frozenset(active), frozenset(inactive))


def oracle_transition(old, new, params):
    """Exhaustive enumeration over all server-to-slot assignments."""
    sources = sorted(old.nodes)
    slots = sorted(new.nodes)
    best = float("inf")
    for assignment in itertools.product([None, *range(len(sources))], repeat=len(slots)):
        used = [a for a in assignment if a is not None]
        if len(set(used)) != len(used):
            continue
        cost = 0.0
        for slot, a in zip(slots, assignment):
            if a is None:
                cost += params.create
            elif sources[a] != slot:
                cost += params.beta
        best = min(best, cost)
    return best


class TestConfiguration:
    def test_states(self):
        c = conf({1, 2}, {4})
        assert c.state_at(1) is ServerState.ACTIVE
        assert c.state_at(4) is ServerState.INACTIVE
        assert c.state_at(0) is ServerState.NOT_IN_USE
        assert c.total_servers == 3

    def test_overlap_rejected(self):
        with pytest.raises(InvalidParameterError):
            conf({1}, {1})

    def test_hashable_value_semantics(self):
        assert conf({1, 2}) == conf({2, 1})
        assert len({conf({1}), conf({1})}) == 1


class TestRouting:
    def test_single_server_takes_all(self):
        g = build_line_graph(4)
        routing = route_requests(g, conf({2}), RoundDemand(0, (0, 1, 3)), LoadModel.LINEAR)
        assert all(server == 2 for _, server, _ in routing.requests)
        assert routing.counts == {2: 3}

    def test_local_service_at_line_ends(self):
        g = build_line_graph(5)
        routing = route_requests(g, conf({0, 4}), RoundDemand(0, (0, 4)), LoadModel.CONSTANT)
        delays = {origin: delay for origin, _, delay in routing.requests}
        assert delays == {0: 0.0, 4: 0.0}

    def test_no_active_server_raises(self):
        g = build_line_graph(3)
        with pytest.raises(NoActiveServerError):
            route_requests(g, conf(set()), RoundDemand(0, (1,)), LoadModel.LINEAR)

    def test_greedy_matches_exhaustive_on_spec_case(self):
        # Two equal-capacity servers, LINEAR load, four identical requests
        # from an origin adjacent to both: enumerate all 2^4 assignments.
        g = build_line_graph(4)
        servers = [1, 2]
        origins = (1, 1, 1, 1)
        best = float("inf")
        for choice in itertools.product(servers, repeat=4):
            delays = sum(g.latency(o, s) for o, s in zip(origins, choice))
            load = sum(
                LoadModel.LINEAR.load(1.0, sum(1 for c in choice if c == s))
                for s in servers
            )
            best = min(best, delays + load)
        got = access_cost(g, conf(set(servers)), RoundDemand(0, origins), LoadModel.LINEAR)
        assert got == pytest.approx(best, abs=1e-12)

    def test_constant_load_routes_to_nearest(self):
        g = build_erdos_renyi(12, 0.3, seed=5)
        active = [2, 7, 9]
        routing = route_requests(g, conf(set(active)), RoundDemand(0, tuple(range(12))),
                                 LoadModel.CONSTANT)
        for origin, server, delay in routing.requests:
            best = min(active, key=lambda s: (g.latency(origin, s), s))
            assert server == best
            assert delay == g.latency(origin, best)


class TestAccessCost:
    def test_single_request_at_server(self):
        g = build_line_graph(3)
        got = access_cost(g, conf({1}), RoundDemand(0, (1,)), LoadModel.LINEAR)
        assert got == 1.0  # zero delay, load 1/1

    def test_constant_load_distance_sum(self):
        g = build_line_graph(4)
        got = access_cost(g, conf({0}), RoundDemand(0, (3, 3)), LoadModel.CONSTANT)
        assert got == 6.0

    def test_quadratic_load(self):
        # three requests, one server with capacity 2, total distance 4
        g = build_line_graph(5, latency=2.0, capacity=2.0)
        got = access_cost(g, conf({2}), RoundDemand(0, (1, 2, 3)), LoadModel.QUADRATIC)
        assert got == 4.0 + 9.0 / 2.0

    def test_empty_demand_is_free(self):
        g = build_line_graph(3)
        assert access_cost(g, conf({0}), RoundDemand(0, ()), LoadModel.LINEAR) == 0.0

    def test_adding_server_at_origin_never_hurts_constant(self):
        g = build_erdos_renyi(10, 0.3, seed=2)
        demand = RoundDemand(0, (3, 5, 5, 8))
        base = access_cost(g, conf({1}), demand, LoadModel.CONSTANT)
        for origin in set(demand.origins):
            extended = access_cost(g, conf({1, origin}), demand, LoadModel.CONSTANT)
            assert extended <= base + 1e-12


class TestRunningCost:
    def test_empty(self):
        assert running_cost(conf(set()), PARAMS) == 0.0

    def test_mixed_states(self):
        assert running_cost(conf({1, 2}, {3}), PARAMS) == 5.5

    def test_single_active(self):
        params = CostParams(run_active=1.0, run_inactive=0.0)
        assert running_cost(conf({0}), params) == 1.0


class TestTransitionCost:
    def test_create_fourth_server(self):
        old = conf({1, 2, 3})
        new = conf({1, 2, 3, 4})
        assert transition_cost(old, new, PARAMS) == 400.0

    def test_activate_inactive_in_place_free(self):
        old = conf({1, 2, 3}, {4})
        new = conf({1, 2, 3, 4})
        assert transition_cost(old, new, PARAMS) == 0.0

    def test_deactivation_free(self):
        old = conf({1, 2, 3})
        new = conf({1, 2}, {3})
        assert transition_cost(old, new, PARAMS) == 0.0

    def test_migrate_inactive_donor(self):
        old = conf({1, 2, 3}, {5})
        new = conf({1, 2, 4}, {3})
        assert transition_cost(old, new, PARAMS) == 40.0

    def test_identity_free(self):
        for c in [conf(set()), conf({1}), conf({0, 2}, {3})]:
            assert transition_cost(c, c, PARAMS) == 0.0

    def test_creation_preferred_when_beta_exceeds_create(self):
        params = CostParams(beta=400.0, create=40.0)
        old = conf({0})
        new = conf({1})
        assert transition_cost(old, new, params) == 40.0

    @pytest.mark.parametrize("beta,create", [(40.0, 400.0), (400.0, 40.0)])
    def test_matches_exhaustive_assignment_oracle(self, beta, create):
        params = CostParams(beta=beta, create=create, k_max=3)
        rng = random.Random(77)
        nodes = range(5)
        for _ in range(200):
            k_old = rng.randint(0, 3)
            k_new = rng.randint(1, 3)
            old_nodes = rng.sample(nodes, k_old)
            new_nodes = rng.sample(nodes, k_new)
            old_split = rng.randint(0, k_old)
            new_split = rng.randint(0, k_new)
            old = conf(old_nodes[:old_split], old_nodes[old_split:])
            new = conf(new_nodes[:new_split], new_nodes[new_split:])
            assert transition_cost(old, new, params) == oracle_transition(old, new, params)

    @settings(max_examples=100, deadline=None)
    @given(data=st.data())
    def test_triangle_property(self, data):
        nodes = list(range(6))
        configs = []
        for _ in range(3):
            chosen = data.draw(st.lists(st.sampled_from(nodes), max_size=4, unique=True))
            split = data.draw(st.integers(0, len(chosen)))
            configs.append(conf(chosen[:split], chosen[split:]))
        c1, c2, c3 = configs
        direct = transition_cost(c1, c3, PARAMS)
        composed = transition_cost(c1, c2, PARAMS) + transition_cost(c2, c3, PARAMS)
        assert direct <= composed + 1e-9


class TestRoundCost:
    def test_idle_round(self):
        g = build_line_graph(3)
        c = conf({1})
        got = round_cost(g, c, c, RoundDemand(0, ()), PARAMS)
        assert (got.access, got.running, got.transition) == (0.0, 2.5, 0.0)

    def test_pure_migration(self):
        g = build_line_graph(3)
        got = round_cost(g, conf({0}), conf({2}), RoundDemand(0, ()), PARAMS)
        assert (got.access, got.running, got.transition) == (0.0, 2.5, 40.0)

    def test_composite(self):
        # one request at distance 2 under the old placement, one creation
        g = build_line_graph(4)
        got = round_cost(
            g, conf({0}), conf({0, 3}), RoundDemand(0, (2,)),
            CostParams(beta=40, create=400, run_active=2.5, run_inactive=0.5,
                       load_model=LoadModel.CONSTANT),
        )
        assert (got.access, got.running, got.transition) == (2.0, 5.0, 400.0)

    def test_access_charged_under_previous_config(self):
        g = build_line_graph(5)
        params = CostParams(load_model=LoadModel.CONSTANT)
        got = round_cost(g, conf({0}), conf({4}), RoundDemand(0, (4,)), params)
        assert got.access == 4.0  # served by the old server at node 0


class TestScaling:
    def test_costs_scale_linearly(self):
        factor = 3.5
        demand = RoundDemand(0, (0, 3, 4))
        base_g = build_line_graph(5, latency=2.0)
        scaled_g = build_line_graph(5, latency=2.0 * factor)
        base_p = CostParams(beta=40, create=400, run_active=2.5, run_inactive=0.5,
                            load_model=LoadModel.CONSTANT)
        scaled_p = CostParams(beta=40 * factor, create=400 * factor,
                              run_active=2.5 * factor, run_inactive=0.5 * factor,
                              load_model=LoadModel.CONSTANT)
        old, new = conf({2}), conf({2, 4}, {1})
        base = round_cost(base_g, old, new, demand, base_p)
        scaled = round_cost(scaled_g, old, new, demand, scaled_p)
        assert scaled.total == pytest.approx(factor * base.total, rel=1e-12)


class TestAccessEvaluator:
    @pytest.mark.parametrize("load_model", [LoadModel.CONSTANT, LoadModel.LINEAR])
    def test_matches_sequential_routing(self, load_model):
        rng = random.Random(13)
        g = build_erdos_renyi(15, 0.25, seed=13)
        ev = AccessEvaluator(g, load_model)
        for _ in range(50):
            active = frozenset(rng.sample(range(15), rng.randint(1, 4)))
            origins = tuple(rng.choices(range(15), k=rng.randint(1, 8)))
            want = access_cost(g, Configuration(active), origins, load_model)
            got = ev.access(tuple(sorted(origins)), active)
            assert got == pytest.approx(want, rel=1e-12)

    def test_quadratic_falls_back(self):
        g = build_line_graph(5, capacity=2.0)
        ev = AccessEvaluator(g, LoadModel.QUADRATIC)
        want = access_cost(g, conf({2}), (1, 2, 3), LoadModel.QUADRATIC)
        assert ev.access((1, 2, 3), {2}) == pytest.approx(want)


def test_breakdown_addition():
    a = CostBreakdown(1.0, 2.0, 3.0)
    b = CostBreakdown(0.5, 0.25, 0.125)
    total = a + b
    assert total == CostBreakdown(1.5, 2.25, 3.125)
    assert total.total == pytest.approx(6.875)
