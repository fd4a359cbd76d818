"""Experiment harness: configs, seeded batch execution, CSV ledgers, ratios.

An experiment is a grid of (sweep value, repetition, algorithm) cells over
one graph/scenario family. Every cell derives its seed from the base seed
and the cell coordinates (base XOR crc32 of "<sweep>|<rep>", further
namespaced for graph, trace, and algorithm randomness), so any single run
can be re-executed in isolation. Identical configs produce byte-identical
CSV files.

Output format: one UTF-8 CSV with a row per simulated round (the round-0
transition column folds in the initial creation charges, so per-run sums
equal run totals), plus a `.summary.csv` with one row per run. Ratio
tables divide algorithm totals by the optimal offline total of the same
cell and add per-sweep-value means over repetitions.
"""

from __future__ import annotations

import csv
import io
import statistics
import sys
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path

from .costmodel import (
    AccessEvaluator,
    Configuration,
    CostBreakdown,
    CostParams,
    LoadModel,
    running_cost,
)
from .errors import CapacityError, ConfigError
from .offline_algs import offbr, offth, optoff, stat
from .online_algs import ALGORITHM_FACTORIES, run_online
from .substrate import (
    SubstrateGraph,
    build_erdos_renyi,
    build_line_graph,
    load_edge_list,
)
from .workload import (
    CommuterParams,
    RequestTrace,
    TimeZoneParams,
    gen_commuter_dynamic,
    gen_commuter_static,
    gen_time_zone,
    largest_even_day_length,
)

ROW_HEADER = (
    "run_id", "seed", "sweep_value", "algorithm", "round",
    "access", "running", "transition", "cumulative_total",
    "active_count", "inactive_count",
)
SUMMARY_HEADER = (
    "run_id", "seed", "sweep_value", "algorithm", "rounds",
    "access", "running", "transition", "total",
    "final_active", "final_inactive", "ratio_to_optoff",
)
RATIO_HEADER = (
    "sweep_value", "rep", "seed", "algorithm", "total", "optoff_total", "ratio",
)
RATIO_MEAN_HEADER = (
    "sweep_value", "algorithm", "mean_ratio", "std_ratio", "mean_total", "reps",
)

OFFLINE_ALGORITHMS = ("optoff", "offbr", "offth", "stat")
KNOWN_ALGORITHMS = tuple(sorted(ALGORITHM_FACTORIES)) + OFFLINE_ALGORITHMS

GRAPH_KINDS = ("line", "erdos", "file")
SCENARIO_KINDS = ("commuter-static", "commuter-dynamic", "time-zone")
SWEEP_KINDS = ("none", "size", "lambda", "T")


@dataclass
class GraphSpec:
    kind: str = "line"
    n: int = 5
    latency: float = 1.0  # line graphs: per-hop latency
    capacity: float = 1.0
    p: float = 0.05  # erdos: edge probability
    latency_min: float = 1.0
    latency_max: float = 10.0
    path: str = ""  # file graphs: edge-list location


@dataclass
class ScenarioSpec:
    kind: str = "commuter-dynamic"
    day_length: int = 4  # commuter T; 0 derives it from the access-point count
    dwell: int = 10  # commuter lambda
    periods: int = 12  # time-zone T
    sojourn: int = 20  # time-zone tau
    hotspot_share: float = 50.0
    requests_per_round: int = 3


@dataclass
class ExperimentConfig:
    graph: GraphSpec = field(default_factory=GraphSpec)
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    horizon: int = 200
    beta: float = 40.0
    create: float = 400.0
    run_active: float = 2.5
    run_inactive: float = 0.5
    k_max: int = 5
    load: str = "linear"
    algorithms: tuple[str, ...] = ("onth",)
    sweep: str = "none"
    sweep_values: tuple[int, ...] = ()
    repetitions: int = 1
    base_seed: int = 0
    output: str = "results.csv"

    def cost_params(self) -> CostParams:
        return CostParams(
            beta=self.beta,
            create=self.create,
            run_active=self.run_active,
            run_inactive=self.run_inactive,
            k_max=self.k_max,
            load_model=LoadModel(self.load),
        )


def _parse_int(text: str) -> int:
    return int(text)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_str(text: str) -> str:
    return text


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p.strip()) for p in text.split(",") if p.strip())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


# key -> (section attribute or None for top level, field name, converter)
CONFIG_KEYS = {
    "graph.kind": ("graph", "kind", _parse_str),
    "graph.n": ("graph", "n", _parse_int),
    "graph.latency": ("graph", "latency", _parse_float),
    "graph.capacity": ("graph", "capacity", _parse_float),
    "graph.p": ("graph", "p", _parse_float),
    "graph.latency_min": ("graph", "latency_min", _parse_float),
    "graph.latency_max": ("graph", "latency_max", _parse_float),
    "graph.path": ("graph", "path", _parse_str),
    "scenario.kind": ("scenario", "kind", _parse_str),
    "scenario.day_length": ("scenario", "day_length", _parse_int),
    "scenario.dwell": ("scenario", "dwell", _parse_int),
    "scenario.periods": ("scenario", "periods", _parse_int),
    "scenario.sojourn": ("scenario", "sojourn", _parse_int),
    "scenario.hotspot_share": ("scenario", "hotspot_share", _parse_float),
    "scenario.requests_per_round": ("scenario", "requests_per_round", _parse_int),
    "horizon": (None, "horizon", _parse_int),
    "beta": (None, "beta", _parse_float),
    "create": (None, "create", _parse_float),
    "run_active": (None, "run_active", _parse_float),
    "run_inactive": (None, "run_inactive", _parse_float),
    "k_max": (None, "k_max", _parse_int),
    "load": (None, "load", _parse_str),
    "algorithms": (None, "algorithms", _parse_str_list),
    "sweep": (None, "sweep", _parse_str),
    "sweep_values": (None, "sweep_values", _parse_int_list),
    "repetitions": (None, "repetitions", _parse_int),
    "base_seed": (None, "base_seed", _parse_int),
    "output": (None, "output", _parse_str),
}


def parse_config_text(text: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", "expected `key = value`")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def config_from_mapping(mapping: dict[str, str],
                        base: ExperimentConfig | None = None) -> ExperimentConfig:
    config = base if base is not None else ExperimentConfig()
    config = replace(config, graph=replace(config.graph),
                     scenario=replace(config.scenario))
    for key, raw in mapping.items():
        if key not in CONFIG_KEYS:
            raise ConfigError(key, "unknown configuration key")
        section, attr, convert = CONFIG_KEYS[key]
        try:
            value = convert(raw)
        except ValueError:
            raise ConfigError(key, f"cannot parse value {raw!r}") from None
        if section is None:
            setattr(config, attr, value)
        else:
            setattr(getattr(config, section), attr, value)
    validate_config(config)
    return config


def config_to_text(config: ExperimentConfig) -> str:
    lines = []
    for key, (section, attr, _) in CONFIG_KEYS.items():
        holder = config if section is None else getattr(config, section)
        value = getattr(holder, attr)
        if isinstance(value, tuple):
            value = ", ".join(str(v) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def validate_config(config: ExperimentConfig) -> None:
    if config.graph.kind not in GRAPH_KINDS:
        raise ConfigError("graph.kind", f"must be one of {GRAPH_KINDS}")
    if config.graph.kind == "file" and not config.graph.path:
        raise ConfigError("graph.path", "required for file graphs")
    if config.scenario.kind not in SCENARIO_KINDS:
        raise ConfigError("scenario.kind", f"must be one of {SCENARIO_KINDS}")
    if config.horizon < 1:
        raise ConfigError("horizon", "must be >= 1")
    if config.repetitions < 1:
        raise ConfigError("repetitions", "must be >= 1")
    if config.load not in ("linear", "quadratic", "constant"):
        raise ConfigError("load", "must be linear, quadratic, or constant")
    if not config.algorithms:
        raise ConfigError("algorithms", "at least one algorithm required")
    for name in config.algorithms:
        if name not in KNOWN_ALGORITHMS:
            raise ConfigError("algorithms",
                              f"unknown algorithm {name!r}; known: {KNOWN_ALGORITHMS}")
    if config.sweep not in SWEEP_KINDS:
        raise ConfigError("sweep", f"must be one of {SWEEP_KINDS}")
    if config.sweep != "none" and not config.sweep_values:
        raise ConfigError("sweep_values", "required when a sweep variable is set")


def load_config(path: str | Path,
                overrides: dict[str, str] | None = None) -> ExperimentConfig:
    mapping = parse_config_text(Path(path).read_text())
    if overrides:
        mapping.update(overrides)
    return config_from_mapping(mapping)


def derive_seed(base: int, *parts) -> int:
    """base XOR crc32 of the joined cell coordinates (documented, stable)."""
    label = "|".join(str(p) for p in parts)
    return (base ^ zlib.crc32(label.encode("utf-8"))) & 0x7FFFFFFF


def apply_sweep(config: ExperimentConfig, value: int | None) -> ExperimentConfig:
    out = replace(config, graph=replace(config.graph),
                  scenario=replace(config.scenario))
    if value is None or config.sweep == "none":
        return out
    if config.sweep == "size":
        out.graph.n = int(value)
    elif config.sweep == "lambda":
        if out.scenario.kind == "time-zone":
            out.scenario.sojourn = int(value)
        else:
            out.scenario.dwell = int(value)
    elif config.sweep == "T":
        if out.scenario.kind == "time-zone":
            out.scenario.periods = int(value)
        else:
            out.scenario.day_length = int(value)
    return out


def build_graph(spec: GraphSpec, seed: int) -> SubstrateGraph:
    if spec.kind == "line":
        return build_line_graph(spec.n, latency=spec.latency, capacity=spec.capacity)
    if spec.kind == "erdos":
        return build_erdos_renyi(
            spec.n, spec.p,
            capacity=spec.capacity,
            latency_range=(spec.latency_min, spec.latency_max),
            seed=seed,
        )
    with open(spec.path, "r", encoding="utf-8") as handle:
        return load_edge_list(handle)


def build_trace(graph: SubstrateGraph, spec: ScenarioSpec, horizon: int,
                seed: int) -> RequestTrace:
    if spec.kind == "time-zone":
        params = TimeZoneParams(
            periods_per_day=spec.periods,
            hotspot_share=spec.hotspot_share,
            sojourn=spec.sojourn,
            requests_per_round=spec.requests_per_round,
        )
        return gen_time_zone(graph, params, horizon, seed)
    day_length = spec.day_length
    if day_length == 0:
        day_length = largest_even_day_length(len(graph.access_points))
    mode = "static" if spec.kind == "commuter-static" else "dynamic"
    params = CommuterParams(day_length=day_length, dwell=spec.dwell, load_mode=mode)
    if mode == "static":
        return gen_commuter_static(graph, params, horizon, seed)
    return gen_commuter_dynamic(graph, params, horizon, seed)


@dataclass
class RunRecord:
    """Normalized per-run result, independent of algorithm family."""

    run_id: str
    seed: int
    sweep_value: int | None
    rep: int
    algorithm: str
    init_cost: CostBreakdown
    rounds: list[CostBreakdown]
    counts: list[tuple[int, int]]  # (active, inactive) after each round

    @property
    def total(self) -> float:
        return self.init_cost.total + sum(r.total for r in self.rounds)

    @property
    def breakdown(self) -> CostBreakdown:
        out = self.init_cost
        for r in self.rounds:
            out = out + r
        return out


def execute_algorithm(
    name: str,
    graph: SubstrateGraph,
    trace: RequestTrace,
    params: CostParams,
    seed: int,
) -> tuple[CostBreakdown, list[CostBreakdown], list[tuple[int, int]]]:
    """Run one algorithm and normalize its ledger.

    Offline schedules are charged the same initialization as online runs
    (one server created at the network center, or the static baseline's
    own placements), so totals are directly comparable.
    """
    if name in ALGORITHM_FACTORIES:
        run = run_online(graph, trace, params, name, seed=seed)
        counts = [
            (len(c.active), len(c.inactive)) for c in run.end_configs
        ]
        return run.init_cost, list(run.rounds), counts
    init = CostBreakdown(transition=params.create)
    if name == "optoff":
        schedule = optoff(graph, trace, params)
    elif name == "offbr":
        schedule = offbr(graph, trace, params)
    elif name == "offth":
        schedule = offth(graph, trace, params)
    elif name == "stat":
        return _execute_stat(graph, trace, params)
    else:
        raise ConfigError("algorithms", f"unknown algorithm {name!r}")
    counts = [(len(c.active), len(c.inactive)) for c in schedule.end_configs]
    return init, list(schedule.breakdowns), counts


def _execute_stat(graph, trace, params):
    result = stat(graph, trace, params)
    placed = frozenset(result.placement[: result.k_opt])
    config = Configuration(placed)
    ev = AccessEvaluator(graph, params.load_model)
    run = running_cost(config, params)
    rounds = []
    for demand in trace:
        origins = tuple(sorted(demand.origins))
        access = ev.access(origins, placed) if origins else 0.0
        rounds.append(CostBreakdown(access=access, running=run))
    init = CostBreakdown(transition=result.k_opt * params.create)
    counts = [(result.k_opt, 0)] * len(rounds)
    return init, rounds, counts


def _fmt(value: float) -> str:
    return repr(float(value))


@dataclass
class ExperimentResult:
    rows: list[tuple]
    summaries: list[tuple]
    output_path: Path | None
    summary_path: Path | None
    records: list[RunRecord]


_CONFIG_OUTPUT = object()  # sentinel: write wherever the config says


def run_experiment(config: ExperimentConfig,
                   output: str | Path | None = _CONFIG_OUTPUT) -> ExperimentResult:
    """Execute the full grid and write the per-round and summary CSVs.

    Pass output=None to keep the results in memory without writing files.
    """
    validate_config(config)
    sweep_values = list(config.sweep_values) if config.sweep != "none" else [None]
    params_base = config.cost_params()
    rows: list[tuple] = []
    summaries: list[tuple] = []
    records: list[RunRecord] = []

    for sweep_value in sweep_values:
        cell_config = apply_sweep(config, sweep_value)
        sweep_label = "" if sweep_value is None else str(sweep_value)
        for rep in range(config.repetitions):
            cell_seed = derive_seed(config.base_seed, sweep_label, rep)
            graph = build_graph(cell_config.graph, derive_seed(cell_seed, "graph"))
            trace = build_trace(
                graph, cell_config.scenario, cell_config.horizon,
                derive_seed(cell_seed, "trace"),
            )
            cell_records: list[RunRecord] = []
            for name in config.algorithms:
                run_id = f"{name}_{sweep_label or 'base'}_r{rep}"
                try:
                    init, round_costs, counts = execute_algorithm(
                        name, graph, trace, params_base,
                        derive_seed(cell_seed, "alg", name),
                    )
                except CapacityError as exc:
                    print(f"warning: {run_id}: {exc}", file=sys.stderr)
                    continue
                cell_records.append(RunRecord(
                    run_id=run_id, seed=cell_seed, sweep_value=sweep_value,
                    rep=rep, algorithm=name, init_cost=init,
                    rounds=round_costs, counts=counts,
                ))
            opt_total = next(
                (r.total for r in cell_records if r.algorithm == "optoff"), None
            )
            for record in cell_records:
                rows.extend(_round_rows(record, sweep_label))
                summaries.append(_summary_row(record, sweep_label, opt_total))
            records.extend(cell_records)

    if output is _CONFIG_OUTPUT:
        output = config.output or None
    output_path = Path(output) if output is not None else None
    summary_path = None
    if output_path is not None:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        summary_path = summary_path_for(output_path)
        _write_csv(output_path, ROW_HEADER, rows)
        _write_csv(summary_path, SUMMARY_HEADER, summaries)
    return ExperimentResult(rows, summaries, output_path, summary_path, records)


def summary_path_for(output_path: Path) -> Path:
    name = output_path.name
    if name.endswith(".csv"):
        name = name[: -len(".csv")]
    return output_path.with_name(name + ".summary.csv")


def _round_rows(record: RunRecord, sweep_label: str):
    """Per-round rows; round 0's transition folds in the initialization."""
    rows = []
    cumulative = 0.0
    for t, bd in enumerate(record.rounds):
        transition = bd.transition + (record.init_cost.total if t == 0 else 0.0)
        cumulative += bd.total + (record.init_cost.total if t == 0 else 0.0)
        active, inactive = record.counts[t]
        rows.append((
            record.run_id, str(record.seed), sweep_label, record.algorithm,
            str(t), _fmt(bd.access), _fmt(bd.running), _fmt(transition),
            _fmt(cumulative), str(active), str(inactive),
        ))
    return rows


def _summary_row(record: RunRecord, sweep_label: str, opt_total: float | None):
    bd = record.breakdown
    ratio = ""
    if opt_total is not None and opt_total > 0:
        ratio = _fmt(record.total / opt_total)
    final_active, final_inactive = record.counts[-1] if record.counts else (0, 0)
    return (
        record.run_id, str(record.seed), sweep_label, record.algorithm,
        str(len(record.rounds)), _fmt(bd.access), _fmt(bd.running),
        _fmt(bd.transition), _fmt(record.total),
        str(final_active), str(final_inactive), ratio,
    )


def _write_csv(path: Path, header, rows) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buffer.getvalue(), encoding="utf-8")


def ratio_rows(config: ExperimentConfig, algorithms: tuple[str, ...] | None = None):
    """Per-instance algorithm/optimal ratios plus means over repetitions.

    The baseline optimal offline run is added to each cell if missing.
    Cells where the optimal is infeasible are reported as absent.
    """
    wanted = tuple(algorithms) if algorithms else tuple(
        a for a in config.algorithms if a != "optoff"
    )
    run_list = tuple(dict.fromkeys(wanted + ("optoff",)))
    grid_config = replace(config, algorithms=run_list)
    result = run_experiment(grid_config, output=None)

    by_cell: dict[tuple, dict[str, RunRecord]] = {}
    for record in result.records:
        by_cell.setdefault((record.sweep_value, record.rep), {})[
            record.algorithm
        ] = record

    def cell_order(key):
        sweep_value, rep = key
        return (sweep_value is None, sweep_value if sweep_value is not None else 0,
                rep)

    per_rows = []
    grouped: dict[tuple, list[float]] = {}
    totals: dict[tuple, list[float]] = {}
    for (sweep_value, rep) in sorted(by_cell, key=cell_order):
        cell = by_cell[(sweep_value, rep)]
        opt = cell.get("optoff")
        if opt is None:
            continue
        for name in wanted:
            record = cell.get(name)
            if record is None:
                continue
            ratio = record.total / opt.total
            per_rows.append((
                "" if sweep_value is None else str(sweep_value),
                str(rep), str(record.seed), name, _fmt(record.total),
                _fmt(opt.total), _fmt(ratio),
            ))
            grouped.setdefault((sweep_value, name), []).append(ratio)
            totals.setdefault((sweep_value, name), []).append(record.total)

    def group_order(key):
        sweep_value, name = key
        return (sweep_value is None, sweep_value if sweep_value is not None else 0,
                name)

    mean_rows = []
    for (sweep_value, name) in sorted(grouped, key=group_order):
        ratios = grouped[(sweep_value, name)]
        std = statistics.stdev(ratios) if len(ratios) > 1 else 0.0
        mean_rows.append((
            "" if sweep_value is None else str(sweep_value),
            name, _fmt(statistics.mean(ratios)), _fmt(std),
            _fmt(statistics.mean(totals[(sweep_value, name)])), str(len(ratios)),
        ))
    return per_rows, mean_rows


def competitive_ratio(config: ExperimentConfig):
    """Algorithm total divided by the optimal offline total, per instance."""
    return ratio_rows(config)


def stat_vs_opt(config: ExperimentConfig):
    """Static-baseline total divided by the optimal offline total."""
    return ratio_rows(config, algorithms=("stat",))


def write_ratio_csv(path: str | Path, per_rows, mean_rows) -> tuple[Path, Path]:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mean_path = path.with_name(path.stem + ".mean.csv")
    _write_csv(path, RATIO_HEADER, per_rows)
    _write_csv(mean_path, RATIO_MEAN_HEADER, mean_rows)
    return path, mean_path


def _repo_root() -> Path:
    return Path(__file__).resolve().parents[2]


def preset_configs() -> dict[str, tuple[str, ExperimentConfig]]:
    """Built-in desk-scale experiment presets (name -> (description, config))."""
    lam_sweep = (1, 2, 5, 10, 20, 50, 100, 200)
    # per-hop latency and load chosen so that the tiny line topologies
    # still show the relative cost effects of full-size networks
    line5 = GraphSpec(kind="line", n=5, latency=15.0)
    commuter = ScenarioSpec(kind="commuter-dynamic", day_length=4, dwell=10)
    presets = {}

    presets["fig13-desk"] = (
        "STAT vs optimal offline on a 5-node line, commuter dynamic load, "
        "dwell sweep (beta < c)",
        ExperimentConfig(
            graph=replace(line5), scenario=replace(commuter),
            horizon=200, k_max=5, load="constant",
            algorithms=("optoff", "stat", "onth", "onbr-fixed", "onbr-dyn",
                        "offbr", "offth"),
            sweep="lambda", sweep_values=lam_sweep, repetitions=10,
            base_seed=13, output="fig13_desk.csv",
        ),
    )
    presets["fig12-desk"] = (
        "Same grid as fig13-desk with migration dearer than creation "
        "(beta=400, c=40)",
        ExperimentConfig(
            graph=replace(line5), scenario=replace(commuter),
            horizon=200, beta=400.0, create=40.0, k_max=5, load="constant",
            algorithms=("optoff", "stat", "onbr-fixed"),
            sweep="lambda", sweep_values=lam_sweep, repetitions=10,
            base_seed=12, output="fig12_desk.csv",
        ),
    )
    presets["fig8-desk"] = (
        "Competitive ratio of the two-threshold strategy on a 5-node line, "
        "dwell sweep",
        ExperimentConfig(
            graph=replace(line5), scenario=replace(commuter),
            horizon=200, k_max=5, load="constant",
            algorithms=("onth", "optoff"),
            sweep="lambda", sweep_values=lam_sweep, repetitions=10,
            base_seed=8, output="fig8_desk.csv",
        ),
    )
    presets["fig1-desk"] = (
        "Single two-threshold execution on a random graph for server-count "
        "trace plots",
        ExperimentConfig(
            graph=GraphSpec(kind="erdos", n=100, p=0.05),
            scenario=ScenarioSpec(kind="commuter-dynamic", day_length=0, dwell=20),
            horizon=300, k_max=10,
            algorithms=("onth",), repetitions=1,
            base_seed=1, output="fig1_desk.csv",
        ),
    )
    presets["fig3-desk"] = (
        "Online strategies vs network size, commuter dynamic load",
        ExperimentConfig(
            graph=GraphSpec(kind="erdos", n=100, p=0.05),
            scenario=ScenarioSpec(kind="commuter-dynamic", day_length=0, dwell=10),
            horizon=500, k_max=10,
            algorithms=("onth", "onbr-fixed", "onbr-dyn"),
            sweep="size", sweep_values=(100, 200), repetitions=5,
            base_seed=3, output="fig3_desk.csv",
        ),
    )
    presets["fig16-desk"] = (
        "Ingested ISP-style topology under the time-zone scenario",
        ExperimentConfig(
            graph=GraphSpec(kind="file", path=str(_repo_root() / "data" /
                                                  "isp_backbone.edges")),
            scenario=ScenarioSpec(kind="time-zone", periods=12, sojourn=20,
                                  hotspot_share=50.0, requests_per_round=3),
            horizon=600, k_max=10,
            algorithms=("stat", "onth", "onbr-fixed"),
            repetitions=5, base_seed=16, output="fig16_desk.csv",
        ),
    )
    presets["converge-desk"] = (
        "Constant demand on a 200-node random graph; online strategies must "
        "stabilize",
        ExperimentConfig(
            graph=GraphSpec(kind="erdos", n=200, p=0.01),
            scenario=ScenarioSpec(kind="time-zone", periods=1, sojourn=1,
                                  hotspot_share=100.0, requests_per_round=3),
            horizon=1000, k_max=10,
            algorithms=("onbr-fixed", "onth"),
            repetitions=5, base_seed=5, output="converge_desk.csv",
        ),
    )
    presets["smoke-desk"] = (
        "Tiny grid for quick end-to-end checks",
        ExperimentConfig(
            graph=replace(line5), scenario=replace(commuter),
            horizon=60, k_max=5, load="constant",
            algorithms=("optoff", "stat", "onth"),
            sweep="lambda", sweep_values=(1, 10), repetitions=2,
            base_seed=2, output="smoke_desk.csv",
        ),
    )
    return presets


def get_preset(name: str) -> ExperimentConfig:
    presets = preset_configs()
    if name not in presets:
        raise ConfigError("preset", f"unknown preset {name!r}; "
                                    f"known: {sorted(presets)}")
    return presets[name][1]
