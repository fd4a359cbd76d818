"""Command-line entry point.

Subcommands:
  generate  write a graph edge list or a request trace to a file
  run       execute an experiment (config file, preset, or flags)
  sweep     like run, but requires a sweep variable
  ratio     competitive / static-vs-optimal ratio tables
  presets   list the built-in desk-scale presets

Every configuration key can be given as a flag of the same name
(e.g. --graph.n 5 --scenario.dwell 10 --horizon 200).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DynplaceError
from .harness import (
    CONFIG_KEYS,
    ExperimentConfig,
    apply_sweep,
    build_graph,
    build_trace,
    competitive_ratio,
    config_from_mapping,
    config_to_text,
    derive_seed,
    get_preset,
    load_config,
    preset_configs,
    ratio_rows,
    run_experiment,
    stat_vs_opt,
    write_ratio_csv,
)
from .substrate import serialize_edge_list
from .workload import save_trace


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    for key in CONFIG_KEYS:
        parser.add_argument(f"--{key}", dest=_dest(key), metavar="V", default=None)


def _dest(key: str) -> str:
    return "cfg_" + key.replace(".", "__")


def _collect_overrides(args: argparse.Namespace) -> dict[str, str]:
    overrides = {}
    for key in CONFIG_KEYS:
        value = getattr(args, _dest(key), None)
        if value is not None:
            overrides[key] = value
    return overrides


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = _collect_overrides(args)
    if getattr(args, "preset", None):
        base = get_preset(args.preset)
        return config_from_mapping(overrides, base=base)
    if getattr(args, "config", None):
        return load_config(args.config, overrides)
    return config_from_mapping(overrides)


def cmd_generate(args) -> int:
    config = _resolve_config(args)
    cell_seed = derive_seed(config.base_seed, "", 0)
    cell = apply_sweep(config, None)
    graph = build_graph(cell.graph, derive_seed(cell_seed, "graph"))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.artifact == "graph":
        out.write_text(serialize_edge_list(graph), encoding="utf-8")
    else:
        trace = build_trace(graph, cell.scenario, cell.horizon,
                            derive_seed(cell_seed, "trace"))
        with open(out, "w", encoding="utf-8") as handle:
            save_trace(trace, handle)
    print(out)
    return 0


def cmd_run(args, require_sweep: bool = False) -> int:
    config = _resolve_config(args)
    if require_sweep and config.sweep == "none":
        print("error: sweep: a sweep variable is required for `sweep`",
              file=sys.stderr)
        return 2
    result = run_experiment(config, output=args.out or config.output)
    print(result.output_path)
    print(result.summary_path)
    return 0


def cmd_ratio(args) -> int:
    config = _resolve_config(args)
    if args.kind == "stat-vs-opt":
        per_rows, mean_rows = stat_vs_opt(config)
    elif args.kind == "competitive":
        per_rows, mean_rows = competitive_ratio(config)
    else:
        per_rows, mean_rows = ratio_rows(config, algorithms=tuple(args.kind.split(",")))
    out = args.out or "ratios.csv"
    path, mean_path = write_ratio_csv(out, per_rows, mean_rows)
    print(path)
    print(mean_path)
    return 0


def cmd_presets(args) -> int:
    presets = preset_configs()
    if args.show:
        config = get_preset(args.show)
        print(config_to_text(config), end="")
        return 0
    width = max(len(name) for name in presets)
    for name, (description, _) in sorted(presets.items()):
        print(f"{name:<{width}}  {description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynplace",
        description="Round-based simulator for dynamic server placement",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a graph or trace file")
    gen.add_argument("artifact", choices=("graph", "trace"))
    gen.add_argument("--out", required=True)
    gen.add_argument("--preset")
    gen.add_argument("--config")
    _add_config_flags(gen)
    gen.set_defaults(func=cmd_generate)

    for name, require_sweep in (("run", False), ("sweep", True)):
        cmd = sub.add_parser(name, help="execute an experiment grid")
        cmd.add_argument("--preset")
        cmd.add_argument("--config")
        cmd.add_argument("--out")
        _add_config_flags(cmd)
        cmd.set_defaults(func=lambda a, rs=require_sweep: cmd_run(a, rs))

    ratio = sub.add_parser("ratio", help="ratio tables against the optimal offline")
    ratio.add_argument("--kind", default="competitive",
                       help="competitive | stat-vs-opt | comma list of algorithms")
    ratio.add_argument("--preset")
    ratio.add_argument("--config")
    ratio.add_argument("--out")
    _add_config_flags(ratio)
    ratio.set_defaults(func=cmd_ratio)

    pre = sub.add_parser("presets", help="list built-in presets")
    pre.add_argument("--show", metavar="NAME")
    pre.set_defaults(func=cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DynplaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
