"""plotkit command line: render figures from experiment CSVs.

Usage:
    plotkit <spec file>
    plotkit --input results.csv --kind trace --output trace.png
    plotkit spec.txt --output override.png

A spec file holds `key = value` lines (`#` comments) with the keys
input, kind, x, y, series, output, title. `input` accepts a comma list.
Flags override spec-file values.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PlotError, PlotSpec, render

SPEC_KEYS = ("input", "kind", "x", "y", "series", "output", "title")


def parse_spec_file(path: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PlotError(f"{path}:{lineno}: expected `key = value`")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in SPEC_KEYS:
            raise PlotError(f"{path}:{lineno}: unknown key {key!r}")
        mapping[key] = value.strip()
    return mapping


def spec_from_mapping(mapping: dict[str, str]) -> PlotSpec:
    if "input" not in mapping:
        raise PlotError("an input CSV is required (key or flag `input`)")
    if "kind" not in mapping:
        raise PlotError("a figure kind is required (key or flag `kind`)")
    inputs = tuple(p.strip() for p in mapping["input"].split(",") if p.strip())
    return PlotSpec(
        inputs=inputs,
        kind=mapping["kind"],
        output=mapping.get("output", "plot.png"),
        x=mapping.get("x", ""),
        y=mapping.get("y", ""),
        series=mapping.get("series", ""),
        title=mapping.get("title", ""),
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="Render figures from experiment CSVs"
    )
    parser.add_argument("spec_file", nargs="?", help="key = value spec file")
    for key in SPEC_KEYS:
        parser.add_argument(f"--{key}", default=None, metavar="V")
    args = parser.parse_args(argv)
    try:
        mapping = parse_spec_file(args.spec_file) if args.spec_file else {}
        for key in SPEC_KEYS:
            value = getattr(args, key)
            if value is not None:
                mapping[key] = value
        out = render(spec_from_mapping(mapping))
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
