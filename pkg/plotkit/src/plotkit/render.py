"""Figure rendering from experiment CSVs.

Three figure kinds, all driven by column names so the tool stays agnostic
to which experiment produced the file:

  cost-curve   one line per series value; y is averaged per x position
  ratio-curve  same, defaulting to the ratio column of ratio tables
  trace        one line per series value with no aggregation (per-round data)

The only computation applied to the data is grouping and column averaging;
anything drawn must match the producing harness's own summaries.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class PlotError(Exception):
    """Bad plot specification or unusable input data."""


# kind -> (x column, y column, series column)
KIND_DEFAULTS = {
    "cost-curve": ("sweep_value", "total", "algorithm"),
    "ratio-curve": ("sweep_value", "ratio", "algorithm"),
    "trace": ("round", "active_count", "run_id"),
}


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[str, ...]
    kind: str
    output: str
    x: str = ""
    y: str = ""
    series: str = ""
    title: str = ""

    def __post_init__(self):
        if self.kind not in KIND_DEFAULTS:
            raise PlotError(
                f"unknown figure kind {self.kind!r}; choose from "
                f"{sorted(KIND_DEFAULTS)}"
            )
        if not self.inputs:
            raise PlotError("at least one input CSV is required")

    def columns(self) -> tuple[str, str, str]:
        dx, dy, ds = KIND_DEFAULTS[self.kind]
        return self.x or dx, self.y or dy, self.series or ds


SOURCE_COLUMN = "__source"


def read_rows(paths) -> list[dict]:
    """Rows of all input CSVs; each row remembers its file stem.

    With several inputs the file stem joins the series label, so e.g. the
    same algorithm from two cost regimes plots as two series.
    """
    rows: list[dict] = []
    for path in paths:
        path = Path(path)
        if not path.exists():
            raise PlotError(f"input file {path} does not exist")
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise PlotError(f"{path}: empty file")
            for row in reader:
                row[SOURCE_COLUMN] = path.stem
                rows.append(row)
    return rows


def _require_columns(rows, columns, where: str) -> None:
    for row in rows[:1]:
        for column in columns:
            if column not in row:
                raise PlotError(f"column {column!r} not present in {where}")


def _as_number(text: str):
    try:
        return float(text)
    except ValueError:
        return None


def aggregate_series(rows, x: str, y: str, series: str, *, mean: bool):
    """Group rows into plottable series: {series value: (xs, ys)}.

    With mean=True the y values are averaged per x position (curve kinds);
    otherwise every row contributes one point (trace kind). Points are
    ordered by numeric x where possible, by string otherwise.
    """
    if not rows:
        raise PlotError("no data rows selected")
    _require_columns(rows, (x, y, series), "the input CSV")
    sources = {row.get(SOURCE_COLUMN, "") for row in rows}
    multi_source = len(sources) > 1
    grouped: dict[str, dict] = {}
    for row in rows:
        label = row[series]
        if multi_source:
            label = f"{row[SOURCE_COLUMN]}:{label}"
        y_value = _as_number(row[y])
        if y_value is None:
            raise PlotError(f"column {y!r} holds non-numeric value {row[y]!r}")
        bucket = grouped.setdefault(label, {})
        bucket.setdefault(row[x], []).append(y_value)

    def x_order(value: str):
        number = _as_number(value)
        return (0, number, "") if number is not None else (1, 0.0, value)

    out = {}
    for label, buckets in sorted(grouped.items()):
        xs, ys = [], []
        for x_value in sorted(buckets, key=x_order):
            values = buckets[x_value]
            if mean:
                xs.append(x_value)
                ys.append(sum(values) / len(values))
            else:
                xs.extend([x_value] * len(values))
                ys.extend(values)
        out[label] = (xs, ys)
    return out


def render(spec: PlotSpec) -> Path:
    """Render the figure described by the spec; returns the image path."""
    x, y, series = spec.columns()
    rows = read_rows(spec.inputs)
    data = aggregate_series(rows, x, y, series, mean=spec.kind != "trace")

    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=120)
    for label, (xs, ys) in data.items():
        numeric = [_as_number(v) for v in xs]
        if all(v is not None for v in numeric):
            ax.plot(numeric, ys, marker="o", markersize=3, label=label)
        else:
            ax.plot(range(len(xs)), ys, marker="o", markersize=3, label=label)
            ax.set_xticks(range(len(xs)), xs)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    if len(data) > 1 or spec.kind != "trace":
        ax.legend(fontsize=8)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Software": None})
    plt.close(fig)
    return out
