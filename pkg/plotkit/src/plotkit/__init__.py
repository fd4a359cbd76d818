"""Batch figure rendering for simulation-harness CSV output."""

from .render import PlotError, PlotSpec, aggregate_series, read_rows, render

__all__ = ["PlotError", "PlotSpec", "aggregate_series", "read_rows", "render"]
