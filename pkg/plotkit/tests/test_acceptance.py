"""Secondary acceptance: render the upstream experiment outputs.

Generates real harness CSVs by invoking the simulator CLI (the only
interface plotkit depends on), renders the ratio-curve and trace figures,
and checks that every aggregate plotkit draws equals the harness's own
mean tables to within 1e-9.
"""

import csv
import subprocess
import sys

import pytest

from plotkit import PlotSpec, aggregate_series, read_rows, render


def run_cli(args):
    result = subprocess.run(
        [sys.executable, "-m", "dynplace.cli", *args],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    return result.stdout


@pytest.fixture(scope="module")
def ratio_outputs(tmp_path_factory):
    """Criterion-3 pipeline: the stat-vs-optimal ratio table of fig13-desk."""
    out_dir = tmp_path_factory.mktemp("ratio")
    out = out_dir / "fig13_ratios.csv"
    run_cli(["ratio", "--preset", "fig13-desk", "--kind", "stat-vs-opt",
             "--out", str(out)])
    return out, out_dir / "fig13_ratios.mean.csv"


@pytest.fixture(scope="module")
def converge_outputs(tmp_path_factory):
    """Criterion-5 pipeline: per-round rows of the convergence preset."""
    out_dir = tmp_path_factory.mktemp("trace")
    out = out_dir / "converge.csv"
    run_cli(["run", "--preset", "converge-desk", "--out", str(out)])
    return out


def test_criterion_10_ratio_curve_matches_harness_means(ratio_outputs, tmp_path):
    ratio_csv, mean_csv = ratio_outputs
    image = render(PlotSpec(inputs=(str(ratio_csv),), kind="ratio-curve",
                            output=str(tmp_path / "fig13_ratio.png")))
    assert image.exists() and image.stat().st_size > 0

    drawn = aggregate_series(read_rows([ratio_csv]), "sweep_value", "ratio",
                             "algorithm", mean=True)
    with open(mean_csv, newline="") as handle:
        harness_means = {
            (row["sweep_value"], row["algorithm"]): float(row["mean_ratio"])
            for row in csv.DictReader(handle)
        }
    checked = 0
    for algorithm, (xs, ys) in drawn.items():
        for x_value, y_value in zip(xs, ys):
            want = harness_means[(x_value, algorithm)]
            assert abs(y_value - want) <= 1e-9
            checked += 1
    print(f"[acceptance] criterion 10 ratio-curve: PASS "
          f"({checked} plotted means match harness summaries)")
    assert checked == len(harness_means)


def test_criterion_10_trace_renders(converge_outputs, tmp_path):
    image = render(PlotSpec(inputs=(str(converge_outputs),), kind="trace",
                            output=str(tmp_path / "converge_trace.png")))
    passed = image.exists() and image.stat().st_size > 0
    print(f"[acceptance] criterion 10 trace: {'PASS' if passed else 'FAIL'}")
    assert passed


def test_server_count_trace_of_single_run(tmp_path):
    out = tmp_path / "fig1.csv"
    run_cli(["run", "--preset", "fig1-desk", "--out", str(out)])
    image = render(PlotSpec(inputs=(str(out),), kind="trace",
                            output=str(tmp_path / "fig1_trace.png")))
    assert image.exists() and image.stat().st_size > 0


def test_criterion_10_cost_curve_matches_summary_totals(ratio_outputs, tmp_path):
    ratio_csv, mean_csv = ratio_outputs
    drawn = aggregate_series(read_rows([ratio_csv]), "sweep_value", "total",
                             "algorithm", mean=True)
    with open(mean_csv, newline="") as handle:
        harness_means = {
            (row["sweep_value"], row["algorithm"]): float(row["mean_total"])
            for row in csv.DictReader(handle)
        }
    for algorithm, (xs, ys) in drawn.items():
        for x_value, y_value in zip(xs, ys):
            assert abs(y_value - harness_means[(x_value, algorithm)]) <= 1e-9
    image = render(PlotSpec(inputs=(str(ratio_csv),), kind="cost-curve",
                            output=str(tmp_path / "totals.png")))
    assert image.exists()
