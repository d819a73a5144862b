"""Report emission: delimited tables plus rendered figures.

Every report path writes machine-readable CSV and, alongside it, PNG
figures of the same data (best-bins trend across generations, per-bin
utilization profiles). Columns mirror the comparison-table layout:
method, average bins, average runtime, average utilization.
"""

from __future__ import annotations

import csv
import time
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .baselines import ALGORITHMS
from .metrics import bins_used, per_bin_utilization, total_utilization
from .model import Dataset
from .protocol import CandidateSpec, evaluate_on_dataset

REPORT_HEADER = ["method", "avg_bins", "avg_runtime_s", "avg_utilization"]


def evaluate_native(dataset: Dataset, algo_name: str):
    """Run a built-in algorithm across a dataset; returns (row, solutions)."""
    algo = ALGORITHMS[algo_name]
    bins, utils, runtimes, solutions = [], [], [], []
    for inst in dataset.instances:
        start = time.perf_counter()
        sol = algo(inst)
        runtimes.append(time.perf_counter() - start)
        bins.append(bins_used(sol))
        utils.append(total_utilization(inst, sol))
        solutions.append(sol)
    count = len(dataset.instances)
    row = {
        "method": algo_name.upper(),
        "avg_bins": sum(bins) / count,
        "avg_runtime_s": sum(runtimes) / count,
        "avg_utilization": sum(utils) / count,
    }
    return row, solutions


def profile_of(dataset: Dataset, solutions) -> list[float]:
    """Mean utilization at each bin position, averaged over instances."""
    by_position: list[list[float]] = []
    for inst, sol in zip(dataset.instances, solutions):
        for pos, util in enumerate(per_bin_utilization(inst, sol)):
            while len(by_position) <= pos:
                by_position.append([])
            by_position[pos].append(util)
    return [sum(vals) / len(vals) for vals in by_position]


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)


def _format_row(row: dict) -> list[str]:
    return [row["method"], f"{row['avg_bins']:.2f}",
            f"{row['avg_runtime_s']:.6f}", f"{row['avg_utilization']:.4f}"]


def render_table(rows: list[dict]) -> str:
    lines = [f"{'Method':<14}{'Avg Bins':>10}{'Avg Runtime (s)':>18}"
             f"{'Avg Utilization':>18}"]
    for row in rows:
        lines.append(f"{row['method']:<14}{row['avg_bins']:>10.2f}"
                     f"{row['avg_runtime_s']:>18.6f}"
                     f"{row['avg_utilization']:>18.4f}")
    return "\n".join(lines) + "\n"


def render_profile_figure(path: Path, profiles: dict[str, list[float]]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for method, profile in profiles.items():
        positions = range(1, len(profile) + 1)
        ax.plot(positions, profile, marker="o", label=method)
    ax.set_xlabel("bin position")
    ax.set_ylabel("mean utilization")
    ax.set_ylim(0, 1.05)
    ax.set_title("Utilization by bin position")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_trend_figure(path: Path, trend: list[float | None]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    gens = [g for g, b in enumerate(trend) if b is not None]
    vals = [b for b in trend if b is not None]
    ax.step(gens, vals, where="post", marker="o")
    ax.set_xlabel("generation")
    ax.set_ylabel("best average bins")
    ax.set_title("Best-so-far bin usage per generation")
    if gens:
        ax.set_xticks(range(len(trend)))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def emit_solve_report(dataset: Dataset, algo_name: str, report_path: str) -> dict:
    """Single-method report CSV plus its utilization profile figure."""
    row, solutions = evaluate_native(dataset, algo_name)
    path = Path(report_path)
    _write_csv(path, REPORT_HEADER, [_format_row(row)])
    profile = profile_of(dataset, solutions)
    render_profile_figure(path.with_suffix(".png"), {row["method"]: profile})
    return row


def emit_report(state, dataset: Dataset, run_dir) -> list[dict]:
    """Full run report: comparison table, trend, and utilization profiles."""
    run_dir = Path(run_dir)
    rows = []
    profiles: dict[str, list[float]] = {}
    for algo_name in ("fff", "hff"):
        row, solutions = evaluate_native(dataset, algo_name)
        rows.append(row)
        profiles[row["method"]] = profile_of(dataset, solutions)

    best = state.best_so_far
    if best is not None:
        rows.append({
            "method": "best-evolved",
            "avg_bins": best.score.bins_used,
            "avg_runtime_s": best.score.runtime_seconds,
            "avg_utilization": best.score.utilization,
        })
        evolved_profile = _evolved_profile(state, dataset)
        if evolved_profile:
            profiles["best-evolved"] = evolved_profile

    _write_csv(run_dir / "report.csv", REPORT_HEADER,
               [_format_row(r) for r in rows])

    trend = [gen.get("best_so_far_bins") for gen in state.generations]
    _write_csv(run_dir / "trend.csv", ["generation", "best_avg_bins"],
               [[g, "" if b is None else f"{b:.2f}"]
                for g, b in enumerate(trend)])

    profile_rows = []
    for method, profile in profiles.items():
        for pos, util in enumerate(profile):
            profile_rows.append([method, pos, f"{util:.4f}"])
    _write_csv(run_dir / "profile.csv",
               ["method", "bin_position", "mean_utilization"], profile_rows)

    render_trend_figure(run_dir / "trend.png", trend)
    render_profile_figure(run_dir / "profile.png", profiles)

    text = render_table(rows)
    if best is not None:
        final = best.score.bins_used
        first_gen = next((g for g, b in enumerate(trend)
                          if b is not None and b == final), None)
        text += (f"\nbest-evolved candidate: {best.id} "
                 f"(generation {best.generation})\n"
                 f"final best first achieved at generation: {first_gen}\n")
    (run_dir / "report.txt").write_text(text, encoding="utf-8")
    return rows


def _evolved_profile(state, dataset: Dataset) -> list[float] | None:
    """Re-run the winning candidate to recover its per-bin profile."""
    best = state.best_so_far
    source_path = Path(state.run_dir) / best.source_file
    if not source_path.exists():
        return None
    spec = CandidateSpec(
        id=f"report:{best.id}",
        launch=state.config.launch_command(str(source_path)),
        timeout_seconds=state.config.timeout_seconds)
    try:
        evaluation = evaluate_on_dataset(spec, dataset, jobs=state.config.jobs)
    except Exception:
        return None
    if evaluation.disqualified:
        return None
    solutions = [o.solution for o in evaluation.outcomes]
    return profile_of(dataset, solutions)
