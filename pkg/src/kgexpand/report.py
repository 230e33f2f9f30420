"""Analysis-suite CSV emission and the summary report table.

The tidy metrics file has one row per (iteration, metric, subject, value)
where subject is either "global" or a node key. Histograms are (bin, count)
files. The summary table mirrors the 13-row schema used for end-of-run graph
comparisons, from "Number of nodes" through "Scale-free classification".
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from . import analytics, scalefree
from .core import KnowledgeGraph, Snapshot, SnapshotSeries, largest_component
from .errors import KgExpandError, UndefinedMetric

GLOBAL_METRICS = (
    "nodes", "edges", "avg_degree", "max_degree", "self_loops", "lcc_size",
    "avg_clustering", "modularity", "communities", "avg_spl_lcc", "diameter_lcc",
    "assortativity", "transitivity", "kcore_max", "kcore_size",
    "avg_betweenness_lcc", "articulation_points", "bridge_nodes",
    "newly_connected", "shortened_paths", "mean_betweenness", "max_betweenness",
    "mean_degree_lcc",
)

SUMMARY_ROWS = (
    "Number of nodes",
    "Number of edges",
    "Average degree",
    "Number of self-loops",
    "Average clustering coefficient",
    "Average shortest path length (LCC)",
    "Diameter (LCC)",
    "Modularity (Louvain)",
    "Log-likelihood ratio (LR)",
    "p-value",
    "Power-law exponent (α)",
    "Lower bound (x_min)",
    "Scale-free classification",
)


def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.12g}"
    return str(value)


def degree_sequence(g: KnowledgeGraph) -> list[int]:
    """Degrees on the undirected simple view, self-loops excluded."""
    und = g.undirected_view(self_loops=False)
    return [d for _, d in und.degree()]


@dataclass
class AnalyzeSeeds:
    louvain: int = 0
    sampling: int = 0


def analyze_series(series: SnapshotSeries, out_dir: str | Path,
                   seeds: AnalyzeSeeds | None = None, samples: int | None = 1000,
                   spl_samples: int = 2000, stride: int = 1) -> Path:
    """Run the full metric suite over a snapshot series and emit CSVs.

    Writes metrics.csv (tidy), scalefree.csv (per snapshot), spl_histogram.csv
    (final snapshot), bridge_persistence.csv and hub_emergence.csv. Returns
    the output directory. Deterministic given the seeds.
    """
    seeds = seeds or AnalyzeSeeds()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    picked = SnapshotSeries([s for i, s in enumerate(series) if i % stride == 0])

    bet = analytics.betweenness_timeseries(picked)
    bridges = analytics.bridge_analysis(picked, seeds.louvain)
    hubs = analytics.hub_emergence(picked)
    ledger = analytics.PairDistanceLedger(seed=seeds.sampling)

    rows: list[tuple] = []
    for idx, snap in enumerate(picked):
        it = snap.iteration
        g = snap.graph
        if g.node_count == 0:
            # leading snapshots can be empty when extraction failed early
            empty = {name: float("nan") for name in GLOBAL_METRICS}
            empty.update({"nodes": 0, "edges": 0, "self_loops": 0,
                          "lcc_size": 0, "bridge_nodes": 0,
                          "newly_connected": 0, "shortened_paths": 0})
            for name in GLOBAL_METRICS:
                rows.append((it, name, "global", _fmt(empty[name])))
            analytics.newly_connected_pairs(ledger, snap, samples)
            continue
        basic = analytics.basic_metrics(snap)
        lcc = largest_component(g, "undirected")
        lcc_und = lcc.undirected_view()
        avg_spl, diameter = analytics.spl_and_diameter(lcc_und)
        und = g.undirected_view()
        partition, q = analytics.louvain(und, seeds.louvain)
        try:
            assort = analytics.assortativity(und)
        except UndefinedMetric:
            assort = float("nan")
        kmax, ksize = analytics.kcore(und)
        lcc_bet = analytics.centralities(lcc_und).betweenness
        pair_stats = analytics.newly_connected_pairs(ledger, snap, samples)
        values = {
            "nodes": basic.nodes,
            "edges": basic.edges,
            "avg_degree": basic.avg_degree,
            "max_degree": basic.max_degree,
            "self_loops": basic.self_loops,
            "lcc_size": basic.lcc_size,
            "avg_clustering": basic.avg_clustering,
            "modularity": q,
            "communities": len(set(partition.values())),
            "avg_spl_lcc": avg_spl,
            "diameter_lcc": diameter,
            "assortativity": assort,
            "transitivity": analytics.transitivity(und),
            "kcore_max": kmax,
            "kcore_size": ksize,
            "avg_betweenness_lcc": sum(lcc_bet.values()) / len(lcc_bet),
            "articulation_points": len(analytics.articulation_points(und)),
            "bridge_nodes": len(bridges.bridge_sets[it]),
            "newly_connected": pair_stats.newly_connected,
            "shortened_paths": pair_stats.shortened,
            "mean_betweenness": bet.mean[idx],
            "max_betweenness": bet.max[idx],
            "mean_degree_lcc": hubs.mean_degree[it],
        }
        for name in GLOBAL_METRICS:
            rows.append((it, name, "global", _fmt(values[name])))
        for col, node in enumerate(bet.nodes):
            rows.append((it, "betweenness", node, _fmt(bet.values[idx][col])))
    for hub, trajectory in hubs.trajectories.items():
        for it, deg in trajectory.items():
            rows.append((it, "hub_degree", hub, _fmt(deg)))
    for row_idx, node in enumerate(bridges.presence_nodes):
        for col_idx, it in enumerate(bridges.presence_iterations):
            rows.append((it, "bridge_presence", node,
                         _fmt(int(bridges.presence[row_idx][col_idx]))))
    # final-snapshot centrality distributions (plot-ready per-node values)
    final_it = picked.final.iteration
    if picked.final.graph.node_count:
        final_table = analytics.centralities(picked.final.graph.undirected_view())
        for node in sorted(final_table.closeness):
            rows.append((final_it, "closeness", node,
                         _fmt(final_table.closeness[node])))
        if final_table.eigenvector is not None:
            for node in sorted(final_table.eigenvector):
                rows.append((final_it, "eigenvector", node,
                             _fmt(final_table.eigenvector[node])))

    with open(out / "metrics.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "metric", "subject", "value"])
        writer.writerows(rows)

    with open(out / "scalefree.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "alpha", "xmin", "n_tail", "lr", "p", "verdict"])
        for snap in picked:
            try:
                fit, verdict = scalefree.classify(degree_sequence(snap.graph))
                writer.writerow([snap.iteration, _fmt(fit.alpha), fit.xmin,
                                 fit.n_tail, _fmt(verdict.lr), _fmt(verdict.p),
                                 "yes" if verdict.is_scale_free else "no"])
            except KgExpandError as exc:
                writer.writerow([snap.iteration, "nan", "nan", "nan", "nan", "nan",
                                 type(exc).__name__])

    final_und = picked.final.graph.undirected_view()
    if final_und.number_of_nodes():
        dist = analytics.sampled_spl_distribution(final_und, spl_samples,
                                                  seeds.sampling)
        histogram = dist.histogram
    else:
        histogram = {}
    with open(out / "spl_histogram.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin", "count"])
        for length, count in histogram.items():
            writer.writerow([length, count])

    degree_counts: dict[int, int] = {}
    for d in degree_sequence(picked.final.graph):
        degree_counts[d] = degree_counts.get(d, 0) + 1
    with open(out / "degree_histogram.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin", "count"])
        for degree in sorted(degree_counts):
            writer.writerow([degree, degree_counts[degree]])

    with open(out / "bridge_persistence.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "persistence"])
        for node in sorted(bridges.persistence):
            writer.writerow([node, bridges.persistence[node]])

    with open(out / "hub_emergence.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "t_emerge"])
        for node in sorted(hubs.t_emerge):
            writer.writerow([node, hubs.t_emerge[node]])

    (out / "analysis_manifest.json").write_text(json.dumps({
        "seeds": {"louvain": seeds.louvain, "sampling": seeds.sampling},
        "samples": samples,
        "spl_samples": spl_samples,
        "stride": stride,
        "iterations": [s.iteration for s in picked],
    }, indent=2, sort_keys=True) + "\n")

    return out


# ---------------------------------------------------------------------------
# summary table


def summarize_snapshot(snap: Snapshot, louvain_seed: int = 0) -> dict[str, str]:
    """Values for the 13 summary rows, computed on one snapshot."""
    g = snap.graph
    basic = analytics.basic_metrics(snap)
    lcc_und = largest_component(g, "undirected").undirected_view()
    avg_spl, diameter = analytics.spl_and_diameter(lcc_und)
    _, q = analytics.louvain(g.undirected_view(), louvain_seed)
    try:
        fit, verdict = scalefree.classify(degree_sequence(g))
        lr, p = f"{verdict.lr:.4f}", f"{verdict.p:.4f}"
        alpha, xmin = f"{fit.alpha:.4f}", f"{float(fit.xmin):.1f}"
        classification = "Yes" if verdict.is_scale_free else "No"
    except KgExpandError:
        lr = p = alpha = xmin = "n/a"
        classification = "No"
    return {
        "Number of nodes": str(basic.nodes),
        "Number of edges": str(basic.edges),
        "Average degree": f"{basic.avg_degree:.4f}",
        "Number of self-loops": str(basic.self_loops),
        "Average clustering coefficient": f"{basic.avg_clustering:.4f}",
        "Average shortest path length (LCC)": f"{avg_spl:.4f}",
        "Diameter (LCC)": str(diameter),
        "Modularity (Louvain)": f"{q:.4f}",
        "Log-likelihood ratio (LR)": lr,
        "p-value": p,
        "Power-law exponent (α)": alpha,
        "Lower bound (x_min)": xmin,
        "Scale-free classification": classification,
    }


def summary_markdown(values: dict[str, str], title: str = "Graph") -> str:
    lines = [f"| Metric | {title} |", "| --- | --- |"]
    for row in SUMMARY_ROWS:
        lines.append(f"| {row} | {values[row]} |")
    return "\n".join(lines) + "\n"


@dataclass
class ReportBundle:
    report_path: Path
    summary_csv: Path
    manifest_path: Path


def build_report(series: SnapshotSeries, out_dir: str | Path,
                 louvain_seed: int = 0,
                 run_dir: str | Path | None = None,
                 analysis_dir: str | Path | None = None,
                 paths_dir: str | Path | None = None) -> ReportBundle:
    """Write the summary table (markdown + CSV) and a bundle manifest.

    The bundle manifest references the run manifest and any analysis CSVs and
    path reports found in the given directories, so one file indexes
    everything needed to reproduce and read the experiment.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    values = summarize_snapshot(series.final, louvain_seed)
    report_path = out / "report.md"
    report_path.write_text(
        "# Knowledge Graph Summary\n\n"
        f"Final snapshot: iteration {series.final.iteration}\n\n"
        + summary_markdown(values))
    summary_csv = out / "summary.csv"
    with open(summary_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        for row in SUMMARY_ROWS:
            writer.writerow([row, values[row]])

    def _listing(directory, patterns):
        if directory is None:
            return []
        directory = Path(directory)
        found: list[str] = []
        for pattern in patterns:
            found.extend(str(p) for p in sorted(directory.glob(pattern)))
        return found

    manifest_path = out / "report_bundle.json"
    manifest_path.write_text(json.dumps({
        "final_iteration": series.final.iteration,
        "snapshots": len(series),
        "louvain_seed": louvain_seed,
        "report_files": ["report.md", "summary.csv"],
        "run_manifest": _listing(run_dir, ["manifest.json"]),
        "metrics_csvs": _listing(analysis_dir, ["*.csv", "*.json"]),
        "path_reports": _listing(paths_dir, ["*.md", "*.graphml", "*.csv"]),
    }, indent=2, sort_keys=True) + "\n")
    return ReportBundle(report_path, summary_csv, manifest_path)
