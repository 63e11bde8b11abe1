"""Figure rendering for experiment reports.

One PNG per run, written next to the CSV output.  Uses the Agg backend so
runs are headless-safe.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, outdir: Path, name: str) -> Path:
    path = Path(outdir) / name
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _plot_born(metrics, csv_tables, outdir):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    p_exact, p_hat = metrics["p_exact"], metrics["p_hat"]
    ax.bar(["exact", "sampled"], [p_exact, p_hat], color=["#4878cf", "#ee854a"])
    ax.errorbar([1], [p_hat], yerr=[3 * metrics["stderr"]], fmt="none",
                ecolor="black", capsize=4)
    ax.set_ylabel("probability")
    ax.set_title("Arc probability vs Monte Carlo frequency")
    return _save(fig, outdir, "born.png")


def _plot_dynamics(metrics, csv_tables, outdir):
    header, rows = csv_tables["trajectory.csv"]
    ts = [r[0] for r in rows]
    e_idx = header.index("expect_A")
    d_idx = header.index("ray_distance_to_t0")
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    ax1.plot(ts, [r[e_idx] for r in rows])
    ax1.set_ylabel("expect_A")
    ax2.plot(ts, [r[d_idx] for r in rows], color="#d65f5f")
    ax2.set_ylabel("ray distance to start")
    ax2.set_xlabel("t")
    ax1.set_title("Flow trajectory")
    return _save(fig, outdir, "dynamics.png")


def _plot_uncertainty(metrics, csv_tables, outdir):
    _, rows = csv_tables["uncertainty.csv"]
    lhs = [r[1] for r in rows]
    rhs = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.scatter(rhs, lhs, s=12, alpha=0.6)
    top = max(max(lhs), max(rhs), 1e-12)
    ax.plot([0, top], [0, top], "k--", lw=1)
    ax.set_xlabel("bound")
    ax.set_ylabel("dispersion product")
    ax.set_title("Uncertainty relation (points above the diagonal)")
    return _save(fig, outdir, "uncertainty.png")


def _plot_generic(name):
    def plot(metrics, csv_tables, outdir):
        fig, ax = plt.subplots(figsize=(5, 3))
        lines = [f"{k}: {v}" for k, v in metrics.items() if not isinstance(v, dict)]
        ax.axis("off")
        ax.text(0.02, 0.95, "\n".join([name] + lines[:10]), va="top",
                family="monospace", fontsize=9)
        return _save(fig, outdir, f"{name}.png")

    return plot


PLOTTERS = {
    "born": _plot_born,
    "dynamics": _plot_dynamics,
    "uncertainty": _plot_uncertainty,
    "context": _plot_generic("context"),
    "partition": _plot_generic("partition"),
    "independence": _plot_generic("independence"),
    "frame": _plot_generic("frame"),
    "factorize": _plot_generic("factorize"),
}


def render(kind: str, metrics: dict, csv_tables: dict, outdir) -> Path:
    return PLOTTERS[kind](metrics, csv_tables, Path(outdir))
