"""Report figures: training profiles with seed bands and a travel-time/CO2 scatter.

Figures are written to files only (Agg backend); nothing here is needed for
the numeric results, which live in the CSV files.
"""

import re
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import is_metrics_csv, read_csv, read_table  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

PROFILE_METRICS = (
    ("travel_time_s", "Travel time (s)"),
    ("co2_g_per_step", "CO2 (g / step)"),
    ("waiting_s", "Waiting time (s)"),
    ("reward", "Reward"),
)

_SEED_SUFFIX = re.compile(r"[_-]seed\d+$")


def figsize(width: float = 6.0, ratio: float = GOLDEN):
    return (width, width * ratio)


def smooth(x, window: int):
    """Trailing moving average; the first samples average what is available."""
    x = np.asarray(x, dtype=float)
    if window <= 1 or len(x) == 0:
        return x
    c = np.cumsum(np.insert(x, 0, 0.0))
    n = np.arange(1, len(x) + 1)
    lo = np.maximum(0, n - window)
    return (c[n] - c[lo]) / (n - lo)


def profile_band(series: list[np.ndarray]):
    """(median, low, high) across seeds, truncated to the shortest series."""
    n = min(len(s) for s in series)
    stack = np.vstack([s[:n] for s in series])
    return np.median(stack, axis=0), stack.min(axis=0), stack.max(axis=0)


def group_runs(paths) -> dict[str, list[Path]]:
    """Group metrics files by label, where ``<label>_seed<N>.csv`` share a label."""
    groups = defaultdict(list)
    for p in sorted(Path(x) for x in paths):
        label = _SEED_SUFFIX.sub("", p.stem)
        if label == "metrics":
            label = p.parent.name or label
        groups[label].append(p)
    return dict(groups)


def plot_profiles(groups: dict[str, list], out_dir, window: int = 100) -> list[Path]:
    """One figure per metric; each group is a median line with a min/max band when it has several seeds.

    ``groups`` maps a label to a list of record lists (one per seed).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    with plt.rc_context(STYLE):
        for name, title in PROFILE_METRICS:
            fig, ax = plt.subplots(figsize=figsize())
            for label, runs in groups.items():
                series = [smooth([getattr(r, name) for r in recs], window) for recs in runs if recs]
                if not series:
                    continue
                med, lo, hi = profile_band(series)
                steps = np.arange(len(med))
                line, = ax.plot(steps, med, label=label)
                if len(series) > 1:
                    ax.fill_between(steps, lo, hi, color=line.get_color(), alpha=0.2, linewidth=0)
            ax.set_xlabel("Control step")
            ax.set_ylabel(title)
            if len(groups) > 1:
                ax.legend(frameon=False)
            path = out_dir / f"profile_{name}.png"
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    return written


def plot_scatter(rows: list[dict], out_path) -> Path:
    """Tail travel time against tail CO2, one marker per scheme, fixed-time marked per mix ratio."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    rows = [r for r in rows if r.get("status", "ok") == "ok"
            and r.get("travel_time_s") is not None and r.get("co2_g_per_step") is not None]
    markers = {"unweighted": "o", "constant": "^", "lane": "s", "adaptive": "D"}
    mixes = sorted({r["mix_ratio"] for r in rows})
    colors = dict(zip(mixes, plt.get_cmap("viridis")(np.linspace(0.1, 0.8, max(1, len(mixes))))))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize(5.0, 0.8))
        for r in rows:
            c = colors[r["mix_ratio"]]
            if r["agent"] == "uniform":
                ax.scatter(r["travel_time_s"], r["co2_g_per_step"], marker="X", s=60, color=c,
                           edgecolor="k", linewidth=0.5, zorder=3)
                ax.annotate(f"fixed-time {round(r['mix_ratio'] * 100)}%",
                            (r["travel_time_s"], r["co2_g_per_step"]),
                            textcoords="offset points", xytext=(4, 4), fontsize=7)
            else:
                ax.scatter(r["travel_time_s"], r["co2_g_per_step"], color=c,
                           marker=markers.get(r["scheme"], "o"), s=20)
        for scheme, m in markers.items():
            if any(r["scheme"] == scheme and r["agent"] != "uniform" for r in rows):
                ax.scatter([], [], marker=m, color="0.4", label=scheme)
        for mix, c in colors.items():
            ax.scatter([], [], marker="s", color=c, label=f"mix {round(mix * 100)}%")
        ax.set_xlabel("Tail travel time (s)")
        ax.set_ylabel("Tail CO2 (g / step)")
        ax.legend(frameon=False)
        fig.savefig(out_path)
        plt.close(fig)
    return out_path


def emit_plots(in_dir, out_dir, window: int = 100) -> list[Path]:
    """Render every figure the contents of ``in_dir`` support.

    Metrics CSVs anywhere below ``in_dir`` give the profile figures; a
    ``summary.csv`` from a comparison sweep adds the scatter.
    """
    in_dir = Path(in_dir)
    paths = [p for p in in_dir.rglob("*.csv") if is_metrics_csv(p)]
    if not paths:
        raise FileNotFoundError(f"no metrics CSV files under {in_dir}")
    groups = {label: [read_csv(p) for p in ps] for label, ps in group_runs(paths).items()}
    written = plot_profiles(groups, out_dir, window)
    summary = in_dir / "summary.csv"
    if summary.exists():
        written.append(plot_scatter(read_table(summary), Path(out_dir) / "scatter_tt_co2.png"))
    return written
