"""Weight-grid tuning and weighted-vs-unweighted comparison sweeps.

Runs are independent, so both sweeps fan out over a process pool whose size
is capped by the ECOLIGHT_THREADS environment variable. Results are merged by
config hash, which keeps the outcome independent of completion order.
"""

import logging
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..reward.weights import CONSTANT, TUNED_WEIGHTS, UNWEIGHTED
from .config import ScenarioConfig
from .metrics import METRIC_FIELDS
from .runner import run_episode

log = logging.getLogger(__name__)

THREADS_ENV = "ECOLIGHT_THREADS"
FIXED_TIME = "uniform"
# rows of the formatted comparison table
TABLE_METRICS = (
    ("travel_time_s", "Travel time"),
    ("co2_g_per_step", "CO2 emission"),
    ("waiting_s", "Waiting time"),
    ("stopped_s", "Stopped time"),
)


def max_workers(n_jobs: int) -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        cap = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


@dataclass
class RunOutcome:
    config: ScenarioConfig
    tail: dict[str, float] = field(default_factory=dict)
    records: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _run_one(config: ScenarioConfig) -> RunOutcome:
    try:
        res = run_episode(config)
    except Exception as exc:  # a failed run marks its cell, the sweep carries on
        log.warning("run %s failed: %s", config.hash(), exc)
        return RunOutcome(config, error=f"{type(exc).__name__}: {exc}")
    return RunOutcome(config, res.tail, res.records)


def run_many(configs, keep_records: bool = True) -> dict[str, RunOutcome]:
    """Run every config (in parallel when allowed) and key the outcomes by config hash."""
    configs = list(configs)
    workers = max_workers(len(configs))
    if workers <= 1:
        outcomes = [_run_one(c) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one, configs))
    out = {}
    for o in outcomes:
        if not keep_records:
            o.records = []
        out[o.config.hash()] = o
    return out


def perturbations(w=TUNED_WEIGHTS) -> list[tuple[float, ...]]:
    """The optimum and three perturbed triples used for the robustness sweep."""
    cases = [(1.0, 0.0), (1.1, -0.1), (0.9, 0.1), (1.7, -0.7)]
    return [tuple(round(a * x + b, 10) for x in w) for a, b in cases]


def tune_weights(grid, scenarios, config: ScenarioConfig = ScenarioConfig()):
    """CO2 of the SARSA waiting-time agent for each weight triple over each scenario.

    ``scenarios`` are per-section override dicts for ``config.with_``.
    Returns ``(ranked_rows, argmin)`` where rows are ranked by the mean tail
    CO2 across scenarios; triples with a failed run rank last.
    """
    grid = [tuple(float(x) for x in w) for w in grid]
    if not grid:
        raise ValueError("weight grid is empty")
    scenarios = list(scenarios) or [{}]
    base = config.with_(agent={"controller": "sarsa"}, reward={"kind": "waiting"})
    jobs = {}
    for w in grid:
        for i, sc in enumerate(scenarios):
            cfg = base.with_(**sc).with_(weights={"scheme": CONSTANT, "constant": w})
            jobs[(w, i)] = cfg
    results = run_many(jobs.values(), keep_records=False)

    rows = []
    for w in grid:
        co2 = []
        failed = 0
        for i in range(len(scenarios)):
            o = results[jobs[(w, i)].hash()]
            if o.ok:
                co2.append(o.tail["co2_g_per_step"])
            else:
                failed += 1
        row = {"w_hdv": w[0], "w_bus": w[1], "w_ldv": w[2],
               "co2_g_per_step": statistics.fmean(co2) if co2 and not failed else None,
               "failed_runs": failed}
        for i in range(len(scenarios)):
            o = results[jobs[(w, i)].hash()]
            row[f"co2_scenario_{i}"] = o.tail["co2_g_per_step"] if o.ok else None
        rows.append(row)
    rows.sort(key=lambda r: (r["co2_g_per_step"] is None, r["co2_g_per_step"] or 0.0))
    for rank, row in enumerate(rows, 1):
        row["rank"] = rank
    best = rows[0]
    argmin = None if best["co2_g_per_step"] is None else (best["w_hdv"], best["w_bus"], best["w_ldv"])
    return rows, argmin


@dataclass(frozen=True)
class Cell:
    agent: str
    reward: str
    mix_ratio: float
    scheme: str

    @property
    def label(self) -> str:
        return f"{self.agent}-{self.reward}-{self.scheme}-mix{round(self.mix_ratio * 100)}"


def matrix_cells(agents, rewards, mix_ratios, fixed_time: bool = True) -> list[Cell]:
    """Every agent x reward x mix cell in both weighting schemes, plus one fixed-time cell per mix."""
    cells = []
    for mix in mix_ratios:
        if fixed_time:
            cells.append(Cell(FIXED_TIME, "none", mix, UNWEIGHTED))
        for agent in agents:
            for reward in rewards:
                for scheme in (UNWEIGHTED, CONSTANT):
                    cells.append(Cell(agent, reward, mix, scheme))
    return cells


def cell_config(cell: Cell, seed: int, config: ScenarioConfig) -> ScenarioConfig:
    reward = config.reward.kind if cell.reward == "none" else cell.reward
    return config.with_(
        scenario={"mix_ratio": cell.mix_ratio, "seed": seed},
        agent={"controller": cell.agent},
        reward={"kind": reward},
        weights={"scheme": cell.scheme},
    )


def median_tail(tails: list[dict]) -> dict[str, float | None]:
    out = {}
    for name in METRIC_FIELDS:
        vals = [t[name] for t in tails if t.get(name) is not None and t[name] == t[name]]
        out[name] = statistics.median(vals) if vals else None
    return out


def compare_matrix(agents, rewards, mix_ratios, seeds, config: ScenarioConfig = ScenarioConfig(),
                   fixed_time: bool = True):
    """Median-over-seeds tail metrics for each cell.

    Returns ``(rows, outcomes)``: one summary row per cell (``status`` is
    ``failed`` if any of its runs failed) and the per-run outcomes keyed by
    ``(cell, seed)``.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    cells = matrix_cells(agents, rewards, mix_ratios, fixed_time)
    jobs = {(cell, s): cell_config(cell, s, config) for cell in cells for s in seeds}
    results = run_many(jobs.values())
    outcomes = {key: results[cfg.hash()] for key, cfg in jobs.items()}

    rows = []
    for cell in cells:
        runs = [outcomes[(cell, s)] for s in seeds]
        bad = [o for o in runs if not o.ok]
        row = {"agent": cell.agent, "reward_kind": cell.reward, "mix_ratio": cell.mix_ratio,
               "scheme": cell.scheme, "seeds": len(seeds),
               "status": "failed" if bad else "ok"}
        med = median_tail([o.tail for o in runs if o.ok]) if not bad else dict.fromkeys(METRIC_FIELDS)
        row.update(med)
        row["error"] = bad[0].error if bad else None
        rows.append(row)
    return rows, outcomes


def _fmt_cell(x) -> str:
    return "failed" if x is None else f"{x:.2f}"


def format_table(rows) -> str:
    """Plain-text layout: metric and mix ratio down the side, agent/reward across,
    each with a baseline (unweighted) and ours (constant weights) column."""
    groups = []
    for r in rows:
        key = (r["agent"], r["reward_kind"])
        if key not in groups:
            groups.append(key)
    mixes = sorted({r["mix_ratio"] for r in rows})
    index = {(r["agent"], r["reward_kind"], r["mix_ratio"], r["scheme"]): r for r in rows}

    header = ["Metric", "Mix"]
    for agent, reward in groups:
        if agent == FIXED_TIME:
            header.append("fixed-time")
        else:
            header += [f"{agent}/{reward} base", f"{agent}/{reward} ours"]
    lines = [header]
    for name, title in TABLE_METRICS:
        for mix in mixes:
            line = [title, f"{round(mix * 100)}%"]
            for agent, reward in groups:
                schemes = (UNWEIGHTED,) if agent == FIXED_TIME else (UNWEIGHTED, CONSTANT)
                for scheme in schemes:
                    r = index.get((agent, reward, mix, scheme))
                    line.append("-" if r is None else _fmt_cell(r.get(name) if r["status"] == "ok" else None))
            lines.append(line)
    widths = [max(len(l[i]) for l in lines) for i in range(len(header))]
    text = ["  ".join(c.ljust(w) if i < 2 else c.rjust(w) for i, (c, w) in enumerate(zip(l, widths)))
            for l in lines]
    text.insert(1, "-" * len(text[0]))
    return "\n".join(text) + "\n"
