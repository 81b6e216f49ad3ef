"""Command-line entry point: ``ecolight run|tune|compare|plot``.

Exit status is 0 on success, 1 for a configuration problem (bad file, bad
flag, unknown key) and 2 when a run fails at runtime.
"""

import argparse
import itertools
import json
import logging
import sys
from pathlib import Path

import yaml

from .agents import CheckpointError, save_checkpoint
from .harness.config import ConfigError, ScenarioConfig, from_dict, full_scale, load_config, save_config
from .harness.experiments import compare_matrix, format_table, perturbations, tune_weights
from .harness.io import emit_csv, emit_table
from .harness.runner import run_episode

log = logging.getLogger("ecolight")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _read_yaml(path) -> dict:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return data


def _base_config(sweep: dict, origin: Path) -> ScenarioConfig:
    """Base scenario for sweep files: an optional ``config`` path plus inline ``base`` overrides."""
    cfg = ScenarioConfig()
    if sweep.get("config"):
        p = Path(sweep["config"])
        cfg = load_config(p if p.is_absolute() else origin.parent / p)
    if sweep.get("base"):
        merged = cfg.to_dict()
        for section, values in sweep["base"].items():
            if not isinstance(values, dict):
                raise ConfigError(f"base.{section} must be a mapping")
            merged.setdefault(section, {}).update(values)
        cfg = from_dict(merged)
    if sweep.get("full_scale"):
        cfg = full_scale(cfg)
    return cfg


def _override(cfg: ScenarioConfig, sections) -> ScenarioConfig:
    """``cfg.with_(**sections)`` with malformed overrides reported as config errors."""
    if not isinstance(sections, dict) or not all(isinstance(v, dict) for v in sections.values()):
        raise ConfigError(f"expected a mapping of section overrides, got {sections!r}")
    try:
        return cfg.with_(**sections).validate()
    except (TypeError, AttributeError) as exc:
        raise ConfigError(f"bad override {sections!r}: {exc}") from exc


def _apply_run_flags(cfg: ScenarioConfig, args) -> ScenarioConfig:
    if args.full_scale:
        cfg = full_scale(cfg)
    cfg = cfg.with_(scenario={"seed": args.seed})
    if args.steps is not None:
        cfg = cfg.with_(scenario={"episode_steps": args.steps})
    if args.agent:
        cfg = cfg.with_(agent={"controller": args.agent})
    if args.reward:
        cfg = cfg.with_(reward={"kind": args.reward})
    if args.weights:
        cfg = cfg.with_(weights={"scheme": args.weights})
    if args.mix is not None:
        cfg = cfg.with_(scenario={"mix_ratio": args.mix})
    if args.plots:
        cfg = cfg.with_(output={"plots": True})
    return cfg.validate()


def cmd_run(args) -> int:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    cfg = _apply_run_flags(cfg, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_config(cfg, out / "config.yaml")

    every = max(1, cfg.scenario.episode_steps // 10)

    def progress(step, world):
        if (step + 1) % every == 0:
            log.info("step %d/%d  vehicles %d", step + 1, cfg.scenario.episode_steps, world.n_vehicles())

    result = run_episode(cfg, checkpoint=args.load_checkpoint, progress=progress)
    emit_csv(result.records, out / "metrics.csv")
    summary = {"config_hash": result.config_hash, "tail_steps": result.tail_steps, "tail": result.tail}
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.save_checkpoint and getattr(result.controller, "learns", False):
        save_checkpoint(result.controller, out / "checkpoint.npz")
    if cfg.output.plots:
        from .harness.plots import emit_plots
        emit_plots(out, out)
    print(f"{result.config_hash}  tail travel time {result.tail['travel_time_s']:.2f} s  "
          f"CO2 {result.tail['co2_g_per_step']:.2f} g/step  -> {out}")
    return EXIT_OK


def _weight_grid(sweep: dict) -> list[tuple]:
    grid = [tuple(w) for w in sweep.get("weights", [])]
    if "values" in sweep:
        grid += list(itertools.product(sweep["values"], repeat=3))
    if "perturb" in sweep:
        grid += perturbations(tuple(sweep["perturb"]))
    if not grid:
        raise ConfigError("grid file needs 'weights', 'values' or 'perturb'")
    for w in grid:
        if len(w) != 3 or any(not isinstance(x, (int, float)) or x <= 0 for x in w):
            raise ConfigError(f"bad weight triple {w}: need three positive numbers (HDV, Bus, LDV)")
    return list(dict.fromkeys(tuple(float(x) for x in w) for w in grid))


def cmd_tune(args) -> int:
    sweep = _read_yaml(args.grid)
    base = _base_config(sweep, Path(args.grid))
    grid = _weight_grid(sweep)
    scenarios = sweep.get("scenarios") or [{}]
    for sc in scenarios:
        _override(base, sc)
    rows, best = tune_weights(grid, scenarios, base)
    out = Path(args.out)
    emit_table(rows, out / "tuning.csv")
    if best is None:
        print("every weight triple had a failed run", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"best weights (HDV, Bus, LDV) = {best}  mean tail CO2 {rows[0]['co2_g_per_step']:.2f} g/step")
    return EXIT_OK


def cmd_compare(args) -> int:
    sweep = _read_yaml(args.matrix)
    base = _base_config(sweep, Path(args.matrix))
    agents = sweep.get("agents", ["sarsa"])
    rewards = sweep.get("rewards", ["waiting"])
    mixes = [float(m) for m in sweep.get("mix_ratios", [0.0])]
    for a in agents:
        base.with_(agent={"controller": a}).validate()
    for r in rewards:
        base.with_(reward={"kind": r}).validate()
    if args.seeds < 1:
        raise ConfigError("--seeds must be at least 1")
    seeds = [base.scenario.seed + i for i in range(args.seeds)]
    rows, outcomes = compare_matrix(agents, rewards, mixes, seeds, base, sweep.get("fixed_time", True))

    out = Path(args.out)
    for (cell, seed), o in outcomes.items():
        if o.ok:
            emit_csv(o.records, out / "runs" / f"{cell.label}_seed{seed}.csv")
    emit_table(rows, out / "summary.csv")
    table = format_table(rows)
    (out / "table.txt").write_text(table, encoding="utf-8")
    print(table, end="")
    failed = sum(r["status"] == "failed" for r in rows)
    if failed:
        print(f"{failed} cell(s) failed; see summary.csv", file=sys.stderr)
    if sweep.get("plots"):
        from .harness.plots import emit_plots
        emit_plots(out, out / "figures")
    return EXIT_RUNTIME if failed == len(rows) else EXIT_OK


def cmd_plot(args) -> int:
    from .harness.plots import emit_plots
    try:
        written = emit_plots(args.in_dir, args.out, window=args.window)
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc
    for p in written:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ecolight", description="Single-intersection signal control benchmark.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="simulate one episode and write metrics.csv")
    r.add_argument("--config", help="scenario YAML (defaults apply when omitted)")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--steps", type=int)
    r.add_argument("--agent", help="controller key, e.g. uniform, webster, maxpressure, sotl, qt, sarsa, dqn, a2c")
    r.add_argument("--reward", help="queue | waiting | pressure")
    r.add_argument("--weights", help="unweighted | constant | lane | adaptive")
    r.add_argument("--mix", type=float, help="share of non-car vehicles")
    r.add_argument("--full-scale", action="store_true", help="100,000-step episode with scaled injections")
    r.add_argument("--plots", action="store_true", help="also render profile figures into --out")
    r.add_argument("--save-checkpoint", action="store_true", help="write checkpoint.npz for learning agents")
    r.add_argument("--load-checkpoint", help="initialize the agent from a checkpoint file")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("tune", help="grid search over constant class weights")
    t.add_argument("--grid", required=True)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_tune)

    c = sub.add_parser("compare", help="weighted vs unweighted matrix over agents, rewards and mix ratios")
    c.add_argument("--matrix", required=True)
    c.add_argument("--seeds", type=int, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_compare)

    pl = sub.add_parser("plot", help="render figures from run or compare output")
    pl.add_argument("--in", dest="in_dir", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--window", type=int, default=100, help="moving-average window in steps")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        log.debug("runtime failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
