"""Episode loop: arrivals, dynamics, observation, reward, decision."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..agents import AGENTS, default_config, load_checkpoint
from ..controllers import (
    CLASSIC, MaxPressureController, SOTLController, UniformController, WebsterController,
)
from ..reward.observation import observe
from ..reward.rewards import RewardKind, weighted_reward
from ..reward.weights import UNWEIGHTED, WeightScheme
from ..sim.arrivals import ArrivalProcess, Injection, spawn_arrivals
from ..sim.signal import allowed_actions
from ..sim.world import SimParams, World
from .config import ScenarioConfig
from .metrics import MetricsRecord, stopped_time, tail_aggregate, total_waiting, travel_time

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    config_hash: str
    records: list[MetricsRecord]
    tail_steps: int
    tail: dict[str, float] = field(default_factory=dict)
    controller: object = None

    def __post_init__(self):
        if not self.tail:
            self.tail = tail_aggregate(self.records, self.tail_steps)


def sim_params(config: ScenarioConfig) -> SimParams:
    s, g = config.scenario, config.signal
    return SimParams(
        lane_length=s.lane_length,
        dt=g.substep_seconds,
        substeps=int(round(g.step_seconds / g.substep_seconds)),
        g_min=g.g_min,
        g_max=g.g_max,
        yellow=g.yellow,
        all_red=g.all_red,
    )


def arrival_process(config: ScenarioConfig) -> ArrivalProcess:
    a = config.arrivals
    return ArrivalProcess(
        base_rate=a.base_rate,
        injections=tuple(Injection(i.start, i.extra_rate, i.duration, tuple(i.approaches))
                         for i in a.injections),
        mix_ratio=config.scenario.mix_ratio,
        turn_probs=tuple(a.turn_probs),
        interval=config.signal.step_seconds,
    )


def weight_scheme(config: ScenarioConfig) -> WeightScheme:
    return WeightScheme(config.weights.scheme, tuple(config.weights.constant))


def build_controller(config: ScenarioConfig, rng: np.random.Generator):
    key = config.agent.controller
    g = config.signal
    if key == UniformController.key:
        return UniformController(g.fixed_greens)
    if key == WebsterController.key:
        return WebsterController(window=config.agent.webster_window, step_seconds=g.step_seconds,
                                 fallback=g.fixed_greens, g_min=g.g_min, g_max=g.g_max)
    if key == MaxPressureController.key:
        scheme = weight_scheme(config)
        return MaxPressureController(None if scheme.kind == UNWEIGHTED else scheme)
    if key == SOTLController.key:
        return SOTLController(theta=config.agent.sotl_theta, mu=g.g_min)
    if key in CLASSIC:
        return CLASSIC[key]()
    agent_cfg = default_config(key, **config.agent.overrides())
    return AGENTS[key](agent_cfg, rng, total_steps=config.scenario.episode_steps)


def run_episode(config: ScenarioConfig, controller=None, checkpoint=None, progress=None) -> RunResult:
    """Simulate one episode and record one metrics row per control step.

    Deterministic for a given config (the seed lives in ``config.scenario``).
    """
    config.validate()
    seeds = np.random.SeedSequence(config.scenario.seed).spawn(2)
    arrivals_rng = np.random.default_rng(seeds[0])
    agent_rng = np.random.default_rng(seeds[1])

    params = sim_params(config)
    world = World(params)
    process = arrival_process(config)
    if controller is None:
        controller = build_controller(config, agent_rng)
    if checkpoint is not None:
        load_checkpoint(controller, checkpoint)
    controller.reset(world)
    kind = RewardKind(config.reward.kind)
    scheme = weight_scheme(config)
    raw_sign = config.reward.raw_sign
    needs_prev = kind == RewardKind.WAITING
    lane_length = config.scenario.lane_length

    prev = world.snapshot() if needs_prev else None
    records = []
    n_steps = config.scenario.episode_steps
    for step in range(n_steps):
        world.add_arrivals(spawn_arrivals(process, step, arrivals_rng))
        world.advance()
        obs = observe(world)
        reward = weighted_reward(kind, scheme, world, prev, raw_sign=raw_sign)
        records.append(MetricsRecord(
            step=step,
            travel_time_s=travel_time(world, lane_length),
            co2_g_per_step=world.co2_step,
            co2_cum_kg=world.co2_total / 1000.0,
            waiting_s=total_waiting(world),
            stopped_s=stopped_time(world.departed_waits),
            reward=reward,
            vehicles=world.n_vehicles(),
        ))
        allowed = allowed_actions(world.signal, params.g_min, params.g_max)
        action = controller.act(world, obs, reward, allowed)
        world.set_phase(action)
        if needs_prev:
            prev = world.snapshot()
        if progress is not None:
            progress(step, world)
    log.debug("episode done: %d steps, %d spawned, %d departed", n_steps, world.spawned, world.despawned)
    result = RunResult(config.hash(), records, config.scenario.tail_steps, controller=controller)
    result.world = world
    return result
