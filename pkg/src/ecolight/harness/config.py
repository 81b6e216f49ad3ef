"""Scenario configuration and its YAML file format.

The file is a mapping with the sections ``scenario``, ``signal``,
``arrivals``, ``agent``, ``reward``, ``weights`` and ``output``; every key is
optional and falls back to the desk-scale defaults below. Unknown keys are
rejected.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import yaml

from ..agents import AGENTS
from ..agents.base import AgentConfig
from ..controllers import CLASSIC, FIXED_GREENS
from ..reward.rewards import RewardKind
from ..reward.weights import SCHEMES, TUNED_WEIGHTS

CONTROLLER_KEYS = tuple(CLASSIC) + tuple(AGENTS)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSection:
    episode_steps: int = 10_000
    tail_steps: int = 1_000
    lane_length: float = 150.0
    approaches: int = 4
    lanes_per_approach: int = 2
    mix_ratio: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class SignalSection:
    g_min: int = 10
    g_max: int = 50
    step_seconds: float = 5.0
    substep_seconds: float = 1.0
    yellow: float = 3.0
    all_red: float = 2.0
    fixed_greens: tuple[int, int, int] = FIXED_GREENS


@dataclass(frozen=True)
class InjectionSpec:
    start: int
    extra_rate: float  # vehicles per second per approach
    duration: int
    approaches: tuple[int, ...] = (0, 2)


def _desk_injections():
    return (
        InjectionSpec(2_500, 0.12, 500, (0, 2)),
        InjectionSpec(5_000, 0.12, 500, (1, 3)),
        InjectionSpec(7_500, 0.12, 500, (0, 2)),
    )


@dataclass(frozen=True)
class ArrivalsSection:
    base_rate: float = 0.08  # vehicles per second per approach
    turn_probs: tuple[float, float, float] = (0.70, 0.15, 0.15)
    injections: tuple[InjectionSpec, ...] = field(default_factory=_desk_injections)


@dataclass(frozen=True)
class AgentSection:
    controller: str = "sarsa"
    params: tuple[tuple[str, object], ...] = ()  # AgentConfig overrides
    sotl_theta: float = 50.0
    webster_window: float = 600.0

    def __post_init__(self):
        params = self.params.items() if isinstance(self.params, dict) else self.params
        object.__setattr__(self, "params", tuple(sorted((str(k), v) for k, v in params)))

    def overrides(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class RewardSection:
    kind: str = RewardKind.WAITING.value
    raw_sign: bool = False


@dataclass(frozen=True)
class WeightsSection:
    scheme: str = "unweighted"
    constant: tuple[float, float, float] = TUNED_WEIGHTS  # HDV, Bus, LDV


@dataclass(frozen=True)
class OutputSection:
    plots: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: ScenarioSection = ScenarioSection()
    signal: SignalSection = SignalSection()
    arrivals: ArrivalsSection = ArrivalsSection()
    agent: AgentSection = AgentSection()
    reward: RewardSection = RewardSection()
    weights: WeightsSection = WeightsSection()
    output: OutputSection = OutputSection()

    def validate(self) -> "ScenarioConfig":
        s, g = self.scenario, self.signal
        if s.episode_steps < 0:
            raise ConfigError("scenario.episode_steps must be non-negative")
        if s.tail_steps <= 0:
            raise ConfigError("scenario.tail_steps must be positive")
        if s.approaches != 4 or s.lanes_per_approach != 2:
            raise ConfigError("only the four-approach, two-lane intersection is supported")
        if not 0 <= s.mix_ratio <= 1:
            raise ConfigError("scenario.mix_ratio must lie in [0, 1]")
        if not 0 < g.g_min <= g.g_max:
            raise ConfigError("need 0 < g_min <= g_max")
        if g.yellow + g.all_red > g.step_seconds + 1e-9:
            raise ConfigError("yellow plus all-red must fit in one control step")
        if abs(g.step_seconds / g.substep_seconds - round(g.step_seconds / g.substep_seconds)) > 1e-9:
            raise ConfigError("step_seconds must be a multiple of substep_seconds")
        if self.agent.controller not in CONTROLLER_KEYS:
            raise ConfigError(f"unknown controller {self.agent.controller!r}; expected one of {CONTROLLER_KEYS}")
        try:
            RewardKind(self.reward.kind)
        except ValueError:
            raise ConfigError(f"unknown reward {self.reward.kind!r}") from None
        if self.weights.scheme not in SCHEMES:
            raise ConfigError(f"unknown weight scheme {self.weights.scheme!r}; expected one of {SCHEMES}")
        if any(w <= 0 for w in self.weights.constant):
            raise ConfigError("constant weights must be positive")
        unknown = set(self.agent.overrides()) - set(AgentConfig.field_names())
        if unknown:
            raise ConfigError(f"unknown agent params: {sorted(unknown)}")
        if abs(sum(self.arrivals.turn_probs) - 1.0) > 1e-9:
            raise ConfigError("arrivals.turn_probs must sum to 1")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["agent"]["params"] = {k: _plain(v) for k, v in self.agent.params}
        return _plain(d)

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_(self, **sections) -> "ScenarioConfig":
        """Copy with per-section field overrides, e.g. ``with_(scenario={"seed": 3})``."""
        out = self
        for name, values in sections.items():
            out = replace(out, **{name: replace(getattr(out, name), **values)})
        return out


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _section(cls, data, name):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    names = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(names)
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        default = getattr(cls(), key) if key != "injections" else ()
        if isinstance(default, tuple) and isinstance(value, list):
            value = tuple(value)
        if isinstance(default, float) and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        kwargs[key] = value
    return cls(**kwargs)


def from_dict(data: dict | None) -> ScenarioConfig:
    data = dict(data or {})
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    try:
        arrivals = dict(data.get("arrivals") or {})
        if "injections" in arrivals:
            arrivals["injections"] = tuple(
                InjectionSpec(int(i["start"]), float(i["extra_rate"]), int(i["duration"]),
                              tuple(i.get("approaches", (0, 2))))
                for i in arrivals["injections"]
            )
        agent = dict(data.get("agent") or {})
        if "params" in agent:
            params = agent["params"] or {}
            agent["params"] = tuple(sorted(
                (k, tuple(v) if isinstance(v, list) else v) for k, v in params.items()))
        cfg = ScenarioConfig(
            scenario=_section(ScenarioSection, data.get("scenario"), "scenario"),
            signal=_section(SignalSection, data.get("signal"), "signal"),
            arrivals=_section(ArrivalsSection, arrivals or None, "arrivals"),
            agent=_section(AgentSection, agent or None, "agent"),
            reward=_section(RewardSection, data.get("reward"), "reward"),
            weights=_section(WeightsSection, data.get("weights"), "weights"),
            output=_section(OutputSection, data.get("output"), "output"),
        )
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return cfg.validate()


def dumps(config: ScenarioConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False)


def loads(text: str) -> ScenarioConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return from_dict(data)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return loads(text)


def save_config(config: ScenarioConfig, path) -> Path:
    path = Path(path)
    path.write_text(dumps(config), encoding="utf-8")
    return path


def full_scale(config: ScenarioConfig = ScenarioConfig()) -> ScenarioConfig:
    """The 100,000-step setting: injections at 25k/50k/75k lasting 5,000 steps, 10,000-step tail."""
    injections = tuple(replace(i, start=i.start * 10, duration=i.duration * 10)
                       for i in config.arrivals.injections)
    return config.with_(
        scenario={"episode_steps": config.scenario.episode_steps * 10,
                  "tail_steps": config.scenario.tail_steps * 10},
        arrivals={"injections": injections},
    )
