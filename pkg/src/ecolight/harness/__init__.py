"""Configuration, episode runner, metrics, experiment sweeps and report output."""

from .config import ConfigError, ScenarioConfig, from_dict, full_scale, load_config, loads, save_config
from .metrics import MetricsRecord, stopped_time, tail_aggregate, travel_time
from .runner import RunResult, build_controller, run_episode
