"""Learning controllers and their numerical substrate."""

from .a2c import A2CAgent, a2c_update, advantage
from .base import AGENT_DEFAULTS, AgentConfig, LearningAgent, default_config
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .dqn import DQNAgent, dqn_update
from .nn import MLP, Adam, adam_step, elu
from .policy import epsilon_greedy, linear_epsilon, masked_argmax
from .qtable import QTableAgent, discretize_state, qt_update
from .replay import ReplayBuffer
from .sarsa import FourierBasis, SarsaAgent, TrueOnlineSarsa, sarsa_update

AGENTS = {cls.key: cls for cls in (QTableAgent, SarsaAgent, DQNAgent, A2CAgent)}
