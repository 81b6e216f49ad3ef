"""Observation vector, weighted rewards and their sensitivities."""

from .observation import VEHICLE_SPACE, Observation, observe
from .rewards import RewardKind, base_reward, discounted_return, weighted_reward
from .sensitivity import UndefinedSensitivity, sensitivity_closed, sensitivity_fd
from .weights import (
    ADAPTIVE, CONSTANT, LANE, SCHEMES, TUNED_WEIGHTS, UNWEIGHTED, WeightScheme, vehicle_weight,
)
