"""Access-network selection: a learning agent against static MADM baselines.

The package simulates a terminal choosing among 5G, 4G, WiFi and LEO
satellite access each epoch from sampled QoS snapshots. A from-scratch deep
Q-learning selector competes with SAW, WPM, TOPSIS and AHP rankings on
identical states, and the harness reports per-interval 5G-selection and
oracle-agreement statistics.
"""

from .agent import DqnNetworkSelector, EpisodeOutcome, ReplayMemory, Transition, decay_epsilon, select_action
from .config import AgentSettings, ExperimentConfig, MadmSettings, load_config
from .errors import ConfigurationError
from .harness import (
    EpochRecord,
    IntervalSummary,
    METHODS,
    export,
    oracle_check,
    read_summaries,
    read_trace,
    run_experiment,
    summarize,
)
from .madm import (
    AhpRanker,
    DEFAULT_WEIGHTS,
    QOS_BENEFIT,
    Ranking,
    SawRanker,
    TopsisRanker,
    WpmRanker,
    ahp_rank,
    ahp_weights,
    default_pairwise,
    saw,
    topsis,
    wpm,
)
from .networks import (
    EnvState,
    METRIC_NAMES,
    MetricRanges,
    NORMALIZATION_CONSTANTS,
    NetworkMetrics,
    RAT_ORDER,
    RatId,
    STATE_DIM,
    normalize,
    sample_state,
)
from .qnet import QNetwork, td_targets, td_update_scalar
from .reward import RewardBreakdown, dynamic_weights, oracle_best, reward, reward_breakdown, reward_vector

__version__ = "0.1.0"

__all__ = [
    "AgentSettings",
    "AhpRanker",
    "ConfigurationError",
    "DEFAULT_WEIGHTS",
    "DqnNetworkSelector",
    "EnvState",
    "EpisodeOutcome",
    "EpochRecord",
    "ExperimentConfig",
    "IntervalSummary",
    "METHODS",
    "METRIC_NAMES",
    "MadmSettings",
    "MetricRanges",
    "NORMALIZATION_CONSTANTS",
    "NetworkMetrics",
    "QNetwork",
    "QOS_BENEFIT",
    "RAT_ORDER",
    "Ranking",
    "RatId",
    "ReplayMemory",
    "RewardBreakdown",
    "STATE_DIM",
    "SawRanker",
    "TopsisRanker",
    "Transition",
    "WpmRanker",
    "ahp_rank",
    "ahp_weights",
    "decay_epsilon",
    "default_pairwise",
    "dynamic_weights",
    "export",
    "load_config",
    "normalize",
    "oracle_best",
    "oracle_check",
    "read_summaries",
    "read_trace",
    "reward",
    "reward_breakdown",
    "reward_vector",
    "run_experiment",
    "sample_state",
    "saw",
    "select_action",
    "summarize",
    "td_targets",
    "td_update_scalar",
    "topsis",
    "wpm",
]
