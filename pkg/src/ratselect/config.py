"""Experiment configuration: defaults, JSON loading, strict key checking."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .madm import DEFAULT_WEIGHTS, default_pairwise
from .networks import MetricRanges
from .validation import check_pairwise, check_weights


@dataclass
class AgentSettings:
    """Hyperparameters handed to the learning agent.

    ``seed`` may be left as None, in which case the harness derives it from
    the experiment seed (seed + 1) so one knob replicates a whole run.
    """

    epsilon_start: float = 1.0
    epsilon_min: float = 0.05
    epsilon_decay: float = 0.995
    gamma: float = 0.9
    learning_rate: float = 1e-3
    batch_size: int = 32
    memory_capacity: int = 10_000
    target_sync_every: int = 50
    hidden_sizes: tuple = (64, 64)
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "epsilon_start": self.epsilon_start,
            "epsilon_min": self.epsilon_min,
            "epsilon_decay": self.epsilon_decay,
            "gamma": self.gamma,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "memory_capacity": self.memory_capacity,
            "target_sync_every": self.target_sync_every,
            "hidden_sizes": list(self.hidden_sizes),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AgentSettings":
        _reject_unknown(data, cls().to_dict().keys(), "agent")
        kwargs = dict(data)
        if "hidden_sizes" in kwargs:
            kwargs["hidden_sizes"] = tuple(kwargs["hidden_sizes"])
        return cls(**kwargs)


@dataclass
class MadmSettings:
    """Shared criterion weights for SAW/WPM/TOPSIS plus the AHP judgments."""

    weights: np.ndarray = field(default_factory=lambda: DEFAULT_WEIGHTS.copy())
    ahp_pairwise: np.ndarray = field(default_factory=default_pairwise)

    def __post_init__(self):
        self.weights = check_weights(self.weights, len(np.asarray(self.weights)))
        self.ahp_pairwise = check_pairwise(self.ahp_pairwise)

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist(), "ahp_pairwise": self.ahp_pairwise.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MadmSettings":
        _reject_unknown(data, ("weights", "ahp_pairwise"), "madm")
        kwargs = {}
        if "weights" in data:
            kwargs["weights"] = np.asarray(data["weights"], dtype=float)
        if "ahp_pairwise" in data:
            kwargs["ahp_pairwise"] = np.asarray(data["ahp_pairwise"], dtype=float)
        return cls(**kwargs)


@dataclass
class ExperimentConfig:
    """Everything a campaign run needs; all fields have working defaults."""

    epochs: int = 2000
    seed: int = 42
    interval_width: int = 500
    trace_path: str | None = None
    summary_path: str | None = None
    ranges: MetricRanges = field(default_factory=MetricRanges.defaults)
    agent: AgentSettings = field(default_factory=AgentSettings)
    madm: MadmSettings = field(default_factory=MadmSettings)

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if self.interval_width < 1:
            raise ConfigurationError(f"interval_width must be >= 1, got {self.interval_width}")

    def agent_seed(self) -> int:
        return self.agent.seed if self.agent.seed is not None else self.seed + 1

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "seed": self.seed,
            "interval_width": self.interval_width,
            "trace_path": self.trace_path,
            "summary_path": self.summary_path,
            "ranges": self.ranges.to_dict(),
            "agent": self.agent.to_dict(),
            "madm": self.madm.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        _reject_unknown(
            data,
            ("epochs", "seed", "interval_width", "trace_path", "summary_path",
             "ranges", "agent", "madm"),
            "config",
        )
        kwargs = {}
        for key in ("epochs", "seed", "interval_width", "trace_path", "summary_path"):
            if key in data:
                kwargs[key] = data[key]
        if "ranges" in data:
            kwargs["ranges"] = MetricRanges.from_dict(data["ranges"])
        if "agent" in data:
            kwargs["agent"] = AgentSettings.from_dict(data["agent"])
        if "madm" in data:
            kwargs["madm"] = MadmSettings.from_dict(data["madm"])
        return cls(**kwargs)


def _reject_unknown(data: dict, allowed, section: str):
    if not isinstance(data, dict):
        raise ConfigurationError(f"{section} section must be an object")
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigurationError(f"unknown {section} key(s): {sorted(unknown)}")


def load_config(path) -> ExperimentConfig:
    """Read an experiment config from a JSON file; unknown keys are errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        return ExperimentConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"invalid config {path}: {exc}") from exc
