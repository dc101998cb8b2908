"""Candidate networks and per-epoch QoS state generation.

Four radio access technologies compete for the connection: 5G, 4G, WiFi and a
LEO satellite constellation. Each epoch every network gets a fresh QoS
snapshot (bandwidth, latency, jitter, packet loss, load, cost) drawn uniformly
from a per-network envelope, and the snapshots are flattened into a normalized
24-vector for the learning agent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError


class RatId(Enum):
    """The four candidate access networks. The value is the action index."""

    FIVE_G = 0
    FOUR_G = 1
    WIFI = 2
    LEO = 3

    @property
    def index(self) -> int:
        return self.value

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_index(cls, index: int) -> "RatId":
        return _BY_INDEX[index]

    @classmethod
    def from_label(cls, label: str) -> "RatId":
        try:
            return _BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown network label: {label!r}") from None


_LABELS = {RatId.FIVE_G: "5G", RatId.FOUR_G: "4G", RatId.WIFI: "WiFi", RatId.LEO: "LEO"}
_BY_INDEX = {r.value: r for r in RatId}
_BY_LABEL = {_LABELS[r]: r for r in RatId}

RAT_ORDER: tuple[RatId, ...] = (RatId.FIVE_G, RatId.FOUR_G, RatId.WIFI, RatId.LEO)

#: Metric order used everywhere a snapshot is flattened.
METRIC_NAMES: tuple[str, ...] = ("bandwidth", "latency", "jitter", "packet_loss", "load", "cost")

N_RATS = 4
N_METRICS = 6
STATE_DIM = N_RATS * N_METRICS


@dataclass(frozen=True)
class NetworkMetrics:
    """One network's QoS snapshot.

    Units: bandwidth in Mbps, latency and jitter in ms, packet_loss and load
    in percent (0..100), cost in dollars. All values must be finite and
    non-negative.
    """

    bandwidth: float
    latency: float
    jitter: float
    packet_loss: float
    load: float
    cost: float

    def __post_init__(self):
        for name in METRIC_NAMES:
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v}")
        if self.packet_loss > 100:
            raise ValueError(f"packet_loss must be <= 100, got {self.packet_loss}")
        if self.load > 100:
            raise ValueError(f"load must be <= 100, got {self.load}")

    def as_array(self) -> np.ndarray:
        """Metric values in the canonical (B, L, J, P, U, C) order."""
        return np.array([getattr(self, name) for name in METRIC_NAMES], dtype=float)

    @classmethod
    def from_array(cls, values) -> "NetworkMetrics":
        values = np.asarray(values, dtype=float)
        if values.shape != (N_METRICS,):
            raise ValueError(f"expected {N_METRICS} metric values, got shape {values.shape}")
        return cls(*(float(v) for v in values))


# Per-network QoS envelopes, (min, max) per metric in the canonical order.
# These are the built-in defaults the simulator samples from.
_DEFAULT_BOUNDS = {
    RatId.FIVE_G: ((50, 500), (5, 10), (1, 5), (0, 1), (10, 50), (3, 6)),
    RatId.FOUR_G: ((10, 50), (10, 30), (5, 15), (0.1, 2), (30, 70), (2, 5)),
    RatId.WIFI: ((20, 80), (10, 50), (1, 8), (0, 5), (20, 60), (1, 4)),
    RatId.LEO: ((50, 200), (30, 70), (5, 20), (2, 10), (40, 80), (4, 8)),
}

#: Global per-metric normalization constants: the largest default upper bound
#: of each metric across all four networks (B 500, L 70, J 20, P 10, U 80,
#: C 8). Fixed so the agent's input scaling never depends on the epoch.
NORMALIZATION_CONSTANTS = np.array([500.0, 70.0, 20.0, 10.0, 80.0, 8.0])


class MetricRanges:
    """Per-network, per-metric (min, max) sampling bounds.

    Stored as two (4, 6) arrays in (network index, metric) layout. Bounds must
    be finite, non-negative, min <= max, and percentages capped at 100 so
    every sample is a valid :class:`NetworkMetrics`.
    """

    def __init__(self, low, high):
        low = np.asarray(low, dtype=float)
        high = np.asarray(high, dtype=float)
        if low.shape != (N_RATS, N_METRICS) or high.shape != (N_RATS, N_METRICS):
            raise ConfigurationError(
                f"range arrays must have shape ({N_RATS}, {N_METRICS}), "
                f"got {low.shape} and {high.shape}"
            )
        if not (np.isfinite(low).all() and np.isfinite(high).all()):
            raise ConfigurationError("range bounds must be finite")
        if (low < 0).any():
            raise ConfigurationError("range bounds must be non-negative")
        if (low > high).any():
            bad = np.argwhere(low > high)[0]
            rat = RAT_ORDER[bad[0]].label
            raise ConfigurationError(
                f"min > max for {rat} {METRIC_NAMES[bad[1]]}: "
                f"({low[tuple(bad)]}, {high[tuple(bad)]})"
            )
        for j, name in enumerate(METRIC_NAMES):
            if name in ("packet_loss", "load") and (high[:, j] > 100).any():
                raise ConfigurationError(f"{name} upper bound must be <= 100")
        self.low = low
        self.high = high

    @classmethod
    def defaults(cls) -> "MetricRanges":
        low = np.array([[b[0] for b in _DEFAULT_BOUNDS[r]] for r in RAT_ORDER], dtype=float)
        high = np.array([[b[1] for b in _DEFAULT_BOUNDS[r]] for r in RAT_ORDER], dtype=float)
        return cls(low, high)

    def bounds(self, rat: RatId, metric: str) -> tuple[float, float]:
        j = METRIC_NAMES.index(metric)
        return float(self.low[rat.index, j]), float(self.high[rat.index, j])

    def to_dict(self) -> dict:
        return {
            r.label: {
                name: [float(self.low[r.index, j]), float(self.high[r.index, j])]
                for j, name in enumerate(METRIC_NAMES)
            }
            for r in RAT_ORDER
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetricRanges":
        base = cls.defaults()
        low = base.low.copy()
        high = base.high.copy()
        unknown = set(data) - {r.label for r in RAT_ORDER}
        if unknown:
            raise ConfigurationError(f"unknown network(s) in ranges: {sorted(unknown)}")
        for label, metrics in data.items():
            rat = RatId.from_label(label)
            bad = set(metrics) - set(METRIC_NAMES)
            if bad:
                raise ConfigurationError(f"unknown metric(s) for {label}: {sorted(bad)}")
            for name, pair in metrics.items():
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise ConfigurationError(f"{label}.{name} must be a [min, max] pair")
                j = METRIC_NAMES.index(name)
                low[rat.index, j], high[rat.index, j] = float(pair[0]), float(pair[1])
        return cls(low, high)

    def __eq__(self, other):
        return (
            isinstance(other, MetricRanges)
            and np.array_equal(self.low, other.low)
            and np.array_equal(self.high, other.high)
        )


@dataclass(frozen=True)
class EnvState:
    """One epoch's environment: a QoS snapshot per network plus flat views.

    ``raw`` and ``normalized`` are length-24 vectors in network-major order
    (5G, 4G, WiFi, LEO) with metrics in (B, L, J, P, U, C) order inside each
    network block. ``normalized[k] = raw[k] / constant`` with the fixed
    per-metric :data:`NORMALIZATION_CONSTANTS`.
    """

    metrics: dict
    raw: np.ndarray
    normalized: np.ndarray

    @classmethod
    def from_metrics(cls, metrics: dict) -> "EnvState":
        raw = np.concatenate([metrics[r].as_array() for r in RAT_ORDER])
        return cls(metrics=metrics, raw=raw, normalized=normalize(metrics))

    @classmethod
    def from_raw(cls, raw) -> "EnvState":
        raw = np.asarray(raw, dtype=float)
        if raw.shape != (STATE_DIM,):
            raise ValueError(f"expected a flat vector of {STATE_DIM} values, got {raw.shape}")
        metrics = {
            r: NetworkMetrics.from_array(raw[r.index * N_METRICS : (r.index + 1) * N_METRICS])
            for r in RAT_ORDER
        }
        return cls.from_metrics(metrics)

    def matrix(self) -> np.ndarray:
        """The (4, 6) decision matrix of raw metric values."""
        return self.raw.reshape(N_RATS, N_METRICS)


def normalize(metrics_by_rat: dict) -> np.ndarray:
    """Flatten per-network snapshots into the normalized 24-vector.

    Each entry is the raw metric divided by its fixed global constant, so the
    mapping is entry-wise linear and identical at every epoch.
    """
    raw = np.concatenate([metrics_by_rat[r].as_array() for r in RAT_ORDER])
    return raw / np.tile(NORMALIZATION_CONSTANTS, N_RATS)


def sample_state(ranges: MetricRanges, rng: np.random.Generator) -> EnvState:
    """Draw one epoch's QoS state, each metric uniform over its [min, max].

    Metrics are independent across networks and across metrics. The draw
    order is fixed (network-major, canonical metric order inside), so a given
    generator state always yields the same EnvState.
    """
    values = ranges.low + (ranges.high - ranges.low) * rng.random((N_RATS, N_METRICS))
    metrics = {r: NetworkMetrics.from_array(values[r.index]) for r in RAT_ORDER}
    return EnvState.from_metrics(metrics)
