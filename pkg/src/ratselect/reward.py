"""Connection-quality reward for a chosen network.

The reward scores one network's QoS snapshot with dynamically weighted terms:
each metric's weight grows linearly with the metric itself, so strong
bandwidth is rewarded superlinearly and bad latency, jitter, loss, load or
cost is punished superlinearly. Bandwidth is the only positive contribution:

    total = W_b*b/100 - W_l*l/300 - W_j*j/50 - W_p*p/10 - W_u*u/100 - W_c*c/10

with W_b = 4 + b/100, W_l = 4 + l/100, W_j = 2.5 + j/20, W_p = 4 + p/5,
W_u = 3 + u/50, W_c = 2 + c/10 (each base is also the weight's minimum for
valid inputs).

The same function doubles as the ground-truth selector: the best network for
a state is the one whose snapshot maximizes the reward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .networks import EnvState, NetworkMetrics, RAT_ORDER, RatId


@dataclass(frozen=True)
class RewardBreakdown:
    """Weights, signed per-metric contributions, and their total."""

    weights: tuple
    terms: tuple
    total: float


def dynamic_weights(m: NetworkMetrics) -> tuple:
    """Per-metric weights (W_b, W_l, W_j, W_p, W_u, W_c) for one snapshot."""
    return (
        4.0 + m.bandwidth / 100.0,
        4.0 + m.latency / 100.0,
        2.5 + m.jitter / 20.0,
        4.0 + m.packet_loss / 5.0,
        3.0 + m.load / 50.0,
        2.0 + m.cost / 10.0,
    )


def reward_breakdown(m: NetworkMetrics) -> RewardBreakdown:
    """Reward with its weights and signed terms exposed."""
    w_b, w_l, w_j, w_p, w_u, w_c = dynamic_weights(m)
    terms = (
        w_b * m.bandwidth / 100.0,
        -(w_l * m.latency / 300.0),
        -(w_j * m.jitter / 50.0),
        -(w_p * m.packet_loss / 10.0),
        -(w_u * m.load / 100.0),
        -(w_c * m.cost / 10.0),
    )
    return RewardBreakdown(
        weights=(w_b, w_l, w_j, w_p, w_u, w_c),
        terms=terms,
        total=terms[0] + terms[1] + terms[2] + terms[3] + terms[4] + terms[5],
    )


def reward(m: NetworkMetrics) -> float:
    """Scalar reward for connecting to a network with snapshot ``m``."""
    return reward_breakdown(m).total


def reward_vector(state: EnvState) -> np.ndarray:
    """Rewards of all four networks for one state, in action-index order."""
    return np.array([reward(state.metrics[r]) for r in RAT_ORDER])


def oracle_best(state: EnvState) -> RatId:
    """Brute-force best choice: argmax of the reward over the four networks.

    Exact ties go to the lowest action index.
    """
    rewards = reward_vector(state)
    return RatId.from_index(int(np.argmax(rewards)))
