"""Deep Q-learning selector: epsilon-greedy policy, replay memory, target net.

One episode is one selection: the agent sees a fresh 24-value QoS state,
picks a network, collects that network's reward, and the episode ends. The
transition is stored in a bounded replay memory; once enough transitions have
accumulated, every episode also takes one SGD step on a uniformly resampled
batch, and the target network is refreshed every fixed number of training
steps. Exploration decays multiplicatively per episode down to a floor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import ConfigurationError
from .networks import (
    N_METRICS,
    N_RATS,
    NORMALIZATION_CONSTANTS,
    STATE_DIM,
    EnvState,
    NetworkMetrics,
    RatId,
)
from .qnet import QNetwork
from .reward import reward as qos_reward

AGENT_CHECKPOINT_FORMAT = "dqn-agent-json-v1"


@dataclass(frozen=True)
class Transition:
    """One stored (state, action, reward, next state, done) experience."""

    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool

    def __post_init__(self):
        if not 0 <= self.action < N_RATS:
            raise ValueError(f"action must be in 0..{N_RATS - 1}, got {self.action}")
        if np.asarray(self.state).shape != (STATE_DIM,) or np.asarray(self.next_state).shape != (STATE_DIM,):
            raise ValueError(f"state vectors must have length {STATE_DIM}")
        if not np.isfinite(self.reward):
            raise ValueError("reward must be finite")


class ReplayMemory:
    """Bounded FIFO of transitions with uniform with-replacement sampling."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ConfigurationError(f"memory capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._items: list[Transition] = []
        self._next = 0  # ring-buffer write position once full

    def append(self, transition: Transition):
        if len(self._items) < self.capacity:
            self._items.append(transition)
        else:
            self._items[self._next] = transition
            self._next = (self._next + 1) % self.capacity

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        idx = rng.integers(0, len(self._items), size=batch_size)
        return [self._items[i] for i in idx]

    def __len__(self) -> int:
        return len(self._items)


def select_action(q_values, epsilon: float, rng: np.random.Generator) -> RatId:
    """Epsilon-greedy pick: uniform random with probability epsilon, else the
    argmax Q-value (exact ties go to the lowest action index)."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if epsilon > 0.0 and rng.random() < epsilon:
        return RatId.from_index(int(rng.integers(0, N_RATS)))
    return RatId.from_index(int(np.argmax(np.asarray(q_values))))


def decay_epsilon(epsilon: float, epsilon_min: float, epsilon_decay: float) -> float:
    """Multiply epsilon by the decay factor while it is above the floor.

    The value may end up one multiplicative step below the floor and then
    stays there.
    """
    if epsilon > epsilon_min:
        return epsilon * epsilon_decay
    return epsilon


@dataclass(frozen=True)
class EpisodeOutcome:
    """What one selection episode produced."""

    action: RatId
    reward: float
    epsilon: float  # exploration rate used for this selection
    loss: float | None  # training loss, None while the memory is warming up


class DqnNetworkSelector(BaseEstimator):
    """Learns to pick the best access network from raw 24-value QoS states.

    Rows passed to :meth:`fit`, :meth:`partial_fit` and :meth:`predict` are
    raw metric values in network-major order (5G, 4G, WiFi, LEO) with
    (bandwidth, latency, jitter, packet loss, load, cost) inside each block;
    inputs are rescaled internally by the fixed normalization constants.

    Parameters
    ----------
    epsilon_start, epsilon_min, epsilon_decay:
        Exploration schedule: start value, floor, and per-episode
        multiplicative decay.
    gamma:
        Discount factor for the bootstrap term. Inert for the single-step
        episodes this simulator produces (done is always True) but applied
        whenever a transition carries done=False.
    learning_rate:
        SGD step size.
    batch_size, memory_capacity:
        Replay batch size and bounded memory capacity.
    target_sync_every:
        Number of training steps between target-network refreshes.
    hidden_sizes:
        Widths of the hidden layers of the Q-network.
    seed:
        Master seed; initialization, exploration and replay sampling each get
        an independent deterministic stream derived from it.
    """

    def __init__(
        self,
        epsilon_start=1.0,
        epsilon_min=0.05,
        epsilon_decay=0.995,
        gamma=0.9,
        learning_rate=1e-3,
        batch_size=32,
        memory_capacity=10_000,
        target_sync_every=50,
        hidden_sizes=(64, 64),
        seed=0,
    ):
        self.epsilon_start = epsilon_start
        self.epsilon_min = epsilon_min
        self.epsilon_decay = epsilon_decay
        self.gamma = gamma
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.memory_capacity = memory_capacity
        self.target_sync_every = target_sync_every
        self.hidden_sizes = hidden_sizes
        self.seed = seed

    def _check_hyperparameters(self):
        if not 0.0 <= self.epsilon_min <= self.epsilon_start <= 1.0:
            raise ConfigurationError(
                "need 0 <= epsilon_min <= epsilon_start <= 1, got "
                f"{self.epsilon_min} and {self.epsilon_start}"
            )
        if not 0.0 < self.epsilon_decay <= 1.0:
            raise ConfigurationError(f"epsilon_decay must be in (0, 1], got {self.epsilon_decay}")
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigurationError(f"gamma must be in [0, 1), got {self.gamma}")
        if self.learning_rate <= 0:
            raise ConfigurationError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.target_sync_every < 1:
            raise ConfigurationError(f"target_sync_every must be >= 1, got {self.target_sync_every}")

    def _setup(self):
        self._check_hyperparameters()
        init_ss, action_ss, replay_ss = np.random.SeedSequence(self.seed).spawn(3)
        arch = (STATE_DIM, *self.hidden_sizes, N_RATS)
        self.q_network_ = QNetwork(arch, seed=init_ss)
        self.target_network_ = self.q_network_.copy()
        self.memory_ = ReplayMemory(self.memory_capacity)
        self._action_rng = np.random.default_rng(action_ss)
        self._replay_rng = np.random.default_rng(replay_ss)
        self.epsilon_ = float(self.epsilon_start)
        self.n_episodes_ = 0
        self.train_steps_ = 0
        self.selection_counts_ = np.zeros(N_RATS, dtype=int)
        return self

    @staticmethod
    def _raw_rows(X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != STATE_DIM:
            raise ValueError(f"expected an (n, {STATE_DIM}) array of raw states, got shape {X.shape}")
        return X

    def fit(self, X, y=None):
        """Reset the agent and run one selection episode per row of X."""
        self._setup()
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        """Run selection episodes on more rows without resetting."""
        if not hasattr(self, "q_network_"):
            self._setup()
        for row in self._raw_rows(X):
            self.step_episode(row)
        return self

    def step_episode(self, state) -> EpisodeOutcome:
        """Run one selection episode on a fresh state.

        Accepts an EnvState or a raw 24-vector. Picks a network
        epsilon-greedily, collects its reward, stores the terminal
        transition, trains on one replay batch once the memory holds at
        least ``batch_size`` transitions, refreshes the target network every
        ``target_sync_every`` training steps, and decays epsilon.
        """
        if not hasattr(self, "q_network_"):
            self._setup()
        if isinstance(state, EnvState):
            raw = state.raw
            normalized = state.normalized
        else:
            raw = np.asarray(state, dtype=float)
            if raw.shape != (STATE_DIM,):
                raise ValueError(f"expected a raw state of length {STATE_DIM}, got {raw.shape}")
            normalized = raw / np.tile(NORMALIZATION_CONSTANTS, N_RATS)

        epsilon_used = self.epsilon_
        q_values = self.q_network_.forward(normalized)
        action = select_action(q_values, epsilon_used, self._action_rng)
        a = action.index
        chosen = NetworkMetrics.from_array(raw[a * N_METRICS : (a + 1) * N_METRICS])
        r = qos_reward(chosen)

        # Single-step episode: done is always True, so the stored next_state
        # never feeds a bootstrap term. It is kept for format generality.
        self.memory_.append(Transition(normalized, a, r, normalized, True))

        loss = None
        if len(self.memory_) >= self.batch_size:
            batch = self.memory_.sample(self.batch_size, self._replay_rng)
            loss = self.q_network_.train_batch(batch, self.target_network_, self.learning_rate, self.gamma)
            self.train_steps_ += 1
            if self.train_steps_ % self.target_sync_every == 0:
                self.target_network_.copy_from(self.q_network_)

        self.selection_counts_[a] += 1
        self.n_episodes_ += 1
        self.epsilon_ = decay_epsilon(self.epsilon_, self.epsilon_min, self.epsilon_decay)
        return EpisodeOutcome(action=action, reward=r, epsilon=epsilon_used, loss=loss)

    def q_values(self, X) -> np.ndarray:
        """Greedy Q-values for raw state rows, shape (n, 4)."""
        check_is_fitted(self, "q_network_")
        rows = self._raw_rows(X)
        return self.q_network_.forward(rows / np.tile(NORMALIZATION_CONSTANTS, N_RATS))

    def predict(self, X) -> np.ndarray:
        """Greedy action index per raw state row (no exploration, no learning)."""
        return self.q_values(X).argmax(axis=1)

    # -- checkpointing -------------------------------------------------------

    def to_checkpoint(self) -> dict:
        """Serializable snapshot: parameters, both networks, epsilon, step
        counters and the rng states, enough to resume training
        deterministically. Replay memory contents are not persisted; a
        resumed agent refills its memory before training resumes."""
        check_is_fitted(self, "q_network_")
        params = self.get_params()
        params["hidden_sizes"] = list(params["hidden_sizes"])
        return {
            "format": AGENT_CHECKPOINT_FORMAT,
            "params": params,
            "epsilon": self.epsilon_,
            "n_episodes": self.n_episodes_,
            "train_steps": self.train_steps_,
            "selection_counts": self.selection_counts_.tolist(),
            "q_network": self.q_network_.to_checkpoint(),
            "target_network": self.target_network_.to_checkpoint(),
            "rng": {
                "action": self._action_rng.bit_generator.state,
                "replay": self._replay_rng.bit_generator.state,
            },
        }

    @classmethod
    def from_checkpoint(cls, data: dict) -> "DqnNetworkSelector":
        if data.get("format") != AGENT_CHECKPOINT_FORMAT:
            raise ValueError(f"unsupported checkpoint format: {data.get('format')!r}")
        params = dict(data["params"])
        params["hidden_sizes"] = tuple(params["hidden_sizes"])
        agent = cls(**params)
        agent._setup()
        agent.q_network_ = QNetwork.from_checkpoint(data["q_network"])
        agent.target_network_ = QNetwork.from_checkpoint(data["target_network"])
        agent.epsilon_ = float(data["epsilon"])
        agent.n_episodes_ = int(data["n_episodes"])
        agent.train_steps_ = int(data["train_steps"])
        agent.selection_counts_ = np.array(data["selection_counts"], dtype=int)
        agent._action_rng.bit_generator.state = data["rng"]["action"]
        agent._replay_rng.bit_generator.state = data["rng"]["replay"]
        return agent

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_checkpoint(), fh)

    @classmethod
    def load(cls, path) -> "DqnNetworkSelector":
        with open(path, encoding="utf-8") as fh:
            return cls.from_checkpoint(json.load(fh))
