"""Fully-connected Q-network with hand-rolled backpropagation.

No learning framework: layers are plain numpy weight matrices and bias
vectors, the forward pass is matrix products with rectified-linear hidden
activations and a linear output, and training is one mean-squared-error SGD
step on the taken action's Q-value. Keeping the math explicit makes the
gradients directly checkable against finite differences.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ConfigurationError

DEFAULT_ARCH = (24, 64, 64, 4)

CHECKPOINT_FORMAT = "qnet-json-v1"


def td_update_scalar(q: float, alpha: float, r: float, gamma: float, max_q_next: float) -> float:
    """One tabular temporal-difference update:

    q + alpha * (r + gamma * max_q_next - q)

    The network realizes the same rule through gradient steps; this scalar
    form defines the semantics and anchors the tests.
    """
    return q + alpha * (r + gamma * max_q_next - q)


def td_targets(rewards, dones, gamma: float, max_q_next) -> np.ndarray:
    """Training targets y = r for terminal transitions, else r + gamma * max_a Q'(s', a)."""
    rewards = np.asarray(rewards, dtype=float)
    dones = np.asarray(dones, dtype=bool)
    max_q_next = np.asarray(max_q_next, dtype=float)
    return rewards + np.where(dones, 0.0, gamma * max_q_next)


class QNetwork:
    """Multilayer perceptron mapping a state vector to one Q-value per action.

    ``sizes`` lists layer widths input-first, e.g. (24, 64, 64, 4). Weights
    are drawn uniformly in [-sqrt(6/(fan_in+fan_out)), +sqrt(...)], biases
    start at zero, and the draw is deterministic for a given seed (anything
    ``numpy.random.default_rng`` accepts).
    """

    def __init__(self, sizes=DEFAULT_ARCH, seed=0):
        sizes = tuple(int(s) for s in sizes)
        if len(sizes) < 2 or any(s <= 0 for s in sizes):
            raise ConfigurationError(f"layer sizes must be positive, got {sizes}")
        self.sizes = sizes
        rng = np.random.default_rng(seed)
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            self.biases.append(np.zeros(fan_out))

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def forward(self, states) -> np.ndarray:
        """Q-values for one state vector or a batch of them.

        A (input_dim,) vector returns (n_actions,); an (n, input_dim) batch
        returns (n, n_actions).
        """
        states = np.asarray(states, dtype=float)
        single = states.ndim == 1
        X = states[None, :] if single else states
        if X.ndim != 2 or X.shape[1] != self.sizes[0]:
            raise ValueError(f"expected input of dimension {self.sizes[0]}, got shape {states.shape}")
        q = self._forward_cached(X)[0]
        return q[0] if single else q

    def _forward_cached(self, X):
        # Returns output plus the per-layer activations and pre-activations
        # the backward pass needs.
        activations = [X]
        pre = []
        h = X
        last = len(self.weights) - 1
        for k, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ W.T + b
            pre.append(z)
            h = np.maximum(z, 0.0) if k < last else z
            activations.append(h)
        return h, activations, pre

    def loss_and_gradients(self, states, actions, targets):
        """Mean squared error on the taken actions' Q-values, with gradients.

        loss = mean_i (Q(s_i)[a_i] - y_i)^2. Gradients flow only through the
        output unit of the action actually taken.
        """
        X = np.atleast_2d(np.asarray(states, dtype=float))
        actions = np.asarray(actions, dtype=int)
        targets = np.asarray(targets, dtype=float)
        n = X.shape[0]
        q, activations, pre = self._forward_cached(X)
        taken = q[np.arange(n), actions]
        diff = taken - targets
        loss = float(np.mean(diff**2))

        d = np.zeros_like(q)
        d[np.arange(n), actions] = 2.0 * diff / n
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.weights)
        for k in range(len(self.weights) - 1, -1, -1):
            grads_w[k] = d.T @ activations[k]
            grads_b[k] = d.sum(axis=0)
            if k > 0:
                d = (d @ self.weights[k]) * (pre[k - 1] > 0)
        return loss, (grads_w, grads_b)

    def apply_gradients(self, grads, learning_rate: float):
        grads_w, grads_b = grads
        for k in range(len(self.weights)):
            self.weights[k] -= learning_rate * grads_w[k]
            self.biases[k] -= learning_rate * grads_b[k]

    def train_batch(self, transitions, target_net: "QNetwork", alpha: float, gamma: float):
        """One SGD step on a batch of transitions; returns the pre-step loss.

        Targets are y = r for terminal transitions and r + gamma * max_a
        Q_target(s', a) otherwise, with the bootstrap evaluated on
        ``target_net``. An empty batch is skipped (returns None, no update).
        """
        if not transitions:
            return None
        states = np.array([t.state for t in transitions], dtype=float)
        actions = np.array([t.action for t in transitions], dtype=int)
        rewards = np.array([t.reward for t in transitions], dtype=float)
        next_states = np.array([t.next_state for t in transitions], dtype=float)
        dones = np.array([t.done for t in transitions], dtype=bool)
        max_q_next = target_net.forward(next_states).max(axis=1)
        targets = td_targets(rewards, dones, gamma, max_q_next)
        loss, grads = self.loss_and_gradients(states, actions, targets)
        self.apply_gradients(grads, alpha)
        return loss

    def copy(self) -> "QNetwork":
        """Deep copy; later updates to either network leave the other untouched."""
        clone = QNetwork.__new__(QNetwork)
        clone.sizes = self.sizes
        clone.weights = [w.copy() for w in self.weights]
        clone.biases = [b.copy() for b in self.biases]
        return clone

    def copy_from(self, other: "QNetwork"):
        if other.sizes != self.sizes:
            raise ValueError(f"architecture mismatch: {other.sizes} vs {self.sizes}")
        self.weights = [w.copy() for w in other.weights]
        self.biases = [b.copy() for b in other.biases]

    # Flat parameter views, used by the finite-difference gradient checks and
    # to keep checkpoints order-stable.
    def get_flat(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)

    def set_flat(self, flat):
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} parameters, got shape {flat.shape}")
        pos = 0
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            self.weights[k] = flat[pos : pos + w.size].reshape(w.shape).copy()
            pos += w.size
            self.biases[k] = flat[pos : pos + b.size].copy()
            pos += b.size

    def flat_gradients(self, grads) -> np.ndarray:
        grads_w, grads_b = grads
        parts = []
        for gw, gb in zip(grads_w, grads_b):
            parts.append(gw.ravel())
            parts.append(gb)
        return np.concatenate(parts)

    # Checkpoint format: a single JSON document with the layer list in order,
    # each layer's weight matrix row-major. Floats survive the round trip
    # exactly (decimal repr). Kept stable for reload; bump CHECKPOINT_FORMAT
    # on any layout change.
    def to_checkpoint(self) -> dict:
        return {
            "format": CHECKPOINT_FORMAT,
            "sizes": list(self.sizes),
            "layers": [
                {"weights": w.tolist(), "biases": b.tolist()}
                for w, b in zip(self.weights, self.biases)
            ],
        }

    @classmethod
    def from_checkpoint(cls, data: dict) -> "QNetwork":
        if data.get("format") != CHECKPOINT_FORMAT:
            raise ValueError(f"unsupported checkpoint format: {data.get('format')!r}")
        net = cls(sizes=data["sizes"], seed=0)
        for k, layer in enumerate(data["layers"]):
            w = np.array(layer["weights"], dtype=float)
            b = np.array(layer["biases"], dtype=float)
            if w.shape != net.weights[k].shape or b.shape != net.biases[k].shape:
                raise ValueError("checkpoint layer shapes do not match the declared sizes")
            net.weights[k] = w
            net.biases[k] = b
        return net

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_checkpoint(), fh)

    @classmethod
    def load(cls, path) -> "QNetwork":
        with open(path, encoding="utf-8") as fh:
            return cls.from_checkpoint(json.load(fh))
