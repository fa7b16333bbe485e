"""One-hidden-layer perceptron trained by full-batch gradient descent.

Parameters live in one flat vector so the analytic gradient can be
checked against central finite differences. Standardization is internal,
fitted on the training rows.
"""

import numpy as np

from ..errors import SingleClass
from ..rng import stream


def _param_shapes(n_in: int, hidden: int):
    return ((n_in, hidden), (hidden,), (hidden, 1), (1,))


def pack_params(w1, b1, w2, b2) -> np.ndarray:
    return np.concatenate([w1.ravel(), b1.ravel(), w2.ravel(), b2.ravel()])


def unpack_params(theta: np.ndarray, n_in: int, hidden: int):
    shapes = _param_shapes(n_in, hidden)
    out = []
    pos = 0
    for shape in shapes:
        size = int(np.prod(shape))
        out.append(theta[pos:pos + size].reshape(shape))
        pos += size
    return out


def loss_and_grad(theta: np.ndarray, x: np.ndarray, y: np.ndarray, hidden: int):
    """Mean cross-entropy of sigmoid(w2.relu(x w1 + b1) + b2) and its gradient."""
    n, d = x.shape
    w1, b1, w2, b2 = unpack_params(theta, d, hidden)
    a = x @ w1 + b1          # (n, h) pre-activation
    h = np.maximum(a, 0.0)   # relu
    z = (h @ w2).ravel() + b2[0]
    # stable softplus cross-entropy: mean(softplus(z) - y*z)
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
    dz = (p - y) / n                     # (n,)
    gw2 = h.T @ dz[:, None]              # (h, 1)
    gb2 = np.array([dz.sum()])
    dh = dz[:, None] * w2.ravel()[None, :]
    da = dh * (a > 0.0)
    gw1 = x.T @ da
    gb1 = da.sum(axis=0)
    return loss, pack_params(gw1, gb1, gw2, gb2)


class Mlp:
    def __init__(self, hidden_size: int = 16, learning_rate: float = 0.1,
                 epochs: int = 300):
        if hidden_size < 1:
            raise ValueError(f"hidden_size must be >= 1, got {hidden_size}")
        self.hidden_size = int(hidden_size)
        self.learning_rate = float(learning_rate)
        self.epochs = int(epochs)
        self.theta = None
        self.mean = None
        self.sd = None

    def _standardize(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.sd

    @staticmethod
    def init_params(n_in: int, hidden: int, rng: np.random.Generator) -> np.ndarray:
        parts = []
        for shape in _param_shapes(n_in, hidden):
            if len(shape) == 2:
                fan_in, fan_out = shape
                limit = np.sqrt(6.0 / (fan_in + fan_out))
                parts.append(rng.uniform(-limit, limit, size=shape).ravel())
            else:
                parts.append(np.zeros(shape))
        return np.concatenate(parts)

    def fit(self, x: np.ndarray, y: np.ndarray, seed: int) -> "Mlp":
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if y.min() == y.max():
            raise SingleClass("mlp needs both classes in the training set")
        self.mean = x.mean(axis=0)
        sd = x.std(axis=0)
        self.sd = np.where(sd > 0.0, sd, 1.0)
        z = self._standardize(x)
        theta = self.init_params(z.shape[1], self.hidden_size, stream(seed, "mlp"))
        for _ in range(self.epochs):
            _, grad = loss_and_grad(theta, z, y, self.hidden_size)
            theta = theta - self.learning_rate * grad
        self.theta = theta
        return self

    def predict_score(self, x: np.ndarray) -> np.ndarray:
        z = self._standardize(x)
        w1, b1, w2, b2 = unpack_params(self.theta, z.shape[1], self.hidden_size)
        h = np.maximum(z @ w1 + b1, 0.0)
        logits = (h @ w2).ravel() + b2[0]
        return 1.0 / (1.0 + np.exp(-np.clip(logits, -500, 500)))

    def to_dict(self) -> dict:
        return {
            "hidden_size": self.hidden_size,
            "learning_rate": repr(self.learning_rate),
            "epochs": self.epochs,
            "theta": [repr(float(v)) for v in self.theta],
            "mean": [repr(float(v)) for v in self.mean],
            "sd": [repr(float(v)) for v in self.sd],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Mlp":
        model = cls(hidden_size=d["hidden_size"],
                    learning_rate=float(d["learning_rate"]), epochs=d["epochs"])
        model.theta = np.array([float(v) for v in d["theta"]])
        model.mean = np.array([float(v) for v in d["mean"]])
        model.sd = np.array([float(v) for v in d["sd"]])
        return model
