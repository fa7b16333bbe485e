"""Linear SVM via epoch-based stochastic subgradient descent.

Features are standardized internally (fitted on the training rows given
to fit), so raw-feature rescaling cannot change predictions. The margin
is mapped to a probability with a logistic link calibrated on the
training margins by damped Newton iterations.
"""

import math

import numpy as np

from ..errors import SingleClass
from ..rng import stream


def _platt_fit(margins: np.ndarray, y01: np.ndarray):
    """Fit P(y=1|m) = sigmoid(-(A*m + B)) on training margins.

    Newton with backtracking on the cross-entropy; targets use the
    standard smoothed prior counts so saturated margins stay stable.
    """
    n_pos = int(y01.sum())
    n_neg = len(y01) - n_pos
    hi = (n_pos + 1.0) / (n_pos + 2.0)
    lo = 1.0 / (n_neg + 2.0)
    target = np.where(y01 == 1, hi, lo)
    a, b = 0.0, math.log((n_neg + 1.0) / (n_pos + 1.0))

    def loss(a_, b_):
        z = a_ * margins + b_
        # cross-entropy of sigmoid(-z) against target, numerically stable
        return float(np.mean(target * z + np.logaddexp(0.0, -z)))

    cur = loss(a, b)
    for _ in range(100):
        z = a * margins + b
        p = 1.0 / (1.0 + np.exp(np.clip(z, -500, 500)))  # current P(y=1)
        g = target - p  # d loss / d z
        ga = float(np.mean(g * margins))
        gb = float(np.mean(g))
        w = p * (1.0 - p)
        haa = float(np.mean(w * margins * margins)) + 1e-12
        hab = float(np.mean(w * margins))
        hbb = float(np.mean(w)) + 1e-12
        det = haa * hbb - hab * hab
        if abs(det) < 1e-18:
            break
        da = -(hbb * ga - hab * gb) / det
        db = -(haa * gb - hab * ga) / det
        step = 1.0
        improved = False
        for _bt in range(30):
            cand = loss(a + step * da, b + step * db)
            if cand < cur - 1e-15:
                a += step * da
                b += step * db
                cur = cand
                improved = True
                break
            step /= 2.0
        if not improved or (abs(da) + abs(db)) * step < 1e-12:
            break
    return a, b


class LinearSvm:
    def __init__(self, lam: float = 1e-2, epochs: int = 20):
        if lam <= 0:
            raise ValueError(f"regularization must be positive, got {lam}")
        self.lam = float(lam)
        self.epochs = int(epochs)
        self.w = None       # includes bias as last component
        self.mean = None
        self.sd = None
        self.platt_a = 0.0
        self.platt_b = 0.0

    def _standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean) / self.sd

    def fit(self, x: np.ndarray, y: np.ndarray, seed: int) -> "LinearSvm":
        x = np.asarray(x, dtype=np.float64)
        y01 = np.asarray(y, dtype=np.int64)
        if y01.min() == y01.max():
            raise SingleClass("svm needs both classes in the training set")
        self.mean = x.mean(axis=0)
        sd = x.std(axis=0)
        self.sd = np.where(sd > 0.0, sd, 1.0)
        z = self._standardize(x)
        z = np.hstack([z, np.ones((len(z), 1))])
        ypm = np.where(y01 == 1, 1.0, -1.0)

        n, m = z.shape
        w = np.zeros(m)
        rng = stream(seed, "svm")
        t = 0
        for _epoch in range(self.epochs):
            order = rng.permutation(n)
            for i in order:
                t += 1
                eta = 1.0 / (self.lam * t)
                margin = ypm[i] * float(z[i] @ w)
                w *= (1.0 - eta * self.lam)
                if margin < 1.0:
                    w += eta * ypm[i] * z[i]
        self.w = w
        self.platt_a, self.platt_b = _platt_fit(z @ w, y01)
        return self

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        z = self._standardize(np.asarray(x, dtype=np.float64))
        return np.hstack([z, np.ones((len(z), 1))]) @ self.w

    def predict_score(self, x: np.ndarray) -> np.ndarray:
        zed = self.platt_a * self.decision_function(x) + self.platt_b
        return 1.0 / (1.0 + np.exp(np.clip(zed, -500, 500)))

    def to_dict(self) -> dict:
        return {
            "lam": repr(self.lam),
            "epochs": self.epochs,
            "w": [repr(float(v)) for v in self.w],
            "mean": [repr(float(v)) for v in self.mean],
            "sd": [repr(float(v)) for v in self.sd],
            "platt_a": repr(self.platt_a),
            "platt_b": repr(self.platt_b),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearSvm":
        model = cls(lam=float(d["lam"]), epochs=d["epochs"])
        model.w = np.array([float(v) for v in d["w"]])
        model.mean = np.array([float(v) for v in d["mean"]])
        model.sd = np.array([float(v) for v in d["sd"]])
        model.platt_a = float(d["platt_a"])
        model.platt_b = float(d["platt_b"])
        return model
