"""q-ary symmetric channel: transition law, sampling, log-likelihood vectors.

Logs are natural logs throughout.  Probabilities are floored at
``PROB_FLOOR`` and log-likelihoods clamped at ``LL_MIN`` so that eps = 0 and
empty density-evolution masses stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROB_FLOOR = 1e-300
LL_MIN = -700.0


def safe_log(p):
    """Natural log with the probability floor and LL clamp applied."""
    p = np.maximum(np.asarray(p, dtype=float), PROB_FLOOR)
    return np.maximum(np.log(p), LL_MIN)


@dataclass(frozen=True)
class QscParams:
    q: int
    eps: float

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"q must be >= 2, got {self.q}")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")

    @property
    def d_ch(self) -> float:
        """Channel reliability ``log(1-eps) - log(eps/(q-1))``."""
        return float(safe_log(1.0 - self.eps) - safe_log(self.eps / (self.q - 1)))


def transition_prob(y, x, p: QscParams):
    y = np.asarray(y)
    x = np.asarray(x)
    return np.where(y == x, 1.0 - p.eps, p.eps / (p.q - 1))


def sample(x, p: QscParams, rng: np.random.Generator):
    """Pass symbols ``x`` through the channel.

    An error adds a uniformly drawn offset in ``1..q-1`` (mod q) to the
    symbol index, which is uniform over the q-1 wrong symbols.
    """
    x = np.asarray(x)
    flip = rng.random(x.shape) < p.eps
    offset = rng.integers(1, p.q, size=x.shape)
    return np.where(flip, (x + offset) % p.q, x)


def channel_llv(y, p: QscParams):
    """Log-likelihood vector ``L_u(y) = log P(y|u)``; batched over ``y``."""
    y = np.asarray(y)
    hit = safe_log(1.0 - p.eps)
    miss = safe_log(p.eps / (p.q - 1))
    out = np.full(y.shape + (p.q,), float(miss))
    np.put_along_axis(out, y[..., None], float(hit), axis=-1)
    return out
