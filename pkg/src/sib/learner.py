"""Exponential-weights learner over a product of second-order cones.

The strategy set is ``{(y_i, s_i)}_{i=1..n}`` with ``|y_i| <= s_i`` and
``sum(s) == 1``. Payoff blocks have the form ``(g_i, 0)``, whose spectral
values in the cone's Jordan algebra are ``+-|g_i|``. The normalized spectral
exponential of the accumulated payoff therefore has the closed form

    s_i = cosh(eta * w_i) / Z,   y_i = sinh(eta * w_i) / Z * G_i / w_i,

with ``w_i = |G_i|`` and ``Z = sum_j cosh(eta * w_j)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput


@dataclass
class DualIterate:
    """A point of the dual strategy set: block directions ``y`` (n, d) and masses ``s`` (n,)."""

    y: np.ndarray
    s: np.ndarray

    @property
    def n(self):
        return len(self.s)

    def cone_violation(self):
        """``max_i (|y_i| - s_i)``, at most 0 for a member of the set."""
        return float(np.max(np.linalg.norm(self.y, axis=1) - self.s))

    def mass_violation(self):
        return abs(float(np.sum(self.s)) - 1.0)

    def is_valid(self, tol=1e-12):
        return self.cone_violation() <= tol and self.mass_violation() <= tol and np.all(self.s >= 0)

    def resultant(self):
        """``sum_i y_i``."""
        return self.y.sum(axis=0)


def spectral_weights(G, eta):
    """Closed-form normalized cone exponential of the blocks ``(G_i, 0)``.

    Evaluated with a max-shift so that large ``eta * |G_i|`` cannot overflow.
    """
    G = np.asarray(G, dtype=float)
    w = np.sqrt(np.einsum("ij,ij->i", G, G))
    z = eta * w
    top = np.exp(z - z.max())
    decay = np.exp(-2.0 * z)
    ch = top * (1.0 + decay)
    sh = -top * np.expm1(-2.0 * z)
    Z = ch.sum()
    s = ch / Z
    scale = np.divide(sh / Z, w, out=np.zeros_like(w), where=w > 0)
    return DualIterate(y=scale[:, None] * G, s=s)


class LearnerState:
    """Accumulated payoffs and the anytime step size.

    Before round ``t + 1`` (``t`` payoffs observed) the step size is
    ``sqrt(ln(2n)) / (bound * sqrt(t + 1))``. If a payoff block exceeds
    ``bound`` in norm, ``bound`` is doubled until it covers it.
    """

    def __init__(self, n, d, payoff_bound, step_scale=1.0):
        if n < 1 or d < 1:
            raise InvalidInput("learner needs n >= 1 blocks of dimension d >= 1")
        if not payoff_bound > 0 or not np.isfinite(payoff_bound):
            raise InvalidInput(f"payoff_bound must be positive and finite, got {payoff_bound}")
        self.n = n
        self.d = d
        self.G = np.zeros((n, d))
        self.t = 0
        self.payoff_bound = float(payoff_bound)
        self._log2n = np.log(2 * n)
        self.step_scale = float(step_scale)

    @property
    def eta(self):
        return self.step_scale * np.sqrt(self._log2n) / (self.payoff_bound * np.sqrt(self.t + 1))

    def current(self):
        """The strategy to play next."""
        return spectral_weights(self.G, self.eta)

    def observe(self, payoff):
        """Add one round of payoff blocks ``g`` (shape (n, d)); returns ``self``."""
        g = np.asarray(payoff, dtype=float)
        if g.shape != (self.n, self.d):
            raise InvalidInput(f"payoff must have shape {(self.n, self.d)}, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InvalidInput("payoff has non-finite entries")
        peak = float(np.sqrt(np.einsum("ij,ij->i", g, g).max()))
        while peak > self.payoff_bound:
            self.payoff_bound *= 2.0
        self.G += g
        self.t += 1
        return self


def best_fixed_response_value(G, T):
    """Per-round value of the best fixed dual strategy against accumulated payoffs ``G``."""
    if T < 1:
        raise InvalidInput("T must be at least 1")
    G = np.asarray(G, dtype=float)
    return float(np.linalg.norm(G, axis=1).max()) / T
