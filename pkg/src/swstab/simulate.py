"""Trajectory simulation, product-norm sequences, and decay envelopes."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .family import MatrixFamily
from .graph import SwitchingSignal
from .linalg import as_vector, operator_norm

# Norms below this underflow guard are dropped before taking logs.
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class Trajectory:
    """States and their Euclidean norms over 0..T."""

    states: np.ndarray  # shape (T+1, d)
    norms: np.ndarray  # shape (T+1,)

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.states.shape[0])

    def write_csv(self, path, include_states: bool = False) -> None:
        d = self.states.shape[1]
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            header = ["t", "norm"]
            if include_states:
                header += [f"x{k + 1}" for k in range(d)]
            writer.writerow(header)
            for t in range(self.states.shape[0]):
                row = [t, f"{self.norms[t]:.17g}"]
                if include_states:
                    row += [f"{v:.17g}" for v in self.states[t]]
                writer.writerow(row)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares exponential envelope norm[t] ~ amplitude * exp(-rate*t)."""

    amplitude: float
    rate: float


@dataclass(frozen=True)
class GesCheck:
    holds: bool
    worst_margin: float
    worst_t: int


def _check_horizon(signal: SwitchingSignal, horizon: int) -> None:
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if horizon > signal.duration:
        raise ValueError(
            f"horizon {horizon} exceeds signal duration {signal.duration}"
        )


def simulate(
    family: MatrixFamily,
    signal: SwitchingSignal,
    x0,
    horizon: int,
) -> Trajectory:
    """Step the switched recursion x(t+1) = A_sigma(t) x(t) for `horizon` steps.

    Strict step-by-step left-multiplication with no product caching, so the
    evaluation order matches mat_power and the product-norm sequence
    bit for bit.
    """
    x = as_vector(x0, family.dim)
    _check_horizon(signal, horizon)
    states = np.empty((horizon + 1, family.dim))
    states[0] = x
    for t in range(horizon):
        x = family.matrix(signal.index_at(t)) @ x
        states[t + 1] = x
    norms = np.linalg.norm(states, axis=1)
    return Trajectory(states=states, norms=norms)


def product_norms(
    family: MatrixFamily, signal: SwitchingSignal, horizon: int
) -> np.ndarray:
    """Operator norms of the accumulated matrix product at each time.

    Entry 0 is the empty product (norm 1); entry t is the norm of
    A_sigma(t-1) ... A_sigma(0).  The full product matrix is accumulated
    and re-normed at every step; at the small dimensions in scope this is
    cheaper than any incremental bound and exact.
    """
    _check_horizon(signal, horizon)
    p = np.eye(family.dim)
    out = np.empty(horizon + 1)
    out[0] = 1.0
    for t in range(horizon):
        p = family.matrix(signal.index_at(t)) @ p
        out[t + 1] = operator_norm(p)
    return out


def verify_ges(norms, c: float, rate: float) -> GesCheck:
    """Check norms[t] <= c * exp(-rate * t) for every t >= 1.

    The comparison is non-strict; worst_margin is the smallest envelope
    slack and worst_t where it occurs.
    """
    if c <= 0.0 or rate <= 0.0:
        raise ValueError("envelope constant and rate must be positive")
    norms = np.asarray(norms, dtype=float)
    if norms.size < 2:
        raise ValueError("need at least one step beyond t=0")
    t = np.arange(1, norms.size)
    margins = c * np.exp(-rate * t) - norms[1:]
    worst = int(np.argmin(margins))
    return GesCheck(
        holds=bool(margins[worst] >= 0.0),
        worst_margin=float(margins[worst]),
        worst_t=int(t[worst]),
    )


def fit_decay(norms) -> DecayFit:
    """Ordinary least squares of log norms against time.

    Entries below the underflow guard are dropped; at least two positive
    entries are required.
    """
    norms = np.asarray(norms, dtype=float)
    t = np.arange(norms.size)
    keep = norms > _LOG_FLOOR
    if int(np.count_nonzero(keep)) < 2:
        raise ValueError("need at least two positive norms to fit a decay rate")
    slope, intercept = np.polyfit(t[keep], np.log(norms[keep]), 1)
    return DecayFit(amplitude=math.exp(intercept), rate=-float(slope))
