"""Search for a Schur-stable two-subsystem product and its contraction pair.

The scheduler needs one product A_head^hp @ A_tail^tp that is Schur stable
even though every individual subsystem is unstable, plus the smallest power
of that product whose operator norm drops below 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .family import MatrixFamily
from .linalg import (
    SCHUR_MARGIN,
    is_schur_stable,
    mat_power,
    operator_norm,
    spectral_radius,
)


class ContractionError(RuntimeError):
    """No power of the candidate product contracted within the allowed cap."""


@dataclass(frozen=True)
class StableCombination:
    """A Schur-stable product of two unstable subsystems.

    product = A_head^head_power @ A_tail^tail_power.  When the combination
    is scheduled, the tail subsystem runs first (tail_power steps) and the
    head subsystem second, so the accumulated product over those steps is
    exactly `product`.
    """

    head: int
    tail: int
    head_power: int
    tail_power: int
    product: np.ndarray
    contraction_power: int
    contraction_norm: float

    def __post_init__(self):
        if self.head == self.tail:
            raise ValueError("head and tail must be distinct subsystems")
        if min(self.head_power, self.tail_power, self.contraction_power) < 1:
            raise ValueError("powers must be positive integers")
        if not 0.0 < self.contraction_norm < 1.0:
            raise ValueError("contraction norm must lie in (0, 1)")
        p = np.asarray(self.product, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "product", p)

    @property
    def block_duration(self) -> int:
        """Time steps one scheduled instance of the combination occupies."""
        return self.head_power + self.tail_power


def assert_all_unstable(family: MatrixFamily, tol: float = SCHUR_MARGIN) -> list[int]:
    """Return the 1-based indices of subsystems that are Schur stable.

    An empty list means the all-unstable assumption holds.  Marginal
    matrices (spectral radius within tol of 1) count as unstable.
    """
    return [
        ell
        for ell, a in enumerate(family.subsystems, start=1)
        if spectral_radius(a) < 1.0 - tol
    ]


def compute_contraction(
    combo: np.ndarray, m_max: int = 512, tol: float = SCHUR_MARGIN
) -> tuple[int, float]:
    """Smallest power m in [1, m_max] with ||combo^m|| < 1, and that norm.

    Raises ValueError for a non-Schur-stable input and ContractionError if
    m_max is exhausted (possible for highly non-normal products; raise the
    cap in that case).
    """
    if not is_schur_stable(combo, tol):
        raise ValueError("precondition violated: matrix is not Schur stable")
    p = np.eye(combo.shape[0])
    for m in range(1, m_max + 1):
        p = combo @ p
        norm = operator_norm(p)
        if norm < 1.0:
            return m, norm
    raise ContractionError(
        f"no power up to m_max={m_max} has operator norm below 1"
    )


def _exponent_pairs(p_max: int, q_max: int):
    """(p, q) pairs ordered by total exponent p+q ascending, then p ascending."""
    for total in range(2, p_max + q_max + 1):
        for p in range(max(1, total - q_max), min(p_max, total - 1) + 1):
            yield p, total - p


def find_stable_combination(
    family: MatrixFamily,
    p_max: int = 10,
    q_max: int = 10,
    tol: float = SCHUR_MARGIN,
    m_max: int = 512,
) -> StableCombination | None:
    """First Schur-stable product A_i^p A_j^q in a fixed deterministic order.

    Candidates are scanned by total exponent p+q ascending, then p
    ascending, then ordered pairs (i, j), i != j, lexicographically; the
    smallest total exponent loosens the downstream certificate the most.
    Pairs with i == j are skipped: powers of an unstable matrix have
    spectral radius >= 1 and are never Schur stable.  Stable hits whose
    power norms never contract within m_max (spectral radius barely under
    1) are skipped as unusable.

    Returns None when the bounded grid is exhausted.
    """
    if p_max < 1 or q_max < 1:
        raise ValueError("exponent bounds must be at least 1")
    n = family.size
    # Cache powers A^k lazily; the grid revisits the same exponents often.
    powers: dict[tuple[int, int], np.ndarray] = {}

    def power(ell: int, k: int) -> np.ndarray:
        key = (ell, k)
        if key not in powers:
            powers[key] = mat_power(family.matrix(ell), k)
        return powers[key]

    for p, q in _exponent_pairs(p_max, q_max):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                candidate = power(i, p) @ power(j, q)
                if is_schur_stable(candidate, tol):
                    try:
                        m, rho = compute_contraction(candidate, m_max, tol)
                    except ContractionError:
                        # spectral radius barely under 1: norms of its powers
                        # never drop below 1 within the cap; an unusable hit,
                        # keep scanning
                        continue
                    return StableCombination(
                        head=i,
                        tail=j,
                        head_power=p,
                        tail_power=q,
                        product=candidate,
                        contraction_power=m,
                        contraction_norm=rho,
                    )
    return None
