"""Brute-force machinery backing the stability certificate.

Everything here re-derives, by direct enumeration or direct matrix
arithmetic, the objects the certificate takes on faith: the exchange
identity behind the commutator bookkeeping, the rewriting of an admissible
product into (left part) * combination^m + correction, and the exponential
envelope over every admissible product up to a horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .family import MatrixFamily
from .graph import SwitchGraph, build_graph
from .linalg import commutator, mat_power, operator_norm
from .search import StableCombination

DEFAULT_ENUM_CAP = 10_000_000


class EnumerationCapExceeded(RuntimeError):
    """The walk/product enumeration outgrew its cap; use a smaller instance."""


@dataclass(frozen=True)
class ProductDecomposition:
    """An admissible product split as main_term + correction.

    main_term is (everything left of m combination blocks) times
    combination^m; correction collects the commutator exchange terms that
    moving those blocks to the early end of the product generated.
    """

    total: np.ndarray
    main_term: np.ndarray
    correction: np.ndarray
    term_count: int
    residual: float
    starts_stable: bool


@dataclass(frozen=True)
class BoundCheck:
    """Worst envelope ratio over all admissible products up to a horizon."""

    max_ratio: float
    witness_walk: tuple[int, ...]
    witness_time: int
    products_checked: int


def exchange_identity_residual(family: MatrixFamily, comb) -> float:
    """Numerical residual of A_l C = C A_l + [A_l, C] over the family.

    Algebraically zero for any square C; the measured value only reflects
    floating-point rounding and should sit at the 1e-12 * scale level.
    """
    c = comb.product if isinstance(comb, StableCombination) else np.asarray(comb, float)
    worst = 0.0
    for a in family.subsystems:
        e = commutator(a, c)
        worst = max(worst, operator_norm(a @ c - (c @ a + e)))
    return worst


def _vertex_expansion(comb: StableCombination, hub: int):
    """Per-vertex subsystem step sequence (time order)."""

    def expansion(v: int) -> tuple[int, ...]:
        if v == hub:
            return (comb.tail,) * comb.tail_power + (comb.head,) * comb.head_power
        return (v,)

    return expansion


def _walk_duration(walk, comb: StableCombination, hub: int) -> int:
    return sum(comb.block_duration if v == hub else 1 for v in walk)


def enumerate_walks(
    graph: SwitchGraph,
    comb: StableCombination,
    max_duration: int,
    cap: int = DEFAULT_ENUM_CAP,
) -> list[tuple[int, ...]]:
    """Every nonempty walk whose expanded signal fits in `max_duration` steps.

    All start vertices are considered; the output is in lexicographic
    (depth-first, ascending successor) order.  Raises when more than `cap`
    walks would be produced.
    """
    if max_duration < 0:
        raise ValueError("max_duration must be nonnegative")
    hub = graph.stable_vertex
    out: list[tuple[int, ...]] = []

    def weight(v: int) -> int:
        return comb.block_duration if v == hub else 1

    def extend(prefix: tuple[int, ...], used: int) -> None:
        last = prefix[-1]
        for v in graph.out_neighbors(last):
            w = used + weight(v)
            if w <= max_duration:
                record(prefix + (v,), w)

    def record(walk: tuple[int, ...], used: int) -> None:
        if len(out) >= cap:
            raise EnumerationCapExceeded(
                f"more than {cap} walks of duration <= {max_duration}"
            )
        out.append(walk)
        extend(walk, used)

    for v in graph.vertices:
        if weight(v) <= max_duration:
            record((v,), weight(v))
    return out


def _envelope_scan(
    family: MatrixFamily,
    comb: StableCombination,
    rate: float,
    horizon: int,
    cap: int,
) -> BoundCheck:
    """Max of ||product|| * exp(rate * t) over every admissible product.

    Walks are expanded step by step, so products that stop mid-way through
    a combination block (which no whole-vertex walk represents) are
    covered as well.  The empty product at t=0 contributes 1.
    """
    graph = build_graph(family.size)
    hub = graph.stable_vertex
    expansion = _vertex_expansion(comb, hub)
    mats = family.subsystems
    best = 1.0
    best_walk: tuple[int, ...] = ()
    best_t = 0
    steps = 0

    def visit(p: np.ndarray, t: int, path: tuple[int, ...], last: int | None):
        nonlocal best, best_walk, best_t, steps
        successors = graph.vertices if last is None else graph.out_neighbors(last)
        for v in successors:
            pc, tc = p, t
            cut = False
            for ell in expansion(v):
                steps += 1
                if steps > cap:
                    raise EnumerationCapExceeded(
                        f"more than {cap} products up to horizon {horizon}"
                    )
                pc = mats[ell - 1] @ pc
                tc += 1
                value = operator_norm(pc) * math.exp(rate * tc)
                if value > best:
                    best, best_walk, best_t = value, path + (v,), tc
                if tc == horizon:
                    cut = True
                    break
            if not cut:
                visit(pc, tc, path + (v,), v)

    if horizon > 0:
        visit(np.eye(family.dim), 0, (), None)
    return BoundCheck(
        max_ratio=best, witness_walk=best_walk, witness_time=best_t,
        products_checked=steps,
    )


def basis_length(family: MatrixFamily, comb: StableCombination) -> int:
    """Product length the envelope constant must cover: m*(block + N)."""
    return comb.contraction_power * (comb.block_duration + family.size)


def envelope_constant(
    family: MatrixFamily,
    comb: StableCombination,
    rate: float,
    horizon: int | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> float:
    """Smallest c >= 1 with ||product|| <= c * exp(-rate * t) up to `horizon`.

    Computed exhaustively over every admissible product; the floor of 1
    covers the empty product at t=0.  The default horizon is the basis
    length the induction argument requires.
    """
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    if horizon is None:
        horizon = basis_length(family, comb)
    scan = _envelope_scan(family, comb, rate, horizon, cap)
    return max(1.0, scan.max_ratio)


def envelope_constant_bound(
    family: MatrixFamily,
    comb: StableCombination,
    rate: float,
    horizon: int | None = None,
) -> float:
    """Closed-form upper bound on the envelope constant.

    Every factor of an admissible product has norm at most the largest
    subsystem norm M, so c <= (M * exp(rate))^horizon.  Loose but valid;
    used when exhaustive enumeration would exceed its cap.  May return inf
    for horizons far beyond double range.
    """
    if horizon is None:
        horizon = basis_length(family, comb)
    m1 = max(operator_norm(a) for a in family.subsystems)
    log_c = horizon * (math.log(m1) + rate)
    return math.inf if log_c > 709.0 else max(1.0, math.exp(log_c))


def exhaustive_bound_check(
    family: MatrixFamily,
    comb: StableCombination,
    rate: float,
    c: float,
    horizon: int,
    cap: int = DEFAULT_ENUM_CAP,
) -> BoundCheck:
    """Check ||product|| <= c * exp(-rate * t) over every admissible product.

    Returns the largest ratio ||product|| * exp(rate*t) / c together with
    the walk (and time within it) achieving it; a value <= 1 certifies the
    envelope exhaustively up to `horizon`.
    """
    if c <= 0.0:
        raise ValueError("envelope constant must be positive")
    scan = _envelope_scan(family, comb, rate, horizon, cap)
    return BoundCheck(
        max_ratio=scan.max_ratio / c,
        witness_walk=scan.witness_walk,
        witness_time=scan.witness_time,
        products_checked=scan.products_checked,
    )


def _evaluate_tokens(tokens, family, comb_matrix, comm) -> np.ndarray:
    p = np.eye(family.dim)
    for tok in reversed(tokens):
        kind = tok[0]
        if kind == "A":
            factor = family.matrix(tok[1])
        elif kind == "C":
            factor = comb_matrix
        else:
            factor = comm[tok[1]]
        p = factor @ p
    return p


def decompose_product(
    family: MatrixFamily,
    comb: StableCombination,
    walk_segment,
) -> ProductDecomposition:
    """Rewrite the product of a basis-length segment around combination^m.

    The segment must expand to exactly m*(block + N) time steps and contain
    at least m combination blocks.  The m earliest blocks are commuted to
    the early end of the product with the exchange identity
    C A_l = A_l C - [A_l, C]; every swap past a plain factor freezes one
    correction term (sign -1, one commutator factor, one combination block
    fewer).  The pieces are then evaluated numerically.
    """
    graph = build_graph(family.size, allow_stable_self_loop=True)
    hub = graph.stable_vertex
    walk = [int(v) for v in walk_segment]
    for v in walk:
        if v not in graph.vertices:
            raise ValueError(f"vertex {v} outside 1..{hub}")
    m = comb.contraction_power
    needed = basis_length(family, comb)
    duration = _walk_duration(walk, comb, hub)
    if duration != needed:
        raise ValueError(
            f"segment duration {duration} != required basis length {needed}"
        )
    n_blocks = sum(1 for v in walk if v == hub)
    if n_blocks < m:
        raise ValueError(
            f"segment holds {n_blocks} combination blocks, needs at least {m}"
        )

    comb_matrix = np.asarray(comb.product, dtype=float)
    comm = {
        ell: commutator(family.matrix(ell), comb_matrix)
        for ell in range(1, family.size + 1)
    }
    # Product order: leftmost token is the latest time step.
    tokens = [("C",) if v == hub else ("A", v) for v in reversed(walk)]
    total = _evaluate_tokens(tokens, family, comb_matrix, comm)

    main = list(tokens)
    terms: list[list[tuple]] = []
    for settled in range(m):
        boundary = len(main) - settled  # positions >= boundary hold moved blocks
        idx = max(i for i in range(boundary) if main[i] == ("C",))
        while idx < boundary - 1:
            nxt = main[idx + 1]
            if nxt[0] == "A":
                terms.append(main[:idx] + [("E", nxt[1])] + main[idx + 2 :])
            # adjacent combination blocks commute exactly: swap, no term
            main[idx], main[idx + 1] = nxt, main[idx]
            idx += 1

    left = _evaluate_tokens(main[: len(main) - m], family, comb_matrix, comm)
    main_term = left @ mat_power(comb_matrix, m)
    correction = np.zeros((family.dim, family.dim))
    for term in terms:
        correction -= _evaluate_tokens(term, family, comb_matrix, comm)
    residual = operator_norm(total - (main_term + correction))
    return ProductDecomposition(
        total=total,
        main_term=main_term,
        correction=correction,
        term_count=len(terms),
        residual=residual,
        starts_stable=bool(walk and walk[0] == hub),
    )
