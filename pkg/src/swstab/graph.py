"""Switching schedules as walks on a chain-plus-hub directed graph.

Vertices 1..N stand for the plain subsystems and vertex N+1 for the stable
two-subsystem combination.  Edges run along the ascending chain (l, l+1),
from every plain vertex into the hub, and from the hub back to every plain
vertex.  Any infinite walk on this graph expands into a switching signal:
a plain vertex dwells one step, the hub dwells tail_power steps on the
tail subsystem and then head_power steps on the head subsystem.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence

import numpy as np

from .search import StableCombination

#: Walk policies understood by WalkGenerator / generate_walk.
POLICIES = ("uniform-random", "round-robin", "alternate-stable")


@dataclass(frozen=True)
class SwitchGraph:
    n_subsystems: int
    allow_stable_self_loop: bool = False

    def __post_init__(self):
        if self.n_subsystems < 1:
            raise ValueError("need at least one subsystem vertex")
        n, hub = self.n_subsystems, self.n_subsystems + 1
        chain = {(ell, ell + 1) for ell in range(1, n)}
        into_hub = {(ell, hub) for ell in range(1, n + 1)}
        from_hub = {(hub, ell) for ell in range(1, n + 1)}
        extra = {(hub, hub)} if self.allow_stable_self_loop else set()
        edges = frozenset(chain | into_hub | from_hub | extra)
        out = {
            v: tuple(sorted(w for (u, w) in edges if u == v))
            for v in range(1, hub + 1)
        }
        object.__setattr__(self, "_edges", edges)
        object.__setattr__(self, "_out", out)

    @property
    def stable_vertex(self) -> int:
        return self.n_subsystems + 1

    @property
    def vertices(self) -> range:
        return range(1, self.n_subsystems + 2)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        if v not in self.vertices:
            raise ValueError(f"vertex {v} outside 1..{self.stable_vertex}")
        return self._out[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges


def build_graph(n_subsystems: int, allow_stable_self_loop: bool = False) -> SwitchGraph:
    """The chain-plus-hub graph on N+1 vertices.

    The hub self-loop is off by default (it is not part of the scheduling
    construction); enabling it admits purely periodic schedules as walks.
    """
    return SwitchGraph(n_subsystems, allow_stable_self_loop)


def validate_walk(graph: SwitchGraph, vertices: Sequence[int]) -> list[int]:
    """Check vertex ranges and adjacency; raise naming the first bad pair."""
    walk = [int(v) for v in vertices]
    for v in walk:
        if v not in graph.vertices:
            raise ValueError(f"vertex {v} outside 1..{graph.stable_vertex}")
    for u, v in zip(walk, walk[1:]):
        if not graph.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge of the switch graph")
    return walk


class WalkGenerator:
    """Resumable walk generator for one policy.

    Policies:
      * ``uniform-random`` -- the start vertex (unless given) and every
        successor are drawn uniformly; randomness comes from numpy's PCG64
        so identical seeds reproduce identical walks anywhere.
      * ``round-robin`` -- always moves to the smallest out-neighbor,
        cycling through the subsystems in ascending order.
      * ``alternate-stable`` -- hub, partner, hub, partner, ...

    A generator is single-threaded mutable state; create one per thread.
    """

    def __init__(
        self,
        graph: SwitchGraph,
        policy: str,
        seed: int | None = None,
        start: int | None = None,
        partner: int = 1,
    ):
        if policy not in POLICIES:
            raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
        if policy == "uniform-random" and seed is None:
            raise ValueError("uniform-random policy requires a seed")
        if not 1 <= partner <= graph.n_subsystems:
            raise ValueError(f"partner {partner} is not a subsystem index")
        self.graph = graph
        self.policy = policy
        self.partner = partner
        self._rng = np.random.Generator(np.random.PCG64(seed))
        if start is not None and start not in graph.vertices:
            raise ValueError(f"start vertex {start} outside the graph")
        self._last: int | None = None
        self._start = start

    def _first_vertex(self) -> int:
        if self._start is not None:
            return self._start
        if self.policy == "uniform-random":
            return int(self._rng.integers(1, self.graph.stable_vertex + 1))
        if self.policy == "alternate-stable":
            return self.graph.stable_vertex
        return 1  # round-robin

    def _next_vertex(self, last: int) -> int:
        options = self.graph.out_neighbors(last)
        if self.policy == "uniform-random":
            return int(options[self._rng.integers(len(options))])
        if self.policy == "alternate-stable":
            return (
                self.partner
                if last == self.graph.stable_vertex
                else self.graph.stable_vertex
            )
        return options[0]  # round-robin

    def take(self, n: int) -> list[int]:
        """The next n vertices of the walk."""
        out = []
        for _ in range(n):
            v = self._first_vertex() if self._last is None else self._next_vertex(self._last)
            out.append(v)
            self._last = v
        return out


def generate_walk(
    graph: SwitchGraph,
    policy: str | Sequence[int],
    steps: int,
    seed: int | None = None,
    *,
    start: int | None = None,
    partner: int = 1,
) -> list[int]:
    """A walk of `steps` vertices under the given policy.

    An explicit vertex sequence may be passed as the policy; it is
    validated against the graph and returned as-is (`steps` must match its
    length).
    """
    if not isinstance(policy, str):
        walk = validate_walk(graph, policy)
        if steps != len(walk):
            raise ValueError(
                f"explicit walk has {len(walk)} vertices, expected steps={steps}"
            )
        return walk
    if steps < 1:
        raise ValueError("steps must be at least 1")
    return WalkGenerator(graph, policy, seed=seed, start=start, partner=partner).take(steps)


@dataclass(frozen=True)
class SwitchingSignal:
    """A run-length switching schedule: (subsystem index, dwell) pairs."""

    runs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for ell, dur in self.runs:
            if dur < 1:
                raise ValueError(f"run ({ell}, {dur}) has non-positive duration")
        object.__setattr__(
            self, "_ends", tuple(accumulate(d for _, d in self.runs))
        )

    @property
    def duration(self) -> int:
        return self._ends[-1] if self.runs else 0

    @property
    def switching_instants(self) -> tuple[int, ...]:
        """Start times of each run (cumulative sums of the dwells)."""
        return (0,) + self._ends[:-1] if self.runs else ()

    def index_at(self, t: int) -> int:
        """Active subsystem at time step t."""
        if not 0 <= t < self.duration:
            raise ValueError(f"time {t} outside 0..{self.duration - 1}")
        return self.runs[bisect_right(self._ends, t)][0]

    def indices(self) -> np.ndarray:
        """The expanded per-step index sequence, length `duration`."""
        return np.repeat(
            [ell for ell, _ in self.runs], [d for _, d in self.runs]
        ).astype(int)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["t", "sigma"])
            for t, ell in enumerate(self.indices()):
                writer.writerow([t, int(ell)])


def signal_at(signal: SwitchingSignal, t: int) -> int:
    return signal.index_at(t)


def walk_to_signal(
    graph: SwitchGraph, walk: Iterable[int], comb: StableCombination
) -> SwitchingSignal:
    """Expand walk vertices into runs.

    A plain vertex contributes one run of one step; the hub contributes
    the tail subsystem for tail_power steps and then the head subsystem
    for head_power steps.  Consecutive equal runs are kept separate so the
    expansion stays invertible.
    """
    runs: list[tuple[int, int]] = []
    for v in walk:
        if v == graph.stable_vertex:
            runs.append((comb.tail, comb.tail_power))
            runs.append((comb.head, comb.head_power))
        elif v in graph.vertices:
            runs.append((int(v), 1))
        else:
            raise ValueError(f"vertex {v} outside 1..{graph.stable_vertex}")
    return SwitchingSignal(tuple(runs))


def max_stable_gap(graph: SwitchGraph, walk: Sequence[int]) -> int:
    """Longest run of consecutive plain vertices between hub visits.

    Counts the prefix before the first hub visit and the tail after the
    last one; the graph structure bounds the result by N on valid walks.
    """
    gap = best = 0
    for v in walk:
        if v == graph.stable_vertex:
            gap = 0
        else:
            gap += 1
            best = max(best, gap)
    return best
