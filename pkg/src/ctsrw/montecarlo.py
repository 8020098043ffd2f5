"""Seeded event-driven simulation of the single- and multi-person walks.

Every replica draws from its own Philox stream keyed by the seed with the
replica index in the counter, so results do not depend on how replicas are
split across workers. Per-replica outcomes are folded in replica order.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import accumulate

import numpy as np
from numpy.random import Generator, Philox

from .graph import WeightedGraph

MAX_EVENTS = 10**7
MAX_CAPPED_FRACTION = 1e-4
_BLOCK = 256


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class StoppingTimeSpec:
    """What ends a replica.

    kind is one of ``first_return`` (x), ``hitting`` (x -> y),
    ``fixed_edge_return`` (start at x, stop on the first jump y -> x),
    ``coalesce`` (all persons on x), or ``horizon`` (time or step budget t).
    """

    kind: str
    x: int | None = None
    y: int | None = None
    t: float | None = None

    @classmethod
    def first_return(cls, x: int) -> StoppingTimeSpec:
        return cls("first_return", x=x)

    @classmethod
    def hitting(cls, x: int, y: int) -> StoppingTimeSpec:
        return cls("hitting", x=x, y=y)

    @classmethod
    def fixed_edge_return(cls, x: int, y: int) -> StoppingTimeSpec:
        return cls("fixed_edge_return", x=x, y=y)

    @classmethod
    def coalesce_at(cls, i: int) -> StoppingTimeSpec:
        return cls("coalesce", x=i)

    @classmethod
    def horizon(cls, t: float) -> StoppingTimeSpec:
        return cls("horizon", t=t)

    def validate(self, g: WeightedGraph) -> None:
        kinds = ("first_return", "hitting", "fixed_edge_return", "coalesce", "horizon")
        if self.kind not in kinds:
            raise ValueError(f"unknown stopping-time kind {self.kind!r}")
        for v in (self.x, self.y):
            if v is not None and not 0 <= v < g.n:
                raise ValueError(f"vertex {v} is not in the graph")
        if self.kind in ("first_return", "coalesce") and self.x is None:
            raise ValueError(f"{self.kind} needs a vertex")
        if self.kind == "hitting":
            if self.x is None or self.y is None or self.x == self.y:
                raise ValueError("hitting needs two distinct vertices")
        if self.kind == "fixed_edge_return":
            if self.x is None or self.y is None or g.weight(self.x, self.y) == 0.0:
                raise ValueError("fixed_edge_return needs an edge (x, y)")
        if self.kind == "horizon" and not (self.t is not None and self.t > 0):
            raise ValueError("horizon needs t > 0")


@dataclass(frozen=True)
class SimConfig:
    """``start`` overrides the spec's start vertex: a vertex index, or a
    probability vector sampled once per replica. Only used by horizon runs
    and the multi-person walk (where it is a tuple of per-person vertices)."""

    seed: int = 0
    replicas: int = 10_000
    max_events: int = MAX_EVENTS
    start: object = None
    workers: int = 1

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if self.max_events < 1:
            raise ValueError("max_events must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Estimate:
    mean: float
    variance: float
    stderr: float
    replicas: int
    seed: int
    units: str

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int, units: str) -> Estimate:
        k = len(samples)
        mean = math.fsum(samples) / k
        var = math.fsum((samples - mean) ** 2) / (k - 1) if k > 1 else 0.0
        return cls(mean, var, math.sqrt(var / k), k, seed, units)

    def within(self, target: float, bands: float = 4.0) -> bool:
        return abs(self.mean - target) <= bands * self.stderr


@dataclass(frozen=True)
class SimResult:
    """Per-replica samples (capped replicas excluded) and their estimates."""

    time: Estimate | None
    jumps: Estimate
    times: np.ndarray | None = field(repr=False)
    counts: np.ndarray = field(repr=False)
    capped: int = 0

    def paired(self, factor: float) -> Estimate:
        """Estimate of E(N_T) - factor * E(T) from paired samples."""
        if self.times is None:
            raise ValueError("no time samples")
        return Estimate.from_samples(self.counts - factor * self.times, self.jumps.seed, "steps")


def _stream(seed: int, replica: int):
    """Buffered uniforms in (0, 1] for one replica."""
    rng = Generator(Philox(key=seed, counter=[0, 0, 0, replica]))
    while True:
        for u in rng.random(_BLOCK).tolist():
            yield 1.0 - u


class _Walker:
    """Neighbour tables shaped for fast per-step sampling."""

    def __init__(self, g: WeightedGraph):
        self.nbrs = [list(g.neighbors(v)) for v in range(g.n)]
        self.cum = [list(accumulate(g.neighbor_weights(v))) for v in range(g.n)]
        self.rate = [c[-1] for c in self.cum]

    def step(self, v: int, u: float) -> int:
        c = self.cum[v]
        k = bisect_right(c, u * c[-1])
        return self.nbrs[v][min(k, len(c) - 1)]


def _start_vertex(start, spec: StoppingTimeSpec, draw) -> int:
    if spec.kind != "horizon" or start is None:
        if spec.kind == "horizon":
            return 0
        return spec.x
    if isinstance(start, (int, np.integer)):
        return int(start)
    cum = list(accumulate(start))
    return min(bisect_right(cum, draw() * cum[-1]), len(cum) - 1)


def _run_walk(g, spec, start, seed, lo, hi, max_events, continuous):
    walker = _Walker(g)
    step, rate = walker.step, walker.rate
    out_t, out_n, capped = [], [], 0
    for r in range(lo, hi):
        u = _stream(seed, r).__next__
        v = _start_vertex(start, spec, u)
        kind = spec.kind
        target = spec.y if kind in ("hitting", "fixed_edge_return") else spec.x
        horizon = spec.t if kind == "horizon" else math.inf
        t = 0.0
        jumps = 0
        while True:
            if jumps >= max_events:
                capped += 1
                t = None
                break
            if continuous:
                hold = -math.log(u()) / rate[v]
                if kind == "horizon" and t + hold > horizon:
                    t = horizon
                    break
                t += hold
            elif kind == "horizon" and jumps >= horizon:
                break
            w = step(v, u())
            jumps += 1
            if kind == "first_return":
                done = w == target
            elif kind == "hitting":
                done = w == target
            elif kind == "fixed_edge_return":
                done = v == target and w == spec.x
            else:
                done = False
            v = w
            if done:
                break
        if t is not None:
            out_t.append(t)
            out_n.append(jumps)
    return out_t, out_n, capped


def _run_mpsrw(g, target, start, seed, lo, hi, max_events, uniform):
    walker = _Walker(g)
    step = walker.step
    deg = [len(a) for a in walker.nbrs]
    n = g.n
    out, capped = [], 0
    for r in range(lo, hi):
        u = _stream(seed, r).__next__
        pos = list(start)
        at_target = sum(1 for v in pos if v == target)
        total_deg = sum(deg[v] for v in pos)
        steps = 0
        while at_target < n:
            if steps >= max_events:
                capped += 1
                steps = None
                break
            if uniform:
                k = min(int(u() * n), n - 1)
            else:
                # Each of the total_deg single-person moves is equally likely.
                acc, pick, k = 0, u() * total_deg, 0
                while True:
                    acc += deg[pos[k]]
                    if pick <= acc or k == n - 1:
                        break
                    k += 1
            v = pos[k]
            w = step(v, u())
            pos[k] = w
            total_deg += deg[w] - deg[v]
            at_target += (w == target) - (v == target)
            steps += 1
        if steps is not None:
            out.append(steps)
    return out, capped


def _partition(replicas: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, replicas))
    bounds = np.linspace(0, replicas, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _dispatch(fn, args_for, config: SimConfig):
    chunks = _partition(config.replicas, config.workers)
    if len(chunks) == 1:
        return [fn(*args_for(*chunks[0]))]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(fn, *args_for(lo, hi)) for lo, hi in chunks]
        return [f.result() for f in futures]


def _check_capped(capped: int, config: SimConfig):
    if capped > MAX_CAPPED_FRACTION * config.replicas:
        raise SimulationError(
            f"{capped} of {config.replicas} replicas hit max_events={config.max_events}"
        )
    if capped == config.replicas:
        raise SimulationError("every replica hit max_events")


def _simulate_walk(g, config, spec, continuous) -> SimResult:
    spec.validate(g)
    start = config.start
    if start is not None and not isinstance(start, (int, np.integer)):
        start = [float(p) for p in start]
    parts = _dispatch(
        _run_walk,
        lambda lo, hi: (g, spec, start, config.seed, lo, hi, config.max_events, continuous),
        config,
    )
    times = np.array([t for p in parts for t in p[0]], dtype=float)
    counts = np.array([c for p in parts for c in p[1]], dtype=float)
    capped = sum(p[2] for p in parts)
    _check_capped(capped, config)
    jumps = Estimate.from_samples(counts, config.seed, "steps")
    if not continuous:
        return SimResult(None, jumps, None, counts, capped)
    return SimResult(Estimate.from_samples(times, config.seed, "time"), jumps, times, counts, capped)


def simulate_ctsrw(g: WeightedGraph, config: SimConfig, spec: StoppingTimeSpec) -> SimResult:
    """Continuous-time walk: exponential holding at rate w_x, jump to y w.p. w_xy / w_x.

    Records the stopping time T and the number of jumps N_T in each replica.
    """
    return _simulate_walk(g, config, spec, continuous=True)


def simulate_srw(g: WeightedGraph, config: SimConfig, spec: StoppingTimeSpec) -> SimResult:
    """Jump chain only; ``jumps`` estimates the step count. A horizon is a step budget."""
    return _simulate_walk(g, config, spec, continuous=False)


def simulate_mpsrw(
    g: WeightedGraph, config: SimConfig, target: int, person_selection: str = "degree"
) -> Estimate:
    """Steps of the n-person walk until everyone is on ``target``.

    ``degree`` picks the moving person with probability proportional to the
    degree of its vertex (the jump chain of the tensor-power walk);
    ``uniform`` picks a person uniformly. Start defaults to person k on vertex k.
    """
    if person_selection not in ("degree", "uniform"):
        raise ValueError(f"person_selection must be 'degree' or 'uniform', got {person_selection!r}")
    if not g.is_unweighted:
        raise ValueError("the multi-person walk is defined on unweighted base graphs")
    if not 0 <= target < g.n:
        raise ValueError(f"target vertex {target} is not in the graph")
    start = tuple(range(g.n)) if config.start is None else tuple(int(v) for v in config.start)
    if len(start) != g.n or any(not 0 <= v < g.n for v in start):
        raise ValueError("start must place each of the n persons on a vertex")
    uniform = person_selection == "uniform"
    parts = _dispatch(
        _run_mpsrw,
        lambda lo, hi: (g, target, start, config.seed, lo, hi, config.max_events, uniform),
        config,
    )
    steps = np.array([s for p in parts for s in p[0]], dtype=float)
    _check_capped(sum(p[1] for p in parts), config)
    return Estimate.from_samples(steps, config.seed, "steps")


def estimate_frequency(g: WeightedGraph, config: SimConfig, horizon: float) -> Estimate:
    """N(t)/t over [0, t], averaged over replicas."""
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    res = simulate_ctsrw(g, config, StoppingTimeSpec.horizon(horizon))
    return Estimate.from_samples(res.counts / horizon, config.seed, "jumps/time")


def occupation_fractions(g: WeightedGraph, config: SimConfig, horizon: float) -> np.ndarray:
    """Fraction of [0, t] spent at each vertex, pooled over replicas."""
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    walker = _Walker(g)
    occ = np.zeros(g.n)
    for r in range(config.replicas):
        u = _stream(config.seed, r).__next__
        v = _start_vertex(config.start, StoppingTimeSpec.horizon(horizon), u)
        t = 0.0
        while True:
            hold = -math.log(u()) / walker.rate[v]
            if t + hold >= horizon:
                occ[v] += horizon - t
                break
            occ[v] += hold
            t += hold
            v = walker.step(v, u())
    return occ / (horizon * config.replicas)
