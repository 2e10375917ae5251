"""Monte Carlo simulation of the downlink SINR in a PPP cellular network.

The typical user sits at the centre of a disk of radius R holding a Poisson
number of base stations.  It is served by the nearest one; every other base
station interferes.  Interference from beyond R is replaced by its mean,
Omega_I 2 pi lambda R^{2-alpha}/(alpha - 2), which is almost deterministic
because it is the sum of many small terms.

Snapshots are generated in fixed-size blocks, each with its own random
stream spawned from the seed, so results do not depend on how blocks are
distributed over worker threads.
"""
from __future__ import annotations

import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import fading
from .metrics import MetricResult, ModulationScheme
from .sinrmgf import LinkSpec

__all__ = [
    "SimConfig",
    "SnapshotResult",
    "SinrSamples",
    "simulate_snapshot",
    "simulate",
    "estimate_coverage",
    "estimate_rate",
    "estimate_bep",
    "excluded_fraction",
    "WORKERS_ENV",
]

WORKERS_ENV = "CELLMGF_WORKERS"


@dataclass(frozen=True)
class SimConfig:
    """snapshots: number of SINR draws; window_radius: disk radius in the units
    of 1/sqrt(lambda), default 15/sqrt(pi lambda); tail_epsilon: largest
    allowed ratio of the mean interference beyond the disk to the mean
    interference inside it (beyond a typical serving distance)."""

    snapshots: int = 100_000
    seed: int = 0
    window_radius: float | None = None
    tail_epsilon: float = 0.1
    block: int = 4096

    def __post_init__(self):
        if self.snapshots < 1:
            raise ValueError("snapshots must be >= 1")
        if self.window_radius is not None and not self.window_radius > 0:
            raise ValueError("window_radius must be positive")
        if not self.tail_epsilon > 0:
            raise ValueError("tail_epsilon must be positive")
        if self.block < 1:
            raise ValueError("block must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def radius(self, lambda_bs: float) -> float:
        if self.window_radius is not None:
            return self.window_radius
        return 15.0 / math.sqrt(math.pi * lambda_bs)


@dataclass(frozen=True)
class SnapshotResult:
    sinr: float
    serving_distance: float
    num_interferers: int


@dataclass(frozen=True)
class SinrSamples:
    sinr: np.ndarray
    serving_distance: np.ndarray
    num_bs: np.ndarray


def excluded_fraction(alpha: float, lambda_bs: float, radius: float) -> float:
    """Mean interference beyond ``radius`` relative to the mean between the
    mean serving distance 1/(2 sqrt(lambda)) and ``radius``."""
    r0 = 0.5 / math.sqrt(lambda_bs)
    if radius <= r0:
        return math.inf
    p = 2.0 - alpha
    return radius ** p / (r0 ** p - radius ** p)


def _check_window(link: LinkSpec, sim: SimConfig) -> float:
    net = link.network
    R = sim.radius(net.lambda_bs)
    frac = excluded_fraction(net.alpha, net.lambda_bs, R)
    if frac > sim.tail_epsilon:
        raise ValueError(f"window radius {R:g} leaves {frac:.3g} of the interference outside; "
                         f"tail_epsilon is {sim.tail_epsilon:g}")
    return R


def _tail_mean(link: LinkSpec, R: float) -> float:
    net = link.network
    return (link.interferer.omega * 2.0 * math.pi * net.lambda_bs * R ** (2.0 - net.alpha)
            / (net.alpha - 2.0))


def _block(link: LinkSpec, R: float, tail: float, size: int, rng: np.random.Generator):
    net = link.network
    mean_n = net.lambda_bs * math.pi * R * R
    counts = rng.poisson(mean_n, size)
    empty = counts == 0
    while np.any(empty):  # vanishingly rare by construction
        counts[empty] = rng.poisson(mean_n, int(empty.sum()))
        empty = counts == 0
    total = int(counts.sum())
    r = R * np.sqrt(rng.random(total))
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    seg = np.repeat(np.arange(size), counts)
    rmin = np.minimum.reduceat(r, starts)
    serving = r == rmin[seg]
    h_int = fading.sample_array(link.interferer, rng, total)
    contrib = np.where(serving, 0.0, h_int * r ** (-net.alpha))
    interference = np.add.reduceat(contrib, starts) + tail
    h_des = fading.sample_array(link.desired, rng, size)
    signal = h_des * rmin ** (-net.alpha)
    sinr = signal / (net.noise_ratio + interference)
    return sinr, rmin, counts


def simulate_snapshot(link: LinkSpec, sim: SimConfig, rng: np.random.Generator) -> SnapshotResult:
    """One SINR realisation drawn from ``rng``."""
    R = _check_window(link, sim)
    sinr, rmin, counts = _block(link, R, _tail_mean(link, R), 1, rng)
    return SnapshotResult(float(sinr[0]), float(rmin[0]), int(counts[0]) - 1)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def simulate(link: LinkSpec, sim: SimConfig) -> SinrSamples:
    """``sim.snapshots`` SINR draws; identical for a given (link, sim) whatever
    the worker count.  The most recent results are cached."""
    key = (link, sim)
    with _CACHE_LOCK:
        if key in _CACHE:
            return _CACHE[key]
    R = _check_window(link, sim)
    tail = _tail_mean(link, R)
    sizes = [sim.block] * (sim.snapshots // sim.block)
    if sim.snapshots % sim.block:
        sizes.append(sim.snapshots % sim.block)
    seeds = np.random.SeedSequence(int(sim.seed)).spawn(len(sizes))

    def run(i):
        return _block(link, R, tail, sizes[i], np.random.default_rng(seeds[i]))

    workers = _workers()
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    out = SinrSamples(*(np.concatenate([p[j] for p in parts]) for j in range(3)))
    with _CACHE_LOCK:
        if len(_CACHE) >= 4:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = out
    return out


MIN_SNAPSHOTS = 1000


def _samples(link: LinkSpec, sim: SimConfig) -> np.ndarray:
    if sim.snapshots < MIN_SNAPSHOTS:
        raise ValueError(f"estimates need at least {MIN_SNAPSHOTS} snapshots")
    return simulate(link, sim).sinr


def _mean_result(x: np.ndarray) -> MetricResult:
    se = float(x.std(ddof=1) / math.sqrt(x.size))
    return MetricResult(float(x.mean()), se, "monte_carlo")


def estimate_coverage(link: LinkSpec, T: float, sim: SimConfig) -> MetricResult:
    """Fraction of snapshots with SINR > T, with its standard error."""
    return _mean_result((_samples(link, sim) > T).astype(float))


def estimate_rate(link: LinkSpec, sim: SimConfig) -> MetricResult:
    """Sample mean of ln(1 + SINR) in nats."""
    return _mean_result(np.log1p(_samples(link, sim)))


def estimate_bep(link: LinkSpec, mod: ModulationScheme, sim: SimConfig) -> MetricResult:
    """Sample mean of beta sum_p Q(a_p sqrt(SINR))."""
    s = np.sqrt(_samples(link, sim))
    vals = sum(0.5 * special.erfc(a * s / math.sqrt(2.0)) for a in mod.a)
    return _mean_result(mod.beta * vals)
