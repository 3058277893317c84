"""Seeded Monte Carlo playouts for every rule and format.

Each trial draws its point results from a counter-based stream keyed by
(seed, trial index, point index), so any sharding of the trial range
reproduces the serial run exactly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import A, FixedSequence, MatchFormat, Player, Rule, RuleKind, ServeModel, first_server_for
from .schedules import rule_code

DEFAULT_CAP = 10_000
SHARD_SIZE = 1 << 18


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float

    def within(self, exact, n_se: float = 4.0) -> bool:
        return abs(self.value - float(exact)) <= n_se * self.se

    def __str__(self) -> str:
        return f"{self.value:.6f} ± {self.se:.6f}"


@dataclass(frozen=True)
class SimReport:
    rule: str
    points_to_win: int
    win_by: int
    trials: int
    seed: int
    pr_a_hat: Estimate
    mean_length_hat: Estimate
    tie_rate_hat: Estimate
    cap: int
    cap_hits: int
    backend: str

    @property
    def cap_exceeded(self) -> bool:
        return self.cap_hits > 0


def _estimate(values: np.ndarray) -> Estimate:
    n = values.size
    mean = float(values.mean())
    var = float(values.var(ddof=1)) if n > 1 else 0.0
    return Estimate(mean, math.sqrt(var / n))


def worker_count() -> int:
    cpus = os.cpu_count() or 1
    env = os.environ.get("SERVICERULE_THREADS")
    if env:
        try:
            return max(1, min(cpus, int(env)))
        except ValueError:
            raise ValueError(f"SERVICERULE_THREADS must be an integer, got {env!r}") from None
    return cpus


def simulate_arrays(
    rule: RuleKind,
    fmt: MatchFormat,
    model: ServeModel,
    trials: int,
    seed: int,
    first_server: Player = A,
    cap: int = DEFAULT_CAP,
    backend: str | None = None,
    workers: int | None = None,
):
    """Per-trial ``(winner, length, tied)`` arrays; see ``_fallback.simulate_block``."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if cap < 1:
        raise ValueError("cap must be positive")
    if rule is Rule.AR and fmt.win_by != 1:
        raise ValueError("AR is defined for Win-by-One games only")
    first = first_server_for(rule, first_server)
    kern = _backend.get(backend)
    pattern = np.array([0 if s is A else 1 for s in rule.pattern], np.int8) if isinstance(rule, FixedSequence) else np.zeros(0, np.int8)
    args = (
        rule_code(rule),
        fmt.points_to_win,
        fmt.win_by,
        float(model.p),
        float(model.q),
        np.array([float(v) for v in model.p_seq], np.float64),
        np.array([float(v) for v in model.q_seq], np.float64),
        pattern,
        0 if first is A else 1,
        int(seed) & 0xFFFFFFFFFFFFFFFF,
    )
    bounds = [(lo, min(lo + SHARD_SIZE, trials)) for lo in range(0, trials, SHARD_SIZE)]
    workers = workers or worker_count()

    def run(span):
        return kern.simulate_block(*args, span[0], span[1], cap)

    if workers == 1 or len(bounds) == 1:
        parts = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    return tuple(np.concatenate([part[i] for part in parts]) for i in range(3))


def simulate(
    rule: RuleKind,
    fmt: MatchFormat,
    model: ServeModel,
    trials: int,
    seed: int,
    first_server: Player = A,
    cap: int = DEFAULT_CAP,
    backend: str | None = None,
    workers: int | None = None,
) -> SimReport:
    """Estimate Pr(A wins), mean length and (k, k) tie rate from ``trials`` games.

    Games still undecided after ``cap`` points count as not won by A, enter
    the length mean at ``cap``, and are tallied in ``cap_hits``.
    """
    winner, length, tied = simulate_arrays(rule, fmt, model, trials, seed, first_server, cap, backend, workers)
    return SimReport(
        rule=str(rule),
        points_to_win=fmt.points_to_win,
        win_by=fmt.win_by,
        trials=trials,
        seed=seed,
        pr_a_hat=_estimate((winner == 0).astype(np.float64)),
        mean_length_hat=_estimate(length.astype(np.float64)),
        tie_rate_hat=_estimate(tied.astype(np.float64)),
        cap=cap,
        cap_hits=int((winner < 0).sum()),
        backend=_backend.get(backend).NAME,
    )
