"""Serving schedules: games played out on predetermined serve results.

A schedule fixes the results of A's k+1 serves and B's k serves before
play; each rule then consumes them in its own order. This module covers
playouts, the exhaustive same-winner check across AR, SR and CR, the
closed-form win probability and per-schedule expected lengths, and the
equal-serves check for fixed serving orders.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import _backend
from .core import (
    A,
    B,
    FixedSequence,
    GameState,
    MatchFormat,
    PlayoutRecord,
    Rule,
    RuleKind,
    ScheduleExhaustedError,
    next_server,
)

MAX_ENUMERATION_K = 10

_RULE_CODES = {Rule.SR: 0, Rule.CR: 1, Rule.TRA: 2, Rule.TRB: 3, Rule.AR: 4}


def rule_code(rule: RuleKind) -> int:
    if isinstance(rule, FixedSequence):
        return 5
    return _RULE_CODES[rule]


@dataclass(frozen=True)
class ScheduleParams:
    """``n`` server wins for A (of k+1 serves), ``m`` for B (of k)."""

    n: int
    m: int


@dataclass(frozen=True)
class ServingSchedule:
    """Results of A's k+1 serves and B's k serves; True means the server won."""

    a_results: tuple[bool, ...]
    b_results: tuple[bool, ...]

    def __post_init__(self):
        if len(self.a_results) != len(self.b_results) + 1:
            raise ValueError("a schedule has k+1 serves for A and k for B")
        object.__setattr__(self, "a_results", tuple(bool(r) for r in self.a_results))
        object.__setattr__(self, "b_results", tuple(bool(r) for r in self.b_results))

    @classmethod
    def parse(cls, text: str) -> "ServingSchedule":
        """``"WL|L"``: A's results, a bar, then B's results."""
        a_part, _, b_part = text.replace(" ", "").replace(",", "").upper().partition("|")
        if set(a_part + b_part) - {"W", "L"}:
            raise ValueError(f"bad schedule {text!r}")
        return cls(tuple(c == "W" for c in a_part), tuple(c == "W" for c in b_part))

    @classmethod
    def from_mask(cls, mask: int, k: int) -> "ServingSchedule":
        """Bit i is A's (i+1)-th serve; bit k+1+j is B's (j+1)-th."""
        a = tuple(bool(mask >> i & 1) for i in range(k + 1))
        b = tuple(bool(mask >> (k + 1 + j) & 1) for j in range(k))
        return cls(a, b)

    @property
    def k(self) -> int:
        return len(self.b_results)

    @property
    def a(self) -> int:
        """A's server losses."""
        return self.a_results.count(False)

    @property
    def b(self) -> int:
        """B's server losses."""
        return self.b_results.count(False)

    @property
    def params(self) -> ScheduleParams:
        return ScheduleParams(self.k + 1 - self.a, self.k - self.b)

    def __str__(self) -> str:
        fmt = lambda rs: "".join("W" if r else "L" for r in rs)  # noqa: E731
        return f"{fmt(self.a_results)}|{fmt(self.b_results)}"


def playout(rule: RuleKind, schedule: ServingSchedule, points_to_win: int | None = None) -> PlayoutRecord:
    """Play a Win-by-One game on a fixed schedule, A serving first."""
    k = schedule.k
    fmt = MatchFormat(points_to_win or k + 1)
    results = {A: schedule.a_results, B: schedule.b_results}
    used = {A: 0, B: 0}
    first = rule.pattern[0] if isinstance(rule, FixedSequence) else A
    state = GameState(first, 0, 0)
    outcome = []
    while True:
        server = state.server
        if used[server] >= len(results[server]):
            raise ScheduleExhaustedError(f"{rule} needs serve {used[server] + 1} from {server} in {schedule}")
        won = results[server][used[server]]
        used[server] += 1
        winner = server if won else server.other
        outcome.append(winner.value if won else winner.value + "~")
        x = state.score_a + (winner is A)
        y = state.score_b + (winner is B)
        if fmt.winner(x, y) is not None:
            return PlayoutRecord(
                winner=winner,
                outcome=tuple(outcome),
                final_score=(x, y),
                serves_used_by=(used[A], used[B]),
                a_losses=schedule.a,
                b_losses=schedule.b,
            )
        state = GameState(next_server(rule, state, winner, fmt), x, y)


@dataclass
class Theorem1Report:
    k: int
    schedules_checked: int
    all_equal: bool
    criterion_holds: bool
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.all_equal and self.criterion_holds


def _popcount(values: np.ndarray) -> np.ndarray:
    counts = np.zeros(values.shape, np.int64)
    v = values.copy()
    while v.any():
        counts += v & 1
        v >>= 1
    return counts


def theorem1_oracle(k: int, cap: int = MAX_ENUMERATION_K, backend: str | None = None, max_report: int = 20) -> Theorem1Report:
    """Play all 2^(2k+1) schedules under AR, SR and CR.

    Checks that the three rules always pick the same winner, and that the
    winner is A exactly when B's server losses are at least A's.
    """
    if not 1 <= k <= cap:
        raise ValueError(f"k must be in 1..{cap}")
    kern = _backend.get(backend)
    winners = {rule: kern.schedule_outcomes(rule_code(rule), k)[0] for rule in (Rule.AR, Rule.SR, Rule.CR)}
    masks = np.arange(1 << (2 * k + 1), dtype=np.int64)
    a_losses = (k + 1) - _popcount(masks & ((1 << (k + 1)) - 1))
    b_losses = k - _popcount(masks >> (k + 1))
    expected = np.where(b_losses >= a_losses, 0, 1)
    same = (winners[Rule.AR] == winners[Rule.SR]) & (winners[Rule.SR] == winners[Rule.CR])
    criterion = winners[Rule.SR] == expected
    bad = np.flatnonzero(~(same & criterion))
    counterexamples = [
        {
            "schedule": str(ServingSchedule.from_mask(int(mask), k)),
            "winners": {str(rule): "AB?"[int(w[mask])] for rule, w in winners.items()},
            "a": int(a_losses[mask]),
            "b": int(b_losses[mask]),
        }
        for mask in bad[:max_report]
    ]
    return Theorem1Report(k, int(masks.size), bool(same.all()), bool(criterion.all()), counterexamples)


def corollary1_probability(k: int, p, q):
    """Win probability for A under SR, CR or AR as a double sum over schedule types."""
    if k < 1:
        raise ValueError("k must be at least 1")
    total = 0
    for n in range(1, k + 2):
        for m in range(0, n):
            if m > k:
                break
            total += p**n * (1 - p) ** (k + 1 - n) * q**m * (1 - q) ** (k - m) * comb(k + 1, n) * comb(k, m)
    return total


def lemma1_expected_position(r: int, s: int, t: int) -> Fraction:
    """Mean position of the t-th chosen dot when s of r dots are chosen uniformly."""
    if not 1 <= t <= s <= r:
        raise ValueError("need 1 <= t <= s <= r")
    return Fraction(t * (r + 1), s + 1)


def schedule_expected_length(rule: Rule, k: int, params: ScheduleParams) -> Fraction:
    """Mean game length over all schedules with the given (n, m)."""
    n, m = params.n, params.m
    if not (0 <= n <= k + 1 and 0 <= m <= k):
        raise ValueError(f"need 0 <= n <= {k + 1} and 0 <= m <= {k}")
    full = 2 * (k + 1)
    if rule is Rule.SR:
        if n > m:
            return full - (n - m) * (Fraction(m, k + 1 - m) + 1)
        return full - (m - n + 1) * (Fraction(n, k + 2 - n) + 1)
    if rule is Rule.CR:
        if n > m:
            return full - (n - m) * (Fraction(k + 1 - n, n + 1) + 1)
        return full - (m - n + 1) * (Fraction(k - m, m + 1) + 1)
    raise ValueError(f"per-schedule lengths are given for SR and CR, not {rule}")


def schedule_type_probability(k: int, n: int, m: int, p, q):
    """Probability that some schedule with parameters (n, m) is drawn."""
    return comb(k + 1, n) * comb(k, m) * p**n * (1 - p) ** (k + 1 - n) * q**m * (1 - q) ** (k - m)


def expected_length_via_schedules(rule: Rule, k: int, p, q):
    if k < 1:
        raise ValueError("k must be at least 1")
    return sum(
        schedule_type_probability(k, n, m, p, q) * schedule_expected_length(rule, k, ScheduleParams(n, m))
        for n in range(k + 2)
        for m in range(k + 1)
    )


def playout_lengths_by_params(rule: RuleKind, k: int, backend: str | None = None) -> dict:
    """Exhaustive mean playout length for each (n, m), as exact Fractions."""
    kern = _backend.get(backend)
    winner, length, _, _ = kern.schedule_outcomes(rule_code(rule), k)
    masks = np.arange(1 << (2 * k + 1), dtype=np.int64)
    n = _popcount(masks & ((1 << (k + 1)) - 1))
    m = _popcount(masks >> (k + 1))
    totals: dict = defaultdict(int)
    counts: Counter = Counter()
    for ni, mi, li in zip(n.tolist(), m.tolist(), length.tolist()):
        totals[ni, mi] += li
        counts[ni, mi] += 1
    return {key: Fraction(totals[key], counts[key]) for key in counts}


# Fixed serving orders ------------------------------------------------------


@dataclass
class FairnessReport:
    sequence: str
    points_to_win: int
    depth: int
    paths: int = 0
    post_tie_wins: int = 0
    pre_tie_wins: int = 0
    unresolved_paths: int = 0
    violations: list = field(default_factory=list)
    pre_tie_extra_serve: list = field(default_factory=list)

    @property
    def fair(self) -> bool:
        return not self.violations


def _serve_counts(sequence: FixedSequence, n_points: int) -> tuple[int, int]:
    a = sum(1 for i in range(n_points) if sequence.server_at(i) is A)
    return a, n_points - a


def fixed_sequence_fairness(sequence: FixedSequence, points_to_win: int, win_by: int = 2, depth: int = 30) -> FairnessReport:
    """Check every playout (up to ``depth`` points) for equal serves at post-tie wins.

    A win is post-tie when the score passed through (k, k). Because the
    serving order is fixed, the serve counts at a terminal score depend only
    on the number of points, so paths are counted per score with a tie flag.
    """
    fmt = MatchFormat(points_to_win, win_by)
    k = points_to_win - 1
    report = FairnessReport(str(sequence), points_to_win, depth)
    frontier = {(0, 0, k == 0): 1}
    for played in range(depth):
        nxt: dict = defaultdict(int)
        for (x, y, tied), paths in frontier.items():
            for xa, ya in ((x + 1, y), (x, y + 1)):
                tied_now = tied or (xa == k and ya == k)
                winner = fmt.winner(xa, ya)
                if winner is None:
                    nxt[xa, ya, tied_now] += paths
                    continue
                report.paths += paths
                serves = _serve_counts(sequence, played + 1)
                entry = {"score": (xa, ya), "winner": winner.value, "serves": serves}
                if tied_now:
                    report.post_tie_wins += paths
                    if serves[0] != serves[1]:
                        report.violations.append(entry)
                else:
                    report.pre_tie_wins += paths
                    if serves[0] != serves[1]:
                        report.pre_tie_extra_serve.append(entry)
        frontier = nxt
    report.unresolved_paths = sum(frontier.values())
    report.paths += report.unresolved_paths
    return report
