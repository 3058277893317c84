"""Verification suites shared by the command line and the test suite.

Each suite returns a ``SuiteResult`` whose ``details`` hold the quantities
checked and whose ``counterexamples`` list any failures found.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import A, B, MatchFormat, Player, Rule, RuleKind, ServeModel
from .engine import analyze_win_by_one
from .montecarlo import simulate
from .schedules import (
    corollary1_probability,
    expected_length_via_schedules,
    lemma1_expected_position,
    theorem1_oracle,
)
from .strategy import grid_points, profitable_tanks, vulnerability_region_scan
from .tiebreak import analyze_win_by_two

MAX_EXACT_GRID_K = 6


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    checked: int
    details: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _check_k(k: int, cap: int) -> None:
    if not 1 <= k <= cap:
        raise ValueError(f"k must be in 1..{cap}")


def exact_summary(rule: RuleKind, fmt: MatchFormat, model: ServeModel, first_server: Player = A) -> dict:
    """Exact quantities for one configuration, keyed like the CLI output."""
    if fmt.win_by == 1:
        res = analyze_win_by_one(rule, fmt, model, first_server)
        return {
            "pr_a": res.pr_a_wins,
            "pr_b": res.pr_b_wins,
            "expected_length": res.expected_length,
            "pr_tie": res.pr_reach_tie_kk,
        }
    if fmt.win_by != 2:
        raise ValueError("exact analysis covers win_by 1 and 2")
    res = analyze_win_by_two(rule, fmt, model, first_server)
    return {
        "pr_a": res.pr_a_wb1,
        "pr_b": res.pr_b_wb1,
        "qr_a": res.qr_a,
        "qr_b": res.qr_b,
        "pr_tie": res.pr_tie,
        "el_wb1": res.el_wb1,
        "el_wb2": res.el_wb2,
    }


def theorem1(k: int, backend: str | None = None) -> SuiteResult:
    report = theorem1_oracle(k, backend=backend)
    return SuiteResult(
        "theorem1",
        report.passed,
        report.schedules_checked,
        {"k": k, "all_equal": report.all_equal, "criterion_holds": report.criterion_holds},
        report.counterexamples,
    )


def theorem2(k_max: int, grid=20) -> SuiteResult:
    """sign(EL_CR - EL_SR) = sign(p + q - 1) at every grid point, k = 1..k_max."""
    _check_k(k_max, MAX_EXACT_GRID_K)
    points = grid_points(grid)
    bad = []
    checked = 0
    for k in range(1, k_max + 1):
        fmt = MatchFormat(k + 1)
        for p, q in itertools.product(points, points):
            model = ServeModel(p, q)
            diff = analyze_win_by_one(Rule.CR, fmt, model).expected_length - analyze_win_by_one(Rule.SR, fmt, model).expected_length
            checked += 1
            if _sign(diff) != _sign(p + q - 1):
                bad.append({"k": k, "p": p, "q": q, "el_cr_minus_el_sr": diff})
    return SuiteResult("theorem2", not bad, checked, {"k_max": k_max, "grid_points": len(points)}, bad)


def theorem3(rule: RuleKind, k_max: int, grid=10, players=(A, B), region=None) -> SuiteResult:
    """No profitable deviation for any listed player at any grid point (optionally filtered)."""
    _check_k(k_max, MAX_EXACT_GRID_K)
    points = grid_points(grid)
    bad = []
    checked = 0
    for k in range(1, k_max + 1):
        fmt = MatchFormat(k + 1)
        for p, q in itertools.product(points, points):
            if region is not None and not region(p, q):
                continue
            model = ServeModel(p, q)
            for player in players:
                checked += 1
                found = profitable_tanks(rule, fmt, model, Player(player))
                if found:
                    state, honest, tank = found[0]
                    bad.append({"k": k, "p": p, "q": q, "player": Player(player).value, "state": str(state), "honest": honest, "tank": tank})
    return SuiteResult("theorem3", not bad, checked, {"rule": str(rule), "k_max": k_max}, bad)


def trailing_b_region(grid=20) -> SuiteResult:
    """TRb Best-of-3: A gains by tanking exactly where p^2 + q^2 > 1."""
    scan = vulnerability_region_scan(Rule.TRB, 1, grid, strategizers=(A,))
    predicted = {cell for cell in scan.cells if cell[0] ** 2 + cell[1] ** 2 > 1}
    found = scan.vulnerable(A)
    bad = [{"p": p, "q": q, "vulnerable": (p, q) in found} for p, q in sorted(found ^ predicted)]
    return SuiteResult(
        "theorem3-trb",
        not bad,
        len(scan.cells),
        {"vulnerable_cells": len(found), "predicted_cells": len(predicted)},
        bad,
    )


def best_of_5_ordering(grid=10) -> SuiteResult:
    """Best-of-5: Pr_SR = Pr_CR >= Pr_TRa, with equality exactly on p + q = 1."""
    fmt = MatchFormat(3)
    bad = []
    points = grid_points(grid)
    for p, q in itertools.product(points, points):
        model = ServeModel(p, q)
        sr, cr, tra = (analyze_win_by_one(r, fmt, model).pr_a_wins for r in (Rule.SR, Rule.CR, Rule.TRA))
        ok = sr == cr and sr >= tra and ((sr == tra) == (p + q == 1))
        if not ok:
            bad.append({"p": p, "q": q, "sr": sr, "cr": cr, "tra": tra})
    return SuiteResult("best-of-5-ordering", not bad, len(points) ** 2, {}, bad)


def theorem3_full(grid=10, k_sr_cr: int = 5, k_tra: int = 4, trb_grid=20) -> list[SuiteResult]:
    """SR/CR proof, TRa on the p + q > 1 half, the TRb region, and the Best-of-5 ordering."""
    return [
        theorem3(Rule.SR, k_sr_cr, grid),
        theorem3(Rule.CR, k_sr_cr, grid),
        theorem3(Rule.TRA, k_tra, grid, region=lambda p, q: p + q > 1),
        trailing_b_region(trb_grid),
        best_of_5_ordering(grid),
    ]


def schedules(k_max: int, grid=10) -> SuiteResult:
    """Schedule-sum formulas equal the engine's win probability and length exactly."""
    _check_k(k_max, MAX_EXACT_GRID_K)
    points = grid_points(grid)
    bad = []
    checked = 0
    for k in range(1, k_max + 1):
        fmt = MatchFormat(k + 1)
        for p, q in itertools.product(points, points):
            model = ServeModel(p, q)
            pr = corollary1_probability(k, p, q)
            for rule in (Rule.SR, Rule.CR):
                res = analyze_win_by_one(rule, fmt, model)
                el = expected_length_via_schedules(rule, k, p, q)
                checked += 1
                if pr != res.pr_a_wins or el != res.expected_length:
                    bad.append({"k": k, "rule": rule.value, "p": p, "q": q, "pr": pr, "engine_pr": res.pr_a_wins, "el": el, "engine_el": res.expected_length})
    return SuiteResult("schedules", not bad, checked, {"k_max": k_max}, bad)


def lemma1(r_max: int = 8) -> SuiteResult:
    """Formula against the average over all s-subsets of r dots."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    bad = []
    checked = 0
    for r in range(1, r_max + 1):
        for s in range(1, r + 1):
            subsets = list(itertools.combinations(range(1, r + 1), s))
            for t in range(1, s + 1):
                brute = Fraction(sum(c[t - 1] for c in subsets), len(subsets))
                checked += 1
                if brute != lemma1_expected_position(r, s, t):
                    bad.append({"r": r, "s": s, "t": t, "brute": brute})
    return SuiteResult("lemma1", not bad, checked, {"r_max": r_max}, bad)


@dataclass(frozen=True)
class MCConfig:
    rule: Rule
    m: int
    win_by: int
    p: Fraction
    q: Fraction

    @property
    def fmt(self) -> MatchFormat:
        return MatchFormat.best_of(self.m, self.win_by)


def _cfg(rule, m, win_by, p, q):
    return MCConfig(rule, m, win_by, Fraction(p), Fraction(q))


MC_CONFIGS = (
    _cfg(Rule.SR, 3, 1, "2/3", "2/3"),
    _cfg(Rule.CR, 11, 1, "2/3", "2/3"),
    _cfg(Rule.SR, 9, 1, "7/10", "3/5"),
    _cfg(Rule.TRA, 3, 1, "3/4", "1/2"),
    _cfg(Rule.TRA, 5, 1, "3/5", "7/10"),
    _cfg(Rule.TRB, 3, 1, "4/5", "4/5"),
    _cfg(Rule.TRB, 7, 1, "11/20", "13/20"),
    _cfg(Rule.SR, 3, 2, "3/4", "3/4"),
    _cfg(Rule.SR, 11, 2, "2/3", "2/3"),
    _cfg(Rule.CR, 3, 2, "2/3", "2/3"),
    _cfg(Rule.CR, 11, 2, "3/5", "7/10"),
    _cfg(Rule.CR, 21, 2, "3/4", "3/4"),
)


def monte_carlo(trials: int = 1_000_000, seed: int = 20260101, n_se: float = 4.0, configs=MC_CONFIGS, backend=None) -> SuiteResult:
    """Each estimate (win rate, mean length, tie rate) within ``n_se`` standard errors of exact."""
    bad = []
    rows = []
    for i, cfg in enumerate(configs):
        exact = exact_summary(cfg.rule, cfg.fmt, ServeModel(cfg.p, cfg.q))
        sim = simulate(cfg.rule, cfg.fmt, ServeModel(cfg.p, cfg.q), trials, seed + i, backend=backend)
        targets = {
            "pr_a": exact["pr_a"] if cfg.win_by == 1 else exact["qr_a"],
            "mean_length": exact["expected_length"] if cfg.win_by == 1 else exact["el_wb2"],
            "tie_rate": exact["pr_tie"],
        }
        estimates = {"pr_a": sim.pr_a_hat, "mean_length": sim.mean_length_hat, "tie_rate": sim.tie_rate_hat}
        for key, target in targets.items():
            est = estimates[key]
            row = {"config": i, "rule": cfg.rule.value, "m": cfg.m, "win_by": cfg.win_by, "p": cfg.p, "q": cfg.q,
                   "quantity": key, "exact": target, "estimate": est.value, "se": est.se}
            rows.append(row)
            if not est.within(target, n_se) or sim.cap_hits:
                bad.append(row)
    return SuiteResult("mc", not bad, len(rows), {"trials": trials, "seed": seed, "rows": rows}, bad)


__all__ = [
    "MCConfig",
    "MC_CONFIGS",
    "SuiteResult",
    "best_of_5_ordering",
    "exact_summary",
    "lemma1",
    "monte_carlo",
    "schedules",
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem3_full",
    "trailing_b_region",
]
