"""Acceptance criteria 1-10.

Each test records a one-line PASS/FAIL verdict (with the measured error and
runtime) before asserting; ``conftest.pytest_terminal_summary`` prints them.
"""

import random
import time
from fractions import Fraction

import sympy

from servicerule import verify
from servicerule.core import MatchFormat, Rule, ServeModel, alternating_sequence, tennis_sequence, thue_morse_sequence
from servicerule.engine import analyze_win_by_one, win_polynomials_best_of_3
from servicerule.montecarlo import simulate
from servicerule.schedules import fixed_sequence_fairness
from servicerule.tables import table2, table3

F = Fraction
RESULTS: dict = {}


def record(n, ok, detail):
    RESULTS[n] = f"ACCEPTANCE {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


_p, _q = sympy.symbols("p q")
PUBLISHED_TABLE1 = {
    Rule.SR: (2 * _p - _p**2 - 2 * _p * _q + 2 * _p**2 * _q, 3 - _q - _p**2 + _p * _q),
    Rule.CR: (2 * _p - _p**2 - 2 * _p * _q + 2 * _p**2 * _q, 2 + _p - _p**2 + _p * _q),
    Rule.TRA: (2 * _p - _p**2 - 2 * _p * _q + 2 * _p**2 * _q, 2 + _p - _p**2 + _p * _q),
    Rule.TRB: (_p + _p**2 - _p**3 - _p * _q**2, 2 + _p - _p**2 + _p * _q),
}

PUBLISHED_TABLE2 = [
    ("0", "undefined", "0.00", "inf", "2.00"),
    ("1/4", "0.40", "0.33", "8.00", "2.67"),
    ("1/3", "0.43", "0.40", "6.00", "3.00"),
    ("1/2", "0.50", "0.50", "4.00", "4.00"),
    ("2/3", "0.60", "0.57", "3.00", "6.00"),
    ("3/4", "0.67", "0.60", "2.67", "8.00"),
    ("1", "1.00", "undefined", "2.00", "inf"),
]

# rule, m, p: Pr(A), Pr(B), Qr(A), Qr(B), Pr(T), EL(WB1), EL(WB2)
PUBLISHED_TABLE3 = {
    ("SR", 3, F(2, 3)): (0.593, 0.407, 0.600, 0.400, 0.333, 2.333, 3.000),
    ("SR", 11, F(2, 3)): (0.544, 0.456, 0.544, 0.456, 0.173, 8.650, 8.995),
    ("SR", 21, F(2, 3)): (0.531, 0.469, 0.531, 0.469, 0.124, 17.251, 17.500),
    ("CR", 3, F(2, 3)): (0.593, 0.407, 0.571, 0.429, 0.667, 2.667, 6.000),
    ("CR", 11, F(2, 3)): (0.544, 0.456, 0.542, 0.458, 0.346, 9.825, 11.553),
    ("CR", 21, F(2, 3)): (0.531, 0.469, 0.531, 0.469, 0.248, 19.126, 20.368),
    ("SR", 3, F(3, 4)): (0.656, 0.344, 0.667, 0.333, 0.250, 2.250, 2.667),
    ("SR", 11, F(3, 4)): (0.573, 0.427, 0.574, 0.426, 0.139, 8.240, 8.472),
    ("SR", 21, F(3, 4)): (0.551, 0.449, 0.552, 0.448, 0.101, 16.540, 16.708),
    ("CR", 3, F(3, 4)): (0.656, 0.344, 0.600, 0.400, 0.750, 2.750, 8.000),
    ("CR", 11, F(3, 4)): (0.573, 0.427, 0.567, 0.433, 0.418, 10.080, 13.006),
    ("CR", 21, F(3, 4)): (0.551, 0.449, 0.550, 0.450, 0.303, 19.513, 21.631),
}


def test_criterion_01_table1():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    points = [(F(rng.randint(0, 50), 50), F(rng.randint(0, 50), 50)) for _ in range(20)]
    symbolic_ok = dp_ok = True
    for rule, (pr_ref, el_ref) in PUBLISHED_TABLE1.items():
        pr, el = win_polynomials_best_of_3(rule)
        symbolic_ok &= sympy.expand(pr.as_expr() - pr_ref) == 0 and sympy.expand(el.as_expr() - el_ref) == 0
        for p, q in points:
            res = analyze_win_by_one(rule, MatchFormat(2), ServeModel(p, q))
            subs = {_p: sympy.Rational(p.numerator, p.denominator), _q: sympy.Rational(q.numerator, q.denominator)}
            dp_ok &= sympy.Rational(res.pr_a_wins.numerator, res.pr_a_wins.denominator) == pr_ref.subs(subs)
            dp_ok &= sympy.Rational(res.expected_length.numerator, res.expected_length.denominator) == el_ref.subs(subs)
    dt = time.perf_counter() - t0
    record(1, symbolic_ok and dp_ok and dt < 1.0,
           f"Best-of-3 polynomials: 4 rules symbolic={symbolic_ok}, DP at 20 rational points exact={dp_ok}, {dt:.2f}s (< 1 s)")


def test_criterion_02_table2():
    t0 = time.perf_counter()
    ours = [tuple(r) for r in table2().csv_rows()]
    mismatches = [(a, b) for a, b in zip(ours, PUBLISHED_TABLE2) if a != b]
    dt = time.perf_counter() - t0
    ok = len(ours) == 7 and not mismatches and dt < 1.0
    record(2, ok, f"Equal-skill deuce table: 7 rows at 2 decimals incl. undefined/inf corners, {len(mismatches)} mismatches, {dt:.2f}s (< 1 s)")


def test_criterion_03_table3():
    t0 = time.perf_counter()
    table = table3()
    worst = 0.0
    for row in table.rows:
        ref = PUBLISHED_TABLE3[row[0], row[1], row[2]]
        worst = max(worst, *(abs(float(v) - r) for v, r in zip(row[3:], ref)))
    dt = time.perf_counter() - t0
    ok = len(table.rows) == 12 and worst <= 0.001 + 1e-12 and dt < 5.0
    record(3, ok, f"Win-by-One vs Win-by-Two table: 12 rows x 7 columns, max |error| = {worst:.5f} (tol 0.001), {dt:.2f}s (< 5 s)")


def test_criterion_04_theorem1():
    failures, total, dt8 = 0, 0, 0.0
    for k in range(1, 9):
        t0 = time.perf_counter()
        res = verify.theorem1(k)
        if k == 8:
            dt8 = time.perf_counter() - t0
        total += res.checked
        failures += len(res.counterexamples) + (not res.passed)
    ok = failures == 0 and dt8 < 10.0
    record(4, ok, f"Same-winner schedule oracle (AR/SR/CR, b >= a): k=1..8, {total} schedules, {failures} counterexamples, k=8 in {dt8:.2f}s (< 10 s)")


def test_criterion_05_theorem2():
    t0 = time.perf_counter()
    res = verify.theorem2(5, 20)
    dt = time.perf_counter() - t0
    ok = res.passed and res.checked == 19 * 19 * 5 and dt < 30.0
    record(5, ok, f"Length ordering sign(EL_CR - EL_SR) = sign(p+q-1): 19x19 grid, k=1..5, {res.checked} points exact, {len(res.counterexamples)} violations, {dt:.1f}s (< 30 s)")


def test_criterion_06_schedule_sums():
    t0 = time.perf_counter()
    res = verify.schedules(6, 10)
    dt = time.perf_counter() - t0
    record(6, res.passed, f"Schedule-sum win probability and lengths vs engine: k=1..6, 9x9 grid, SR+CR, {res.checked} exact comparisons, {len(res.counterexamples)} mismatches, {dt:.1f}s")


def test_criterion_07_theorem3():
    t0 = time.perf_counter()
    results = verify.theorem3_full(grid=10, k_sr_cr=5, k_tra=4, trb_grid=20)
    dt = time.perf_counter() - t0
    parts = ", ".join(f"{r.suite}{'' if r.suite != 'theorem3' else '/' + r.details['rule']}={'ok' if r.passed else 'FAIL'}" for r in results)
    record(7, all(r.passed for r in results), f"Strategy-proofness: SR/CR k<=5, TRa p+q>1 k<=4, TRb circle, Best-of-5 ordering: {parts}, {dt:.1f}s")


def test_criterion_08_lemma1():
    res = verify.lemma1(8)
    record(8, res.passed, f"Expected dot position t(r+1)/(s+1): all 1<=t<=s<=r<=8 ({res.checked} cases) exact vs subset average, {len(res.counterexamples)} mismatches")


def test_criterion_09_monte_carlo():
    t0 = time.perf_counter()
    res = verify.monte_carlo(trials=1_000_000, seed=20260101, n_se=4.0)
    dt = time.perf_counter() - t0
    cfg = verify.MC_CONFIGS[1]
    again = [simulate(cfg.rule, cfg.fmt, ServeModel(cfg.p, cfg.q), 1_000_000, 20260101 + 1) for _ in range(2)]
    deterministic = again[0] == again[1]
    worst = max(abs(r["estimate"] - float(r["exact"])) / r["se"] for r in res.details["rows"] if r["se"] > 0)
    rules = {r.rule for r in verify.MC_CONFIGS}
    modes = {r.win_by for r in verify.MC_CONFIGS}
    ok = res.passed and deterministic and dt < 60.0 and len(rules) == 4 and modes == {1, 2} and len(verify.MC_CONFIGS) == 12
    record(9, ok, f"Monte Carlo: 12 configs x 1e6 trials, {res.checked} estimates, worst {worst:.2f} SE (tol 4), deterministic={deterministic}, {dt:.1f}s (< 60 s)")


def test_criterion_10_fixed_sequences():
    violations, post_tie = 0, 0
    for make in (tennis_sequence, alternating_sequence, thue_morse_sequence):
        for points in (4, 7, 11):
            rep = fixed_sequence_fairness(make(64), points, win_by=2, depth=30)
            violations += len(rep.violations)
            post_tie += rep.post_tie_wins
    record(10, violations == 0 and post_tie > 0,
           f"Fixed sequences (tennis, alternation, PTM; first to 4/7/11, depth 30): {post_tie} post-tie winning paths, {violations} violations")
