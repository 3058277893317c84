import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from servicerule.core import A, B, GameState, MatchFormat, Rule, ServeModel, next_server, tennis_sequence
from servicerule.engine import (
    analyze_win_by_one,
    format_polynomial,
    successors,
    win_polynomials_best_of_3,
    win_value_function,
)

from conftest import frac_grid

RULES = (Rule.SR, Rule.CR, Rule.TRA, Rule.TRB)
F = Fraction


def brute_force(rule, k, p, q, first=A):
    """Enumerate point-winner sequences directly: (Pr A wins, E[length], Pr reach (k,k))."""
    fmt = MatchFormat(k + 1)
    win = length = tie = 0
    for seq in itertools.product((A, B), repeat=2 * k + 1):
        state, pr, reached = GameState(first, 0, 0), F(1), k == 0
        for n, w in enumerate(seq, 1):
            ps = p if state.server is A else q
            pr *= ps if w is state.server else 1 - ps
            x, y = state.score_a + (w is A), state.score_b + (w is B)
            reached = reached or (x == k and y == k)
            if fmt.winner(x, y):
                break
            state = GameState(next_server(rule, state, w, fmt), x, y)
        else:
            raise AssertionError("Win-by-One game outlived 2k+1 points")
        # each terminal path appears 2^(unused points) times
        weight = pr / 2 ** (2 * k + 1 - n)
        win += weight * (w is A)
        length += weight * n
        tie += weight * reached
    return win, length, tie


@pytest.mark.parametrize("rule", RULES + (Rule.AR,))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_engine_matches_path_enumeration(rule, k):
    rng = random.Random(k)
    for _ in range(3):
        p, q = F(rng.randint(1, 9), 10), F(rng.randint(1, 9), 10)
        res = analyze_win_by_one(rule, MatchFormat(k + 1), ServeModel(p, q))
        assert (res.pr_a_wins, res.expected_length, res.pr_reach_tie_kk) == brute_force(rule, k, p, q)


@pytest.mark.parametrize(
    "rule, m, expected",
    [
        (Rule.SR, 3, F(16, 27)),
        (Rule.CR, 3, F(16, 27)),
        (Rule.TRB, 3, F(14, 27)),
        (Rule.AR, 5, F(46, 81)),
    ],
)
def test_known_win_probabilities(rule, m, expected):
    res = analyze_win_by_one(rule, MatchFormat.best_of(m), ServeModel(F(2, 3), F(2, 3)))
    assert res.pr_a_wins == expected


def test_best_of_5_cr_value():
    res = analyze_win_by_one(Rule.CR, MatchFormat.best_of(5), ServeModel(F(2, 3), F(2, 3)))
    assert round(float(res.pr_a_wins), 3) == 0.568


def test_expected_lengths_best_of_3():
    half = ServeModel(F(2, 3), F(2, 3))
    assert analyze_win_by_one(Rule.SR, MatchFormat(2), half).expected_length == F(7, 3)
    assert analyze_win_by_one(Rule.CR, MatchFormat(2), half).expected_length == F(8, 3)
    for p in frac_grid(7):
        assert analyze_win_by_one(Rule.SR, MatchFormat(2), ServeModel(p, p)).expected_length == 3 - p


def test_certain_server():
    res = analyze_win_by_one(Rule.SR, MatchFormat(2), ServeModel(1, F(1, 3)))
    assert res.pr_a_wins == 1 and res.expected_length == 2 and res.length_distribution == {2: 1}


@pytest.mark.parametrize("rule", RULES)
def test_distribution_invariants(rule):
    for k in (1, 3, 5):
        res = analyze_win_by_one(rule, MatchFormat(k + 1), ServeModel(F(3, 5), F(7, 10)))
        assert res.pr_a_wins + res.pr_b_wins == 1
        assert sum(res.length_distribution.values()) == 1
        assert sum(n * w for n, w in res.length_distribution.items()) == res.expected_length
        assert all(k + 1 <= n <= 2 * k + 1 for n in res.length_distribution)
        assert res.variance_length >= 0
        assert sum(res.tie_entry.values()) == res.pr_reach_tie_kk


probs = st.fractions(min_value=0, max_value=1, max_denominator=12)


@given(st.sampled_from(RULES), st.integers(1, 4), probs, probs)
def test_swap_symmetry(rule, k, p, q):
    fmt = MatchFormat(k + 1)
    res = analyze_win_by_one(rule, fmt, ServeModel(p, q), first_server=A)
    swapped = analyze_win_by_one(rule, fmt, ServeModel(q, p), first_server=B)
    assert res.pr_a_wins == swapped.pr_b_wins
    assert res.expected_length == swapped.expected_length


@given(st.integers(1, 5), probs, probs)
def test_sr_equals_cr(k, p, q):
    fmt, model = MatchFormat(k + 1), ServeModel(p, q)
    assert analyze_win_by_one(Rule.SR, fmt, model).pr_a_wins == analyze_win_by_one(Rule.CR, fmt, model).pr_a_wins


@pytest.mark.parametrize("rule", RULES)
def test_monotone_in_p_and_q(rule):
    grid = frac_grid(8)
    fmt = MatchFormat(3)
    values = {(p, q): analyze_win_by_one(rule, fmt, ServeModel(p, q)).pr_a_wins for p in grid for q in grid}
    for (p, q), v in values.items():
        if (p + F(1, 8), q) in values:
            assert values[p + F(1, 8), q] >= v
        if (p, q + F(1, 8)) in values:
            assert values[p, q + F(1, 8)] <= v


def test_float_mode_agrees():
    exact = analyze_win_by_one(Rule.TRA, MatchFormat(4), ServeModel(F(3, 5), F(7, 10)))
    approx = analyze_win_by_one(Rule.TRA, MatchFormat(4), ServeModel(0.6, 0.7, mode="float"))
    assert approx.pr_a_wins == pytest.approx(float(exact.pr_a_wins), abs=1e-12)
    assert approx.expected_length == pytest.approx(float(exact.expected_length), abs=1e-12)


TABLE1 = {
    Rule.SR: ("2p−p²−2pq+2p²q", "3−q−p²+pq"),
    Rule.CR: ("2p−p²−2pq+2p²q", "2+p−p²+pq"),
    Rule.TRA: ("2p−p²−2pq+2p²q", "2+p−p²+pq"),
    Rule.TRB: ("p+p²−p³−pq²", "2+p−p²+pq"),
}


@pytest.mark.parametrize("rule", RULES)
def test_best_of_3_polynomials(rule):
    pr, el = win_polynomials_best_of_3(rule)
    assert (format_polynomial(pr), format_polynomial(el)) == TABLE1[rule]


def test_unsupported_polynomial_rule():
    with pytest.raises(ValueError):
        win_polynomials_best_of_3(Rule.AR)


def test_format_polynomial_constant_and_coefficients():
    p, q = sympy.symbols("p q")
    assert format_polynomial(sympy.Poly(3 - 2 * p * q**2, p, q)) == "3−2pq²"
    assert format_polynomial(sympy.Poly(0, p, q)) == "0"


def test_symbolic_engine_matches_exact():
    p, q = sympy.symbols("p q")
    sym = win_value_function(Rule.TRB, MatchFormat(3), ServeModel(p, q, mode="symbolic"))(GameState(A, 0, 0))
    exact = analyze_win_by_one(Rule.TRB, MatchFormat(3), ServeModel(F(2, 7), F(5, 9))).pr_a_wins
    assert sympy.Rational(exact.numerator, exact.denominator) == sympy.expand(sym).subs({p: F(2, 7), q: F(5, 9)})


def test_per_serve_sequences():
    # A certain to win only the first serve; thereafter a coin
    model = ServeModel(F(1, 2), F(1, 2), p_seq=(1,))
    fmt = MatchFormat(2)
    res = analyze_win_by_one(Rule.SR, fmt, model)
    # A wins point 1, serves again at 1/2: wins 1/2 outright, else B serves at 1-1 (1/2)
    assert res.pr_a_wins == F(1, 2) + F(1, 2) * F(1, 2)
    # sequences beyond their length fall back to the constants
    plain = analyze_win_by_one(Rule.SR, fmt, ServeModel(F(1, 2), F(1, 2), p_seq=(F(1, 2),)))
    assert plain.pr_a_wins == F(1, 2)


def test_successor_probabilities_sum_to_one():
    model = ServeModel(F(2, 3), F(1, 4))
    for rule in RULES:
        total = sum(pr for pr, _, _ in successors(rule, MatchFormat(3), model, GameState(B, 1, 1)))
        assert total == 1


def test_fixed_sequence_win_by_one():
    seq = tennis_sequence(8)
    res = analyze_win_by_one(seq, MatchFormat(3), ServeModel(F(2, 3), F(2, 3)))
    assert res.pr_a_wins + res.pr_b_wins == 1
    assert res.pr_a_wins == brute_force(seq, 2, F(2, 3), F(2, 3))[0]


def test_win_by_two_rejected():
    with pytest.raises(ValueError):
        analyze_win_by_one(Rule.SR, MatchFormat(2, 2), ServeModel(F(1, 2), F(1, 2)))
