from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from servicerule.core import A, B, GameState, MatchFormat, Rule, ServeModel, next_server
from servicerule.engine import analyze_win_by_one, win_value_function
from servicerule.strategy import (
    grid_points,
    honest_value,
    is_strategy_proof,
    optimal_deviation_value,
    profitable_tanks,
    reachable_states,
    vulnerability_region_scan,
)

from conftest import frac_grid

F = Fraction
BO3 = MatchFormat(2)


def test_honest_values():
    model = ServeModel(F(2, 3), F(2, 3))
    assert honest_value(Rule.SR, BO3, model, GameState(A, 0, 0), A) == F(16, 27)
    assert honest_value(Rule.SR, BO3, model, GameState(A, 0, 0), B) == F(11, 27)
    assert honest_value(Rule.TRB, BO3, model, GameState(A, 1, 1), A) == F(2, 3)
    with pytest.raises(ValueError):
        honest_value(Rule.SR, BO3, model, GameState(A, 3, 0), A)


def test_trb_counterexample():
    model = ServeModel(F(4, 5), F(4, 5))
    assert optimal_deviation_value(Rule.TRB, BO3, model, A) == F(16, 25)
    verdict = is_strategy_proof(Rule.TRB, BO3, model, A)
    assert not verdict.strategy_proof
    assert verdict.honest_value == F(52, 125)
    state, honest, tank = verdict.witness
    assert state == GameState(A, 0, 0) and tank == F(16, 25) > honest
    assert verdict.profitable_states[0] == state


@pytest.mark.parametrize("p, proof", [(F(3, 4), False), (F(3, 5), True)])
def test_trb_circle_examples(p, proof):
    assert is_strategy_proof(Rule.TRB, BO3, ServeModel(p, p), A).strategy_proof is proof


def test_trb_boundary_point_is_proof():
    p = F(707, 1000)
    assert p * p * 2 < 1
    assert is_strategy_proof(Rule.TRB, BO3, ServeModel(p, p), A).strategy_proof


def test_tra_best_of_5_example():
    v = is_strategy_proof(Rule.TRA, MatchFormat(3), ServeModel(F(7, 10), F(3, 5)), A)
    assert v.strategy_proof and v.witness is None


def test_cr_best_of_5_no_gain():
    model = ServeModel(F(2, 3), F(2, 3))
    value = optimal_deviation_value(Rule.CR, MatchFormat(3), model, A)
    assert value == analyze_win_by_one(Rule.CR, MatchFormat(3), model).pr_a_wins
    assert round(float(value), 3) == 0.568


probs = st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20)


@given(st.sampled_from([Rule.SR, Rule.CR]), st.integers(1, 4), probs, probs, st.sampled_from([A, B]))
def test_sr_cr_deviation_never_pays(rule, k, p, q, player):
    fmt, model = MatchFormat(k + 1), ServeModel(p, q)
    honest = honest_value(rule, fmt, model, GameState(A, 0, 0), player)
    assert optimal_deviation_value(rule, fmt, model, player) == honest


@pytest.mark.parametrize("rule", [Rule.SR, Rule.CR])
def test_winning_a_point_never_hurts(rule):
    """State-wise: A's value after winning a point is at least its value after losing it."""
    for k in (1, 2, 3):
        fmt = MatchFormat(k + 1)
        for p in frac_grid(5):
            for q in frac_grid(5):
                W = win_value_function(rule, fmt, ServeModel(p, q))

                def val(x, y, server):
                    winner = fmt.winner(x, y)
                    return (winner is A) if winner else W(GameState(server, x, y))

                for s in reachable_states(rule, fmt, ServeModel(p, q)):
                    won = val(s.score_a + 1, s.score_b, next_server(rule, s, A))
                    lost = val(s.score_a, s.score_b + 1, next_server(rule, s, B))
                    assert lost <= won


def test_tra_lemma_identity():
    for k in range(1, 5):
        fmt = MatchFormat(k + 1)
        for p in frac_grid(6):
            for q in frac_grid(6):
                W = win_value_function(Rule.TRA, fmt, ServeModel(p, q))

                def w(s):
                    winner = fmt.winner(s.score_a, s.score_b)
                    return (winner is A) if winner else W(s)

                for x in range(k + 1):
                    lhs = w(GameState(A, x, x)) - w(GameState(B, x, x))
                    rhs = (p + q - 1) * (w(GameState(B, x + 1, x)) - w(GameState(A, x, x + 1)))
                    assert lhs == rhs


def test_tra_sibling_monotonicity():
    for k in range(1, 5):
        fmt = MatchFormat(k + 1)
        for p in frac_grid(6):
            for q in frac_grid(6):
                if p + q <= 1:
                    continue
                model = ServeModel(p, q)
                W = win_value_function(Rule.TRA, fmt, model)
                states = reachable_states(Rule.TRA, fmt, model)
                for s in states:
                    for t in states:
                        if (t.score_a, t.score_b) == (s.score_a - 1, s.score_b + 1):
                            assert W(s) >= W(t)


def test_trailing_server_invariant():
    for rule in (Rule.TRA, Rule.TRB):
        for s in reachable_states(rule, MatchFormat(5), ServeModel(F(1, 2), F(1, 2))):
            if s.score_a != s.score_b:
                assert s.server is (A if s.score_a < s.score_b else B)


def test_trb_region_matches_circle():
    scan = vulnerability_region_scan(Rule.TRB, 1, F(1, 20), strategizers=(A,))
    assert scan.vulnerable(A) == {c for c in scan.cells if c[0] ** 2 + c[1] ** 2 > 1}


def test_sr_region_is_empty():
    for k in range(1, 5):
        assert vulnerability_region_scan(Rule.SR, k, 10).vulnerable() == set()


def test_trb_receiver_tank_for_b_reported():
    # outside the circle statement: B can gain by conceding A's first serve
    found = profitable_tanks(Rule.TRB, BO3, ServeModel(F(1, 2), F(9, 10)), B)
    assert found and found[0][0] == GameState(A, 0, 0)
    assert found[0][1:] == (F(39, 50), F(81, 100))


def test_grid_points():
    assert grid_points(4) == [F(1, 4), F(1, 2), F(3, 4)]
    assert grid_points(0.25) == grid_points("1/4") == grid_points(4)
    assert len(grid_points(F(1, 20))) == 19
    for bad in (1, 0.0, 1.5):
        with pytest.raises(ValueError):
            grid_points(bad)


def test_rejections():
    with pytest.raises(ValueError):
        is_strategy_proof(Rule.SR, MatchFormat(2, 2), ServeModel(F(1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        honest_value(Rule.SR, BO3, ServeModel(F(1, 2), F(1, 2), p_seq=(1,)), GameState(A, 0, 0))
