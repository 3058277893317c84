"""Win-by-Two: the deuce phase under SR and CR, and whole-game composition.

From a tie the game advances in two-point blocks: after two points the
game is either decided or tied again, with some server. That gives a 2x2
linear system in the win probabilities (and expected lengths) from a tie
with A serving and from a tie with B serving.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    A,
    B,
    DivergesError,
    GameState,
    MatchFormat,
    Player,
    Rule,
    ServeModel,
    UndefinedError,
    next_server,
)
from .engine import analyze_win_by_one, reach_profile

DEUCE_RULES = (Rule.SR, Rule.CR)


@dataclass(frozen=True)
class DeuceSolution:
    """Deuce outcome seen from ``first_server``.

    ``u``: first_server wins the deuce when serving at the tie.
    ``v``: first_server wins the deuce when the opponent serves at the tie.
    ``expected_length`` is in points, from a tie with first_server serving.
    """

    rule: Rule
    first_server: Player
    u: object
    v: object
    expected_length: object
    expected_length_receiving: object


@dataclass(frozen=True)
class WinByTwoAnalysis:
    pr_a_wb1: object
    pr_b_wb1: object
    qr_a: object
    qr_b: object
    pr_tie: object
    el_wb1: object
    el_wb2: object


def _num(x):
    # keep exact inputs exact: 1 / int would silently become a float
    if isinstance(x, (int, str)):
        return Fraction(x)
    return x


def _check_rule(rule) -> Rule:
    if rule not in DEUCE_RULES:
        raise ValueError(f"deuce analysis covers SR and CR only, not {rule}")
    return rule


def _block_matrix(rule: Rule, p, q):
    """Two-point transitions out of a tie.

    Returns ``(M, r)`` with ``M[c][d]`` the probability that a tie with ``c``
    serving becomes a tie with ``d`` serving after two points, and ``r[c]`` the
    probability that A wins outright within those two points.
    """
    probs = {A: _num(p), B: _num(q)}
    M = {A: {A: 0, B: 0}, B: {A: 0, B: 0}}
    r = {A: 0, B: 0}
    for c in (A, B):
        tie = GameState(c, 1, 1)
        for w1 in (A, B):
            pr1 = probs[c] if w1 is c else 1 - probs[c]
            s1 = GameState(next_server(rule, tie, w1), 1 + (w1 is A), 1 + (w1 is B))
            for w2 in (A, B):
                pr2 = probs[s1.server] if w2 is s1.server else 1 - probs[s1.server]
                if w1 is w2:
                    if w1 is A:
                        r[c] += pr1 * pr2
                else:
                    M[c][next_server(rule, s1, w2)] += pr1 * pr2
    return M, r


def _solve2(M, rhs):
    """Solve (I - M) x = rhs over the tie states {A, B}."""
    a11, a12 = 1 - M[A][A], -M[A][B]
    a21, a22 = -M[B][A], 1 - M[B][B]
    det = a11 * a22 - a12 * a21
    if det == 0:
        return None
    return {
        A: (rhs[A] * a22 - a12 * rhs[B]) / det,
        B: (a11 * rhs[B] - a21 * rhs[A]) / det,
    }


def deuce_values(rule: Rule, p, q):
    """A's deuce win probability and expected deuce length, keyed by tie server.

    Raises UndefinedError when a tie can recur forever with positive
    probability (SR at p=q=0, CR at p=q=1).
    """
    _check_rule(rule)
    M, r = _block_matrix(rule, p, q)
    win = _solve2(M, r)
    if win is None:
        raise UndefinedError(_degenerate_message(rule, "win probability is undefined"))
    length = _solve2(M, {A: 2, B: 2})
    return win, length


def _degenerate_message(rule: Rule, what: str) -> str:
    which = "p = 0" if rule is Rule.SR else "p = 1"
    return (
        f"{rule} deuce {what}: the tiebreaker never ends (degenerate case {which}; "
        f"`servicerule tables --which 2` lists it as undefined with infinite length)"
    )


def solve_deuce(rule: Rule, p, q, first_server: Player = A) -> DeuceSolution:
    first_server = Player(first_server)
    win, length = deuce_values(rule, p, q)
    other = first_server.other
    if first_server is A:
        u, v = win[A], win[B]
    else:
        u, v = 1 - win[B], 1 - win[A]
    return DeuceSolution(rule, first_server, u, v, length[first_server], length[other])


def deuce_expected_length(rule: Rule, p, q, first_server: Player = A):
    """Expected number of deuce points from a tie with ``first_server`` serving."""
    _check_rule(rule)
    M, _ = _block_matrix(rule, p, q)
    length = _solve2(M, {A: 2, B: 2})
    if length is None:
        raise DivergesError(_degenerate_message(rule, "expected length is infinite"))
    return length[Player(first_server)]


def closed_form_deuce(rule: Rule, p):
    """Equal-skill (p = q) deuce values for the player serving first: ``(Pr, EL)``."""
    _check_rule(rule)
    p = _num(p)
    if rule is Rule.SR:
        if p == 0:
            raise UndefinedError(_degenerate_message(rule, "win probability is undefined"))
        return 1 / (3 - 2 * p), 2 / p
    if p == 1:
        raise UndefinedError(_degenerate_message(rule, "win probability is undefined"))
    return 2 * p / (1 + 2 * p), 2 / (1 - p)


def analyze_win_by_two(rule: Rule, fmt: MatchFormat, model: ServeModel, first_server: Player = A) -> WinByTwoAnalysis:
    """Compose the Win-by-One pre-tie game with the deuce phase at (k, k)."""
    _check_rule(rule)
    if fmt.win_by != 2:
        raise ValueError("analyze_win_by_two needs win_by = 2")
    if model.has_sequences:
        raise ValueError("per-serve sequences are not supported in Win-by-Two analysis")
    k = fmt.k
    wb1_fmt = MatchFormat(fmt.points_to_win, 1)
    wb1 = analyze_win_by_one(rule, wb1_fmt, model, first_server)
    nonterminal, terminal = reach_profile(rule, wb1_fmt, model, first_server)

    qr_a = 0
    el = 0
    for (x, y), mass in terminal.items():
        if min(x, y) < k:  # decided without passing through (k, k)
            el += mass * (x + y)
            if x > y:
                qr_a += mass
    win, length = deuce_values(rule, model.p, model.q)
    pr_tie = 0
    for state, mass in nonterminal.items():
        if state.score_a == k and state.score_b == k:
            pr_tie += mass
            qr_a += mass * win[state.server]
            el += mass * (2 * k + length[state.server])
    return WinByTwoAnalysis(
        pr_a_wb1=wb1.pr_a_wins,
        pr_b_wb1=wb1.pr_b_wins,
        qr_a=qr_a,
        qr_b=1 - qr_a,
        pr_tie=pr_tie,
        el_wb1=wb1.expected_length,
        el_wb2=el,
    )


def figure_curves(ps):
    """Rows ``(p, Pr_SR, Pr_CR, EL_SR, EL_CR)`` of the equal-skill deuce curves."""
    rows = []
    for p in ps:
        pr_sr, el_sr = closed_form_deuce(Rule.SR, p)
        pr_cr, el_cr = closed_form_deuce(Rule.CR, p)
        rows.append((p, pr_sr, pr_cr, el_sr, el_cr))
    return rows
