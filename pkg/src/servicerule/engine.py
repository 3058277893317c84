"""Exact evaluation of Win-by-One games by backward induction over score states.

All routines are generic in the number type: Fractions give exact results,
floats give fast sweeps, and sympy symbols give the polynomials in p and q.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from .core import (
    A,
    B,
    GameState,
    MatchFormat,
    Player,
    Rule,
    RuleKind,
    ServeModel,
    first_server_for,
    next_server,
)

# A node is (state, serve_counts); serve_counts is None when the model has no
# per-serve sequences, which collapses histories that differ only in serve order.
Node = tuple


@dataclass(frozen=True)
class GameAnalysis:
    pr_a_wins: object
    pr_b_wins: object
    expected_length: object
    length_distribution: dict
    pr_reach_tie_kk: object
    tie_entry: dict = field(default_factory=dict)  # server at (k, k) -> probability

    @property
    def variance_length(self):
        mean = self.expected_length
        return sum(pr * (n - mean) ** 2 for n, pr in self.length_distribution.items())


def _require_win_by_one(fmt: MatchFormat) -> None:
    if fmt.win_by != 1:
        raise ValueError("this routine handles Win-by-One formats only; see tiebreak.analyze_win_by_two")


def successors(rule: RuleKind, fmt: MatchFormat, model: ServeModel, state: GameState, counts=None):
    """Both outcomes of the point played in ``state``.

    Yields ``(probability, point_winner, next)`` where ``next`` is either a
    ``(GameState, counts)`` node or, once the game is decided, the final score
    tuple ``(x, y)``.
    """
    server = state.server
    if counts is None:
        ps = model.serve_prob(server, 0)
        new_counts = None
    else:
        i, j = counts
        ps = model.serve_prob(server, i if server is A else j)
        new_counts = (i + 1, j) if server is A else (i, j + 1)
    for winner, pr in ((server, ps), (server.other, 1 - ps)):
        x = state.score_a + (winner is A)
        y = state.score_b + (winner is B)
        if fmt.winner(x, y) is not None:
            yield pr, winner, (x, y)
        else:
            nxt = GameState(next_server(rule, state, winner, fmt), x, y)
            yield pr, winner, (nxt, new_counts)


def _root(rule: RuleKind, model: ServeModel, first_server: Player) -> Node:
    first = first_server_for(rule, first_server)
    return GameState(first, 0, 0), ((0, 0) if model.has_sequences else None)


def win_value_function(rule: RuleKind, fmt: MatchFormat, model: ServeModel):
    """Return ``W(state, counts=None)``: A's honest win probability from a state.

    Memoized backward induction; terminal scores are worth 1 (A reached the
    target) or 0.
    """
    _require_win_by_one(fmt)

    @lru_cache(maxsize=None)
    def value(state: GameState, counts=None):
        if fmt.winner(state.score_a, state.score_b) is not None:
            return 1 if fmt.winner(state.score_a, state.score_b) is A else 0
        total = 0
        for pr, _, nxt in successors(rule, fmt, model, state, counts):
            if isinstance(nxt[0], GameState):
                total += pr * value(*nxt)
            else:
                total += pr * (1 if fmt.winner(*nxt) is A else 0)
        return total

    return value


def reach_profile(rule: RuleKind, fmt: MatchFormat, model: ServeModel, first_server: Player = A):
    """Forward-propagate probability mass through the game.

    Returns ``(nonterminal, terminal)``: the probability that each state
    (serve counts summed out) is ever visited, and the probability of each
    final score.
    """
    _require_win_by_one(fmt)
    frontier = {_root(rule, model, first_server): 1}
    nonterminal: dict = defaultdict(int)
    terminal: dict = defaultdict(int)
    while frontier:
        nxt_frontier: dict = defaultdict(int)
        for (state, counts), mass in frontier.items():
            nonterminal[state] += mass
            for pr, _, nxt in successors(rule, fmt, model, state, counts):
                if isinstance(nxt[0], GameState):
                    nxt_frontier[nxt] += mass * pr
                else:
                    terminal[nxt] += mass * pr
        frontier = nxt_frontier
    return dict(nonterminal), dict(terminal)


def analyze_win_by_one(
    rule: RuleKind,
    fmt: MatchFormat,
    model: ServeModel,
    first_server: Player = A,
) -> GameAnalysis:
    """Win probabilities, length distribution and (k, k) tie probability."""
    _require_win_by_one(fmt)
    root_state, root_counts = _root(rule, model, first_server)
    pr_a = win_value_function(rule, fmt, model)(root_state, root_counts)

    nonterminal, terminal = reach_profile(rule, fmt, model, first_server)
    lengths: dict = defaultdict(int)
    for (x, y), mass in terminal.items():
        lengths[x + y] += mass
    k = fmt.k
    tie_entry = {s.server: m for s, m in nonterminal.items() if s.score_a == k and s.score_b == k}
    return GameAnalysis(
        pr_a_wins=pr_a,
        pr_b_wins=1 - pr_a,
        expected_length=sum(n * m for n, m in lengths.items()),
        length_distribution={n: m for n, m in sorted(lengths.items()) if m != 0},
        pr_reach_tie_kk=sum(tie_entry.values()),
        tie_entry=tie_entry,
    )


# Best-of-3 closed forms -------------------------------------------------


_TABLE1_RULES = (Rule.SR, Rule.CR, Rule.TRA, Rule.TRB)


def win_polynomials_best_of_3(rule: Rule):
    """Pr(A wins) and expected length of a Best-of-3 game as sympy polynomials in p, q."""
    import sympy

    if rule not in _TABLE1_RULES:
        raise ValueError(f"Best-of-3 polynomials are tabulated for SR, CR, TRa, TRb; got {rule}")
    p, q = sympy.symbols("p q")
    model = ServeModel(p, q, mode="symbolic")
    fmt = MatchFormat(2)
    pr_a = win_value_function(rule, fmt, model)(GameState(A, 0, 0))
    _, terminal = reach_profile(rule, fmt, model)
    length = sum(mass * (x + y) for (x, y), mass in terminal.items())
    return sympy.Poly(sympy.expand(pr_a), p, q), sympy.Poly(sympy.expand(length), p, q)


_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def format_polynomial(poly) -> str:
    """Render a sympy Poly in p, q compactly, e.g. ``2p−p²−2pq+2p²q``.

    Terms run by increasing total degree, then by falling power of p.
    """
    terms = sorted(poly.terms(), key=lambda t: (sum(t[0]), -t[0][0]))
    out = []
    for (i, j), coeff in terms:
        mono = ""
        if i:
            mono += "p" + (str(i).translate(_SUPERSCRIPTS) if i > 1 else "")
        if j:
            mono += "q" + (str(j).translate(_SUPERSCRIPTS) if j > 1 else "")
        mag = abs(coeff)
        body = (str(mag) if mag != 1 or not mono else "") + mono
        if not out:
            out.append(("−" if coeff < 0 else "") + body)
        else:
            out.append(("−" if coeff < 0 else "+") + body)
    return "".join(out) or "0"
