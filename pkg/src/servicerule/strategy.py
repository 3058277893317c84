"""Strategy-proofness: can a player gain by deliberately losing a point?

A deviation is a certain loss of the current point (as server or receiver)
with the opponent playing honestly. Because games are finite, a profitable
deviation exists exactly when some single state admits a profitable
one-point tank followed by honest play; the full optimal-deviation value is
computed too, by backward induction with a max over {play, tank}.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import A, B, GameState, MatchFormat, Player, RuleKind, ServeModel, first_server_for
from .engine import successors, win_value_function


@dataclass(frozen=True)
class StrategyVerdict:
    strategy_proof: bool
    strategizer: Player
    witness: tuple | None = None  # (state, honest value, tank-now value)
    optimal_value: object = None
    honest_value: object = None
    profitable_states: tuple = ()


def _check_state(fmt: MatchFormat, state: GameState) -> None:
    if not (0 <= state.score_a <= fmt.points_to_win and 0 <= state.score_b <= fmt.points_to_win):
        raise ValueError(f"state {state} is outside a first-to-{fmt.points_to_win} game")
    if state.score_a == fmt.points_to_win and state.score_b == fmt.points_to_win:
        raise ValueError(f"state {state} has two winners")


def _check_model(model: ServeModel) -> None:
    if model.has_sequences:
        raise ValueError("strategy analysis uses constant serve probabilities")


def _value_for(player: Player, value_a):
    return value_a if player is A else 1 - value_a


def honest_value(rule: RuleKind, fmt: MatchFormat, model: ServeModel, state: GameState, perspective: Player = A):
    """``perspective``'s win probability from ``state`` when both play honestly."""
    _check_model(model)
    _check_state(fmt, state)
    return _value_for(Player(perspective), win_value_function(rule, fmt, model)(state))


def _children(rule, fmt, model, state):
    """``{point_winner: (probability, next)}``; ``next`` is a state or a final score."""
    return {winner: (pr, nxt[0] if isinstance(nxt[0], GameState) else nxt) for pr, winner, nxt in successors(rule, fmt, model, state)}


def deviation_value_function(rule: RuleKind, fmt: MatchFormat, model: ServeModel, strategizer: Player):
    """Return ``V(state)``: the strategizer's best win probability when free to tank any point."""
    _check_model(model)
    strategizer = Player(strategizer)

    @lru_cache(maxsize=None)
    def value(state: GameState):
        play = 0
        kids = _children(rule, fmt, model, state)
        for pr, nxt in kids.values():
            play += pr * _leaf(nxt)
        tank = _leaf(kids[strategizer.other][1])
        return play if play >= tank else tank

    def _leaf(nxt):
        if isinstance(nxt, GameState):
            return value(nxt)
        return 1 if fmt.winner(*nxt) is strategizer else 0

    return value


def optimal_deviation_value(
    rule: RuleKind,
    fmt: MatchFormat,
    model: ServeModel,
    strategizer: Player = A,
    first_server: Player = A,
):
    """Best win probability for ``strategizer`` from the opening state."""
    root = GameState(first_server_for(rule, first_server), 0, 0)
    return deviation_value_function(rule, fmt, model, strategizer)(root)


def reachable_states(rule: RuleKind, fmt: MatchFormat, model: ServeModel, first_server: Player = A) -> list[GameState]:
    """Nonterminal states in breadth-first order, counting every point outcome as possible."""
    root = GameState(first_server_for(rule, first_server), 0, 0)
    seen = {root}
    order = []
    queue = deque([root])
    while queue:
        state = queue.popleft()
        order.append(state)
        # successors() only needs probabilities to label edges; structure is rule-driven
        for winner in (state.server, state.server.other):
            for _, w, nxt in successors(rule, fmt, model, state):
                if w is winner and isinstance(nxt[0], GameState) and nxt[0] not in seen:
                    seen.add(nxt[0])
                    queue.append(nxt[0])
    return order


def profitable_tanks(rule: RuleKind, fmt: MatchFormat, model: ServeModel, strategizer: Player = A, first_server: Player = A):
    """All ``(state, honest, tank_now)`` where losing this point on purpose pays off."""
    _check_model(model)
    strategizer = Player(strategizer)
    W = win_value_function(rule, fmt, model)

    def val(nxt):
        if isinstance(nxt, GameState):
            return _value_for(strategizer, W(nxt))
        return 1 if fmt.winner(*nxt) is strategizer else 0

    found = []
    for state in reachable_states(rule, fmt, model, first_server):
        honest = _value_for(strategizer, W(state))
        tank = val(_children(rule, fmt, model, state)[strategizer.other][1])
        if tank > honest:
            found.append((state, honest, tank))
    return found


def is_strategy_proof(
    rule: RuleKind,
    fmt: MatchFormat,
    model: ServeModel,
    strategizer: Player = A,
    first_server: Player = A,
) -> StrategyVerdict:
    if fmt.win_by != 1:
        raise ValueError("strategy-proofness is analysed for Win-by-One games")
    strategizer = Player(strategizer)
    found = profitable_tanks(rule, fmt, model, strategizer, first_server)
    root = GameState(first_server_for(rule, first_server), 0, 0)
    return StrategyVerdict(
        strategy_proof=not found,
        strategizer=strategizer,
        witness=found[0] if found else None,
        optimal_value=deviation_value_function(rule, fmt, model, strategizer)(root),
        honest_value=honest_value(rule, fmt, model, root, strategizer),
        profitable_states=tuple(s for s, _, _ in found),
    )


def grid_points(resolution) -> list[Fraction]:
    """Interior grid of (0, 1).

    An integer n >= 2 means step 1/n; anything else (``0.05``, ``"1/20"``) is
    the step itself.
    """
    if isinstance(resolution, int):
        if resolution < 2:
            raise ValueError("grid needs at least 2 divisions")
        step = Fraction(1, resolution)
    else:
        step = Fraction(str(resolution)) if isinstance(resolution, float) else Fraction(resolution)
    if not 0 < step < 1:
        raise ValueError("grid step must lie in (0, 1)")
    points = []
    x = step
    while x < 1:
        points.append(x)
        x += step
    return points


@dataclass
class RegionScan:
    rule: str
    k: int
    cells: dict = field(default_factory=dict)  # (p, q) -> {player: strategy_proof}

    def vulnerable(self, player: Player | None = None) -> set:
        players = (A, B) if player is None else (Player(player),)
        return {cell for cell, verdicts in self.cells.items() if any(not verdicts[pl] for pl in players if pl in verdicts)}


def vulnerability_region_scan(rule: RuleKind, k: int, grid_resolution, strategizers=(A, B)) -> RegionScan:
    """Strategy-proofness verdict at every interior (p, q) grid point of a best-of-(2k+1) game."""
    fmt = MatchFormat(k + 1)
    scan = RegionScan(str(rule), k)
    points = grid_points(grid_resolution)
    for p in points:
        for q in points:
            model = ServeModel(p, q)
            scan.cells[p, q] = {
                Player(pl): is_strategy_proof(rule, fmt, model, pl).strategy_proof for pl in strategizers
            }
    return scan
