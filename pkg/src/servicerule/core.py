"""Domain types and the server-transition function shared by every engine."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class Player(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Player":
        return Player.B if self is Player.A else Player.A

    def __str__(self) -> str:
        return self.value


A = Player.A
B = Player.B


class Rule(str, enum.Enum):
    """Variable serving mechanisms plus the auxiliary rule used in schedule proofs."""

    SR = "SR"  # winner of the last point serves
    CR = "CR"  # loser of the last point serves
    TRA = "TRa"  # trailing player serves; at a tie, whoever was ahead before it
    TRB = "TRb"  # trailing player serves; at a tie, whoever was behind before it
    AR = "AR"  # A serves k+1 times, then B serves k times

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FixedSequence:
    """A predetermined serving order, cycled when the game outlives it."""

    pattern: tuple[Player, ...]
    name: str = ""

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("fixed serving pattern must be nonempty")
        object.__setattr__(self, "pattern", tuple(Player(s) for s in self.pattern))

    def server_at(self, index: int) -> Player:
        return self.pattern[index % len(self.pattern)]

    def __str__(self) -> str:
        return self.name or "seq:" + "".join(p.value for p in self.pattern)


RuleKind = Union[Rule, FixedSequence]


class ServiceRuleError(Exception):
    """Base class for library errors."""


class UndefinedError(ServiceRuleError):
    """A win probability is undefined because the game need not terminate."""


class DivergesError(ServiceRuleError):
    """An expected length is infinite."""


class ScheduleExhaustedError(ServiceRuleError):
    """A rule asked for a serve beyond the end of a fixed schedule."""


_RULE_ALIASES = {
    "sr": Rule.SR,
    "cr": Rule.CR,
    "tra": Rule.TRA,
    "trb": Rule.TRB,
    "ar": Rule.AR,
}


def parse_rule(text: str) -> RuleKind:
    """Parse ``sr``, ``cr``, ``tra``, ``trb``, ``ar`` or ``seq:ABBA`` (case-insensitive)."""
    key = text.strip().lower()
    if key in _RULE_ALIASES:
        return _RULE_ALIASES[key]
    if key.startswith("seq:"):
        body = text.strip()[4:].upper()
        if not body or set(body) - {"A", "B"}:
            raise ValueError(f"bad serving pattern {text!r}")
        return FixedSequence(tuple(Player(c) for c in body))
    if key in FIXED_SEQUENCES:
        return FIXED_SEQUENCES[key](DEFAULT_PATTERN_LENGTH)
    raise ValueError(f"unknown rule {text!r}")


@dataclass(frozen=True)
class MatchFormat:
    """First to ``points_to_win`` points, with a lead of at least ``win_by``."""

    points_to_win: int
    win_by: int = 1

    def __post_init__(self):
        if int(self.points_to_win) != self.points_to_win or self.points_to_win < 1:
            raise ValueError("points_to_win must be a positive integer")
        if self.win_by not in (1, 2):
            raise ValueError("win_by must be 1 or 2")

    @classmethod
    def best_of(cls, m: int, win_by: int = 1) -> "MatchFormat":
        """Best-of-m with m = 2k+1 odd."""
        if m < 1 or m % 2 == 0:
            raise ValueError("best-of count must be odd and positive")
        return cls((m + 1) // 2, win_by)

    @property
    def k(self) -> int:
        return self.points_to_win - 1

    @property
    def best_of_count(self) -> int:
        return 2 * self.points_to_win - 1

    def winner(self, score_a: int, score_b: int) -> Player | None:
        if score_a >= self.points_to_win and score_a - score_b >= self.win_by:
            return A
        if score_b >= self.points_to_win and score_b - score_a >= self.win_by:
            return B
        return None


def to_probability(value, exact: bool = True):
    """Coerce ``value`` (number or "a/b" string) to a Fraction or float in [0, 1]."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    if exact:
        if isinstance(value, float):
            value = Fraction(value).limit_denominator(10**12)
        else:
            value = Fraction(value)
    else:
        value = float(value)
    if not 0 <= value <= 1:
        raise ValueError(f"probability {value} outside [0, 1]")
    return value


@dataclass(frozen=True)
class ServeModel:
    """Serve-win probabilities: ``p`` for A on serve, ``q`` for B on serve.

    ``p_seq``/``q_seq`` override the constants for a player's first serves
    (index 0 is the player's first serve); later serves fall back to ``p``/``q``.
    ``mode`` is ``"exact"`` (Fractions) or ``"float"``. ``"symbolic"`` skips
    coercion so polynomial expressions can flow through the engines.
    """

    p: object
    q: object
    p_seq: tuple = ()
    q_seq: tuple = ()
    mode: str = "exact"

    def __post_init__(self):
        if self.mode not in ("exact", "float", "symbolic"):
            raise ValueError(f"unknown numeric mode {self.mode!r}")
        if self.mode == "symbolic":
            return
        exact = self.mode == "exact"
        object.__setattr__(self, "p", to_probability(self.p, exact))
        object.__setattr__(self, "q", to_probability(self.q, exact))
        object.__setattr__(self, "p_seq", tuple(to_probability(v, exact) for v in self.p_seq))
        object.__setattr__(self, "q_seq", tuple(to_probability(v, exact) for v in self.q_seq))

    @property
    def has_sequences(self) -> bool:
        return bool(self.p_seq or self.q_seq)

    def serve_prob(self, server: Player, index: int = 0):
        """Probability that ``server`` wins their ``index``-th serve (0-based)."""
        if server is A:
            return self.p_seq[index] if index < len(self.p_seq) else self.p
        return self.q_seq[index] if index < len(self.q_seq) else self.q

    def swapped(self) -> "ServeModel":
        """The same model with the players' roles exchanged."""
        return ServeModel(self.q, self.p, self.q_seq, self.p_seq, self.mode)

    def as_float(self) -> "ServeModel":
        return ServeModel(self.p, self.q, self.p_seq, self.q_seq, "float")


@dataclass(frozen=True, order=True)
class GameState:
    server: Player
    score_a: int
    score_b: int

    def after(self, point_winner: Player, next_server: Player) -> "GameState":
        if point_winner is A:
            return GameState(next_server, self.score_a + 1, self.score_b)
        return GameState(next_server, self.score_a, self.score_b + 1)

    @property
    def points_played(self) -> int:
        return self.score_a + self.score_b

    def __str__(self) -> str:
        return f"({self.server.value},{self.score_a},{self.score_b})"


def initial_state(first_server: Player = A) -> GameState:
    return GameState(Player(first_server), 0, 0)


@dataclass(frozen=True)
class PlayoutRecord:
    """One game played out on predetermined serve results.

    ``outcome`` holds one symbol per point: the point winner's letter, with a
    trailing ``~`` when the server lost the point (``"B~"`` is a point B won on
    A's serve). ``a_losses``/``b_losses`` count server losses in the *whole*
    schedule, which is what the winner criterion is stated in terms of.
    """

    winner: Player
    outcome: tuple[str, ...]
    final_score: tuple[int, int]
    serves_used_by: tuple[int, int]
    a_losses: int = 0
    b_losses: int = 0

    @property
    def length(self) -> int:
        return len(self.outcome)

    @property
    def server_losses(self) -> int:
        return sum(1 for s in self.outcome if s.endswith("~"))

    def outcome_string(self) -> str:
        return " ".join(self.outcome)


def next_server(
    rule: RuleKind,
    state_before: GameState,
    point_winner: Player,
    fmt: MatchFormat | None = None,
) -> Player:
    """Server of the point after ``point_winner`` wins the point played in ``state_before``.

    AR needs ``fmt`` to know k.
    """
    point_winner = Player(point_winner)
    served = state_before.points_played + 1  # index of the next point
    if isinstance(rule, FixedSequence):
        return rule.server_at(served)
    if rule is Rule.SR:
        return point_winner
    if rule is Rule.CR:
        return point_winner.other
    if rule is Rule.TRA or rule is Rule.TRB:
        xa = state_before.score_a + (point_winner is A)
        xb = state_before.score_b + (point_winner is B)
        if xa < xb:
            return A
        if xb < xa:
            return B
        # new tie: the loser of the last point was the one ahead before it
        return point_winner.other if rule is Rule.TRA else point_winner
    if rule is Rule.AR:
        if fmt is None:
            raise ValueError("AR needs the match format to place serves")
        k = fmt.k
        if served < k + 1:
            return A
        if served < 2 * k + 1:
            return B
        raise ScheduleExhaustedError(f"AR has no serve {served + 1} in a best-of-{2 * k + 1} game")
    raise TypeError(f"not a serving rule: {rule!r}")


def first_server_for(rule: RuleKind, first_server: Player = A) -> Player:
    """Validate the opening server against rules that fix it."""
    first_server = Player(first_server)
    if isinstance(rule, FixedSequence):
        if rule.pattern[0] is not first_server:
            raise ValueError("fixed sequence and first_server disagree")
    elif rule is Rule.AR and first_server is not A:
        raise ValueError("AR is defined with A serving first")
    return first_server


# Fixed serving orders ------------------------------------------------------


def tennis_sequence(length: int, first: Player = A) -> FixedSequence:
    """A / BB / AA / BB ... : one serve, then alternating double serves."""
    first = Player(first)
    length = -(-max(length, 4) // 4) * 4  # whole periods so cycling stays correct
    pattern = [first if ((i + 1) // 2) % 2 == 0 else first.other for i in range(length)]
    return FixedSequence(tuple(pattern), "tennis")


def alternating_sequence(length: int = 2, first: Player = A) -> FixedSequence:
    """AB / AB / AB ..."""
    first = Player(first)
    length = -(-max(length, 2) // 2) * 2
    return FixedSequence(tuple(first if i % 2 == 0 else first.other for i in range(length)), "alternating")


def thue_morse_sequence(length: int, first: Player = A) -> FixedSequence:
    """Balanced alternation AB / BA / BA / AB ... (Prouhet-Thue-Morse)."""
    first = Player(first)
    pattern = [first if bin(i).count("1") % 2 == 0 else first.other for i in range(length)]
    return FixedSequence(tuple(pattern), "ptm")


def table_tennis_sequence(length: int, first: Player = A) -> FixedSequence:
    """AA / BB / AA / BB ..."""
    first = Player(first)
    length = -(-max(length, 4) // 4) * 4
    return FixedSequence(tuple(first if (i // 2) % 2 == 0 else first.other for i in range(length)), "table-tennis")


DEFAULT_PATTERN_LENGTH = 1 << 12

FIXED_SEQUENCES = {
    "tennis": tennis_sequence,
    "alternating": alternating_sequence,
    "ptm": thue_morse_sequence,
    "table-tennis": table_tennis_sequence,
}
