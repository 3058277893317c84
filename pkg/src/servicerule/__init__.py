"""Exact and simulated analysis of serving rules in two-player service sports."""

from ._backend import BACKEND
from .core import (
    A,
    B,
    DivergesError,
    FixedSequence,
    GameState,
    MatchFormat,
    Player,
    PlayoutRecord,
    Rule,
    ScheduleExhaustedError,
    ServeModel,
    ServiceRuleError,
    UndefinedError,
    alternating_sequence,
    next_server,
    parse_rule,
    table_tennis_sequence,
    tennis_sequence,
    thue_morse_sequence,
)
from .engine import GameAnalysis, analyze_win_by_one, win_polynomials_best_of_3
from .montecarlo import SimReport, simulate
from .schedules import (
    ScheduleParams,
    ServingSchedule,
    corollary1_probability,
    expected_length_via_schedules,
    fixed_sequence_fairness,
    lemma1_expected_position,
    playout,
    schedule_expected_length,
    theorem1_oracle,
)
from .strategy import (
    StrategyVerdict,
    honest_value,
    is_strategy_proof,
    optimal_deviation_value,
    vulnerability_region_scan,
)
from .tiebreak import DeuceSolution, WinByTwoAnalysis, analyze_win_by_two, deuce_expected_length, solve_deuce

__version__ = "0.1.0"

__all__ = [
    "A",
    "B",
    "BACKEND",
    "DeuceSolution",
    "DivergesError",
    "FixedSequence",
    "GameAnalysis",
    "GameState",
    "MatchFormat",
    "Player",
    "PlayoutRecord",
    "Rule",
    "ScheduleExhaustedError",
    "ScheduleParams",
    "ServeModel",
    "ServiceRuleError",
    "ServingSchedule",
    "SimReport",
    "StrategyVerdict",
    "UndefinedError",
    "WinByTwoAnalysis",
    "alternating_sequence",
    "analyze_win_by_one",
    "analyze_win_by_two",
    "corollary1_probability",
    "deuce_expected_length",
    "expected_length_via_schedules",
    "fixed_sequence_fairness",
    "honest_value",
    "is_strategy_proof",
    "lemma1_expected_position",
    "next_server",
    "optimal_deviation_value",
    "parse_rule",
    "playout",
    "schedule_expected_length",
    "simulate",
    "solve_deuce",
    "table_tennis_sequence",
    "tennis_sequence",
    "theorem1_oracle",
    "thue_morse_sequence",
    "vulnerability_region_scan",
    "win_polynomials_best_of_3",
]
