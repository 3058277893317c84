"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 when a
requested quantity is undefined or infinite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import tables, verify
from .core import (
    A,
    DivergesError,
    MatchFormat,
    Player,
    Rule,
    ScheduleExhaustedError,
    ServeModel,
    UndefinedError,
    parse_rule,
)
from .montecarlo import DEFAULT_CAP, simulate
from .strategy import vulnerability_region_scan

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNDEFINED = 0, 1, 2, 3


class InputError(Exception):
    pass


# Serialization ---------------------------------------------------------------


def to_json_value(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, Player):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    return str(value)


def to_csv_value(value, decimals: int = 3) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (str, int)):
        return str(value)
    if isinstance(value, Player):
        return value.value
    if isinstance(value, (Fraction, float)):
        return tables.round_half_even(value, decimals)
    return str(value)


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def table_csv(table: tables.Table) -> str:
    return render_csv(table.columns, table.csv_rows())


def table_json(table: tables.Table) -> dict:
    return {"name": table.name, "columns": list(table.columns), "rows": [to_json_value(list(r)) for r in table.rows]}


def emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def dump_json(payload: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **to_json_value(payload)}, indent=2, ensure_ascii=False) + "\n"


# Argument parsing --------------------------------------------------------------


def _probability(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return value


def _probability_list(text: str) -> tuple:
    return tuple(_probability(t) for t in text.split(",") if t.strip())


def _rule(text: str):
    try:
        return parse_rule(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _player(text: str) -> Player:
    try:
        return Player(text.strip().upper())
    except ValueError:
        raise argparse.ArgumentTypeError("player must be A or B") from None


def _grid(text: str):
    """Integer n means 1/n steps; decimals and fractions are the step."""
    text = text.strip()
    if text.isdigit():
        return int(text)
    try:
        step = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    return step


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="servicerule", description="Exact and simulated analysis of serving rules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p, default):
        p.add_argument("--format", choices=("json", "csv"), default=default)
        p.add_argument("--output", help="write to this file instead of stdout")

    an = sub.add_parser("analyze", help="win probabilities and expected lengths for one configuration")
    an.add_argument("--rule", type=_rule, required=True, help="sr, cr, tra, trb, ar, tennis, alternating, ptm, table-tennis or seq:ABBA")
    an.add_argument("--points-to-win", type=_positive, default=2)
    an.add_argument("--win-by", type=int, choices=(1, 2), default=1)
    an.add_argument("--p", type=_probability, required=True)
    an.add_argument("--q", type=_probability, required=True)
    an.add_argument("--p-seq", type=_probability_list, default=(), help="A's per-serve probabilities, comma separated")
    an.add_argument("--q-seq", type=_probability_list, default=(), help="B's per-serve probabilities, comma separated")
    an.add_argument("--mode", choices=("rational", "float"), default="rational")
    an.add_argument("--first-server", type=_player, default=A)
    an.add_argument("--trials", type=_positive, help="also run this many simulated games")
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    add_output(an, "json")

    tb = sub.add_parser("tables", help="reproduce the result tables")
    tb.add_argument("--which", choices=("1", "2", "3", "all"), default="all")
    tb.add_argument("--out-dir", help="write tableN.csv/json files here")
    tb.add_argument("--format", choices=("json", "csv"), default="csv")

    fg = sub.add_parser("figures", help="deuce curves sampled on [0.01, 0.99]")
    fg.add_argument("--step", type=_probability, default=Fraction(1, 100))
    fg.add_argument("--out-dir")
    fg.add_argument("--format", choices=("json", "csv"), default="csv")

    vf = sub.add_parser("verify", help="run a verification suite")
    vf.add_argument("suite", choices=("theorem1", "theorem2", "theorem3", "schedules", "lemma1", "mc"))
    vf.add_argument("--k", type=_positive)
    vf.add_argument("--grid", type=_grid)
    vf.add_argument("--rule", type=_rule)
    vf.add_argument("--player", type=_player, action="append", help="strategizer (repeatable); default both")
    vf.add_argument("--upper-half", action="store_true", help="theorem3: only grid points with p + q > 1")
    vf.add_argument("--r-max", type=_positive, default=8)
    vf.add_argument("--trials", type=_positive, default=1_000_000)
    vf.add_argument("--seed", type=int, default=20260101)
    vf.add_argument("--backend", choices=("cython", "python"))
    add_output(vf, "json")

    sc = sub.add_parser("scan", help="strategy-proofness verdict over a (p, q) grid")
    sc.add_argument("--rule", type=_rule, required=True)
    sc.add_argument("--k", type=_positive, default=1)
    sc.add_argument("--grid", type=_grid, default=20)
    sc.add_argument("--player", type=_player, action="append")
    add_output(sc, "csv")
    return parser


# Commands ------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    fmt = MatchFormat(args.points_to_win, args.win_by)
    mode = "exact" if args.mode == "rational" else "float"
    model = ServeModel(args.p, args.q, args.p_seq, args.q_seq, mode=mode)
    result: dict = {}
    exact_error = None
    if fmt.win_by == 2 and args.rule not in (Rule.SR, Rule.CR):
        exact_error = "exact Win-by-Two analysis covers SR and CR only"
        if args.trials is None:
            raise InputError(exact_error + "; pass --trials to simulate")
    else:
        result = verify.exact_summary(args.rule, fmt, model, args.first_server)
    payload = {
        "command": "analyze",
        "config": {
            "rule": str(args.rule),
            "points_to_win": fmt.points_to_win,
            "win_by": fmt.win_by,
            "p": model.p,
            "q": model.q,
            "mode": args.mode,
            "first_server": args.first_server,
        },
        "result": result,
    }
    if exact_error:
        payload["note"] = exact_error
    sim_row = {}
    if args.trials:
        rep = simulate(args.rule, fmt, model, args.trials, args.seed, args.first_server, cap=args.cap)
        sim_row = {
            "sim_trials": rep.trials,
            "sim_seed": rep.seed,
            "sim_pr_a": rep.pr_a_hat.value,
            "sim_pr_a_se": rep.pr_a_hat.se,
            "sim_mean_length": rep.mean_length_hat.value,
            "sim_mean_length_se": rep.mean_length_hat.se,
            "sim_tie_rate": rep.tie_rate_hat.value,
            "sim_tie_rate_se": rep.tie_rate_hat.se,
            "sim_cap_hits": rep.cap_hits,
        }
        payload["simulation"] = sim_row
    if args.format == "json":
        emit(dump_json(payload), args.output)
    else:
        row = {**result, **sim_row}
        emit(render_csv(list(row), [[to_csv_value(v, 6 if k.endswith("_se") else 3) for k, v in row.items()]]), args.output)
    return EXIT_OK


def _write_tables(items, out_dir, fmt) -> None:
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        for table in items:
            if fmt == "csv":
                text = table_csv(table)
            else:
                text = dump_json({"table": table_json(table)})
            (path / f"{table.name}.{fmt}").write_text(text, encoding="utf-8", newline="\n")
        return
    if fmt == "csv":
        sys.stdout.write("\n".join(table_csv(t) for t in items))
    else:
        sys.stdout.write(dump_json({"tables": [table_json(t) for t in items]}))


def cmd_tables(args) -> int:
    builders = {"1": tables.table1, "2": tables.table2, "3": tables.table3}
    which = builders if args.which == "all" else {args.which: builders[args.which]}
    _write_tables([build() for build in which.values()], args.out_dir, args.format)
    return EXIT_OK


def cmd_figures(args) -> int:
    if not 0 < args.step < 1:
        raise InputError("--step must lie in (0, 1)")
    grid = tables.figure_grid(step=args.step)
    _write_tables(list(tables.figures(grid)), args.out_dir, args.format)
    return EXIT_OK


def _run_suite(args) -> list[verify.SuiteResult]:
    suite = args.suite
    if suite == "theorem1":
        return [verify.theorem1(args.k or 5, backend=args.backend)]
    if suite == "theorem2":
        return [verify.theorem2(args.k or 5, args.grid or 20)]
    if suite == "schedules":
        return [verify.schedules(args.k or 4, args.grid or 10)]
    if suite == "lemma1":
        return [verify.lemma1(args.r_max)]
    if suite == "mc":
        return [verify.monte_carlo(args.trials, args.seed, backend=args.backend)]
    players = tuple(args.player or (A, Player.B))
    grid = args.grid or 10
    if args.rule is None:
        return verify.theorem3_full(grid)
    if args.rule is Rule.TRB and (args.k or 1) == 1:
        return [verify.trailing_b_region(grid)]
    region = (lambda p, q: p + q > 1) if args.upper_half else None
    return [verify.theorem3(args.rule, args.k or 1, grid, players, region)]


def cmd_verify(args) -> int:
    results = _run_suite(args)
    passed = all(r.passed for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.suite}: {r.checked} checked, {len(r.counterexamples)} counterexamples", file=sys.stderr)
    if args.format == "json":
        payload = {"command": "verify", "suite": args.suite, "passed": passed, "results": [
            {"suite": r.suite, "passed": r.passed, "checked": r.checked, "details": r.details, "counterexamples": r.counterexamples}
            for r in results
        ]}
        emit(dump_json(payload), args.output)
    else:
        rows = [[r.suite, to_csv_value(r.passed), r.checked, len(r.counterexamples)] for r in results]
        emit(render_csv(["suite", "passed", "checked", "counterexamples"], rows), args.output)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_scan(args) -> int:
    players = tuple(args.player or (A, Player.B))
    scan = vulnerability_region_scan(args.rule, args.k, args.grid, players)
    columns = ["p", "q"] + [f"strategy_proof_{pl.value}" for pl in players]
    rows = [[p, q] + [verdicts[pl] for pl in players] for (p, q), verdicts in sorted(scan.cells.items())]
    if args.format == "json":
        payload = {"command": "scan", "rule": scan.rule, "k": scan.k, "columns": columns, "rows": rows,
                   "vulnerable": sorted(scan.vulnerable())}
        emit(dump_json(payload), args.output)
    else:
        emit(render_csv(columns, [[str(p), str(q)] + [to_csv_value(v) for v in rest] for p, q, *rest in rows]), args.output)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "tables": cmd_tables, "figures": cmd_figures, "verify": cmd_verify, "scan": cmd_scan}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UndefinedError, DivergesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (InputError, ValueError, ScheduleExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
