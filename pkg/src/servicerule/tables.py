"""Reproduction of the three result tables and the two deuce curves.

Every builder returns a ``Table``: column names, exact row values, and the
number of decimals used when the table is written as CSV. Cells that cannot
be computed hold ``UNDEFINED`` or ``INFINITE`` markers instead of numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction

from .core import MatchFormat, Rule, ServeModel, UndefinedError
from .engine import format_polynomial, win_polynomials_best_of_3
from .tiebreak import analyze_win_by_two, closed_form_deuce

UNDEFINED = "undefined"
INFINITE = "inf"

TABLE1_RULES = (Rule.SR, Rule.CR, Rule.TRA, Rule.TRB)
TABLE1_SAMPLES = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(2, 3), Fraction(2, 3)), (Fraction(3, 4), Fraction(2, 3)))
TABLE2_PS = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1))
TABLE3_PS = (Fraction(2, 3), Fraction(3, 4))
TABLE3_LENGTHS = (3, 11, 21)


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    decimals: int = 3
    exact_columns: tuple[str, ...] = ()  # written as "a/b" in CSV
    column_decimals: tuple[tuple[str, int], ...] = ()

    def as_dicts(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def csv_cell(self, column: str, value) -> str:
        if isinstance(value, (str, int)) and not isinstance(value, bool):
            return str(value)
        if column in self.exact_columns:
            return str(Fraction(value))
        return round_half_even(value, dict(self.column_decimals).get(column, self.decimals))

    def csv_rows(self) -> list[list[str]]:
        return [[self.csv_cell(c, v) for c, v in zip(self.columns, row)] for row in self.rows]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def round_half_even(value, decimals: int) -> str:
    """Fixed-point string of ``value`` rounded half-to-even; markers pass through."""
    if isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        exact = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        exact = Decimal(repr(float(value))) if isinstance(value, float) else Decimal(value)
    return str(exact.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_EVEN))


def table1() -> Table:
    """Best-of-3 win probability and expected length as polynomials in p and q."""
    import sympy

    p, q = sympy.symbols("p q")
    columns = ["rule", "pr_a", "expected_length"]
    for sp, sq in TABLE1_SAMPLES:
        tag = f"p={sp},q={sq}"
        columns += [f"pr_a[{tag}]", f"expected_length[{tag}]"]
    rows = []
    for rule in TABLE1_RULES:
        pr, el = win_polynomials_best_of_3(rule)
        row = [rule.value, format_polynomial(pr), format_polynomial(el)]
        for sp, sq in TABLE1_SAMPLES:
            subs = {p: sympy.Rational(sp.numerator, sp.denominator), q: sympy.Rational(sq.numerator, sq.denominator)}
            row += [Fraction(str(pr.as_expr().subs(subs))), Fraction(str(el.as_expr().subs(subs)))]
        rows.append(tuple(row))
    return Table("table1", tuple(columns), tuple(rows), decimals=3)


def _deuce_cells(rule: Rule, p):
    try:
        return closed_form_deuce(rule, p)
    except UndefinedError:
        return UNDEFINED, INFINITE


def table2() -> Table:
    """Equal-skill deuce win probability and length under SR and CR."""
    rows = []
    for p in TABLE2_PS:
        pr_sr, el_sr = _deuce_cells(Rule.SR, p)
        pr_cr, el_cr = _deuce_cells(Rule.CR, p)
        rows.append((p, pr_sr, pr_cr, el_sr, el_cr))
    return Table("table2", ("p", "pr_sr", "pr_cr", "el_sr", "el_cr"), tuple(rows), decimals=2, exact_columns=("p",))


def table3_row(rule: Rule, m: int, p) -> tuple:
    fmt_two = MatchFormat.best_of(m, 2)
    model = ServeModel(p, p)
    wb2 = analyze_win_by_two(rule, fmt_two, model)
    return (rule.value, m, p, wb2.pr_a_wb1, wb2.pr_b_wb1, wb2.qr_a, wb2.qr_b, wb2.pr_tie, wb2.el_wb1, wb2.el_wb2)


def table3() -> Table:
    """Win-by-One against Win-by-Two for SR and CR at p = q."""
    rows = tuple(table3_row(rule, m, p) for p in TABLE3_PS for rule in (Rule.SR, Rule.CR) for m in TABLE3_LENGTHS)
    columns = ("rule", "m", "p", "pr_a", "pr_b", "qr_a", "qr_b", "pr_tie", "el_wb1", "el_wb2")
    return Table("table3", columns, rows, decimals=3, exact_columns=("p",))


def figure_grid(start=Fraction(1, 100), stop=Fraction(99, 100), step=Fraction(1, 100)) -> list[Fraction]:
    points = []
    x = Fraction(start)
    while x <= stop:
        points.append(x)
        x += Fraction(step)
    return points


def figures(ps=None) -> tuple[Table, Table]:
    """Deuce win probability and expected length curves against p."""
    ps = figure_grid() if ps is None else [Fraction(p) for p in ps]
    pr_rows, el_rows = [], []
    for p in ps:
        pr_sr, el_sr = _deuce_cells(Rule.SR, p)
        pr_cr, el_cr = _deuce_cells(Rule.CR, p)
        pr_rows.append((p, pr_sr, pr_cr))
        el_rows.append((p, el_sr, el_cr))
    return (
        Table("figure1", ("p", "pr_sr", "pr_cr"), tuple(pr_rows), decimals=3, column_decimals=(("p", 2),)),
        Table("figure2", ("p", "el_sr", "el_cr"), tuple(el_rows), decimals=3, column_decimals=(("p", 2),)),
    )


__all__ = [
    "INFINITE",
    "Table",
    "UNDEFINED",
    "figure_grid",
    "figures",
    "round_half_even",
    "table1",
    "table2",
    "table3",
    "table3_row",
]
