from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from helmholtz.expr import TIME, Expression, JetVariable, coord, param, var


def jet_vars(n: int, max_order: int = 1, params: tuple[str, ...] = (), time: bool = True) -> list[JetVariable]:
    vs = [TIME] if time else []
    vs += [param(p) for p in params]
    vs += [coord(a, k) for a in range(1, n + 1) for k in range(max_order + 1)]
    return vs


@st.composite
def expressions(draw, n: int = 2, max_order: int = 1, params: tuple[str, ...] = (),
                max_terms: int = 5, max_degree: int = 4):
    vs = jet_vars(n, max_order, params)
    total = Expression()
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.fractions(min_value=-10, max_value=10, max_denominator=6))
        term = Expression.constant(c)
        for v in draw(st.lists(st.sampled_from(vs), max_size=max_degree)):
            term = term * var(v)
        total = total + term
    return total


def expressions_any_n(max_order: int = 1, **kw):
    return st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), expressions(n=n, max_order=max_order, **kw)))


# -- sympy as an independent oracle ------------------------------------------


def sym(v: JetVariable) -> sympy.Symbol:
    return sympy.Symbol(str(v))


def to_sympy(e: Expression) -> sympy.Expr:
    out = sympy.Integer(0)
    for m, c in e.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in m:
            term *= sym(v) ** k
        out += term
    return sympy.expand(out)


def sympy_total_derivative(expr: sympy.Expr, n: int, max_order: int = 3) -> sympy.Expr:
    t = sympy.Symbol("t")
    out = sympy.diff(expr, t)
    for a in range(1, n + 1):
        for k in range(max_order):
            out += sympy.diff(expr, sym(coord(a, k))) * sym(coord(a, k + 1))
    return sympy.expand(out)


def frac(x) -> Fraction:
    return Fraction(x)


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
