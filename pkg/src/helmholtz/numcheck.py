"""Numerical cross-checks for the symbolic engine, in exact rationals.

* :func:`evaluate` substitutes rationals for every variable.
* :func:`fd_check` compares a symbolic partial derivative with a Richardson
  extrapolated central difference.  For a polynomial of degree ``d`` in the
  differentiation variable the central difference has error terms in
  ``h^2, h^4, ...`` up to ``h^(2L)`` with ``L = (d - 1) // 2``; a tableau over
  ``L + 1`` halvings of the step removes all of them, so the documented error
  bound is exactly zero and the comparison is exact equality.
* :func:`fd_check_directional` does the same along a direction in jet space,
  and :func:`fd_check_total` along a polynomial curve; these validate the
  truncated and the full total derivative without using either.
* The ``random_*`` generators feed the property suites; they depend only on
  ``RandomSpec.seed``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import perm
from typing import Iterable, Mapping, Sequence

from .conditions import SodeSystem
from .expr import TIME, Expression, JetVariable, coord, var, vel
from .reconstruct import LagrangianPair, compose_dissipative

__all__ = [
    "EvalError",
    "RandomSpec",
    "FdResult",
    "evaluate",
    "random_point",
    "fd_check",
    "fd_check_directional",
    "fd_check_total",
    "random_polynomial",
    "random_pair",
    "random_conforming_system",
    "random_first_order_system",
    "first_order_variables",
    "classify_by_sampling",
]

EvalPoint = Mapping[JetVariable, Fraction]


class EvalError(KeyError):
    """The evaluation point misses a variable of the expression."""


def evaluate(e: Expression, p: EvalPoint) -> Fraction:
    total = Fraction(0)
    for m, c in e.terms.items():
        term = c
        for v, k in m:
            try:
                x = p[v]
            except KeyError:
                raise EvalError(f"no value for {v}") from None
            term *= Fraction(x) ** k
        total += term
    return total


def _random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    num = rng.choice([k for k in range(-bound, bound + 1) if k])
    den = rng.randint(1, bound)
    return Fraction(num, den)


def random_point(variables: Iterable[JetVariable], rng: random.Random, bound: int = 100) -> dict[JetVariable, Fraction]:
    """Nonzero numerators in ``[-bound, bound]``, denominators in ``[1, bound]``."""
    return {v: _random_rational(rng, bound) for v in sorted(set(variables))}


@dataclass(frozen=True)
class FdResult:
    passed: bool
    derivative: Fraction
    estimate: Fraction
    discrepancy: Fraction
    bound: Fraction = Fraction(0)


def _richardson(samples: Sequence[Fraction]) -> Fraction:
    # samples[i] = central difference at step h / 2^i; error series in h^2.
    table = list(samples)
    for level in range(1, len(table)):
        factor = Fraction(4) ** level
        table = [(factor * table[i + 1] - table[i]) / (factor - 1) for i in range(len(table) - 1)]
    return table[0]


def _central_differences(fn, step: Fraction, levels: int) -> list[Fraction]:
    out = []
    for i in range(levels + 1):
        h = step / 2**i
        out.append((fn(h) - fn(-h)) / (2 * h))
    return out


def _levels_for_degree(d: int) -> int:
    return max(0, (d - 1) // 2)


def fd_check(e: Expression, v: JetVariable, p: EvalPoint, step: Fraction | int = 1) -> FdResult:
    """Exact finite-difference check of ``e.diff(v)`` at ``p``."""
    step = Fraction(step)
    if not step:
        raise ValueError("step must be nonzero")
    base = dict(p)
    base.setdefault(v, Fraction(0))
    x0 = Fraction(base[v])

    def shifted(h: Fraction) -> Fraction:
        q = dict(base)
        q[v] = x0 + h
        return evaluate(e, q)

    estimate = _richardson(_central_differences(shifted, step, _levels_for_degree(e.degree_in(v))))
    derivative = evaluate(e.diff(v), base)
    disc = abs(estimate - derivative)
    return FdResult(disc == 0, derivative, estimate, disc)


def fd_check_directional(
    e: Expression, symbolic: Expression, direction: Mapping[JetVariable, Fraction], p: EvalPoint,
    step: Fraction | int = 1,
) -> FdResult:
    """Compare ``symbolic`` at ``p`` with the derivative of ``e`` along ``direction``."""
    step = Fraction(step)
    if not step:
        raise ValueError("step must be nonzero")

    def shifted(h: Fraction) -> Fraction:
        q = dict(p)
        for w, dv in direction.items():
            q[w] = Fraction(q.get(w, 0)) + h * dv
        return evaluate(e, q)

    estimate = _richardson(_central_differences(shifted, step, _levels_for_degree(e.degree())))
    derivative = evaluate(symbolic, p)
    disc = abs(estimate - derivative)
    return FdResult(disc == 0, derivative, estimate, disc)


def _poly_value(coeffs: Sequence[Fraction], t: Fraction, k: int) -> Fraction:
    """k-th derivative at ``t`` of ``sum_j coeffs[j] t^j``."""
    total = Fraction(0)
    for j in range(k, len(coeffs)):
        total += coeffs[j] * perm(j, k) * t ** (j - k)
    return total


def fd_check_total(
    e: Expression, symbolic: Expression, curves: Mapping[int, Sequence[Fraction]],
    params: EvalPoint, t0: Fraction, step: Fraction | int = 1,
) -> FdResult:
    """Compare ``symbolic`` with ``d/dt e(j(q)(t))`` along polynomial curves.

    ``curves[a]`` lists the coefficients of ``q^a(t)``.  The composite is a
    polynomial in ``t`` of degree at most ``deg(e) * max(curve degree, 1)``,
    which sets the Richardson depth.
    """
    step = Fraction(step)
    if not step:
        raise ValueError("step must be nonzero")
    jet_vars = sorted(v for v in e.variables() | symbolic.variables() if v.is_coord)

    def point_at(t: Fraction) -> dict[JetVariable, Fraction]:
        q = dict(params)
        q[TIME] = t
        for v in jet_vars:
            q[v] = _poly_value(curves[v.index], t, v.order)
        return q

    curve_deg = max((len(c) - 1 for c in curves.values()), default=1)
    bound = e.degree() * max(curve_deg, 1)
    estimate = _richardson(
        _central_differences(lambda h: evaluate(e, point_at(t0 + h)), step, _levels_for_degree(bound))
    )
    derivative = evaluate(symbolic, point_at(t0))
    disc = abs(estimate - derivative)
    return FdResult(disc == 0, derivative, estimate, disc)


# ---------------------------------------------------------------------------
# random generation


@dataclass(frozen=True)
class RandomSpec:
    """Bounds for random polynomial generation.

    ``coefficient_range`` is a closed rational interval; coefficients are
    drawn as ``k / den`` with ``den`` in ``1..4`` and rejected outside it.
    """

    n: int = 2
    max_degree: int = 3
    max_terms: int = 5
    coefficient_range: tuple[Fraction, Fraction] = (Fraction(-5), Fraction(5))
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        lo, hi = (Fraction(x) for x in self.coefficient_range)
        if lo > hi:
            raise ValueError("empty coefficient range")
        object.__setattr__(self, "coefficient_range", (lo, hi))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self, stream: str = "") -> random.Random:
        return random.Random(f"{self.seed}:{stream}")


def first_order_variables(n: int, include_time: bool = True) -> list[JetVariable]:
    vs = [TIME] if include_time else []
    return vs + [coord(a) for a in range(1, n + 1)] + [vel(a) for a in range(1, n + 1)]


def _random_coefficient(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    for _ in range(100):
        den = rng.randint(1, 4)
        k = rng.randint(int(lo * den) - 1, int(hi * den) + 1)
        c = Fraction(k, den)
        if c and lo <= c <= hi:
            return c
    return hi if hi else lo


def random_polynomial(
    rng: random.Random, variables: Sequence[JetVariable], max_degree: int, max_terms: int,
    coefficient_range: tuple[Fraction, Fraction] = (Fraction(-5), Fraction(5)),
    min_degree: int = 0,
) -> Expression:
    """Sum of up to ``max_terms`` random monomials of degree in ``[min_degree, max_degree]``."""
    lo, hi = coefficient_range
    out = Expression()
    if max_degree < min_degree:
        return out
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(min_degree, max_degree)
        mono = Expression.constant(_random_coefficient(rng, lo, hi))
        for _ in range(d):
            if variables:
                mono = mono * var(rng.choice(variables))
        out = out + mono
    return out


def random_pair(spec: RandomSpec, *, dissipative: bool = True) -> LagrangianPair:
    """Random ``(Lambda, D)`` of first order.

    With ``dissipative=False`` the dissipation function depends on ``(q, t)``
    only, so its velocity gradient vanishes and the composed system is purely
    Lagrangian.
    """
    rng = spec.rng("pair")
    vs = first_order_variables(spec.n)
    Lambda = random_polynomial(rng, vs, spec.max_degree, spec.max_terms, spec.coefficient_range)
    Lambda = Lambda + _velocity_quadratic(rng, spec)
    d_vars = vs if dissipative else [TIME] + [coord(a) for a in range(1, spec.n + 1)]
    D = random_polynomial(rng, d_vars, spec.max_degree, spec.max_terms, spec.coefficient_range)
    if dissipative:
        D = D + _velocity_quadratic(rng, spec)
    return LagrangianPair(Lambda, D)


def _velocity_quadratic(rng: random.Random, spec: RandomSpec) -> Expression:
    # uniform monomials rarely carry two velocities, which would leave g = 0 in most draws
    if spec.max_degree < 2:
        return Expression()
    vs = first_order_variables(spec.n)
    out = Expression()
    for a in range(1, spec.n + 1):
        b = rng.randint(1, spec.n)
        c = random_polynomial(rng, vs, spec.max_degree - 2, 2, spec.coefficient_range)
        out = out + c * var(vel(a)) * var(vel(b))
    return out


def random_conforming_system(spec: RandomSpec, *, dissipative: bool = True) -> SodeSystem:
    """``compose_dissipative`` of a :func:`random_pair`; conforming by necessity."""
    return compose_dissipative(random_pair(spec, dissipative=dissipative), spec.n)


def random_first_order_system(spec: RandomSpec) -> SodeSystem:
    """A random system whose ``r_ab, s_ab`` are of first order, not necessarily
    satisfying GHC3.

    Built as ``EL(K)_a + dD'/dqd^a + A_ab(q, t) qd^b + S_a(q, t)`` with an
    arbitrary matrix ``A``; the skew part of ``A`` need not be closed, which
    is exactly what GHC3 tests once ``n >= 3``.
    """
    rng = spec.rng("first-order")
    n = spec.n
    vs = first_order_variables(n)
    qt = [TIME] + [coord(a) for a in range(1, n + 1)]
    K = random_polynomial(rng, vs, spec.max_degree, spec.max_terms, spec.coefficient_range)
    Dp = random_polynomial(rng, vs, spec.max_degree, spec.max_terms, spec.coefficient_range)
    base = compose_dissipative(LagrangianPair(K, Dp), n).f
    f = []
    for a in range(1, n + 1):
        fa = base[a - 1]
        for b in range(1, n + 1):
            if rng.random() < 0.5:
                A = random_polynomial(rng, qt, max(spec.max_degree - 1, 0), 2, spec.coefficient_range)
                fa = fa + A * var(vel(b))
        fa = fa + random_polynomial(rng, qt, spec.max_degree, 2, spec.coefficient_range)
        f.append(fa)
    return SodeSystem(tuple(f))


def classify_by_sampling(
    lhs: Expression, rhs: Expression, rng: random.Random, points: int = 20, bound: int = 100,
) -> bool:
    """``True`` if ``lhs - rhs`` evaluated side by side vanishes at every sample.

    Evaluates both sides separately, so it does not rely on the symbolic
    subtraction being correct.
    """
    vs = lhs.variables() | rhs.variables()
    for _ in range(points):
        p = random_point(vs, rng, bound)
        if evaluate(lhs, p) != evaluate(rhs, p):
            return False
    return True
