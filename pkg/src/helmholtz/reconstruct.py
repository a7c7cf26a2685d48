"""Forward operators and constructive recovery of a Lagrangian and dissipation.

:func:`reconstruct` turns a system passing the minimal generalized conditions
into a pair ``(Lambda, D)`` with
``f_a = d/dt(dLambda/dqd^a) - dLambda/dq^a + dD/dqd^a``.  Every intermediate
is kept in a :class:`ReconstructionTrace` and every step checks its own
contract exactly; a failed check raises :class:`StepAssertionError` naming
the step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .conditions import (
    ConditionError,
    ConditionReport,
    SodeSystem,
    all_passed,
    decompose,
    generalized_check_minimal,
)
from .expr import TIME, Expression, coord, jet_order, total_derivative, var, vel
from .homotopy import (
    PostconditionError,
    PreconditionError,
    closed_two_form_potential,
    hessian_potential,
)

__all__ = [
    "LagrangianPair",
    "ReconstructionTrace",
    "ReconstructionRefused",
    "StepAssertionError",
    "euler_lagrange",
    "compose_dissipative",
    "reconstruct",
]


@dataclass(frozen=True)
class LagrangianPair:
    Lambda: Expression
    D: Expression

    def __post_init__(self) -> None:
        for name, e in (("Lambda", self.Lambda), ("D", self.D)):
            if jet_order(e) > 1:
                raise ValueError(f"{name} must be of first order, got jet order {jet_order(e)}")


class ReconstructionRefused(ValueError):
    """The input fails the minimal generalized conditions."""

    def __init__(self, reports: Sequence[ConditionReport]):
        failed = [r.condition for r in reports if not r.passed]
        super().__init__("system fails " + ", ".join(failed))
        self.reports = list(reports)


class StepAssertionError(AssertionError):
    """A step of the construction broke its contract (engine bug or bypassed check)."""

    def __init__(self, step: int, message: str, residuals=()):
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.residuals = list(residuals)


def euler_lagrange(Lambda: Expression, n: int) -> list[Expression]:
    """``d/dt(dLambda/dqd^a) - dLambda/dq^a`` for ``a = 1..n``."""
    if jet_order(Lambda) > 1:
        raise ValueError(f"Lagrangian must be of first order, got jet order {jet_order(Lambda)}")
    return [total_derivative(Lambda.diff(vel(a))) - Lambda.diff(coord(a)) for a in range(1, n + 1)]


def compose_dissipative(pair: LagrangianPair, n: int) -> SodeSystem:
    E = euler_lagrange(pair.Lambda, n)
    f = tuple(E[a - 1] + pair.D.diff(vel(a)) for a in range(1, n + 1))
    params = sorted({v.name for e in f for v in e.variables() if v.is_param})
    return SodeSystem(f, tuple(params))


@dataclass(frozen=True)
class ReconstructionTrace:
    """All intermediates of the construction; lists are 0-based.

    ``Q`` is the gauge term in ``Lambda = K + P_a qd^a + Q``; it is always 0
    here, any ``Q(q, t)`` being absorbable into ``D``.
    """

    system: SodeSystem
    g: tuple[tuple[Expression, ...], ...]
    h: tuple[Expression, ...]
    K: Expression
    E: tuple[Expression, ...]
    kappa: tuple[Expression, ...]
    R: tuple[tuple[Expression, ...], ...]
    P: tuple[Expression, ...]
    pi: tuple[tuple[Expression, ...], ...]
    Dprime: Expression
    S: tuple[Expression, ...]
    result: LagrangianPair
    Q: Expression = Expression()

    @property
    def Lambda(self) -> Expression:
        return self.result.Lambda

    @property
    def D(self) -> Expression:
        return self.result.D

    def serialize(self) -> dict[str, str]:
        """Every intermediate in the canonical grammar, under stable keys."""
        n = self.system.n
        out: dict[str, str] = {"K": str(self.K)}
        for a in range(n):
            out[f"E[{a + 1}]"] = str(self.E[a])
        for a in range(n):
            out[f"kappa[{a + 1}]"] = str(self.kappa[a])
        for a in range(n):
            for b in range(n):
                out[f"R[{a + 1}][{b + 1}]"] = str(self.R[a][b])
        for a in range(n):
            out[f"P[{a + 1}]"] = str(self.P[a])
        for a in range(n):
            for b in range(n):
                out[f"pi[{a + 1}][{b + 1}]"] = str(self.pi[a][b])
        out["Dprime"] = str(self.Dprime)
        for a in range(n):
            out[f"S[{a + 1}]"] = str(self.S[a])
        out["Q"] = str(self.Q)
        out["Lambda"] = str(self.Lambda)
        out["D"] = str(self.D)
        return out


def _require(step: int, message: str, residuals) -> None:
    residuals = [(i, r) for i, r in residuals if r]
    if residuals:
        raise StepAssertionError(step, message, residuals)


def _potential(step: int, op, matrix):
    try:
        return op(matrix)
    except (PreconditionError, PostconditionError) as exc:
        raise StepAssertionError(step, str(exc), exc.residuals) from exc


def reconstruct(sys: SodeSystem, *, check: bool = True) -> ReconstructionTrace:
    """Recover ``(Lambda, D)`` for ``sys``.

    With ``check=True`` (the default) the minimal generalized conditions are
    evaluated first and a failing system raises :class:`ReconstructionRefused`.
    Passing ``check=False`` skips that; a nonconforming input then surfaces as
    a :class:`StepAssertionError` at the first step whose contract breaks.
    """
    if check:
        reports = generalized_check_minimal(sys)
        if not all_passed(reports):
            raise ReconstructionRefused(reports)
    n, f = sys.n, sys.f
    qs = [coord(a) for a in range(1, n + 1)]
    qds = [vel(a) for a in range(1, n + 1)]
    rng = range(n)

    # 1. quasi-linear decomposition
    try:
        form = decompose(sys)
    except ConditionError as exc:
        raise StepAssertionError(1, str(exc), exc.residuals) from exc
    g, h = form.g, form.h

    # 2. K with velocity Hessian g
    K = _potential(2, hessian_potential, g)

    # 3. Euler-Lagrange expressions of K and the first-order remainder
    E = euler_lagrange(K, n)
    kappa = [f[a] - E[a] for a in rng]
    _require(3, "kappa is not of first order",
             [((a + 1,), kappa[a]) for a in rng if jet_order(kappa[a]) > 1])

    # 4. skew part of the velocity Jacobian of kappa: q-dependent and closed
    R = [[kappa[a].diff(qds[b]) - kappa[b].diff(qds[a]) for b in rng] for a in rng]
    _require(4, "R depends on the velocities",
             [((a + 1, b + 1, c + 1), R[a][b].diff(qds[c])) for a in rng for b in rng for c in rng])
    _require(4, "R is not closed",
             [((a + 1, b + 1, c + 1),
               R[a][b].diff(qs[c]) + R[b][c].diff(qs[a]) + R[c][a].diff(qs[b]))
              for a in rng for b in rng for c in rng])

    # 5. potential for the closed two-form
    P = _potential(5, closed_two_form_potential, R)
    curl = [[P[a].diff(qs[b]) - P[b].diff(qs[a]) for b in rng] for a in rng]

    # 6. symmetric remainder of the velocity Jacobian
    pi = [[kappa[a].diff(qds[b]) - curl[a][b] for b in rng] for a in rng]
    _require(6, "pi is not symmetric",
             [((a + 1, b + 1), pi[a][b] - pi[b][a]) for a in rng for b in rng])
    _require(6, "velocity derivatives of pi are not symmetric",
             [((a + 1, b + 1, c + 1), pi[a][b].diff(qds[c]) - pi[a][c].diff(qds[b]))
              for a in rng for b in rng for c in rng])

    # 7. D' with velocity Hessian pi
    Dprime = _potential(7, hessian_potential, pi)

    # 8. velocity-free leftover
    S = [
        kappa[a]
        - sum((curl[a][b] * var(qds[b]) for b in rng), Expression())
        - Dprime.diff(qds[a])
        for a in rng
    ]
    _require(8, "S depends on the velocities",
             [((a + 1, c + 1), S[a].diff(qds[c])) for a in rng for c in rng])

    # 9. assemble, gauge Q = 0
    Lambda = K + sum((P[a] * var(qds[a]) for a in rng), Expression())
    D = Dprime + sum(((S[a] - P[a].diff(TIME)) * var(qds[a]) for a in rng), Expression())
    pair = LagrangianPair(Lambda, D)

    # 10. the pair reproduces f exactly
    f_new = compose_dissipative(pair, n).f
    _require(10, "reconstructed pair does not reproduce the system",
             [((a + 1,), f_new[a] - f[a]) for a in rng])

    return ReconstructionTrace(
        system=sys,
        g=g,
        h=h,
        K=K,
        E=tuple(E),
        kappa=tuple(kappa),
        R=tuple(tuple(row) for row in R),
        P=tuple(P),
        pi=tuple(tuple(row) for row in pi),
        Dprime=Dprime,
        S=tuple(S),
        result=pair,
    )
