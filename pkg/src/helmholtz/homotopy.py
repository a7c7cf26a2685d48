"""Radial homotopy integrals for recovering potentials.

Both operators scale a group of variables by ``u`` and integrate a polynomial
weight in ``u`` over ``[0, 1]`` exactly, monomial by monomial.  The base point
is the origin, which is always admissible for polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .expr import Expression, JetVariable, coord, jet_order, var, vel

__all__ = [
    "PreconditionError",
    "PostconditionError",
    "radial_integral",
    "hessian_potential",
    "closed_two_form_potential",
]

Matrix = Sequence[Sequence[Expression]]


class PreconditionError(ValueError):
    """Input does not satisfy an integrability condition.

    ``residuals`` holds ``(index, expression)`` pairs witnessing the failure.
    """

    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


class PostconditionError(AssertionError):
    """The computed potential failed its own verification (an engine bug)."""

    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


def radial_integral(e: Expression, scaled: Iterable[JetVariable], weight: Sequence[int | Fraction]) -> Expression:
    """Compute ``int_0^1 w(u) e(u*x) du`` where ``x`` are the ``scaled`` variables.

    ``weight`` lists the coefficients of ``w`` in increasing powers of ``u``.
    A monomial of degree ``d`` in the scaled variables picks up the factor
    ``sum_j w_j / (d + j + 1)``.
    """
    result = Expression()
    for d, part in e.split_by_degree(scaled).items():
        factor = sum((Fraction(w) / (d + j + 1) for j, w in enumerate(weight)), Fraction(0))
        result = result + part * factor
    return result


def _check_square(M: Matrix, n: int) -> None:
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError(f"expected a {n}x{n} matrix")


def hessian_potential(M: Matrix) -> Expression:
    """A function ``K(qd, q, t)`` whose velocity Hessian is ``M``.

    ``M`` must be symmetric with ``dM_ab/dqd^c`` symmetric in ``b, c``.  The
    potential is ``int_0^1 (1 - u) M_ab(u*qd, q, t) qd^a qd^b du`` and its
    Hessian is checked against ``M`` before returning.
    """
    n = len(M)
    _check_square(M, n)
    bad = [((a + 1, b + 1), M[a][b]) for a in range(n) for b in range(n) if jet_order(M[a][b]) > 1]
    if bad:
        raise PreconditionError("Hessian entries must be of first order", bad)
    residuals = []
    for a in range(n):
        for b in range(a + 1, n):
            r = M[a][b] - M[b][a]
            if r:
                residuals.append(((a + 1, b + 1), r))
    if residuals:
        raise PreconditionError("matrix is not symmetric", residuals)
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                r = M[a][b].diff(vel(c + 1)) - M[a][c].diff(vel(b + 1))
                if r:
                    residuals.append(((a + 1, b + 1, c + 1), r))
    if residuals:
        raise PreconditionError("velocity derivatives of the matrix are not symmetric", residuals)

    velocities = [vel(a + 1) for a in range(n)]
    K = Expression()
    for a in range(n):
        for b in range(n):
            K = K + radial_integral(M[a][b], velocities, [1, -1]) * var(velocities[a]) * var(velocities[b])

    residuals = []
    for a in range(n):
        for b in range(n):
            r = K.diff(velocities[a]).diff(velocities[b]) - M[a][b]
            if r:
                residuals.append(((a + 1, b + 1), r))
    if residuals:
        raise PostconditionError("Hessian of the recovered potential differs from the input", residuals)
    return K


def closed_two_form_potential(R: Matrix) -> list[Expression]:
    """Functions ``P_a(q, t)`` with ``2 (dP_a/dq^b - dP_b/dq^a) = R_ab``.

    ``R`` must be skew, free of velocities and accelerations, and closed:
    the cyclic sum of ``dR_ab/dq^c`` vanishes.  Uses
    ``P_a = 1/2 int_0^1 u R_ab(u*q, t) q^b du``.
    """
    n = len(R)
    _check_square(R, n)
    bad = [((a + 1, b + 1), R[a][b]) for a in range(n) for b in range(n) if jet_order(R[a][b]) > 0]
    if bad:
        raise PreconditionError("two-form must depend on (q, t) only", bad)
    residuals = []
    for a in range(n):
        for b in range(a, n):
            r = R[a][b] + R[b][a]
            if r:
                residuals.append(((a + 1, b + 1), r))
    if residuals:
        raise PreconditionError("two-form is not skew-symmetric", residuals)
    positions = [coord(a + 1) for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                r = (
                    R[a][b].diff(positions[c])
                    + R[b][c].diff(positions[a])
                    + R[c][a].diff(positions[b])
                )
                if r:
                    residuals.append(((a + 1, b + 1, c + 1), r))
    if residuals:
        raise PreconditionError("two-form is not closed", residuals)

    P = []
    for a in range(n):
        Pa = Expression()
        for b in range(n):
            Pa = Pa + radial_integral(R[a][b], positions, [0, 1]) * var(positions[b])
        P.append(Pa * Fraction(1, 2))

    residuals = []
    for a in range(n):
        for b in range(n):
            r = 2 * (P[a].diff(positions[b]) - P[b].diff(positions[a])) - R[a][b]
            if r:
                residuals.append(((a + 1, b + 1), r))
    if residuals:
        raise PostconditionError("recovered potential does not reproduce the two-form", residuals)
    return P

