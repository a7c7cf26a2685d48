"""Helmholtz condition systems as exact polynomial identities.

Each condition is produced as a list of :class:`Identity` objects, one per
index tuple, with both sides kept separately; a :class:`ConditionReport`
collects the nonzero residuals ``lhs - rhs``.  No tolerances are involved:
a condition holds when every residual is the zero polynomial, identically in
all coordinates, time and parameters.

Index tuples in reports are 1-based.  Conditions with index symmetries are
evaluated on canonical tuples only (e.g. ``a < b`` for skew conditions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .expr import (
    Expression,
    acc,
    coord,
    jet_order,
    total_derivative,
    truncated_derivative,
    var,
    vel,
)
from .parser import parse

__all__ = [
    "CONDITION_IDS",
    "SodeSystem",
    "QuasiLinearForm",
    "GhcIntermediates",
    "Identity",
    "ConditionReport",
    "ConditionError",
    "NotQuasiLinear",
    "HessianNotSymmetric",
    "EngineError",
    "decompose",
    "classical_check",
    "classical_gh_check",
    "compute_r_s",
    "first_order_check",
    "generalized_check_full",
    "generalized_check_minimal",
    "gh_form_check",
    "gh_form_check_system",
    "redundancy_witness",
    "ghc3_mechanism",
    "ghc4_mechanism",
    "condition_identities",
    "all_passed",
]

CONDITION_IDS = (
    "HC1", "HC2", "HC3",
    "gh-6", "gh-7", "gh-8",
    "c-10", "c-11", "c-12", "c-13", "c-14",
    "first-order-r", "first-order-s", "rho",
    "GHC1", "GHC2", "GHC3", "GHC4", "prop-17",
    "ghform-1", "ghform-2", "ghform-3",
    "redundancy-A", "redundancy-B",
)

HALF = Fraction(1, 2)
Index = tuple[int, ...]


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class SodeSystem:
    """A system ``f_a(qdd, qd, q, t) = 0`` of ``n`` second-order equations."""

    f: tuple[Expression, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "params", tuple(self.params))
        if not self.f:
            raise ValueError("a system needs at least one equation")
        n = len(self.f)
        allowed = set(self.params)
        for a, fa in enumerate(self.f, 1):
            if jet_order(fa) > 2:
                raise ValueError(f"equation {a} has jet order {jet_order(fa)} > 2")
            for v in fa.variables():
                if v.is_coord and v.index > n:
                    raise ValueError(f"equation {a} uses {v} but n = {n}")
                if v.is_param and v.name not in allowed:
                    raise ValueError(f"equation {a} uses undeclared parameter {v}")

    @property
    def n(self) -> int:
        return len(self.f)

    @classmethod
    def from_strings(cls, equations: Sequence[str], params: Iterable[str] = ()) -> SodeSystem:
        params = tuple(params)
        n = len(equations)
        return cls(tuple(parse(text, n, params) for text in equations), params)

    def __str__(self) -> str:
        return "; ".join(f"f{a} = {fa}" for a, fa in enumerate(self.f, 1))


@dataclass(frozen=True)
class QuasiLinearForm:
    """``f_a = g_ab qdd^b + h_a`` with first-order, symmetric ``g``."""

    g: tuple[tuple[Expression, ...], ...]
    h: tuple[Expression, ...]

    def __post_init__(self) -> None:
        g = tuple(tuple(row) for row in self.g)
        h = tuple(self.h)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)
        n = len(h)
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError("g must be n x n with n = len(h)")
        for e in [x for row in g for x in row] + list(h):
            if jet_order(e) > 1:
                raise ValueError(f"coefficient {e} is not of first order")
        bad = [
            ((a + 1, b + 1), g[a][b] - g[b][a])
            for a in range(n)
            for b in range(a + 1, n)
            if g[a][b] != g[b][a]
        ]
        if bad:
            raise HessianNotSymmetric("g is not symmetric", bad)

    @property
    def n(self) -> int:
        return len(self.h)

    def recompose(self) -> tuple[Expression, ...]:
        n = self.n
        return tuple(
            sum((self.g[a][b] * var(acc(b + 1)) for b in range(n)), Expression()) + self.h[a]
            for a in range(n)
        )


@dataclass(frozen=True)
class GhcIntermediates:
    """``r_ab``, ``s_ab`` built with the full ``d/dt`` and, when the system is
    quasi-linear, the raw coefficients and ``rho_abc``.  Lists are 0-based."""

    system: SodeSystem
    r: tuple[tuple[Expression, ...], ...]
    s: tuple[tuple[Expression, ...], ...]
    g: tuple[tuple[Expression, ...], ...] | None
    h: tuple[Expression, ...] | None
    rho: tuple[tuple[tuple[Expression, ...], ...], ...] | None
    quasi_linear_witness: tuple = ()

    @property
    def n(self) -> int:
        return self.system.n


@dataclass(frozen=True)
class Identity:
    """One instance ``lhs = rhs`` of a condition at a given index tuple."""

    index: Index
    lhs: Expression
    rhs: Expression

    @property
    def residual(self) -> Expression:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    residuals: tuple[tuple[Index, Expression], ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "residuals", tuple(self.residuals))
        if any(r.is_zero() for _, r in self.residuals):
            raise ValueError("reported residuals must be nonzero")

    @property
    def passed(self) -> bool:
        return not self.residuals

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @classmethod
    def from_identities(cls, condition: str, identities: Iterable[Identity], note: str = "") -> ConditionReport:
        residuals = []
        for ident in identities:
            r = ident.residual
            if r:
                residuals.append((ident.index, r))
        return cls(condition, tuple(residuals), note)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "status": self.status,
            "note": self.note,
            "residuals": [{"index": list(i), "residual": str(r)} for i, r in self.residuals],
        }


def all_passed(reports: Iterable[ConditionReport]) -> bool:
    return all(r.passed for r in reports)


class ConditionError(ValueError):
    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


class NotQuasiLinear(ConditionError):
    """Some ``d^2 f_a / dqdd^b dqdd^c`` is nonzero."""


class HessianNotSymmetric(ConditionError):
    """``df_a/dqdd^b != df_b/dqdd^a`` for some pair."""


class EngineError(AssertionError):
    """An internal identity that must hold by construction failed."""

    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


# ---------------------------------------------------------------------------
# helpers


def _q(a: int):
    return coord(a + 1)


def _qd(a: int):
    return vel(a + 1)


def _qdd(a: int):
    return acc(a + 1)


def _idx(*ks: int) -> Index:
    return tuple(k + 1 for k in ks)


def _label(*ks: int) -> str:
    return "(" + ",".join(str(k + 1) for k in ks) + ")"


def _higher_order_part(e: Expression) -> Expression:
    """Terms of ``e`` that involve any coordinate derivative of order >= 2."""
    return Expression(
        {m: c for m, c in e.terms.items() if any(v.is_coord and v.order >= 2 for v, _ in m)}
    )


def _cyclic(fn: Callable[[int, int, int], Expression], a: int, b: int, c: int) -> Expression:
    return fn(a, b, c) + fn(b, c, a) + fn(c, a, b)


def _quasi_linear_witness(f: Sequence[Expression]) -> list[tuple[Index, Expression]]:
    n = len(f)
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                w = f[a].diff(_qdd(b)).diff(_qdd(c))
                if w:
                    out.append((_idx(a, b, c), w))
    return out


def _raw_coefficients(f: Sequence[Expression]):
    n = len(f)
    g = tuple(tuple(f[a].diff(_qdd(b)) for b in range(n)) for a in range(n))
    h = tuple(
        f[a] - sum((g[a][b] * var(_qdd(b)) for b in range(n)), Expression()) for a in range(n)
    )
    return g, h


def _rho(g, h, n: int):
    # rho_abc = dg_ac/dq^b - dg_bc/dq^a - 1/2 (d2h_a/dqd^b dqd^c - d2h_b/dqd^a dqd^c)
    return tuple(
        tuple(
            tuple(
                g[a][c].diff(_q(b))
                - g[b][c].diff(_q(a))
                - HALF * (h[a].diff(_qd(b)).diff(_qd(c)) - h[b].diff(_qd(a)).diff(_qd(c)))
                for c in range(n)
            )
            for b in range(n)
        )
        for a in range(n)
    )


# ---------------------------------------------------------------------------
# decomposition


def decompose(sys: SodeSystem) -> QuasiLinearForm:
    """Split ``f_a = g_ab qdd^b + h_a``.

    Raises :class:`NotQuasiLinear` or :class:`HessianNotSymmetric` with the
    offending derivatives as witnesses.
    """
    witness = _quasi_linear_witness(sys.f)
    if witness:
        raise NotQuasiLinear("system is not linear in the accelerations", witness)
    g, h = _raw_coefficients(sys.f)
    return QuasiLinearForm(g, h)


# ---------------------------------------------------------------------------
# classical conditions


def _hc1(f) -> list[Identity]:
    n = len(f)
    return [
        Identity(_idx(a, b), f[a].diff(_qdd(b)), f[b].diff(_qdd(a)))
        for a in range(n)
        for b in range(a + 1, n)
    ]


def _hc2(f) -> list[Identity]:
    n = len(f)
    return [
        Identity(
            _idx(a, b),
            f[a].diff(_qd(b)) + f[b].diff(_qd(a)),
            2 * total_derivative(f[b].diff(_qdd(a))),
        )
        for a in range(n)
        for b in range(n)
    ]


def _hc3(f) -> list[Identity]:
    n = len(f)
    return [
        Identity(
            _idx(a, b),
            f[a].diff(_q(b)) - f[b].diff(_q(a)),
            HALF * total_derivative(f[a].diff(_qd(b)) - f[b].diff(_qd(a))),
        )
        for a in range(n)
        for b in range(a + 1, n)
    ]


def classical_check(sys: SodeSystem) -> list[ConditionReport]:
    """HC1-HC3: is ``f`` the Euler-Lagrange expression of a first-order Lagrangian?"""
    f = sys.f
    return [
        ConditionReport.from_identities("HC1", _hc1(f)),
        ConditionReport.from_identities("HC2", _hc2(f)),
        ConditionReport.from_identities("HC3", _hc3(f)),
    ]


def _gh_velocity_symmetry(g, n) -> list[Identity]:
    # dg_ab/dqd^c = dg_ac/dqd^b, skew in (b, c)
    return [
        Identity(_idx(a, b, c), g[a][b].diff(_qd(c)), g[a][c].diff(_qd(b)))
        for a in range(n)
        for b in range(n)
        for c in range(b + 1, n)
    ]


def _gh_symmetric_part(g, h, n) -> list[Identity]:
    return [
        Identity(
            _idx(a, b),
            h[a].diff(_qd(b)) + h[b].diff(_qd(a)),
            2 * truncated_derivative(g[a][b]),
        )
        for a in range(n)
        for b in range(a, n)
    ]


def _gh_skew_part(h, n) -> list[Identity]:
    return [
        Identity(
            _idx(a, b),
            2 * (h[a].diff(_q(b)) - h[b].diff(_q(a))),
            truncated_derivative(h[a].diff(_qd(b)) - h[b].diff(_qd(a))),
        )
        for a in range(n)
        for b in range(a + 1, n)
    ]


def _c10(g, n) -> list[Identity]:
    return [
        Identity(
            _idx(a, b, c),
            g[a][c].diff(_qd(b)) + g[b][c].diff(_qd(a)),
            2 * g[a][b].diff(_qd(c)),
        )
        for a in range(n)
        for b in range(a, n)
        for c in range(n)
    ]


def _rho_condition(g, h, n) -> list[Identity]:
    # d2h_a/dqd^b dqd^c - d2h_b/dqd^a dqd^c = 2 (dg_ac/dq^b - dg_bc/dq^a)
    return [
        Identity(
            _idx(a, b, c),
            h[a].diff(_qd(b)).diff(_qd(c)) - h[b].diff(_qd(a)).diff(_qd(c)),
            2 * (g[a][c].diff(_q(b)) - g[b][c].diff(_q(a))),
        )
        for a in range(n)
        for b in range(a + 1, n)
        for c in range(n)
    ]


def classical_gh_check(q: QuasiLinearForm) -> list[ConditionReport]:
    """The classical conditions in g/h form: the three-condition set and the
    five-condition set, reported separately so redundancies are observable."""
    g, h, n = q.g, q.h, q.n
    sym = _gh_velocity_symmetry(g, n)
    spart = _gh_symmetric_part(g, h, n)
    kpart = _gh_skew_part(h, n)
    return [
        ConditionReport.from_identities("gh-6", sym),
        ConditionReport.from_identities("gh-7", spart),
        ConditionReport.from_identities("gh-8", kpart),
        ConditionReport.from_identities("c-10", _c10(g, n)),
        ConditionReport.from_identities("c-11", spart),
        ConditionReport.from_identities("c-12", sym),
        ConditionReport.from_identities("c-13", _rho_condition(g, h, n)),
        ConditionReport.from_identities("c-14", kpart),
    ]


# ---------------------------------------------------------------------------
# generalized conditions


def compute_r_s(sys: SodeSystem) -> GhcIntermediates:
    """``r_ab`` and ``s_ab`` with the full ``d/dt``; ``rho`` when quasi-linear."""
    f, n = sys.f, sys.n
    dq = [[f[a].diff(_q(b)) for b in range(n)] for a in range(n)]
    dqd = [[f[a].diff(_qd(b)) for b in range(n)] for a in range(n)]
    dqdd = [[f[a].diff(_qdd(b)) for b in range(n)] for a in range(n)]
    r = tuple(
        tuple(
            dq[a][b] - dq[b][a] + HALF * total_derivative(dqd[b][a] - dqd[a][b])
            for b in range(n)
        )
        for a in range(n)
    )
    s = tuple(
        tuple(
            HALF * (dqd[a][b] + dqd[b][a]) - total_derivative(dqdd[b][a])
            for b in range(n)
        )
        for a in range(n)
    )
    witness = tuple(_quasi_linear_witness(f))
    if witness:
        return GhcIntermediates(sys, r, s, None, None, None, witness)
    g, h = _raw_coefficients(f)
    return GhcIntermediates(sys, r, s, g, h, _rho(g, h, n), ())


def _first_order_closed_forms(im: GhcIntermediates):
    g, h, n = im.g, im.h, im.n
    r = [
        [
            h[a].diff(_q(b))
            - h[b].diff(_q(a))
            - HALF * truncated_derivative(h[a].diff(_qd(b)) - h[b].diff(_qd(a)))
            for b in range(n)
        ]
        for a in range(n)
    ]
    # s_ab carries d/dt(df_b/dqdd^a) = d/dt(g_ba); g_ba = g_ab whenever GHC1 holds.
    s = [
        [
            HALF * (h[a].diff(_qd(b)) + h[b].diff(_qd(a))) - truncated_derivative(g[b][a])
            for b in range(n)
        ]
        for a in range(n)
    ]
    return r, s


def _failure_layer(im: GhcIntermediates) -> str:
    if im.g is None:
        return "not quasi-linear in the accelerations"
    g, n = im.g, im.n
    for a, b, c in product(range(n), repeat=3):
        if g[b][c].diff(_qd(a)) != g[a][c].diff(_qd(b)):
            return f"dg_bc/dqd^a != dg_ac/dqd^b at (a,b,c)={_label(a, b, c)}"
    for a, b, c in product(range(n), repeat=3):
        if im.rho[a][b][c]:
            return f"rho nonzero at (a,b,c)={_label(a, b, c)}: {im.rho[a][b][c]}"
    return "acceleration terms in s_ab (g not symmetric)"


def first_order_check(im: GhcIntermediates) -> list[ConditionReport]:
    """Are ``r_ab`` and ``s_ab`` of first order?

    Returns reports ``first-order-r``, ``first-order-s`` and, for quasi-linear
    systems, ``rho``.  Residuals are the parts of jet order >= 2.  On failure
    the note names the first layer of the cascade that broke.  On success the
    first-order closed forms (built with the truncated derivative) are checked
    against the originals.
    """
    n = im.n
    r_ids = [
        Identity(_idx(a, b), _higher_order_part(im.r[a][b]), Expression())
        for a in range(n)
        for b in range(a + 1, n)
    ]
    s_ids = [
        Identity(_idx(a, b), _higher_order_part(im.s[a][b]), Expression())
        for a in range(n)
        for b in range(n)
    ]
    r_rep = ConditionReport.from_identities("first-order-r", r_ids)
    s_rep = ConditionReport.from_identities("first-order-s", s_ids)
    reports = [r_rep, s_rep]
    if im.g is not None:
        rho_ids = [
            Identity(
                _idx(a, b, c),
                im.g[a][c].diff(_q(b)) - im.g[b][c].diff(_q(a)),
                HALF * (im.h[a].diff(_qd(b)).diff(_qd(c)) - im.h[b].diff(_qd(a)).diff(_qd(c))),
            )
            for a in range(n)
            for b in range(a + 1, n)
            for c in range(n)
        ]
        reports.append(ConditionReport.from_identities("rho", rho_ids))
    if r_rep.passed and s_rep.passed:
        r_closed, s_closed = _first_order_closed_forms(im)
        mismatch = [
            (_idx(a, b), im.r[a][b] - r_closed[a][b])
            for a in range(n)
            for b in range(n)
            if im.r[a][b] != r_closed[a][b]
        ] + [
            (_idx(a, b), im.s[a][b] - s_closed[a][b])
            for a in range(n)
            for b in range(n)
            if im.s[a][b] != s_closed[a][b]
        ]
        if mismatch:
            raise EngineError("first-order closed forms disagree with r, s", mismatch)
    else:
        layer = _failure_layer(im)
        reports[0] = ConditionReport(r_rep.condition, r_rep.residuals, "" if r_rep.passed else layer)
        reports[1] = ConditionReport(s_rep.condition, s_rep.residuals, "" if s_rep.passed else layer)
    return reports


def _ghc2(im: GhcIntermediates) -> list[Identity]:
    n, s = im.n, im.s
    return [
        Identity(_idx(a, b, c), s[a][b].diff(_qd(c)), s[a][c].diff(_qd(b)))
        for a in range(n)
        for b in range(n)
        for c in range(b + 1, n)
    ]


def _ghc3(im: GhcIntermediates) -> list[Identity]:
    n, r, s = im.n, im.r, im.s
    return [
        Identity(
            _idx(a, b, c),
            r[a][b].diff(_qd(c)),
            s[a][c].diff(_q(b)) - s[b][c].diff(_q(a)),
        )
        for a in range(n)
        for b in range(a + 1, n)
        for c in range(n)
    ]


def _ghc4(im: GhcIntermediates) -> list[Identity]:
    n, r = im.n, im.r
    return [
        Identity(
            _idx(a, b, c),
            _cyclic(lambda i, j, k: r[i][j].diff(_q(k)), a, b, c),
            Expression(),
        )
        for a in range(n)
        for b in range(a + 1, n)
        for c in range(b + 1, n)
    ]


def generalized_check_full(sys: SodeSystem) -> list[ConditionReport]:
    """First-order property plus GHC1-GHC4 exactly as originally stated."""
    im = compute_r_s(sys)
    return first_order_check(im) + [
        ConditionReport.from_identities("GHC1", _hc1(sys.f)),
        ConditionReport.from_identities("GHC2", _ghc2(im)),
        ConditionReport.from_identities("GHC3", _ghc3(im)),
        ConditionReport.from_identities("GHC4", _ghc4(im)),
    ]


def generalized_check_minimal(sys: SodeSystem) -> list[ConditionReport]:
    """The minimal set: ``r, s`` first order, GHC1, and ``dr_ab/dqd^c = ds_ac/dq^b - ds_bc/dq^a``."""
    im = compute_r_s(sys)
    return first_order_check(im) + [
        ConditionReport.from_identities("GHC1", _hc1(sys.f)),
        ConditionReport.from_identities("prop-17", _ghc3(im)),
    ]


def _ghform3(h, n) -> list[Identity]:
    # cyclic sum over (a,b,c) of d2h_a/dq^b dqd^c - d2h_a/dq^c dqd^b
    return [
        Identity(
            _idx(a, b, c),
            _cyclic(lambda i, j, k: h[i].diff(_q(j)).diff(_qd(k)), a, b, c),
            _cyclic(lambda i, j, k: h[i].diff(_q(k)).diff(_qd(j)), a, b, c),
        )
        for a in range(n)
        for b in range(a + 1, n)
        for c in range(b + 1, n)
    ]


def gh_form_check(q: QuasiLinearForm) -> list[ConditionReport]:
    """The generalized conditions expressed through ``g`` and ``h``."""
    g, h, n = q.g, q.h, q.n
    return [
        ConditionReport.from_identities("ghform-1", _gh_velocity_symmetry(g, n)),
        ConditionReport.from_identities("ghform-2", _rho_condition(g, h, n)),
        ConditionReport.from_identities("ghform-3", _ghform3(h, n)),
    ]


def gh_form_check_system(sys: SodeSystem) -> list[ConditionReport]:
    """:func:`gh_form_check` on the decomposition of ``sys``.

    A failed decomposition is reported as ``first-order-s`` (no quasi-linear
    form) or ``GHC1`` (asymmetric ``g``) instead of raising.
    """
    try:
        q = decompose(sys)
    except NotQuasiLinear as exc:
        return [ConditionReport("first-order-s", tuple(exc.residuals), "not quasi-linear in the accelerations")]
    except HessianNotSymmetric as exc:
        return [ConditionReport("GHC1", tuple(exc.residuals), "g is not symmetric")]
    return gh_form_check(q)


# ---------------------------------------------------------------------------
# redundancy theorems


def _cyclic_T(h, a: int, b: int, c: int) -> Expression:
    # sum_cyc (d2h_a/dq^b dqd^c - d2h_a/dq^c dqd^b)
    def T(i, j, k):
        return h[i].diff(_q(j)).diff(_qd(k)) - h[i].diff(_q(k)).diff(_qd(j))

    return _cyclic(T, a, b, c)


def _rho_identity(im: GhcIntermediates) -> list[Identity]:
    # ds_ac/dqd^b - ds_bc/dqd^a = -rho_abc
    n, s, rho = im.n, im.s, im.rho
    return [
        Identity(
            _idx(a, b, c),
            s[a][c].diff(_qd(b)) - s[b][c].diff(_qd(a)),
            -rho[a][b][c],
        )
        for a in range(n)
        for b in range(n)
        for c in range(n)
    ]


def ghc3_mechanism(sys: SodeSystem) -> list[Identity]:
    """For first-order ``r, s``: ``GHC3 residual = 1/2 sum_cyc T_abc + dbar/dt rho_abc``,
    with ``T_abc = d2h_a/dq^b dqd^c - d2h_a/dq^c dqd^b``.

    When GHC3 holds this is the statement that the cyclic sum equals
    ``-dbar/dt rho_abc``.
    """
    im = compute_r_s(sys)
    if im.h is None:
        raise ValueError("system is not quasi-linear")
    out = []
    for ident in _ghc3(im):
        a, b, c = (k - 1 for k in ident.index)
        out.append(
            Identity(
                ident.index,
                ident.residual,
                HALF * _cyclic_T(im.h, a, b, c) + truncated_derivative(im.rho[a][b][c]),
            )
        )
    return out


def ghc4_mechanism(sys: SodeSystem) -> list[Identity]:
    """For first-order ``r``: ``sum_cyc dr_ab/dq^c = 1/2 dbar/dt (sum_cyc T_abc)``."""
    im = compute_r_s(sys)
    if im.h is None:
        raise ValueError("system is not quasi-linear")
    out = []
    for ident in _ghc4(im):
        a, b, c = (k - 1 for k in ident.index)
        out.append(Identity(ident.index, ident.lhs, HALF * truncated_derivative(_cyclic_T(im.h, a, b, c))))
    return out


def redundancy_witness(sys: SodeSystem) -> list[ConditionReport]:
    """Executable forms of the two redundancy theorems.

    ``redundancy-A``: given first-order ``r, s``, GHC2 holds; when GHC1 holds
    too, so does the mechanism ``ds_ac/dqd^b - ds_bc/dqd^a + rho_abc = 0``
    (that identity is stated for symmetric ``g`` and fails without it).
    ``redundancy-B``: given first-order ``r, s`` and GHC3, GHC4 holds.

    A report whose hypothesis is not met passes vacuously and says so in its
    note.  A failing report on an input meeting the hypothesis means the
    engine is wrong, not the input.
    """
    im = compute_r_s(sys)
    first_order = all_passed(first_order_check(im))
    if first_order:
        ids = _ghc2(im)
        note = "GHC2"
        if not any(i.residual for i in _hc1(sys.f)):
            ids = ids + _rho_identity(im)
            note = "GHC2 and ds_ac/dqd^b - ds_bc/dqd^a + rho_abc = 0"
        rep_a = ConditionReport.from_identities("redundancy-A", ids, note)
    else:
        rep_a = ConditionReport("redundancy-A", (), "hypothesis not met")
    if first_order and ConditionReport.from_identities("GHC3", _ghc3(im)).passed:
        rep_b = ConditionReport.from_identities("redundancy-B", _ghc4(im), "GHC4 given GHC3")
    else:
        rep_b = ConditionReport("redundancy-B", (), "hypothesis not met")
    return [rep_a, rep_b]


# ---------------------------------------------------------------------------
# raw identities, for independent numerical sampling


def condition_identities(sys: SodeSystem, condition: str) -> list[Identity]:
    """All index instances of ``condition`` on ``sys``, including the ones that hold."""
    f = sys.f
    if condition in ("HC1", "GHC1"):
        return _hc1(f)
    if condition == "HC2":
        return _hc2(f)
    if condition == "HC3":
        return _hc3(f)
    if condition in ("GHC2", "GHC3", "GHC4", "prop-17"):
        im = compute_r_s(sys)
        return {"GHC2": _ghc2, "GHC3": _ghc3, "prop-17": _ghc3, "GHC4": _ghc4}[condition](im)
    q = decompose(sys)
    g, h, n = q.g, q.h, q.n
    table = {
        "gh-6": lambda: _gh_velocity_symmetry(g, n),
        "c-12": lambda: _gh_velocity_symmetry(g, n),
        "ghform-1": lambda: _gh_velocity_symmetry(g, n),
        "gh-7": lambda: _gh_symmetric_part(g, h, n),
        "c-11": lambda: _gh_symmetric_part(g, h, n),
        "gh-8": lambda: _gh_skew_part(h, n),
        "c-14": lambda: _gh_skew_part(h, n),
        "c-10": lambda: _c10(g, n),
        "c-13": lambda: _rho_condition(g, h, n),
        "ghform-2": lambda: _rho_condition(g, h, n),
        "ghform-3": lambda: _ghform3(h, n),
    }
    if condition not in table:
        raise KeyError(f"no raw identities for {condition!r}")
    return table[condition]()
