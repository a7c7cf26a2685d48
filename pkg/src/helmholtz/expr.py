"""Exact polynomial expressions over jet coordinates.

An :class:`Expression` is a sparse multivariate polynomial with
:class:`fractions.Fraction` coefficients in the variables of the jet space:
the time ``t``, free parameters, and the derivatives ``q^a_(k)`` of the
generalized coordinates.  Every operation returns a canonical value, so two
expressions are mathematically equal exactly when they compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "JetVariable",
    "Expression",
    "Monomial",
    "TIME",
    "coord",
    "vel",
    "acc",
    "param",
    "const",
    "var",
    "partial",
    "total_derivative",
    "truncated_derivative",
    "jet_order",
]

_TIME, _PARAM, _COORD = 0, 1, 2


@dataclass(frozen=True, order=True)
class JetVariable:
    """One coordinate of the jet space.

    Ordering is ``t`` < parameters (alphabetical) < ``q^a_(k)`` by ``(a, k)``,
    which fixes the monomial order used for printing.
    """

    kind: int
    name: str = ""
    index: int = 0
    order: int = 0

    def __post_init__(self) -> None:
        if self.kind == _COORD:
            if self.index < 1:
                raise ValueError(f"coordinate index must be >= 1, got {self.index}")
            if self.order < 0:
                raise ValueError(f"derivative order must be >= 0, got {self.order}")
        elif self.kind == _PARAM:
            if not self.name:
                raise ValueError("parameter needs a name")
        elif self.kind != _TIME:
            raise ValueError(f"unknown variable kind {self.kind}")

    @property
    def is_time(self) -> bool:
        return self.kind == _TIME

    @property
    def is_param(self) -> bool:
        return self.kind == _PARAM

    @property
    def is_coord(self) -> bool:
        return self.kind == _COORD

    def differentiated(self) -> JetVariable:
        """The next jet coordinate, ``q^a_(k+1)`` for ``q^a_(k)``."""
        if not self.is_coord:
            raise ValueError(f"{self} has no jet successor")
        return JetVariable(_COORD, index=self.index, order=self.order + 1)

    def __str__(self) -> str:
        if self.kind == _TIME:
            return "t"
        if self.kind == _PARAM:
            return self.name
        return "q" + "d" * self.order + str(self.index)

    def __repr__(self) -> str:
        return f"JetVariable({self})"


TIME = JetVariable(_TIME)


def coord(a: int, order: int = 0) -> JetVariable:
    return JetVariable(_COORD, index=a, order=order)


def vel(a: int) -> JetVariable:
    return coord(a, 1)


def acc(a: int) -> JetVariable:
    return coord(a, 2)


def param(name: str) -> JetVariable:
    return JetVariable(_PARAM, name=name)


# A monomial is a tuple of (variable, exponent) pairs sorted by variable,
# with every exponent >= 1.  The empty tuple is the constant monomial.
Monomial = tuple

Scalar = Union[int, Fraction]
Operand = Union["Expression", int, Fraction]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for v, e in m2:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial):
    # Higher total degree first, then lexicographic in the variable order.
    return (-_mono_degree(m), tuple((v, -e) for v, e in m))


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Expression:
    """Canonical sparse polynomial with exact rational coefficients.

    Instances are immutable.  Build them from :func:`var`, :func:`const` and
    the arithmetic operators, or with :func:`helmholtz.parser.parse`.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        cleaned: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    cleaned[m] = Fraction(c)
        self._terms = cleaned
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> Expression:
        # ``terms`` must already be free of zero coefficients.
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- structure -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order (the printing order)."""
        for m in sorted(self._terms, key=_grlex_key):
            yield m, self._terms[m]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset[JetVariable]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, v: JetVariable) -> int:
        best = 0 if self._terms else -1
        for m in self._terms:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Expression):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == Expression.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- construction ----------------------------------------------------

    @staticmethod
    def constant(c: Scalar) -> Expression:
        c = Fraction(c)
        return Expression._raw({(): c} if c else {})

    @staticmethod
    def variable(v: JetVariable) -> Expression:
        return Expression._raw({((v, 1),): Fraction(1)})

    @staticmethod
    def _coerce(x: Operand) -> Expression:
        if isinstance(x, Expression):
            return x
        if isinstance(x, (int, Rational)):
            return Expression.constant(Fraction(x))
        raise TypeError(f"cannot use {type(x).__name__} in an Expression")

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: Operand) -> Expression:
        try:
            other = Expression._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Expression._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Expression:
        return Expression._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self) -> Expression:
        return self

    def __sub__(self, other: Operand) -> Expression:
        try:
            other = Expression._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Operand) -> Expression:
        return Expression._coerce(other) - self

    def __mul__(self, other: Operand) -> Expression:
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return ZERO
            return Expression._raw({m: k * c for m, k in self._terms.items()})
        if not isinstance(other, Expression):
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Expression._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> Expression:
        other = Expression._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        if not other.is_constant():
            raise ValueError("division by a non-constant expression")
        return self * (1 / other.constant_value())

    def __pow__(self, k: int) -> Expression:
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus and substitution --------------------------------------

    def diff(self, v: JetVariable) -> Expression:
        """Partial derivative with respect to ``v``; jet variables are independent."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            for i, (w, e) in enumerate(m):
                if w == v:
                    if e == 1:
                        nm = m[:i] + m[i + 1:]
                    else:
                        nm = m[:i] + ((w, e - 1),) + m[i + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return Expression._raw({m: c for m, c in out.items() if c})

    def subs(self, mapping: Mapping[JetVariable, Operand]) -> Expression:
        """Substitute expressions for variables simultaneously."""
        repl = {v: Expression._coerce(x) for v, x in mapping.items()}
        result = ZERO
        for m, c in self._terms.items():
            term = Expression.constant(c)
            keep = []
            for v, e in m:
                if v in repl:
                    term = term * repl[v] ** e
                else:
                    keep.append((v, e))
            if keep:
                term = term * Expression._raw({tuple(keep): Fraction(1)})
            result = result + term
        return result

    def split_by_degree(self, vs: Iterable[JetVariable]) -> dict[int, Expression]:
        """Group terms by their combined degree in the variables ``vs``."""
        vs = frozenset(vs)
        groups: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            d = sum(e for v, e in m if v in vs)
            groups.setdefault(d, {})[m] = c
        return {d: Expression._raw(t) for d, t in groups.items()}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in m]
            if not factors:
                body = _format_coeff(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = _format_coeff(a) + "*" + "*".join(factors)
            if i == 0:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Expression({str(self)!r})"


ZERO = Expression()
ONE = Expression.constant(1)


def const(c: Scalar) -> Expression:
    return Expression.constant(c)


def var(v: JetVariable) -> Expression:
    return Expression.variable(v)


def partial(e: Expression, v: JetVariable) -> Expression:
    return e.diff(v)


def total_derivative(e: Expression) -> Expression:
    """Full time derivative ``d/dt`` on the infinite jet.

    Each ``q^a_(k)`` contributes ``(de/dq^a_(k)) * q^a_(k+1)``.
    """
    result = e.diff(TIME)
    for v in sorted(e.variables()):
        if v.is_coord:
            result = result + e.diff(v) * var(v.differentiated())
    return result


def truncated_derivative(e: Expression) -> Expression:
    """The truncated derivative ``d/dt|_t + qd^c d/dq^c``.

    Only position variables are pushed forward, so first-order input stays
    first order.
    """
    result = e.diff(TIME)
    for v in sorted(e.variables()):
        if v.is_coord and v.order == 0:
            result = result + e.diff(v) * var(vel(v.index))
    return result


def jet_order(e: Expression) -> int:
    """Highest derivative order of any coordinate in ``e``; ``-1`` if none occur."""
    return max((v.order for v in e.variables() if v.is_coord), default=-1)
