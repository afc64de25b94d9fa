"""Exact algebra of multivariate power expressions.

A :class:`PolyExpr` is a finite sum of signed terms ``c * x^a y^b z^c t^d``
with real exponents.  The Riemann-Liouville derivative with lower terminal
0 acts termwise through the closed-form power rule

    D^q x^v = Gamma(1+v) / Gamma(1+v-q) * x^(v-q)

where negative q is a fractional integral.  Coefficients are assembled
through ``rgamma`` so that denominator poles annihilate terms exactly.

Numeric evaluation follows the odd-extension convention
``x^v := sign(x) |x|^v`` on every axis carrying a nonzero exponent.

Exponents are identified at a resolution of 1e-9: terms whose exponent
vectors agree after rounding to 9 decimals merge, and Gamma arguments
that close to a pole count as the pole.  Exponents engineered to sit
exactly on a rounding boundary of that grid are outside the contract.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .specfun import gamma, rgamma

__all__ = [
    "AXES",
    "DROP_TOL",
    "DomainError",
    "ExprSyntaxError",
    "PowerTerm",
    "PolyExpr",
    "term",
    "parse_expr",
    "rl_derive",
]

AXES = ("x", "y", "z", "t")
_AXIS_INDEX = {a: i for i, a in enumerate(AXES)}

#: coefficients with smaller magnitude are dropped after arithmetic
DROP_TOL = 1e-12


class DomainError(ValueError):
    """Operation left the admissible function class (terminal at 0)."""


class ExprSyntaxError(ValueError):
    """Raised by the parser; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class PowerTerm:
    """One signed power product: coeff * x^e0 * y^e1 * z^e2 * t^e3."""

    coeff: float
    exps: tuple[float, float, float, float]

    def exponent(self, axis: str) -> float:
        return self.exps[_AXIS_INDEX[axis]]

    @property
    def exponents(self) -> dict[str, float]:
        """Axis -> exponent map, nonzero entries only."""
        return {a: e for a, e in zip(AXES, self.exps) if e != 0.0}

    def with_coeff(self, coeff: float) -> "PowerTerm":
        return PowerTerm(coeff, self.exps)


def _exps_tuple(exponents: Mapping[str, float] | None) -> tuple[float, float, float, float]:
    out = [0.0, 0.0, 0.0, 0.0]
    for axis, e in (exponents or {}).items():
        if axis not in _AXIS_INDEX:
            raise ValueError(f"unknown axis {axis!r}; axes are {AXES}")
        if not math.isfinite(e):
            raise ValueError(f"non-finite exponent on axis {axis!r}")
        out[_AXIS_INDEX[axis]] = float(e)
    return tuple(out)


def term(coeff: float, **exponents: float) -> PowerTerm:
    """Convenience constructor: ``term(2.0, x=1, z=-0.5)``."""
    if not math.isfinite(coeff):
        raise ValueError("non-finite coefficient")
    return PowerTerm(float(coeff), _exps_tuple(exponents))


def _merge(terms: Iterable[PowerTerm], drop_tol: float) -> tuple[PowerTerm, ...]:
    # group on exponents snapped to 9 decimals so that roundoff-sized
    # disagreements between computation paths still cancel; the first term
    # seen keeps its raw exponents as the cluster representative
    groups: dict[tuple[float, ...], PowerTerm] = {}
    for t in terms:
        key = tuple(round(e, 9) for e in t.exps)
        g = groups.get(key)
        groups[key] = t if g is None else g.with_coeff(g.coeff + t.coeff)
    kept = (t for t in groups.values() if abs(t.coeff) > drop_tol)
    return tuple(sorted(kept, key=lambda t: t.exps))


def _fmt(v: float, sig: int) -> str:
    s = f"%.{sig}g" % v
    return s


@dataclass(frozen=True)
class PolyExpr:
    """Normalized finite sum of :class:`PowerTerm`.

    Construction merges terms with equal exponent vectors and drops
    coefficients below ``drop_tol``; instances are immutable.
    """

    terms: tuple[PowerTerm, ...]

    @staticmethod
    def from_terms(terms: Iterable[PowerTerm], drop_tol: float = DROP_TOL) -> "PolyExpr":
        return PolyExpr(_merge(terms, drop_tol))

    @staticmethod
    def zero() -> "PolyExpr":
        return PolyExpr(())

    @staticmethod
    def const(c: float) -> "PolyExpr":
        return PolyExpr.from_terms([term(c)])

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(t.coeff) <= tol for t in self.terms)

    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def scaled(self, s: float) -> "PolyExpr":
        return PolyExpr.from_terms(t.with_coeff(t.coeff * s) for t in self.terms)

    def __add__(self, other: "PolyExpr") -> "PolyExpr":
        return PolyExpr.from_terms(self.terms + other.terms)

    def __sub__(self, other: "PolyExpr") -> "PolyExpr":
        return self + other.scaled(-1.0)

    def __neg__(self) -> "PolyExpr":
        return self.scaled(-1.0)

    def __mul__(self, other: "PolyExpr | float") -> "PolyExpr":
        if isinstance(other, PolyExpr):
            prods = [
                PowerTerm(
                    a.coeff * b.coeff,
                    tuple(ea + eb for ea, eb in zip(a.exps, b.exps)),
                )
                for a in self.terms
                for b in other.terms
            ]
            return PolyExpr.from_terms(prods)
        return self.scaled(float(other))

    __rmul__ = __mul__

    def mul_term(self, t: PowerTerm) -> "PolyExpr":
        return self * PolyExpr((t,))

    def evaluate(self, point: Mapping[str, float]) -> float:
        """Numeric value at ``point`` under the sign(x)|x|^v convention.

        Axes with zero exponent need not be supplied.  A zero coordinate
        under a negative exponent is a domain error.
        """
        total = 0.0
        for t in self.terms:
            v = t.coeff
            for axis, e in zip(AXES, t.exps):
                if e == 0.0:
                    continue
                if axis not in point:
                    raise ValueError(f"point does not supply axis {axis!r}")
                c = float(point[axis])
                if c == 0.0:
                    if e < 0.0:
                        raise DomainError(
                            f"zero coordinate on axis {axis!r} raised to exponent {e}"
                        )
                    v = 0.0
                    break
                v *= math.copysign(abs(c) ** e, c)
            total += v
        return total

    def render(self) -> str:
        """Canonical text form, diff-stable (terms sorted by exponents)."""
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda t: t.exps, reverse=True)
        out: list[str] = []
        for i, t in enumerate(ordered):
            sign = "-" if t.coeff < 0 else "+"
            mag = abs(t.coeff)
            parts = []
            for axis, e in zip(AXES, t.exps):
                if e == 0.0:
                    continue
                parts.append(axis if e == 1.0 else f"{axis}^{_fmt(e, 10)}")
            if not parts or mag != 1.0:
                parts.insert(0, _fmt(mag, 11))
            body = "*".join(parts) if parts else "1"
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)


def rl_derive(e: PolyExpr, axis: str, order: float, drop_tol: float = DROP_TOL) -> PolyExpr:
    """Riemann-Liouville derivative (integral for order < 0) along one axis.

    Each term ``c x^v`` maps to ``c Gamma(1+v) rgamma(1+v-order) x^(v-order)``.
    Terms whose denominator Gamma sits at a pole are annihilated; the pole
    test snaps ``1+v-order`` to the same 1e-9 grid used for exponent
    merging, so cancellations that are exact in real arithmetic stay exact
    under floating-point drift of the exponents.  Surviving terms must
    satisfy ``v - order >= -1``.

    Raises:
        DomainError: input exponent <= -1 on the axis, or the result
            would leave the admissible class with a nonzero coefficient.
    """
    if axis not in _AXIS_INDEX:
        raise ValueError(f"unknown axis {axis!r}; axes are {AXES}")
    if not math.isfinite(order):
        raise ValueError("non-finite derivative order")
    if order == 0.0:
        return e
    i = _AXIS_INDEX[axis]
    out: list[PowerTerm] = []
    for t in e.terms:
        v = t.exps[i]
        if v <= -1.0:
            raise DomainError(
                f"term with exponent {v} <= -1 on axis {axis!r} is outside the "
                f"admissible class: {PolyExpr((t,)).render()}"
            )
        arg = 1.0 + v - order
        if abs(arg - round(arg)) <= 1e-9 and round(arg) <= 0.0:
            continue
        if v - order < -1.0 - 1e-9:
            raise DomainError(
                f"order {order} on axis {axis!r} drives exponent {v} below -1 "
                f"in term {PolyExpr((t,)).render()}"
            )
        coeff = t.coeff * gamma(1.0 + v) * rgamma(arg)
        exps = list(t.exps)
        exps[i] = v - order
        out.append(PowerTerm(coeff, tuple(exps)))
    return PolyExpr.from_terms(out, drop_tol)


# ----------------------------------------------------------------------
# expression parser: signed sums of products  c * x^e * y^e ...
# ----------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class _Scanner:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def number(self) -> float:
        self.skip_ws()
        m = _NUMBER_RE.match(self.src, self.pos)
        if not m:
            raise ExprSyntaxError("expected a number", self.pos)
        self.pos = m.end()
        value = float(m.group(0))
        if not math.isfinite(value):
            raise ExprSyntaxError(f"non-finite literal {m.group(0)!r}", m.start())
        return value

    def signed_number(self) -> float:
        sign = 1.0
        while self.peek() in "+-":
            if self.take() == "-":
                sign = -sign
        return sign * self.number()


def _parse_product(sc: _Scanner) -> PowerTerm:
    coeff = 1.0
    exps = [0.0, 0.0, 0.0, 0.0]
    expect_factor = True
    while True:
        ch = sc.peek()
        if expect_factor:
            if ch in _AXIS_INDEX:
                sc.take()
                e = 1.0
                if sc.peek() == "^":
                    sc.take()
                    e = sc.signed_number()
                exps[_AXIS_INDEX[ch]] += e
            elif ch.isdigit() or ch == ".":
                coeff *= sc.number()
            else:
                raise ExprSyntaxError("expected a factor", sc.pos)
            expect_factor = False
        elif ch == "*":
            sc.take()
            expect_factor = True
        else:
            break
    return PowerTerm(coeff, tuple(exps))


def parse_expr(src: str, drop_tol: float = DROP_TOL) -> PolyExpr:
    """Parse ``"0.5*x^0.5*z^1.2 - 2*y"``-style input into a PolyExpr.

    Raises :class:`ExprSyntaxError` (with byte offset) on malformed input.
    """
    sc = _Scanner(src)
    terms: list[PowerTerm] = []
    if sc.peek() == "":
        raise ExprSyntaxError("empty expression", 0)
    sign = 1.0
    while sc.peek() in "+-":
        if sc.take() == "-":
            sign = -sign
    while True:
        t = _parse_product(sc)
        terms.append(t.with_coeff(sign * t.coeff))
        ch = sc.peek()
        if ch == "":
            break
        if ch not in "+-":
            raise ExprSyntaxError(f"unexpected character {ch!r}", sc.pos)
        sign = 1.0
        while sc.peek() in "+-":
            if sc.take() == "-":
                sign = -sign
    return PolyExpr.from_terms(terms, drop_tol)
