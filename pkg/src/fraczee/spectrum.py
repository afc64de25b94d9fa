"""Casimir eigenvalues of the fractional rotation group and the level formula.

Multiplets are labeled |L M>.  The level spectrum is

    E = m0 + a0 * G(1+(L+1)a)/G(1+(L-1)a)  +/-  b0 * G(1+|M|a)/G(1+(|M|-1)a)

which at a = 1 collapses to the familiar m0 + a0 L(L+1) +/- b0 M.  The
plus branch is used for every row of the built-in table: it is the only
branch whose levels increase with M at fixed L, and at M = 0 it leaves a
nonzero zero-point contribution b0 / Gamma(1-a) for a < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .specfun import gamma, rgamma

__all__ = [
    "FitParams",
    "Multiplet",
    "REFERENCE_PARAMS",
    "casimir_L2",
    "casimir_Lz",
    "mass",
    "spectrum",
]


@dataclass(frozen=True)
class FitParams:
    """Level-formula parameters; m0, a0, b0 in MeV."""

    alpha: float
    m0: float
    a0: float
    b0: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        for name in ("alpha", "m0", "a0", "b0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite parameter {name}")

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.m0, self.a0, self.b0)


#: parameter set that generated the theoretical column of the built-in table
REFERENCE_PARAMS = FitParams(alpha=0.112, m0=-17171.6, a0=10971.8, b0=8064.6)


@dataclass(frozen=True)
class Multiplet:
    L: int
    M: int
    sign: int = +1

    def __post_init__(self):
        if self.L < 0:
            raise ValueError("L must be nonnegative")
        if abs(self.M) > self.L:
            raise ValueError(f"|M| <= L required, got L={self.L}, M={self.M}")
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")


def casimir_L2(alpha: float, L: int) -> float:
    """Eigenvalue of the squared angular momentum: G(1+(L+1)a)/G(1+(L-1)a)."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    return gamma(1.0 + (L + 1) * alpha) * rgamma(1.0 + (L - 1) * alpha)


def casimir_Lz(alpha: float, M: int, sign: int = +1) -> float:
    """Signed z-projection eigenvalue: +/- G(1+|M|a)/G(1+(|M|-1)a).

    At alpha = 1 this is +/-|M| (zero for M = 0); for alpha < 1 the M = 0
    value 1/Gamma(1-alpha) does not vanish.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    m = abs(M)
    return sign * gamma(1.0 + m * alpha) * rgamma(1.0 + (m - 1) * alpha)


def mass(p: FitParams, mult: Multiplet) -> float:
    """Level energy in MeV for one multiplet."""
    return (
        p.m0
        + p.a0 * casimir_L2(p.alpha, mult.L)
        + p.b0 * casimir_Lz(p.alpha, mult.M, mult.sign)
    )


def spectrum(
    p: FitParams, mults: Iterable[Multiplet] | Sequence[Multiplet]
) -> list[tuple[Multiplet, float]]:
    """Masses for a list of multiplets, preserving input order."""
    return [(m, mass(p, m)) for m in mults]
