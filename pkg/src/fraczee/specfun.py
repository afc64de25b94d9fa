"""Gamma-function kernels shared by every other module.

All power-rule coefficients, fractional binomials and Casimir eigenvalues
downstream are assembled from ``gamma`` and ``rgamma``.  The reciprocal
``rgamma`` is total: it returns exactly ``0.0`` at the poles of Gamma,
which is what turns identities that hinge on ``1/Gamma(0) = 0`` into
exact cancellations instead of roundoff-sized residues.
"""

from __future__ import annotations

import math

__all__ = ["GammaPoleError", "gamma", "rgamma", "frac_binomial"]

# Lanczos approximation, g = 7 with 9 coefficients.  Worst relative error
# against a 30-digit oracle is ~2e-14 on (0, 50].  Integer arguments short-
# circuit to the exact factorial so classical-limit identities cancel exactly.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class GammaPoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _sinpi(x: float) -> float:
    """sin(pi*x) with exact argument reduction (no large-angle error)."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _lanczos_positive(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    s = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        s += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * s


def gamma(x: float) -> float:
    """Euler Gamma function for real arguments.

    Uses the Lanczos approximation for x >= 0.5 and the reflection
    formula Gamma(x) = pi / (sin(pi x) Gamma(1-x)) below.

    Raises:
        GammaPoleError: at the poles x = 0, -1, -2, ...
        ValueError: for non-finite x.
    """
    if not math.isfinite(x):
        raise ValueError(f"gamma requires a finite argument, got {x!r}")
    if _is_nonpositive_integer(x):
        raise GammaPoleError(f"gamma pole at x = {x!r}")
    if x == math.floor(x) and x <= 171.0:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (_sinpi(x) * _lanczos_positive(1.0 - x))
    return _lanczos_positive(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma, entire in x.

    Returns exactly 0.0 at non-positive integers and 1/gamma(x)
    everywhere else.  Never raises for finite input.
    """
    if not math.isfinite(x):
        raise ValueError(f"rgamma requires a finite argument, got {x!r}")
    if _is_nonpositive_integer(x):
        return 0.0
    if x == math.floor(x) and x <= 171.0:
        return 1.0 / float(math.factorial(int(x) - 1))
    if x >= 0.5:
        return 1.0 / _lanczos_positive(x)
    # 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    return _sinpi(x) * _lanczos_positive(1.0 - x) / math.pi


def frac_binomial(alpha: float, k: int) -> float:
    """Generalized binomial coefficient Gamma(1+a) / (Gamma(1+k) Gamma(1+a-k)).

    Poles of the denominator Gammas are absorbed by ``rgamma``, so for
    integer alpha >= 0 and k > alpha the result is exactly 0.0.
    """
    if k != int(k) or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    if k == 0:
        return 1.0
    return gamma(1.0 + alpha) * rgamma(1.0 + k) * rgamma(1.0 + alpha - k)
