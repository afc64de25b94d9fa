"""Four-parameter fit of the level formula to particle records.

The reported figure of merit is the relative r.m.s. error in percent
(:func:`objective`).  The minimized loss, however, is the r.m.s. residual
in MeV: on this dataset the two have global minima in very different
places, and only the MeV loss recovers the reference parameter region
(alpha near 0.112); the percent objective drifts along an extremely flat
valley to alpha near 0.13-0.14 while degrading the absolute residuals.

The default record selection is the baryon band L = 3..9 without the two
lightweight outlier rows (Sigma0 and Xi0, whose level spacing no
four-parameter set can reproduce); the published 0.84% r.m.s. figure is
recovered on exactly this selection.  Every ingredient of the selection
is configurable.

Minimization is multi-start Nelder-Mead over the box
alpha in (0.01, 1], m0 in [-30000, 0], a0, b0 in [0, 30000], with starts
drawn deterministically from the seed, followed by a deterministic
profile polish (the model is linear in m0, a0, b0 for fixed alpha, so
the linear part is solved exactly while alpha is refined in 1-D).
Results are bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import specfun
from .dataset import ParticleRecord
from .spectrum import FitParams, Multiplet, mass, spectrum

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_EXCLUDE",
    "FitConfig",
    "FitError",
    "PerParticle",
    "FitResult",
    "select_records",
    "objective",
    "loss_rms_mev",
    "fit",
    "predict",
]

DEFAULT_SEED = 1729
#: outlier rows excluded from the default fit selection
DEFAULT_EXCLUDE = ("Sigma0", "Xi0")

_PARAM_SCALE = np.array([1.0, 1e4, 1e4, 1e4])
_START_LO = np.array([0.01, -30000.0, 0.0, 0.0])
_START_HI = np.array([1.0, 0.0, 30000.0, 30000.0])


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class FitConfig:
    include_groups: tuple[str, ...] = ("baryon",)
    l_range: tuple[int, int] | None = (3, 9)
    exclude_names: tuple[str, ...] = DEFAULT_EXCLUDE
    starts: int = 32
    seed: int = DEFAULT_SEED
    max_evals: int = 2500
    tol: float = 1e-8

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")


@dataclass(frozen=True)
class PerParticle:
    name: str
    e_exp: float
    e_th: float
    de_percent: float


@dataclass(frozen=True)
class FitResult:
    params: FitParams
    rms_percent: float
    per_particle: tuple[PerParticle, ...]
    evals: int
    converged: bool
    loss_rms_mev: float


def select_records(
    records: Iterable[ParticleRecord], cfg: FitConfig
) -> list[ParticleRecord]:
    """Apply the configured group/L/name filters, preserving order."""
    out = []
    for r in records:
        if r.group not in cfg.include_groups:
            continue
        if cfg.l_range is not None and not cfg.l_range[0] <= r.L <= cfg.l_range[1]:
            continue
        if r.name in cfg.exclude_names:
            continue
        out.append(r)
    return out


# ----------------------------------------------------------------------
# vectorized gamma kernels (same Lanczos tables as specfun; the scalar
# module stays the reference implementation, these only speed up the
# optimizer's inner loop over record arrays)
# ----------------------------------------------------------------------

_LG = specfun._LANCZOS_G
_LC = np.asarray(specfun._LANCZOS_COEFFS)


def _sinpi_vec(x: np.ndarray) -> np.ndarray:
    r = np.fmod(x, 2.0)
    r = np.where(r > 1.0, r - 2.0, r)
    r = np.where(r < -1.0, r + 2.0, r)
    r = np.where(r > 0.5, 1.0 - r, r)
    r = np.where(r < -0.5, -1.0 - r, r)
    return np.sin(np.pi * r)


def _lanczos_vec(x: np.ndarray) -> np.ndarray:
    # valid for x >= 0.5
    z = x - 1.0
    s = np.full_like(z, _LC[0])
    for i in range(1, len(_LC)):
        s = s + _LC[i] / (z + i)
    t = z + _LG + 0.5
    return np.sqrt(2.0 * np.pi) * t ** (z + 0.5) * np.exp(-t) * s


def _gamma_vec(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    small = x < 0.5
    safe = np.where(small, 1.0 - x, x)
    g = _lanczos_vec(safe)
    if np.any(small):
        with np.errstate(divide="ignore"):
            refl = np.pi / (_sinpi_vec(x) * g)
        return np.where(small, refl, g)
    return g


def _rgamma_vec(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    pole = (x <= 0.0) & (x == np.floor(x))
    small = x < 0.5
    safe = np.where(small, 1.0 - x, np.where(pole, 1.0, x))
    g = _lanczos_vec(safe)
    out = np.where(small, _sinpi_vec(x) * g / np.pi, 1.0 / g)
    return np.where(pole, 0.0, out)


class _Problem:
    """Record arrays plus fast loss/objective evaluation."""

    def __init__(self, records: Sequence[ParticleRecord]):
        self.records = list(records)
        self.L = np.array([r.L for r in self.records], dtype=float)
        self.M = np.array([abs(r.M) for r in self.records], dtype=float)
        self.e_exp = np.array([r.mass_mev for r in self.records], dtype=float)
        self.evals = 0

    def design(self, alpha: float) -> np.ndarray:
        c_l2 = _gamma_vec(1.0 + (self.L + 1.0) * alpha) * _rgamma_vec(
            1.0 + (self.L - 1.0) * alpha
        )
        c_lz = _gamma_vec(1.0 + self.M * alpha) * _rgamma_vec(
            1.0 + (self.M - 1.0) * alpha
        )
        return np.column_stack([np.ones_like(c_l2), c_l2, c_lz])

    def masses(self, p: np.ndarray) -> np.ndarray:
        return self.design(p[0]) @ p[1:]

    def loss(self, p: np.ndarray) -> float:
        # the level formula is used on alpha in (0, 1]; outside that band
        # the point is rejected rather than evaluated
        self.evals += 1
        alpha = p[0]
        if not (1e-4 < alpha <= 1.0) or not np.all(np.isfinite(p)):
            return math.inf
        res = self.masses(p) - self.e_exp
        return float(np.sqrt(np.mean(res * res)))

    def profile_loss(self, alpha: float) -> tuple[float, np.ndarray]:
        """Exact linear solve for (m0, a0, b0) at fixed alpha."""
        self.evals += 1
        A = self.design(alpha)
        coef, *_ = np.linalg.lstsq(A, self.e_exp, rcond=None)
        res = A @ coef - self.e_exp
        return float(np.sqrt(np.mean(res * res))), coef


def loss_rms_mev(p: FitParams, records: Sequence[ParticleRecord]) -> float:
    """Root-mean-square residual in MeV (the minimized loss)."""
    if not records:
        raise ValueError("no records")
    res = [mass(p, Multiplet(r.L, r.M)) - r.mass_mev for r in records]
    return math.sqrt(math.fsum(v * v for v in res) / len(res))


def objective(p: FitParams, records: Sequence[ParticleRecord]) -> float:
    """Relative r.m.s. error in percent (the reported figure of merit)."""
    if not records:
        raise ValueError("no records")
    res = [
        100.0 * (mass(p, Multiplet(r.L, r.M)) - r.mass_mev) / r.mass_mev
        for r in records
    ]
    return math.sqrt(math.fsum(v * v for v in res) / len(res))


def _per_particle(p: FitParams, records: Sequence[ParticleRecord]) -> tuple[PerParticle, ...]:
    rows = []
    for r in records:
        e_th = mass(p, Multiplet(r.L, r.M))
        rows.append(
            PerParticle(r.name, r.mass_mev, e_th, 100.0 * (e_th - r.mass_mev) / r.mass_mev)
        )
    return tuple(rows)


def fit(records: Sequence[ParticleRecord], cfg: FitConfig = FitConfig()) -> FitResult:
    """Fit the four level-formula parameters to the given records.

    ``records`` is the already-selected fit set (apply
    :func:`select_records` first when starting from a full table).
    Deterministic for a fixed config.

    Raises:
        FitError: fewer than 5 records, or no start converged.
    """
    records = list(records)
    if len(records) < 5:
        raise FitError(f"need at least 5 records to fit 4 parameters, got {len(records)}")
    prob = _Problem(records)

    rng = np.random.default_rng(cfg.seed)
    starts = rng.uniform(_START_LO, _START_HI, size=(cfg.starts, 4))

    best: tuple[float, int, np.ndarray] | None = None
    any_converged = False
    for idx in range(cfg.starts):
        res = minimize(
            lambda u: prob.loss(u * _PARAM_SCALE),
            starts[idx] / _PARAM_SCALE,
            method="Nelder-Mead",
            options={
                "maxfev": cfg.max_evals,
                "xatol": cfg.tol,
                "fatol": cfg.tol,
                "adaptive": True,
            },
        )
        any_converged = any_converged or bool(res.success)
        cand = (float(res.fun), idx, res.x * _PARAM_SCALE)
        if best is None or (cand[0], cand[1]) < (best[0], best[1]):
            best = cand
    if not any_converged:
        raise FitError(
            f"no start converged within {cfg.max_evals} evaluations (tol {cfg.tol})"
        )

    # profile polish: alpha in 1-D with the linear part solved exactly
    assert best is not None
    grid = np.linspace(0.01, 1.0, 199)
    prof = [prob.profile_loss(a)[0] for a in grid]
    a0 = float(grid[int(np.argmin(prof))])
    bracket_lo = max(0.01, a0 - 0.01)
    bracket_hi = min(1.0, a0 + 0.01)
    scal = minimize_scalar(
        lambda a: prob.profile_loss(float(a))[0],
        bounds=(bracket_lo, bracket_hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    a_star = float(scal.x)
    loss_star, coef = prob.profile_loss(a_star)
    if loss_star <= best[0]:
        p_vec = np.array([a_star, coef[0], coef[1], coef[2]])
    else:
        p_vec = best[2]

    params = FitParams(float(p_vec[0]), float(p_vec[1]), float(p_vec[2]), float(p_vec[3]))
    return FitResult(
        params=params,
        rms_percent=objective(params, records),
        per_particle=_per_particle(params, records),
        evals=prob.evals,
        converged=any_converged,
        loss_rms_mev=loss_rms_mev(params, records),
    )


def predict(p: FitParams, mults: Sequence[Multiplet]) -> list[tuple[Multiplet, float]]:
    """Level predictions for arbitrary multiplets (e.g. the meson band)."""
    return spectrum(p, mults)
