"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criterion 1 (forward reproduction of all 53 published theoretical masses
from the rounded reference parameters) is known not to hold for the three
L > 10 rows: the published values there imply alpha ~ 0.11206, and with
the rounded alpha = 0.112 they sit 2.5-4.3 MeV off, far outside the
0.05 MeV print-rounding budget.  The criterion is asserted as stated and
fails honestly on those rows; the other 50 pass.
"""

import json
import time

import numpy as np

from fraczee.cli import main as cli_main
from fraczee.dataset import builtin_table
from fraczee.monomial import PolyExpr, term
from fraczee.operators import (
    build_H,
    build_Jz,
    build_Kz,
    build_Sz,
    check_connection_reduction,
    check_constant_field,
    check_curl_coefficient,
    check_kkk,
    commutator,
    curl_frac,
    gauge_field_A,
    verify_J_algebra,
)
from fraczee.rlquad import rl_derivative_quad
from fraczee.specfun import gamma, rgamma
from fraczee.spectrum import REFERENCE_PARAMS, Multiplet, mass

from oracles import spouge_gamma
from reference_values import E_TH, MESONS


def _line(num, label, ok, detail=""):
    print(f"ACCEPTANCE {num} ({label}): {'PASS' if ok else 'FAIL'}"
          + (f" - {detail}" if detail else ""))


def _mono(**exps):
    return PolyExpr.from_terms([term(1.0, **exps)])


def test_criterion_1_table_forward_reproduction():
    t0 = time.perf_counter()
    computed = {
        r.name: mass(REFERENCE_PARAMS, Multiplet(r.L, r.M)) for r in builtin_table()
    }
    elapsed = time.perf_counter() - t0
    bad = {
        name: computed[name] - E_TH[name]
        for name in computed
        if abs(computed[name] - E_TH[name]) > 0.05
    }
    ok = not bad and elapsed < 1.0
    detail = f"{53 - len(bad)}/53 rows within 0.05 MeV in {elapsed:.3f}s"
    if bad:
        detail += "; off: " + ", ".join(
            f"{n} ({d:+.2f} MeV)" for n, d in sorted(bad.items())
        )
    _line(1, "table forward reproduction", ok, detail)
    assert elapsed < 1.0
    assert not bad, (
        "published values for the three L > 10 rows encode an unrounded "
        f"alpha (~0.11206) and cannot follow from alpha = 0.112: {bad}"
    )


def test_criterion_2_fit_reproduction(default_fit):
    cfg, selected, result, elapsed = default_fit
    p = result.params
    shifts = [abs(row.e_th - E_TH[row.name]) for row in result.per_particle]
    ok_rms = result.rms_percent <= 0.9
    ok_alpha = 0.102 <= p.alpha <= 0.122
    ok_mass = max(shifts) <= 5.0
    ok_time = elapsed < 60.0
    ok = ok_rms and ok_alpha and ok_mass and ok_time
    _line(
        2,
        "fit reproduction",
        ok,
        f"rms={result.rms_percent:.4f}% alpha={p.alpha:.5f} "
        f"max|dE_th|={max(shifts):.2f} MeV t={elapsed:.1f}s n={len(selected)}",
    )
    assert ok_rms and ok_alpha and ok_mass and ok_time


def test_criterion_3_meson_predictions():
    devs = {
        r.name: mass(REFERENCE_PARAMS, Multiplet(r.L, r.M)) - E_TH[r.name]
        for r in builtin_table()
        if r.name in MESONS
    }
    worst = max(abs(v) for v in devs.values())
    ok = len(devs) == 5 and worst <= 0.05
    _line(3, "meson prediction rows", ok, f"worst |dev| = {worst:.3f} MeV")
    assert ok


def test_criterion_4_quadrature_vs_closed_form():
    worst = 0.0
    for nu in (0.0, 0.5, 1.0, 2.3):
        for alpha in (0.112, 0.3, 0.5, 0.9):
            for x in (0.5, 1.0, 2.0):
                got = rl_derivative_quad(lambda s, nu=nu: s**nu, alpha, x, 64)
                want = gamma(1 + nu) / gamma(1 + nu - alpha) * x ** (nu - alpha)
                worst = max(worst, abs(got - want) / abs(want))
    ok = worst <= 1e-6
    _line(4, "quadrature vs power rule", ok, f"worst rel err = {worst:.2e}")
    assert ok


def test_criterion_5_operator_identities():
    alphas = (0.3, 0.5, 0.75, 0.9)
    rng = np.random.default_rng(2024)
    monos = [
        _mono(x=int(e[0]), y=int(e[1]), z=int(e[2]))
        for e in rng.integers(2, 7, size=(50, 3))
    ]
    worst_a = max(
        commutator(build_Jz(a), build_H(a), f).max_abs_coeff()
        for a in alphas
        for f in monos
    )
    ok_a = worst_a < 1e-10

    f0 = _mono(x=3, y=3, z=3)
    worst_b = min(
        commutator(build_Kz(1.0), build_H(a), f0).max_abs_coeff() for a in alphas
    )
    ok_b = worst_b > 1e-6

    ok_c = all(
        check_kkk(a, b, f0).passed for a in alphas for b in (0.3, 1.0, 2 * a - 1)
    )
    ok_d = all(verify_J_algebra(a, f0).passed for a in alphas)
    ok_e = build_Sz(1.0).is_zero()

    ok = ok_a and ok_b and ok_c and ok_d and ok_e
    _line(
        5,
        "operator identity suite",
        ok,
        f"(a) [Jz,H] worst={worst_a:.2e} (b) [Lz,H] min={worst_b:.2e} "
        f"(c) kkk={ok_c} (d) J-algebra={ok_d} (e) Sz(1)=0: {ok_e}",
    )
    assert ok_a and ok_b and ok_c and ok_d and ok_e


def test_criterion_6_gauge_field_suite():
    coeff_ok = all(check_curl_coefficient(1.0, a).passed for a in (0.112, 0.5, 0.9))
    constant_ok = True
    for a in (0.112, 0.5, 0.9):
        _, _, bz = curl_frac(gauge_field_A(1.0, a))
        constant_ok = constant_ok and check_constant_field(bz, a).passed
    reduction_ok = all(
        check_connection_reduction(1.0, a, K_max=5).passed for a in (0.112, 0.5, 0.9)
    )
    ok = coeff_ok and constant_ok and reduction_ok
    _line(
        6,
        "gauge-field suite",
        ok,
        f"curl coeff={coeff_ok} constancy={constant_ok} connection={reduction_ok}",
    )
    assert ok


def test_criterion_7_special_functions():
    rng = np.random.default_rng(777)
    worst = 0.0
    for x in rng.uniform(0.1, 40.0, size=1000):
        x = float(x)
        want = spouge_gamma(x)
        worst = max(worst, abs((gamma(x) - want) / want))
    poles_ok = all(rgamma(float(-n)) == 0.0 for n in range(0, 21))
    ok = worst <= 1e-12 and poles_ok
    _line(7, "special functions", ok,
          f"worst rel err vs 40-digit oracle = {float(worst):.2e}; rgamma poles exact: {poles_ok}")
    assert ok


def test_criterion_8_fit_determinism(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert cli_main(["fit", "--seed", "42", "--out", str(out1)]) == 0
    assert cli_main(["fit", "--seed", "42", "--out", str(out2)]) == 0
    capsys.readouterr()
    identical = out1.read_bytes() == out2.read_bytes()
    _line(8, "fit determinism", identical, f"{out1.stat().st_size} bytes each")
    assert identical
    doc = json.loads(out1.read_text())
    assert set(doc) == {"params", "rms_percent", "per_particle", "evals", "converged"}
