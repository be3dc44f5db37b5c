"""Acceptance suite: one PASS/FAIL line per criterion (run with ``pytest -s`` to see them)."""
from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from thetasing import ratlinalg as la
from thetasing.chow import class_H, class_N0_hess, class_thetanull_hess, closed_form_H, modular_weights
from thetasing.pfaffian import SkewMatrix, pfaffian, rk4_equivalence_check
from thetasing.prym import (known_classes, multiplicity_J5, pullback_pi, slope, slope_certificate,
                            solve_prym_pushforward, taut_vX_class, testcurve_pairing, verify_anticlass)
from thetasing.samples import (G3_THETANULL_CHAR, G3_THETANULL_ENTRY, G3_THETANULL_START, random_characteristic,
                               random_point, random_tau)
from thetasing.singular import (SingCandidate, TwoTorsion, odd_two_torsion_points, product_singular_point,
                                thetanull_path, two_torsion_point, verify_singular)
from thetasing.theta import Characteristic, EvalConfig, heat_residual, parity_defect, theta_value

SYMBOLIC_BUDGET_S = 1.0
NUMERIC_BUDGET_S = 30.0
_numeric_elapsed: list[float] = []
LINES: list[str] = []


def _line(name, ok, detail):
    LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
    print(LINES[-1])


def _rank_g4_g5():
    ok = class_thetanull_hess(4)[2] == 272 and class_N0_hess(4)[2] == 816
    return ok, "theta_null^3 = 272 lambda1^2, N0^3 = 816 lambda1^2 at g=4"


def _closed_forms():
    ok = all(class_H(g)[2] == closed_form_H(g) for g in range(4, 13))
    h, t = class_H(5)[2], class_thetanull_hess(5)[2]
    ok = ok and h == 2511 and t == 1188 == 27 * 44 and h - t == 1323 == 27 * 49
    return ok, f"g=5: H={h}, theta_null^4={t}, H1={h - t}"


def _weights():
    w = modular_weights(4)
    ok = (w.weight_Ig, w.hessian_det_weight, w.complete_intersection_class) == (8, 34, 272)
    return ok, f"I4={w.weight_Ig}, det={w.hessian_det_weight}, product={w.complete_intersection_class}"


def _anticlass():
    cert = verify_anticlass(strict=False)
    res = cert.values["residual"]
    ok = cert.passed and res.coeffs == (0, 0, 20, 0) and cert.values["c_delta0pp"] == 4
    return ok, f"residual={res}"


def _pushforward():
    img = solve_prym_pushforward(strict=False).images
    d_ram = known_classes()["D_ram"].cls
    ok = (img["lambda"].coeffs == (486, -57) and img["delta0^ram"].coeffs == (1836, -228)
          and 3 * d_ram == img["delta0^ram"])
    return ok, f"P_*(lambda)={img['lambda']}, P_*(delta0^ram)={img['delta0^ram']}"


def _pencil():
    k = known_classes()
    with pytest.warns(Warning):
        u = pullback_pi()(k["GP_6_4"].cls)
    pairs = (testcurve_pairing(k["Qtilde"].cls), testcurve_pairing(pullback_pi().image("delta0")),
             testcurve_pairing(u))
    cert = slope_certificate(strict=False)
    v = cert.values
    ok = (pairs == (-2, 47, 0) and cert.passed and v["i"] == -4 and v["ii"] == Fraction(9, 2)
          and v["iv"] == Fraction(70, 9) and slope(k["N0prime_A5"].cls) == Fraction(54, 7))
    return ok, f"pairings={tuple(str(x) for x in pairs)}, steps=({v['i']}, {v['ii']}, {v['iv']}), slope={v['slope']}"


def _taut():
    cert = taut_vX_class(strict=False)
    c = cert.values["class"]
    ok = cert.passed and c.coeffs == (35, -5, -5, Fraction(-15, 2)) and c == 5 * known_classes()["Z"].cls
    return ok, f"class={c}"


def _multiplicity():
    m = multiplicity_J5()
    chain = (m.chi_C4, m.chi_W14, m.chi_C14, m.chi_W4, m.chi_theta_gen, m.nodes)
    ok = chain == (70, -20, -40, 90, 120, 10) and m.mult == 40 and m.delta0pp_coefficient == 20
    return ok, f"chain={chain}, mult={m.mult}, coefficient={m.delta0pp_coefficient}"


SYMBOLIC = [
    ("ag:g4-classes", _rank_g4_g5),
    ("ag:closed-forms-4..12", _closed_forms),
    ("ag:weights-g4", _weights),
    ("prym:anticlass", _anticlass),
    ("prym:pushforward", _pushforward),
    ("prym:pencil-and-slope", _pencil),
    ("prym:taut-vX", _taut),
    ("prym:multiplicity-J5", _multiplicity),
]


@pytest.mark.parametrize("name,check", SYMBOLIC, ids=[s[0] for s in SYMBOLIC])
def test_symbolic(name, check):
    t0 = time.perf_counter()
    ok, detail = check()
    dt = time.perf_counter() - t0
    ok = ok and dt < SYMBOLIC_BUDGET_S
    _line(name, ok, f"{detail}; {dt * 1e3:.1f} ms")
    assert ok


def _heat():
    rng = np.random.default_rng(101)
    cfg = EvalConfig(1e-10)
    worst = 0.0
    for g in (1, 2, 3):
        for _ in range(10):
            tau, z, ch = random_tau(g, rng), random_point(g, rng), random_characteristic(g, rng)
            j, k = sorted(int(x) for x in rng.integers(0, g, 2))
            worst = max(worst, heat_residual(tau, z, ch, j, k, 1e-4, cfg))
    return worst < 1e-6, f"max residual {worst:.2e}"


def _parity():
    rng = np.random.default_rng(202)
    cfg = EvalConfig(1e-12)
    worst = 0.0
    for i in range(100):
        g = 1 + i % 3
        worst = max(worst, parity_defect(random_tau(g, rng), random_point(g, rng), random_characteristic(g, rng), cfg))
    return worst < 2e-12, f"max defect {worst:.2e}"


def _products():
    rep2 = verify_singular(product_singular_point([[1j]], [[1j]], [(1 + 1j) / 2]))
    ok = rep2.value_norm < 1e-10 and rep2.grad_norm < 1e-10 and rep2.numeric_rank == 2
    rng = np.random.default_rng(303)
    ranks3 = []
    for _ in range(5):
        tau2 = random_tau(2, rng)
        rep3 = verify_singular(product_singular_point(random_tau(1, rng), tau2, odd_two_torsion_points(tau2)[0]))
        ranks3.append(rep3.numeric_rank)
    ok = ok and all(r <= 2 for r in ranks3)
    return ok, f"g=2 |theta|={rep2.value_norm:.1e} grad={rep2.grad_norm:.1e} rank={rep2.numeric_rank}; g=3 ranks={ranks3}"


def _thetanull():
    ch = Characteristic.parse(G3_THETANULL_CHAR)
    tau = thetanull_path(3, ch, G3_THETANULL_START, G3_THETANULL_ENTRY)
    const = abs(theta_value(tau, np.zeros(3), ch, EvalConfig(1e-14)))
    rep = verify_singular(SingCandidate(tau, two_torsion_point(tau, ch), TwoTorsion(ch)))
    ok = const < 1e-12 and rep.grad_norm < 1e-8 and rep.numeric_rank == 3
    return ok, f"theta constant {const:.1e}, gradient {rep.grad_norm:.1e}, rank {rep.numeric_rank}"


def _pfaffians():
    rng = random.Random(7)

    def rand_skew(n):
        return SkewMatrix.from_upper(n, {(a, b): Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                                         for a in range(n) for b in range(a + 1, n)})

    sq = all(pfaffian(m) ** 2 == la.det(m.entries) for m in (rand_skew((2, 4, 6, 8)[i % 4]) for i in range(100)))
    cong = True
    for i in range(50):
        n = (2, 4, 6)[i % 3]
        m = rand_skew(n)
        a = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        cong = cong and pfaffian(m.congruent(a)) == la.det(a) * pfaffian(m)
    rep = rk4_equivalence_check(200, 7)
    ok = sq and cong and rep.checked == 200 and not rep.counterexamples
    return ok, f"Pf^2=det x100 {sq}, congruence x50 {cong}, rk4 {rep.checked} with {len(rep.counterexamples)} counterexamples"


NUMERIC = [
    ("theta:heat", _heat),
    ("theta:parity", _parity),
    ("sing:products", _products),
    ("sing:thetanull-g3", _thetanull),
    ("pfaff:properties", _pfaffians),
]


@pytest.mark.parametrize("name,check", NUMERIC, ids=[s[0] for s in NUMERIC])
def test_numeric(name, check):
    t0 = time.perf_counter()
    ok, detail = check()
    _numeric_elapsed.append(time.perf_counter() - t0)
    _line(name, ok, detail)
    assert ok


def test_numeric_runtime_budget():
    total = sum(_numeric_elapsed)
    ok = len(_numeric_elapsed) == len(NUMERIC) and total < NUMERIC_BUDGET_S
    _line("runtime:numeric-total", ok, f"{total:.2f} s over {len(_numeric_elapsed)} checks")
    assert ok

