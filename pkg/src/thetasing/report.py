"""One-shot reproduction report: every certified constant as a PASS/FAIL row.

Claim ids are stable strings built from theorem labels, so a regression names
what it breaks. Rows are merged in claim-id order. Wall-clock timings are kept on
each entry but only written when asked for, so two runs with the same flags are
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import chow, prym
from .errors import ThetaSingError
from .pfaffian import SkewMatrix, pfaffian, rk4_equivalence_check
from .ratlinalg import det, format_fraction
from .samples import (G2_THETANULL_CHAR, G2_THETANULL_ENTRY, G2_THETANULL_START, G3_THETANULL_CHAR,
                      G3_THETANULL_ENTRY, G3_THETANULL_START, random_characteristic, random_point, random_tau)
from .singular import (SingCandidate, TwoTorsion, odd_two_torsion_points, product_singular_point, thetanull_path,
                       two_torsion_point, verify_singular)
from .theta import Characteristic, EvalConfig, PeriodMatrix, heat_residual, parity_defect, theta_value, truncation_radius

SECTIONS = ("theta", "sing", "pfaff", "ag", "prym")
FORMATS = ("json", "md", "csv")


@dataclass
class ReportEntry:
    claim_id: str
    citation: str
    expected: str
    computed: str
    status: str
    runtime_ms: int = 0

    def as_dict(self, timings: bool = False) -> dict:
        d = {"claim_id": self.claim_id, "citation": self.citation, "expected": self.expected,
             "computed": self.computed, "status": self.status}
        if timings:
            d["runtime_ms"] = self.runtime_ms
        return d


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction) or isinstance(v, int):
        return format_fraction(v)
    if isinstance(v, float):
        return f"{v:.3e}"
    if isinstance(v, (tuple, list)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


class _Collector:
    def __init__(self):
        self.entries: list[ReportEntry] = []

    def exact(self, claim_id, citation, expected, fn):
        """Row that passes when ``fn()`` equals ``expected`` exactly."""
        self._run(claim_id, citation, _fmt(expected), fn, lambda got: got == expected)

    def below(self, claim_id, citation, bound, fn):
        self._run(claim_id, citation, f"< {bound:.0e}", fn, lambda got: got < bound)

    def check(self, claim_id, citation, expected_text, fn, ok):
        self._run(claim_id, citation, expected_text, fn, ok)

    def _run(self, claim_id, citation, expected_text, fn, ok):
        start = time.perf_counter()
        try:
            got = fn()
            status = "PASS" if ok(got) else "FAIL"
            computed = _fmt(got)
        except ThetaSingError as exc:
            status, computed = "FAIL", f"{type(exc).__name__}: {str(exc).splitlines()[0]}"
        ms = int(round((time.perf_counter() - start) * 1000))
        self.entries.append(ReportEntry(claim_id, citation, expected_text, computed, status, ms))


def _theta_section(c: _Collector, seed: int):
    c.check("theta:radius:g1", "Gaussian tail bound, tau = i, tol 1e-12", "<= 6",
            lambda: truncation_radius(PeriodMatrix([[1j]]), [0], Characteristic.zero(1), 0, 1e-12),
            lambda r: r <= 6)
    exact = math.pi ** 0.25 / math.gamma(0.75)
    c.below("theta:value:g1", "theta(i, 0) against pi^(1/4)/Gamma(3/4)", 1e-12,
            lambda: abs(theta_value(PeriodMatrix([[1j]]), [0]) - exact))

    def heat(g):
        rng = np.random.default_rng([seed, g])
        worst = 0.0
        for _ in range(10):
            tau, z, ch = random_tau(g, rng), random_point(g, rng), random_characteristic(g, rng)
            j, k = sorted(int(x) for x in rng.integers(0, g, 2))
            worst = max(worst, heat_residual(tau, z, ch, j, k, 1e-4, EvalConfig(1e-10)))
        return worst

    for g in (1, 2, 3):
        c.below(f"theta:heat:g{g}", "heat equation, 10 random points, h = 1e-4", 1e-6, lambda g=g: heat(g))

    def parity():
        rng = np.random.default_rng([seed, 100])
        worst = 0.0
        for _ in range(100):
            g = int(rng.integers(1, 4))
            worst = max(worst, parity_defect(random_tau(g, rng), random_point(g, rng), random_characteristic(g, rng),
                                             EvalConfig(1e-12)))
        return worst

    c.below("theta:parity", "theta(-z) = (-1)^(eps.delta) theta(z), 100 samples", 2e-12, parity)


def _sing_section(c: _Collector, seed: int):
    cfg = EvalConfig(1e-12)
    g2 = verify_singular(product_singular_point([[1j]], [[1j]], [(1 + 1j) / 2], cfg), cfg)
    c.below("sing:product:g2:value", "product E x E, value at the singular point", 1e-10, lambda: g2.value_norm)
    c.below("sing:product:g2:grad", "product E x E, gradient at the singular point", 1e-10, lambda: g2.grad_norm)
    c.exact("sing:product:g2:rank", "products in genus 2 are ordinary double points", 2, lambda: g2.numeric_rank)

    def g3_rank():
        tau2 = thetanull_path(2, Characteristic.parse(G2_THETANULL_CHAR), G2_THETANULL_START, G2_THETANULL_ENTRY,
                              seed=seed)
        z2 = two_torsion_point(tau2, Characteristic.parse(G2_THETANULL_CHAR))
        return verify_singular(product_singular_point([[1j]], tau2, z2, cfg), cfg).numeric_rank

    c.check("sing:product:g3:rank", "S_dec inside H: E x (theta-null point)", "<= 2", g3_rank, lambda r: r <= 2)

    def g3_odd_ranks():
        return tuple(verify_singular(product_singular_point([[1j]], G2_THETANULL_START, z2, cfg), cfg).numeric_rank
                     for z2 in odd_two_torsion_points(G2_THETANULL_START))

    c.check("sing:product:g3:odd-ranks", "S_dec inside H: E x (odd two-torsion points)", "all <= 2",
            g3_odd_ranks, lambda rs: all(r <= 2 for r in rs))

    for g, start, char, entry in ((2, G2_THETANULL_START, G2_THETANULL_CHAR, G2_THETANULL_ENTRY),
                                  (3, G3_THETANULL_START, G3_THETANULL_CHAR, G3_THETANULL_ENTRY)):
        ch = Characteristic.parse(char)
        cache: dict = {}

        def path_end(g=g, ch=ch, start=start, entry=entry, cache=cache):
            # a failing path raises inside each row, so every row reports FAIL
            if "tau" not in cache:
                tau = thetanull_path(g, ch, start, entry, seed=seed)
                cache["tau"] = tau
                cache["rep"] = verify_singular(SingCandidate(tau, two_torsion_point(tau, ch), TwoTorsion(ch)), cfg)
            return cache["tau"], cache["rep"]

        c.below(f"sing:thetanull:g{g}:constant", f"theta constant [{char}] on the path end", 1e-12,
                lambda g=g, ch=ch, f=path_end: abs(theta_value(f()[0], np.zeros(g), ch, EvalConfig(1e-14))))
        c.below(f"sing:thetanull:g{g}:grad", "gradient at the even two-torsion point", 1e-8,
                lambda f=path_end: f()[1].grad_norm)
        c.exact(f"sing:thetanull:g{g}:rank", "generic theta-null point is an ordinary double point", g,
                lambda f=path_end: f()[1].numeric_rank)


def _pfaff_section(c: _Collector, seed: int):
    c.exact("rk4sing:J4", "Pfaffian of the standard symplectic form", Fraction(1),
            lambda: pfaffian(SkewMatrix.from_upper(4, {(0, 1): 1, (2, 3): 1})))

    def pf_det():
        import random

        rng = random.Random(seed)
        bad = 0
        for i in range(100):
            n = (2, 4, 6, 8)[i % 4]
            m = SkewMatrix.from_upper(n, {(a, b): Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                                          for a in range(n) for b in range(a + 1, n)})
            bad += pfaffian(m) ** 2 != det(m.entries)
        return bad

    c.exact("rk4sing:pf2det", "Pf^2 = det on 100 random skew matrices", 0, pf_det)
    c.exact("rk4sing:equivalence", "rank Q <= 4 iff P(Ker mu) meets G(2,4), 200 instances", 0,
            lambda: len(rk4_equivalence_check(200, seed).counterexamples))


def _ag_section(c: _Collector, seed: int):
    for g in (4, 5):
        c.exact(f"propdoi:g={g}:[theta_null^{g - 1}]", "class of theta_null^{g-1}",
                {4: Fraction(272), 5: Fraction(1188)}[g], lambda g=g: chow.class_thetanull_hess(g)[2])
        c.exact(f"propunu:g={g}:[N0^{g - 1}]", "class of N0^{g-1}", {4: Fraction(816), 5: Fraction(6210)}[g],
                lambda g=g: chow.class_N0_hess(g)[2])
        c.exact(f"thm:class:g={g}:[H]", "class of H", {4: Fraction(272), 5: Fraction(2511)}[g],
                lambda g=g: chow.class_H(g)[2])
    c.exact("thm:class:g=5:[H1]", "[H] - [theta_null^4] = 27*49", Fraction(27 * 49),
            lambda: chow.class_H(5)[2] - chow.class_thetanull_hess(5)[2])
    c.exact("thm:class:closed-form:4..12", "pipeline equals the closed form for 4 <= g <= 12", True,
            lambda: all(chow.class_H(g)[2] == chow.closed_form_H(g) for g in range(4, 13)))
    c.exact("weights:g=4:I4", "Schottky form weight", Fraction(8), lambda: chow.modular_weights(4).weight_Ig)
    c.exact("weights:g=4:detD", "weight of det D(I_4)", Fraction(34), lambda: chow.modular_weights(4).hessian_det_weight)
    c.exact("weights:g=4:complete-intersection", "class of {I_4 = det D(I_4) = 0}", Fraction(272),
            lambda: chow.modular_weights(4).complete_intersection_class)
    c.exact("weights:g=5:I5", "lambda-part of [N0'] in genus 5", Fraction(108), lambda: chow.modular_weights(5).weight_Ig)
    c.exact("weights:g=5:F5", "weight of F_5", Fraction(264), lambda: chow.modular_weights(5).weight_Fg)


def _prym_section(c: _Collector, seed: int):
    anti = prym.verify_anticlass(strict=False)
    c.exact("anticlass:residual", anti.citation, (Fraction(0), Fraction(0), Fraction(20), Fraction(0)),
            lambda: anti.values["residual"].coeffs)
    c.exact("qclcom:c_delta0pp", "delta0'' coefficient of Q~", Fraction(4), lambda: anti.values["c_delta0pp"])

    push = prym.solve_prym_pushforward(strict=False)
    c.exact("class2:P_*(lambda)", push.certificate.citation, (Fraction(486), Fraction(-57)),
            lambda: push.images["lambda"].coeffs)
    c.exact("class2:P_*(delta0^ram)", push.certificate.citation, (Fraction(1836), Fraction(-228)),
            lambda: push.images["delta0^ram"].coeffs)
    c.exact("rampryms:3D_ram", "3 [D_ram] = P_*(delta0^ram)", True,
            lambda: 3 * prym.known_classes()["D_ram"].cls == push.images["delta0^ram"])

    known = prym.known_classes()
    c.exact("pencil1:R.Qtilde", "pairing with the pencil R", Fraction(-2),
            lambda: prym.testcurve_pairing(known["Qtilde"].cls))
    c.exact("pencil1:R.pi*delta0", "pairing with the pencil R", Fraction(47),
            lambda: prym.testcurve_pairing(prym.pullback_pi().image("delta0")))
    c.exact("pencil1:R.U", "pairing with the pencil R", Fraction(0),
            lambda: prym.testcurve_pairing(prym._pi_silent(known["GP_6_4"].cls)))

    cert = prym.slope_certificate(strict=False)
    c.exact("slopea5:step-i", cert.citation, Fraction(-4), lambda: cert.values["i"])
    c.exact("slopea5:step-ii", cert.citation, Fraction(9, 2), lambda: cert.values["ii"])
    c.exact("slopea5:step-iii", cert.citation, True, lambda: cert.values["iii"])
    c.exact("move:bound", "moving slope lower bound", Fraction(70, 9), lambda: cert.values["iv"])
    c.exact("slopea5:slope N0'", "slope of N0'", Fraction(54, 7), lambda: cert.values["slope"])

    taut = prym.taut_vX_class(strict=False)
    c.exact("qparametrisierung:5[Z]", taut.citation, (Fraction(35), Fraction(-5), Fraction(-5), Fraction(-15, 2)),
            lambda: taut.values["class"].coeffs)

    m = prym.multiplicity_J5()
    c.exact("anticlass:multiplicity-chain", "chi(C4), chi(W14), chi(C14), chi(W4), chi(theta), nodes",
            (70, -20, -40, 90, 120, 10),
            lambda: (m.chi_C4, m.chi_W14, m.chi_C14, m.chi_W4, m.chi_theta_gen, m.nodes))
    c.exact("anticlass:mult-J5", "multiplicity of N0 along J5", 40, lambda: m.mult)
    c.exact("anticlass:delta0pp-coefficient", "Delta0'' coefficient of P^*(N0')", Fraction(20),
            lambda: m.delta0pp_coefficient)


_RUNNERS = {"theta": _theta_section, "sing": _sing_section, "pfaff": _pfaff_section,
            "ag": _ag_section, "prym": _prym_section}


def collect(sections, seed: int = 7) -> list[ReportEntry]:
    unknown = set(sections) - set(SECTIONS)
    if unknown:
        raise ValueError(f"unknown sections: {sorted(unknown)}")
    c = _Collector()
    for name in SECTIONS:
        if name in sections:
            _RUNNERS[name](c, seed)
    return sorted(c.entries, key=lambda e: e.claim_id)


def render(entries: list[ReportEntry], fmt: str = "md", timings: bool = False) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    rows = [e.as_dict(timings) for e in entries]
    fields = ["claim_id", "citation", "expected", "computed", "status"] + (["runtime_ms"] if timings else [])
    if fmt == "json":
        summary = {"total": len(rows), "failed": sum(r["status"] == "FAIL" for r in rows)}
        return json.dumps({"entries": rows, "summary": summary}, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(fields) + " |", "|" + "---|" * len(fields)]
    for r in rows:
        lines.append("| " + " | ".join(str(r[f]).replace("|", "\\|") for f in fields) + " |")
    return "\n".join(lines) + "\n"


def run_report(sections, fmt: str = "md", seed: int = 7, out=None, timings: bool = False) -> tuple[str, int]:
    """Run the chosen sections, write the document to ``out`` if given; return (document, exit code)."""
    entries = collect(sections, seed)
    doc = render(entries, fmt, timings)
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    code = 1 if any(e.status == "FAIL" for e in entries) else 0
    return doc, code
