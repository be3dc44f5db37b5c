from __future__ import annotations

import warnings
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetasing import prym
from thetasing.errors import CertificateFailure, DimensionMismatch, NonEffectiveShape
from thetasing.prym import (A5BAR, G26TAUT, M6BAR, R6TILDE, R_PENCIL, DivisorClass, PicBasis, RestrictionWarning,
                            castelnuovo_count, chi_symmetric_product, known_classes, multiplicity_J5, pullback_P,
                            pullback_pi, slope, slope_certificate, solve_prym_pushforward, taut_vX_class,
                            verify_anticlass)
from thetasing.prym import testcurve_pairing as pair_with

K = {name: kc.cls for name, kc in known_classes().items()}
coeffs = st.fractions(min_value=-50, max_value=50, max_denominator=8)


class TestBases:
    def test_labels(self):
        assert R6TILDE.symbols == ("lambda", "delta0'", "delta0''", "delta0^ram")
        assert G26TAUT.dim == 7 and M6BAR.dim == 5 and A5BAR.dim == 2

    def test_unique_labels(self):
        with pytest.raises(ValueError):
            PicBasis("bad", ("x", "x"))

    def test_length_checked(self):
        with pytest.raises(DimensionMismatch):
            DivisorClass(A5BAR, (1, 2, 3))

    def test_mixing_bases(self):
        with pytest.raises(DimensionMismatch):
            K["N0prime_A5"] + K["Qtilde"]


class TestKnown:
    def test_values(self):
        assert K["N0prime_A5"].coeffs == (108, -14)
        assert K["Qtilde"].coeffs == (7, -1, -4, Fraction(-3, 2))
        assert K["GP_6_4"].coeffs == (94, -12, -50, -78, -88)
        assert K["GP_6_5"].coeffs == tuple(8 * x for x in (65, -8, -31, -45, -49))
        assert K["D_ram"].coeffs == (612, -76)

    def test_citations_present(self):
        assert all(kc.citation for kc in known_classes().values())


class TestPullbacks:
    def test_pi(self):
        pi = pullback_pi()
        assert pi.image("delta0").coeffs == (0, 1, 1, 2)
        assert pi.image("lambda").coeffs == (1, 0, 0, 0)

    def test_pi_gp64_warns(self):
        with pytest.warns(RestrictionWarning):
            u = pullback_pi()(K["GP_6_4"])
        assert u.coeffs == (94, -12, -12, -24)

    def test_pi_quiet_on_interior_classes(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            pullback_pi()(DivisorClass(M6BAR, (3, 1, 0, 0, 0)))

    def test_P(self):
        P = pullback_P()
        assert P.image("lambda1").coeffs == (1, 0, 0, Fraction(-1, 4))
        assert P.image("D").coeffs == (0, 1, 0, 0)
        assert P(K["N0prime_A5"]).coeffs == (108, -14, 0, -27)

    def test_wrong_basis(self):
        with pytest.raises(DimensionMismatch):
            pullback_P()(K["Qtilde"])


@given(st.lists(coeffs, min_size=2, max_size=2), st.lists(coeffs, min_size=2, max_size=2), coeffs)
def test_pullback_linear(u, v, a):
    P = pullback_P()
    x, y = DivisorClass(A5BAR, u), DivisorClass(A5BAR, v)
    assert P(x + a * y) == P(x) + a * P(y)


class TestAnticlass:
    def test_residual(self):
        cert = verify_anticlass()
        assert cert.passed
        assert cert.values["residual"].coeffs == (0, 0, 20, 0)
        assert cert.values["c_delta0pp"] == 4
        assert any("residual" in line for line in cert.trace)

    def test_identity_componentwise(self):
        lhs = pullback_P()(K["N0prime_A5"])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rhs = 2 * K["Qtilde"] + pullback_pi()(K["GP_6_4"]) + DivisorClass.of(R6TILDE, delta0pp=20)
        assert lhs == rhs
        assert (108, -14, -27) == (14 + 94, -2 - 12, -3 - 24)

    def test_negative_control(self):
        with pytest.raises(CertificateFailure) as info:
            verify_anticlass(DivisorClass.zero(A5BAR))
        assert info.value.residual is not None

    def test_non_strict_reports(self):
        assert not verify_anticlass(DivisorClass.zero(A5BAR), strict=False).passed


class TestPushforward:
    def test_values(self):
        sol = solve_prym_pushforward()
        assert sol.images["lambda"].coeffs == (486, -57)
        assert sol.images["delta0^ram"].coeffs == (1836, -228)
        assert sol.images["delta0'"].coeffs == (0, 27)
        assert sol.images["delta0''"].coeffs == (0, 0)

    def test_round_trip_is_degree(self):
        sol = solve_prym_pushforward()
        push = prym.LinearMap("P_*", R6TILDE, A5BAR, tuple(sol.images[s].coeffs for s in R6TILDE.symbols))
        for s in A5BAR.symbols:
            assert push(pullback_P().image(s)) == 27 * DivisorClass.unit(A5BAR, s)

    def test_ramification_consistency(self):
        assert 3 * K["D_ram"] == solve_prym_pushforward().images["delta0^ram"]

    def test_solution_against_numpy(self):
        # independent float solve of the same 2x2 system
        a = np.array([[1, -0.25], [7, -1.5]])
        b = np.array([[27, 0], [6 * 108 + 0, 6 * -14 + 27]])
        x = np.linalg.solve(a, b)
        assert np.allclose(x, [[486, -57], [1836, -228]])


class TestSlope:
    def test_values(self):
        assert slope(K["N0prime_A5"]) == Fraction(54, 7)
        assert slope(K["D_ram"]) == Fraction(153, 19)
        assert slope(DivisorClass(A5BAR, (6, -1))) == 6

    def test_non_effective_shape(self):
        with pytest.warns(NonEffectiveShape):
            assert slope(DivisorClass(A5BAR, (3, 1))) == -3
        with pytest.warns(NonEffectiveShape):
            assert slope(DivisorClass(A5BAR, (3, 0))) == float("inf")
        with pytest.raises(NonEffectiveShape):
            slope(DivisorClass(A5BAR, (3, 1)), strict=True)


class TestPencil:
    def test_pairings(self):
        assert pair_with(K["Qtilde"]) == -2 == 42 - 35 - 9
        assert pair_with(pullback_pi().image("delta0")) == 47
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert pair_with(pullback_pi()(K["GP_6_4"])) == 0 == 94 * 6 - 12 * 47
        assert pair_with(pullback_P().image("lambda1")) == Fraction(9, 2)

    def test_certificate(self):
        cert = slope_certificate()
        assert cert.passed
        assert cert.values["i"] == -4 and cert.values["ii"] == Fraction(9, 2)
        assert cert.values["iii"] is True and cert.values["iv"] == Fraction(70, 9)
        assert cert.values["slope"] == Fraction(54, 7)

    def test_negative_control(self):
        bad = R_PENCIL.with_value("delta0'", 34)
        with pytest.raises(CertificateFailure):
            slope_certificate(bad)
        assert not slope_certificate(bad, strict=False).passed


@given(st.lists(coeffs, min_size=4, max_size=4), st.lists(coeffs, min_size=4, max_size=4), coeffs)
def test_pairing_linear(u, v, a):
    x, y = DivisorClass(R6TILDE, u), DivisorClass(R6TILDE, v)
    assert pair_with(x + a * y) == pair_with(x) + a * pair_with(y)


class TestTautological:
    def test_class(self):
        cert = taut_vX_class()
        assert cert.passed
        assert cert.values["class"].coeffs == (35, -5, -5, Fraction(-15, 2))
        assert cert.values["class"] == 5 * K["Z"]
        assert cert.values["integrand"] == DivisorClass.of(G26TAUT, **{"lambda": -1, "a": 1, "c1V": -4,
                                                                      "delta0_ram": Fraction(1, 2)})

    def test_degree_of_sigma(self):
        assert castelnuovo_count(6, 2, 6) == 720 * (1 * 1 * 2) // (2 * 6 * 24) == 5

    @pytest.mark.parametrize("k", range(1, 7))
    def test_castelnuovo_pencils_are_catalan(self, k):
        assert castelnuovo_count(2 * k, 1, k + 1) == comb(2 * k, k) // (k + 1)

    def test_castelnuovo_needs_rho_zero(self):
        with pytest.raises(ValueError):
            castelnuovo_count(5, 1, 3)


class TestMultiplicity:
    def test_chain(self):
        m = multiplicity_J5()
        assert (m.chi_C4, m.chi_W14, m.chi_C14, m.chi_W4, m.chi_theta_gen, m.nodes) == (70, -20, -40, 90, 120, 10)
        assert m.mult == 40 and m.delta0pp_coefficient == 20

    @pytest.mark.parametrize("g", range(2, 8))
    def test_generating_function(self, g):
        poly = np.polynomial.polynomial.polypow([1, -1], 2 * g - 2)
        assert [chi_symmetric_product(g, d) for d in range(2 * g - 1)] == [int(c) for c in poly]

    def test_macdonald_middle(self):
        g = 5
        assert chi_symmetric_product(g, g - 1) == (-1) ** (g - 1) * comb(2 * g - 2, g - 1)
        assert factorial(5) == multiplicity_J5().chi_theta_gen
