from __future__ import annotations

import numpy as np
import pytest

from thetasing.errors import NotOnTheta
from thetasing.samples import (G2_THETANULL_CHAR, G2_THETANULL_ENTRY, G2_THETANULL_START, G3_THETANULL_CHAR,
                               G3_THETANULL_ENTRY, G3_THETANULL_START, random_tau)
from thetasing.singular import (Manual, Product, SingCandidate, TwoTorsion, numeric_rank, odd_two_torsion_points,
                                product_singular_point, product_tau, thetanull_path, two_torsion_point,
                                verify_singular)
from thetasing.theta import Characteristic, EvalConfig, PeriodMatrix, theta_jet, theta_value


@pytest.fixture(scope="module")
def g2_null():
    ch = Characteristic.parse(G2_THETANULL_CHAR)
    return thetanull_path(2, ch, G2_THETANULL_START, G2_THETANULL_ENTRY), ch


@pytest.fixture(scope="module")
def g3_null():
    ch = Characteristic.parse(G3_THETANULL_CHAR)
    return thetanull_path(3, ch, G3_THETANULL_START, G3_THETANULL_ENTRY), ch


class TestTwoTorsion:
    def test_zero_char(self):
        assert np.array_equal(two_torsion_point(random_tau(2, np.random.default_rng(0)), Characteristic.zero(2)),
                              np.zeros(2))

    def test_genus1(self):
        assert two_torsion_point(PeriodMatrix([[1j]]), Characteristic((1,), (1,)))[0] == (1 + 1j) / 2

    def test_genus2(self):
        z = two_torsion_point(PeriodMatrix(np.diag([1j, 2j])), Characteristic((1, 0), (0, 1)))
        assert np.array_equal(z, np.array([0.5j, 0.5]))

    def test_candidate_invariant(self):
        tau = PeriodMatrix([[1j]])
        ch = Characteristic((1,), (1,))
        with pytest.raises(ValueError):
            SingCandidate(tau, [0.5], TwoTorsion(ch))

    def test_odd_points_lie_on_theta(self, rng):
        tau = random_tau(3, rng)
        for z in odd_two_torsion_points(tau):
            assert abs(theta_value(tau, z)) < 1e-12


class TestProducts:
    def test_product_tau(self):
        t = product_tau([[1j]], np.diag([1j, 2j]))
        assert t.g == 3 and t.tau[0, 1] == 0 and t.tau[2, 2] == 2j

    def test_genus2_ordinary_double_point(self):
        c = product_singular_point([[1j]], [[1j]], [(1 + 1j) / 2])
        assert np.allclose(c.z, [(1 + 1j) / 2, (1 + 1j) / 2])
        rep = verify_singular(c)
        assert rep.value_norm < 1e-10 and rep.grad_norm < 1e-10
        assert rep.numeric_rank == 2 and rep.in_Sdec and not rep.hess_degenerate

    def test_genus2_hessian_shape(self):
        # zero diagonal, off-diagonal theta_1'(z1) theta_2'(z2)
        c = product_singular_point([[1j]], [[1j]], [(1 + 1j) / 2])
        h = theta_jet(c.tau, c.z).hess
        assert abs(h[0, 0]) < 1e-10 and abs(h[1, 1]) < 1e-10
        d1 = theta_jet([[1j]], [(1 + 1j) / 2]).grad[0]
        assert abs(h[0, 1] - d1 * d1) < 1e-10

    def test_not_on_theta(self):
        with pytest.raises(NotOnTheta):
            product_singular_point([[1j]], [[1j]], [0.1])

    def test_genus3_with_thetanull_factor(self, g2_null):
        tau2, ch = g2_null
        rep = verify_singular(product_singular_point([[1j]], tau2, two_torsion_point(tau2, ch)))
        assert rep.singular and rep.numeric_rank <= 2 and rep.hess_degenerate

    def test_random_genus2_factors_rank_at_most_two(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 20:
            tau2 = random_tau(2, rng)
            z2 = odd_two_torsion_points(tau2)[int(rng.integers(0, 6))]
            rep = verify_singular(product_singular_point(random_tau(1, rng), tau2, z2))
            assert rep.singular and rep.numeric_rank <= 2 and rep.hess_degenerate
            checked += 1

    @pytest.mark.parametrize("tol", [1e-10, 1e-12])
    def test_rank_stable_under_tolerance(self, tol, g2_null, g3_null):
        cfg = EvalConfig(tol)
        c2 = product_singular_point([[1j]], [[1j]], [(1 + 1j) / 2], cfg)
        assert verify_singular(c2, cfg).numeric_rank == 2
        tau2 = G2_THETANULL_START
        for z2 in odd_two_torsion_points(tau2):
            assert verify_singular(product_singular_point([[1j]], tau2, z2, cfg), cfg).numeric_rank == 2
        tau3, ch3 = g3_null
        assert verify_singular(SingCandidate(tau3, two_torsion_point(tau3, ch3), TwoTorsion(ch3)), cfg).numeric_rank == 3


class TestThetaNull:
    def test_genus2_path(self, g2_null):
        tau, ch = g2_null
        assert abs(theta_value(tau, np.zeros(2), ch, EvalConfig(1e-14))) < 1e-12
        rep = verify_singular(SingCandidate(tau, two_torsion_point(tau, ch), TwoTorsion(ch)))
        assert rep.grad_norm < 1e-8 and rep.in_Snull and rep.numeric_rank == 2

    def test_genus2_path_lands_on_products(self, g2_null):
        # in genus 2 the theta-null divisor is the locus of products
        tau, _ = g2_null
        assert abs(tau.tau[0, 1]) < 1e-8

    def test_genus3_path_full_rank(self, g3_null):
        tau, ch = g3_null
        assert abs(theta_value(tau, np.zeros(3), ch, EvalConfig(1e-14))) < 1e-12
        rep = verify_singular(SingCandidate(tau, two_torsion_point(tau, ch), TwoTorsion(ch)))
        assert rep.singular and rep.grad_norm < 1e-8 and rep.numeric_rank == 3 and rep.in_Snull

    def test_rejects_odd_characteristic(self):
        with pytest.raises(ValueError):
            thetanull_path(2, Characteristic.parse("11|10"), G2_THETANULL_START)

    def test_path_stays_in_siegel_space(self, g3_null):
        tau, _ = g3_null
        assert tau.y_min > 0 and np.array_equal(tau.tau, tau.tau.T)


class TestVerify:
    def test_generic_point_not_singular(self):
        rep = verify_singular(SingCandidate(PeriodMatrix(np.diag([1j, 1j])), [0.1, 0.2]))
        assert not rep.singular and not rep.in_Snull and not rep.in_Sdec

    def test_manual_provenance_never_classified(self):
        c = product_singular_point([[1j]], [[1j]], [(1 + 1j) / 2])
        rep = verify_singular(SingCandidate(c.tau, c.z, Manual()))
        assert rep.singular and not rep.in_Sdec

    def test_numeric_rank_threshold(self):
        assert numeric_rank([10.0, 1e-3, 1e-9]) == 2
        assert numeric_rank([0.5, 1e-7]) == 1
        assert numeric_rank([]) == 0

    def test_product_provenance_recorded(self):
        c = product_singular_point([[1j]], np.diag([1j, 2j]), [(1 + 1j) / 2, 0])
        assert c.provenance == Product(1, 2)
