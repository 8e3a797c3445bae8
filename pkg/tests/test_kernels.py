import math

import numpy as np
import pytest
from scipy import integrate

from isocompare.errors import DomainError
from isocompare.kernels import (CurvatureContext, ck, eval_kernels, h_inverse_limit, h_k, j_tube,
                                l_of_lambda, lambda_of_l, model_measures, rhok, sigma_profile, sk)


def ctx(k, n=2):
    return CurvatureContext(k, n)


def rk4(k, y0, dy0, t_end, steps=20000):
    """Independent RK4 integration of y'' = -k y."""
    h = t_end / steps
    y, v = y0, dy0
    out = [y]
    for _ in range(steps):
        k1y, k1v = v, -k * y
        k2y, k2v = v + 0.5 * h * k1v, -k * (y + 0.5 * h * k1y)
        k3y, k3v = v + 0.5 * h * k2v, -k * (y + 0.5 * h * k2y)
        k4y, k4v = v + h * k3v, -k * (y + h * k3y)
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        out.append(y)
    return np.linspace(0, t_end, steps + 1), np.array(out)


class TestEvalKernels:
    def test_flat(self):
        kv = eval_kernels(ctx(0), 2.0)
        assert (kv.s, kv.c, kv.ct, kv.rho) == pytest.approx((2.0, 1.0, 0.5, 2.0), abs=1e-15)

    def test_sphere_quarter(self):
        kv = eval_kernels(ctx(1), math.pi / 2)
        assert kv.s == pytest.approx(1.0, abs=1e-15)
        assert kv.c == pytest.approx(0.0, abs=1e-15)
        assert kv.rho == pytest.approx(1.0, abs=1e-15)

    def test_hyperbolic(self):
        kv = eval_kernels(ctx(-1), 1.0)
        assert kv.s == pytest.approx(1.1752012, abs=1e-7)
        assert kv.c == pytest.approx(1.5430806, abs=1e-7)
        _, y = rk4(-1.0, 0.0, 1.0, 1.0)
        assert kv.s == pytest.approx(y[-1], abs=1e-10)

    def test_ct_domain_errors(self):
        with pytest.raises(DomainError):
            eval_kernels(ctx(0), 0.0)
        with pytest.raises(DomainError):
            eval_kernels(ctx(1), math.pi)
        with pytest.raises(DomainError):
            eval_kernels(ctx(0), -1.0)
        assert math.isnan(eval_kernels(ctx(1), math.pi, with_ct=False).ct)

    def test_integrated_identity(self):
        for k in (-2.0, -0.3, 0.0, 0.7, 1.0):
            t = np.linspace(0, 2.5, 50)
            assert np.max(np.abs(ck(k, t) + k * rhok(k, t) - 1)) < 1e-12

    @pytest.mark.parametrize("k", [-1.0, 0.0, 0.5, 1.0])
    def test_against_rk4(self, k):
        t_end = 10.0 if k <= 0 else 0.99 * math.pi / math.sqrt(k)
        if k < 0:
            t_end = 3.0  # keep the RK4 relative error meaningful as sinh grows
        t, ys = rk4(k, 0.0, 1.0, t_end)
        _, yc = rk4(k, 1.0, 0.0, t_end)
        assert np.max(np.abs(sk(k, t) - ys)) < 1e-8
        assert np.max(np.abs(ck(k, t) - yc)) < 1e-8

    def test_continuity_in_k(self):
        t = np.linspace(0, 10, 201)
        for eps in (1e-9, -1e-9):
            assert np.max(np.abs(ck(eps, t) - ck(0.0, t))) <= 1e-7
            # s_k itself moves by the exact amount -k t^3/6 (1.7e-7 at t = 10),
            # so continuity is measured against that first-order change
            ds = sk(eps, t) - sk(0.0, t)
            assert np.max(np.abs(ds + eps * t**3 / 6)) <= 1e-12
            assert np.max(np.abs(ds[t <= 8.0])) <= 1e-7


class TestModelMeasures:
    def test_euclidean_unit_ball(self):
        m = model_measures(ctx(0, 3), 1.0)
        assert m.sphere_area == pytest.approx(4 * math.pi, rel=1e-14)
        assert m.ball_volume == pytest.approx(4 * math.pi / 3, rel=1e-12)
        assert m.h == pytest.approx(1 / 3, rel=1e-12)

    def test_hemisphere(self):
        assert model_measures(ctx(1, 2), math.pi / 2).h == pytest.approx(1.0, rel=1e-12)

    def test_hyperbolic_disk(self):
        assert model_measures(ctx(-1, 2), 2.0).h == pytest.approx(math.tanh(1.0), rel=1e-12)

    @pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
    def test_closed_forms_n3(self, k):
        r = 1.2
        omega = 4 * math.pi
        vol = omega * integrate.quad(lambda t: sk(k, t) ** 2, 0, r, epsabs=0, epsrel=1e-13)[0]
        assert model_measures(ctx(k, 3), r).ball_volume == pytest.approx(vol, rel=1e-11)

    def test_radius_domain(self):
        with pytest.raises(DomainError):
            model_measures(ctx(1), 4.0)
        with pytest.raises(DomainError):
            model_measures(ctx(0), 0.0)

    def test_h_increasing(self):
        for k in (-1.0, 0.0, 1.0):
            r = np.linspace(0.05, 3.0, 80)
            assert np.all(np.diff(h_k(ctx(k, 3), r)) > 0)


class TestLambda:
    def test_values(self):
        assert lambda_of_l(ctx(0), 2.0) == pytest.approx(0.5)
        assert lambda_of_l(ctx(1), math.pi / 4) == pytest.approx(1.0, rel=1e-14)
        assert lambda_of_l(ctx(-1), 40.0) == pytest.approx(1.0, rel=1e-14)
        assert lambda_of_l(ctx(-1), math.inf) == 1.0

    def test_inverse(self):
        assert l_of_lambda(ctx(0), 0.5) == pytest.approx(2.0)
        assert l_of_lambda(ctx(1), 0.0) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_inadmissible(self):
        with pytest.raises(DomainError):
            l_of_lambda(ctx(-1), 1.0)
        with pytest.raises(DomainError):
            l_of_lambda(ctx(0), 0.0)
        with pytest.raises(DomainError):
            lambda_of_l(ctx(1), math.pi)
        with pytest.raises(DomainError):
            lambda_of_l(ctx(0), 0.0)

    def test_decreasing(self):
        l = np.linspace(0.1, 3.0, 50)
        for k in (-1.0, 0.0, 1.0):
            assert np.all(np.diff(lambda_of_l(ctx(k), l)) < 0)
        assert np.all(lambda_of_l(ctx(-1), l) > 1.0)


class TestSigma:
    def test_values(self):
        assert sigma_profile(ctx(0), 1.0, 0.5) == pytest.approx(0.5)
        assert sigma_profile(ctx(1), 0.0, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
        l = l_of_lambda(ctx(-1), 2.0)
        assert l == pytest.approx(0.5493061443, abs=1e-9)
        assert sigma_profile(ctx(-1), 2.0, l) == pytest.approx(0.0, abs=1e-12)

    def test_negative_t(self):
        with pytest.raises(DomainError):
            sigma_profile(ctx(0), 1.0, -0.1)

    @pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
    def test_zero_at_l(self, k):
        for l in (0.3, 1.0, 2.0):
            assert abs(sigma_profile(ctx(k), lambda_of_l(ctx(k), l), l)) < 1e-10


class TestTube:
    def test_values(self):
        assert j_tube(ctx(0, 3), 1.0, 1.0) == pytest.approx(1 / 3)
        assert j_tube(ctx(0, 2), 1.0, 0.5) == pytest.approx(0.375, rel=1e-12)
        assert j_tube(ctx(0, 2), 1.7, 0.0) == 0.0

    def test_saturates_at_h(self):
        c = ctx(-1, 3)
        assert j_tube(c, 0.8, 2.0) == h_k(c, 0.8)

    def test_negative_rho(self):
        with pytest.raises(DomainError):
            j_tube(ctx(0), 1.0, -0.1)


class TestLimit:
    def test_values(self):
        assert h_inverse_limit(ctx(-1, 2)) == 1.0
        assert h_inverse_limit(ctx(0, 5)) == 0.0
        assert h_inverse_limit(ctx(-4, 3)) == pytest.approx(4.0)
        assert abs(1 / h_k(ctx(-4, 3), 50.0) - 4.0) < 1e-6

    def test_positive_k(self):
        with pytest.raises(DomainError):
            h_inverse_limit(ctx(1))


def test_context_needs_dimension_two():
    with pytest.raises(DomainError):
        CurvatureContext(0.0, 1)
