import math

import numpy as np
import pytest

from isocompare.convexity import (SampledFunction, chord, comparison_angle, comparison_bound,
                                  convexify_transform, is_fk_convex, toponogov_verify,
                                  transformed_convexity)
from isocompare.errors import DomainError, HypothesisViolation, SingularSystemError
from isocompare.geometry.closed import FlatTorus
from isocompare.geometry.spaceform import SpaceForm
from isocompare.kernels import CurvatureContext, ck, sigma, sk


def ctx(k):
    return CurvatureContext(k, 2)


class TestSampledFunction:
    def test_validation(self):
        with pytest.raises(ValueError):
            SampledFunction([0, 1], [0, 1])
        with pytest.raises(ValueError):
            SampledFunction([0, 2, 1], [0, 1, 2])
        with pytest.raises(ValueError):
            SampledFunction([0, 1, 3], [0, 1, 2], h_max=1.0)
        f = SampledFunction([0, 1, 3], [0, 1, 2])
        assert f.interval == (0.0, 3.0) and f.h_max == 2.0


class TestChord:
    def test_linear(self):
        ch = chord(ctx(0), 0, 1, 1, 0)
        assert (ch.alpha, ch.beta) == pytest.approx((-1.0, 1.0))

    def test_cosine(self):
        ch = chord(ctx(1), 0, 1, math.pi / 2, 0)
        assert ch.alpha == pytest.approx(0.0, abs=1e-15)
        assert ch.beta == pytest.approx(1.0)
        t = np.linspace(0, math.pi / 2, 7)
        assert np.allclose(ch(t), np.cos(t), atol=1e-15)

    def test_singular(self):
        with pytest.raises(SingularSystemError):
            chord(ctx(1), 0, 1, math.pi, 0)

    def test_order(self):
        with pytest.raises(DomainError):
            chord(ctx(0), 1, 0, 1, 0)

    @pytest.mark.parametrize("k", [-2.0, -0.5, 0.0, 0.5, 2.0])
    def test_interpolates(self, k):
        x1, x2 = 0.3, 1.7
        ch = chord(ctx(k), x1, 0.4, x2, -1.3)
        assert ch(x1) == pytest.approx(0.4, abs=1e-10)
        assert ch(x2) == pytest.approx(-1.3, abs=1e-10)


class TestTransform:
    def test_constant_k0(self):
        phi = SampledFunction.from_callable(np.ones_like, 1.0, 2.0, 11)
        psi = convexify_transform(ctx(0), phi)
        assert psi.interval == pytest.approx((0.5, 1.0))
        assert np.allclose(psi.values, psi.grid, rtol=1e-14)

    def test_identity_k0(self):
        psi = convexify_transform(ctx(0), SampledFunction.from_callable(lambda t: t, 1.0, 2.0, 11))
        assert np.allclose(psi.values, 1.0, rtol=1e-14)

    def test_sine_k1(self):
        psi = convexify_transform(ctx(1), SampledFunction.from_callable(np.sin, 0.1, 3.0, 41))
        assert np.allclose(psi.values, 1.0, rtol=1e-13)
        assert np.all(np.diff(psi.grid) > 0)

    def test_domain(self):
        with pytest.raises(DomainError):
            convexify_transform(ctx(1), SampledFunction.from_callable(np.sin, 0.0, 1.0, 11))
        with pytest.raises(DomainError):
            convexify_transform(ctx(1), SampledFunction.from_callable(np.sin, 0.5, math.pi, 11))


class TestIsFkConvex:
    def test_members_are_both(self):
        phi = SampledFunction.from_callable(np.sin, 0.0, 3.0, 61)
        assert is_fk_convex(ctx(1), phi, "convex").ok
        assert is_fk_convex(ctx(1), phi, "concave").ok

    def test_parabola(self):
        phi = SampledFunction.from_callable(np.square, 0.1, 2.0, 41)
        assert is_fk_convex(ctx(0), phi, "convex").ok
        rep = is_fk_convex(ctx(0), phi, "concave")
        assert not rep.ok and rep.worst_violation > 0.1

    def test_double_frequency(self):
        # phi'' + phi = -3 sin 2t <= 0 on the interval
        phi = SampledFunction.from_callable(lambda t: np.sin(2 * t), 0.1, 1.4, 81)
        assert is_fk_convex(ctx(1), phi, "concave").ok
        assert not is_fk_convex(ctx(1), phi, "convex").ok

    def test_bad_sense(self):
        phi = SampledFunction.from_callable(np.square, 0.1, 2.0, 11)
        with pytest.raises(ValueError):
            is_fk_convex(ctx(0), phi, "sideways")

    def test_resolution_slack(self):
        phi = SampledFunction.from_callable(np.square, 0.1, 2.0, 11)
        rep = is_fk_convex(ctx(0), phi, "convex", second_derivative_bound=2.0)
        assert rep.slack == pytest.approx(1e-9 * phi.scale + 2.0 * phi.h_max**2 / 8)

    def test_agrees_with_transform(self):
        phi = SampledFunction.from_callable(lambda t: np.sin(2 * t), 0.1, 1.4, 81)
        for sense in ("convex", "concave"):
            assert is_fk_convex(ctx(1), phi, sense).ok == transformed_convexity(ctx(1), phi, sense).ok


class TestComparisonBound:
    def test_slower_decay(self):
        f = SampledFunction.from_callable(lambda t: 1 - t / 2, 0.0, 1.0, 51)
        rep = comparison_bound(ctx(0), f, 1.0)
        assert rep.ok and rep.hypothesis_ok and rep.worst_gap >= 0

    def test_hypothesis_flagged(self):
        a = math.sqrt(0.5)
        f = SampledFunction.from_callable(lambda t: np.cos(a * t), 0.0, math.pi / 2, 101)
        assert not comparison_bound(ctx(1), f, math.pi / 2).hypothesis_ok

    def test_equality(self):
        f = SampledFunction.from_callable(lambda t: sigma(0.0, 1.0, t), 0.0, 1.0, 51)
        rep = comparison_bound(ctx(0), f, 1.0)
        assert rep.ok and abs(rep.worst_gap) < 1e-12

    def test_errors(self):
        with pytest.raises(HypothesisViolation):
            comparison_bound(ctx(0), SampledFunction.from_callable(lambda t: 2 - t, 0.0, 1.0, 11))
        with pytest.raises(HypothesisViolation):
            comparison_bound(ctx(0), SampledFunction.from_callable(lambda t: 1 - 2 * t, 0.0, 1.0, 11))


class TestToponogov:
    S2 = SpaceForm(1.0, 2)

    def _points(self):
        pts = [np.array(p, float) for p in ([1, 0, 0], [0, 1, 0], [0.3, 0.2, 0.9])]
        return [p / np.linalg.norm(p) for p in pts]

    def test_model_equality(self):
        q, p0, p1 = self._points()
        rep = toponogov_verify(self.S2, q, p0, p1, 1.0)
        assert rep.status == "pass" and abs(rep.margin) < 1e-8

    def test_strict_for_smaller_k(self):
        q, p0, p1 = self._points()
        rep = toponogov_verify(self.S2, q, p0, p1, 0.5)
        assert rep.status == "pass" and rep.margin > 1e-3

    def test_relabel_symmetry(self):
        q, p0, p1 = self._points()
        a = toponogov_verify(self.S2, q, p0, p1, 0.5)
        b = toponogov_verify(self.S2, q, p1, p0, 0.5)
        assert a.margin == pytest.approx(b.margin, abs=1e-9)

    def test_flat_torus(self):
        T = FlatTorus(1.0, 1.0)
        rep = toponogov_verify(T, np.array([0.1, 0.1]), np.array([0.2, 0.12]), np.array([0.15, 0.25]), 0.0)
        assert rep.status == "pass" and abs(rep.margin) < 1e-9

    def test_comparison_angle(self):
        # equilateral Euclidean triangle and a right spherical octant triangle
        assert comparison_angle(0.0, 1.0, 1.0, 1.0) == pytest.approx(math.pi / 3)
        assert comparison_angle(1.0, math.pi / 2, math.pi / 2, math.pi / 2) == pytest.approx(math.pi / 2)


def test_chord_matches_kernels():
    ch = chord(ctx(-1), 0.2, 1.0, 0.9, 2.0)
    t = np.array([0.2, 0.5, 0.9])
    assert np.allclose(ch(t), ch.alpha * sk(-1, t) + ch.beta * ck(-1, t))
