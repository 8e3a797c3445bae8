import math

import numpy as np
import pytest

from isocompare.errors import ChartExitError, DomainError
from isocompare.geometry import engine as E
from isocompare.geometry.boundary import normalized_mean_curvatures
from isocompare.geometry.domains import Resolution
from isocompare.geometry.spec import ManifoldSpec
from isocompare.kernels import CurvatureContext, lambda_of_l, model_measures, sigma


def build(kind, **params):
    return ManifoldSpec.make(kind, **params).build()


@pytest.fixture(scope="module")
def torus():
    return build("FlatTorus")


@pytest.fixture(scope="module")
def disk():
    return build("ModelBall", k=0, n=2, radius=1)


@pytest.fixture(scope="module")
def annulus():
    return build("EuclideanDomain", n=2, shape={"type": "annulus", "inner": 1, "outer": 2})


@pytest.fixture(scope="module")
def ellipse():
    return build("EuclideanDomain", n=2, shape={"type": "ellipse", "axes": [2, 1]})


class TestGeodesic:
    def test_torus_wraps(self, torus):
        path = E.geodesic(torus, [0, 0], [1, 0], 2.5)
        assert np.allclose(np.abs(path.endpoint), [0.5, 0.0], atol=1e-9)
        assert path.speed_drift < 1e-9

    def test_revolution_clairaut(self):
        rev = build("SurfaceOfRevolution", profile={"type": "exp", "L": 5})
        path = E.geodesic(rev, [-1.0, 0.0], [0.3, 1.0], 3.0)
        assert path.clairaut_drift < 1e-9
        assert path.speed_drift < 1e-9
        meridian = E.geodesic(rev, [-2.0, 0.0], [1.0, 0.0], 1.5)
        assert np.allclose(meridian.y[:, 1], 0.0, atol=1e-12)

    def test_sphere_antipode(self):
        S2 = build("SpaceForm", k=1, n=2)
        x = np.array([1.0, 0.0, 0.0])
        v = S2.tangent_basis(x)[0]
        y = S2.exp(x, math.pi * v)
        assert np.allclose(y, -x, atol=1e-12)
        path = E.geodesic(S2, S2.to_chart(x), [0.0, 1.0], 0.5 * math.pi)
        assert path.speed_drift < 1e-9

    def test_zero_velocity(self, torus):
        with pytest.raises(DomainError):
            E.geodesic(torus, [0, 0], [0, 0], 1.0)

    def test_hyperbolic_chart_exit(self):
        H2 = build("SpaceForm", k=-1, n=2)
        with pytest.raises(ChartExitError):
            E.geodesic(H2, [0.0, 0.0], [1.0, 0.0], 60.0)


class TestTransport:
    def test_disk_density(self, disk):
        b = E.boundary_geometry(disk)
        tr = E.exp_normal(disk, b, 1.0)
        t = np.linspace(0, 0.99, 12)
        assert np.max(np.abs(tr.F(t) - (1 - t)[None, :])) < 1e-8
        assert np.allclose(tr.F(0.0), 1.0)

    @pytest.mark.parametrize("k,n,radius", [(-1.0, 2, 1.0), (1.0, 3, 1.0), (-1.0, 3, 0.7)])
    def test_model_ball_density(self, k, n, radius):
        m = build("ModelBall", k=k, n=n, radius=radius)
        b = E.boundary_geometry(m)
        tr = E.exp_normal(m, b, radius)
        lam = lambda_of_l(CurvatureContext(k, n), radius)
        t = np.linspace(0, 0.95 * radius, 9)
        expected = sigma(k, lam, t) ** (n - 1)
        assert np.max(np.abs(tr.F(t) - expected[None, :])) < 1e-5

    def test_first_variation(self, ellipse):
        b = E.boundary_geometry(ellipse)
        tr = E.exp_normal(ellipse, b, 0.4)
        t, h = 0.2, 1e-5
        dF = (tr.F(t + h) - tr.F(t - h))[:, 0] / (2 * h)
        assert np.max(np.abs(dF + tr.H(t)[:, 0] * tr.F(t)[:, 0])) < 1e-5


class TestCutFocal:
    def test_annulus_cut(self, annulus):
        c = E.cut_distance(annulus)
        assert np.allclose(c, 0.5, atol=1e-6)

    def test_ball_cut_and_focal(self, disk):
        b = E.boundary_geometry(disk)
        assert np.allclose(E.cut_distance(disk, b), 1.0, atol=1e-6)
        assert np.allclose(E.focal_distance(disk, b), 1.0, atol=1e-6)

    def test_spherical_cap(self):
        cap = build("ModelBall", k=1, n=2, radius=1.0)
        c = E.cut_distance(cap)
        assert np.allclose(c, 1.0, atol=1e-6)
        assert np.all(c < math.pi - 1e-4)

    def test_ellipse_evolute(self, ellipse):
        a, bb = 2.0, 1.0
        b = E.boundary_geometry(ellipse)
        f = E.focal_distance(ellipse, b)
        x, y = b.points.T
        theta = np.arctan2(y / bb, x / a)
        evolute = np.column_stack([(a * a - bb * bb) / a * np.cos(theta) ** 3,
                                   (bb * bb - a * a) / bb * np.sin(theta) ** 3])
        oracle = np.linalg.norm(b.points - evolute, axis=1)
        assert np.max(np.abs(f - oracle) / oracle) < 1e-5
        assert f.min() >= 0.5 - 1e-6
        minor = np.argmin(np.abs(x))
        assert f[minor] == pytest.approx(4.0, rel=1e-4)

    def test_cut_not_beyond_focal(self, ellipse):
        s = E.boundary_samples(ellipse)
        assert np.all(s.cut <= s.focal + 1e-6 * ellipse.scale)


class TestBoundaryGeometry:
    def test_sphere(self):
        ball = build("ModelBall", k=0, n=3, radius=2.0)
        b = E.boundary_geometry(ball)
        assert np.allclose(b.kappa, 0.5, atol=1e-9)
        assert np.allclose(b.H1, 0.5, atol=1e-9)
        assert np.allclose(b.Hj[:, 2], 0.25, atol=1e-9)
        assert np.allclose(b.H, b.kappa.sum(axis=1))

    def test_spherical_cap_curvature(self):
        cap = build("ModelBall", k=1, n=2, radius=0.8)
        assert np.allclose(E.boundary_geometry(cap).kappa, 1 / math.tan(0.8), atol=1e-8)

    def test_flat_direction(self):
        Hj = normalized_mean_curvatures(np.array([[0.0, 1.0]]))
        assert Hj[0, 0] == 1.0 and Hj[0, 1] == 0.5 and Hj[0, 2] == 0.0

    def test_samples_view(self, disk):
        s = E.boundary_samples(disk).samples()
        assert s[0].H1 == pytest.approx(1.0) and s[0].cut == pytest.approx(1.0, abs=1e-6)
        assert all(0 < p.cut <= p.focal + 1e-6 for p in s)


class TestCurvatureBounds:
    def test_flat_torus(self, torus):
        cb = E.curvature_bounds(torus)
        assert abs(cb.ric_lower) < 1e-9 and abs(cb.sec_upper) < 1e-9 and abs(cb.sec_lower) < 1e-9

    def test_round_sphere(self):
        cb = E.curvature_bounds(build("SpaceForm", k=1, n=2))
        for v in (cb.ric_lower, cb.sec_upper, cb.sec_lower):
            assert v == pytest.approx(1.0, abs=1e-6)

    def test_revolution_negative(self):
        rev = build("SurfaceOfRevolution", profile={"type": "exp", "L": 5})
        assert E.curvature_bounds(rev).sec_upper < 0


class TestMeasures:
    def test_unit_ball(self):
        m = E.measures(build("ModelBall", k=0, n=3, radius=1))
        assert m.volume == pytest.approx(4 * math.pi / 3, rel=1e-6)
        assert m.boundary_area == pytest.approx(4 * math.pi, rel=1e-6)

    def test_hyperbolic_disk(self):
        m = E.measures(build("ModelBall", k=-1, n=2, radius=1))
        mm = model_measures(CurvatureContext(-1, 2), 1.0)
        assert m.volume == pytest.approx(2 * math.pi * (math.cosh(1) - 1), rel=1e-6)
        assert m.boundary_area == pytest.approx(2 * math.pi * math.sinh(1), rel=1e-6)
        assert m.volume == pytest.approx(mm.ball_volume, rel=1e-10)

    def test_torus(self, torus):
        m = E.measures(torus)
        assert m.volume == 1.0 and m.boundary_area == 0.0


class TestPointCutLocus:
    def test_torus(self, torus):
        locus = E.point_cut_locus(torus, directions=512)
        assert locus.measure == pytest.approx(2.0, abs=1e-6)
        assert locus.rad == pytest.approx(math.sqrt(2) / 2, abs=1e-6)
        assert np.all(np.isclose(np.abs(locus.points), 0.5, atol=1e-6).any(axis=1))

    def test_torus_refinement(self, torus):
        errors = [abs(E.point_cut_locus(torus, directions=d, mesh_check=False).measure - 2.0)
                  for d in (64, 128, 256)]
        assert all(err <= 4.0 / d for err, d in zip(errors, (64, 128, 256)))

    def test_projective_plane(self):
        locus = E.point_cut_locus(build("ProjectivePlaneQuotient"), directions=512)
        assert locus.measure == pytest.approx(math.pi, abs=1e-6)
        assert locus.rad == pytest.approx(math.pi / 2, abs=1e-6)

    def test_round_sphere(self):
        locus = E.point_cut_locus(build("SpaceForm", k=1, n=2), directions=256)
        assert locus.measure < 1e-6
        assert locus.rad == pytest.approx(math.pi, abs=1e-6)

    def test_rows(self, torus):
        rows = list(E.point_cut_locus(torus, directions=64, mesh_check=False).rows())
        assert len(rows) == 64 and rows[0][0] == 0 and len(rows[0]) == 4

    def test_rejects_domains(self, disk):
        with pytest.raises(DomainError):
            E.point_cut_locus(disk)


class TestExtrinsicRadius:
    def test_disk(self, disk):
        er = E.extrinsic_radius(None, disk)
        assert er.rad == pytest.approx(1.0, abs=1e-8)
        assert er.avrad == pytest.approx(1.0, abs=1e-8)

    def test_rectangle(self):
        rect = build("EuclideanDomain", n=2, shape={"type": "rectangle", "width": 2, "height": 1})
        er = E.extrinsic_radius(None, rect)
        assert er.rad == pytest.approx(math.sqrt(5) / 2, abs=1e-8)
        assert er.avrad <= er.rad

    def test_hyperbolic_ball(self):
        er = E.extrinsic_radius(None, build("ModelBall", k=-1, n=2, radius=1))
        assert er.rad == pytest.approx(1.0, abs=1e-8)


class TestDistanceField:
    def test_values(self, disk, annulus):
        assert E.distance_to_boundary_field(disk, [[0, 0]])[0] == pytest.approx(1.0)
        assert E.distance_to_boundary_field(annulus, [[1.3, 0]])[0] == pytest.approx(0.3, abs=1e-9)

    def test_sublevel(self, disk):
        assert E.sublevel_volume(disk, 1.0) == pytest.approx(math.pi, rel=1e-10)
        assert E.sublevel_volume(disk, 0.5) == pytest.approx(0.75 * math.pi, rel=1e-8)
        with pytest.raises(DomainError):
            E.sublevel_volume(disk, -0.1)

    def test_inradius(self, annulus):
        r, _ = E.inradius(annulus)
        assert r == pytest.approx(0.5, abs=1e-9) and r <= 0.5 + 1e-12


def test_resolution_validation():
    with pytest.raises(DomainError):
        Resolution(panels=-1).validate()
    with pytest.raises(DomainError):
        ManifoldSpec.make("ModelBall", k=0, n=2)
    with pytest.raises(DomainError):
        ManifoldSpec.make("Klein", k=0)
