"""Closed-form quantities of the simply connected space forms M_k^n.

Every function here is pure.  Array arguments are accepted wherever a
quantity is naturally vectorised (``s_k``, ``c_k``, ``sigma``), while the
quadrature-backed quantities (``h_k``, ``j_k``) loop over scalars.

Near ``k = 0`` the case-split formulas lose accuracy, so whenever
``|k| t**2 < TAYLOR_CUTOFF`` the functions switch to four-term Taylor
expansions in ``x = k t**2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import DomainError, NonConvergenceError

TAYLOR_CUTOFF = 1e-8
QUAD_RTOL = 1e-12


# --------------------------------------------------------------------------
# vectorised building blocks
# --------------------------------------------------------------------------

def _as_float_array(t):
    return np.asarray(t, dtype=float)


def sk(k: float, t):
    """Return s_k(t), the solution of y'' = -k y with y(0)=0, y'(0)=1."""
    t = _as_float_array(t)
    x = k * t * t
    small = np.abs(x) < TAYLOR_CUTOFF
    out = np.empty_like(t)
    xs = x[small]
    out[small] = t[small] * (1.0 - xs / 6.0 + xs**2 / 120.0 - xs**3 / 5040.0)
    big = ~small
    if np.any(big):
        a = math.sqrt(abs(k))
        if k > 0:
            out[big] = np.sin(a * t[big]) / a
        else:
            out[big] = np.sinh(a * t[big]) / a
    return out if out.ndim else float(out)


def ck(k: float, t):
    """Return c_k(t), the solution of y'' = -k y with y(0)=1, y'(0)=0."""
    t = _as_float_array(t)
    x = k * t * t
    small = np.abs(x) < TAYLOR_CUTOFF
    out = np.empty_like(t)
    xs = x[small]
    out[small] = 1.0 - xs / 2.0 + xs**2 / 24.0 - xs**3 / 720.0
    big = ~small
    if np.any(big):
        a = math.sqrt(abs(k))
        out[big] = np.cos(a * t[big]) if k > 0 else np.cosh(a * t[big])
    return out if out.ndim else float(out)


def rhok(k: float, t):
    """Return rho_k(t) = int_0^t s_k, written without cancellation."""
    t = _as_float_array(t)
    x = k * t * t
    small = np.abs(x) < TAYLOR_CUTOFF
    out = np.empty_like(t)
    xs = x[small]
    ts = t[small]
    out[small] = 0.5 * ts * ts * (1.0 - xs / 12.0 + xs**2 / 360.0 - xs**3 / 20160.0)
    big = ~small
    if np.any(big):
        a = math.sqrt(abs(k))
        if k > 0:
            out[big] = 2.0 * np.sin(0.5 * a * t[big]) ** 2 / k
        else:
            out[big] = 2.0 * np.sinh(0.5 * a * t[big]) ** 2 / (-k)
    return out if out.ndim else float(out)


def sk_prime(k: float, t):
    """Derivative of s_k, which is c_k."""
    return ck(k, t)


def ck_prime(k: float, t):
    """Derivative of c_k, which is -k s_k."""
    return -k * np.asarray(sk(k, t))


def sigma(k: float, lam, t):
    """sigma_{k,lam}(t) = c_k(t) - lam s_k(t)."""
    return ck(k, t) - np.asarray(lam) * sk(k, t)


def first_zero(k: float) -> float:
    """pi/sqrt(k) for k > 0, +inf otherwise."""
    return math.pi / math.sqrt(k) if k > 0 else math.inf


def unit_sphere_area(n: int) -> float:
    """Area omega_{n-1} of the unit (n-1)-sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


# --------------------------------------------------------------------------
# typed API
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureContext:
    """The pair (k, n) selecting the model space M_k^n."""

    k: float
    n: int = 2

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise DomainError(f"dimension must be an integer, got {self.n!r}")
        if self.n < 2:
            raise DomainError(f"dimension must be at least 2, got {self.n}")
        if not math.isfinite(self.k):
            raise DomainError(f"curvature must be finite, got {self.k}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", float(self.k))

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def first_zero(self) -> float:
        return first_zero(self.k)

    @property
    def lambda_floor(self) -> float:
        """Infimum of admissible lambda (sqrt(-k) for k<0, 0 for k=0, -inf for k>0)."""
        if self.k > 0:
            return -math.inf
        return math.sqrt(-self.k)

    # thin conveniences so downstream code reads naturally
    def s(self, t):
        return sk(self.k, t)

    def c(self, t):
        return ck(self.k, t)

    def h(self, r):
        return h_k(self, r)

    def lam(self, l):
        return lambda_of_l(self, l)

    def ell(self, lam):
        return l_of_lambda(self, lam)


@dataclass(frozen=True)
class KernelValues:
    s: float
    c: float
    ct: float
    rho: float


@dataclass(frozen=True)
class ModelMeasures:
    sphere_area: float
    ball_volume: float
    h: float


def eval_kernels(ctx: CurvatureContext, t: float, with_ct: bool = True) -> KernelValues:
    """Evaluate s_k, c_k, ct_k and rho_k at a single ``t >= 0``.

    Parameters
    ----------
    ctx : CurvatureContext
    t : float
        Non-negative abscissa.
    with_ct : bool
        When False, ``ct`` is reported as NaN instead of raising at t = 0
        or beyond the first zero of s_k.
    """
    t = float(t)
    if not t >= 0.0:
        raise DomainError(f"t must be non-negative, got {t}")
    s = sk(ctx.k, t)
    c = ck(ctx.k, t)
    rho = rhok(ctx.k, t)
    if with_ct:
        if t == 0.0 or t >= ctx.first_zero:
            raise DomainError(f"ct_k undefined at t={t} for k={ctx.k}")
        ct = c / s
    else:
        ct = math.nan
    return KernelValues(s=s, c=c, ct=ct, rho=rho)


def ct_k(ctx: CurvatureContext, t):
    """Vectorised ct_k = c_k / s_k on (0, pi/sqrt(k))."""
    t = _as_float_array(t)
    if np.any(t <= 0) or np.any(t >= ctx.first_zero):
        raise DomainError("ct_k requires 0 < t < pi/sqrt(k)")
    return ck(ctx.k, t) / sk(ctx.k, t)


def _h_taylor(m: int, r: float, x: float) -> float:
    a1 = m / (3.0 * (m + 3))
    a2 = m * (2 * m + 1) / (15.0 * (m + 3) * (m + 5))
    a3 = m * (17 * m * m + 24 * m + 10) / (315.0 * (m + 3) * (m + 5) * (m + 7))
    return r / (m + 1) * (1.0 + x * (a1 + x * (a2 + x * a3)))


def _normalised_power_integral(k: float, m: int, a: float, b: float) -> float:
    """int_a^b (s_k(t)/s_k(b))^m dt by adaptive Gauss-Kronrod."""
    if b <= a:
        return 0.0
    sb = sk(k, b)
    if sb <= 0.0:
        return math.inf

    def integrand(t):
        return (sk(k, t) / sb) ** m

    # the integrand is concentrated within a few curvature lengths of b on
    # large hyperbolic balls; splitting there keeps the error control honest
    points = None
    if k < 0:
        width = 40.0 / (m * math.sqrt(-k))
        if b - a > 2 * width:
            points = [b - width]
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=QUAD_RTOL,
                                      limit=200, points=points)
        except integrate.IntegrationWarning as exc:
            raise NonConvergenceError(f"quadrature failed on [{a}, {b}]: {exc}") from exc
    return val


@lru_cache(maxsize=65536)
def _h_scalar(k: float, n: int, r: float) -> float:
    m = n - 1
    x = k * r * r
    if abs(x) < TAYLOR_CUTOFF:
        return _h_taylor(m, r, x)
    return _normalised_power_integral(k, m, 0.0, r)


def _check_radius(ctx: CurvatureContext, r: float, allow_zero: bool = False) -> None:
    if math.isnan(r) or r < 0 or (r == 0 and not allow_zero):
        raise DomainError(f"radius must be positive, got {r}")
    if ctx.k > 0 and r > ctx.first_zero * (1 + 1e-15):
        raise DomainError(f"radius {r} exceeds pi/sqrt(k)={ctx.first_zero}")


def h_k(ctx: CurvatureContext, r):
    """h_k(r) = |B_k(r)| / |S_k(r)|; accepts scalars or arrays.

    ``h_k(inf)`` is ``inf`` for k <= 0.
    """
    arr = _as_float_array(r)
    out = np.empty(arr.shape)
    for idx, val in np.ndenumerate(arr):
        val = float(val)
        if math.isinf(val) and val > 0 and ctx.k <= 0:
            out[idx] = math.inf
            continue
        _check_radius(ctx, val)
        if ctx.k > 0 and val >= ctx.first_zero:
            out[idx] = math.inf
            continue
        out[idx] = _h_scalar(ctx.k, ctx.n, val)
    return out if out.ndim else float(out)


def model_measures(ctx: CurvatureContext, r: float) -> ModelMeasures:
    """Sphere area, ball volume and h_k of the geodesic ball of radius r."""
    r = float(r)
    _check_radius(ctx, r)
    omega = unit_sphere_area(ctx.n)
    s = sk(ctx.k, r)
    sphere = omega * s ** ctx.m if s > 0 else 0.0
    if ctx.k > 0 and r >= ctx.first_zero:
        # at the antipode the normalisation collapses; integrate directly
        ball = omega * integrate.quad(lambda t: sk(ctx.k, t) ** ctx.m, 0.0, r,
                                      epsabs=0.0, epsrel=QUAD_RTOL, limit=200)[0]
        return ModelMeasures(sphere_area=0.0, ball_volume=ball, h=math.inf)
    ball = sphere * _h_scalar(ctx.k, ctx.n, r)
    h = ball / sphere
    return ModelMeasures(sphere_area=sphere, ball_volume=ball, h=h)


def lambda_of_l(ctx: CurvatureContext, l):
    """lambda_k(l) = ct_k(l); ``l = inf`` maps to the limit sqrt(-k) (k <= 0)."""
    arr = _as_float_array(l)
    if np.any(np.isnan(arr)) or np.any(arr <= 0):
        raise DomainError("lambda_k(l) requires l > 0")
    if ctx.k > 0 and np.any(arr >= ctx.first_zero):
        raise DomainError(f"lambda_k(l) requires l < pi/sqrt(k)={ctx.first_zero}")
    out = np.empty(arr.shape)
    inf = np.isinf(arr)
    out[inf] = math.sqrt(-ctx.k) if ctx.k < 0 else 0.0
    fin = ~inf
    out[fin] = ck(ctx.k, arr[fin]) / sk(ctx.k, arr[fin])
    return out if out.ndim else float(out)


def lambda_admissible(ctx: CurvatureContext, lam: float) -> bool:
    if math.isnan(lam):
        return False
    if ctx.k > 0:
        return math.isfinite(lam)
    return lam > ctx.lambda_floor


def l_of_lambda(ctx: CurvatureContext, lam):
    """l_k(lambda), the first zero of sigma_{k,lambda}."""
    arr = _as_float_array(lam)
    k = ctx.k
    if k > 0:
        if not np.all(np.isfinite(arr)):
            raise DomainError("lambda must be finite for k > 0")
    elif np.any(~(arr > ctx.lambda_floor)):
        raise DomainError(
            f"lambda must exceed {ctx.lambda_floor} for k={k} (got min {np.nanmin(arr)})")
    out = np.empty(arr.shape)
    with np.errstate(divide="ignore"):
        if k == 0.0:
            out[...] = 1.0 / arr
        else:
            a = math.sqrt(abs(k))
            y = np.abs(k) / np.where(arr == 0, np.inf, arr) ** 2
            small = (np.abs(y) < TAYLOR_CUTOFF) & (arr > 0)
            # l = (1/lam) g(k/lam^2) with g(x) = arctan(sqrt x)/sqrt x
            xk = k / np.where(small, arr, 1.0) ** 2
            out[small] = (1.0 - xk[small] / 3.0 + xk[small] ** 2 / 5.0
                          - xk[small] ** 3 / 7.0) / arr[small]
            big = ~small
            if k > 0:
                out[big] = (0.5 * math.pi - np.arctan(arr[big] / a)) / a
            else:
                out[big] = np.arctanh(a / arr[big]) / a
    return out if out.ndim else float(out)


def sigma_profile(ctx: CurvatureContext, lam: float, t):
    """sigma_{k,lambda}(t): solution of s'' + k s = 0, s(0)=1, s'(0)=-lambda."""
    t = _as_float_array(t)
    if np.any(t < 0):
        raise DomainError("sigma profile requires t >= 0")
    with np.errstate(over="raise"):
        try:
            return sigma(ctx.k, float(lam), t)
        except FloatingPointError as exc:
            raise DomainError(f"sigma overflow at lambda={lam}") from exc


def j_tube(ctx: CurvatureContext, r: float, rho: float) -> float:
    """j_k(r, rho) = s_k(r)^{-(n-1)} int_{max(r-rho,0)}^r s_k^{n-1}."""
    r = float(r)
    rho = float(rho)
    if rho < 0 or math.isnan(rho):
        raise DomainError(f"rho must be non-negative, got {rho}")
    if math.isinf(r):
        if ctx.k > 0:
            raise DomainError("infinite cut distance is impossible for k > 0")
        if ctx.k == 0:
            return _j_infinite_flat(ctx, rho)
        return _j_infinite_hyperbolic(ctx, rho)
    _check_radius(ctx, r)
    if rho == 0.0:
        return 0.0
    if rho >= r:
        return h_k(ctx, r)
    return _normalised_power_integral(ctx.k, ctx.m, r - rho, r)


def _j_infinite_flat(ctx: CurvatureContext, rho: float) -> float:
    # limit r -> inf of (r^n - (r-rho)^n) / (n r^{n-1}) is rho
    return rho


def _j_infinite_hyperbolic(ctx: CurvatureContext, rho: float) -> float:
    # limit of the normalised integral: int_0^rho exp(-m a u) du
    a = math.sqrt(-ctx.k)
    ma = ctx.m * a
    return -math.expm1(-ma * rho) / ma


def h_inverse_limit(ctx: CurvatureContext) -> float:
    """lim_{t->inf} 1/h_k(t) = (n-1) sqrt(-k) for k <= 0."""
    if ctx.k > 0:
        raise DomainError("the large-radius limit exists only for k <= 0")
    return ctx.m * math.sqrt(-ctx.k)


def model_quermass(ctx: CurvatureContext, L: float, j: int) -> float:
    """I_j of the geodesic sphere S_k(L); I_{-1} is n times the ball volume."""
    meas = model_measures(ctx, L)
    if j == -1:
        return ctx.n * meas.ball_volume
    lam = lambda_of_l(ctx, L)
    return meas.sphere_area * lam ** j
