"""Independent generators and oracles shared by the property and acceptance tests."""

import math

import numpy as np
from scipy.integrate import solve_ivp

from isocompare.convexity import SampledFunction
from isocompare.kernels import ck, sk


def random_smooth_function(k, rng, a=0.1, b=1.4, num=41):
    """Either an F_k member plus a signed strictly F_k-convex bump, or a random trig sum."""
    t = np.linspace(a, b, num)
    if rng.random() < 0.5:
        alpha, beta = rng.normal(size=2)
        gamma = rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 1.0)
        # exp(2t) has q'' + k q = (4 + k) q > 0 for |k| <= 1
        values = alpha * sk(k, t) + beta * ck(k, t) + gamma * np.exp(2 * t)
    else:
        amp = rng.normal(size=4) / (1 + np.arange(4))
        freq = rng.uniform(0.5, 4.0, size=4)
        phase = rng.uniform(0, 2 * math.pi, size=4)
        values = np.sum(amp[:, None] * np.sin(freq[:, None] * t[None, :] + phase[:, None]), axis=0)
    return SampledFunction(t, values)


def random_comparison_function(k, rng, num=401):
    """f'' = -k f - g with random g >= 0, f(0) = 1, integrated to its first zero l.

    Returns the samples on [0, l] and l.
    """
    lam0 = (math.sqrt(-k) if k < 0 else 0.0) + rng.uniform(0.2, 2.0)
    a = rng.uniform(0, 1.5, size=3)
    w = rng.uniform(0.5, 5.0, size=3)
    c = rng.uniform(0, 2 * math.pi, size=3)

    def g(t):
        return float(np.sum(a * (1.0 + np.sin(w * t + c))))

    def rhs(t, y):
        return [y[1], -k * y[0] - g(t)]

    def hit(t, y):
        return y[0]
    hit.terminal, hit.direction = True, -1

    sol = solve_ivp(rhs, (0.0, 50.0), [1.0, -lam0], method="DOP853", rtol=1e-12, atol=1e-14,
                    events=hit, dense_output=True)
    l = float(sol.t_events[0][0])
    t = np.linspace(0.0, l, num)
    f = sol.sol(t)[0]
    f[0], f[-1] = 1.0, max(f[-1], 0.0)
    return SampledFunction(t, f), l
