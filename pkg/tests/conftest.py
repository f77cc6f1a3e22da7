import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp


@pytest.fixture
def rng():
    return np.random.default_rng(20181123)


def random_state_matrix(rng):
    """Random valid qubit density matrix (uniform direction, radius in the Bloch ball)."""
    v = rng.normal(size=3)
    v *= rng.uniform(0, 0.5) / np.linalg.norm(v)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0 + 0j, -1.0])
    return 0.5 * np.eye(2) + v[0] * sx + v[1] * sy + v[2] * sz


def ode_kernel(a, gamma, t_eval):
    """Independent oracle: integrate L'' + 2 gamma L' + 4 a^2 L = 0, L(0)=1, L'(0)=0."""
    t_eval = np.atleast_1d(np.asarray(t_eval, dtype=float))
    sol = solve_ivp(
        lambda t, y: [y[1], -2 * gamma * y[1] - 4 * a * a * y[0]],
        (0.0, float(t_eval.max())),
        [1.0, 0.0],
        method="DOP853",
        rtol=1e-13,
        atol=1e-14,
        t_eval=t_eval,
    )
    return sol.y[0]


def binary_entropy(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -x * np.log2(x) - (1 - x) * np.log2(1 - x)
    return np.where((x <= 0) | (x >= 1), 0.0, h)


def omega_root(alpha):
    """Smallest root of 2 alpha p^2 - 2 (1 + alpha) p + 1 by bisection on [0, 1]."""
    f = lambda p: 2 * alpha * p * p - 2 * (1 + alpha) * p + 1
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


PI = math.pi
