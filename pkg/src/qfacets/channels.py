"""Kraus machinery and the two dephasing channels.

Random telegraph noise (RTN) dephases with the memory kernel

    Lambda(t) = exp(-gamma t) [cos(w t) + (gamma / w) sin(w t)],  w = sqrt(4 a^2 - gamma^2),

the solution of ``L'' + 2 gamma L' + 4 a^2 L = 0`` with ``L(0) = 1, L'(0) = 0``.
When ``2a < gamma`` the frequency is imaginary and the kernel continues to its
hyperbolic form; ``2a = gamma`` is the critically damped case.

Non-Markovian dephasing (NMD) is parameterised by ``alpha`` in [0, 1] and a
time-like ``p`` in [0, 1/2], with ``kappa = p [1 + alpha (1 - p)]`` and
off-diagonal factor ``Omega = 1 - 2 kappa``.

Both channels act as ``rho -> (1+f)/2 rho + (1-f)/2 sigma_z rho sigma_z``;
they differ only in the dephasing factor ``f``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import CompletenessError, DomainError, SingularityError, ValidityError
from .qstate import IDENTITY, SIGMA_Z, DensityMatrix

COMPLETENESS_TOL = 1e-10
SINGULARITY_GUARD = 1e-9
LAMBDA_ZERO_TOL = 1e-12
BRANCH_TOL = 1e-12
FACTOR_TOL = 1e-12

# switch from cosh/sinh to plain exponentials beyond this argument (overflow guard)
_HYPERBOLIC_SWITCH = 20.0


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Ordered Kraus operators of a single-qubit channel."""

    operators: tuple

    def __post_init__(self):
        ops = []
        for k in self.operators:
            k = np.array(k, dtype=complex, copy=True)
            if k.shape != (2, 2):
                raise ValidityError(f"Kraus operator must be 2x2, got {k.shape}")
            k.setflags(write=False)
            ops.append(k)
        if not ops:
            raise ValidityError("empty Kraus set")
        object.__setattr__(self, "operators", tuple(ops))

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    @property
    def deviation(self) -> float:
        """Max-entry norm of ``sum_k K_k^dag K_k - I``."""
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(s - IDENTITY)))

    def is_complete(self, tol: float = COMPLETENESS_TOL) -> bool:
        return self.deviation <= tol

    def check(self, tol: float = COMPLETENESS_TOL) -> "KrausSet":
        dev = self.deviation
        if dev > tol:
            raise CompletenessError(dev)
        return self


@dataclass(frozen=True)
class RtnParams:
    """Telegraph-noise coupling ``a`` and switching rate ``gamma`` (both > 0)."""

    a: float
    gamma: float

    def __post_init__(self):
        for name in ("a", "gamma"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"RTN parameter {name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def branch(self) -> str:
        """'underdamped' (2a > gamma), 'overdamped' (2a < gamma) or 'critical'."""
        disc = 4.0 * self.a**2 - self.gamma**2
        if abs(disc) < BRANCH_TOL * self.gamma**2:
            return "critical"
        return "underdamped" if disc > 0 else "overdamped"

    @property
    def omega(self) -> float:
        """``sqrt(|4a^2 - gamma^2|)``; zero on the critical branch."""
        if self.branch == "critical":
            return 0.0
        return math.sqrt(abs(4.0 * self.a**2 - self.gamma**2))

    @property
    def mu(self) -> complex:
        """``sqrt((2a/gamma)^2 - 1)``, imaginary on the overdamped branch."""
        x = (2.0 * self.a / self.gamma) ** 2 - 1.0
        return complex(math.sqrt(x), 0.0) if x >= 0 else complex(0.0, math.sqrt(-x))


@dataclass(frozen=True)
class NmdParams:
    alpha: float

    def __post_init__(self):
        v = float(self.alpha)
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"NMD alpha must lie in [0, 1], got {v!r}")
        object.__setattr__(self, "alpha", v)


class RegimeTag(str, enum.Enum):
    MARKOVIAN = "Markovian"
    NON_MARKOVIAN = "NonMarkovian"
    BOUNDARY = "Boundary"

    def __str__(self):
        return self.value


# ---------------------------------------------------------------- RTN kernel


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0):
        raise DomainError("time must be finite and >= 0")
    return t


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def rtn_memory_factor(params: RtnParams, t):
    """Memory kernel ``Lambda(t)`` for all three damping regimes.

    Accepts a scalar or an array of times (t >= 0).
    """
    tt = _check_time(t)
    g, w = params.gamma, params.omega
    branch = params.branch
    if branch == "underdamped":
        out = np.exp(-g * tt) * (np.cos(w * tt) + (g / w) * np.sin(w * tt))
    elif branch == "critical":
        out = np.exp(-g * tt) * (1.0 + g * tt)
    else:
        x = w * tt
        small = x < _HYPERBOLIC_SWITCH
        xs = np.where(small, x, 0.0)
        direct = np.exp(-g * tt) * (np.cosh(xs) + (g / w) * np.sinh(xs))
        # cosh and sinh split into growing/decaying exponentials; the decaying part is < e^-40 here
        split = 0.5 * (1.0 + g / w) * np.exp((w - g) * tt) + 0.5 * (1.0 - g / w) * np.exp(-(w + g) * tt)
        out = np.where(small, direct, split)
    return _scalar_or_array(out, t)


def rtn_memory_derivative(params: RtnParams, t):
    """Analytic ``dLambda/dt``; ``-(4a^2/w) e^{-gamma t} sin(w t)`` on the underdamped branch."""
    tt = _check_time(t)
    g, w, a2 = params.gamma, params.omega, params.a**2
    branch = params.branch
    if branch == "underdamped":
        out = -(4.0 * a2 / w) * np.exp(-g * tt) * np.sin(w * tt)
    elif branch == "critical":
        out = -(g * g) * tt * np.exp(-g * tt)
    else:
        x = w * tt
        small = x < _HYPERBOLIC_SWITCH
        xs = np.where(small, x, 0.0)
        direct = np.exp(-g * tt) * np.sinh(xs)
        split = 0.5 * (np.exp((w - g) * tt) - np.exp(-(w + g) * tt))
        out = -(4.0 * a2 / w) * np.where(small, direct, split)
    return _scalar_or_array(out, t)


def rtn_zero_crossings(params: RtnParams, t_max: float) -> list[float]:
    """Times in ``[0, t_max]`` where ``Lambda`` vanishes (underdamped branch only)."""
    if params.branch != "underdamped":
        return []
    g, w = params.gamma, params.omega
    first = (math.pi - math.atan2(w, g)) / w
    out = []
    k = 0
    while True:
        tk = first + k * math.pi / w
        if tk > t_max:
            return out
        out.append(tk)
        k += 1


def _nearest_rtn_zero(params: RtnParams, t: float) -> float | None:
    if params.branch != "underdamped":
        return None
    g, w = params.gamma, params.omega
    first = (math.pi - math.atan2(w, g)) / w
    k = max(0, round((t - first) * w / math.pi))
    return first + k * math.pi / w


def rtn_decoherence_rate(params: RtnParams, t: float) -> float:
    """Canonical dephasing rate ``-Lambda'/(2 Lambda)``.

    Raises:
        SingularityError: if ``e^{gamma t} Lambda(t)`` is within 1e-12 of zero
            or ``t`` is within 1e-9 of a zero crossing; ``location`` holds the
            nearest zero crossing.
    """
    t = float(_check_time(t))
    g, w, a2 = params.gamma, params.omega, params.a**2
    branch = params.branch
    if branch == "critical":
        return g * g * t / (2.0 * (1.0 + g * t))
    if branch == "overdamped":
        th = math.tanh(w * t)
        return (2.0 * a2 / w) * th / (1.0 + (g / w) * th)
    tz = _nearest_rtn_zero(params, t)
    s, c = math.sin(w * t), math.cos(w * t)
    # test the undamped bracket, not Lambda itself: Lambda decays like e^{-gamma t}
    bracket = c + (g / w) * s
    if abs(bracket) <= LAMBDA_ZERO_TOL or abs(t - tz) <= SINGULARITY_GUARD:
        raise SingularityError(tz, f"Lambda(t) vanishes at t = {tz:.12g}; rate is singular")
    return (2.0 * a2 / w) * s / bracket


def rtn_kraus(params: RtnParams, t: float) -> KrausSet:
    lam = rtn_memory_factor(params, t)
    return dephasing_kraus(lam)


def dephasing_kraus(f: float) -> KrausSet:
    """``{sqrt((1+f)/2) I, sqrt((1-f)/2) sigma_z}`` for a dephasing factor ``f``."""
    f = _check_factor(f)
    return KrausSet((math.sqrt((1.0 + f) / 2.0) * IDENTITY, math.sqrt((1.0 - f) / 2.0) * SIGMA_Z))


# ---------------------------------------------------------------- NMD map


def _check_p(p) -> float:
    p = float(p)
    if not (0.0 <= p <= 0.5):
        raise DomainError(f"NMD parameter p must lie in [0, 1/2], got {p!r}")
    return p


def nmd_kappa(params: NmdParams, p: float) -> float:
    p = _check_p(p)
    return p * (1.0 + params.alpha * (1.0 - p))


def nmd_omega(params: NmdParams, p: float) -> float:
    """Off-diagonal factor ``Omega = 1 - 2 kappa = 2 alpha p^2 - 2 (1 + alpha) p + 1``."""
    return 1.0 - 2.0 * nmd_kappa(params, p)


def nmd_omega_derivative(params: NmdParams, p: float) -> float:
    p = _check_p(p)
    return 2.0 * (params.alpha * (2.0 * p - 1.0) - 1.0)


def nmd_kraus(params: NmdParams, p: float) -> KrausSet:
    k = nmd_kappa(params, p)
    return KrausSet((math.sqrt(1.0 - k) * IDENTITY, math.sqrt(k) * SIGMA_Z))


def nmd_critical_points(params: NmdParams) -> tuple[float, float] | None:
    """Roots ``(r_minus, r_plus)`` of ``Omega(p)``; ``None`` when ``alpha == 0``."""
    al = params.alpha
    if al == 0.0:
        return None
    r_plus = (1.0 + al + math.sqrt(1.0 + al * al)) / (2.0 * al)
    # r_minus * r_plus = 1 / (2 alpha); avoids cancellation at small alpha
    r_minus = 1.0 / (2.0 * al * r_plus)
    return r_minus, r_plus


def _omega_root(params: NmdParams) -> float:
    crit = nmd_critical_points(params)
    return 0.5 if crit is None else crit[0]


def nmd_decoherence_rate(params: NmdParams, p: float) -> float:
    """Canonical rate ``delta(p) = -Omega'/(2 Omega)``, singular at ``r_minus``."""
    p = _check_p(p)
    root = _omega_root(params)
    if abs(p - root) <= SINGULARITY_GUARD:
        raise SingularityError(root, f"Omega(p) vanishes at p = {root:.12g}; rate is singular")
    return -nmd_omega_derivative(params, p) / (2.0 * nmd_omega(params, p))


# ---------------------------------------------------------------- shared


def _check_factor(f: float) -> float:
    f = float(f)
    if not (abs(f) <= 1.0 + FACTOR_TOL):
        raise DomainError(f"dephasing factor must lie in [-1, 1], got {f!r}")
    return max(-1.0, min(1.0, f))



def apply_channel(kraus: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    """``sum_k K rho K^dag`` after checking completeness."""
    kraus.check()
    m = np.asarray(rho)
    out = sum(k @ m @ k.conj().T for k in kraus)
    return DensityMatrix(0.5 * (out + out.conj().T))


def dephased_state(f: float, theta: float, phi: float) -> DensityMatrix:
    """Pure state ``(theta, phi)`` with its coherences scaled by ``f``."""
    f = _check_factor(f)
    c2, s2 = math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2
    off = 0.5 * f * math.sin(theta) * complex(math.cos(phi), -math.sin(phi))
    return DensityMatrix(np.array([[c2, off], [off.conjugate(), s2]]))


def dephasing_generator(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """``-rho + sigma_z rho sigma_z``, the canonical dephasing generator (rate 1)."""
    m = np.asarray(rho)
    return -m + SIGMA_Z @ m @ SIGMA_Z


@dataclass(frozen=True)
class ChannelPoint:
    """One channel evaluated at one abscissa (time ``t`` for RTN, ``p`` for NMD)."""

    channel: str
    params: Union[RtnParams, NmdParams]
    abscissa: float
    factor: float

    @classmethod
    def rtn(cls, params: RtnParams, t: float) -> "ChannelPoint":
        return cls("RTN", params, float(t), rtn_memory_factor(params, t))

    @classmethod
    def nmd(cls, params: NmdParams, p: float) -> "ChannelPoint":
        return cls("NMD", params, float(p), nmd_omega(params, p))

    def kraus(self) -> KrausSet:
        if self.channel == "RTN":
            return rtn_kraus(self.params, self.abscissa)
        return nmd_kraus(self.params, self.abscissa)

    def decoherence_rate(self) -> float:
        if self.channel == "RTN":
            return rtn_decoherence_rate(self.params, self.abscissa)
        return nmd_decoherence_rate(self.params, self.abscissa)

    def factor_derivative(self) -> float:
        """Derivative of the dephasing factor along the abscissa."""
        if self.channel == "RTN":
            return rtn_memory_derivative(self.params, self.abscissa)
        return nmd_omega_derivative(self.params, self.abscissa)


def classify_regime(point: ChannelPoint) -> RegimeTag:
    """Markovian / non-Markovian label.

    RTN is labelled globally by ``2a`` vs ``gamma`` (non-Markovian iff
    ``2a > gamma``); NMD pointwise by ``p`` vs ``r_minus``.
    """
    if point.channel == "RTN":
        two_a, g = 2.0 * point.params.a, point.params.gamma
        if abs(two_a - g) <= BRANCH_TOL * g:
            return RegimeTag.BOUNDARY
        return RegimeTag.NON_MARKOVIAN if two_a > g else RegimeTag.MARKOVIAN
    crit = nmd_critical_points(point.params)
    if crit is None:
        return RegimeTag.MARKOVIAN
    r_minus = crit[0]
    if abs(point.abscissa - r_minus) <= BRANCH_TOL:
        return RegimeTag.BOUNDARY
    return RegimeTag.NON_MARKOVIAN if point.abscissa > r_minus else RegimeTag.MARKOVIAN


def channel_kraus(channel: str, params, x: float) -> KrausSet:
    return rtn_kraus(params, x) if channel.upper() == "RTN" else nmd_kraus(params, x)


__all__ = [
    "KrausSet", "RtnParams", "NmdParams", "RegimeTag", "ChannelPoint",
    "rtn_memory_factor", "rtn_memory_derivative", "rtn_zero_crossings", "rtn_decoherence_rate",
    "rtn_kraus", "dephasing_kraus", "nmd_kappa", "nmd_omega", "nmd_omega_derivative",
    "nmd_kraus", "nmd_critical_points", "nmd_decoherence_rate", "apply_channel",
    "dephased_state", "dephasing_generator", "classify_regime", "channel_kraus",
]
