"""Quantum Fisher information of dephased qubits and its flow.

The QFI of a state with Bloch vector ``zeta`` (``rho = I/2 + zeta . sigma``)
with respect to a parameter is evaluated as

    F = (zeta . d zeta)^2 / (1 - |zeta|^2) + |d zeta|^2.

For a dephased state the closed forms depend only on the factor ``f`` and the
polar angle ``theta``; the flow is the derivative of F along the channel
abscissa (time for RTN, ``p`` for NMD).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .channels import (
    NmdParams,
    RtnParams,
    _check_factor,
    _check_p,
    _check_time,
    rtn_memory_derivative,
    rtn_memory_factor,
)
from .errors import DomainError, InputError
from .qstate import BlochVector

POSITIVE_FLOW_TOL = 1e-12


@dataclass(frozen=True)
class ParamDerivative:
    """A Bloch vector together with its derivative w.r.t. the inferred parameter."""

    zeta: BlochVector
    d_zeta: np.ndarray

    def __post_init__(self):
        z = self.zeta if isinstance(self.zeta, BlochVector) else BlochVector(self.zeta)
        dz = np.array(self.d_zeta, dtype=float).reshape(3)
        if not np.all(np.isfinite(dz)):
            raise DomainError("Bloch derivative has non-finite components")
        object.__setattr__(self, "zeta", z)
        object.__setattr__(self, "d_zeta", dz)


@dataclass(frozen=True)
class FlowSample:
    abscissa: float
    f_theta: float
    f_phi: float
    flow_theta: float
    flow_phi: float


class FlowPair(NamedTuple):
    flow_theta: float
    flow_phi: float


def qfi_from_bloch(d: ParamDerivative) -> float:
    z, dz = d.zeta.zeta, d.d_zeta
    n2 = float(z @ z)
    if n2 >= 1.0:
        raise DomainError("|zeta| >= 1: QFI denominator vanishes")
    dot = float(z @ dz)
    return dot * dot / (1.0 - n2) + float(dz @ dz)


def dephased_bloch(f: float, theta: float, phi: float) -> BlochVector:
    s = 0.5 * f * math.sin(theta)
    return BlochVector([s * math.cos(phi), s * math.sin(phi), 0.5 * math.cos(theta)])


def dephased_bloch_derivative(f: float, theta: float, phi: float, param: str) -> ParamDerivative:
    """Analytic derivative of the dephased Bloch vector w.r.t. ``theta`` or ``phi``."""
    zeta = dephased_bloch(f, theta, phi)
    if param == "theta":
        c = 0.5 * f * math.cos(theta)
        dz = [c * math.cos(phi), c * math.sin(phi), -0.5 * math.sin(theta)]
    elif param == "phi":
        s = 0.5 * f * math.sin(theta)
        dz = [-s * math.sin(phi), s * math.cos(phi), 0.0]
    else:
        raise InputError(f"unknown parameter {param!r}; expected 'theta' or 'phi'")
    return ParamDerivative(zeta, dz)


def _denominator(f: float, theta: float) -> float:
    # 7 - f^2 + (f^2 - 1) cos 2theta, >= 6 for |f| <= 1
    return 7.0 - f * f + (f * f - 1.0) * math.cos(2.0 * theta)


def qfi_theta_closed(f: float, theta: float) -> float:
    f = _check_factor(f)
    return 1.0 + 3.0 * (f * f - 4.0) / (2.0 * _denominator(f, theta))


def qfi_phi_closed(f: float, theta: float) -> float:
    f = _check_factor(f)
    return 0.25 * f * f * math.sin(theta) ** 2


def _chain_flows(f: float, df: float, theta: float) -> FlowPair:
    # d/ds of the closed forms: dF_theta = 18 f f' cos^2 / D^2, dF_phi = f f' sin^2 / 2
    ffp = f * df
    den = _denominator(f, theta)
    return FlowPair(18.0 * ffp * math.cos(theta) ** 2 / den**2, 0.5 * ffp * math.sin(theta) ** 2)


def qfi_flow_rtn(params: RtnParams, t: float, theta: float) -> FlowPair:
    """``(dF_theta/dt, dF_phi/dt)`` under telegraph noise, valid on every damping branch."""
    t = float(_check_time(t))
    return _chain_flows(rtn_memory_factor(params, t), rtn_memory_derivative(params, t), theta)


def qfi_flow_nmd(params: NmdParams, p: float, theta: float) -> FlowPair:
    """``(dF_theta/dp, dF_phi/dp)`` for the NMD map."""
    p = _check_p(p)
    al = params.alpha
    omega = 2.0 * al * (p - 1.0) * p - 2.0 * p + 1.0
    slope = al * (2.0 * p - 1.0) - 1.0
    c2 = math.cos(theta) ** 2
    q = 2.0 * (p - 1.0) * p * (al * (p - 1.0) - 1.0) * (al * p - 1.0)
    den = q * math.cos(2.0 * theta) - q + 3.0
    flow_theta = 9.0 * c2 * omega * slope / den**2
    flow_phi = math.sin(theta) ** 2 * omega * slope
    return FlowPair(flow_theta, flow_phi)


# Verbatim transcriptions of the published RTN flow expressions, kept for
# auditing against the finite-difference derivative of the QFI.


def rtn_flow_theta_printed(params: RtnParams, t: float, theta: float, reading: str = "bracket") -> float:
    """Published dF_theta/dt.

    ``reading="bracket"`` takes the symbol Lambda(t) inside the formula as the
    undamped bracket ``cos(g mu t) + sin(g mu t)/mu`` (equivalently
    ``e^{gamma t} Lambda``); ``reading="kernel"`` substitutes the full kernel.
    Only the bracket reading reproduces the derivative of F_theta.
    """
    g, mu = params.gamma, params.mu
    if mu == 0:
        raise DomainError("printed RTN flow is undefined on the critical branch")
    x = g * mu * t
    if reading == "bracket":
        lam = cmath.cos(x) + cmath.sin(x) / mu
    elif reading == "kernel":
        lam = rtn_memory_factor(params, t)
    else:
        raise InputError(f"unknown reading {reading!r}")
    e2 = math.exp(2.0 * g * t)
    num = -18.0 * g * mu**2 * (mu**2 + 1.0) * math.cos(theta) ** 2 * e2 * cmath.sin(x) * mu * lam
    den = (mu**2 * (math.cos(2.0 * theta) - 7.0) * e2 + 2.0 * math.sin(theta) ** 2 * mu**2 * lam**2) ** 2
    return (num / den).real


def rtn_flow_phi_printed(params: RtnParams, t: float, theta: float, form: str = "final") -> float:
    """Published dF_phi/dt, either the ``middle`` (``sin^2 theta Lambda'/2``) or ``final`` expression."""
    if form == "middle":
        return 0.5 * math.sin(theta) ** 2 * rtn_memory_derivative(params, t)
    if form != "final":
        raise InputError(f"unknown form {form!r}")
    g, mu = params.gamma, params.mu
    if mu == 0:
        raise DomainError("printed RTN flow is undefined on the critical branch")
    x = g * mu * t
    if x == 0:
        return 0.0
    val = (
        g * (mu**2 + 1.0) * math.sin(theta) ** 2 * math.exp(-2.0 * g * t)
        * cmath.sin(x) ** 2 * (mu * cmath.cos(x) / cmath.sin(x) + 1.0) / (2.0 * mu**2)
    )
    return val.real


# ------------------------------------------------------------ numerics


def numeric_flow(func: Callable[[float], float], x: float, h: float | None = None) -> float:
    """Central-difference derivative ``(F(x+h) - F(x-h)) / 2h``.

    With ``h=None`` the step is ``1e-5 max(1, |x|)`` and a Richardson
    extrapolation over ``h, h/2`` is used when the two estimates differ by
    more than 1e-4 relative.
    """
    if h is not None:
        if not h > 0:
            raise DomainError("step h must be positive")
        return (func(x + h) - func(x - h)) / (2.0 * h)
    h = 1e-5 * max(1.0, abs(x))
    d1 = (func(x + h) - func(x - h)) / (2.0 * h)
    d2 = (func(x + h / 2) - func(x - h / 2)) / h
    if abs(d1 - d2) > 1e-4 * max(abs(d1), abs(d2)):
        return (4.0 * d2 - d1) / 3.0
    return d1


def positive_intervals(xs: Sequence[float], ys: Sequence[float], threshold: float = POSITIVE_FLOW_TOL) -> list[tuple[float, float]]:
    """Maximal intervals where ``ys > threshold``.

    Interior endpoints are placed by linear interpolation between bracketing
    samples. NaN samples count as "not positive"; an interval ending next to
    a NaN sample ends at that sample's abscissa.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("abscissa and value series must be 1-D and the same length")
    if len(x) < 2:
        raise InputError("need at least two samples")
    if np.any(np.diff(x) < 0):
        raise InputError("series must be sorted by abscissa")
    pos = np.where(np.isnan(y), False, y > threshold)

    def edge(i_in: int, i_out: int) -> float:
        if np.isnan(y[i_out]):
            return float(x[i_out])
        y0, y1 = y[i_out], y[i_in]
        return float(x[i_out] + (threshold - y0) * (x[i_in] - x[i_out]) / (y1 - y0))

    out = []
    i, n = 0, len(x)
    while i < n:
        if not pos[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and pos[j + 1]:
            j += 1
        start = float(x[0]) if i == 0 else edge(i, i - 1)
        end = float(x[-1]) if j == n - 1 else edge(j, j + 1)
        out.append((start, end))
        i = j + 1
    return out


def positive_flow_intervals(series: Sequence[FlowSample], which: str = "phi") -> list[tuple[float, float]]:
    """Intervals of positive QFI flow (``which`` is ``'phi'`` or ``'theta'``)."""
    if which not in ("phi", "theta"):
        raise InputError(f"unknown flow {which!r}")
    xs = [s.abscissa for s in series]
    ys = [s.flow_phi if which == "phi" else s.flow_theta for s in series]
    return positive_intervals(xs, ys)
