"""Channel figures of merit: average gate fidelity and Holevo quantity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausSet, NmdParams, _check_factor, _check_p, apply_channel
from .errors import InputError, UnsupportedDimensionError
from .qstate import DensityMatrix, binary_entropy_bits, vn_entropy_bits

_LN8 = math.log(8.0)


@dataclass(frozen=True)
class Ensemble:
    """Classical mixture ``{(p_i, rho_i)}``."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(p), r) for p, r in self.members)
        if not members:
            raise InputError("ensemble is empty")
        for p, r in members:
            if not (0.0 <= p <= 1.0):
                raise InputError(f"probability {p!r} outside [0, 1]")
            if not isinstance(r, DensityMatrix):
                raise InputError("ensemble members must be DensityMatrix instances")
        total = math.fsum(p for p, _ in members)
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "members", members)


def avg_gate_fidelity(kraus: KrausSet, d: int = 2) -> float:
    """``(d + sum_k |Tr K_k|^2) / (d (d + 1))``.

    The squared trace magnitude is what reproduces ``(2 + f)/3`` for a
    dephasing channel; an unsquared sum would not.
    """
    if d != 2:
        raise UnsupportedDimensionError(f"only d = 2 is supported, got d = {d}")
    kraus.check()
    s = sum(abs(np.trace(k)) ** 2 for k in kraus)
    return float((d + s) / (d * (d + 1)))


def gate_fidelity_dephased(f: float) -> float:
    f = _check_factor(f)
    return (1.0 + abs(1.0 + f)) / 3.0


def holevo(ensemble: Ensemble, kraus: KrausSet) -> float:
    """Holevo quantity (bits) of the ensemble after it passes through the channel."""
    outputs = [(p, apply_channel(kraus, r)) for p, r in ensemble.members]
    avg = sum(p * np.asarray(r) for p, r in outputs)
    avg = DensityMatrix(avg / np.trace(avg).real)
    return vn_entropy_bits(avg) - math.fsum(p * vn_entropy_bits(r) for p, r in outputs)


def dephased_spectrum(f: float, theta: float) -> tuple[float, float]:
    """``1/4 (2 +- sqrt(2) sqrt(1 + f^2 + (1 - f^2) cos 2 theta))``."""
    f = _check_factor(f)
    arg = max(1.0 + f * f + (1.0 - f * f) * math.cos(2.0 * theta), 0.0)
    r = math.sqrt(2.0) * math.sqrt(arg)
    return 0.25 * (2.0 + r), 0.25 * (2.0 - r)


def holevo_dephased_closed(f: float, theta: float) -> float:
    lp, lm = dephased_spectrum(f, theta)
    return binary_entropy_bits(lp)


def nmd_holevo_argument(params: NmdParams, p: float) -> float:
    """``A = 1 - 2p/3 + 2 alpha p (p - 1)``; the NMD Holevo row is ``H2(A)``."""
    p = _check_p(p)
    return 1.0 - 2.0 * p / 3.0 + 2.0 * params.alpha * p * (p - 1.0)


def holevo_nmd_closed(params: NmdParams, p: float) -> float:
    """Tabulated NMD Holevo expression, in bits.

    ``[4p(1 - 3 alpha (p-1)) artanh(4 alpha (p-1) p - 4p/3 + 1)
    - 3 ln(2 alpha (p-1) p - 2p/3 + 1)] / ln 8``. The artanh is taken in its
    logarithmic form with ``1 -+ x`` assembled from exact factors, so the
    ``0 * inf`` limit at ``p -> 0`` never arises numerically.
    """
    p = _check_p(p)
    if p == 0.0:
        return 0.0
    al = params.alpha
    pref = 4.0 * p * (1.0 - 3.0 * al * (p - 1.0))
    one_minus_a = (2.0 * p / 3.0) * (1.0 - 3.0 * al * (p - 1.0))
    a = 1.0 - one_minus_a
    # x = 2A - 1: 1 + x = 2A, 1 - x = 2(1 - A)
    artanh = 0.5 * math.log(a / one_minus_a)
    return (pref * artanh - 3.0 * math.log1p(-one_minus_a)) / _LN8
