"""Single-qubit states and the state-level information measures.

Conventions: the computational basis has sigma_z diagonal, and the Bloch
vector ``zeta`` is normalised as ``rho = I/2 + zeta . sigma`` so that
``|zeta| <= 1/2`` (pure states sit on the sphere of radius one half).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import UnsupportedDimensionError, ValidityError

VALIDITY_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (IDENTITY, *PAULIS):
    _m.setflags(write=False)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated 2x2 qubit density matrix.

    Construction checks hermiticity, unit trace and positivity (via the
    determinant and the diagonal) at ``VALIDITY_TOL``.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.shape != (2, 2):
            raise ValidityError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidityError("density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > VALIDITY_TOL:
            raise ValidityError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > VALIDITY_TOL:
            raise ValidityError(f"trace is {np.trace(m).real!r}, expected 1")
        det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
        if det < -VALIDITY_TOL or m[0, 0].real < -VALIDITY_TOL or m[1, 1].real < -VALIDITY_TOL:
            raise ValidityError("density matrix is not positive semidefinite")
        object.__setattr__(self, "entries", m)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __getitem__(self, idx):
        return self.entries[idx]

    def allclose(self, other: "DensityMatrix | np.ndarray", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, np.asarray(other), rtol=0.0, atol=atol))

    def __repr__(self):
        return f"DensityMatrix({np.array2string(self.entries, precision=6)})"


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Bloch vector in the ``rho = I/2 + zeta . sigma`` convention."""

    zeta: np.ndarray

    def __post_init__(self):
        z = np.array(self.zeta, dtype=float, copy=True).reshape(3)
        if not np.all(np.isfinite(z)):
            raise ValidityError("Bloch vector has non-finite components")
        z.setflags(write=False)
        object.__setattr__(self, "zeta", z)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.zeta))

    def __iter__(self):
        return iter(self.zeta.tolist())


class Spectrum(NamedTuple):
    lambda_plus: float
    lambda_minus: float


def pure_qubit(theta: float, phi: float) -> DensityMatrix:
    """Pure state ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` as a density matrix."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    off = s * c * complex(math.cos(phi), -math.sin(phi))
    return DensityMatrix(np.array([[c * c, off], [off.conjugate(), s * s]]))


def bloch_of(rho: DensityMatrix) -> BlochVector:
    m = np.asarray(rho)
    return BlochVector([0.5 * np.trace(m @ s).real for s in PAULIS])


def density_of(zeta: BlochVector | np.ndarray) -> DensityMatrix:
    z = zeta.zeta if isinstance(zeta, BlochVector) else np.asarray(zeta, dtype=float)
    if np.linalg.norm(z) > 0.5 + VALIDITY_TOL:
        raise ValidityError(f"|zeta| = {np.linalg.norm(z):.6g} exceeds 1/2; not a physical state")
    m = 0.5 * IDENTITY + z[0] * SIGMA_X + z[1] * SIGMA_Y + z[2] * SIGMA_Z
    return DensityMatrix(m)


def purity(rho: DensityMatrix) -> float:
    m = np.asarray(rho)
    return float(np.sum(np.abs(m) ** 2))


def mixedness(rho: DensityMatrix) -> float:
    """Mixedness ``2 (1 - Tr rho^2)``: 0 for pure states, 1 for I/2."""
    return 2.0 * (1.0 - purity(rho))


def coherence_l1(rho: DensityMatrix) -> float:
    """l1-norm of coherence, the sum of absolute off-diagonal entries."""
    m = np.asarray(rho)
    return float(abs(m[0, 1]) + abs(m[1, 0]))


def spectrum(rho: DensityMatrix) -> Spectrum:
    """Eigenvalues from the trace/determinant closed form."""
    m = np.asarray(rho)
    tr = np.trace(m).real
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    root = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
    return Spectrum(0.5 * (tr + root), 0.5 * (tr - root))


def binary_entropy_bits(x: float) -> float:
    """``-x log2 x - (1-x) log2(1-x)`` with ``0 log 0 = 0``."""
    return _h(x) + _h(1.0 - x)


def _h(x: float) -> float:
    return -x * math.log2(x) if x > 0.0 else 0.0


def vn_entropy_bits(rho: DensityMatrix) -> float:
    lp, lm = spectrum(rho)
    return _h(lp) + _h(lm)


def beta_balance(rho: DensityMatrix, d: int = 2) -> float:
    """Coherence-mixedness balance ``C^2/(d-1)^2 + M`` (at most 1)."""
    if d != 2:
        raise UnsupportedDimensionError(f"only d = 2 is supported, got d = {d}")
    return coherence_l1(rho) ** 2 / (d - 1) ** 2 + mixedness(rho)
