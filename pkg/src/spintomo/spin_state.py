"""Spin-j density matrices, the qubit Stokes form and simple functionals.

A density matrix is a ``(2j+1, 2j+1)`` complex array whose basis is ordered
``|j, j>, |j, j-1>, ..., |j, -j>``.  The spin is implied by the dimension.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidStateError
from .group_param import BASIS_MATRICES

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def spin_of(rho) -> float:
    d = np.shape(rho)[-1]
    return (d - 1) / 2


def validate_density(rho, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array or raise :class:`InvalidStateError`."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > HERMITIAN_TOL:
        raise InvalidStateError(f"density matrix is not Hermitian (error {herm_err:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(rho).min()
    if lam_min < -psd_tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return rho


def density_from_stokes(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (3,):
        raise InvalidStateError("Stokes vector must have three components")
    if s @ s > 1.0 + 1e-12:
        raise InvalidStateError(f"Stokes vector has length {np.sqrt(s @ s):.6g} > 1")
    return 0.5 * (IDENTITY + s[0] * SIGMA_X + s[1] * SIGMA_Y + s[2] * SIGMA_Z)


def stokes_from_density(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidStateError("Stokes parameters are defined for j = 1/2 only")
    return np.array([np.trace(rho @ p).real for p in PAULI])


def purity_direct(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def hs_distance(rho1, rho2) -> float:
    """Hilbert-Schmidt (Frobenius) distance."""
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise InvalidStateError(f"dimension mismatch: {rho1.shape} vs {rho2.shape}")
    diff = rho1 - rho2
    return float(np.sqrt(np.real(np.trace(diff.conj().T @ diff))))


def quaternion_coefficients_of_qubit(rho) -> np.ndarray:
    """Complex coefficients ``c`` with ``rho = sum_k c[k] e_k``.

    Uses ``e_k = i sigma_k``; for a state ``c = (1/2, -i Sx/2, -i Sy/2, -i Sz/2)``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidStateError("quaternion form is defined for j = 1/2 only")
    # the e_k are orthogonal with Tr(e_k^dagger e_l) = 2 delta_kl
    return np.array([np.trace(e.conj().T @ rho) / 2 for e in BASIS_MATRICES])


def qubit_from_quaternion_coefficients(c) -> np.ndarray:
    return sum(ck * e for ck, e in zip(c, BASIS_MATRICES))


def random_density(j, rng: np.random.Generator) -> np.ndarray:
    """Ginibre-distributed full-rank state, ``G G^dagger / Tr(G G^dagger)``."""
    d = int(round(2 * float(j))) + 1
    if d < 2 or abs((d - 1) / 2 - float(j)) > 1e-12:
        raise InvalidStateError(f"spin must be a positive half-integer, got {j!r}")
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def maximally_mixed(j) -> np.ndarray:
    d = int(round(2 * float(j))) + 1
    return np.eye(d, dtype=complex) / d


def basis_state(j, m) -> np.ndarray:
    """Pure state ``|j, m><j, m|``."""
    d = int(round(2 * float(j))) + 1
    idx = int(round(float(j) - float(m)))
    if not 0 <= idx < d or abs(float(j) - float(m) - idx) > 1e-12:
        raise InvalidStateError(f"m = {m} is not a valid projection for j = {j}")
    rho = np.zeros((d, d), dtype=complex)
    rho[idx, idx] = 1.0
    return rho
