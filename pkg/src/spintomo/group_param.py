"""Quaternion algebra and the SU(2) / SO(3) parameterizations.

Quaternions are plain ``numpy`` arrays with components ``(a0, a1, a2, a3)``
in the last axis, so most functions accept a single quaternion of shape
``(4,)`` or a batch of shape ``(N, 4)``.

Conventions
-----------
* Hamilton product, ``e_i e_j = eps_ijk e_k``.
* ``U(a) = [[a0 + i a3, a2 + i a1], [-a2 + i a1, a0 - i a3]]``, i.e.
  ``a0 I + a1 e1 + a2 e2 + a3 e3`` with ``e1 = [[0, i], [i, 0]]``,
  ``e2 = [[0, 1], [-1, 0]]``, ``e3 = diag(i, -i)``.  These matrices obey
  ``e1 e2 = -e3``, so ``U`` reverses products:
  ``U(a * b) == U(b) @ U(a)``.
* Euler angles are ZYZ, ``U(phi, theta, psi) = Uz(psi) Uy(theta) Uz(phi)``
  with ``Uz(x) = diag(exp(ix/2), exp(-ix/2))`` and
  ``Uy(x) = [[cos x/2, sin x/2], [-sin x/2, cos x/2]]``.
* Adjoint action: ``U(a) (v . sigma) U(a)^dagger == (R(a)^T v) . sigma``.
  The tomographic axis is therefore ``n(a) = R(a) k``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NormalizationError

UNIT_TOL = 1e-12
# |alpha| or |beta| below this puts a quaternion on the gimbal locus.
GIMBAL_TOL = 1e-14

TWO_PI = 2.0 * np.pi

E0 = np.array([1.0, 0.0, 0.0, 0.0])
E1 = np.array([0.0, 1.0, 0.0, 0.0])
E2 = np.array([0.0, 0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 0.0, 1.0])

# 2x2 matrix images of the quaternion units.
BASIS_MATRICES = (
    np.eye(2, dtype=complex),
    np.array([[0, 1j], [1j, 0]]),
    np.array([[0, 1], [-1, 0]], dtype=complex),
    np.array([[1j, 0], [0, -1j]]),
)


class EulerAngles(NamedTuple):
    """ZYZ Euler angles in radians.

    ``degenerate`` is set by :func:`quaternion_to_euler` when the input lies
    on the gimbal locus (theta in {0, pi}) and psi was pinned to zero.
    """

    phi: float
    theta: float
    psi: float
    degenerate: bool = False


class CayleyKlein(NamedTuple):
    alpha: complex
    beta: complex


def as_quaternion(a) -> np.ndarray:
    q = np.asarray(a, dtype=float)
    if q.shape[-1:] != (4,):
        raise ValueError(f"quaternion must have 4 components, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("quaternion components must be finite")
    return q


def as_unit_quaternion(a, tol: float = UNIT_TOL) -> np.ndarray:
    q = as_quaternion(a)
    err = np.abs(np.sum(q * q, axis=-1) - 1.0)
    if np.any(err > tol):
        raise NormalizationError(
            f"quaternion is not of unit norm (|1 - |a|^2| = {np.max(err):.3e})"
        )
    return q


def quat_mul(a, b) -> np.ndarray:
    """Hamilton product ``a * b`` (broadcasts over leading axes)."""
    a = as_quaternion(a)
    b = as_quaternion(b)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def quat_conj(a) -> np.ndarray:
    q = as_quaternion(a)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def quat_norm(a):
    return np.linalg.norm(as_quaternion(a), axis=-1)


def canonical_quaternion(a) -> np.ndarray:
    """Pick the representative of ``{a, -a}`` with a0 >= 0.

    Ties are broken on a3, then a2, then a1: the first component (in that
    order) that is not zero is made positive.
    """
    q = np.array(as_quaternion(a), dtype=float)
    flat = q.reshape(-1, 4)
    for row in flat:
        for k in (0, 3, 2, 1):
            if abs(row[k]) > 1e-15:
                if row[k] < 0:
                    row *= -1.0
                break
    return flat.reshape(q.shape)


def su2_from_quaternion(a) -> np.ndarray:
    q = as_unit_quaternion(a)
    a0, a1, a2, a3 = np.moveaxis(q, -1, 0)
    u = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = a0 + 1j * a3
    u[..., 0, 1] = a2 + 1j * a1
    u[..., 1, 0] = -a2 + 1j * a1
    u[..., 1, 1] = a0 - 1j * a3
    return u


def check_su2(u, tol: float = UNIT_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape[-2:] != (2, 2):
        raise ValueError(f"SU(2) matrix must be 2x2, got shape {u.shape}")
    eye = np.eye(2)
    unit_err = np.max(np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - eye))
    det_err = np.max(np.abs(np.linalg.det(u) - 1.0))
    if unit_err > tol or det_err > tol:
        raise NormalizationError(
            f"matrix is not in SU(2) (unitarity error {unit_err:.3e}, det error {det_err:.3e})"
        )
    return u


def quaternion_from_su2_raw(u) -> np.ndarray:
    """Read the quaternion off an SU(2) matrix without choosing a sign."""
    u = np.asarray(u, dtype=complex)
    return np.stack(
        [u[..., 0, 0].real, u[..., 0, 1].imag, u[..., 0, 1].real, u[..., 0, 0].imag],
        axis=-1,
    )


def quaternion_from_su2(u) -> np.ndarray:
    """Inverse of :func:`su2_from_quaternion`, canonical representative."""
    u = check_su2(u)
    return canonical_quaternion(quaternion_from_su2_raw(u))


def euler_to_su2(e) -> np.ndarray:
    phi, theta, psi = np.asarray(e[0], float), np.asarray(e[1], float), np.asarray(e[2], float)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    shape = np.broadcast(phi, theta, psi).shape
    u = np.empty(shape + (2, 2), dtype=complex)
    u[..., 0, 0] = np.exp(0.5j * (psi + phi)) * c
    u[..., 0, 1] = np.exp(0.5j * (psi - phi)) * s
    u[..., 1, 0] = -np.exp(-0.5j * (psi - phi)) * s
    u[..., 1, 1] = np.exp(-0.5j * (psi + phi)) * c
    return u


def quaternion_from_euler(e, canonical: bool = False) -> np.ndarray:
    """Quaternion of ``euler_to_su2(e)``.

    With ``canonical=False`` the exact lift is returned, which keeps the
    sign information carried by the 4*pi period of psi.
    """
    q = quaternion_from_su2_raw(euler_to_su2(e))
    return canonical_quaternion(q) if canonical else q


def cayley_klein_from_euler(e) -> CayleyKlein:
    phi, theta, psi = e[0], e[1], e[2]
    alpha = np.exp(0.5j * (psi + phi)) * np.cos(theta / 2)
    beta = np.exp(0.5j * (psi - phi)) * np.sin(theta / 2)
    return CayleyKlein(alpha, beta)


def cayley_klein_from_quaternion(a) -> CayleyKlein:
    # alpha = a0 + i a3, beta = a2 + i a1
    q = as_unit_quaternion(a)
    return CayleyKlein(q[..., 0] + 1j * q[..., 3], q[..., 2] + 1j * q[..., 1])


def quaternion_from_cayley_klein(ck: CayleyKlein) -> np.ndarray:
    alpha = np.asarray(ck[0], dtype=complex)
    beta = np.asarray(ck[1], dtype=complex)
    q = np.stack([alpha.real, beta.imag, beta.real, alpha.imag], axis=-1)
    return as_unit_quaternion(q)


def su2_from_cayley_klein(ck: CayleyKlein) -> np.ndarray:
    alpha = np.asarray(ck[0], dtype=complex)
    beta = np.asarray(ck[1], dtype=complex)
    u = np.empty(np.broadcast(alpha, beta).shape + (2, 2), dtype=complex)
    u[..., 0, 0] = alpha
    u[..., 0, 1] = beta
    u[..., 1, 0] = -np.conj(beta)
    u[..., 1, 1] = np.conj(alpha)
    return u


def _wrap(x, lo):
    """Reduce angles into ``[lo, lo + 2 pi)``."""
    y = np.mod(np.asarray(x, float) - lo, TWO_PI)
    # mod can return exactly 2 pi through round-off
    y = np.where(y >= TWO_PI, 0.0, y)
    return y + lo


def euler_arrays_from_quaternion(a):
    """Batch ZYZ decomposition.

    Returns ``(phi, theta, psi, sign, degenerate)`` arrays such that
    ``euler_to_su2(phi, theta, psi) == sign * su2_from_quaternion(a)``.
    """
    q = as_unit_quaternion(a)
    alpha = q[..., 0] + 1j * q[..., 3]
    beta = q[..., 2] + 1j * q[..., 1]
    abs_a = np.abs(alpha)
    abs_b = np.abs(beta)
    theta = 2.0 * np.arctan2(abs_b, abs_a)
    arg_a = np.angle(alpha)
    arg_b = np.angle(beta)
    north = abs_b <= GIMBAL_TOL
    south = abs_a <= GIMBAL_TOL
    phi = np.where(north, 2.0 * arg_a, np.where(south, -2.0 * arg_b, arg_a - arg_b))
    psi = np.where(north | south, 0.0, arg_a + arg_b)
    theta = np.where(north, 0.0, np.where(south, np.pi, theta))
    phi = _wrap(phi, 0.0)
    psi = _wrap(psi, -np.pi)
    # The angle reduction may land on -U; recover the sign from alpha or beta.
    ck = cayley_klein_from_euler((phi, theta, psi))
    ref = np.where(abs_a >= abs_b, ck.alpha * np.conj(alpha), ck.beta * np.conj(beta))
    sign = np.where(ref.real >= 0, 1.0, -1.0)
    return phi, theta, psi, sign, north | south


def quaternion_to_euler(a) -> EulerAngles:
    """ZYZ angles of a unit quaternion, matching ``U(a)`` up to global sign.

    Angles are derived from the Cayley-Klein form: ``theta = 2 atan2(|b|, |a|)``,
    ``psi + phi = 2 arg(alpha)``, ``psi - phi = 2 arg(beta)``; then reduced to
    phi in [0, 2pi), psi in [-pi, pi).  On the gimbal locus psi is set to 0
    and the result is flagged ``degenerate``.
    """
    q = as_unit_quaternion(a)
    if q.ndim != 1:
        raise ValueError("quaternion_to_euler takes a single quaternion")
    phi, theta, psi, _, degenerate = euler_arrays_from_quaternion(q)
    return EulerAngles(float(phi), float(theta), float(psi), bool(degenerate))


def euler_from_su2(u) -> EulerAngles:
    return quaternion_to_euler(quaternion_from_su2(u))


def quaternion_to_euler_printed(a):
    """Alternative closed-form angles with arctan2/arcsin.

    Kept for comparison only.  These are Tait-Bryan style formulas and do not
    reproduce ``U(a)`` under the ZYZ decomposition used everywhere else.
    """
    q0, q1, q2, q3 = as_unit_quaternion(a)
    phi = np.arctan2(2 * (q0 * q1 + q2 * q3), 1 - 2 * (q1**2 + q2**2))
    if phi < 0:
        phi += TWO_PI
    theta = np.arcsin(np.clip(2 * (q0 * q2 - q3 * q1), -1.0, 1.0)) + np.pi / 2
    psi = np.arctan2(2 * (q0 * q3 + q1 * q2), 1 - 2 * (q2**2 + q3**2))
    return EulerAngles(float(phi), float(theta), float(psi))


def rotation_from_euler(phi, theta) -> np.ndarray:
    """``Rz(phi) Ry(theta)``; its third column is the tomographic axis."""
    cp, sp = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [cp * ct, -sp, cp * st],
            [sp * ct, cp, sp * st],
            [-st, 0.0, ct],
        ]
    )


def rotation_from_quaternion(a) -> np.ndarray:
    q = as_unit_quaternion(a)
    a0, a1, a2, a3 = np.moveaxis(q, -1, 0)
    r = np.empty(q.shape[:-1] + (3, 3))
    r[..., 0, 0] = 1 - 2 * a2**2 - 2 * a3**2
    r[..., 0, 1] = 2 * a1 * a2 - 2 * a0 * a3
    r[..., 0, 2] = 2 * a1 * a3 + 2 * a0 * a2
    r[..., 1, 0] = 2 * a1 * a2 + 2 * a0 * a3
    r[..., 1, 1] = 1 - 2 * a1**2 - 2 * a3**2
    r[..., 1, 2] = 2 * a2 * a3 - 2 * a0 * a1
    r[..., 2, 0] = 2 * a1 * a3 - 2 * a0 * a2
    r[..., 2, 1] = 2 * a2 * a3 + 2 * a0 * a1
    r[..., 2, 2] = 1 - 2 * a1**2 - 2 * a2**2
    return r


def direction_from_euler(phi, theta) -> np.ndarray:
    phi = np.asarray(phi, float)
    theta = np.asarray(theta, float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0 * phi], axis=-1)


def direction_from_quaternion(a) -> np.ndarray:
    return rotation_from_quaternion(a)[..., :, 2]


def haar_sample(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on S^3: normalized standard normal 4-vectors."""
    shape = (4,) if size is None else (size, 4)
    g = rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)
