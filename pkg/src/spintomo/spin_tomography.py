"""Spin tomograms and density-matrix reconstruction.

The tomogram of a spin-j state for group element ``U`` and outcome ``m`` is
``T_m(U) = <m| L(U) rho L(U)^dagger |m>`` where ``L`` is the spin-j
representation with ``L = U`` for j = 1/2.  It depends on ``U`` only through
the axis ``n = R(a) k`` (equivalently Euler ``phi, theta``).

Evaluators
----------
Reconstruction and the functionals below take *evaluators*: callables that
receive a whole batch of nodes and return one value per node.

* Euler form: ``evaluator(m, phi, theta) -> array``
* Quaternion form: ``evaluator(m, quaternions) -> array`` with
  ``quaternions`` of shape ``(N, 4)``.

:func:`euler_evaluator` and :func:`quaternion_evaluator` build exact ones
from a density matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    InvalidStateError,
    NumericalError,
    QuadratureOrderError,
    QuantumNumberError,
    RankDeficientError,
)
from .group_param import (
    as_unit_quaternion,
    canonical_quaternion,
    direction_from_euler,
    direction_from_quaternion,
    quaternion_from_su2,
)
from .quadrature import QuadratureRule, integrate_values
from .spin_state import spin_of
from .wigner import (
    _three_j_twice,
    projections,
    spin_rotation,
    spin_rotation_euler,
    twice,
    wigner_D_matrix,
    wigner_D_matrix_from_quaternion,
)

VALUE_TOL = 1e-10

EulerEvaluator = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
QuaternionEvaluator = Callable[[float, np.ndarray], np.ndarray]


class TomogramSample(NamedTuple):
    m: float
    param: np.ndarray
    value: float


@dataclass
class SpinTomogram:
    """Sampled tomogram: outcome, canonical unit quaternion and probability."""

    j: float
    samples: list[TomogramSample] = field(default_factory=list)

    def validate(self, tol: float = 1e-10) -> None:
        """Check positivity and per-parameter normalization of complete groups."""
        groups: dict[tuple, list[float]] = {}
        for s in self.samples:
            if s.value < -1e-12 or s.value > 1 + 1e-12:
                raise InvalidStateError(f"tomogram value {s.value} outside [0, 1]")
            key = tuple(np.round(canonical_quaternion(s.param), 12))
            groups.setdefault(key, []).append(s.value)
        d = twice(self.j) + 1
        for key, vals in groups.items():
            if len(vals) == d and abs(sum(vals) - 1.0) > tol:
                raise InvalidStateError(f"tomogram at {key} sums to {sum(vals)}")


def _m_index(j, m) -> int:
    tj, tm = twice(j), twice(m)
    if abs(tm) > tj or (tj - tm) % 2:
        raise QuantumNumberError(f"outcome m = {m} is out of range for j = {j}")
    return (tj - tm) // 2


def _checked_probability(raw: np.ndarray) -> np.ndarray:
    lo, hi = np.min(raw), np.max(raw)
    if lo < -VALUE_TOL or hi > 1 + VALUE_TOL:
        raise NumericalError(f"tomogram value {lo if lo < 0 else hi!r} outside [0, 1]")
    return np.clip(raw, 0.0, 1.0)


def _diag_element(lift: np.ndarray, rho: np.ndarray, i: int) -> np.ndarray:
    row = lift[..., i, :]
    raw = np.einsum("...a,ab,...b->...", row, rho, np.conj(row))
    return _checked_probability(raw.real)


def tomogram_from_lift(rho, lift, m) -> np.ndarray:
    """``<m| L rho L^dagger |m>`` for an already lifted spin-j matrix ``L``."""
    rho = np.asarray(rho, dtype=complex)
    return _diag_element(np.asarray(lift), rho, _m_index(spin_of(rho), m))


def tomogram_quaternion(rho, a, m):
    rho = np.asarray(rho, dtype=complex)
    j = spin_of(rho)
    i = _m_index(j, m)
    lift = spin_rotation(j, as_unit_quaternion(a))
    out = _diag_element(lift, rho, i)
    return float(out) if out.ndim == 0 else out


def tomogram_euler(rho, m, phi, theta, psi=0.0):
    rho = np.asarray(rho, dtype=complex)
    j = spin_of(rho)
    i = _m_index(j, m)
    lift = spin_rotation_euler(j, (phi, theta, psi))
    out = _diag_element(lift, rho, i)
    return float(out) if out.ndim == 0 else out


def tomogram_value(rho, u, m) -> float:
    """Tomogram for a group element given as SU(2) matrix or quaternion.

    A 2x2 matrix is used directly for j = 1/2 and otherwise converted to its
    canonical quaternion and lifted.  A ``(2j+1)``-square matrix other than
    2x2 is taken as an already lifted representation.
    """
    rho = np.asarray(rho, dtype=complex)
    u = np.asarray(u)
    d = rho.shape[0]
    if u.shape == (4,):
        return tomogram_quaternion(rho, u, m)
    if u.shape == (2, 2):
        if d == 2:
            return float(tomogram_from_lift(rho, u, m))
        return tomogram_quaternion(rho, quaternion_from_su2(u), m)
    if u.shape == (d, d):
        return float(tomogram_from_lift(rho, u, m))
    raise ValueError(f"cannot interpret group element of shape {u.shape}")


def qubit_tomogram_closed_form(s, phi, theta):
    s = np.asarray(s, dtype=float)
    return 0.5 * (1.0 + direction_from_euler(phi, theta) @ s)


def qubit_tomogram_quaternion(s, a):
    s = np.asarray(s, dtype=float)
    return 0.5 * (1.0 + direction_from_quaternion(as_unit_quaternion(a)) @ s)


def euler_evaluator(rho) -> EulerEvaluator:
    rho = np.asarray(rho, dtype=complex)

    def evaluate(m, phi, theta):
        return tomogram_euler(rho, m, phi, theta)

    return evaluate


def quaternion_evaluator(rho) -> QuaternionEvaluator:
    rho = np.asarray(rho, dtype=complex)

    def evaluate(m, a):
        return tomogram_quaternion(rho, a, m)

    return evaluate


# --- reconstruction kernel -------------------------------------------------
#
# K(m, n) = sum_{k=0}^{2j} sum_{q=-k}^{k} (2k+1)^2 (-1)^{(j-m)+(j-m2')}
#           (j j k; m -m 0) (j j k; m1' -m2' q) L^k_{0q}(n) |m1'><m2'|
#
# where L^k is the spin-k representation of the measurement rotation (its
# (0, q) element depends on phi, theta only).


@lru_cache(maxsize=None)
def _kernel_tables(tj: int):
    """Outcome coefficients ``(d, K)`` and operator stack ``(K, d, d)``.

    ``K`` runs over all ``(k, q)`` pairs with k = 0..2j, q = k..-k.
    """
    d = tj + 1
    tms = list(range(tj, -tj - 1, -2))
    labels = [(k, q) for k in range(0, tj + 1) for q in range(k, -k - 1, -1)]
    coef = np.zeros((d, len(labels)))
    ops = np.zeros((len(labels), d, d))
    for c, (k, q) in enumerate(labels):
        tk, tq = 2 * k, 2 * q
        for i, tm in enumerate(tms):
            phase = -1.0 if ((tj - tm) // 2) % 2 else 1.0
            coef[i, c] = (2 * k + 1) ** 2 * phase * _three_j_twice(tj, tj, tk, tm, -tm, 0)
        for r, tm1 in enumerate(tms):
            for s, tm2 in enumerate(tms):
                val = _three_j_twice(tj, tj, tk, tm1, -tm2, tq)
                if val:
                    phase = -1.0 if ((tj - tm2) // 2) % 2 else 1.0
                    ops[c, r, s] = phase * val
    coef.setflags(write=False)
    ops.setflags(write=False)
    return coef, ops, tuple(labels)


def _kernel_harmonics_euler(tj: int, phi, theta) -> np.ndarray:
    """``L^k_{0q}`` at Euler axis angles, shape ``(N, K)``."""
    cols = []
    for k in range(0, tj + 1):
        dmat = wigner_D_matrix(k, (phi, theta, np.zeros_like(phi)))
        # L^k = D^dagger, so L_{0q} = conj(D_{q0})
        cols.append(np.conj(dmat[..., :, k]))
    return np.concatenate(cols, axis=-1)


def _kernel_harmonics_quaternion(tj: int, a) -> np.ndarray:
    cols = []
    for k in range(0, tj + 1):
        dmat = wigner_D_matrix_from_quaternion(k, a)
        cols.append(np.conj(dmat[..., :, k]))
    return np.concatenate(cols, axis=-1)


def reconstruction_kernel(j, m, e) -> np.ndarray:
    """Operator kernel at Euler angles ``e = (phi, theta[, psi])``.

    Broadcasts over array-valued angles; psi does not enter.
    """
    tj = twice(j)
    i = _m_index(j, m)
    coef, ops, _ = _kernel_tables(tj)
    phi = np.asarray(e[0], dtype=float)
    theta = np.asarray(e[1], dtype=float)
    g = _kernel_harmonics_euler(tj, phi, theta)
    return np.einsum("...c,c,crs->...rs", g, coef[i], ops)


def reconstruction_kernel_quaternion(j, m, a) -> np.ndarray:
    tj = twice(j)
    i = _m_index(j, m)
    coef, ops, _ = _kernel_tables(tj)
    g = _kernel_harmonics_quaternion(tj, as_unit_quaternion(a))
    return np.einsum("...c,c,crs->...rs", g, coef[i], ops)


def _require_order(rule: QuadratureRule, domain: str, j) -> None:
    if rule.domain != domain:
        raise ValueError(f"expected a rule on {domain}, got {rule.domain}")
    band = 2 * twice(j)  # 4j
    if rule.order is not None and rule.order < band:
        raise QuadratureOrderError(
            f"rule of order {rule.order} cannot integrate band limit {band} (j = {j})"
        )


def _assemble(tj: int, rule: QuadratureRule, values: np.ndarray, harmonics: np.ndarray):
    coef, ops, _ = _kernel_tables(tj)
    # moments[m, c] = average over nodes of T(m, n) L_c(n)
    moments = integrate_values(rule, values.T[:, :, None] * harmonics[:, None, :])
    rho = np.einsum("mc,mc,crs->rs", moments, coef, ops)
    return 0.5 * (rho + rho.conj().T)


def _evaluate_all(evaluator, j, *nodes) -> np.ndarray:
    vals = np.stack([np.asarray(evaluator(m, *nodes), dtype=float) for m in projections(j)])
    if not np.all(np.isfinite(vals)):
        raise NumericalError("tomogram evaluator returned non-finite values")
    return vals


def reconstruct_density_euler(evaluator: EulerEvaluator, j, rule: QuadratureRule) -> np.ndarray:
    """Integrate tomogram times kernel over the sphere with an S^2 rule."""
    _require_order(rule, "S2", j)
    tj = twice(j)
    phi, theta = rule.nodes[:, 0], rule.nodes[:, 1]
    values = _evaluate_all(evaluator, j, phi, theta)
    return _assemble(tj, rule, values, _kernel_harmonics_euler(tj, phi, theta))


def reconstruct_density_quaternion(
    evaluator: QuaternionEvaluator, j, rule: QuadratureRule
) -> np.ndarray:
    """Same as :func:`reconstruct_density_euler` with Haar integration over S^3."""
    _require_order(rule, "S3", j)
    tj = twice(j)
    values = _evaluate_all(evaluator, j, rule.nodes)
    return _assemble(tj, rule, values, _kernel_harmonics_quaternion(tj, rule.nodes))


def purity_from_tomogram(evaluator: QuaternionEvaluator, j, rule: QuadratureRule) -> float:
    """``(2j+1) * avg[sum_m T_m^2 - sum_m T_m T_{m+1}]`` over the Haar measure."""
    _require_order(rule, "S3", j)
    t = _evaluate_all(evaluator, j, rule.nodes)
    integrand = np.sum(t * t, axis=0) - np.sum(t[:-1] * t[1:], axis=0)
    return float((twice(j) + 1) * integrate_values(rule, integrand))


def hs_lower_bound(evaluator1: QuaternionEvaluator, evaluator2: QuaternionEvaluator, j, m, grid) -> float:
    """``max_n |T1(m, n) - T2(m, n)| / sqrt(2)`` over a grid of quaternions."""
    _m_index(j, m)
    if isinstance(grid, QuadratureRule):
        if grid.domain != "S3":
            raise ValueError("hs_lower_bound takes quaternion nodes")
        nodes = grid.nodes
    else:
        nodes = np.asarray(grid, dtype=float)
    if nodes.size == 0:
        raise ValueError("empty parameter grid")
    diff = np.asarray(evaluator1(m, nodes)) - np.asarray(evaluator2(m, nodes))
    return float(np.max(np.sqrt(0.5 * diff**2)))


# --- linear inversion oracle ------------------------------------------------


def traceless_hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) traceless Hermitian basis, ``(d^2-1, d, d)``."""
    basis = []
    for r in range(d):
        for s in range(r + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[r, s] = sym[s, r] = 1 / math.sqrt(2)
            asym = np.zeros((d, d), dtype=complex)
            asym[r, s], asym[s, r] = -1j / math.sqrt(2), 1j / math.sqrt(2)
            basis += [sym, asym]
    for k in range(1, d):
        diag = np.zeros(d)
        diag[:k] = 1.0
        diag[k] = -k
        basis.append(np.diag(diag / math.sqrt(k * (k + 1))).astype(complex))
    return np.array(basis)


def sample_tomogram(rho, params) -> SpinTomogram:
    """Exact samples for every outcome at each quaternion in ``params``."""
    rho = np.asarray(rho, dtype=complex)
    j = spin_of(rho)
    params = canonical_quaternion(as_unit_quaternion(np.atleast_2d(params)))
    lift = spin_rotation(j, params)
    samples = []
    for p, lp in zip(params, lift):
        for i, m in enumerate(projections(j)):
            samples.append(TomogramSample(float(m), p, float(_diag_element(lp, rho, i))))
    return SpinTomogram(float(j), samples)


def reconstruct_linear_inversion(tomogram: SpinTomogram, rcond: float = 1e-10) -> np.ndarray:
    """Least-squares state from tomogram samples.

    Solves ``Tr(rho P_i) = value_i`` with ``P_i = L^dagger |m><m| L`` over the
    affine space of Hermitian unit-trace matrices, returning the
    minimum-norm solution.  No positivity projection is applied; a
    :class:`RuntimeWarning` is issued if the result is not PSD.
    """
    j = tomogram.j
    d = twice(j) + 1
    if not tomogram.samples:
        raise RankDeficientError("no samples")
    params = np.array([s.param for s in tomogram.samples], dtype=float)
    idx = np.array([_m_index(j, s.m) for s in tomogram.samples])
    values = np.array([s.value for s in tomogram.samples], dtype=float)
    rows = spin_rotation(j, as_unit_quaternion(params))[np.arange(len(idx)), idx, :]
    # P_i = conj(row)^T row  ->  Tr(B P_i) = row B row^dagger
    basis = traceless_hermitian_basis(d)
    design = np.einsum("na,kab,nb->nk", rows, basis, np.conj(rows)).real
    rhs = values - 1.0 / d
    rank = np.linalg.matrix_rank(design, tol=rcond * max(1.0, np.abs(design).max()))
    if rank < d * d - 1:
        raise RankDeficientError(
            f"sample set has rank {rank + 1}, need {d * d} for j = {j}"
        )
    x, *_ = np.linalg.lstsq(design, rhs, rcond=rcond)
    rho = np.eye(d, dtype=complex) / d + np.einsum("k,kab->ab", x, basis)
    rho = 0.5 * (rho + rho.conj().T)
    lam_min = np.linalg.eigvalsh(rho).min()
    if lam_min < -1e-10:
        warnings.warn(f"linear-inversion estimate is not PSD (min eigenvalue {lam_min:.3e})", RuntimeWarning)
    return rho
