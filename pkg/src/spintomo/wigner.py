"""Wigner small-d and D functions and 3j symbols.

Quantum numbers may be given as ints, floats, :class:`fractions.Fraction` or
strings such as ``"3/2"``; internally everything is stored as twice the
value so that half-integer bookkeeping is exact.

Conventions: ``D^j_{mn}(phi, theta, psi) = exp(-i m phi) d^j_{mn}(theta) exp(-i n psi)``
with ``d^{1/2}(b) = [[cos b/2, -sin b/2], [sin b/2, cos b/2]]`` (rows and
columns ordered m = +1/2, -1/2).  With this choice the spin-1/2 matrix is the
conjugate transpose of :func:`~spintomo.group_param.euler_to_su2`, so the
spin-j representation of a group element ``U`` is ``D^j(angles of U)^dagger``;
see :func:`spin_rotation`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import QuantumNumberError
from .group_param import as_unit_quaternion, euler_arrays_from_quaternion

MAX_TWICE_J = 64
# log(n!) for n = 0 .. 2 * MAX_TWICE_J + 1; read-only after import.
_LOG_FACT = np.array([math.lgamma(n + 1) for n in range(2 * MAX_TWICE_J + 2)])
_LOG_FACT.setflags(write=False)


def twice(x) -> int:
    """Return ``2 x`` as an int, raising if ``x`` is not a half-integer."""
    if isinstance(x, str):
        try:
            x = Fraction(x.strip())
        except ValueError as exc:
            raise QuantumNumberError(f"cannot parse quantum number {x!r}") from exc
    if isinstance(x, (int, np.integer)):
        return 2 * int(x)
    if isinstance(x, Fraction):
        t = 2 * x
        if t.denominator != 1:
            raise QuantumNumberError(f"{x} is not a half-integer")
        return int(t)
    t = 2.0 * float(x)
    if not math.isfinite(t):
        raise QuantumNumberError(f"{x!r} is not a half-integer")
    r = round(t)
    if abs(t - r) > 1e-9:
        raise QuantumNumberError(f"{x!r} is not a half-integer")
    return int(r)


def projections(j) -> np.ndarray:
    """``m = j, j-1, ..., -j`` (basis order used for all matrices)."""
    tj = twice(j)
    return np.arange(tj, -tj - 1, -2) / 2


def _index(tj: int, tm: int) -> int:
    return (tj - tm) // 2


def _check_jm(tj: int, tm: int) -> None:
    if tj < 0 or abs(tm) > tj or (tj - tm) % 2:
        raise QuantumNumberError(f"invalid (j, m) = ({tj}/2, {tm}/2)")
    if tj > MAX_TWICE_J:
        raise QuantumNumberError(f"j = {tj}/2 exceeds the supported maximum {MAX_TWICE_J}/2")


def _lf(n: int) -> float:
    return _LOG_FACT[n]


@lru_cache(maxsize=None)
def _small_d_terms(tj: int):
    """Terms ``(row, col, coef, cos_power, sin_power)`` of the factorial sum."""
    j2 = tj
    terms = []
    for tmp in range(tj, -tj - 1, -2):
        for tm in range(tj, -tj - 1, -2):
            jpmp, jmmp = (j2 + tmp) // 2, (j2 - tmp) // 2
            jpm, jmm = (j2 + tm) // 2, (j2 - tm) // 2
            dm = (tmp - tm) // 2
            pre = 0.5 * (_lf(jpmp) + _lf(jmmp) + _lf(jpm) + _lf(jmm))
            for s in range(max(0, -dm), min(jpm, jmmp) + 1):
                log_mag = pre - (_lf(jpm - s) + _lf(s) + _lf(dm + s) + _lf(jmmp - s))
                sign = -1.0 if (dm + s) % 2 else 1.0
                terms.append(
                    (_index(tj, tmp), _index(tj, tm), sign * math.exp(log_mag), j2 - dm - 2 * s, dm + 2 * s)
                )
    return tuple(terms)


def wigner_d_matrix(j, beta) -> np.ndarray:
    """Small-d matrix ``d^j(beta)``; ``beta`` may be an array (output ``(..., d, d)``)."""
    tj = twice(j)
    _check_jm(tj, tj)
    beta = np.asarray(beta, dtype=float)
    c = np.cos(beta / 2)
    s = np.sin(beta / 2)
    cpow = np.stack([c**k for k in range(tj + 1)], axis=-1)
    spow = np.stack([s**k for k in range(tj + 1)], axis=-1)
    d = np.zeros(beta.shape + (tj + 1, tj + 1))
    for row, col, coef, pc, ps in _small_d_terms(tj):
        d[..., row, col] += coef * cpow[..., pc] * spow[..., ps]
    return d


def wigner_small_d(j, m, n, beta) -> float:
    tj, tm, tn = twice(j), twice(m), twice(n)
    _check_jm(tj, tm)
    _check_jm(tj, tn)
    return wigner_d_matrix(j, beta)[..., _index(tj, tm), _index(tj, tn)]


def wigner_D_matrix(j, e) -> np.ndarray:
    """``D^j(phi, theta, psi)``; angles may be broadcastable arrays."""
    phi, theta, psi = (np.asarray(x, dtype=float) for x in e[:3])
    phi, theta, psi = np.broadcast_arrays(phi, theta, psi)
    m = projections(j)
    d = wigner_d_matrix(j, theta)
    left = np.exp(-1j * phi[..., None] * m)
    right = np.exp(-1j * psi[..., None] * m)
    return left[..., :, None] * d * right[..., None, :]


def wigner_D(j, m, n, e) -> complex:
    tj, tm, tn = twice(j), twice(m), twice(n)
    _check_jm(tj, tm)
    _check_jm(tj, tn)
    phi, theta, psi = e[:3]
    d = wigner_small_d(j, m, n, theta)
    return np.exp(-0.5j * tm * phi) * d * np.exp(-0.5j * tn * psi)


def wigner_D_matrix_from_quaternion(j, a) -> np.ndarray:
    """D-matrix at the Euler angles of ``a``, with the double-cover sign kept.

    Equal to ``wigner_D_matrix(j, quaternion_to_euler(a))`` times
    ``(+-1)^(2j)``, where the sign is the one relating ``euler_to_su2`` of the
    returned angles to ``U(a)``.  Hence ``D(-a) = (-1)^(2j) D(a)`` and
    ``D(a * b) = D(a) @ D(b)``.
    """
    q = as_unit_quaternion(a)
    tj = twice(j)
    phi, theta, psi, sign, _ = euler_arrays_from_quaternion(q)
    dmat = wigner_D_matrix(j, (phi, theta, psi))
    if tj % 2:
        dmat = dmat * sign[..., None, None]
    return dmat


def wigner_D_from_quaternion(j, m, n, a) -> complex:
    tj, tm, tn = twice(j), twice(m), twice(n)
    _check_jm(tj, tm)
    _check_jm(tj, tn)
    return wigner_D_matrix_from_quaternion(j, a)[..., _index(tj, tm), _index(tj, tn)]


def spin_rotation(j, a) -> np.ndarray:
    """Spin-j representation of ``U(a)``: equals ``U(a)`` itself for j = 1/2."""
    dmat = wigner_D_matrix_from_quaternion(j, a)
    return np.conj(np.swapaxes(dmat, -1, -2))


def spin_rotation_euler(j, e) -> np.ndarray:
    """Spin-j representation of ``euler_to_su2(e)``."""
    dmat = wigner_D_matrix(j, e)
    return np.conj(np.swapaxes(dmat, -1, -2))


@lru_cache(maxsize=None)
def _three_j_twice(tj1, tj2, tj3, tm1, tm2, tm3) -> float:
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if tj3 > tj1 + tj2 or tj3 < abs(tj1 - tj2) or (tj1 + tj2 + tj3) % 2:
        return 0.0
    # all of these are integers once the selection rules hold
    a = (tj1 + tj2 - tj3) // 2
    b = (tj1 - tj2 + tj3) // 2
    c = (-tj1 + tj2 + tj3) // 2
    big = (tj1 + tj2 + tj3) // 2 + 1
    log_pre = 0.5 * (
        _lf(a) + _lf(b) + _lf(c) - _lf(big)
        + _lf((tj1 + tm1) // 2) + _lf((tj1 - tm1) // 2)
        + _lf((tj2 + tm2) // 2) + _lf((tj2 - tm2) // 2)
        + _lf((tj3 + tm3) // 2) + _lf((tj3 - tm3) // 2)
    )
    k1 = (tj3 - tj2 + tm1) // 2
    k2 = (tj3 - tj1 - tm2) // 2
    k3 = a
    k4 = (tj1 - tm1) // 2
    k5 = (tj2 + tm2) // 2
    total = 0.0
    for t in range(max(0, -k1, -k2), min(k3, k4, k5) + 1):
        log_den = _lf(t) + _lf(k1 + t) + _lf(k2 + t) + _lf(k3 - t) + _lf(k4 - t) + _lf(k5 - t)
        term = math.exp(log_pre - log_den)
        total += -term if t % 2 else term
    phase = (tj1 - tj2 - tm3) // 2
    return -total if phase % 2 else total


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol by the Racah sum (zero outside the selection rules)."""
    tw = [twice(x) for x in (j1, j2, j3, m1, m2, m3)]
    for tj, tm in zip(tw[:3], tw[3:]):
        _check_jm(tj, tm)
    return _three_j_twice(*tw)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """``<j1 m1; j2 m2 | j m>`` expressed through the 3j symbol."""
    tj1, tj2, tj = twice(j1), twice(j2), twice(j)
    tm1, tm2, tm = twice(m1), twice(m2), twice(m)
    for tjj, tmm in ((tj1, tm1), (tj2, tm2), (tj, tm)):
        _check_jm(tjj, tmm)
    phase = (tj1 - tj2 + tm) // 2
    val = math.sqrt(tj + 1) * _three_j_twice(tj1, tj2, tj, tm1, tm2, -tm)
    return -val if phase % 2 else val
