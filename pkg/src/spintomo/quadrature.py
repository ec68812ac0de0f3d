"""Normalized integration rules on S^2 and on S^3 (Haar measure of SU(2)).

S^2 nodes are ``(phi, theta)`` rows; S^3 nodes are unit quaternions.  Every
rule carries weights summing to one, so integrals are averages.

``order`` is the largest integer band limit integrated exactly: spherical
harmonic degree for S^2 and the spin ``J`` of integer-spin D-functions for
S^3.  Monte Carlo rules have ``order=None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalError
from .group_param import (
    direction_from_euler,
    direction_from_quaternion,
    haar_sample,
    quaternion_from_euler,
)


@dataclass(frozen=True)
class QuadratureRule:
    domain: str
    nodes: np.ndarray
    weights: np.ndarray
    order: int | None

    def __post_init__(self):
        if self.domain not in ("S2", "S3"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def directions(self) -> np.ndarray:
        """Unit vectors n of the nodes, shape ``(N, 3)``."""
        if self.domain == "S2":
            return direction_from_euler(self.nodes[:, 0], self.nodes[:, 1])
        return direction_from_quaternion(self.nodes)


def _normalized(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return w / _pairwise_sum(w)


def _gauss_legendre_theta(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return np.arccos(x), w / 2.0


def product_rule_s2(L: int) -> QuadratureRule:
    """Gauss-Legendre in cos(theta) (L nodes) times 2L equispaced phi nodes."""
    if L < 1:
        raise ValueError("L must be at least 1")
    theta, wt = _gauss_legendre_theta(L)
    phi = 2.0 * np.pi * np.arange(2 * L) / (2 * L)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(wt, np.full(2 * L, 1.0 / (2 * L)))
    nodes = np.column_stack([pp.ravel(), tt.ravel()])
    return QuadratureRule("S2", nodes, _normalized(ww.ravel()), 2 * L - 1)


def product_rule_s3(L: int) -> QuadratureRule:
    """Haar product rule in ZYZ angles over the full SU(2) cover.

    Gauss-Legendre in cos(theta) (L nodes), 2L equispaced phi in [0, 2pi)
    and 2L equispaced psi in [0, 4pi).  Exact for D-functions with
    ``J <= L - 1/2``.  Nodes are the exact quaternion lifts (no sign
    canonicalization), so odd functions of ``a`` integrate to zero.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    theta, wt = _gauss_legendre_theta(L)
    phi = 2.0 * np.pi * np.arange(2 * L) / (2 * L)
    psi = 4.0 * np.pi * np.arange(2 * L) / (2 * L)
    tt, pp, ss = np.meshgrid(theta, phi, psi, indexing="ij")
    q = quaternion_from_euler((pp.ravel(), tt.ravel(), ss.ravel()))
    q = q / np.linalg.norm(q, axis=-1, keepdims=True)
    ww = np.broadcast_to(wt[:, None, None], tt.shape).ravel()
    return QuadratureRule("S3", q, _normalized(ww), L - 1)


def monte_carlo_rule_s3(N: int, rng: np.random.Generator) -> QuadratureRule:
    if N < 1:
        raise ValueError("N must be at least 1")
    return QuadratureRule("S3", haar_sample(rng, N), np.full(N, 1.0 / N), None)


def _pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Sum over the first axis with numpy's pairwise reduction.

    numpy only uses pairwise summation along a contiguous reduction axis, so
    the node axis is moved last before reducing.
    """
    values = np.asarray(values)
    flat = values.reshape(values.shape[0], -1)
    out = np.ascontiguousarray(flat.T).sum(axis=-1)
    return out.reshape(values.shape[1:])


def integrate(rule: QuadratureRule, f: Callable[[np.ndarray], np.ndarray]):
    """Weighted average of ``f`` over the rule.

    ``f`` receives all nodes at once (``rule.nodes``) and must return an array
    whose leading axis runs over the nodes; trailing axes are kept.
    """
    values = np.asarray(f(rule.nodes))
    if values.ndim == 0:
        values = np.full(len(rule), values)
    return integrate_values(rule, values)


def integrate_values(rule: QuadratureRule, values) -> np.ndarray:
    values = np.asarray(values)
    if values.shape[:1] != (len(rule),):
        raise ValueError(f"expected {len(rule)} node values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise NumericalError("integrand is not finite at some quadrature nodes")
    w = rule.weights.reshape((-1,) + (1,) * (values.ndim - 1))
    return _pairwise_sum(w * values)
