"""Symplectic and optical tomograms of single-mode Gaussian states.

Units with hbar = 1, so the vacuum has variance 1/2 in each quadrature and
the uncertainty bound reads ``cov_qq * cov_pp - cov_qp**2 >= 1/4``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InvalidStateError, NormalizationError

UNCERTAINTY_TOL = 1e-12
DET_TOL = 1e-12


@dataclass(frozen=True)
class GaussianState:
    mean_q: float = 0.0
    mean_p: float = 0.0
    cov_qq: float = 0.5
    cov_qp: float = 0.0
    cov_pp: float = 0.5

    def __post_init__(self):
        if not (self.cov_qq > 0 and self.cov_pp > 0):
            raise InvalidStateError("quadrature variances must be positive")
        if self.cov_qq * self.cov_pp - self.cov_qp**2 < 0.25 - UNCERTAINTY_TOL:
            raise InvalidStateError("covariance violates the uncertainty relation")

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.mean_q, self.mean_p])

    @property
    def cov(self) -> np.ndarray:
        return np.array([[self.cov_qq, self.cov_qp], [self.cov_qp, self.cov_pp]])

    @classmethod
    def vacuum(cls) -> "GaussianState":
        return cls()

    @classmethod
    def coherent(cls, q: float, p: float) -> "GaussianState":
        return cls(mean_q=q, mean_p=p)

    @classmethod
    def squeezed(cls, r: float, q: float = 0.0, p: float = 0.0) -> "GaussianState":
        return cls(mean_q=q, mean_p=p, cov_qq=0.5 * np.exp(-2 * r), cov_pp=0.5 * np.exp(2 * r))


@dataclass(frozen=True)
class SymplecticParams:
    """Entries of ``[[mu, eta], [eta_acc, mu_acc]]`` (unit determinant)."""

    mu: float
    eta: float
    eta_acc: float
    mu_acc: float

    def __post_init__(self):
        det = self.mu * self.mu_acc - self.eta * self.eta_acc
        if abs(det - 1.0) > DET_TOL:
            raise NormalizationError(f"symplectic matrix has determinant {det!r}")

    @classmethod
    def rotation(cls, theta: float) -> "SymplecticParams":
        c, s = np.cos(theta), np.sin(theta)
        return cls(mu=c, eta=s, eta_acc=-s, mu_acc=c)


def symplectic_matrix(p: SymplecticParams) -> np.ndarray:
    return np.array([[p.mu, p.eta], [p.eta_acc, p.mu_acc]])


def transform_state(s: GaussianState, p: SymplecticParams) -> GaussianState:
    """Moments of ``(Q, P) = M (q, p)`` for the symplectic matrix ``M``."""
    m = symplectic_matrix(p)
    mean = m @ s.mean
    cov = m @ s.cov @ m.T
    return GaussianState(mean[0], mean[1], cov[0, 0], 0.5 * (cov[0, 1] + cov[1, 0]), cov[1, 1])


def quadrature_moments(s: GaussianState, mu: float, eta: float) -> tuple[float, float]:
    """Mean and variance of ``mu q + eta p``."""
    if mu == 0 and eta == 0:
        raise ValueError("(mu, eta) = (0, 0) does not define a quadrature")
    mean = mu * s.mean_q + eta * s.mean_p
    var = mu * mu * s.cov_qq + 2 * mu * eta * s.cov_qp + eta * eta * s.cov_pp
    return mean, var


def symplectic_tomogram_gaussian(s: GaussianState, Q, mu: float, eta: float):
    """Probability density of the observable ``mu q + eta p`` at ``Q``."""
    mean, var = quadrature_moments(s, mu, eta)
    return stats.norm.pdf(Q, loc=mean, scale=np.sqrt(var))


def optical_tomogram_gaussian(s: GaussianState, Q, theta: float):
    return symplectic_tomogram_gaussian(s, Q, np.cos(theta), np.sin(theta))


def homodyne_sample(s: GaussianState, theta: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw homodyne outcomes at phase ``theta`` by inverse-transform sampling."""
    if count < 1:
        raise ValueError("count must be at least 1")
    mean, var = quadrature_moments(s, np.cos(theta), np.sin(theta))
    # rng.random is in [0, 1); keep ppf finite at the left end
    u = np.maximum(rng.random(count), np.finfo(float).tiny)
    return stats.norm.ppf(u, loc=mean, scale=np.sqrt(var))
