"""Degrees of entailment between distributions and between density operators.

Classical measures act on probability vectors (nonnegative, summing to
one); quantum counterparts act on DensityMatrix values.  Divergences that
blow up on support violations return ``math.inf``, and the
Representativeness wrapper keeps the diverged case explicit so callers
never compare raw infinities by accident.

The quantum relative entropy decides finiteness geometrically, from the
two supports, before any logarithm is evaluated: Tr rho(log rho - log sigma)
is finite precisely when the support of rho lies inside the support of
sigma, and resolving that through projection residuals is far more stable
than watching log magnitudes diverge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor_core import (
    EIG_TOL,
    DensityMatrix,
    log_on_support,
    support_basis,
    _as_vector,
)

__all__ = [
    "Representativeness",
    "shannon_entropy",
    "kl_divergence",
    "representativeness_kl",
    "jensen_shannon",
    "alpha_skew",
    "von_neumann_entropy",
    "quantum_relative_entropy",
    "representativeness_vn",
    "quantum_js",
    "support_inclusion",
]

#: absolute probability mass below which an entry counts as zero support
SUPPORT_TOL = 1e-12
#: largest projection residual at which a direction still counts as included
RESIDUAL_TOL = 1e-8
#: divergences in [-NEG_TOL, 0) are rounding noise and clamp to zero
NEG_TOL = 1e-9


@dataclass(frozen=True)
class Representativeness:
    """Degree of entailment 1 / (1 + divergence), with divergence made
    explicit: ``diverged`` is True exactly when the divergence is infinite,
    and then ``value`` is 0."""

    value: float
    diverged: bool

    def __post_init__(self):
        if self.diverged and self.value != 0.0:
            raise ValueError("a diverged representativeness must be 0")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"value {self.value!r} outside [0, 1]")

    @classmethod
    def from_divergence(cls, divergence: float) -> "Representativeness":
        if divergence < 0.0:
            raise ValueError(f"negative divergence {divergence!r}")
        if math.isinf(divergence):
            return cls(value=0.0, diverged=True)
        return cls(value=1.0 / (1.0 + divergence), diverged=False)


def _probabilities(p, tol: float = 1e-8) -> np.ndarray:
    a = _as_vector(p)
    if a.size == 0:
        raise ValueError("empty distribution")
    if a.min() < -SUPPORT_TOL:
        raise ValueError("negative entries in a probability vector")
    if abs(a.sum() - 1.0) > tol:
        raise ValueError(
            f"unnormalized input: entries sum to {a.sum()!r}, not 1"
        )
    return np.clip(a, 0.0, None)


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    a, b = _probabilities(p), _probabilities(q)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def shannon_entropy(p) -> float:
    """Entropy -sum p_i log p_i in nats, with 0 log 0 = 0."""
    a = _probabilities(p)
    mask = a > SUPPORT_TOL
    return float(-(a[mask] * np.log(a[mask])).sum()) + 0.0


def kl_divergence(p, q, support_tol: float = SUPPORT_TOL) -> float:
    """Relative entropy sum p_i (log p_i - log q_i) in nats.

    Returns ``math.inf`` exactly when some entry of p above the support
    tolerance meets a q entry at or below it.
    """
    a, b = _pair(p, q)
    mask = a > support_tol
    if np.any(b[mask] <= support_tol):
        return math.inf
    val = float((a[mask] * (np.log(a[mask]) - np.log(b[mask]))).sum())
    if val < 0.0:
        if val < -NEG_TOL:
            raise ArithmeticError(f"relative entropy came out {val!r}")
        val = 0.0
    return val


def representativeness_kl(
    p, q, support_tol: float = SUPPORT_TOL
) -> Representativeness:
    """How representative p is of q: 1 / (1 + KL(p || q)), 0 if diverged."""
    return Representativeness.from_divergence(
        kl_divergence(p, q, support_tol=support_tol)
    )


def jensen_shannon(p, q) -> float:
    """Symmetrised divergence against the midpoint; bounded by log 2."""
    a, b = _pair(p, q)
    m = (a + b) / 2.0
    return (kl_divergence(a, m) + kl_divergence(b, m)) / 2.0


def alpha_skew(p, q, alpha: float = 0.99) -> float:
    """Skew divergence KL(p || alpha q + (1 - alpha) p).

    Blending a little of p into the reference keeps the divergence finite
    on support violations; alpha must lie strictly between 0 and 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha {alpha!r} outside (0, 1)")
    a, b = _pair(p, q)
    return kl_divergence(a, alpha * b + (1.0 - alpha) * a)


def _require_density(rho) -> DensityMatrix:
    if not isinstance(rho, DensityMatrix):
        raise TypeError(
            f"expected a DensityMatrix, got {type(rho).__name__}"
        )
    return rho


def _same_dim(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def von_neumann_entropy(rho, eig_tol: float = EIG_TOL) -> float:
    """Entropy -Tr rho log rho in nats, from the cached spectrum."""
    spec = _require_density(rho).spectrum
    lam = spec.eigenvalues
    mask = lam > eig_tol * lam[0]
    return float(-(lam[mask] * np.log(lam[mask])).sum()) + 0.0


def support_inclusion(
    rho,
    sigma,
    eig_tol: float = EIG_TOL,
    residual_tol: float = RESIDUAL_TOL,
) -> bool:
    """Whether the support of rho lies inside the support of sigma.

    Each support basis vector of rho is projected onto the support of
    sigma; inclusion holds when every projection residual stays below
    ``residual_tol``.
    """
    r, s = _require_density(rho), _require_density(sigma)
    _same_dim(r, s)
    br = support_basis(r, tol=eig_tol)
    bs = support_basis(s, tol=eig_tol)
    if br.shape[1] == 0:
        return True
    if bs.shape[1] == 0:
        return False
    resid = br - bs @ (bs.T @ br)
    return float(np.linalg.norm(resid, axis=0).max()) <= residual_tol


def quantum_relative_entropy(
    rho,
    sigma,
    eig_tol: float = EIG_TOL,
    residual_tol: float = RESIDUAL_TOL,
) -> float:
    """Relative entropy Tr rho (log rho - log sigma) in nats.

    Support inclusion is checked first; a violation returns ``math.inf``
    without touching any logarithm.
    """
    r, s = _require_density(rho), _require_density(sigma)
    _same_dim(r, s)
    if not support_inclusion(r, s, eig_tol=eig_tol, residual_tol=residual_tol):
        return math.inf
    lam = r.spectrum.eigenvalues
    mask = lam > eig_tol * lam[0]
    ent = float((lam[mask] * np.log(lam[mask])).sum())
    cross = float(np.sum(r.matrix * log_on_support(s, tol=eig_tol)))
    val = ent - cross
    if val < 0.0:
        if val < -NEG_TOL:
            raise ArithmeticError(f"relative entropy came out {val!r}")
        val = 0.0
    return val


def representativeness_vn(
    rho,
    sigma,
    eig_tol: float = EIG_TOL,
    residual_tol: float = RESIDUAL_TOL,
) -> Representativeness:
    """Operator analogue of representativeness_kl."""
    return Representativeness.from_divergence(
        quantum_relative_entropy(
            rho, sigma, eig_tol=eig_tol, residual_tol=residual_tol
        )
    )


def quantum_js(rho, sigma, eig_tol: float = EIG_TOL) -> float:
    """Symmetrised operator divergence against the midpoint state.

    The midpoint contains both supports, so the two halves are always
    finite and the result is bounded by log 2.
    """
    r, s = _require_density(rho), _require_density(sigma)
    _same_dim(r, s)
    mid = DensityMatrix((r.matrix + s.matrix) / 2.0)
    return (
        quantum_relative_entropy(r, mid, eig_tol=eig_tol)
        + quantum_relative_entropy(s, mid, eig_tol=eig_tol)
    ) / 2.0
