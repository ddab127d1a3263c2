"""Dense real tensors, symmetric eigendecomposition, operator supports.

Meanings live in modest spaces (a few hundred dimensions at most), so
everything here is dense float64.  The eigensolver is a cyclic Jacobi
sweep: dependency-free, numerically robust for the symmetric
positive-semidefinite operators this package manipulates, and exact on
already-diagonal input, which keeps the classical/quantum correspondence
tests honest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WordVector",
    "Spectrum",
    "DensityMatrix",
    "check_symmetric",
    "eig_sym",
    "support_basis",
    "log_on_support",
    "outer",
    "hadamard",
    "matvec",
    "matmul",
    "trace",
    "normalize_l1",
    "normalize_trace",
]

#: relative eigenvalue cutoff below which a direction counts as null
EIG_TOL = 1e-10
#: eigenvalues in [-PSD_TOL * trace, 0) are clamped to zero, lower ones fail
PSD_TOL = 1e-9
#: relative off-diagonal norm at which Jacobi sweeps stop
SWEEP_TOL = 1e-12
MAX_SWEEPS = 100


def _as_vector(v) -> np.ndarray:
    a = np.asarray(getattr(v, "entries", v), dtype=float)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    return a


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(getattr(a, "matrix", a), dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


@dataclass(frozen=True)
class WordVector:
    """A labelled distributional vector."""

    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_vector(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def normalized_l1(self) -> "WordVector":
        return WordVector(normalize_l1(self.entries), self.label)


def check_symmetric(a, rtol: float = 1e-10) -> np.ndarray:
    """Return ``a`` as an ndarray, failing unless it is symmetric.

    Symmetry is relative: max |A - A^T| <= rtol * max |A|.
    """
    m = _as_matrix(a)
    scale = np.abs(m).max() if m.size else 0.0
    if np.abs(m - m.T).max() > rtol * scale:
        raise ValueError("matrix is not symmetric")
    return m


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_sym(
    a,
    sweep_tol: float = SWEEP_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> Spectrum:
    """Eigendecompose a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate away each off-diagonal entry in turn until the
    off-diagonal norm drops below ``sweep_tol`` times the Frobenius norm
    of the input.  Eigenvalues come back descending; each eigenvector's
    largest-magnitude component is made positive so signs are
    reproducible across runs.
    """
    A = check_symmetric(a).copy()
    n = A.shape[0]
    V = np.eye(n)
    fro = float(np.linalg.norm(A))
    for _ in range(max_sweeps):
        off = A - np.diag(np.diag(A))
        if np.linalg.norm(off) <= sweep_tol * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        off = A - np.diag(np.diag(A))
        if np.linalg.norm(off) > sweep_tol * fro:
            raise ArithmeticError(
                f"Jacobi sweeps did not converge in {max_sweeps} sweeps"
            )
    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    V = V[:, order]
    # fix the sign convention column by column
    picks = np.argmax(np.abs(V), axis=0)
    flips = V[picks, np.arange(n)] < 0
    V[:, flips] *= -1.0
    values.setflags(write=False)
    V.setflags(write=False)
    return Spectrum(eigenvalues=values, eigenvectors=V)


def _clamped_psd_spectrum(m: np.ndarray, psd_tol: float) -> Spectrum:
    spec = eig_sym(m)
    values = spec.eigenvalues.copy()
    floor = -psd_tol * max(float(np.trace(m)), 0.0)
    if values[-1] < floor:
        raise ValueError(
            f"matrix is not positive semidefinite: min eigenvalue "
            f"{values[-1]:.3e} below {floor:.3e}"
        )
    values[values < 0.0] = 0.0
    values.setflags(write=False)
    return Spectrum(eigenvalues=values, eigenvectors=spec.eigenvectors)


class DensityMatrix:
    """A validated unit-trace positive-semidefinite symmetric matrix.

    Validation runs once at construction and the spectrum is kept, so the
    entropy and support computations downstream never re-diagonalise.
    Eigenvalues in [-1e-9 * trace, 0) are rounding noise and are clamped
    to zero; anything lower raises.
    """

    __slots__ = ("matrix", "label", "spectrum")

    def __init__(self, matrix, label: str = "", trace_tol: float = 1e-9):
        m = check_symmetric(matrix).copy()
        tr = float(np.trace(m))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(
                f"trace {tr!r} is not 1; pass the matrix through "
                "normalize_trace first"
            )
        m.setflags(write=False)
        self.matrix = m
        self.label = label
        self.spectrum = _clamped_psd_spectrum(m, PSD_TOL)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<DensityMatrix{tag} dim={self.dim}>"


def _spectrum_of(a, psd_tol: float = PSD_TOL) -> Spectrum:
    if isinstance(a, DensityMatrix):
        return a.spectrum
    return _clamped_psd_spectrum(check_symmetric(a), psd_tol)


def support_basis(a, tol: float = EIG_TOL) -> np.ndarray:
    """Orthonormal columns spanning the eigenspaces above the cutoff.

    The cutoff is relative: eigenvalues above ``tol`` times the largest
    one count as support.  A zero operator yields an empty basis.
    """
    spec = _spectrum_of(a)
    top = spec.eigenvalues[0] if spec.eigenvalues.size else 0.0
    if top <= 0.0:
        return np.empty((spec.eigenvectors.shape[0], 0))
    keep = spec.eigenvalues > tol * top
    return spec.eigenvectors[:, keep]


def log_on_support(a, tol: float = EIG_TOL) -> np.ndarray:
    """Matrix logarithm restricted to the support.

    Null directions (eigenvalues at or below the relative cutoff)
    contribute zero instead of a divergent logarithm, realising the
    0 log 0 = 0 convention operator-style.  All-zero input raises.
    """
    spec = _spectrum_of(a)
    top = spec.eigenvalues[0] if spec.eigenvalues.size else 0.0
    if top <= 0.0:
        raise ValueError("cannot take the logarithm of a zero operator")
    keep = spec.eigenvalues > tol * top
    logs = np.zeros_like(spec.eigenvalues)
    logs[keep] = np.log(spec.eigenvalues[keep])
    out = (spec.eigenvectors * logs) @ spec.eigenvectors.T
    return (out + out.T) / 2.0


def outer(u, v) -> np.ndarray:
    return np.outer(_as_vector(u), _as_vector(v))


def hadamard(u, v) -> np.ndarray:
    a, b = _as_vector(u), _as_vector(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a * b


def matvec(a, v) -> np.ndarray:
    m, x = _as_matrix(a), _as_vector(v)
    if m.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} @ {x.shape}")
    return m @ x


def matmul(a, b) -> np.ndarray:
    m, k = _as_matrix(a), _as_matrix(b)
    if m.shape[1] != k.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} @ {k.shape}")
    return m @ k


def trace(a) -> float:
    return float(np.trace(_as_matrix(a)))


def normalize_l1(v, tol: float = 1e-14) -> np.ndarray:
    """Divide a vector by its entry sum; near-zero mass raises."""
    a = _as_vector(v)
    total = float(a.sum())
    if abs(total) <= tol:
        raise ValueError("cannot normalize: entry sum is (near) zero")
    return a / total


def normalize_trace(a, tol: float = 1e-14, label: str = "") -> DensityMatrix:
    """Divide a PSD matrix by its trace and wrap it as a DensityMatrix."""
    m = _as_matrix(a)
    tr = float(np.trace(m))
    if tr <= tol:
        raise ValueError("cannot normalize: trace is (near) zero")
    return DensityMatrix(m / tr, label=label)
