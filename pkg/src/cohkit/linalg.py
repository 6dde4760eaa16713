"""Dense complex linear algebra substrate.

All functions operate on plain numpy arrays with complex128 entries and
validate their inputs (shape, finiteness, Hermiticity where required),
raising ValueError on contract violations instead of silently coercing.
Entropies are in bits; 0*log(0) is taken to be 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "dagger",
    "frobenius",
    "is_hermitian",
    "schur_product",
    "hermitian_eigen",
    "is_psd",
    "trace_norm",
    "tensor",
    "partial_trace_second",
    "binary_entropy",
    "von_neumann_entropy",
    "relative_entropy",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute and relative numerical thresholds shared across the package."""

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("abs_eps", "rel_eps"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


DEFAULT_TOL = Tolerance()


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting NaN and Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array with ndim={a.ndim}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix entries must be finite")
    return a


def _require_square(a: np.ndarray) -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(m).T


def frobenius(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = _require_square(as_matrix(m))
    return frobenius(a - dagger(a)) <= tol.abs_eps * a.shape[0]


def schur_product(x, y) -> np.ndarray:
    """Entrywise (Hadamard) product of two equal-shaped matrices."""
    a = as_matrix(x)
    b = as_matrix(y)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def hermitian_eigen(m, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending, real) and eigenvector columns of a Hermitian matrix.

    The input is symmetrized as (m + m^dag)/2 before the solve; inputs whose
    anti-Hermitian part exceeds abs_eps * dim in Frobenius norm are rejected.
    """
    a = _require_square(as_matrix(m))
    if frobenius(a - dagger(a)) > tol.abs_eps * a.shape[0]:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((a + dagger(a)) / 2.0)
    return w, v


def is_psd(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the minimum eigenvalue is >= -(abs_eps + rel_eps * max|eig|)."""
    w, _ = hermitian_eigen(m, tol)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    return bool(w[0] >= -(tol.abs_eps + tol.rel_eps * scale))


def trace_norm(m) -> float:
    """Sum of singular values; for Hermitian input this is the sum of |eigenvalues|."""
    a = _require_square(as_matrix(m))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def tensor(a, b) -> np.ndarray:
    """Kronecker product with subsystem index convention (i, k) -> i*d2 + k."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_second(m, d1: int, d2: int) -> np.ndarray:
    """Trace out the second factor of a (d1*d2) x (d1*d2) matrix."""
    a = _require_square(as_matrix(m))
    if d1 < 1 or d2 < 1 or a.shape[0] != d1 * d2:
        raise ValueError(f"matrix of shape {a.shape} is not compatible with {d1}x{d2}")
    return np.einsum("ikjk->ij", a.reshape(d1, d2, d1, d2))


def binary_entropy(x: float) -> float:
    """Shannon entropy of (x, 1-x) in bits."""
    x = float(x)
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument must be in [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    out = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            out -= p * np.log2(p)
    return float(out)


def _state_eigenvalues(rho, tol: Tolerance) -> np.ndarray:
    w, _ = hermitian_eigen(rho, tol)
    d = w.size
    scale = float(np.max(np.abs(w))) if d else 0.0
    if w[0] < -(tol.abs_eps + tol.rel_eps * scale):
        raise ValueError("matrix is not positive semidefinite within tolerance")
    if abs(float(np.sum(w)) - 1.0) > tol.abs_eps * max(d, 1):
        raise ValueError("matrix does not have unit trace within tolerance")
    return np.clip(w, 0.0, None)


def von_neumann_entropy(rho, tol: Tolerance = DEFAULT_TOL) -> float:
    """Von Neumann entropy in bits of a unit-trace PSD matrix."""
    w = _state_eigenvalues(rho, tol)
    p = w[w > 0.0]
    return float(-np.sum(p * np.log2(p)))


def relative_entropy(rho, sigma, tol: Tolerance = DEFAULT_TOL) -> float:
    """Quantum relative entropy S(rho || sigma) in bits.

    Returns +inf when the support of rho is not contained in the support of
    sigma (weight above tol.abs_eps outside sigma's support).
    """
    wr = _state_eigenvalues(rho, tol)
    ws, vs = hermitian_eigen(sigma, tol)
    _state_eigenvalues(sigma, tol)
    a = as_matrix(rho)
    support_thr = tol.abs_eps * max(float(ws[-1]), 1.0)
    kernel = vs[:, ws <= support_thr]
    if kernel.shape[1] > 0:
        leak = float(np.real(np.trace(dagger(kernel) @ a @ kernel)))
        if leak > tol.abs_eps:
            return float("inf")
    p = wr[wr > 0.0]
    term_rho = float(np.sum(p * np.log2(p)))
    keep = ws > support_thr
    weights = np.real(np.einsum("ij,jk,ki->i", dagger(vs[:, keep]), a, vs[:, keep]))
    term_sigma = float(np.sum(weights * np.log2(ws[keep])))
    return term_rho - term_sigma
