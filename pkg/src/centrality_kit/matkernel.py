"""Dense complex-matrix primitives: Hermitian eigendecomposition, PSD square
root, polar decomposition and trace norm.

Everything downstream (algebra elements, functional densities) is built on
these four operations.  Matrices here are single dense blocks at desk scale
(dimension <= ~16), so the eigensolver is a cyclic threshold Jacobi: slower
than LAPACK but simple, robust, and independent of it, which lets the test
suite cross-check the two.

Tolerance convention: every check scales by ``max(1, ||X||_F)`` of the
relevant matrix, written ``scale`` below.
"""

import math

import numpy as np

from .errors import NoConvergence, NotHermitian, NotPSD

DEFAULT_TOL = 1e-9

# Eigenvalues of a PSD matrix at or below PSD_CLAMP_REL * scale are treated
# as exact zeros.  Keeping this two-sided (small positives are zeroed too)
# makes square roots of rank-deficient matrices exact instead of polluting
# the kernel with sqrt(eps)-sized noise.
PSD_CLAMP_REL = 1e-10

_MAX_SWEEPS = 64


def frob(m) -> float:
    """Frobenius norm, the kernel's tolerance scale."""
    return float(np.linalg.norm(m))


def _as_square(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def _rot2(app: float, aqq: float, h: complex) -> np.ndarray:
    """Unitary J diagonalizing the Hermitian 2x2 block [[app, h], [h*, aqq]].

    Columns of J are the eigenvectors for the larger / smaller eigenvalue,
    so J* A J = diag(lam_max, lam_min) exactly in exact arithmetic.
    """
    ah = abs(h)
    if ah == 0.0:
        return np.eye(2, dtype=complex)
    d = 0.5 * (app - aqq)
    r = math.hypot(d, ah)
    # eigenvector for lam+ = (app+aqq)/2 + r is (h, lam+ - app) = (h, r - d);
    # when d >= 0 the difference r - d cancels, so use (r-d)(r+d) = |h|^2
    if d >= 0.0:
        v1 = ah * ah / (r + d)
    else:
        v1 = r - d
    nrm = math.hypot(ah, v1)
    a0 = h / nrm
    a1 = v1 / nrm
    return np.array([[a0, -a1], [a1, np.conj(a0)]], dtype=complex)


def herm_eig(h, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic threshold Jacobi.

    Returns ``(w, v)`` with eigenvalues ``w`` real and sorted descending and
    the columns of ``v`` the matching orthonormal eigenvectors, so that
    ``v @ diag(w) @ v.conj().T`` reconstructs the input within
    ``tol * max(1, ||h||_F)``.

    Raises NotHermitian if ``||h - h*|| > tol * scale`` and NoConvergence if
    the sweep budget is exhausted (does not happen for finite input).
    """
    a = _as_square(h)
    n = a.shape[0]
    scale = max(1.0, frob(a))
    if frob(a - a.conj().T) > tol * scale:
        raise NotHermitian(
            f"matrix is not Hermitian within tol={tol:g} (defect "
            f"{frob(a - a.conj().T):.3e}, scale {scale:.3e})"
        )
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    if n == 2:
        j = _rot2(a[0, 0].real, a[1, 1].real, a[0, 1])
        d = j.conj().T @ a @ j
        w = np.array([d[0, 0].real, d[1, 1].real])
        order = np.argsort(-w, kind="stable")
        return w[order], j[:, order]
    if n > 2:
        # converge to the machine-precision floor, not just to tol: Jacobi is
        # quadratic so the final sweep is cheap, and downstream identities
        # are tested at 1e-10 relative
        target = min(1e-14, 0.1 * tol) * scale
        for _ in range(_MAX_SWEEPS):
            off = frob(a - np.diag(np.diag(a)))
            if off <= target:
                break
            thresh = off / (n * n)
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if abs(a[p, q]) <= thresh:
                        continue
                    j = _rot2(a[p, p].real, a[q, q].real, a[p, q])
                    idx = [p, q]
                    a[:, idx] = a[:, idx] @ j
                    a[idx, :] = j.conj().T @ a[idx, :]
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    v[:, idx] = v[:, idx] @ j
        else:
            raise NoConvergence(f"Jacobi did not converge in {_MAX_SWEEPS} sweeps")
    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(h, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root ``r`` with ``r @ r`` equal to the input.

    Eigenvalues at or below ``PSD_CLAMP_REL * scale`` (including roundoff
    negatives) are clamped to zero; a materially negative eigenvalue
    (below ``-tol * scale``) raises NotPSD.
    """
    a = _as_square(h)
    w, v = herm_eig(a, tol)
    scale = max(1.0, frob(a))
    if w[-1] < -tol * scale:
        raise NotPSD(f"min eigenvalue {w[-1]:.3e} < -tol*scale = {-tol * scale:.3e}")
    w = np.where(w <= PSD_CLAMP_REL * scale, 0.0, w)
    r = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (r + r.conj().T)


def polar_decompose(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Right polar decomposition ``m = w @ p`` with ``p = (m* m)^(1/2)``.

    ``w`` is returned as a full unitary: on the range of ``p`` it is the
    canonical partial isometry, and on the kernel it is completed with an
    orthonormal basis chosen greedily from the standard basis (largest
    residual first), which makes the result deterministic.  Singular input
    is therefore fine.
    """
    a = _as_square(m)
    n = a.shape[0]
    g = a.conj().T @ a
    w, v = herm_eig(g, tol)
    w = np.where(w <= PSD_CLAMP_REL * max(1.0, frob(g)), 0.0, w)
    sig = np.sqrt(w)
    p = (v * sig) @ v.conj().T
    p = 0.5 * (p + p.conj().T)

    # Columns of u for significant singular values; directions below the
    # cutoff contribute less than tol*scale to w @ p and are completed.
    cutoff = tol * max(1.0, frob(a)) / (4.0 * max(n, 1))
    cols: list[np.ndarray] = []
    for i in range(n):
        if sig[i] <= cutoff:
            break
        u = a @ v[:, i] / sig[i]
        for c in cols:
            u = u - c * np.vdot(c, u)
        u = u / np.linalg.norm(u)
        cols.append(u)
    while len(cols) < n:
        best = None
        best_norm = -1.0
        for j in range(n):
            r = np.zeros(n, dtype=complex)
            r[j] = 1.0
            for c in cols:
                r = r - c * np.vdot(c, r)
            rn = float(np.linalg.norm(r))
            if rn > best_norm + 1e-12:
                best, best_norm = r, rn
        cols.append(best / best_norm)
    u_mat = np.column_stack(cols)
    return u_mat @ v.conj().T, p


def trace_norm(m) -> float:
    """Sum of singular values (trace of ``(m* m)^(1/2)``)."""
    a = _as_square(m)
    if not a.any():
        return 0.0
    g = a.conj().T @ a
    w, _ = herm_eig(g, DEFAULT_TOL)
    w = np.where(w <= PSD_CLAMP_REL * max(1.0, frob(g)), 0.0, w)
    return float(np.sum(np.sqrt(w)))
