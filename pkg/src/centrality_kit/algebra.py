"""Finite-dimensional von Neumann algebra model: direct sums of complex
matrix blocks.

An element of ``M = M_{n_1} (+) ... (+) M_{n_m}`` is stored as one dense
complex matrix per block.  The center of this algebra is exactly the set of
elements that are a scalar multiple of the identity on every block, which
gives an exact centrality oracle: the distance of a Hermitian element to the
center is ``max_k (lam_max(a_k) - lam_min(a_k)) / 2``.

Randomness: generators take a ``numpy.random.Generator`` (PCG64 via
``numpy.random.default_rng``).  Call sites that need several independent
streams derive them from a master seed with ``numpy.random.SeedSequence``
spawning, so results never depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NotHermitian,
    NotOrthonormal,
    NotProjection,
    ShapeMismatch,
)
from .matkernel import DEFAULT_TOL, frob, herm_eig, psd_sqrt

#: Largest total dimension (sum of block dims) an AlgebraShape accepts.
DIM_CAP = 64

#: Generated non-central elements keep at least this much relative distance
#: from the center, so downstream witness margins sit far above tolerance.
NONCENTRAL_MARGIN = 0.05


@dataclass(frozen=True)
class AlgebraShape:
    """Ordered block dimensions ``(n_1, ..., n_m)`` of the algebra."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if not dims:
            raise ValueError("shape needs at least one block")
        if any(n < 1 for n in dims):
            raise ValueError(f"block dims must be positive, got {dims}")
        if sum(dims) > DIM_CAP:
            raise ValueError(f"total dimension {sum(dims)} exceeds cap {DIM_CAP}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def total_dim(self) -> int:
        return sum(self.block_dims)

    def identity(self) -> AlgebraElement:
        return AlgebraElement(self, tuple(np.eye(n, dtype=complex) for n in self.block_dims))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims))

    def element(self, blocks) -> AlgebraElement:
        """Build an element from one square array-like per block."""
        return AlgebraElement(self, tuple(np.array(b, dtype=complex) for b in blocks))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Block-diagonal operator: one complex matrix per block of the shape.

    Elements are immutable (the backing arrays are marked read-only) and all
    operations return new elements, so instances are safe to share across
    threads.
    """

    shape: AlgebraShape
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.shape.block_dims):
            raise ShapeMismatch(
                f"{len(self.blocks)} blocks for shape {self.shape.block_dims}"
            )
        frozen = []
        for n, b in zip(self.shape.block_dims, self.blocks):
            arr = np.array(b, dtype=complex)
            if arr.shape != (n, n):
                raise ShapeMismatch(f"block of shape {arr.shape}, expected ({n}, {n})")
            if not np.isfinite(arr).all():
                raise ValueError("block entries must be finite")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "blocks", tuple(frozen))

    # -- arithmetic (blockwise) ------------------------------------------

    def _binary(self, other: AlgebraElement, op) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape.block_dims} vs {other.shape.block_dims}")
        return AlgebraElement(self.shape, tuple(op(a, b) for a, b in zip(self.blocks, other.blocks)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __matmul__(self, other):
        return self._binary(other, np.matmul)

    def __mul__(self, scalar):
        s = complex(scalar)
        return AlgebraElement(self.shape, tuple(s * b for b in self.blocks))

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def adjoint(self) -> AlgebraElement:
        """Blockwise conjugate transpose."""
        return AlgebraElement(self.shape, tuple(b.conj().T for b in self.blocks))

    # -- metrics ----------------------------------------------------------

    def fro_norm(self) -> float:
        """Frobenius norm of the whole direct-sum matrix."""
        return float(np.sqrt(sum(frob(b) ** 2 for b in self.blocks)))

    def herm_eigs(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        """Cached blockwise eigendecompositions of the Hermitian part.

        Elements are immutable, so the decomposition (at default tolerance)
        is computed once and reused by positivity checks, the center oracle,
        Jordan splits and norms.  Callers are responsible for knowing the
        element is Hermitian when that matters; the Hermitian part
        ``(x + x*)/2`` is what gets decomposed.
        """
        cached = getattr(self, "_herm_eigs", None)
        if cached is None:
            cached = tuple(herm_eig((b + b.conj().T) * 0.5) for b in self.blocks)
            object.__setattr__(self, "_herm_eigs", cached)
        return cached

    def op_norm(self) -> float:
        """Operator norm: the largest singular value over all blocks."""
        cached = getattr(self, "_op_norm", None)
        if cached is None:
            if self.is_hermitian():
                cached = max(
                    max(abs(float(w[0])), abs(float(w[-1]))) for w, _ in self.herm_eigs()
                )
            else:
                cached = 0.0
                for b in self.blocks:
                    if not b.any():
                        continue
                    w, _ = herm_eig(b.conj().T @ b)
                    cached = max(cached, float(np.sqrt(max(w[0], 0.0))))
            object.__setattr__(self, "_op_norm", cached)
        return cached

    def trace(self) -> complex:
        return complex(sum(np.trace(b) for b in self.blocks))

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        defect = (self - self.adjoint()).fro_norm()
        return defect <= tol * max(1.0, self.fro_norm())


def distance(x: AlgebraElement, y: AlgebraElement) -> float:
    """Frobenius distance between two elements."""
    return (x - y).fro_norm()


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.ok


def is_positive(x: AlgebraElement, tol: float = DEFAULT_TOL) -> PositivityReport:
    """Check Hermitian-and-PSD within tol; reports the global min eigenvalue.

    The minimum eigenvalue is computed for the Hermitian part ``(x+x*)/2``
    even when the Hermiticity check itself fails, so the report stays
    informative.
    """
    herm = x.is_hermitian(tol)
    min_eig = min(float(w[-1]) for w, _ in x.herm_eigs())
    ok = herm and min_eig >= -tol * max(1.0, x.fro_norm())
    return PositivityReport(ok, min_eig)


def center_distance(a: AlgebraElement, tol: float = DEFAULT_TOL) -> tuple[float, AlgebraElement]:
    """Distance of a Hermitian element to the center, with the minimizer.

    Per block the best central approximation of ``a_k`` in operator norm is
    ``(lam_max + lam_min)/2 * I`` at distance ``(lam_max - lam_min)/2``; the
    element's distance is the max over blocks.  ``a`` is declared central
    when the distance is at most ``tol * max(1, ||a||)``.
    """
    if not a.is_hermitian(tol):
        raise NotHermitian("center_distance needs a Hermitian element")
    dist = 0.0
    central = []
    for n, (w, _) in zip(a.shape.block_dims, a.herm_eigs()):
        dist = max(dist, float(w[0] - w[-1]) / 2.0)
        central.append((float(w[0] + w[-1]) / 2.0) * np.eye(n, dtype=complex))
    return dist, AlgebraElement(a.shape, tuple(central))


def psd_sqrt_element(a: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Blockwise PSD square root ``a^(1/2)`` of a positive element."""
    return AlgebraElement(a.shape, tuple(psd_sqrt(b, tol) for b in a.blocks))


def projection_from_vectors(
    shape: AlgebraShape,
    block_index: int,
    vectors,
    tol: float = DEFAULT_TOL,
) -> AlgebraElement:
    """Orthogonal projection onto ``span(vectors)`` inside one block.

    The other blocks are zero: this is the subspace projector itself, not
    extended by identities.  An empty vector list gives the zero element.
    """
    n = shape.block_dims[block_index]
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    blocks = [np.zeros((m, m), dtype=complex) for m in shape.block_dims]
    if vecs:
        v = np.column_stack(vecs)
        if v.shape[0] != n:
            raise ShapeMismatch(f"vectors of length {v.shape[0]} in a dim-{n} block")
        gram = v.conj().T @ v
        if frob(gram - np.eye(len(vecs))) > tol * max(1.0, frob(gram)):
            raise NotOrthonormal("vectors are not orthonormal within tol")
        blocks[block_index] = v @ v.conj().T
    return AlgebraElement(shape, tuple(blocks))


def is_projection(p: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, p.fro_norm())
    herm = (p - p.adjoint()).fro_norm() <= tol * scale
    idem = (p @ p - p).fro_norm() <= tol * scale
    return herm and idem


def is_symmetry(s: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, s.fro_norm())
    herm = (s - s.adjoint()).fro_norm() <= tol * scale
    invol = (s @ s - s.shape.identity()).fro_norm() <= tol * scale
    return herm and invol


def is_unitary(u: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    defect = (u.adjoint() @ u - u.shape.identity()).fro_norm()
    return defect <= tol * max(1.0, u.fro_norm())


def symmetry_from_projection(p: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """The symmetry ``s = 2p - 1`` (1 the identity of the whole algebra)."""
    if not is_projection(p, tol):
        raise NotProjection("input fails p*p = p = p^* within tol")
    return 2.0 * p - p.shape.identity()


# -- seeded random generators --------------------------------------------

RANDOM_KINDS = (
    "hermitian",
    "psd",
    "state",
    "projection",
    "unitary",
    "central_positive",
    "noncentral_positive",
)


def _gaussian_block(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_gaussian(shape: AlgebraShape, rng: np.random.Generator) -> AlgebraElement:
    """Element with independent standard complex Gaussian entries."""
    return AlgebraElement(shape, tuple(_gaussian_block(rng, n) for n in shape.block_dims))


def random_element(kind: str, shape: AlgebraShape, rng: np.random.Generator) -> AlgebraElement:
    """Seeded random element of the given refinement kind.

    Constructions (blockwise): ``hermitian`` is ``(G+G*)/2`` of a complex
    Gaussian, ``psd`` is ``B B*``, ``state`` a psd normalized to unit total
    trace, ``projection`` spans the leading ``k`` eigenvectors of a random
    Hermitian with ``k`` uniform on ``0..n``, ``unitary`` orthonormalizes a
    complex Gaussian, ``central_positive`` is a nonnegative random scalar
    times the identity per block, and ``noncentral_positive`` draws psd
    elements until the center distance clears the margin (perturbing the
    first block of dim >= 2 if rejection takes too long).
    """
    dims = shape.block_dims
    if kind == "hermitian":
        g = random_gaussian(shape, rng)
        return (g + g.adjoint()) * 0.5
    if kind == "psd":
        b = random_gaussian(shape, rng)
        return b @ b.adjoint()
    if kind == "state":
        a = random_element("psd", shape, rng)
        tr = a.trace().real
        return a * (1.0 / tr)
    if kind == "projection":
        blocks = []
        for n in dims:
            h = _gaussian_block(rng, n)
            _, v = herm_eig((h + h.conj().T) / 2.0)
            k = int(rng.integers(0, n + 1))
            vk = v[:, :k]
            blocks.append(vk @ vk.conj().T)
        return AlgebraElement(shape, tuple(blocks))
    if kind == "unitary":
        blocks = []
        for n in dims:
            q, _ = np.linalg.qr(_gaussian_block(rng, n))
            blocks.append(q)
        return AlgebraElement(shape, tuple(blocks))
    if kind == "central_positive":
        return AlgebraElement(
            shape,
            tuple(rng.uniform(0.0, 2.0) * np.eye(n, dtype=complex) for n in dims),
        )
    if kind == "noncentral_positive":
        if max(dims) < 2:
            raise ValueError(
                "every element is central when all blocks have dim 1; "
                "no non-central element exists"
            )
        for _ in range(50):
            a = random_element("psd", shape, rng)
            dist, _ = center_distance(a)
            if dist >= NONCENTRAL_MARGIN * max(1.0, a.op_norm()):
                return a
        # Extremely unlikely fallback: force spread into the first big block.
        j = next(i for i, n in enumerate(dims) if n >= 2)
        boost = 4.0 * NONCENTRAL_MARGIN * max(1.0, a.op_norm())
        blocks = list(a.blocks)
        blocks[j] = blocks[j] + np.diag(np.linspace(0.0, boost, dims[j]))
        return AlgebraElement(shape, tuple(blocks))
    raise ValueError(f"unknown kind {kind!r}; expected one of {RANDOM_KINDS}")
