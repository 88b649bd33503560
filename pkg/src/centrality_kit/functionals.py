"""Normal functionals as density elements, and the functional calculus.

A functional is represented by its density: ``phi(x) = sum_k Tr(rho_k x_k)``.
In finite dimension every functional is normal, ``||phi||`` is the trace
norm of the density, and the absolute value in the polar decomposition
``phi = u |phi|`` has density ``(rho rho*)^(1/2)``.  With the module-action
convention ``(x phi)(y) = phi(x y)`` this makes ``phi(y) = |phi|(u y)`` hold
exactly; the polar contract test pins the convention, so getting either
factor order wrong is caught immediately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, AlgebraShape
from .errors import NotHermitian, NotPositive, ShapeMismatch
from .matkernel import DEFAULT_TOL, PSD_CLAMP_REL, frob, herm_eig, polar_decompose, trace_norm

#: classification values, ordered general < hermitian < positive
CLASSES = ("general", "hermitian", "positive")


@dataclass(frozen=True, eq=False)
class NormalFunctional:
    """Functional ``x -> sum_k Tr(rho_k x_k)`` with eagerly computed class.

    ``klass`` is "positive" when the density is PSD within tol, "hermitian"
    when it is only selfadjoint, else "general"; downstream preconditions
    reduce to cheap flag checks.
    """

    density: AlgebraElement
    klass: str = "general"

    def __post_init__(self):
        object.__setattr__(self, "klass", _classify(self.density))

    @property
    def shape(self) -> AlgebraShape:
        return self.density.shape

    def __call__(self, x: AlgebraElement) -> complex:
        return evaluate(self, x)

    def is_hermitian(self) -> bool:
        return self.klass in ("hermitian", "positive")

    def is_positive(self) -> bool:
        return self.klass == "positive"

    # functional arithmetic: densities add/scale, class is recomputed
    def __add__(self, other: NormalFunctional) -> NormalFunctional:
        return NormalFunctional(self.density + other.density)

    def __sub__(self, other: NormalFunctional) -> NormalFunctional:
        return NormalFunctional(self.density - other.density)

    def __mul__(self, scalar) -> NormalFunctional:
        return NormalFunctional(self.density * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> NormalFunctional:
        return NormalFunctional(self.density * (-1.0))


def _classify(rho: AlgebraElement, tol: float = DEFAULT_TOL) -> str:
    scale = max(1.0, rho.fro_norm())
    if (rho - rho.adjoint()).fro_norm() > tol * scale:
        return "general"
    min_eig = min(float(w[-1]) for w, _ in rho.herm_eigs())
    return "positive" if min_eig >= -tol * scale else "hermitian"


@dataclass(frozen=True, eq=False)
class JordanPair:
    """Jordan decomposition ``phi = plus - minus`` with orthogonal supports."""

    positive_part: NormalFunctional
    negative_part: NormalFunctional


def evaluate(phi: NormalFunctional, x: AlgebraElement) -> complex:
    """``sum_k Tr(rho_k x_k)``; real whenever both sides are Hermitian."""
    if x.shape != phi.shape:
        raise ShapeMismatch("functional and element live on different shapes")
    return complex(sum(np.trace(r @ b) for r, b in zip(phi.density.blocks, x.blocks)))


def module_action(side: str, x: AlgebraElement, phi: NormalFunctional) -> NormalFunctional:
    """The functionals ``x phi``, ``phi x`` and ``x phi x``.

    ``left`` is ``(x phi)(y) = phi(x y)`` (density ``rho x``), ``right`` is
    ``(phi x)(y) = phi(y x)`` (density ``x rho``), ``sandwich`` is
    ``(x phi x)(y) = phi(x y x)`` (density ``x rho x``).
    """
    if x.shape != phi.shape:
        raise ShapeMismatch("element and functional live on different shapes")
    rho = phi.density
    if side == "left":
        return NormalFunctional(rho @ x)
    if side == "right":
        return NormalFunctional(x @ rho)
    if side == "sandwich":
        return NormalFunctional(x @ rho @ x)
    raise ValueError(f"side must be left|right|sandwich, got {side!r}")


def jordan_decompose(phi: NormalFunctional, tol: float = DEFAULT_TOL) -> JordanPair:
    """Spectral split of a Hermitian density into positive/negative parts."""
    if not phi.is_hermitian():
        raise NotHermitian("Jordan decomposition needs a Hermitian functional")
    plus_blocks = []
    minus_blocks = []
    for w, v in phi.density.herm_eigs():
        plus_blocks.append((v * np.clip(w, 0.0, None)) @ v.conj().T)
        minus_blocks.append((v * np.clip(-w, 0.0, None)) @ v.conj().T)
    shape = phi.shape
    return JordanPair(
        NormalFunctional(AlgebraElement(shape, tuple(plus_blocks))),
        NormalFunctional(AlgebraElement(shape, tuple(minus_blocks))),
    )


def functional_abs(phi: NormalFunctional, tol: float = DEFAULT_TOL) -> NormalFunctional:
    """The positive functional ``|phi|`` with density ``(rho rho*)^(1/2)``.

    For a Hermitian density this is computed directly from the spectral
    split (sum of ``|lam| v v*``), which keeps exact-zero eigenvalues exact;
    both routes agree since ``(rho rho*)^(1/2) = |rho|`` for Hermitian rho.
    """
    blocks = []
    if phi.is_hermitian():
        for w, v in phi.density.herm_eigs():
            blocks.append((v * np.abs(w)) @ v.conj().T)
    else:
        for b in phi.density.blocks:
            g = b @ b.conj().T
            w, v = herm_eig(g, tol)
            w = np.where(w <= PSD_CLAMP_REL * max(1.0, frob(g)), 0.0, w)
            blocks.append((v * np.sqrt(w)) @ v.conj().T)
    return NormalFunctional(AlgebraElement(phi.shape, tuple(blocks)))


def functional_polar(
    phi: NormalFunctional, tol: float = DEFAULT_TOL
) -> tuple[AlgebraElement, NormalFunctional]:
    """Polar decomposition ``phi = u |phi|``: returns ``(u, |phi|)``.

    ``u`` is the unitary (kernel-completed) with ``rho = (rho rho*)^(1/2) u``
    blockwise, so ``phi(y) = |phi|(u y)`` for every ``y``.
    """
    u_blocks = []
    for b in phi.density.blocks:
        w, _ = polar_decompose(b.conj().T, tol)
        u_blocks.append(w.conj().T)
    return AlgebraElement(phi.shape, tuple(u_blocks)), functional_abs(phi, tol)


def support_projection(psi: NormalFunctional, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Range projection of a positive functional's density.

    Eigenvalues with ``|lam| <= 1e-10 * max(1, ||rho||)`` count as zero.
    """
    if not psi.is_positive():
        raise NotPositive("support projection needs a positive functional")
    clamp = PSD_CLAMP_REL * max(1.0, psi.density.fro_norm())
    blocks = []
    for w, v in psi.density.herm_eigs():
        keep = v[:, np.abs(w) > clamp]
        blocks.append(keep @ keep.conj().T)
    return AlgebraElement(psi.shape, tuple(blocks))


def functional_norm(phi: NormalFunctional) -> float:
    """``||phi||``: the trace norm of the density.

    Equals ``phi(1)`` for positive functionals and the sum of absolute
    eigenvalues for Hermitian ones.
    """
    if phi.is_hermitian():
        return float(sum(np.abs(w).sum() for w, _ in phi.density.herm_eigs()))
    return float(sum(trace_norm(b) for b in phi.density.blocks))
