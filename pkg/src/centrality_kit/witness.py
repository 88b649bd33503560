"""Constructive counterexamples: the symmetry/state witness pair, the
two-functional violation bundle, and the certificate chain for every
condition.

For a non-central positive ``a`` the chain is fully deterministic:

1. ``find_violating_projection`` picks the block with the widest eigenvalue
   spread and projects onto the diagonal mix of its extreme eigenvectors;
   the compression ``p a p`` then fails ``p a p <= a`` by construction.
2. ``violating_symmetry_state`` turns ``p`` into the symmetry ``s = 2p - 1``
   and takes the vector state at the most negative eigenvector of
   ``s a s - a``, giving ``phi(s a s) < phi(a)`` with a quantified gap.
3. ``lemma1_construct`` builds the positive pair ``psi_1, psi_2`` out of
   ``s`` and ``phi`` with ``|psi_1 - psi_2|(a) > psi_1(a) + psi_2(a)``.
4. ``derive_condition_certificates`` converts that bundle into a violating
   input for each condition and re-verifies every emitted margin.

Closed forms used throughout (with ``eps = (phi(a) - phi(sas)) / phi(a)``
and density ``rho``):

    psi_i           = lam * v_i phi v_i,  v_i = s +/- lam^(-1) * 1
    |psi_1 - psi_2| = 2 phi + 2 s phi s
    |psi_1 - psi_2|(a)      = 2 (2 - eps) phi(a)
    (psi_1 + psi_2)(a)      = 2 (lam (1 - eps) + lam^(-1)) phi(a)

Note the factor 2 in the last line: it follows from direct evaluation of
the densities (``psi_1 + psi_2 = 2 lam s phi s + 2 lam^(-1) phi``) and has
been confirmed against brute-force density arithmetic; see the README for
the provenance note.  The violation margin at the optimal
``lam_0 = 1 / sqrt(1 - eps)`` is ``2 (1 - sqrt(1 - eps))^2 phi(a) > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    center_distance,
    is_symmetry,
    projection_from_vectors,
    symmetry_from_projection,
)
from .conditions import ConditionId, ConditionInputs, MarginReport, condition_margin
from .errors import (
    DerivationFailed,
    InconsistentMath,
    NotAViolation,
    NotPositive,
    ShapeMismatch,
)
from .functionals import (
    NormalFunctional,
    evaluate,
    functional_abs,
    functional_norm,
    jordan_decompose,
    module_action,
)
from .matkernel import DEFAULT_TOL, polar_decompose

#: 1 - eps below this is treated as eps = 1 (lam_0 falls back to 2.0)
_EPS_ONE_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class Lemma1Witness:
    """The violation bundle ``(s, phi, eps, lam_0, psi_1, psi_2)``.

    ``lhs = |psi_1 - psi_2|(a)`` strictly exceeds ``rhs = psi_1(a) +
    psi_2(a)``; both match their closed forms within 1e-9 relative (checked
    at construction time).
    """

    s: AlgebraElement
    phi: NormalFunctional
    epsilon: float
    lambda0: float
    psi1: NormalFunctional
    psi2: NormalFunctional
    lhs: float
    rhs: float

    @property
    def violation(self) -> float:
        """Amount by which the two-functional inequality fails: lhs - rhs."""
        return self.lhs - self.rhs


def find_violating_projection(
    a: AlgebraElement, tol: float = DEFAULT_TOL
) -> tuple[AlgebraElement, float] | None:
    """Projection ``p`` with ``p a p <= a`` false, or None if ``a`` is central.

    In the block with maximal eigen-spread, with orthonormal eigenvectors
    ``e, f`` of the extreme eigenvalues ``alpha > beta``, the projector onto
    ``(e + f)/sqrt(2)`` (zero on all other blocks) forces
    ``det((a - pap)|span{e,f}) = -(alpha - beta)^2 / 4 < 0``.  Returns the
    projection together with ``lam_min(a - p a p) < 0``.
    """
    eigs = a.herm_eigs()
    a_norm = max(max(abs(w[0]), abs(w[-1])) for w, _ in eigs)
    spreads = [float(w[0] - w[-1]) for w, _ in eigs]
    best = int(np.argmax(spreads))
    if spreads[best] / 2.0 <= tol * max(1.0, a_norm):
        return None
    w, v = eigs[best]
    mix = (v[:, 0] + v[:, -1]) / math.sqrt(2.0)
    p = projection_from_vectors(a.shape, best, [mix], tol)
    diff = a - p @ a @ p
    min_eig = min(float(w[-1]) for w, _ in diff.herm_eigs())
    return p, min_eig


def violating_symmetry_state(
    a: AlgebraElement, tol: float = DEFAULT_TOL
) -> tuple[AlgebraElement, NormalFunctional] | None:
    """Symmetry ``s`` and state ``phi`` with ``phi(s a s) < phi(a)``.

    ``s = 2p - 1`` for the violating projection; since ``s a s - a`` is
    traceless and nonzero it has a negative eigenvalue, and ``phi`` is the
    vector state at its most negative eigenvector.  None for central ``a``.
    """
    found = find_violating_projection(a, tol)
    if found is None:
        return None
    p, _ = found
    s = symmetry_from_projection(p, tol)
    diff = s @ a @ s - a
    best_val = np.inf
    best_block = 0
    best_vec = None
    for k, (w, v) in enumerate(diff.herm_eigs()):
        if w[-1] < best_val:
            best_val = float(w[-1])
            best_block = k
            best_vec = v[:, -1]
    blocks = [np.zeros((n, n), dtype=complex) for n in a.shape.block_dims]
    blocks[best_block] = np.outer(best_vec, best_vec.conj())
    phi = NormalFunctional(AlgebraElement(a.shape, tuple(blocks)))
    return s, phi


def lemma1_construct(
    a: AlgebraElement,
    s: AlgebraElement,
    phi: NormalFunctional,
    lam: float | None = None,
    tol: float = DEFAULT_TOL,
) -> Lemma1Witness:
    """Build the positive pair ``psi_1, psi_2`` violating subadditivity.

    Needs ``phi(s a s) < phi(a)`` strictly (beyond ``tol * scale``), else
    NotAViolation.  ``lam`` defaults to the optimal ``1/sqrt(1-eps)``, with
    ``lam = 2`` when ``eps = 1`` (any ``lam > 1`` works there).  The exact
    identities (sandwich form of psi_i, the absolute-value density, and both
    closed forms above) are re-checked at construction; a failure raises
    InconsistentMath since they hold by algebra.
    """
    if not phi.is_positive():
        raise NotPositive("lemma construction needs a positive functional")
    if not is_symmetry(s, tol):
        raise ValueError("s must be a symmetry (selfadjoint unitary)")
    phi_a = evaluate(phi, a).real
    phi_sas = evaluate(phi, s @ a @ s).real
    scale = max(1.0, a.op_norm(), functional_norm(phi))
    if phi_sas >= phi_a - tol * scale:
        raise NotAViolation(
            f"phi(sas) = {phi_sas:.6g} does not lie strictly below phi(a) = {phi_a:.6g}"
        )
    eps = (phi_a - phi_sas) / phi_a
    if lam is None:
        lam0 = 2.0 if 1.0 - eps < _EPS_ONE_CUTOFF else 1.0 / math.sqrt(1.0 - eps)
    else:
        lam0 = float(lam)
        if lam0 <= 0:
            raise ValueError("lam must be positive")
    inv = 1.0 / lam0

    sps = module_action("sandwich", s, phi)  # s phi s
    phis = module_action("right", s, phi)    # phi s
    sphi = module_action("left", s, phi)     # s phi
    psi1 = lam0 * sps + phis + sphi + inv * phi
    psi2 = lam0 * sps - phis - sphi + inv * phi

    one = a.shape.identity()
    for psi, sign in ((psi1, 1.0), (psi2, -1.0)):
        v = s + sign * inv * one
        sandwich = lam0 * module_action("sandwich", v, phi)
        gap = (psi.density - sandwich.density).fro_norm()
        if gap > 1e-10 * max(1.0, psi.density.fro_norm()):
            raise InconsistentMath(f"psi = lam * v phi v identity failed (gap {gap:.3e})")
        if not psi.is_positive():
            raise InconsistentMath("psi_i is not positive; the sandwich identity rules this out")

    chi = psi1 - psi2
    abs_chi = functional_abs(chi, tol)
    target = 2.0 * (phi.density + sps.density)
    gap = (abs_chi.density - target).fro_norm()
    if gap > 1e-9 * max(1.0, target.fro_norm()):
        raise InconsistentMath(f"|psi1 - psi2| density identity failed (gap {gap:.3e})")

    lhs = evaluate(abs_chi, a).real
    rhs = (evaluate(psi1, a) + evaluate(psi2, a)).real
    closed_lhs = 2.0 * (2.0 - eps) * phi_a
    closed_rhs = 2.0 * (lam0 * (1.0 - eps) + inv) * phi_a
    if abs(lhs - closed_lhs) > 1e-9 * max(1.0, abs(closed_lhs)):
        raise InconsistentMath("lhs does not match 2(2-eps) phi(a)")
    if abs(rhs - closed_rhs) > 1e-9 * max(1.0, abs(closed_rhs)):
        raise InconsistentMath("rhs does not match 2(lam(1-eps)+1/lam) phi(a)")

    return Lemma1Witness(
        s=s, phi=phi, epsilon=float(eps), lambda0=float(lam0),
        psi1=psi1, psi2=psi2, lhs=float(lhs), rhs=float(rhs),
    )


def gardner_witness(
    a: AlgebraElement, tol: float = DEFAULT_TOL
) -> tuple[NormalFunctional, MarginReport] | None:
    """Functional with ``|phi(a)| > |phi|(a)``, or None if ``a`` is central.

    With ``sigma`` the violating projection (so ``[a, sigma] != 0``) and the
    right polar decomposition ``a sigma = W P``, the functional with density
    ``sigma W*`` satisfies ``phi(a) = tr(P) = ||a sigma||_1`` while
    ``|phi| = sigma``-density gives ``|phi|(a) = tr(sigma a)``; these differ
    exactly because ``a sigma`` is not Hermitian.
    """
    found = find_violating_projection(a, tol)
    if found is None:
        return None
    sigma, _ = found
    asig = a @ sigma
    w_blocks = [polar_decompose(b, tol)[0] for b in asig.blocks]
    w_elem = AlgebraElement(a.shape, tuple(w_blocks))
    u = w_elem.adjoint()
    phi = NormalFunctional(sigma @ u)
    inputs = ConditionInputs(ConditionId.GARDNER, functionals=(phi,))
    report = condition_margin(ConditionId.GARDNER, a, inputs, tol)
    if report.margin >= -tol * report.scale:
        raise DerivationFailed("gardner witness failed to violate; impossible for non-central a")
    return phi, report


def derive_condition_certificates(
    a: AlgebraElement, w: Lemma1Witness, tol: float = DEFAULT_TOL
) -> dict[ConditionId, MarginReport]:
    """Violating inputs for all eleven conditions, derived from one witness.

    With ``chi = psi_1 - psi_2``, the bundle inequality forces
    ``chi^+(a) > psi_1(a)`` or ``chi^-(a) > psi_2(a)``; the larger branch is
    taken (ties take the first) and the roles of ``(psi_1, psi_2)`` swap in
    the mirrored branch.  Every emitted report is re-verified through
    ``condition_margin``; a non-violating report raises DerivationFailed,
    which the equivalence theorems rule out for a valid witness.
    """
    psi1, psi2 = w.psi1, w.psi2
    chi = psi1 - psi2
    jp = jordan_decompose(chi, tol)
    branch_a = evaluate(jp.positive_part, a).real - evaluate(psi1, a).real
    branch_b = evaluate(jp.negative_part, a).real - evaluate(psi2, a).real
    if branch_a >= branch_b:
        chi_hat, p1, p2 = chi, psi1, psi2
    else:
        chi_hat, p1, p2 = -chi, psi2, psi1

    certs: dict[ConditionId, MarginReport] = {}

    def emit(cond: ConditionId, **kwargs) -> None:
        inputs = ConditionInputs(cond, **kwargs)
        report = condition_margin(cond, a, inputs, tol)
        if report.margin >= -tol * report.scale:
            raise DerivationFailed(
                f"derived certificate for {cond.value} does not violate "
                f"(margin {report.margin:.3e}, scale {report.scale:.3e})"
            )
        certs[cond] = report

    found = find_violating_projection(a, tol)
    if found is None:
        raise DerivationFailed("no violating projection; element is central")
    emit(ConditionId.II, projection=found[0])
    emit(ConditionId.III, functionals=(chi_hat, p1, p2))
    emit(ConditionId.IV, functionals=(chi_hat, p1))
    emit(ConditionId.V, functionals=(p1, -p2))
    emit(ConditionId.VI, functionals=(p1, -p2))
    emit(ConditionId.VII, functionals=(p1, -p2), weight=0.5)
    emit(ConditionId.VIII, functionals=(p1, -p2), weight=0.5)
    emit(ConditionId.IX, functionals=(chi_hat,))
    emit(ConditionId.X, functionals=(p1, -p2))
    emit(ConditionId.XI, functionals=(chi_hat,))
    gw = gardner_witness(a, tol)
    if gw is None:
        raise DerivationFailed("no gardner witness; element is central")
    certs[ConditionId.GARDNER] = gw[1]
    return {cond: certs[cond] for cond in ConditionId}


def verify_certificate(cert, a: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """Recompute a certificate from its raw inputs and confirm it violates.

    Accepts a MarginReport or a Lemma1Witness.  Every stored field is
    recomputed from the stored densities / projection / symmetry, so the
    check is independent of how the certificate was produced.  Returns False
    on any mismatch; raises ShapeMismatch only when the certificate does not
    live on the shape of ``a``.
    """
    if isinstance(cert, Lemma1Witness):
        return _verify_witness(cert, a, tol)
    if isinstance(cert, MarginReport):
        return _verify_report(cert, a, tol)
    raise TypeError(f"cannot verify object of type {type(cert).__name__}")


def _check_shape(shape, a: AlgebraElement) -> None:
    if shape != a.shape:
        raise ShapeMismatch(
            f"certificate on shape {shape.block_dims}, element on {a.shape.block_dims}"
        )


def _verify_report(cert: MarginReport, a: AlgebraElement, tol: float) -> bool:
    for f in cert.inputs.functionals:
        _check_shape(f.shape, a)
    if cert.inputs.projection is not None:
        _check_shape(cert.inputs.projection.shape, a)
    try:
        fresh = condition_margin(cert.condition, a, cert.inputs, tol)
    except Exception:
        return False
    ref = max(1.0, fresh.scale)
    if abs(fresh.lhs - cert.lhs) > 1e-9 * ref or abs(fresh.rhs - cert.rhs) > 1e-9 * ref:
        return False
    if abs(fresh.margin - cert.margin) > 1e-9 * ref:
        return False
    return fresh.margin < -tol * fresh.scale


def _verify_witness(w: Lemma1Witness, a: AlgebraElement, tol: float) -> bool:
    _check_shape(w.s.shape, a)
    for f in (w.phi, w.psi1, w.psi2):
        _check_shape(f.shape, a)
    if not is_symmetry(w.s, tol) or not w.phi.is_positive():
        return False
    if w.lambda0 <= 0:
        return False
    phi_a = evaluate(w.phi, a).real
    if phi_a <= 0:
        return False
    eps = (phi_a - evaluate(w.phi, w.s @ a @ w.s).real) / phi_a
    if abs(eps - w.epsilon) > 1e-9 * max(1.0, abs(eps)) or not eps > 0:
        return False

    inv = 1.0 / w.lambda0
    sps = module_action("sandwich", w.s, w.phi)
    phis = module_action("right", w.s, w.phi)
    sphi = module_action("left", w.s, w.phi)
    expect1 = w.lambda0 * sps + phis + sphi + inv * w.phi
    expect2 = w.lambda0 * sps - phis - sphi + inv * w.phi
    ref = max(1.0, expect1.density.fro_norm())
    if (w.psi1.density - expect1.density).fro_norm() > 1e-9 * ref:
        return False
    if (w.psi2.density - expect2.density).fro_norm() > 1e-9 * ref:
        return False
    if not (w.psi1.is_positive() and w.psi2.is_positive()):
        return False

    abs_chi = functional_abs(w.psi1 - w.psi2, tol)
    target = 2.0 * (w.phi.density + sps.density)
    if (abs_chi.density - target).fro_norm() > 1e-9 * max(1.0, target.fro_norm()):
        return False

    lhs = evaluate(abs_chi, a).real
    rhs = (evaluate(w.psi1, a) + evaluate(w.psi2, a)).real
    if abs(lhs - w.lhs) > 1e-9 * max(1.0, abs(lhs)):
        return False
    if abs(rhs - w.rhs) > 1e-9 * max(1.0, abs(rhs)):
        return False
    scale = max(1.0, a.op_norm(), functional_norm(w.psi1) + functional_norm(w.psi2))
    return lhs - rhs > tol * scale
