"""Margin evaluators and input samplers for the eleven centrality
conditions.

Condition "i" (membership in the center) is the oracle implemented by
``algebra.center_distance`` and is not in this list.  The sampled conditions
are: ``ii`` projection compression, ``iii`` decomposition bound, ``iv``
monotonicity and ``v`` subadditivity of ``phi -> phi^+(a)``, ``vi``
subadditivity of ``phi -> |phi|(a)`` on Hermitian functionals, ``vii`` /
``viii`` their convex-combination forms, ``ix`` / ``xi`` the equality
``|phi|(a) = ||a^(1/2) phi a^(1/2)||`` over general / Hermitian functionals,
``x`` subadditivity of ``|.|(a)`` over general functionals, and ``gardner``
the triangle inequality ``|phi(a)| <= |phi|(a)``.

Each evaluator returns a MarginReport with ``margin = rhs - lhs``; the input
satisfies the condition when ``margin >= -tol * scale`` where ``scale =
max(1, ||a||, sum of input functional norms)``.  The equality conditions
``ix`` and ``xi`` report ``lhs = |difference|, rhs = 0`` so their margin is
``-|difference|``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    AlgebraShape,
    is_positive,
    is_projection,
    psd_sqrt_element,
    random_element,
    random_gaussian,
)
from .errors import InvalidInputs, NotPositiveElement
from .functionals import (
    NormalFunctional,
    evaluate,
    functional_abs,
    functional_norm,
    jordan_decompose,
    module_action,
)
from .matkernel import DEFAULT_TOL


class ConditionId(str, enum.Enum):
    II = "ii"
    III = "iii"
    IV = "iv"
    V = "v"
    VI = "vi"
    VII = "vii"
    VIII = "viii"
    IX = "ix"
    X = "x"
    XI = "xi"
    GARDNER = "gardner"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


ALL_CONDITIONS: tuple[ConditionId, ...] = tuple(ConditionId)

#: conditions whose functional inputs must be Hermitian
_HERMITIAN_ONLY = {
    ConditionId.III,
    ConditionId.IV,
    ConditionId.V,
    ConditionId.VI,
    ConditionId.VII,
    ConditionId.VIII,
    ConditionId.XI,
}

#: number of functional slots per condition
_N_FUNCTIONALS = {
    ConditionId.II: 0,
    ConditionId.III: 3,
    ConditionId.IV: 2,
    ConditionId.V: 2,
    ConditionId.VI: 2,
    ConditionId.VII: 2,
    ConditionId.VIII: 2,
    ConditionId.IX: 1,
    ConditionId.X: 2,
    ConditionId.XI: 1,
    ConditionId.GARDNER: 1,
}


@dataclass(frozen=True, eq=False)
class ConditionInputs:
    """Tagged union of quantified inputs, one variant per condition.

    ``ii`` carries a projection; ``iii`` the triple ``(phi, phi1, phi2)``
    with ``phi = phi1 - phi2``; ``iv`` an ordered pair ``phi <= psi``;
    ``v``/``vi`` a Hermitian pair; ``vii``/``viii`` a Hermitian pair plus a
    weight ``t`` in [0, 1]; ``ix``/``xi``/``gardner`` a single functional;
    ``x`` a general pair.
    """

    condition: ConditionId
    functionals: tuple[NormalFunctional, ...] = ()
    projection: AlgebraElement | None = None
    weight: float | None = None

    def validate(self, shape: AlgebraShape, tol: float = DEFAULT_TOL) -> None:
        """Raise InvalidInputs unless the variant's structural constraint holds."""
        cond = self.condition
        if len(self.functionals) != _N_FUNCTIONALS[cond]:
            raise InvalidInputs(
                f"{cond.value} expects {_N_FUNCTIONALS[cond]} functionals, "
                f"got {len(self.functionals)}"
            )
        for f in self.functionals:
            if f.shape != shape:
                raise InvalidInputs(f"functional shape {f.shape.block_dims} != {shape.block_dims}")
        if cond is ConditionId.II:
            if self.projection is None or self.projection.shape != shape:
                raise InvalidInputs("condition ii needs a projection on the same shape")
            if not is_projection(self.projection, tol):
                raise InvalidInputs("condition ii input is not a projection within tol")
            return
        if self.projection is not None:
            raise InvalidInputs(f"condition {cond.value} takes no projection")
        if cond in _HERMITIAN_ONLY and not all(f.is_hermitian() for f in self.functionals):
            raise InvalidInputs(f"condition {cond.value} needs Hermitian functionals")
        if cond is ConditionId.III:
            phi, phi1, phi2 = self.functionals
            if not (phi1.is_positive() and phi2.is_positive()):
                raise InvalidInputs("condition iii needs positive phi1, phi2")
            defect = (phi1.density - phi2.density - phi.density).fro_norm()
            scale = max(1.0, phi.density.fro_norm())
            if defect > tol * scale:
                raise InvalidInputs("condition iii decomposition phi = phi1 - phi2 fails")
        if cond is ConditionId.IV:
            phi, psi = self.functionals
            gap = psi.density - phi.density
            if not is_positive((gap + gap.adjoint()) * 0.5, tol):
                raise InvalidInputs("condition iv needs phi <= psi")
        if cond in (ConditionId.VII, ConditionId.VIII):
            if self.weight is None or not 0.0 <= self.weight <= 1.0:
                raise InvalidInputs("conditions vii/viii need a weight t in [0, 1]")
        elif self.weight is not None:
            raise InvalidInputs(f"condition {cond.value} takes no weight")


@dataclass(frozen=True, eq=False)
class MarginReport:
    """One evaluated condition instance: ``margin = rhs - lhs``.

    ``scale`` is the tolerance scale ``max(1, ||a||, sum ||rho||_1)``; the
    input satisfies the condition iff ``margin >= -tol * scale``, and a
    violation certificate requires ``margin < -tol * scale``.
    """

    condition: ConditionId
    lhs: float
    rhs: float
    margin: float
    scale: float
    inputs: ConditionInputs

    @property
    def relative_margin(self) -> float:
        return self.margin / self.scale


def _plus_eval(phi: NormalFunctional, a: AlgebraElement, tol: float) -> float:
    return evaluate(jordan_decompose(phi, tol).positive_part, a).real


def _abs_eval(phi: NormalFunctional, a: AlgebraElement, tol: float) -> float:
    return evaluate(functional_abs(phi, tol), a).real


def condition_margin(
    cond: ConditionId,
    a: AlgebraElement,
    inputs: ConditionInputs,
    tol: float = DEFAULT_TOL,
) -> MarginReport:
    """Evaluate one condition on one input bundle against the element ``a``."""
    if inputs.condition != cond:
        raise InvalidInputs(f"inputs tagged {inputs.condition.value}, asked for {cond.value}")
    if not is_positive(a, tol):
        raise NotPositiveElement("condition margins are defined for positive elements")
    inputs.validate(a.shape, tol)

    scale = max(
        1.0,
        a.op_norm(),
        sum(functional_norm(f) for f in inputs.functionals),
    )
    fs = inputs.functionals

    if cond is ConditionId.II:
        p = inputs.projection
        diff = p @ a @ p - a
        lhs = max(float(w[0]) for w, _ in diff.herm_eigs())
        rhs = 0.0
    elif cond is ConditionId.III:
        phi, phi1, _ = fs
        lhs = _plus_eval(phi, a, tol)
        rhs = evaluate(phi1, a).real
    elif cond is ConditionId.IV:
        phi, psi = fs
        lhs = _plus_eval(phi, a, tol)
        rhs = _plus_eval(psi, a, tol)
    elif cond is ConditionId.V:
        phi, psi = fs
        lhs = _plus_eval(phi + psi, a, tol)
        rhs = _plus_eval(phi, a, tol) + _plus_eval(psi, a, tol)
    elif cond in (ConditionId.VI, ConditionId.X):
        phi, psi = fs
        lhs = _abs_eval(phi + psi, a, tol)
        rhs = _abs_eval(phi, a, tol) + _abs_eval(psi, a, tol)
    elif cond is ConditionId.VII:
        phi, psi = fs
        t = inputs.weight
        lhs = _plus_eval(t * phi + (1.0 - t) * psi, a, tol)
        rhs = t * _plus_eval(phi, a, tol) + (1.0 - t) * _plus_eval(psi, a, tol)
    elif cond is ConditionId.VIII:
        phi, psi = fs
        t = inputs.weight
        lhs = _abs_eval(t * phi + (1.0 - t) * psi, a, tol)
        rhs = t * _abs_eval(phi, a, tol) + (1.0 - t) * _abs_eval(psi, a, tol)
    elif cond in (ConditionId.IX, ConditionId.XI):
        (phi,) = fs
        sq = psd_sqrt_element(a, tol)
        sandwiched = module_action("sandwich", sq, phi)
        lhs = abs(_abs_eval(phi, a, tol) - functional_norm(sandwiched))
        rhs = 0.0
    elif cond is ConditionId.GARDNER:
        (phi,) = fs
        lhs = abs(evaluate(phi, a))
        rhs = _abs_eval(phi, a, tol)
    else:  # pragma: no cover - enum is closed
        raise InvalidInputs(f"unknown condition {cond!r}")

    return MarginReport(cond, float(lhs), float(rhs), float(rhs - lhs), float(scale), inputs)


def sample_inputs(
    cond: ConditionId,
    shape: AlgebraShape,
    rng: np.random.Generator,
    tol: float = DEFAULT_TOL,
) -> ConditionInputs:
    """Draw one random input bundle for the condition's quantifiers.

    Structural constraints hold by construction: ``iii`` returns
    ``(phi, phi^+ + delta, phi^- + delta)`` for a random PSD ``delta`` (a
    valid decomposition, though not every decomposition arises this way) and
    ``iv`` returns ``(phi, phi + delta)``.
    """
    def herm() -> NormalFunctional:
        return NormalFunctional(random_element("hermitian", shape, rng))

    def psd() -> NormalFunctional:
        return NormalFunctional(random_element("psd", shape, rng))

    def general() -> NormalFunctional:
        return NormalFunctional(random_gaussian(shape, rng))

    if cond is ConditionId.II:
        return ConditionInputs(cond, projection=random_element("projection", shape, rng))
    if cond is ConditionId.III:
        phi, delta = herm(), psd()
        jp = jordan_decompose(phi, tol)
        return ConditionInputs(
            cond, functionals=(phi, jp.positive_part + delta, jp.negative_part + delta)
        )
    if cond is ConditionId.IV:
        phi, delta = herm(), psd()
        return ConditionInputs(cond, functionals=(phi, phi + delta))
    if cond in (ConditionId.V, ConditionId.VI):
        return ConditionInputs(cond, functionals=(herm(), herm()))
    if cond in (ConditionId.VII, ConditionId.VIII):
        pair = (herm(), herm())
        return ConditionInputs(cond, functionals=pair, weight=float(rng.uniform()))
    if cond in (ConditionId.IX, ConditionId.GARDNER):
        return ConditionInputs(cond, functionals=(general(),))
    if cond is ConditionId.X:
        return ConditionInputs(cond, functionals=(general(), general()))
    if cond is ConditionId.XI:
        return ConditionInputs(cond, functionals=(herm(),))
    raise InvalidInputs(f"unknown condition {cond!r}")  # pragma: no cover
