"""Verdict orchestration: deciding each condition against the center oracle.

The universal quantifiers are resolved asymmetrically, which is what makes
verdicts reproducible: for a central element satisfaction is certified by
the oracle plus N sampled margins (the equivalence theorems guarantee no
counterexample exists, so any sampled violation raises InconsistentMath);
for a non-central element violation is certified by the deterministic
witness chain, never by sampling luck.

Per-condition rng streams are spawned from the master seed up front, so
results do not depend on evaluation order or on which subset of conditions
is checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _batch, witness
from .algebra import AlgebraElement, center_distance, is_positive
from .conditions import ALL_CONDITIONS, ConditionId, MarginReport
from .errors import InconsistentMath, NotAViolation, NotPositiveElement
from .matkernel import DEFAULT_TOL

DEFAULT_SAMPLES = 200


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome for one condition: sampled satisfaction or a certificate."""

    condition: ConditionId
    satisfied: bool
    samples: int
    min_margin: float | None = None
    min_relative_margin: float | None = None
    certificate: MarginReport | None = None


@dataclass(frozen=True, eq=False)
class Report:
    """Oracle verdict plus one Verdict per condition."""

    element: AlgebraElement
    central: bool
    center_distance: float
    nearest_central: AlgebraElement
    tol: float
    samples: int
    seed: int | None
    verdicts: tuple[Verdict, ...]
    witness: witness.Lemma1Witness | None

    def verdict(self, cond: ConditionId) -> Verdict:
        return self.verdicts[ALL_CONDITIONS.index(cond)]


def _condition_streams(seed) -> dict[ConditionId, np.random.Generator]:
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(len(ALL_CONDITIONS))
    return {cond: np.random.default_rng(child) for cond, child in zip(ALL_CONDITIONS, children)}


def _sampled_verdict(
    cond: ConditionId,
    a: AlgebraElement,
    samples: int,
    tol: float,
    rng: np.random.Generator,
) -> Verdict:
    margins, scales = _batch.sampled_margins(cond, a, samples, rng, tol)
    rel = margins / scales
    worst = int(np.argmin(rel))
    if rel[worst] < -tol:
        raise InconsistentMath(
            f"condition {cond.value} sampled a violating margin "
            f"{margins[worst]:.3e} (relative {rel[worst]:.3e}) on a central element"
        )
    return Verdict(
        condition=cond,
        satisfied=True,
        samples=samples,
        min_margin=float(margins.min()),
        min_relative_margin=float(rel[worst]),
    )


def _certificates(a: AlgebraElement, tol: float):
    pair = witness.violating_symmetry_state(a, tol)
    if pair is None:
        raise InconsistentMath("oracle says non-central but no witness was found")
    try:
        w = witness.lemma1_construct(a, pair[0], pair[1], tol=tol)
    except NotAViolation as exc:
        raise InconsistentMath(f"constructed witness pair fails to violate: {exc}") from exc
    return w, witness.derive_condition_certificates(a, w, tol)


def check_condition(
    cond: ConditionId,
    a: AlgebraElement,
    samples: int = DEFAULT_SAMPLES,
    tol: float = DEFAULT_TOL,
    seed: int | None = 0,
) -> Verdict:
    """Verdict for a single condition (see module docstring for semantics)."""
    if not is_positive(a, tol):
        raise NotPositiveElement("conditions are checked for positive elements")
    dist, _ = center_distance(a, tol)
    if dist <= tol * max(1.0, a.op_norm()):
        rng = _condition_streams(seed)[cond]
        return _sampled_verdict(cond, a, samples, tol, rng)
    _, certs = _certificates(a, tol)
    return Verdict(condition=cond, satisfied=False, samples=0, certificate=certs[cond])


def check_all(
    a: AlgebraElement,
    samples: int = DEFAULT_SAMPLES,
    tol: float = DEFAULT_TOL,
    seed: int | None = 0,
) -> Report:
    """Oracle verdict plus all eleven condition verdicts.

    Raises InconsistentMath if any verdict disagrees with the oracle (a
    sampled violation on a central element, or a failed certificate
    derivation on a non-central one).
    """
    if not is_positive(a, tol):
        raise NotPositiveElement("conditions are checked for positive elements")
    dist, nearest = center_distance(a, tol)
    central = dist <= tol * max(1.0, a.op_norm())
    lemma = None
    if central:
        streams = _condition_streams(seed)
        verdicts = tuple(
            _sampled_verdict(cond, a, samples, tol, streams[cond]) for cond in ALL_CONDITIONS
        )
    else:
        lemma, certs = _certificates(a, tol)
        verdicts = tuple(
            Verdict(condition=cond, satisfied=False, samples=0, certificate=certs[cond])
            for cond in ALL_CONDITIONS
        )
    return Report(
        element=a,
        central=central,
        center_distance=dist,
        nearest_central=nearest,
        tol=tol,
        samples=samples,
        seed=seed,
        verdicts=verdicts,
        witness=lemma,
    )
