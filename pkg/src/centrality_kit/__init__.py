"""Verification and counterexample toolkit for centrality of positive
elements in finite-dimensional *-algebras (finite direct sums of complex
matrix blocks).

In this model every linear functional is normal and the C*-algebra and von
Neumann-algebra pictures coincide, so every condition the toolkit checks is
exactly computable and every non-central input yields an explicit,
independently re-verifiable certificate.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    AlgebraShape,
    center_distance,
    is_positive,
    projection_from_vectors,
    random_element,
    symmetry_from_projection,
)
from .checks import Report, Verdict, check_all, check_condition
from .conditions import (
    ALL_CONDITIONS,
    ConditionId,
    ConditionInputs,
    MarginReport,
    condition_margin,
    sample_inputs,
)
from .functionals import (
    JordanPair,
    NormalFunctional,
    functional_abs,
    functional_polar,
    jordan_decompose,
    module_action,
    support_projection,
)
from .matkernel import herm_eig, polar_decompose, psd_sqrt, trace_norm
from .witness import (
    Lemma1Witness,
    derive_condition_certificates,
    find_violating_projection,
    gardner_witness,
    lemma1_construct,
    verify_certificate,
    violating_symmetry_state,
)

__all__ = [
    "ALL_CONDITIONS",
    "AlgebraElement",
    "AlgebraShape",
    "ConditionId",
    "ConditionInputs",
    "JordanPair",
    "Lemma1Witness",
    "MarginReport",
    "NormalFunctional",
    "Report",
    "Verdict",
    "center_distance",
    "check_all",
    "check_condition",
    "condition_margin",
    "derive_condition_certificates",
    "find_violating_projection",
    "functional_abs",
    "functional_polar",
    "gardner_witness",
    "herm_eig",
    "is_positive",
    "jordan_decompose",
    "lemma1_construct",
    "module_action",
    "polar_decompose",
    "projection_from_vectors",
    "psd_sqrt",
    "random_element",
    "sample_inputs",
    "support_projection",
    "symmetry_from_projection",
    "trace_norm",
    "verify_certificate",
    "violating_symmetry_state",
    "__version__",
]
