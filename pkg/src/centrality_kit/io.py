"""Instance and certificate file formats (versioned JSON schemas).

Complex matrices are stored row-major as ``[re, im]`` pairs, one matrix per
block, so files stay unambiguous without complex literals.  Numbers pass
through Python's shortest round-trip float formatting, which makes
serialize -> parse -> serialize the identity at full binary precision.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import AlgebraElement, AlgebraShape, is_positive
from .conditions import ConditionId, ConditionInputs, MarginReport
from .errors import DimensionMismatch, NotPositive, SchemaError
from .functionals import NormalFunctional
from .matkernel import DEFAULT_TOL
from .witness import Lemma1Witness

INSTANCE_SCHEMA = "centrality-kit/instance-v1"
CERT_SCHEMA = "centrality-kit/cert-v1"


# -- matrix / element encoding ---------------------------------------------

def matrix_to_data(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_data(data, n: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    if arr.shape != (n, n, 2):
        raise DimensionMismatch(f"matrix data of shape {arr.shape}, expected ({n}, {n}, 2)")
    return arr[..., 0] + 1j * arr[..., 1]


def element_to_data(x: AlgebraElement) -> list:
    return [matrix_to_data(b) for b in x.blocks]


def element_from_data(shape: AlgebraShape, data) -> AlgebraElement:
    if not isinstance(data, list) or len(data) != len(shape.block_dims):
        raise DimensionMismatch(
            f"expected {len(shape.block_dims)} block matrices, got "
            f"{len(data) if isinstance(data, list) else type(data).__name__}"
        )
    blocks = tuple(matrix_from_data(d, n) for d, n in zip(data, shape.block_dims))
    return AlgebraElement(shape, blocks)


# -- instance files ----------------------------------------------------------

def serialize_instance(
    element: AlgebraElement,
    functionals: dict[str, NormalFunctional] | None = None,
    tol: float | None = None,
) -> dict:
    doc = {
        "schema": INSTANCE_SCHEMA,
        "blocks": list(element.shape.block_dims),
        "element": element_to_data(element),
    }
    if functionals:
        doc["functionals"] = {name: element_to_data(f.density) for name, f in functionals.items()}
    if tol is not None:
        doc["tol"] = tol
    return doc


def parse_instance_data(doc) -> tuple[AlgebraShape, AlgebraElement, dict[str, NormalFunctional]]:
    if not isinstance(doc, dict):
        raise SchemaError("instance file must contain a JSON object")
    if doc.get("schema") != INSTANCE_SCHEMA:
        raise SchemaError(f"expected schema {INSTANCE_SCHEMA!r}, got {doc.get('schema')!r}")
    blocks = doc.get("blocks")
    if not isinstance(blocks, list) or not all(isinstance(n, int) and n > 0 for n in blocks):
        raise SchemaError("'blocks' must be a list of positive integers")
    shape = AlgebraShape(tuple(blocks))
    if "element" not in doc:
        raise SchemaError("instance file is missing 'element'")
    element = element_from_data(shape, doc["element"])
    tol = float(doc.get("tol", DEFAULT_TOL))
    report = is_positive(element, tol)
    if not report:
        raise NotPositive(
            f"instance element is not positive within tol={tol:g} "
            f"(min eigenvalue {report.min_eigenvalue:.3e})"
        )
    functionals = {}
    for name, data in (doc.get("functionals") or {}).items():
        functionals[name] = NormalFunctional(element_from_data(shape, data))
    return shape, element, functionals


def parse_instance(path) -> tuple[AlgebraShape, AlgebraElement, dict[str, NormalFunctional]]:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return parse_instance_data(doc)


def write_instance(path, element: AlgebraElement, functionals=None, tol=None) -> None:
    doc = serialize_instance(element, functionals, tol)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


# -- certificate files -------------------------------------------------------

def serialize_certificate(
    report: MarginReport,
    master_seed: int | None = None,
    derivation: Lemma1Witness | None = None,
) -> dict:
    from . import __version__

    inputs: dict = {}
    if report.inputs.projection is not None:
        inputs["projection"] = element_to_data(report.inputs.projection)
    if report.inputs.functionals:
        inputs["functionals"] = [element_to_data(f.density) for f in report.inputs.functionals]
    if report.inputs.weight is not None:
        inputs["weight"] = report.inputs.weight
    shape = report.inputs.projection.shape if report.inputs.projection is not None \
        else report.inputs.functionals[0].shape
    doc = {
        "schema": CERT_SCHEMA,
        "condition": report.condition.value,
        "blocks": list(shape.block_dims),
        "lhs": report.lhs,
        "rhs": report.rhs,
        "margin": report.margin,
        "scale": report.scale,
        "inputs": inputs,
        "tool_version": __version__,
        "master_seed": master_seed,
    }
    if derivation is not None:
        doc["derivation"] = {
            "symmetry": element_to_data(derivation.s),
            "phi": element_to_data(derivation.phi.density),
            "epsilon": derivation.epsilon,
            "lambda0": derivation.lambda0,
            "psi1": element_to_data(derivation.psi1.density),
            "psi2": element_to_data(derivation.psi2.density),
            "lhs": derivation.lhs,
            "rhs": derivation.rhs,
        }
    return doc


def parse_certificate_data(doc) -> tuple[MarginReport, Lemma1Witness | None]:
    if not isinstance(doc, dict):
        raise SchemaError("certificate file must contain a JSON object")
    if doc.get("schema") != CERT_SCHEMA:
        raise SchemaError(f"expected schema {CERT_SCHEMA!r}, got {doc.get('schema')!r}")
    try:
        cond = ConditionId(doc["condition"])
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"bad or missing condition id: {exc}") from exc
    blocks = doc.get("blocks")
    if not isinstance(blocks, list) or not all(isinstance(n, int) and n > 0 for n in blocks):
        raise SchemaError("'blocks' must be a list of positive integers")
    shape = AlgebraShape(tuple(blocks))
    raw = doc.get("inputs")
    if not isinstance(raw, dict):
        raise SchemaError("certificate is missing 'inputs'")
    projection = None
    if "projection" in raw:
        projection = element_from_data(shape, raw["projection"])
    functionals = tuple(
        NormalFunctional(element_from_data(shape, d)) for d in raw.get("functionals", [])
    )
    weight = raw.get("weight")
    inputs = ConditionInputs(
        cond, functionals=functionals, projection=projection,
        weight=float(weight) if weight is not None else None,
    )
    try:
        report = MarginReport(
            condition=cond,
            lhs=float(doc["lhs"]),
            rhs=float(doc["rhs"]),
            margin=float(doc["margin"]),
            scale=float(doc["scale"]),
            inputs=inputs,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad or missing margin fields: {exc}") from exc

    derivation = None
    if "derivation" in doc:
        d = doc["derivation"]
        try:
            derivation = Lemma1Witness(
                s=element_from_data(shape, d["symmetry"]),
                phi=NormalFunctional(element_from_data(shape, d["phi"])),
                epsilon=float(d["epsilon"]),
                lambda0=float(d["lambda0"]),
                psi1=NormalFunctional(element_from_data(shape, d["psi1"])),
                psi2=NormalFunctional(element_from_data(shape, d["psi2"])),
                lhs=float(d["lhs"]),
                rhs=float(d["rhs"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad derivation payload: {exc}") from exc
    return report, derivation


def parse_certificate(path) -> tuple[MarginReport, Lemma1Witness | None]:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return parse_certificate_data(doc)


def write_certificate(path, report, master_seed=None, derivation=None) -> None:
    doc = serialize_certificate(report, master_seed, derivation)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
