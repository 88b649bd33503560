"""Command-line interface: check, witness, verify, fuzz.

Exit codes: 0 = consistent / verified, 1 = invalid certificate or internal
equivalence inconsistency, 2 = input error.  With ``--json`` each command
prints a single machine-readable document on stdout; identical argv and
seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, io, witness
from .algebra import AlgebraShape, random_element
from .checks import DEFAULT_SAMPLES, Report, check_all
from .conditions import ALL_CONDITIONS, ConditionId
from .errors import CentralityKitError, InconsistentMath
from .matkernel import DEFAULT_TOL

_LEMMA_DERIVED = {
    ConditionId.III, ConditionId.IV, ConditionId.V, ConditionId.VI,
    ConditionId.VII, ConditionId.VIII, ConditionId.IX, ConditionId.X,
    ConditionId.XI,
}


def _report_doc(report: Report) -> dict:
    conditions = []
    for v in report.verdicts:
        if v.satisfied:
            conditions.append({
                "condition": v.condition.value,
                "verdict": "satisfied",
                "samples": v.samples,
                "min_margin": v.min_margin,
                "min_relative_margin": v.min_relative_margin,
            })
        else:
            c = v.certificate
            conditions.append({
                "condition": v.condition.value,
                "verdict": "violated",
                "lhs": c.lhs,
                "rhs": c.rhs,
                "margin": c.margin,
                "scale": c.scale,
            })
    return {
        "command": "check",
        "tool_version": __version__,
        "blocks": list(report.element.shape.block_dims),
        "tol": report.tol,
        "samples": report.samples,
        "seed": report.seed,
        "oracle": {
            "central": report.central,
            "center_distance": report.center_distance,
            "nearest_central": io.element_to_data(report.nearest_central),
        },
        "conditions": conditions,
    }


def _print_report(report: Report) -> None:
    shape = report.element.shape
    print(f"instance: blocks {list(shape.block_dims)}, total dim {shape.total_dim}")
    label = "central" if report.central else "NON-CENTRAL"
    print(f"oracle:   {label} (center distance {report.center_distance:.6g})")
    scalars = [f"{b[0, 0].real:.6g}" for b in report.nearest_central.blocks]
    print(f"nearest central element: blockwise scalars [{', '.join(scalars)}]")
    print(f"{'condition':<10} {'verdict':<10} detail")
    for v in report.verdicts:
        if v.satisfied:
            detail = (
                f"min margin {v.min_margin:.6g} "
                f"(relative {v.min_relative_margin:.3g}, {v.samples} samples)"
            )
            print(f"{v.condition.value:<10} {'satisfied':<10} {detail}")
        else:
            c = v.certificate
            detail = f"lhs {c.lhs:.6g} > rhs {c.rhs:.6g} (margin {c.margin:.6g})"
            print(f"{v.condition.value:<10} {'violated':<10} {detail}")
    print("RESULT: consistent (all condition verdicts agree with the oracle)")


def cmd_check(args) -> int:
    _, element, _ = io.parse_instance(args.instance)
    report = check_all(element, samples=args.samples, tol=args.tol, seed=args.seed)
    if args.json:
        print(json.dumps(_report_doc(report), indent=2))
    else:
        _print_report(report)
    return 0


def cmd_witness(args) -> int:
    _, element, _ = io.parse_instance(args.instance)
    pair = witness.violating_symmetry_state(element, args.tol)
    if pair is None:
        print("element is central: no violation witnesses exist")
        return 0
    w = witness.lemma1_construct(element, pair[0], pair[1], tol=args.tol)
    certs = witness.derive_condition_certificates(element, w, args.tol)
    wanted = list(ALL_CONDITIONS) if args.condition == "all" else [ConditionId(args.condition)]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for cond in wanted:
        path = outdir / f"cert-{cond.value}.json"
        derivation = w if cond in _LEMMA_DERIVED else None
        io.write_certificate(path, certs[cond], master_seed=args.seed, derivation=derivation)
        print(f"wrote {path}")
    return 0


def cmd_verify(args) -> int:
    report, derivation = io.parse_certificate(args.certificate)
    _, element, _ = io.parse_instance(args.instance)
    ok = witness.verify_certificate(report, element, args.tol)
    if ok and derivation is not None:
        ok = witness.verify_certificate(derivation, element, args.tol)
        # the derivation must actually produce the certified inputs
        if ok and report.condition in _LEMMA_DERIVED:
            ok = _derivation_matches(report, derivation, args.tol)
    print(f"certificate {report.condition.value}: {'VALID' if ok else 'INVALID'}")
    return 0 if ok else 1


def _derivation_matches(report, w: witness.Lemma1Witness, tol: float) -> bool:
    densities = [f.density for f in report.inputs.functionals]
    chi = w.psi1 - w.psi2
    candidates = [
        w.psi1.density, w.psi2.density, (-w.psi1).density, (-w.psi2).density,
        chi.density, (-chi).density,
    ]
    for d in densities:
        ref = max(1.0, d.fro_norm())
        direct = any((d - c).fro_norm() <= 1e-9 * ref for c in candidates)
        if not direct:
            # Jordan parts of +/- chi also legitimately appear in iii inputs
            from .functionals import jordan_decompose

            jp = jordan_decompose(chi, tol)
            parts = [jp.positive_part.density, jp.negative_part.density]
            if not any((d - c).fro_norm() <= 1e-9 * ref for c in parts):
                return False
    return True


def _parse_mix(text: str) -> float:
    if not text.startswith("central:"):
        raise ValueError(f"--mix must look like central:0.5, got {text!r}")
    frac = float(text.split(":", 1)[1])
    if not 0.0 <= frac <= 1.0:
        raise ValueError(f"central fraction must be in [0, 1], got {frac}")
    return frac


def cmd_fuzz(args) -> int:
    dims = tuple(int(tok) for tok in args.blocks.split(","))
    shape = AlgebraShape(dims)
    frac = _parse_mix(args.mix)
    if frac < 1.0 and max(dims) < 2:
        raise ValueError("non-central instances need at least one block of dim >= 2")
    trial_seeds = np.random.SeedSequence(args.seed).spawn(args.trials)

    n_central = 0
    n_noncentral = 0
    certs_verified = 0
    min_sat_rel = None
    min_viol_rel = None
    for trial, child in enumerate(trial_seeds):
        rng = np.random.default_rng(child)
        central = bool(rng.uniform() < frac)
        kind = "central_positive" if central else "noncentral_positive"
        element = random_element(kind, shape, rng)
        try:
            report = check_all(element, samples=args.samples, tol=args.tol, seed=child.spawn(1)[0])
            if central:
                n_central += 1
                worst = min(v.min_relative_margin for v in report.verdicts)
                min_sat_rel = worst if min_sat_rel is None else min(min_sat_rel, worst)
            else:
                n_noncentral += 1
                for v in report.verdicts:
                    if not witness.verify_certificate(v.certificate, element, args.tol):
                        raise InconsistentMath(
                            f"certificate for {v.condition.value} failed re-verification"
                        )
                    certs_verified += 1
                    rel = -v.certificate.margin / v.certificate.scale
                    min_viol_rel = rel if min_viol_rel is None else min(min_viol_rel, rel)
        except InconsistentMath as exc:
            repro = Path(args.out) / f"fuzz-reproducer-trial{trial}.json"
            doc = io.serialize_instance(element, tol=args.tol)
            doc["reproducer"] = {
                "trial": trial,
                "master_seed": args.seed,
                "samples": args.samples,
                "error": str(exc),
            }
            repro.parent.mkdir(parents=True, exist_ok=True)
            repro.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
            print(f"error: trial {trial}: {exc}", file=sys.stderr)
            print(f"reproducer written to {repro}", file=sys.stderr)
            return 1

    summary = {
        "command": "fuzz",
        "tool_version": __version__,
        "blocks": list(dims),
        "trials": args.trials,
        "seed": args.seed,
        "mix_central": frac,
        "samples": args.samples,
        "tol": args.tol,
        "central_count": n_central,
        "noncentral_count": n_noncentral,
        "certificates_verified": certs_verified,
        "min_satisfied_relative_margin": min_sat_rel,
        "min_violation_relative_magnitude": min_viol_rel,
        "inconsistencies": 0,
    }
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        print(
            f"fuzz: {args.trials} trials on blocks {list(dims)}, seed {args.seed}, "
            f"mix central {frac}, samples {args.samples}"
        )
        print(f"central instances:     {n_central:>6}   "
              f"min relative satisfaction margin: {min_sat_rel}")
        print(f"non-central instances: {n_noncentral:>6}   "
              f"min relative violation magnitude: {min_viol_rel}")
        print(f"certificates re-verified: {certs_verified}")
        print("inconsistencies: 0")
        print("RESULT: consistent")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centrality-kit",
        description="Check, witness, and fuzz centrality conditions on "
                    "block matrix algebras.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the oracle and all condition checkers")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("witness", help="write violation certificates")
    p.add_argument("instance")
    p.add_argument(
        "--condition",
        default="all",
        choices=[c.value for c in ALL_CONDITIONS] + ["all"],
    )
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="recompute and confirm a certificate")
    p.add_argument("certificate")
    p.add_argument("instance")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="seeded campaign over random instances")
    p.add_argument("--blocks", default="2,3", help="comma-separated block dims")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mix", default="central:0.5", help="fraction of central instances")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--out", default=".", help="directory for reproducer files")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconsistentMath as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CentralityKitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
