"""Assemble the full analysis verdict for one theory.

This is the glue between the parser and the checks: build the kinematic
matrix, test rotation invariance, judge each field's statistics, split
off the constraints, diagnose flavor-antisymmetric pairings, and lint
the mode expansions for absorption-emission balance.  The result is a
single report object with a stable JSON rendering, so repeated runs on
the same input are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ExactMatrix, Scalar, symmetry_decompose
from .flavor import FlavorDiagnosis, KirchoffResult, flavor_diagnosis, kirchoff_check
from .fock import ModeExpansion, ModeTerm
from .invariance import (
    ConstraintSplit,
    InvarianceReport,
    check_su2_invariance,
    constraint_split,
)
from .model import (
    FieldSpec,
    KinematicBuild,
    TheorySpec,
    build_kinematic,
    theory_generators,
)
from .schwinger import (
    SurfaceVariation,
    TheoryVerdict,
    spin_statistics_verdict,
    surface_variation_consistency,
)

STATUSES = (
    "CONSISTENT",
    "CONTRADICTION",
    "REJECTED_NEGATIVE_NORM",
    "NO_KINEMATIC_TERM",
)


class AmbiguousKinematicError(ValueError):
    """The automatic builder found several candidate kinematic forms."""


def field_expansion(f: FieldSpec) -> ModeExpansion:
    """Canonical hermitian mode expansion of a declared field.

    One representative mode per flavor sector, carrying both an
    annihilation and a creation part: the (a + adag) structure that a
    hermitian field forces and that keeps emission tied to absorption.
    """
    terms = []
    for fl in range(1, f.flavors + 1):
        mode = f.name if f.flavors == 1 else f"{f.name}.f{fl}"
        terms.append(ModeTerm("a", "annihilator", mode, Fraction(1)))
        terms.append(ModeTerm("adag", "creator", mode, Fraction(1)))
    return ModeExpansion(f.name, tuple(terms))


@dataclass(frozen=True)
class VerdictReport:
    """Everything the analysis derived about one theory."""

    spec: TheorySpec
    build: KinematicBuild
    verdict: TheoryVerdict
    invariance: InvarianceReport | None
    statistics: str | None
    split: ConstraintSplit | None
    surface: SurfaceVariation | None
    flavor_by_field: tuple[tuple[str, FlavorDiagnosis], ...]
    kirchoff: tuple[tuple[str, KirchoffResult], ...]
    status: str

    @property
    def flavor(self) -> FlavorDiagnosis | None:
        if not self.flavor_by_field:
            return None
        return self.flavor_by_field[0][1]


def analyze_theory(spec: TheorySpec) -> VerdictReport:
    """Run the full pipeline on a parsed theory.

    Raises AmbiguousKinematicError when the builder cannot single out a
    kinematic form; every other outcome, including theories with no form
    at all and theories rejected on norms, comes back as a report.
    """
    build = build_kinematic(spec)
    if build.status == "not_unique":
        detail = f" (field {', '.join(build.details)})" if build.details else ""
        raise AmbiguousKinematicError(f"{build.note}{detail}")

    verdict = spin_statistics_verdict(spec, build)
    invariance = None
    statistics = None
    split = None
    surface = None
    flavor_by_field: list[tuple[str, FlavorDiagnosis]] = []

    if build.status == "built":
        k0 = build.kinematic.matrix
        invariance = check_su2_invariance(k0, theory_generators(spec))
        found = {v.consistent_statistics for v in verdict.verdicts}
        if len(found) == 1:
            statistics = found.pop()
        if statistics is not None:
            split = constraint_split(k0, statistics)
            surface = surface_variation_consistency(k0, statistics)
        if spec.flavor_mode == "antisymmetric-pair":
            for f, idx in spec.field_ranges():
                block = k0.principal(idx)
                flavor_by_field.append((f.name, flavor_diagnosis(block, f.spin)))

    status = verdict.status
    if status != "CONTRADICTION" and any(
            d.negative_norm for _, d in flavor_by_field):
        status = "REJECTED_NEGATIVE_NORM"

    kirchoff = tuple(
        (f.name, kirchoff_check(field_expansion(f))) for f in spec.fields)

    return VerdictReport(
        spec=spec,
        build=build,
        verdict=verdict,
        invariance=invariance,
        statistics=statistics,
        split=split,
        surface=surface,
        flavor_by_field=tuple(flavor_by_field),
        kirchoff=kirchoff,
        status=status,
    )


def _matrix_json(m: ExactMatrix | None):
    return None if m is None else m.to_nested_strings()


def _value_str(v) -> str:
    if isinstance(v, Scalar):
        return str(v)
    return repr(complex(v))


def _flavor_json(name: str, d: FlavorDiagnosis) -> dict:
    out = {
        "field": name,
        "is_flavor_antisymmetric": d.is_flavor_antisymmetric,
        "sector_signs": list(d.sector_signs),
        "negative_norm": d.negative_norm,
        "inverted_connection_attempt": d.inverted_connection_attempt,
        "note": d.note,
        "diagonalization": None,
        "witness": None,
    }
    if d.diagonalization is not None:
        dg = d.diagonalization
        norms = dg.column_norms_squared
        out["diagonalization"] = {
            "exact": dg.exact,
            "eigenvalues": [_value_str(v) for v in dg.eigenvalues],
            "diagonal": _matrix_json(dg.diagonal),
            "transformation": _matrix_json(dg.transformation),
            "column_norms_squared":
                None if norms is None else [str(n) for n in norms],
        }
    if d.witness is not None:
        out["witness"] = {
            "matrix": d.witness.matrix.to_nested_strings(),
            "signature": list(d.witness.signature),
        }
    return out


def report_to_dict(report: VerdictReport) -> dict:
    """JSON-ready dict with a fixed key order throughout."""
    spec = report.spec
    kin = report.build.kinematic
    lint = dict(report.kirchoff)

    fields = []
    for v in report.verdict.verdicts:
        kr = lint[v.field]
        fields.append({
            "name": v.field,
            "spin": v.spin,
            "required_k0_symmetry": v.required_k0_symmetry.name,
            "consistent_statistics": v.consistent_statistics,
            "michel_parity": v.michel_parity,
            "statistics_declared": v.statistics_declared,
            "contradiction": v.contradiction,
            "kirchoff": {"compliant": kr.compliant, "detail": kr.detail},
        })

    labels = kin.index_map if kin is not None else spec.index_map()
    kinematic = {
        "mode": spec.kinematic_mode,
        "build_status": report.build.status,
        "note": report.build.note,
        "index_map": list(labels),
        "matrix": _matrix_json(kin.matrix if kin is not None else None),
        "symmetry": None,
        "statistics": report.statistics,
        "invariant": None if report.invariance is None else report.invariance.ok,
        "invariance_violations": [
            {"axis": axis, "entries": [list(e) for e in entries]}
            for axis, entries in
            (report.invariance.violations if report.invariance else ())
        ],
        "surface_variation": None,
        "constraints": None,
    }
    if kin is not None:
        kinematic["symmetry"] = symmetry_decompose(kin.matrix)[2].name
    if report.surface is not None:
        kinematic["surface_variation"] = {
            "consistent": report.surface.consistent,
            "reason": report.surface.reason,
        }
    if report.split is not None:
        s = report.split
        kinematic["constraints"] = {
            "statistics": s.statistics,
            "canonical_indices": list(s.canonical_indices),
            "canonical_labels": [labels[i] for i in s.canonical_indices],
            "constraint_indices": list(s.constraint_indices),
            "constraint_labels": [labels[i] for i in s.constraint_indices],
            "nonsingular_block": _matrix_json(s.nonsingular_block),
        }

    flavor = None
    if report.flavor_by_field:
        name, diag = report.flavor_by_field[0]
        flavor = _flavor_json(name, diag)

    return {
        "theory": spec.name,
        "status": report.status,
        "fields": fields,
        "kinematic": kinematic,
        "flavor": flavor,
    }


def report_to_json(report: VerdictReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _field_lines(report: VerdictReport) -> list[str]:
    lines = []
    lint = dict(report.kirchoff)
    for v in report.verdict.verdicts:
        stat = v.consistent_statistics
        lines.append(
            f"field {v.field}: spin {v.spin}, K0 must be "
            f"{v.required_k0_symmetry.name.lower()}, statistics "
            f"{stat.capitalize() if stat else 'undetermined'}, "
            f"michel parity {v.michel_parity:+d}")
        if v.contradiction:
            lines.append(f"  contradiction: {v.contradiction}")
        kr = lint[v.field]
        verdict = "compliant" if kr.compliant else f"violation ({kr.detail})"
        lines.append(f"  kirchoff lint: {verdict}")
    return lines


def render_text(report: VerdictReport) -> str:
    """Human-readable report carrying the same verdict tokens as the JSON."""
    lines = [f"theory: {report.spec.name}"]
    lines.extend(_field_lines(report))

    if report.build.kinematic is None:
        lines.append(f"kinematic: none ({report.build.note})")
    else:
        m = report.build.kinematic.matrix
        cls = symmetry_decompose(m)[2]
        lines.append(
            f"kinematic: {m.rows}x{m.cols} {cls.name.lower()} matrix "
            f"({report.spec.kinematic_mode})")
    if report.invariance is not None:
        if report.invariance.ok:
            lines.append("rotation invariance: ok")
        else:
            axes = ", ".join(report.invariance.failing_axes)
            lines.append(f"rotation invariance: VIOLATED on axes {axes}")
    if report.surface is not None:
        word = "consistent" if report.surface.consistent else "inconsistent"
        lines.append(
            f"surface variation ({report.statistics}): {word}")
    if report.split is not None:
        labels = report.build.kinematic.index_map
        canon = ", ".join(labels[i] for i in report.split.canonical_indices)
        constr = ", ".join(labels[i] for i in report.split.constraint_indices)
        lines.append(f"canonical components: {canon or 'none'}")
        lines.append(f"constraint components: {constr or 'none'}")

    for name, d in report.flavor_by_field:
        signs = ", ".join(f"{s:+d}" if s else "0" for s in d.sector_signs)
        lines.append(f"flavor sectors of {name}: signs ({signs})")
        if d.negative_norm:
            assert d.witness is not None
            p, n, z = d.witness.signature
            lines.append(
                f"  negative-norm sector: one-quantum gram signature "
                f"({p}, {n}, {z})")
        if d.inverted_connection_attempt:
            lines.append(
                "  inverted spin-statistics connection attempt detected")
        if d.note:
            lines.append(f"  note: {d.note}")

    lines.append(f"status: {report.status}")
    return "\n".join(lines) + "\n"
