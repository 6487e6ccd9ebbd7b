"""Surface-variation quantization and the spin-statistics verdict.

The action principle reads the generator of field transformations off the
surface term of the varied action.  Whether that generator actually moves
the fields depends on the transpose symmetry of K0: commuting variations
keep only its antisymmetric part, anticommuting ones only its symmetric
part.  Combining this with the symmetry class rotational invariance forces
on K0 yields, per field, the statistics the theory can support.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import ExactMatrix, Scalar, SymmetryClass, symmetry_decompose
from .invariance import ConstraintSplit, constraint_split, momentum_map, required_symmetry
from .model import FieldSpec, KinematicBuild, TheorySpec, build_kinematic
from .su2 import michel_parity, spin_label

__all__ = [
    "SurfaceVariation",
    "surface_variation_consistency",
    "CanonicalRelations",
    "canonical_momenta",
    "StatisticsVerdict",
    "TheoryVerdict",
    "statistics_for_class",
    "spin_statistics_verdict",
]

_I = Scalar(0, 1)

_SURVIVING_PART = {"bose": "antisymmetric", "fermi": "symmetric"}


@dataclass(frozen=True)
class SurfaceVariation:
    consistent: bool
    reason: str | None = None


def surface_variation_consistency(k0: ExactMatrix, statistics: str) -> SurfaceVariation:
    """Decide whether statistics can be implemented by the surface variation.

    The generator is G = sum_r Pi_r delta-xi_r with Pi = P xi.  When P
    vanishes, [xi, G] = 0: the variation generates nothing, so the given
    statistics is degenerate for this K0.  The reason string names the
    symmetry part whose absence killed the generator.
    """
    p = momentum_map(k0, statistics)
    if not p.is_zero():
        return SurfaceVariation(True)
    if k0.is_zero():
        detail = "K0 is zero"
    else:
        detail = f"K0 has no {_SURVIVING_PART[statistics]} part"
    return SurfaceVariation(False, f"generator commutes with all fields: {detail}")


@dataclass(frozen=True)
class CanonicalRelations:
    """Momenta and bracket tables produced by a consistent variation.

    momentum_map holds P with Pi = P @ xi.  On the canonical index set the
    bracket [xi_n, Pi_j] (commutator for bose, anticommutator for fermi) is
    i*delta; bracket_coefficients stores that matrix and field_bracket the
    induced [xi_a, xi_b] table.  Both are None when nothing is canonical.
    """

    statistics: str
    bracket: str
    momentum_map: ExactMatrix
    split: ConstraintSplit
    field_bracket: ExactMatrix | None
    bracket_coefficients: ExactMatrix | None


def canonical_momenta(k0: ExactMatrix, statistics: str) -> CanonicalRelations:
    """Canonical momenta Pi = P xi and the bracket tables they impose.

    The field bracket is normalized by the generator requirement
    [xi_n, G] = i delta-xi_n, which pins [xi_n, Pi_j] = i*delta on the
    canonical block; the overall scale of K0 therefore never enters.
    A zero K0 yields the empty relation set, but asking for statistics
    that a nonzero K0 cannot support is an error.
    """
    variation = surface_variation_consistency(k0, statistics)
    if not variation.consistent and not k0.is_zero():
        raise ValueError(variation.reason)
    split = constraint_split(k0, statistics)
    bracket = "commutator" if statistics == "bose" else "anticommutator"

    if split.canonical_indices:
        p_canon = split.momentum_restricted
        field_bracket = p_canon.transpose().inverse().scale(_I)
        coefficients = field_bracket @ p_canon.transpose()
        n = len(split.canonical_indices)
        assert coefficients == ExactMatrix.identity(n).scale(_I)
        expected = (SymmetryClass.ANTISYMMETRIC if statistics == "bose"
                    else SymmetryClass.SYMMETRIC)
        assert symmetry_decompose(field_bracket)[2] is expected
    else:
        field_bracket = None
        coefficients = None
    return CanonicalRelations(
        statistics=statistics,
        bracket=bracket,
        momentum_map=momentum_map(k0, statistics),
        split=split,
        field_bracket=field_bracket,
        bracket_coefficients=coefficients,
    )


@dataclass(frozen=True)
class StatisticsVerdict:
    field: str
    spin: str
    required_k0_symmetry: SymmetryClass
    consistent_statistics: str | None
    michel_parity: int
    statistics_declared: str
    contradiction: str | None


@dataclass(frozen=True)
class TheoryVerdict:
    status: str
    verdicts: tuple[StatisticsVerdict, ...]


def statistics_for_class(cls: SymmetryClass) -> str | None:
    """Statistics whose surface variation survives a K0 of this pure class."""
    if cls is SymmetryClass.ANTISYMMETRIC:
        return "bose"
    if cls is SymmetryClass.SYMMETRIC:
        return "fermi"
    return None


def _kind(f: FieldSpec) -> str:
    return "half-integral" if f.is_half_integer else "integral"


def _pinned_conflict(f: FieldSpec, required: SymmetryClass) -> str:
    declared_needs = (SymmetryClass.ANTISYMMETRIC if f.statistics == "bose"
                      else SymmetryClass.SYMMETRIC)
    return (f"required {required.name.lower()} K0 ({_kind(f)} spin) vs "
            f"{f.statistics.capitalize()} requiring "
            f"{declared_needs.name.lower()} K0")


def _field_verdict(f: FieldSpec, block: ExactMatrix | None) -> StatisticsVerdict:
    required = required_symmetry(f.spin)
    natural = statistics_for_class(required)
    consistent: str | None = None
    contradiction: str | None = None

    if block is not None:
        actual = symmetry_decompose(block)[2]
        if actual is required:
            consistent = natural
        elif actual is SymmetryClass.MIXED:
            contradiction = (
                f"kinematic block for {f.name} mixes symmetry classes: the "
                f"antisymmetric part supports Bose and the symmetric part "
                f"supports Fermi, and rotational invariance admits only the "
                f"{required.name.lower()} class for spin {f.spin_text}")
        elif actual is not SymmetryClass.ZERO:
            contradiction = (
                f"kinematic block for {f.name} is {actual.name.lower()}, "
                f"supporting {statistics_for_class(actual).capitalize()}, "
                f"but spin {f.spin_text} requires a {required.name.lower()} "
                f"block supporting {natural.capitalize()}")

    if (consistent is not None and f.statistics != "auto"
            and f.statistics != consistent):
        contradiction = _pinned_conflict(f, required)

    return StatisticsVerdict(
        field=f.name,
        spin=f.spin_text,
        required_k0_symmetry=required,
        consistent_statistics=consistent,
        michel_parity=michel_parity(f.spin),
        statistics_declared=f.statistics,
        contradiction=contradiction,
    )


def spin_statistics_verdict(spec: TheorySpec,
                            build: KinematicBuild | None = None) -> TheoryVerdict:
    """Per-field statistics verdicts and the aggregate status.

    Each field is judged on its own diagonal kinematic block: the block
    supports the statistics matching its transpose symmetry, rotational
    invariance fixes which symmetry the spin allows, and the two agree
    exactly when spin and statistics are paired the standard way.  A
    declared statistics that fights the derivation, or a block of the
    wrong class, raises the contradiction flag; a theory whose kinematic
    term cannot be built at all is reported as having none.
    """
    if build is None:
        build = build_kinematic(spec)

    verdicts = []
    for f, idx in spec.field_ranges():
        block = None
        if build.status == "built":
            block = build.kinematic.matrix.principal(idx)
        verdicts.append(_field_verdict(f, block))

    if any(v.contradiction for v in verdicts):
        status = "CONTRADICTION"
    elif build.status == "no_form":
        status = "NO_KINEMATIC_TERM"
    elif build.status == "built" and build.kinematic.matrix.is_zero():
        status = "NO_KINEMATIC_TERM"
    else:
        status = "CONSISTENT"
    return TheoryVerdict(status, tuple(verdicts))
