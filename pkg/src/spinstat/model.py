"""Theory specifications: a small line grammar plus kinematic-term building.

A theory file lists hermitian fields with a spin, optional flavor/copy
multiplicities and an optional pinned statistics, then chooses how the
first-order kinematic matrix K0 arises: built automatically from the unique
invariant bilinear, loaded verbatim from a matrix file, or arranged in the
flavor-antisymmetrized pairing [[0, F], [-F, 0]].

Index ordering is field -> flavor -> copy -> component throughout, and
half-integral spins are realified at parse time (a spin-1/2 field
contributes four hermitian components).
"""

from __future__ import annotations

import pathlib
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import ExactMatrix, Scalar, SymmetryClass
from .su2 import as_two_j, hermitian_basis, spin_label

__all__ = [
    "TheoryParseError",
    "FieldSpec",
    "TheorySpec",
    "KinematicMatrix",
    "KinematicBuild",
    "parse_theory",
    "serialize_theory",
    "theory_generators",
    "build_kinematic",
    "NOTE_NO_FORM",
    "NOTE_NOT_UNIQUE",
]

MAX_TWO_J = 8

NOTE_NO_FORM = "no valid kinematic form; field doubling required"
NOTE_NOT_UNIQUE = "kinematic form not unique; specify explicitly"

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class TheoryParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line = line_no


@dataclass(frozen=True)
class FieldSpec:
    name: str
    two_j: int
    flavors: int = 1
    copies: int = 1
    hermitian: bool = True
    statistics: str = "auto"  # auto | bose | fermi

    @property
    def spin(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def spin_text(self) -> str:
        return spin_label(self.two_j)

    @property
    def is_half_integer(self) -> bool:
        return self.two_j % 2 == 1

    @property
    def component_dimension(self) -> int:
        """Hermitian components per flavor per copy (doubled when realified)."""
        n = self.two_j + 1
        return 2 * n if self.is_half_integer else n

    @property
    def block_dimension(self) -> int:
        return self.flavors * self.copies * self.component_dimension


@dataclass(frozen=True)
class TheorySpec:
    name: str
    fields: tuple[FieldSpec, ...]
    kinematic_mode: str = "auto"  # auto | explicit
    explicit_path: str | None = None
    explicit_matrix: ExactMatrix | None = None
    flavor_mode: str = "diagonal"  # diagonal | antisymmetric-pair

    @property
    def dimension(self) -> int:
        return sum(f.block_dimension for f in self.fields)

    def field_ranges(self) -> list[tuple[FieldSpec, range]]:
        out, offset = [], 0
        for f in self.fields:
            out.append((f, range(offset, offset + f.block_dimension)))
            offset += f.block_dimension
        return out

    def index_map(self) -> tuple[str, ...]:
        labels = []
        for f in self.fields:
            for fl in range(f.flavors):
                for cp in range(f.copies):
                    for comp in range(f.component_dimension):
                        parts = [f.name]
                        if f.flavors > 1:
                            parts.append(f"f{fl}")
                        if f.copies > 1:
                            parts.append(f"c{cp}")
                        parts.append(str(comp))
                        labels.append(".".join(parts))
        return tuple(labels)


# -- parsing -----------------------------------------------------------------


def _parse_bool(raw: str, line_no: int, key: str) -> bool:
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise TheoryParseError(line_no, f"{key} must be true or false, got {raw!r}")


def _parse_field(rest: str, line_no: int) -> FieldSpec:
    tokens = rest.split()
    if not tokens:
        raise TheoryParseError(line_no, "field needs a name")
    name = tokens[0]
    if not _NAME_RE.match(name):
        raise TheoryParseError(line_no, f"bad field name {name!r}")
    attrs: dict[str, str] = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise TheoryParseError(line_no, f"expected key=value, got {tok!r}")
        key, _, value = tok.partition("=")
        if key in attrs:
            raise TheoryParseError(line_no, f"duplicate attribute {key!r}")
        attrs[key] = value
    if "spin" not in attrs:
        raise TheoryParseError(line_no, "field needs spin=<int or int/2>")

    try:
        two_j = as_two_j(attrs.pop("spin"))
    except (ValueError, TypeError) as exc:
        raise TheoryParseError(line_no, str(exc)) from exc
    if two_j > MAX_TWO_J:
        raise TheoryParseError(
            line_no, f"spin {spin_label(two_j)} exceeds the supported maximum "
            f"{spin_label(MAX_TWO_J)}")

    flavors = int(attrs.pop("flavors", "1"))
    copies = int(attrs.pop("copies", "1"))
    if flavors < 1 or copies < 1:
        raise TheoryParseError(line_no, "flavors and copies must be >= 1")
    hermitian = _parse_bool(attrs.pop("hermitian", "true"), line_no, "hermitian")
    if not hermitian:
        raise TheoryParseError(
            line_no,
            "non-hermitian fields are not supported: every field must carry "
            "both creation and annihilation parts (the mode-expansion "
            "completeness check relies on it); model a complex field as a "
            "doubled hermitian pair instead")
    statistics = attrs.pop("statistics", "auto")
    if statistics not in ("auto", "bose", "fermi"):
        raise TheoryParseError(
            line_no, f"statistics must be auto, bose or fermi, got {statistics!r}")
    if attrs:
        raise TheoryParseError(line_no, f"unknown field attribute {sorted(attrs)[0]!r}")
    return FieldSpec(name, two_j, flavors, copies, hermitian, statistics)


def parse_theory(text: str, base_dir: str | pathlib.Path = ".") -> TheorySpec:
    """Parse a theory description; explicit matrices load relative to base_dir."""
    base = pathlib.Path(base_dir)
    name = None
    fields: list[FieldSpec] = []
    kinematic_mode = "auto"
    explicit_path: str | None = None
    flavor_mode = "diagonal"
    seen_kinematic = seen_flavor = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()

        if directive == "theory":
            if name is not None:
                raise TheoryParseError(line_no, "duplicate theory line")
            if not _NAME_RE.match(rest):
                raise TheoryParseError(line_no, f"bad theory name {rest!r}")
            name = rest
        elif directive == "field":
            f = _parse_field(rest, line_no)
            if any(existing.name == f.name for existing in fields):
                raise TheoryParseError(line_no, f"duplicate field {f.name!r}")
            fields.append(f)
        elif directive == "kinematic":
            if seen_kinematic:
                raise TheoryParseError(line_no, "duplicate kinematic line")
            seen_kinematic = True
            if rest == "auto":
                kinematic_mode = "auto"
            elif rest.startswith("explicit"):
                kinematic_mode = "explicit"
                explicit_path = rest[len("explicit"):].strip()
                if not explicit_path:
                    raise TheoryParseError(line_no, "kinematic explicit needs a path")
            else:
                raise TheoryParseError(
                    line_no, f"kinematic must be auto or explicit <path>, got {rest!r}")
        elif directive == "flavor":
            if seen_flavor:
                raise TheoryParseError(line_no, "duplicate flavor line")
            seen_flavor = True
            if rest not in ("diagonal", "antisymmetric-pair"):
                raise TheoryParseError(
                    line_no, f"flavor must be diagonal or antisymmetric-pair, got {rest!r}")
            flavor_mode = rest
        else:
            raise TheoryParseError(line_no, f"unknown directive {directive!r}")

    if name is None:
        raise TheoryParseError(0, "missing theory line")
    if not fields:
        raise TheoryParseError(0, "theory has no fields")
    if flavor_mode == "antisymmetric-pair":
        if kinematic_mode == "explicit":
            raise TheoryParseError(
                0, "choose one way to fix the flavor structure: "
                   "antisymmetric-pair and an explicit matrix conflict")
        for f in fields:
            if f.flavors != 2:
                raise TheoryParseError(
                    0, f"antisymmetric-pair needs flavors=2 on every field "
                       f"({f.name} has {f.flavors})")

    spec = TheorySpec(name, tuple(fields), kinematic_mode, explicit_path,
                      None, flavor_mode)

    if kinematic_mode == "explicit":
        path = base / explicit_path
        try:
            matrix = ExactMatrix.loads(path.read_text())
        except OSError as exc:
            raise TheoryParseError(0, f"cannot read matrix file {explicit_path!r}: {exc}")
        except ValueError as exc:
            raise TheoryParseError(0, f"bad matrix file {explicit_path!r}: {exc}")
        if matrix.shape != (spec.dimension, spec.dimension):
            raise TheoryParseError(
                0, f"explicit matrix is {matrix.rows}x{matrix.cols} but the "
                   f"theory has {spec.dimension} components")
        spec = TheorySpec(name, tuple(fields), kinematic_mode, explicit_path,
                          matrix, flavor_mode)
    return spec


def serialize_theory(spec: TheorySpec) -> str:
    """Canonical text form; parse_theory(serialize_theory(s)) reproduces s."""
    lines = [f"theory {spec.name}"]
    for f in spec.fields:
        lines.append(
            f"field {f.name} spin={f.spin_text} flavors={f.flavors} "
            f"copies={f.copies} hermitian={'true' if f.hermitian else 'false'} "
            f"statistics={f.statistics}")
    if spec.kinematic_mode == "explicit":
        lines.append(f"kinematic explicit {spec.explicit_path}")
    else:
        lines.append("kinematic auto")
    lines.append(f"flavor {spec.flavor_mode}")
    return "\n".join(lines) + "\n"


# -- generators and kinematic construction -----------------------------------


def theory_generators(spec: TheorySpec) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """Rotation generators on the full component space of the theory.

    Rotations act on components only, so each field contributes the identity
    on its flavor and copy axes tensored with its hermitian-basis generators.
    """
    per_axis = []
    for f in spec.fields:
        h = hermitian_basis(f.spin)
        outer = ExactMatrix.identity(f.flavors * f.copies)
        per_axis.append(tuple(ExactMatrix.kron(outer, g) for g in h.generators))
    out = []
    for axis in range(3):
        out.append(_blockdiag([blocks[axis] for blocks in per_axis]))
    return tuple(out)


def _blockdiag(mats: list[ExactMatrix]) -> ExactMatrix:
    total = sum(m.rows for m in mats)
    grid = []
    offset = 0
    for m in mats:
        row = []
        if offset:
            row.append(ExactMatrix.zeros(m.rows, offset))
        row.append(m)
        trailing = total - offset - m.cols
        if trailing:
            row.append(ExactMatrix.zeros(m.rows, trailing))
        grid.append(row)
        offset += m.rows
    return ExactMatrix.block(grid)


@dataclass(frozen=True)
class KinematicMatrix:
    matrix: ExactMatrix
    index_map: tuple[str, ...]

    @property
    def dimension(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class KinematicBuild:
    """Outcome of build_kinematic: a matrix, or the reason there is none."""

    status: str  # built | no_form | not_unique
    kinematic: KinematicMatrix | None = None
    note: str | None = None
    details: tuple[str, ...] = dc_field(default=())


def _form_space_dims(f: FieldSpec) -> tuple[int, int]:
    """(symmetric, antisymmetric) invariant-form dimensions on one
    flavor-block of the field, i.e. on copies x components.

    Counting argument: for an irreducible integral spin the bilinear
    invariants of V (x) V form a one-dimensional symmetric space, so with c
    copies the split is (c(c+1)/2, c(c-1)/2).  The realified half-integral
    space carries one symmetric invariant (the positive metric) and three
    antisymmetric ones, giving c(c+1)/2 + 3c(c-1)/2 symmetric and
    c(c-1)/2 + 3c(c+1)/2 antisymmetric combinations.  The generic nullspace
    solver (su2.invariant_form_space) confirms these numbers on small cases
    in the tests; it is not run here to keep building fast.
    """
    c = f.copies
    sym_pairs = c * (c + 1) // 2
    anti_pairs = c * (c - 1) // 2
    if not f.is_half_integer:
        return sym_pairs, anti_pairs
    return sym_pairs + 3 * anti_pairs, anti_pairs + 3 * sym_pairs


def _required_class(f: FieldSpec) -> SymmetryClass:
    return SymmetryClass.SYMMETRIC if f.is_half_integer else SymmetryClass.ANTISYMMETRIC


def _normalize_block(block: ExactMatrix, cls: SymmetryClass) -> ExactMatrix:
    """Fix the scale convention: first nonzero upper-triangle entry becomes
    +i for antisymmetric blocks and +1 for symmetric ones."""
    lead = None
    for i in range(block.rows):
        for j in range(i, block.cols):
            if not block[i, j].is_zero:
                lead = block[i, j]
                break
        if lead is not None:
            break
    if lead is None:
        return block
    target = Scalar(0, 1) if cls is SymmetryClass.ANTISYMMETRIC else Scalar(1)
    return block.scale(target / lead)


def _epsilon() -> ExactMatrix:
    return ExactMatrix([[0, 1], [-1, 0]])


def build_kinematic(spec: TheorySpec) -> KinematicBuild:
    """Construct K0 for the theory, or report why that is impossible.

    Auto mode picks, per field and flavor, the unique rotation-invariant
    bilinear of the symmetry class the spin demands (antisymmetric for
    integral spin, symmetric for half-integral).  A single-copy integral
    field has no antisymmetric invariant at all, hence "no form": pairing
    two copies is the standard fix.  The antisymmetric-pair mode instead
    couples the two flavors through [[0, F], [-F, 0]] where F is the
    invariant of the opposite class, which is exactly the structure whose
    quantization is later rejected.
    """
    index_map = spec.index_map()

    if spec.kinematic_mode == "explicit":
        assert spec.explicit_matrix is not None
        return KinematicBuild("built", KinematicMatrix(spec.explicit_matrix, index_map))

    blocks: list[ExactMatrix] = []
    if spec.flavor_mode == "antisymmetric-pair":
        for f in spec.fields:
            sym_dim, antisym_dim = _form_space_dims(f)
            pair_dim = sym_dim if not f.is_half_integer else antisym_dim
            if pair_dim == 0:
                return KinematicBuild("no_form", note=NOTE_NO_FORM,
                                      details=(f.name,))
            if pair_dim > 1:
                return KinematicBuild("not_unique", note=NOTE_NOT_UNIQUE,
                                      details=(f.name,))
            w = hermitian_basis(f.spin).form
            pair_block = _normalize_block(
                ExactMatrix.kron(ExactMatrix.identity(f.copies), w),
                SymmetryClass.SYMMETRIC)
            blocks.append(ExactMatrix.kron(_epsilon(), pair_block))
        matrix = _blockdiag(blocks)
        return KinematicBuild("built", KinematicMatrix(matrix, index_map))

    for f in spec.fields:
        sym_dim, antisym_dim = _form_space_dims(f)
        required = _required_class(f)
        dim = antisym_dim if required is SymmetryClass.ANTISYMMETRIC else sym_dim
        if dim == 0:
            return KinematicBuild("no_form", note=NOTE_NO_FORM, details=(f.name,))
        if dim > 1:
            return KinematicBuild("not_unique", note=NOTE_NOT_UNIQUE, details=(f.name,))
        w = hermitian_basis(f.spin).form
        if required is SymmetryClass.ANTISYMMETRIC:
            # unique only for copies = 2: the symplectic pairing of the copies
            block = ExactMatrix.kron(_epsilon(), w)
        else:
            block = w  # copies = 1
        block = _normalize_block(block, required)
        for _ in range(f.flavors):
            blocks.append(block)
    matrix = _blockdiag(blocks)
    return KinematicBuild("built", KinematicMatrix(matrix, index_map))
