"""Flavor-antisymmetrized kinematic terms and their negative-norm states.

Antisymmetrizing the kinematic matrix over a 2-valued internal label makes
the full matrix block off-diagonal, [[0, M], [-M, 0]].  Diagonalizing that
flavor structure splits the theory into sectors whose kinematic terms carry
opposite signs, and the minus sector is a Hilbert space with negative-norm
states; this module detects the pattern, performs the diagonalization
exactly when the eigenvalue magnitudes are rational, and attaches the
concrete one-quantum negative-norm witness.  It also hosts the
absorption-emission balance lint on mode expansions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    DimensionError,
    ExactMatrix,
    Scalar,
    SymmetryClass,
    antisym_eigensplit,
    kernel,
    symmetry_decompose,
)
from .fock import GramResult, ModeExpansion, gram_matrix, parse_relation_table
from .su2 import as_two_j

__all__ = [
    "FlavorSplit",
    "detect_flavor_antisymmetry",
    "FlavorDiagonalization",
    "diagonalize_flavor",
    "FlavorDiagnosis",
    "sector_sign_analysis",
    "flavor_diagnosis",
    "KirchoffResult",
    "kirchoff_check",
]

_NUMERIC_TOL = 1e-9


@dataclass(frozen=True)
class FlavorSplit:
    """Outcome of testing a kinematic matrix for flavor antisymmetry."""

    is_flavor_antisymmetric: bool
    block: ExactMatrix | None = None
    note: str | None = None


def detect_flavor_antisymmetry(m: ExactMatrix) -> FlavorSplit:
    """Check for the [[0, M], [-M, 0]] pattern over two flavor halves.

    Returns the off-diagonal block M on success.  A matrix of odd dimension
    cannot carry a 2-valued flavor label, which is reported as a note rather
    than an error so callers can pass any kinematic matrix through.
    """
    if not m.is_square:
        raise DimensionError("flavor detection needs a square matrix")
    if m.rows % 2:
        return FlavorSplit(False, None, "odd dimension cannot split into two flavors")
    h = m.rows // 2
    top = range(h)
    bottom = range(h, m.rows)
    m11 = m.submatrix(top, top)
    m22 = m.submatrix(bottom, bottom)
    m12 = m.submatrix(top, bottom)
    m21 = m.submatrix(bottom, top)
    if m11.is_zero() and m22.is_zero() and m21 == -m12 and not m12.is_zero():
        return FlavorSplit(True, m12)
    return FlavorSplit(False)


@dataclass(frozen=True)
class FlavorDiagonalization:
    """Spectral data of an antisymmetric flavor matrix.

    On the exact path `transformation` holds unnormalized eigenvector
    columns with rational-complex entries and `column_norms_squared` their
    squared lengths, so unitarity reads V-dagger V = diag(norms) exactly.
    When an eigenvalue magnitude is irrational the numeric fields carry
    validated floating-point results instead and the matrix fields are None.
    """

    exact: bool
    eigenvalues: tuple
    diagonal: ExactMatrix | None
    transformation: ExactMatrix | None
    column_norms_squared: tuple | None
    numeric_eigenvalues: tuple | None = None
    numeric_columns: tuple | None = None


def _scalar_to_complex(s: Scalar) -> complex:
    return complex(float(s.re), float(s.im))


def _leading_one(column: list[Scalar]) -> list[Scalar]:
    for entry in column:
        if not entry.is_zero:
            return [x / entry for x in column]
    return column


def _project_out(candidate: list[Scalar], accepted: list[list[Scalar]]):
    v = list(candidate)
    for b in accepted:
        norm = Scalar(0)
        overlap = Scalar(0)
        for bi, vi in zip(b, v):
            norm = norm + bi.conjugate() * bi
            overlap = overlap + bi.conjugate() * vi
        factor = overlap / norm
        v = [vi - factor * bi for bi, vi in zip(b, v)]
    if all(x.is_zero for x in v):
        return None
    return v


def _exact_minus_vectors(lam: ExactMatrix, mu: Fraction, mult: int):
    """Independent eigenvectors for eigenvalue -i*mu, mu > 0, rational.

    Kernel vectors w of lam^2 + mu^2 project onto the -i*mu eigenspace via
    w + (i/mu) lam w; orthogonalizing the images keeps the first `mult`
    independent ones in kernel order.
    """
    n = lam.rows
    squared = lam @ lam + ExactMatrix.identity(n).scale(Scalar(mu * mu))
    factor = Scalar(0, Fraction(1, 1) / mu)
    accepted: list[list[Scalar]] = []
    for w in kernel(squared):
        image = lam @ ExactMatrix([[x] for x in w])
        candidate = [wi + factor * image[i, 0] for i, wi in enumerate(w)]
        fresh = _project_out(candidate, accepted)
        if fresh is not None:
            accepted.append(fresh)
        if len(accepted) == mult:
            break
    assert len(accepted) == mult, "eigenspace dimension mismatch"
    return [_leading_one(v) for v in accepted]


def _exact_diagonalization(lam: ExactMatrix, split) -> FlavorDiagonalization:
    minus_by_mu = {}
    zero_columns: list[list[Scalar]] = []
    for mu, mult in split:
        if mu == 0:
            zero_columns = [_leading_one(list(w)) for w in kernel(lam)]
            assert len(zero_columns) == mult
        else:
            minus_by_mu[mu] = _exact_minus_vectors(lam, mu, mult)

    eigenvalues: list[Scalar] = []
    columns: list[list[Scalar]] = []
    nonzero_ascending = [mu for mu, _ in split if mu != 0]
    for mu in reversed(nonzero_ascending):
        for v in minus_by_mu[mu]:
            eigenvalues.append(Scalar(0, -mu))
            columns.append(v)
    for v in zero_columns:
        eigenvalues.append(Scalar(0))
        columns.append(v)
    for mu in nonzero_ascending:
        for v in minus_by_mu[mu]:
            eigenvalues.append(Scalar(0, mu))
            columns.append([x.conjugate() for x in v])

    v_matrix = ExactMatrix.from_columns(columns)
    d_matrix = ExactMatrix.diagonal(eigenvalues)
    norms = []
    for col in columns:
        total = Scalar(0)
        for x in col:
            total = total + x.conjugate() * x
        assert total.is_real and not total.is_zero
        norms.append(total.re)

    assert lam @ v_matrix == v_matrix @ d_matrix
    gram = v_matrix.conjugate().transpose() @ v_matrix
    assert gram == ExactMatrix.diagonal(norms)
    assert sum(eigenvalues, Scalar(0)) == Scalar(0)

    return FlavorDiagonalization(
        exact=True,
        eigenvalues=tuple(eigenvalues),
        diagonal=d_matrix,
        transformation=v_matrix,
        column_norms_squared=tuple(norms),
    )


def _float_kernel(rows: list[list[float]]) -> list[list[float]]:
    m = [row[:] for row in rows]
    n = len(m)
    width = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(width):
        if r == n:
            break
        p = max(range(r, n), key=lambda i: abs(m[i][c]))
        if abs(m[p][c]) < _NUMERIC_TOL:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [0.0] * width
        v[fc] = 1.0
        for rr, pc in enumerate(pivots):
            v[pc] = -m[rr][fc]
        basis.append(v)
    return basis


def _numeric_diagonalization(lam: ExactMatrix, split) -> FlavorDiagonalization:
    n = lam.rows
    rows = [[float(lam[i, j].re) for j in range(n)] for i in range(n)]

    def matvec(v):
        return [sum(rows[i][j] * v[j] for j in range(n)) for i in range(n)]

    minus_by_mu: dict[float, list[list[complex]]] = {}
    zero_columns: list[list[complex]] = []
    for mu, mult in split:
        if mu == 0:
            zero_columns = [[complex(x) for x in w] for w in _float_kernel(rows)]
            assert len(zero_columns) == mult
            continue
        m = float(mu)
        squared = [
            [sum(rows[i][k] * rows[k][j] for k in range(n)) + (m * m if i == j else 0.0)
             for j in range(n)]
            for i in range(n)
        ]
        accepted: list[list[complex]] = []
        for w in _float_kernel(squared):
            image = matvec(w)
            cand = [w[i] + (1j / m) * image[i] for i in range(n)]
            for b in accepted:
                overlap = sum(x.conjugate() * y for x, y in zip(b, cand))
                cand = [y - overlap * x for x, y in zip(b, cand)]
            size = sum(abs(x) ** 2 for x in cand) ** 0.5
            if size > 1e-6:
                accepted.append([x / size for x in cand])
            if len(accepted) == mult:
                break
        assert len(accepted) == mult, "numeric eigenspace dimension mismatch"
        minus_by_mu[m] = accepted

    eigenvalues: list[complex] = []
    columns: list[list[complex]] = []
    nonzero = [float(mu) for mu, _ in split if mu != 0]
    for m in reversed(nonzero):
        for v in minus_by_mu[m]:
            eigenvalues.append(complex(0.0, -m))
            columns.append(v)
    for v in zero_columns:
        size = sum(abs(x) ** 2 for x in v) ** 0.5
        eigenvalues.append(0j)
        columns.append([x / size for x in v])
    for m in nonzero:
        for v in minus_by_mu[m]:
            eigenvalues.append(complex(0.0, m))
            columns.append([x.conjugate() for x in v])

    for value, col in zip(eigenvalues, columns):
        image = [sum(rows[i][j] * col[j] for j in range(n)) for i in range(n)]
        residual = max(abs(image[i] - value * col[i]) for i in range(n))
        assert residual < 1e-6, "numeric eigenpair residual too large"

    return FlavorDiagonalization(
        exact=False,
        eigenvalues=tuple(eigenvalues),
        diagonal=None,
        transformation=None,
        column_norms_squared=None,
        numeric_eigenvalues=tuple(eigenvalues),
        numeric_columns=tuple(tuple(col) for col in columns),
    )


def diagonalize_flavor(lam: ExactMatrix) -> FlavorDiagonalization:
    """Diagonalize a real antisymmetric matrix, eigenvalues ascending by
    imaginary part (so the 2x2 unit case gives diag(-i, i)).

    The eigenvalue pairing +-i*mu makes the diagonal traceless
    automatically.  Rational magnitudes take the exact path; irrational
    ones fall back to validated floating point.
    """
    if not lam.is_square:
        raise DimensionError("diagonalization needs a square matrix")
    if not (-lam.transpose() == lam) or not lam.is_real():
        raise ValueError("flavor diagonalization needs a real antisymmetric matrix")
    split = antisym_eigensplit(lam)
    if all(isinstance(mu, Fraction) for mu, _ in split):
        return _exact_diagonalization(lam, split)
    return _numeric_diagonalization(lam, split)


@dataclass(frozen=True)
class FlavorDiagnosis:
    """Full flavor verdict: sector signs, norm defect, and the witness."""

    is_flavor_antisymmetric: bool
    diagonalization: FlavorDiagonalization | None
    sector_signs: tuple[int, ...]
    negative_norm: bool
    inverted_connection_attempt: bool
    witness: GramResult | None
    note: str | None = None

    @property
    def transformation(self) -> ExactMatrix | None:
        return self.diagonalization.transformation if self.diagonalization else None

    @property
    def diagonal(self) -> ExactMatrix | None:
        return self.diagonalization.diagonal if self.diagonalization else None

    @property
    def column_norms_squared(self) -> tuple | None:
        if self.diagonalization is None:
            return None
        return self.diagonalization.column_norms_squared


def _sign_of(value) -> int:
    imag = value.im if isinstance(value, Scalar) else value.imag
    if imag < 0:
        return 1
    if imag > 0:
        return -1
    return 0


def _negative_norm_witness() -> GramResult:
    """One-quantum state of squared norm -1 in the minus sector.

    Either bracket kind exhibits the same Gram entry from a -1 pairing;
    the anticommutator presentation is used throughout.
    """
    table = parse_relation_table("bracket = anticommutator\npair c ddag = -1")
    witness = gram_matrix([("ddag",)], table)
    assert witness.signature == (0, 1, 0)
    return witness


def sector_sign_analysis(
    diagonalization: FlavorDiagonalization,
    block: ExactMatrix | None = None,
    spin=None,
) -> FlavorDiagnosis:
    """Signs of the diagonalized kinematic terms, one per sector.

    Eigenvalue -i*mu carries the +1 sector and +i*mu the -1 sector; a zero
    eigenvalue contributes no kinematic term and is reported as 0.  Any -1
    flags negative_norm and attaches a Fock-space witness.  The inverted
    connection attempt is the integral-spin theory whose flavor block is
    symmetric, the combination that would have made integral-spin fields
    anticommute.
    """
    signs = tuple(_sign_of(v) for v in diagonalization.eigenvalues)
    negative = -1 in signs
    inverted = False
    if spin is not None and block is not None:
        integral = as_two_j(spin) % 2 == 0
        inverted = integral and symmetry_decompose(block)[2] is SymmetryClass.SYMMETRIC
    witness = _negative_norm_witness() if negative else None
    return FlavorDiagnosis(
        is_flavor_antisymmetric=True,
        diagonalization=diagonalization,
        sector_signs=signs,
        negative_norm=negative,
        inverted_connection_attempt=inverted,
        witness=witness,
    )


def flavor_diagnosis(k0: ExactMatrix, spin=None) -> FlavorDiagnosis:
    """Run the whole flavor pipeline on a kinematic matrix.

    Matrices without the flavor-antisymmetric pattern keep the usual
    arguments intact: every sector sign is +1 by the normalization
    convention and there is nothing to diagonalize.
    """
    split = detect_flavor_antisymmetry(k0)
    if not split.is_flavor_antisymmetric:
        signs = (1, 1) if k0.rows % 2 == 0 else ()
        return FlavorDiagnosis(
            is_flavor_antisymmetric=False,
            diagonalization=None,
            sector_signs=signs,
            negative_norm=False,
            inverted_connection_attempt=False,
            witness=None,
            note=split.note,
        )
    if not (-k0.transpose() == k0) or not k0.is_real():
        return FlavorDiagnosis(
            is_flavor_antisymmetric=True,
            diagonalization=None,
            sector_signs=(),
            negative_norm=False,
            inverted_connection_attempt=False,
            witness=None,
            note="flavor block is not a real symmetric form; "
                 "sector diagonalization not attempted",
        )
    diagonalization = diagonalize_flavor(k0)
    return sector_sign_analysis(diagonalization, split.block, spin)


@dataclass(frozen=True)
class KirchoffResult:
    """Absorption-emission balance verdict for one field's mode expansion."""

    compliant: bool
    detail: str | None = None


def kirchoff_check(expansion: ModeExpansion) -> KirchoffResult:
    """A field must create and annihilate quanta in the same modes.

    Emission and absorption stay in balance only when each mode appears in
    both parts of the expansion, which is also what hermiticity of the
    field demands.  Mode labels are compared as sets, so the verdict does
    not depend on how the modes are named or ordered.
    """
    created = expansion.labels("creator")
    annihilated = expansion.labels("annihilator")
    if not expansion.terms:
        return KirchoffResult(False, f"field {expansion.field} has no mode terms")
    if not annihilated:
        return KirchoffResult(
            False, f"field {expansion.field} has a creation-only expansion")
    if not created:
        return KirchoffResult(
            False, f"field {expansion.field} has an annihilation-only expansion")
    if created != annihilated:
        lopsided = sorted(created.symmetric_difference(annihilated))
        return KirchoffResult(
            False,
            f"field {expansion.field} creates and annihilates different modes: "
            + ", ".join(lopsided),
        )
    return KirchoffResult(True)
