"""Symmetry requirements on the kinematic matrix and the constraint split.

The first-order Lagrangian couples fields through K0 both to their time
derivatives and, in momentum space, through the antisymmetrized combination
Lambda_rs = K0_rs (d_t acting left minus right).  Three facts are mechanized
here: which transpose symmetry a spin forces on K0, when the kinematic term
is identically zero (the wrong-parity case), and how K0 splits field
components into canonical pairs versus constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import DimensionError, ExactMatrix, Scalar, SymmetryClass, symmetry_decompose
from .su2 import as_two_j

__all__ = [
    "required_symmetry",
    "InvarianceReport",
    "check_su2_invariance",
    "LambdaOperator",
    "kinematic_term_is_trivial",
    "momentum_map",
    "ConstraintSplit",
    "constraint_split",
]


def required_symmetry(j) -> SymmetryClass:
    """Transpose symmetry class K0 must have for spin j.

    Integral spin carries a symmetric invariant scalar product, so a
    non-vanishing kinematic term needs the antisymmetric matrix, and the
    other way around for half-integral spin.
    """
    return (SymmetryClass.SYMMETRIC if as_two_j(j) % 2 == 1
            else SymmetryClass.ANTISYMMETRIC)


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of the exact rotation-invariance check, with the nonzero
    entries of G^T K0 + K0 G listed per failing axis."""

    ok: bool
    violations: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]

    @property
    def failing_axes(self) -> tuple[str, ...]:
        return tuple(axis for axis, _ in self.violations)


def check_su2_invariance(k0: ExactMatrix, gens) -> InvarianceReport:
    """Exact check of G^T K0 + K0 G = 0 for each rotation generator."""
    violations = []
    for axis, g in zip("xyz", gens):
        if g.shape != k0.shape:
            raise DimensionError(
                f"{axis} generator is {g.rows}x{g.cols} but the kinematic "
                f"matrix is {k0.rows}x{k0.cols}")
        residual = g.transpose() @ k0 + k0 @ g
        entries = tuple(
            (r, c)
            for r in range(residual.rows)
            for c in range(residual.cols)
            if not residual[r, c].is_zero
        )
        if entries:
            violations.append((axis, entries))
    return InvarianceReport(not violations, tuple(violations))


@dataclass(frozen=True)
class LambdaOperator:
    """The bilinear kernel K0_rs (d_t^(r) - d_t^(s)) of the kinematic term.

    Only the numeric part is stored.  Because the derivative factor is odd
    under swapping r and s, the operator's effective transpose symmetry is
    the opposite of K0's; this flip is why a symmetric K0 pairs with
    anticommuting fields and vice versa.
    """

    k0: ExactMatrix

    @property
    def symmetry_class(self) -> SymmetryClass:
        cls = symmetry_decompose(self.k0)[2]
        if cls is SymmetryClass.SYMMETRIC:
            return SymmetryClass.ANTISYMMETRIC
        if cls is SymmetryClass.ANTISYMMETRIC:
            return SymmetryClass.SYMMETRIC
        return cls


def kinematic_term_is_trivial(k0: ExactMatrix, statistics: str) -> bool:
    """Whether sum_rs K0_rs (xi_r xi-dot_s - xi-dot_r xi_s) vanishes identically.

    Expands the bilinear over placeholder symbols that commute (bose) or
    anticommute (fermi), canonical-orders every monomial and collects
    coefficients.  This is the machine form of the statement that K0 with
    the same symmetry as the field scalar product gives no Lagrangian:
    symmetric K0 with commuting fields dies, antisymmetric K0 with
    anticommuting fields dies.
    """
    if statistics not in ("bose", "fermi"):
        raise ValueError(f"statistics must be 'bose' or 'fermi', got {statistics!r}")
    fermi = statistics == "fermi"
    if not k0.is_square:
        raise ValueError("kinematic matrix must be square")

    coeffs: dict[tuple, Scalar] = {}

    def accumulate(sym_a, sym_b, coeff):
        if fermi and sym_a == sym_b:
            return  # anticommuting square vanishes
        if sym_a <= sym_b:
            key, sign = (sym_a, sym_b), 1
        else:
            key, sign = (sym_b, sym_a), -1 if fermi else 1
        total = coeffs.get(key, Scalar(0)) + coeff * sign
        if total.is_zero:
            coeffs.pop(key, None)
        else:
            coeffs[key] = total

    n = k0.rows
    for r in range(n):
        for s in range(n):
            krs = k0[r, s]
            if krs.is_zero:
                continue
            # symbol = (index, dotted)
            accumulate((r, 0), (s, 1), krs)
            accumulate((r, 1), (s, 0), -krs)
    return not coeffs


def momentum_map(k0: ExactMatrix, statistics: str) -> ExactMatrix:
    """Coefficient matrix of the canonical momenta: the part of K0 that
    survives the variation, antisymmetric for bose and symmetric for fermi."""
    if statistics == "bose":
        return (k0.transpose() - k0).scale(Scalar(Fraction(1, 2)))
    if statistics == "fermi":
        return (k0.transpose() + k0).scale(Scalar(Fraction(1, 2)))
    raise ValueError(f"statistics must be 'bose' or 'fermi', got {statistics!r}")


def _principal_pivot_indices(p: ExactMatrix) -> list[int]:
    """Leftmost index set S with P[S,S] invertible and |S| = rank(P).

    Works by exact Schur-complement pivoting.  P is symmetric or
    antisymmetric here, so whenever no diagonal pivot survives, the first
    nonzero off-diagonal entry gives an invertible 2x2 principal block
    (its determinant is -+ the entry squared), and Schur complements
    preserve the transpose symmetry, so the loop never stalls early.
    """
    n = p.rows
    work = [[p[i, j] for j in range(n)] for i in range(n)]
    active = list(range(n))
    selected: list[int] = []

    while active:
        pivot = None
        for i in active:
            if not work[i][i].is_zero:
                pivot = (i,)
                break
        if pivot is None:
            for ai, i in enumerate(active):
                for j in active[ai + 1:]:
                    if not work[i][j].is_zero:
                        pivot = (i, j)
                        break
                if pivot:
                    break
        if pivot is None:
            break

        selected.extend(pivot)
        rest = [r for r in active if r not in pivot]
        if len(pivot) == 1:
            (i,) = pivot
            inv = Scalar(1) / work[i][i]
            for r in rest:
                for c in rest:
                    work[r][c] = work[r][c] - work[r][i] * inv * work[i][c]
        else:
            i, j = pivot
            det = work[i][i] * work[j][j] - work[i][j] * work[j][i]
            for r in rest:
                ri, rj = work[r][i], work[r][j]
                for c in rest:
                    ic, jc = work[i][c], work[j][c]
                    adj = (ri * (work[j][j] * ic - work[i][j] * jc)
                           + rj * (work[i][i] * jc - work[j][i] * ic))
                    work[r][c] = work[r][c] - adj / det
        active = rest
    return sorted(selected)


@dataclass(frozen=True)
class ConstraintSplit:
    """Partition of field components into canonical pairs and constraints."""

    statistics: str
    canonical_indices: tuple[int, ...]
    constraint_indices: tuple[int, ...]
    nonsingular_block: ExactMatrix | None
    momentum_map: ExactMatrix
    momentum_restricted: ExactMatrix | None


def constraint_split(k0: ExactMatrix, statistics: str) -> ConstraintSplit:
    """Split component indices by whether they carry canonical dynamics.

    The momentum map P (see momentum_map) annihilates pure-constraint
    directions; the canonical indices are the leftmost principal set on
    which P is invertible.  The returned nonsingular_block is K0 itself
    restricted to those indices, which for a wave-operator matrix with
    three spatial-gradient constraints comes out as the familiar 2x2 core.
    """
    if not k0.is_square:
        raise ValueError("kinematic matrix must be square")
    p = momentum_map(k0, statistics)
    canonical = _principal_pivot_indices(p)
    constraint = [i for i in range(k0.rows) if i not in canonical]

    if canonical:
        restricted = p.principal(canonical)
        block = k0.principal(canonical)
        # dual check: the pivoting really found a full-rank principal block
        assert restricted.rank() == len(canonical) == p.rank()
    else:
        restricted = None
        block = None
        assert p.is_zero()
    return ConstraintSplit(
        statistics=statistics,
        canonical_indices=tuple(canonical),
        constraint_indices=tuple(constraint),
        nonsingular_block=block,
        momentum_map=p,
        momentum_restricted=restricted,
    )
