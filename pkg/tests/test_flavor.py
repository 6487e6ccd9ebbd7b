import random
from fractions import Fraction

import pytest

from spinstat.algebra import DimensionError, ExactMatrix, Scalar
from spinstat.flavor import (
    FlavorDiagnosis,
    KirchoffResult,
    detect_flavor_antisymmetry,
    diagonalize_flavor,
    flavor_diagnosis,
    kirchoff_check,
    sector_sign_analysis,
)
from spinstat.fock import ModeExpansion, ModeTerm

I = Scalar(0, 1)


def epsilon():
    return ExactMatrix([[0, 1], [-1, 0]])


def flavor_pair(block):
    """Assemble [[0, M], [-M, 0]] from the off-diagonal block."""
    return ExactMatrix.kron(epsilon(), block)


# -- detection -----------------------------------------------------------------


def test_detects_the_appendix_pattern():
    split = detect_flavor_antisymmetry(epsilon())
    assert split.is_flavor_antisymmetric
    assert split.block == ExactMatrix([[1]])


def test_detects_larger_blocks():
    k = ExactMatrix.diagonal([1, 3])
    split = detect_flavor_antisymmetry(flavor_pair(k))
    assert split.is_flavor_antisymmetric
    assert split.block == k


def test_rejects_symmetric_coupling():
    m = ExactMatrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert not detect_flavor_antisymmetry(m).is_flavor_antisymmetric


def test_rejects_flavor_diagonal():
    m = ExactMatrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    assert not detect_flavor_antisymmetry(m).is_flavor_antisymmetric


def test_rejects_nonzero_diagonal_blocks():
    m = ExactMatrix([[1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
    assert not detect_flavor_antisymmetry(m).is_flavor_antisymmetric


def test_rejects_zero_matrix():
    assert not detect_flavor_antisymmetry(ExactMatrix.zeros(4)).is_flavor_antisymmetric


def test_odd_dimension_is_noted_not_raised():
    split = detect_flavor_antisymmetry(ExactMatrix.zeros(3))
    assert not split.is_flavor_antisymmetric
    assert "odd dimension" in split.note


def test_pattern_match_is_structural_even_for_complex_entries():
    m = ExactMatrix([[0, I], [-I, 0]])
    split = detect_flavor_antisymmetry(m)
    assert split.is_flavor_antisymmetric
    assert split.block == ExactMatrix([[I]])


def test_detection_needs_square_input():
    with pytest.raises(DimensionError):
        detect_flavor_antisymmetry(ExactMatrix.zeros(2, 4))


# -- diagonalization, exact path -------------------------------------------------


def test_unit_case_reproduces_the_worked_example():
    result = diagonalize_flavor(epsilon())
    assert result.exact
    assert result.diagonal == ExactMatrix.diagonal([Scalar(0, -1), Scalar(0, 1)])
    assert result.transformation == ExactMatrix([[1, 1], [-I, I]])
    assert result.column_norms_squared == (Fraction(2), Fraction(2))
    assert result.eigenvalues == (Scalar(0, -1), Scalar(0, 1))


def test_scaled_case():
    result = diagonalize_flavor(ExactMatrix([[0, 2], [-2, 0]]))
    assert result.diagonal == ExactMatrix.diagonal([Scalar(0, -2), Scalar(0, 2)])


def test_fractional_case():
    half = Fraction(1, 2)
    result = diagonalize_flavor(ExactMatrix([[0, half], [-half, 0]]))
    assert result.eigenvalues == (Scalar(0, -half), Scalar(0, half))


def test_block_diagonal_case_matches_blockwise_oracle():
    full = diagonalize_flavor(flavor_pair(ExactMatrix.diagonal([1, 3])))
    blockwise = []
    for k in (1, 3):
        small = diagonalize_flavor(ExactMatrix([[0, k], [-k, 0]]))
        blockwise.extend(small.eigenvalues)
    assert sorted(v.im for v in full.eigenvalues) == sorted(v.im for v in blockwise)
    assert [v.im for v in full.eigenvalues] == [-3, -1, 1, 3]


def test_degenerate_eigenvalue_keeps_unitarity():
    lam = ExactMatrix.kron(epsilon(), ExactMatrix.identity(2))
    result = diagonalize_flavor(lam)
    assert result.exact
    assert [v.im for v in result.eigenvalues] == [-1, -1, 1, 1]
    v = result.transformation
    gram = v.conjugate().transpose() @ v
    assert gram == ExactMatrix.diagonal(result.column_norms_squared)
    assert lam @ v == v @ result.diagonal


def test_singular_matrix_reports_zero_sectors():
    lam = ExactMatrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    result = diagonalize_flavor(lam)
    assert [v.im for v in result.eigenvalues] == [-1, 0, 0, 1]
    assert result.diagonal[1, 1] == Scalar(0)


def test_random_known_spectra_round_trip():
    rng = random.Random(83)
    for _ in range(20):
        mus = sorted(
            Fraction(rng.randrange(1, 7), rng.randrange(1, 4)) for _ in range(rng.choice((1, 2)))
        )
        n = 2 * len(mus)
        entries = [[Fraction(0)] * n for _ in range(n)]
        for k, mu in enumerate(mus):
            entries[2 * k][2 * k + 1] = mu
            entries[2 * k + 1][2 * k] = -mu
        lam = ExactMatrix(entries)
        perm = list(range(lam.rows))
        rng.shuffle(perm)
        shuffled = ExactMatrix([[lam[perm[i], perm[j]] for j in range(lam.rows)]
                                for i in range(lam.rows)])
        result = diagonalize_flavor(shuffled)
        assert result.exact
        expected = sorted([-mu for mu in mus] + [mu for mu in mus])
        assert sorted(v.im for v in result.eigenvalues) == expected
        signs = [1 if v.im < 0 else -1 for v in result.eigenvalues]
        assert signs.count(1) == signs.count(-1)


def test_diagonalization_rejects_non_antisymmetric():
    with pytest.raises(ValueError, match="antisymmetric"):
        diagonalize_flavor(ExactMatrix([[0, 1], [1, 0]]))


def test_diagonalization_rejects_complex_entries():
    with pytest.raises(ValueError, match="real"):
        diagonalize_flavor(ExactMatrix([[0, I], [-I, 0]]))


def test_diagonalization_rejects_rectangles():
    with pytest.raises(DimensionError):
        diagonalize_flavor(ExactMatrix.zeros(2, 3))


# -- diagonalization, numeric fallback --------------------------------------------


def test_irrational_magnitudes_take_the_numeric_path():
    lam = ExactMatrix([
        [0, 1, 0, 0],
        [-1, 0, 2, 0],
        [0, -2, 0, 3],
        [0, 0, -3, 0],
    ])
    result = diagonalize_flavor(lam)
    assert not result.exact
    assert result.transformation is None
    imags = [v.imag for v in result.numeric_eigenvalues]
    assert imags == sorted(imags)
    assert len(imags) == 4
    assert abs(sum(imags)) < 1e-9
    for col in result.numeric_columns:
        assert abs(sum(abs(x) ** 2 for x in col) - 1.0) < 1e-9


# -- sector signs and the full diagnosis -------------------------------------------


def test_appendix_flow_finds_the_negative_sector():
    diagnosis = flavor_diagnosis(epsilon(), spin=0)
    assert diagnosis.is_flavor_antisymmetric
    assert diagnosis.sector_signs == (1, -1)
    assert diagnosis.negative_norm
    assert diagnosis.inverted_connection_attempt
    assert diagnosis.witness is not None
    assert diagnosis.witness.matrix == ExactMatrix([[-1]])
    assert diagnosis.witness.signature == (0, 1, 0)
    assert diagnosis.transformation == ExactMatrix([[1, 1], [-I, I]])
    assert diagnosis.diagonal == ExactMatrix.diagonal([Scalar(0, -1), Scalar(0, 1)])


def test_half_integral_spin_is_not_an_inversion_attempt():
    diagnosis = flavor_diagnosis(epsilon(), spin="1/2")
    assert diagnosis.negative_norm
    assert not diagnosis.inverted_connection_attempt


def test_spinless_call_leaves_inversion_flag_down():
    result = diagonalize_flavor(epsilon())
    diagnosis = sector_sign_analysis(result, ExactMatrix([[1]]))
    assert diagnosis.negative_norm
    assert not diagnosis.inverted_connection_attempt


def test_sign_balance_for_larger_blocks():
    diagnosis = flavor_diagnosis(flavor_pair(ExactMatrix.diagonal([1, 3])), spin=0)
    assert diagnosis.sector_signs == (1, 1, -1, -1)
    assert diagnosis.negative_norm
    assert diagnosis.inverted_connection_attempt


def test_zero_eigenvalues_carry_no_sign():
    lam = ExactMatrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    diagnosis = sector_sign_analysis(diagonalize_flavor(lam))
    assert diagnosis.sector_signs == (1, 0, 0, -1)
    assert diagnosis.negative_norm


def test_flavor_diagonal_theory_keeps_positive_signs():
    m = ExactMatrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    diagnosis = flavor_diagnosis(m, spin=0)
    assert not diagnosis.is_flavor_antisymmetric
    assert diagnosis.sector_signs == (1, 1)
    assert not diagnosis.negative_norm
    assert diagnosis.witness is None
    assert diagnosis.transformation is None


def test_complex_pattern_is_flagged_but_not_diagonalized():
    diagnosis = flavor_diagnosis(ExactMatrix([[0, I], [-I, 0]]), spin=0)
    assert diagnosis.is_flavor_antisymmetric
    assert diagnosis.sector_signs == ()
    assert not diagnosis.negative_norm
    assert "not attempted" in diagnosis.note


def test_odd_dimension_diagnosis_has_no_sectors():
    diagnosis = flavor_diagnosis(ExactMatrix.zeros(3))
    assert not diagnosis.is_flavor_antisymmetric
    assert diagnosis.sector_signs == ()
    assert "odd dimension" in diagnosis.note


# -- absorption-emission balance ------------------------------------------------------


def _term(symbol, kind, mode):
    return ModeTerm(symbol, kind, mode, Fraction(1))


def test_balanced_expansion_is_compliant():
    expansion = ModeExpansion("xi", (
        _term("a", "annihilator", "k1"),
        _term("adag", "creator", "k1"),
        _term("a2", "annihilator", "k2"),
        _term("a2dag", "creator", "k2"),
    ))
    assert kirchoff_check(expansion) == KirchoffResult(True)


def test_oscillator_coupling_is_compliant():
    expansion = ModeExpansion("q", (
        _term("a", "annihilator", "ground"),
        _term("adag", "creator", "ground"),
    ))
    assert kirchoff_check(expansion).compliant


def test_creation_only_field_is_a_violation():
    expansion = ModeExpansion("xi", (_term("adag", "creator", "k1"),))
    result = kirchoff_check(expansion)
    assert not result.compliant
    assert "xi" in result.detail
    assert "creation-only" in result.detail


def test_annihilation_only_field_is_a_violation():
    result = kirchoff_check(ModeExpansion("eta", (_term("a", "annihilator", "k1"),)))
    assert not result.compliant
    assert "annihilation-only" in result.detail


def test_mismatched_modes_are_a_violation():
    expansion = ModeExpansion("xi", (
        _term("a", "annihilator", "k1"),
        _term("adag", "creator", "k2"),
    ))
    result = kirchoff_check(expansion)
    assert not result.compliant
    assert "different modes" in result.detail
    assert "k1" in result.detail and "k2" in result.detail


def test_empty_expansion_is_a_violation():
    result = kirchoff_check(ModeExpansion("xi"))
    assert not result.compliant
    assert "no mode terms" in result.detail


def test_verdict_is_relabel_invariant():
    def build(first, second):
        return ModeExpansion("xi", (
            _term("a", "annihilator", first),
            _term("b", "annihilator", second),
            _term("adag", "creator", second),
            _term("bdag", "creator", first),
        ))

    assert kirchoff_check(build("k1", "k2")).compliant
    assert kirchoff_check(build("left", "right")).compliant
    assert kirchoff_check(build("k2", "k1")).compliant
