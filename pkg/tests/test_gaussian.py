import pytest
from hypothesis import given, strategies as st

from dyndeg.errors import AdmissibilityError, DegenerateMatrix
from dyndeg.gaussian import (
    GAMMA0,
    GaussianInt,
    IntMatrix2x2,
    d_sequence,
    gamma_argmax,
    gi_pow,
    is_admissible,
    monomial_degree,
    parse_gaussian,
    psi,
)

Z = GaussianInt
ZETA = Z(1, 2)

gaussians = st.builds(Z, st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
small_ints = st.integers(-5, 5)


class TestGiPow:
    def test_square_of_running_example(self):
        assert gi_pow(ZETA, 2) == Z(-3, 4)

    def test_zeroth_power_is_one(self):
        assert gi_pow(ZETA, 0) == Z(1, 0)

    def test_cube(self):
        # repeated exact multiplication: (1+2i)^3 = (-3+4i)(1+2i)
        assert gi_pow(ZETA, 3) == Z(-3, 4) * ZETA == Z(-11, -2)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            gi_pow(ZETA, -1)

    @given(gaussians, st.integers(0, 12), st.integers(0, 12))
    def test_exponent_addition(self, z, m, n):
        assert gi_pow(z, m) * gi_pow(z, n) == gi_pow(z, m + n)


class TestPsi:
    def test_zero(self):
        assert psi(Z(0, 0)) == 0

    def test_i(self):
        # enumerate GAMMA0 by hand: -2i and 1-2i both give 2
        assert psi(Z(0, 1)) == 2

    def test_running_example(self):
        # maximizer 1-2i: Re((1-2i)(1+2i)) = 5
        assert psi(ZETA) == 5

    @given(gaussians)
    def test_zero_iff_zero(self, z):
        assert (psi(z) == 0) == z.is_zero()

    @given(gaussians, st.integers(1, 50))
    def test_positive_scaling_homogeneity(self, z, m):
        assert psi(z * m) == m * psi(z)

    @given(gaussians)
    def test_norm_comparability(self, z):
        # |z| <= psi(z) <= sqrt(5)|z|, squared to stay in Z
        p = psi(z)
        assert z.norm_sq() <= p * p <= 5 * z.norm_sq()


class TestAdmissibility:
    def test_running_example_admissible(self):
        assert is_admissible(ZETA)

    @pytest.mark.parametrize(
        "z",
        [Z(1, 1), Z(3, 0), Z(0, 2), Z(-4, 4), Z(2, -2), Z(0, 0)],
    )
    def test_excluded_multiples(self, z):
        assert not is_admissible(z)

    @given(gaussians)
    def test_criterion_matches_direct_power_test(self, z):
        # zeta^n real for some 1 <= n <= 8 iff the finite membership test trips
        # (any real power forces one within the first eight, since the argument
        # is then a multiple of pi/4).
        power_real = False
        w = Z(1, 0)
        for _ in range(8):
            w = w * z
            if w.im == 0:
                power_real = True
                break
        assert is_admissible(z) == (not power_real)


class TestGammaArgmax:
    def test_first_indices(self):
        assert gamma_argmax(ZETA, 1) == Z(1, -2)
        assert gamma_argmax(ZETA, 2) == Z(0, -2)
        assert gamma_argmax(ZETA, 3) == Z(-2, 0)

    def test_values_live_in_gamma0(self):
        for j in range(1, 40):
            assert gamma_argmax(ZETA, j) in GAMMA0

    def test_inadmissible_rejected(self):
        with pytest.raises(AdmissibilityError):
            gamma_argmax(Z(1, 1), 1)

    def test_tie_detected_even_without_precheck(self):
        # 2i has a real square; the tie shows up at j = 2 regardless
        with pytest.raises(AdmissibilityError):
            gamma_argmax(Z(2, 2), 1)


class TestMonomialDegree:
    def test_identity(self):
        assert monomial_degree(IntMatrix2x2(1, 0, 0, 1)) == 1

    def test_matrix_of_i(self):
        assert monomial_degree(IntMatrix2x2.from_zeta(Z(0, 1))) == 2 == psi(Z(0, 1))

    def test_matrix_of_running_example(self):
        assert monomial_degree(IntMatrix2x2.from_zeta(ZETA)) == 5 == psi(ZETA)

    def test_degenerate(self):
        with pytest.raises(DegenerateMatrix):
            monomial_degree(IntMatrix2x2(1, 2, 2, 4))

    @given(gaussians)
    def test_agrees_with_psi(self, z):
        mat = IntMatrix2x2.from_zeta(z)
        if mat.det() == 0:
            return
        assert monomial_degree(mat) == psi(z)

    @given(small_ints, small_ints, small_ints, small_ints, st.integers(1, 4))
    def test_matrix_power_of_zeta_matrix(self, a, b, c, d, n):
        mat = IntMatrix2x2(a, b, c, d)
        if mat.det() == 0:
            return
        # power of a matrix of a Gaussian integer is the matrix of the power
        z = Z(a, c)
        if IntMatrix2x2.from_zeta(z) == mat:
            assert mat**n == IntMatrix2x2.from_zeta(gi_pow(z, n))


class TestDSequence:
    def test_running_example_first_five(self):
        seq = d_sequence(ZETA, 5)
        assert tuple(seq.values) == (5, 8, 22, 48, 117)

    def test_single_entry(self):
        assert d_sequence(ZETA, 1).values == (5,)

    def test_gamma_consistency(self):
        seq = d_sequence(ZETA, 30)
        for j in seq.indices():
            g = seq.gammas[j - 1]
            zj = gi_pow(ZETA, j)
            assert seq[j] == g.re * zj.re - g.im * zj.im
            assert g == gamma_argmax(ZETA, j)

    def test_matrix_power_cross_check(self):
        # independent route: d_j = monomial degree of the j-th matrix power
        seq = d_sequence(ZETA, 12)
        mat = IntMatrix2x2.from_zeta(ZETA)
        for j in seq.indices():
            assert seq[j] == monomial_degree(mat**j)

    def test_norm_growth_bounds(self):
        for zeta in (ZETA, Z(2, 1), Z(3, 2), Z(-3, 4)):
            seq = d_sequence(zeta, 25)
            nq = zeta.norm_sq()
            for j in seq.indices():
                dj = seq[j]
                assert nq**j <= dj * dj <= 5 * nq**j

    def test_submultiplicative(self):
        seq = d_sequence(ZETA, 24)
        for m in range(1, 12):
            for n in range(1, 12):
                assert seq[m + n] <= seq[m] * seq[n]

    def test_inadmissible_rejected(self):
        with pytest.raises(AdmissibilityError):
            d_sequence(Z(0, 3), 4)


class TestParse:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("1+2i", Z(1, 2)),
            ("-3+4i", Z(-3, 4)),
            ("1-2i", Z(1, -2)),
            (" 7 ", Z(7, 0)),
            ("-7", Z(-7, 0)),
            ("2i", Z(0, 2)),
            ("-2i", Z(0, -2)),
            ("i", Z(0, 1)),
            ("-i", Z(0, -1)),
            ("1 + 2 i", Z(1, 2)),
            ("1+1i", Z(1, 1)),
        ],
    )
    def test_accepts(self, text, expected):
        assert parse_gaussian(text) == expected

    @pytest.mark.parametrize("text", ["", "2+", "i+2", "2.5", "1+2j", "(1,2)", "2 3i"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_gaussian(text)

    def test_str_round_trip(self):
        for z in (Z(1, 2), Z(-3, 4), Z(0, -1), Z(5, 0), Z(-2, -7), Z(0, 3)):
            assert parse_gaussian(str(z)) == z
