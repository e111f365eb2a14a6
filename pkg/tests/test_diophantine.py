from fractions import Fraction

import mpmath
import pytest

from dyndeg.errors import AdmissibilityError, InconsistencyError
from dyndeg.gaussian import GaussianInt, gamma_argmax
from dyndeg.diophantine import (
    OCTANT_TO_GAMMA,
    badly_approximable_diagnostics,
    cf_expand,
    irregular_indices,
    octant_gamma,
    phi_n_eval,
    psi_n_eval,
    regular_window_check,
    theta_interval,
)
from dyndeg.solver import alpha_of, phi_eval, solve_lambda

Z = GaussianInt
ZETA = Z(1, 2)


def mp_theta(zeta, dps=150):
    mpmath.mp.dps = dps
    t = mpmath.atan2(zeta.im, zeta.re) / (2 * mpmath.pi)
    if t < 0:
        t += 1
    return t


def mp_cf_coefficients(zeta, depth, dps=150):
    """Independent continued-fraction oracle at >= 256 bits of working precision."""
    x = mp_theta(zeta, dps)
    out = []
    for _ in range(depth + 1):
        a = int(mpmath.floor(x))
        out.append(a)
        x = 1 / (x - a)
    return tuple(out)


class TestThetaInterval:
    def test_reference_value(self):
        ctx = theta_interval(ZETA, 128)
        v = Fraction("0.17620819117478")
        assert ctx.theta.lo.to_fraction() <= v + Fraction(1, 10**14)
        assert ctx.theta.hi.to_fraction() >= v

    def test_against_mpmath(self):
        for zeta in (ZETA, Z(-3, 4), Z(2, 1), Z(3, 2), Z(1, -2), Z(-5, -3)):
            ctx = theta_interval(zeta, 160)
            truth = Fraction(mpmath.nstr(mp_theta(zeta), 40, strip_zeros=False))
            slack = Fraction(1, 10**35)
            assert ctx.theta.lo.to_fraction() - slack <= truth
            assert truth <= ctx.theta.hi.to_fraction() + slack

    def test_first_quadrant_bound(self):
        for zeta in (ZETA, Z(2, 1), Z(5, 3)):
            ctx = theta_interval(zeta, 96)
            assert ctx.theta.hi.to_fraction() < Fraction(1, 4)
            assert ctx.theta.lo.to_fraction() > 0

    def test_inadmissible_rejected(self):
        with pytest.raises(AdmissibilityError):
            theta_interval(Z(1, 1), 96)

    def test_nesting(self):
        coarse = theta_interval(ZETA, 96)
        fine = theta_interval(ZETA, 192)
        assert coarse.theta.contains_interval(fine.theta)
        assert fine.theta.width().to_fraction() < coarse.theta.width().to_fraction()

    def test_refined_is_nested(self):
        ctx = theta_interval(ZETA, 64)
        finer = ctx.refined(256)
        assert ctx.theta.contains_interval(finer.theta)


class TestContinuedFraction:
    def test_frozen_depth4(self):
        # digits confirmed by the independent oracle below before freezing
        cf = cf_expand(theta_interval(ZETA, 128), 4)
        assert cf.coefficients == (0, 5, 1, 2, 12)
        assert cf.convergents == ((0, 1), (1, 5), (1, 6), (3, 17), (37, 210))

    def test_depth0(self):
        cf = cf_expand(theta_interval(ZETA, 64), 0)
        assert cf.coefficients == (0,)

    @pytest.mark.parametrize("zeta", [ZETA, Z(-3, 4), Z(2, 1), Z(3, 2), Z(1, -2)])
    def test_against_independent_oracle(self, zeta):
        cf = cf_expand(theta_interval(zeta, 128), 20)
        assert cf.coefficients == mp_cf_coefficients(zeta, 20)

    def test_approximation_inequality_certified(self):
        cf = cf_expand(theta_interval(ZETA, 128), 20)
        theta = cf.theta
        for (m, n) in cf.convergents:
            err = theta.scale_int(n) - type(theta).point(m)
            hi = max(abs(err.lo.to_fraction()), abs(err.hi.to_fraction()))
            assert hi < Fraction(1, n)

    def test_convergents_coprime_increasing(self):
        from math import gcd

        cf = cf_expand(theta_interval(ZETA, 128), 20)
        prev = 0
        for (m, n) in cf.convergents:
            assert gcd(m, n) == 1
            assert n >= prev
            prev = n
        assert cf.convergents[-1][1] > cf.convergents[1][1]

    def test_denominator_recurrence(self):
        cf = cf_expand(theta_interval(ZETA, 128), 12)
        ns = [n for (_, n) in cf.convergents]
        ms = [m for (m, _) in cf.convergents]
        for i in range(2, len(ns)):
            a = cf.coefficients[i]
            assert ns[i] == a * ns[i - 1] + ns[i - 2]
            assert ms[i] == a * ms[i - 1] + ms[i - 2]

    def test_17_times_theta_inequality(self):
        # |17*theta - 3| < 1/17, certified
        ctx = theta_interval(ZETA, 128)
        err = ctx.theta.scale_int(17) - type(ctx.theta).point(3)
        hi = max(abs(err.lo.to_fraction()), abs(err.hi.to_fraction()))
        assert hi < Fraction(1, 17)

    def test_determinism(self):
        a = cf_expand(theta_interval(ZETA, 128), 10)
        b = cf_expand(theta_interval(ZETA, 128), 10)
        assert a.coefficients == b.coefficients
        assert a.theta == b.theta


class TestOctantGamma:
    def test_first_indices(self):
        ctx = theta_interval(ZETA, 128)
        assert octant_gamma(ctx, 1) == (1, Z(1, -2))
        assert octant_gamma(ctx, 2) == (2, Z(0, -2))
        assert octant_gamma(ctx, 3) == (4, Z(-2, 0))

    def test_lookup_table_is_complete(self):
        assert sorted(OCTANT_TO_GAMMA) == list(range(8))

    @pytest.mark.parametrize("zeta", [ZETA, Z(2, 1), Z(3, 2)])
    def test_matches_exact_argmax(self, zeta):
        ctx = theta_interval(zeta, 160)
        for j in range(1, 2001):
            assert octant_gamma(ctx, j)[1] == gamma_argmax(zeta, j)

    def test_fourth_quadrant_parameter(self):
        ctx = theta_interval(Z(1, -2), 128)
        for j in range(1, 200):
            assert octant_gamma(ctx, j)[1] == gamma_argmax(Z(1, -2), j)


class TestIrregularIndices:
    def test_regular_window_empty(self):
        # n = 1345 is a deep convergent denominator; window up to 2n is clean
        ctx = theta_interval(ZETA, 256)
        rep = irregular_indices(ctx, 1345, 2690)
        assert rep.irregular == ()
        assert rep.min_excess is None

    def test_frozen_n210(self):
        ctx = theta_interval(ZETA, 192)
        rep = irregular_indices(ctx, 210, 1050)
        assert rep.irregular[:4] == (271, 354, 437, 498)
        assert rep.min_excess == 61
        assert rep.min_pair_gap == 22
        assert rep.min_shifted_gap == 5
        assert len(rep.irregular) == 16

    def test_beta_sparsity_pattern(self):
        ctx = theta_interval(ZETA, 192)
        n = 210
        rep = irregular_indices(ctx, n, 1050)
        irregular = set(rep.irregular)
        for (i, j), v in rep.beta.items():
            small, big = min(i, j), max(i, j)
            assert small in (0, n)
            assert big in irregular
            assert rep.beta[(j, i)] == v.conj()
            assert not v.is_zero()

    def test_beta_values_are_gamma_differences(self):
        ctx = theta_interval(ZETA, 128)
        rep = irregular_indices(ctx, 50, 120)
        for j in rep.irregular:
            c = gamma_argmax(ZETA, j) - gamma_argmax(ZETA, j - 50)
            assert rep.beta[(j, 0)] == c
            assert rep.beta[(j, 50)] == -c

    def test_csv_shape(self):
        ctx = theta_interval(ZETA, 128)
        rep = irregular_indices(ctx, 50, 80)
        lines = rep.beta_csv_text().strip().splitlines()
        assert lines[0] == "n,i,j,beta_re,beta_im"
        assert len(lines) == 1 + len(rep.beta)


class TestRegularWindowCheck:
    def test_theorem_witness(self):
        # n = 1345: the approximation hypothesis holds for C = 1.5, so the
        # window must be all-regular
        ctx = theta_interval(ZETA, 256)
        rw = regular_window_check(ctx, 1345, Fraction(3, 2))
        assert rw.hypothesis_certified is True
        assert rw.passed and rw.first_irregular is None

    def test_frozen_n210(self):
        ctx = theta_interval(ZETA, 192)
        rw = regular_window_check(ctx, 210, 2)
        assert not rw.passed
        assert rw.first_irregular == 271
        assert rw.hypothesis_certified is False

    def test_aperiodicity_at_n1(self):
        ctx = theta_interval(ZETA, 128)
        rw = regular_window_check(ctx, 1, 10)
        assert not rw.passed
        assert rw.first_irregular == 2


class TestBadApproxDiagnostics:
    def test_depth20_statistics(self):
        ctx = theta_interval(ZETA, 160)
        cf = cf_expand(ctx, 20)
        diag = badly_approximable_diagnostics(cf)
        assert diag.max_coefficient == 43
        assert diag.kappa.lo.sign() > 0
        assert diag.kappa.hi.to_fraction() < 1
        assert diag.max_denominator_ratio <= diag.max_coefficient + 1

    def test_kappa_below_one_for_any_theta(self):
        for zeta in (ZETA, Z(3, 2), Z(-3, 4)):
            cf = cf_expand(theta_interval(zeta, 160), 15)
            diag = badly_approximable_diagnostics(cf)
            assert diag.kappa.hi.to_fraction() < 1

    def test_requires_depth(self):
        cf = cf_expand(theta_interval(ZETA, 128), 1)
        with pytest.raises(ValueError):
            badly_approximable_diagnostics(cf)


@pytest.fixture(scope="module")
def alpha50():
    enc = solve_lambda(ZETA, Fraction(1, 10**45))
    return alpha_of(ZETA, enc)


class TestPhiN:
    def test_inside_unit_interval_n50(self, alpha50):
        ctx = theta_interval(ZETA, 192)
        box = phi_n_eval(ctx, 50, alpha50)
        assert box.re.lo.sign() > 0
        assert box.re.hi.to_fraction() < 1

    def test_n1_geometric_series_identity(self, alpha50):
        # Phi_1(a) = gamma(1) a / (1 - a): compare against direct summation of
        # the periodic series gamma(1) * sum a^j with a tail bound
        ctx = theta_interval(ZETA, 128)
        box = phi_n_eval(ctx, 1, alpha50)
        g1 = gamma_argmax(ZETA, 1)
        s = alpha50.abs_sup(96).to_fraction()
        n_terms, partial = 60, None
        power = alpha50
        from dyndeg.intervals import ComplexInterval, Dyadic

        total = ComplexInterval.point(0, 0)
        for _ in range(n_terms):
            total = total + power.mul_gaussian(g1)
            power = (power * alpha50).squeeze(256)
        # |gamma| <= sqrt(5) < 3
        tail = Dyadic.from_fraction(3 * s**n_terms / (1 - s), 200, "ceil")
        direct = total.widen(tail)
        assert direct.re.intersect(box.re) is not None
        assert direct.im.intersect(box.im) is not None

    def test_defect_decreases_along_n(self):
        enc = solve_lambda(ZETA, Fraction(1, 10**130))
        alpha = alpha_of(ZETA, enc)
        ctx = theta_interval(ZETA, 192)
        defects = []
        for n in (50, 100, 200):
            box = phi_n_eval(ctx, n, alpha)
            defects.append(1 - box.re.hi.to_fraction())
        assert defects[0] > defects[1] > defects[2] > 0


class TestPsiN:
    def test_routes_intersect_and_inside_unit(self):
        enc = solve_lambda(ZETA, Fraction(1, 10**60))
        alpha = alpha_of(ZETA, enc)
        ctx = theta_interval(ZETA, 192)
        psi = psi_n_eval(ctx, 50, alpha, Fraction(1, 10**50))
        assert psi.lo.sign() > 0
        assert psi.hi.to_fraction() < 1

    def test_matches_scaled_defect(self):
        # Psi_n = 2|1-a^n|^2 (1 - Re Phi_n) when Re Phi = 1 exactly; compare
        # against the closed-form box within its width
        enc = solve_lambda(ZETA, Fraction(1, 10**60))
        alpha = alpha_of(ZETA, enc)
        ctx = theta_interval(ZETA, 192)
        n = 50
        psi = psi_n_eval(ctx, n, alpha, Fraction(1, 10**50))
        box = phi_n_eval(ctx, n, alpha)
        weight = (
            (type(alpha).point(1, 0) - alpha.pow_int(n)).abs_sq().scale_int(2)
        )
        one = type(box.re).point(1)
        implied = weight * (one - box.re)
        assert implied.intersect(psi) is not None

    def test_empty_window_small_value(self):
        # n = 1345: no irregular index until far beyond the truncation, so the
        # bilinear route is tail-only and the defect is tiny
        enc = solve_lambda(ZETA, Fraction(1, 10**60))
        alpha = alpha_of(ZETA, enc)
        ctx = theta_interval(ZETA, 256)
        psi = psi_n_eval(ctx, 1345, alpha, Fraction(1, 10**40))
        assert abs(psi.lo.to_fraction()) < Fraction(1, 10**38)
        assert abs(psi.hi.to_fraction()) < Fraction(1, 10**38)
