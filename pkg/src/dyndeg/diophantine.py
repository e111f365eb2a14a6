"""Continued-fraction and equidistribution diagnostics of the rotation number.

The rotation number of an admissible parameter is theta = Arg(zeta)/(2*pi),
normalized into (0, 1).  Everything here is certified: theta is carried as a
nested interval, continued-fraction coefficients are accepted only when the
Gauss-map image determines an unambiguous floor, and the octant of j*theta
mod 1 is resolved by refining precision (an exact boundary hit would force a
real power of zeta, which admissibility excludes).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import AdmissibilityError, InconsistencyError, PrecisionError
from .gaussian import GaussianInt, _require_admissible
from .intervals import (
    ComplexInterval,
    Dyadic,
    RealInterval,
    _pi_brackets_bits,
    atan2_brackets,
)
from .solver import _DegreeCache, phi_eval, precision_cap

# sector of Arg(zeta^j), in eighths of a turn, -> maximizer of Re(gamma * zeta^j)
OCTANT_TO_GAMMA = {
    0: GaussianInt(1, -2),
    1: GaussianInt(1, -2),
    2: GaussianInt(0, -2),
    3: GaussianInt(-2, 0),
    4: GaussianInt(-2, 0),
    5: GaussianInt(0, 2),
    6: GaussianInt(1, 2),
    7: GaussianInt(1, 2),
}


@lru_cache(maxsize=256)
def _theta_fraction_brackets(re: int, im: int, prec: int):
    """Exact rational bracket of Arg(re+im*i)/(2*pi) mod 1, width ~2^-prec."""
    alo, ahi = atan2_brackets(im, re, prec + 8)
    plo, phi_hi = _pi_brackets_bits(prec + 8)
    tl, th = alo / (2 * phi_hi), ahi / (2 * plo)
    if alo > 0:
        pass
    elif ahi < 0:
        tl, th = alo / (2 * plo), ahi / (2 * phi_hi)
        tl, th = tl + 1, th + 1
    else:
        raise PrecisionError("argument bracket straddles zero; parameter near real axis")
    return tl, th


@dataclass(frozen=True)
class ThetaContext:
    """Certified enclosure of the rotation number at a stated precision."""

    zeta: GaussianInt
    precision_bits: int
    theta: RealInterval

    def refined(self, precision_bits: int) -> "ThetaContext":
        if precision_bits <= self.precision_bits:
            return self
        return theta_interval(self.zeta, precision_bits)


def theta_interval(zeta: GaussianInt, precision_bits: int = 128) -> ThetaContext:
    """Outward-rounded enclosure of Arg(zeta)/(2*pi) in (0,1)."""
    _require_admissible(zeta)
    if precision_bits < 8:
        raise ValueError("precision_bits must be >= 8")
    tl, th = _theta_fraction_brackets(zeta.re, zeta.im, precision_bits)
    box = RealInterval.from_fractions(tl, th, precision_bits)
    if not box.strictly_inside_unit():
        raise PrecisionError("rotation-number enclosure escaped (0,1); raise precision")
    return ThetaContext(zeta=zeta, precision_bits=precision_bits, theta=box)


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    """Certified continued-fraction data of the rotation number."""

    zeta: GaussianInt
    coefficients: tuple  # a_0 .. a_depth
    convergents: tuple  # (m_i, n_i), i = 0 .. depth
    precision_bits: int
    theta: RealInterval

    @property
    def depth(self) -> int:
        return len(self.coefficients) - 1

    def to_json_obj(self):
        return {
            "zeta": str(self.zeta),
            "coefficients": [str(a) for a in self.coefficients],
            "convergents": [[str(m), str(n)] for (m, n) in self.convergents],
            "precision_bits": str(self.precision_bits),
        }


def _expand_at_precision(zeta, depth, bits):
    """Coefficient list via the interval Gauss map, or None if ambiguous."""
    tl, th = _theta_fraction_brackets(zeta.re, zeta.im, bits)
    coeffs = []
    lo, hi = tl, th
    for _ in range(depth + 1):
        fl, fh = _floor_pair(lo, hi)
        if fl != fh:
            return None
        coeffs.append(fl)
        lo, hi = lo - fl, hi - fl
        if lo <= 0:  # cannot certify the fractional part is positive
            return None
        lo, hi = 1 / hi, 1 / lo
    return coeffs


def _floor_pair(lo: Fraction, hi: Fraction):
    import math

    return math.floor(lo), math.floor(hi)


def _convergents_from(coeffs):
    ms = [1, coeffs[0]]
    ns = [0, 1]
    for a in coeffs[1:]:
        ms.append(a * ms[-1] + ms[-2])
        ns.append(a * ns[-1] + ns[-2])
    return tuple(zip(ms[1:], ns[1:]))


def cf_expand(ctx: ThetaContext, depth: int) -> ContinuedFraction:
    """Continued-fraction coefficients a_0..a_depth with exact convergents.

    Precision is raised until every Gauss-map floor is unambiguous and the
    standard approximation inequality |n_i theta - m_i| < 1/n_i plus the
    over/under alternation are certified.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    cap = precision_cap()
    bits = max(ctx.precision_bits, 32)
    while True:
        if bits > cap:
            raise PrecisionError(f"continued fraction needs more than {cap} bits")
        coeffs = _expand_at_precision(ctx.zeta, depth, bits)
        if coeffs is not None:
            convs = _convergents_from(coeffs)
            refined = theta_interval(ctx.zeta, bits)
            if _certify_convergents(refined.theta, convs):
                return ContinuedFraction(
                    zeta=ctx.zeta,
                    coefficients=tuple(coeffs),
                    convergents=convs,
                    precision_bits=bits,
                    theta=refined.theta,
                )
        bits *= 2


def _certify_convergents(theta: RealInterval, convs) -> bool:
    """|n_i t - m_i| < 1/n_i and alternation of m_i - n_i t, in intervals."""
    prev_n = 0
    for i, (m, n) in enumerate(convs):
        if n < max(prev_n, 1):
            return False
        prev_n = max(prev_n, n)
        err = theta.scale_int(n) - RealInterval.point(m)  # n*t - m
        bound = Fraction(1, n)
        if not (abs(err.lo.to_fraction()) < bound and abs(err.hi.to_fraction()) < bound):
            return False
        if i % 2 == 0:  # even convergents approximate from below: n*t - m > 0
            if not err.strictly_positive():
                return False
        elif not err.strictly_negative():
            return False
    return True


# ---------------------------------------------------------------------------
# Octants and (ir)regularity
# ---------------------------------------------------------------------------


def octant_gamma(ctx: ThetaContext, j: int):
    """(octant k with j*theta mod 1 in (k/8,(k+1)/8), table gamma for it).

    Refines precision until the enclosure avoids every boundary; termination
    is guaranteed because a boundary hit would make zeta^(8j) real.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    _require_admissible(ctx.zeta)
    cap = precision_cap()
    bits = ctx.precision_bits
    while True:
        if bits > cap:
            raise PrecisionError(f"octant of {j}*theta undecided below {cap} bits")
        theta = ctx.theta if bits == ctx.precision_bits else theta_interval(ctx.zeta, bits).theta
        scaled = theta.scale_int(j)
        split = scaled.floor_split()
        if split is not None:
            _, frac = split
            eighth = frac.scale_int(8)
            lo8, hi8 = eighth.lo.to_fraction(), eighth.hi.to_fraction()
            k = int(lo8)  # floor; lo8 >= 0
            if lo8 > k and hi8 < k + 1:
                return k, OCTANT_TO_GAMMA[k]
        bits *= 2


@dataclass(frozen=True)
class IrregularityReport:
    """Indices j in (n, window_end] whose maximizer changed across the lag n."""

    n: int
    window_end: int
    irregular: tuple
    min_excess: int = None  # min j - n
    min_pair_gap: int = None  # min |j - j'| over distinct irregular pairs
    min_shifted_gap: int = None  # min |j - j' - n| where j != j' + n
    beta: dict = field(default_factory=dict)

    def to_json_obj(self):
        return {
            "n": str(self.n),
            "window_end": str(self.window_end),
            "irregular": [str(j) for j in self.irregular],
            "min_excess": None if self.min_excess is None else str(self.min_excess),
            "min_pair_gap": None if self.min_pair_gap is None else str(self.min_pair_gap),
            "min_shifted_gap": None
            if self.min_shifted_gap is None
            else str(self.min_shifted_gap),
            "beta": [
                [str(i), str(j), str(v.re), str(v.im)]
                for (i, j), v in sorted(self.beta.items())
            ],
        }

    def beta_csv_text(self):
        lines = ["n,i,j,beta_re,beta_im"]
        for (i, j), v in sorted(self.beta.items()):
            lines.append(f"{self.n},{i},{j},{v.re},{v.im}")
        return "\n".join(lines) + "\n"


def irregular_indices(ctx: ThetaContext, n: int, window_end: int) -> IrregularityReport:
    """Scan (n, window_end] for lag-n maximizer changes; exact integer route."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if window_end <= n:
        raise ValueError("window_end must exceed n")
    cache = _DegreeCache(ctx.zeta)
    cache.extend_to(window_end)
    irregular = [
        j for j in range(n + 1, window_end + 1) if cache.gamma(j) != cache.gamma(j - n)
    ]
    beta = {}
    for j in irregular:
        c = cache.gamma(j) - cache.gamma(j - n)
        beta[(j, 0)] = c
        beta[(0, j)] = c.conj()
        beta[(j, n)] = -c
        beta[(n, j)] = -c.conj()
    min_excess = min((j - n for j in irregular), default=None)
    min_pair_gap = min(
        (b - a for a, b in zip(irregular, irregular[1:])), default=None
    )
    min_shifted_gap = min(
        (
            abs(j - j2 - n)
            for j in irregular
            for j2 in irregular
            if j != j2 + n
        ),
        default=None,
    )
    return IrregularityReport(
        n=n,
        window_end=window_end,
        irregular=tuple(irregular),
        min_excess=min_excess,
        min_pair_gap=min_pair_gap,
        min_shifted_gap=min_shifted_gap,
        beta=beta,
    )


@dataclass(frozen=True)
class RegularWindowReport:
    n: int
    window_end: int
    passed: bool
    first_irregular: int = None
    # whether |n*theta - m| < 1/(16(C+1)n) was certified (None: undecided)
    hypothesis_certified: bool = None


def regular_window_check(ctx: ThetaContext, n: int, C) -> RegularWindowReport:
    """Scan (n, C*n] for the first irregular index.

    Also certifies (when possible) the approximation hypothesis under which
    such windows are provably all-regular for suitable n.
    """
    C = Fraction(C)
    if C < 1:
        raise ValueError("C must be >= 1")
    window_end = int(n * C)
    cache = _DegreeCache(ctx.zeta)
    cache.extend_to(max(window_end, n + 1))
    first = None
    for j in range(n + 1, window_end + 1):
        if cache.gamma(j) != cache.gamma(j - n):
            first = j
            break
    eps = Fraction(1, 16 * (C + 1))
    hyp = _certify_hypothesis(ctx, n, eps)
    return RegularWindowReport(
        n=n,
        window_end=window_end,
        passed=first is None,
        first_irregular=first,
        hypothesis_certified=hyp,
    )


def _certify_hypothesis(ctx: ThetaContext, n: int, eps: Fraction):
    bits = max(ctx.precision_bits, 2 * n.bit_length() + 32)
    theta = theta_interval(ctx.zeta, bits).theta
    scaled = theta.scale_int(n)
    m = round(scaled.mid().to_fraction())
    err = scaled - RealInterval.point(m)
    bound = eps / n
    hi = max(abs(err.lo.to_fraction()), abs(err.hi.to_fraction()))
    lo = 0 if err.contains_zero() else min(abs(err.lo.to_fraction()), abs(err.hi.to_fraction()))
    if hi < bound:
        return True
    if lo >= bound:
        return False
    return None


# ---------------------------------------------------------------------------
# Badly-approximable diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BadApproxReport:
    """Finite-depth statistics; draws no conclusion about limit behavior."""

    zeta: GaussianInt
    depth: int
    max_coefficient: int
    kappa: RealInterval  # min over i of n_i * |n_i theta - m_i|
    max_denominator_ratio: Fraction

    def to_json_obj(self, digits: int = 20):
        return {
            "zeta": str(self.zeta),
            "depth": str(self.depth),
            "max_coefficient": str(self.max_coefficient),
            "kappa_lo": self.kappa.lo.decimal_str(digits, "floor"),
            "kappa_hi": self.kappa.hi.decimal_str(digits, "ceil"),
            "max_denominator_ratio": str(self.max_denominator_ratio),
        }


def badly_approximable_diagnostics(cf: ContinuedFraction) -> BadApproxReport:
    """max coefficient, certified kappa statistic, max denominator ratio."""
    if cf.depth < 2:
        raise ValueError("need depth >= 2")
    max_coeff = max(cf.coefficients[1:])
    kappa_lo = None
    kappa_hi = None
    for (m, n) in cf.convergents:
        err = cf.theta.scale_int(n) - RealInterval.point(m)
        mag_lo = Dyadic.from_int(0) if err.contains_zero() else min(abs(err.lo), abs(err.hi))
        mag_hi = max(abs(err.lo), abs(err.hi))
        stat_lo = mag_lo * Dyadic.from_int(n)
        stat_hi = mag_hi * Dyadic.from_int(n)
        kappa_lo = stat_lo if kappa_lo is None else min(kappa_lo, stat_lo)
        kappa_hi = stat_hi if kappa_hi is None else min(kappa_hi, stat_hi)
    ratios = [
        Fraction(n2, n1)
        for (_, n1), (_, n2) in zip(cf.convergents, cf.convergents[1:])
        if n1 > 0
    ]
    return BadApproxReport(
        zeta=cf.zeta,
        depth=cf.depth,
        max_coefficient=max_coeff,
        kappa=RealInterval(kappa_lo, kappa_hi),
        max_denominator_ratio=max(ratios),
    )


# ---------------------------------------------------------------------------
# Periodic approximations of the maximizer series
# ---------------------------------------------------------------------------


def phi_n_eval(ctx: ThetaContext, n: int, alpha: ComplexInterval, prec: int = None) -> ComplexInterval:
    """Box around (1 - alpha^n)^(-1) * sum_{j<=n} gamma(j) alpha^j."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if prec is None:
        w = alpha.max_width()
        prec = max(96, (-w.exp if w.exp < 0 else 0) + 32)
    if alpha.abs_sq().hi >= Dyadic.from_int(1):
        raise PrecisionError("need sup|alpha| < 1")
    cache = _DegreeCache(ctx.zeta)
    cache.extend_to(n)
    total = ComplexInterval.point(0, 0)
    power = ComplexInterval.point(1, 0)
    for j in range(1, n + 1):
        power = (power * alpha).squeeze(prec)
        total = total + power.mul_gaussian(cache.gamma(j))
    denom = ComplexInterval.point(1, 0) - alpha.pow_int(n).squeeze(prec)
    return total.div(denom, prec)


def psi_n_eval(ctx: ThetaContext, n: int, alpha: ComplexInterval, tail_tol) -> RealInterval:
    """Scaled defect 2|1-alpha^n|^2 Re(Phi - Phi_n) at alpha, by two routes.

    Route (a) evaluates the definition from the full and periodic series
    boxes; route (b) sums the sparse bilinear expansion over irregular
    indices with a certified tail.  The routes must intersect; the
    intersection is returned.
    """
    tol = Fraction(tail_tol)
    if tol <= 0:
        raise ValueError("tail_tol must be positive")
    prec = max(96, _frac_bits(tol) + 48)

    phi_box = phi_eval(ctx.zeta, alpha, tol, prec=prec)
    phin_box = phi_n_eval(ctx, n, alpha, prec=prec)
    alpha_n = alpha.pow_int(n).squeeze(prec)
    weight = (ComplexInterval.point(1, 0) - alpha_n).abs_sq().scale_int(2)
    route_a = weight * (phi_box.re - phin_box.re)

    s_hi = alpha.abs_sup(prec)
    if s_hi >= Dyadic.from_int(1):
        raise PrecisionError("need sup|alpha| < 1")
    T, tail = _beta_truncation(s_hi, tol, prec)
    T = max(T, n + 1)
    report = irregular_indices(ctx, n, T)
    conj_n = alpha_n.conj()
    total = RealInterval.point(0)
    power = ComplexInterval.point(1, 0)
    powers = {}
    for j in range(1, T + 1):
        power = (power * alpha).squeeze(prec)
        powers[j] = power
    for j in report.irregular:
        c = report.beta[(j, 0)]
        term = powers[j].mul_gaussian(c)
        total = total + term.re.scale_int(2)  # beta_(j,0) and beta_(0,j) pair
        if j + n <= T:
            shifted = (powers[j] * conj_n).squeeze(prec)
            total = total - shifted.mul_gaussian(c).re.scale_int(2)
    route_b = total.widen(tail)

    meet = route_a.intersect(route_b)
    if meet is None:
        raise InconsistencyError(
            f"defect routes disjoint at n={n}: a={route_a!r}, b={route_b!r}"
        )
    return meet


def _frac_bits(fr: Fraction) -> int:
    return max(1, (fr.denominator // max(1, fr.numerator)).bit_length())


def _beta_truncation(s_hi: Dyadic, tol: Fraction, prec: int):
    """Smallest tried T with 4*sqrt(20)*s^(T+1)/(1-s) <= tol, plus that bound."""
    one = Dyadic.from_int(1)
    const = Dyadic.sqrt(Dyadic.from_int(320), prec, "ceil")  # 4*sqrt(20)
    inv_gap = Dyadic.div(const, one - s_hi, prec, "ceil")
    T = 8
    while T <= (1 << 20):
        sp = s_hi
        for _ in range(T):
            sp = (sp * s_hi).round(prec, "ceil")
        bound = inv_gap * sp
        if bound.to_fraction() <= tol:
            return T, bound
        T *= 2
    raise PrecisionError("bilinear tail tolerance unreachable")
