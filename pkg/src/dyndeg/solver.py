"""Certified enclosure of the dynamical degree and the associated series data.

The dynamical degree of the composed map is the unique positive solution of

    sum_{j>=1} d_j * lambda^{-j} = 1,

where d_j is the exact degree sequence of the monomial factor.  Solving happens
in the substituted variable t = 1/lambda on (0, 1/|zeta|), where the series is
strictly increasing; bisection with exact polynomial evaluation plus a certified
geometric tail bound gives an unconditional bracket at every step.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import AdmissibilityError, PrecisionError
from .gaussian import GaussianInt, _require_admissible, _support_argmax, ONE
from .intervals import ComplexInterval, Dyadic, RealInterval

DEFAULT_PRECISION_CAP = 1 << 16
_TERM_CAP = 1 << 20


def precision_cap() -> int:
    """Hard ceiling on working precision bits; DYNDEG_PRECISION_CAP overrides."""
    raw = os.environ.get("DYNDEG_PRECISION_CAP")
    if raw is None:
        return DEFAULT_PRECISION_CAP
    cap = int(raw)
    if cap < 16:
        raise ValueError("DYNDEG_PRECISION_CAP must be >= 16")
    return cap


@dataclass(frozen=True)
class LambdaEnclosure:
    """Certified bracket of the dynamical degree, with solver provenance."""

    zeta: GaussianInt
    interval: RealInterval
    n_terms: int
    precision_bits: int

    @property
    def lo(self) -> Dyadic:
        return self.interval.lo

    @property
    def hi(self) -> Dyadic:
        return self.interval.hi

    def width(self) -> Fraction:
        return self.interval.width().to_fraction()

    def to_json_obj(self, digits: int = 30):
        return {
            "zeta": str(self.zeta),
            "lambda_lo": self.lo.decimal_str(digits, "floor"),
            "lambda_hi": self.hi.decimal_str(digits, "ceil"),
            "width": _fraction_decimal(self.width(), digits),
            "N_used": str(self.n_terms),
            "precision_bits": str(self.precision_bits),
        }

    def to_json_text(self, digits: int = 30) -> str:
        return json.dumps(self.to_json_obj(digits), sort_keys=True)


def _fraction_decimal(fr: Fraction, digits: int) -> str:
    scaled = -((-fr.numerator * 10**digits) // fr.denominator)  # ceil, width is upper bound
    return f"{scaled // 10**digits}.{scaled % 10**digits:0{digits}d}"


def _as_width_fraction(target_width) -> Fraction:
    w = target_width.to_fraction() if isinstance(target_width, Dyadic) else Fraction(target_width)
    if w <= 0:
        raise ValueError("target width must be positive")
    return w


class _DegreeCache:
    """Exact d_j = psi(zeta^j), extended on demand."""

    def __init__(self, zeta: GaussianInt):
        self.zeta = zeta
        self.values = []
        self.gammas = []
        self._power = ONE

    def extend_to(self, n: int):
        while len(self.values) < n:
            self._power = self._power * self.zeta
            g, val, tie = _support_argmax(self._power)
            if tie:
                raise AdmissibilityError(f"argmax tie at {self.zeta}^{len(self.values)+1}")
            self.values.append(val)
            self.gammas.append(g)

    def d(self, j: int) -> int:
        self.extend_to(j)
        return self.values[j - 1]

    def gamma(self, j: int) -> GaussianInt:
        self.extend_to(j)
        return self.gammas[j - 1]


def _horner_directed(ds, t: Dyadic, prec: int, direction: str) -> Dyadic:
    """sum_{j=1}^{N} d_j t^j with per-multiplication directed rounding.

    floor gives a certified lower bound, ceil an upper bound (t > 0, d_j > 0).
    """
    acc = Dyadic.from_int(0)
    for d in reversed(ds):
        acc = ((acc + Dyadic.from_int(d)) * t).round(prec, direction)
    return acc


def _tail_upper(abs_hi: Dyadic, t: Dyadic, n_terms: int, prec: int):
    """Upper bound on sum_{j>N} d_j t^j via d_j <= sqrt(5)|zeta|^j; None if divergent."""
    x = (abs_hi * t).round(prec, "ceil")
    if x >= Dyadic.from_int(1):
        return None
    xp = x
    for _ in range(n_terms):  # x^(N+1), rounded up each step
        xp = (xp * x).round(prec, "ceil")
    sqrt5_hi = Dyadic.sqrt(Dyadic.from_int(5), prec, "ceil")
    return Dyadic.div(sqrt5_hi * xp, Dyadic.from_int(1) - x, prec, "ceil")


def solve_lambda(zeta: GaussianInt, target_width, *, start_terms: int = 32) -> LambdaEnclosure:
    """Certified interval of width <= target_width around the dynamical degree.

    The returned bracket [lo, hi] satisfies: the partial sum plus tail bound is
    certified < 1 at t = 1/hi and the partial sum alone is certified > 1 at
    t = 1/lo, so the unique root lies strictly inside.  Also certifies
    lo > |zeta|.
    """
    _require_admissible(zeta)
    width_goal = _as_width_fraction(target_width)
    cap = precision_cap()
    cache = _DegreeCache(zeta)

    # enough fractional bits to resolve the goal on the t side, plus headroom
    goal_bits = max(1, (width_goal.denominator // max(1, width_goal.numerator)).bit_length())
    prec = max(64, goal_bits + 48)
    while True:
        if prec > cap:
            raise PrecisionError(
                f"needed more than {cap} fractional bits (cap; see DYNDEG_PRECISION_CAP)"
            )
        result = _solve_at_precision(zeta, cache, width_goal, prec, start_terms)
        if result is not None:
            return result
        prec *= 2


def _solve_at_precision(zeta, cache, width_goal, prec, start_terms):
    norm = zeta.norm_sq()
    abs_hi = Dyadic.sqrt(Dyadic.from_int(norm), prec, "ceil")
    one = Dyadic.from_int(1)

    t_hi = Dyadic.div(one - Dyadic.make(1, -10), abs_hi, prec, "floor")
    t_lo = (t_hi * Dyadic.make(1, -10)).round(prec, "floor")

    n_terms = start_terms
    cache.extend_to(n_terms)

    def upper_value(t):
        tail = _tail_upper(abs_hi, t, n_terms, prec)
        if tail is None:
            return None
        return _horner_directed(cache.values[:n_terms], t, prec, "ceil") + tail

    def lower_value(t):
        return _horner_directed(cache.values[:n_terms], t, prec, "floor")

    # establish the initial bracket: strictly below 1 at t_lo, strictly above at t_hi
    guard = 0
    while True:
        up = upper_value(t_lo)
        if up is not None and up < one:
            break
        n_terms *= 2
        guard += 1
        if n_terms > _TERM_CAP or guard > 24:
            return None
        cache.extend_to(n_terms)
    while lower_value(t_hi) <= one:
        n_terms *= 2
        if n_terms > _TERM_CAP:
            return None
        cache.extend_to(n_terms)

    half = Dyadic.make(1, -1)
    while True:
        lam_width = 1 / t_lo.to_fraction() - 1 / t_hi.to_fraction()
        if lam_width <= width_goal / 2:
            break
        mid = (t_lo + t_hi) * half
        if lower_value(mid) > one:
            t_hi = mid
        else:
            up = upper_value(mid)
            if up is not None and up < one:
                t_lo = mid
            else:
                # tail too fat to decide at this midpoint: sharpen the series
                n_terms *= 2
                if n_terms > _TERM_CAP:
                    return None
                cache.extend_to(n_terms)

    out_prec = max(prec, _bits_of(width_goal) + 8)
    lam_lo = Dyadic.div(one, t_hi, out_prec, "floor")
    lam_hi = Dyadic.div(one, t_lo, out_prec, "ceil")
    interval = RealInterval(lam_lo, lam_hi)
    if interval.width().to_fraction() > width_goal:
        return None
    # post-condition lambda > |zeta|: exact integer comparison of squares
    if lam_lo.to_fraction() ** 2 <= norm:
        return None
    return LambdaEnclosure(zeta=zeta, interval=interval, n_terms=n_terms, precision_bits=prec)


def _bits_of(width_goal: Fraction) -> int:
    return max(1, (width_goal.denominator // max(1, width_goal.numerator)).bit_length())


def alpha_of(zeta: GaussianInt, lam, prec: int = None) -> ComplexInterval:
    """Box around zeta / lambda; certified strictly inside the unit disk."""
    interval = lam.interval if isinstance(lam, LambdaEnclosure) else lam
    if interval.lo.sign() <= 0:
        raise ValueError("lambda interval must be strictly positive")
    if prec is None:
        prec = max(64, -interval.width().exp + 16) if not interval.width().is_zero() else 64
    alpha = ComplexInterval(
        RealInterval.point(zeta.re).div(interval, prec),
        RealInterval.point(zeta.im).div(interval, prec),
    )
    if alpha.abs_sq().hi >= Dyadic.from_int(1):
        raise PrecisionError("cannot certify |alpha| < 1 at this width; tighten lambda")
    return alpha


def _choose_tail_terms(s_hi: Dyadic, tail_tol: Fraction, prec: int, constant_sq: int):
    """Smallest tried N with sqrt(constant_sq) * s^(N+1) / (1-s) <= tail_tol, plus the bound."""
    one = Dyadic.from_int(1)
    if s_hi >= one:
        raise PrecisionError("|alpha| upper bound reached 1; tighten lambda first")
    const_hi = Dyadic.sqrt(Dyadic.from_int(constant_sq), prec, "ceil")
    inv_gap = Dyadic.div(const_hi, one - s_hi, prec, "ceil")
    n = 8
    while n <= _TERM_CAP:
        sp = s_hi
        for _ in range(n):
            sp = (sp * s_hi).round(prec, "ceil")
        bound = inv_gap * sp
        if bound.to_fraction() <= tail_tol:
            return n, bound
        n *= 2
    raise PrecisionError("tail tolerance unreachable within the term cap")


def phi_eval(zeta: GaussianInt, alpha: ComplexInterval, tail_tol, prec: int = None) -> ComplexInterval:
    """Box around the power series sum gamma(j) alpha^j with certified tail.

    Partial sum in interval arithmetic plus a componentwise widening of
    sqrt(20) * s^(N+1) / (1 - s), s = sup |alpha|.
    """
    _require_admissible(zeta)
    tol = _as_width_fraction(tail_tol)
    if prec is None:
        prec = max(96, _bits_of(tol) + 32)
    s_hi = alpha.abs_sup(prec)
    n_terms, tail = _choose_tail_terms(s_hi, tol, prec, 20)
    cache = _DegreeCache(zeta)
    cache.extend_to(n_terms)
    total = ComplexInterval.point(0, 0)
    power = ComplexInterval.point(1, 0)
    for j in range(1, n_terms + 1):
        power = (power * alpha).squeeze(prec)
        total = total + power.mul_gaussian(cache.gamma(j))
    return total.widen(tail)
