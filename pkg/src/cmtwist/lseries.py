"""Central L-values of quadratic twists, algebraic parts, Euler factors.

L(E^(D), 1) is evaluated through the exponentially convergent series
2 * sum_{n>=1} (a'_n/n) exp(-2 pi n / (sqrt(N) |D|)); the cutoff is chosen
so the rigorous tail bound (|a_n| <= 2n) is below the digit target.  The
algebraic part L * sqrt(|D|) / Omega is recognized as a small-denominator
rational by continued fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import mpmath as mp

from .coeffs import MAX_TABLE, CoeffError, build_table, kronecker
from .qfield import (PrimeIdeal, QuadInt, as_quadint, from_int,
                     min_ord2_roots, ord2_fraction, qr_symbol)
from .registry import Curve, omega_lattice

FLOAT_DIGIT_LIMIT = 13  # beyond this the series runs under mpmath


class LSeriesError(ValueError):
    pass


def twist_root_number(curve: Curve, d: int) -> int:
    """Root number of E^(d): chi_d(-N(E)) * w_E."""
    if d == 0:
        d = 1
    sign_part = 1 if d > 0 else -1  # (d / -1)
    return sign_part * kronecker(d, curve.conductor) * curve.w


def series_cutoff(curve: Curve, d: int, target_digits: int) -> int:
    """Terms needed so that 2*sum_{n>n0} (2n/n) x^n < 10^-target_digits."""
    c = math.sqrt(curve.conductor) * max(abs(d), 1)
    r = 2 * math.pi / c
    one_minus_x = -math.expm1(-r)
    n0 = (target_digits * math.log(10) + math.log(4.0) - math.log(one_minus_x)) / r
    return max(8, math.ceil(n0))


@dataclass(frozen=True)
class LValueResult:
    label: str
    twist_disc: int
    root_number: int
    analytic_value: object  # float or mpf, |L(E^(D), 1)|
    n_terms: int
    tail_bound: float
    lalg: Fraction | None
    lalg_residual: float
    ord2: int | None


def central_value(curve: Curve, d: int, target_digits: int = 10,
                  chi: Callable[[QuadInt], int] | None = None,
                  ap_map: Mapping[int, int] | None = None):
    """L(E^(d), 1) and the term count, as (value, n_terms, tail_bound).

    Exact 0 without summation when the twist root number is -1.
    """
    if twist_root_number(curve, d) == -1:
        return (0.0 if target_digits <= FLOAT_DIGIT_LIMIT else mp.mpf(0)), 0, 0.0
    n_max = series_cutoff(curve, d, target_digits)
    if n_max > MAX_TABLE:
        raise LSeriesError(
            f"precision unattainable at this scale: {n_max} terms needed")
    table = build_table(curve, d, n_max, chi=chi, ap_map=ap_map)
    c = math.sqrt(curve.conductor) * max(abs(d), 1)
    if target_digits <= FLOAT_DIGIT_LIMIT:
        x = math.exp(-2 * math.pi / c)
        total = 0.0
        comp = 0.0  # Kahan compensation
        xn = 1.0
        a = table.a
        for n in range(1, n_max + 1):
            xn *= x
            if not a[n]:
                continue
            term = (a[n] / n) * xn
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
        value = 2.0 * total
        tail = 4.0 * xn * x / (1.0 - x)
    else:
        with mp.workdps(target_digits + 10):
            x = mp.exp(-2 * mp.pi / (mp.sqrt(curve.conductor) * abs(d if d else 1)))
            total = mp.mpf(0)
            xn = mp.mpf(1)
            a = table.a
            for n in range(1, n_max + 1):
                xn *= x
                if not a[n]:
                    continue
                total += mp.mpf(a[n]) / n * xn
            value = +(2 * total)
            tail = float(4 * xn * x / (1 - x))
    assert tail < 10.0 ** (-target_digits)
    return value, n_max, tail


def recognize_rational(x, max_den: int = 64) -> tuple[Fraction, float]:
    """Nearest rational with denominator <= max_den, plus the residual."""
    fr = Fraction(float(x)).limit_denominator(max_den)
    return fr, abs(float(x) - float(fr))


def algebraic_part(curve: Curve, d: int, target_digits: int = 10,
                   chi: Callable[[QuadInt], int] | None = None,
                   ap_map: Mapping[int, int] | None = None,
                   max_den: int = 64) -> LValueResult:
    """|L(E^(d),1)| * sqrt(|d|) / Omega_L recognized as an exact rational.

    Omega_L is the period-lattice scale (omega_lattice), the normalization
    under which the algebraic part is a 2-integral-denominator rational.
    When the residual exceeds 1e-6 * max(1, |candidate|) no rational is
    claimed (lalg = None) and the raw ratio stays available through
    analytic_value and lalg_residual.
    """
    eps = twist_root_number(curve, d)
    value, n_terms, tail = central_value(curve, d, target_digits, chi=chi,
                                         ap_map=ap_map)
    if eps == -1:
        return LValueResult(curve.label, d, eps, value, n_terms, tail,
                            Fraction(0), 0.0, None)
    with mp.workdps(max(target_digits, 15) + 10):
        omega = omega_lattice(curve, max(target_digits, 15))
        ratio = abs(mp.mpf(value)) * mp.sqrt(abs(d) if d else 1) / omega
        fr, residual = recognize_rational(ratio, max_den)
    if residual >= 1e-6 * max(1.0, abs(float(fr))):
        return LValueResult(curve.label, d, eps, value, n_terms, tail,
                            None, residual, None)
    ord2 = ord2_fraction(fr) if fr != 0 else None
    return LValueResult(curve.label, d, eps, value, n_terms, tail,
                        fr, residual, ord2)


# ---- exact Euler factors over K -------------------------------------------

@dataclass(frozen=True)
class StripFactor:
    prime: PrimeIdeal
    num: QuadInt  # factor = num / den with den = N(prime)
    den: int
    ord2: Fraction  # 2-adic valuation of the factor, minimum over places


@dataclass(frozen=True)
class EulerStrip:
    num: QuadInt
    den: int
    factors: tuple[StripFactor, ...]


def _element_ord2(num: QuadInt, den: int) -> Fraction:
    """min over places above 2 of ord_2(num/den), via the Newton polygon
    of the characteristic polynomial x^2 - tr(z) x + N(z)."""
    tr = Fraction(num.trace(), den)
    nm = Fraction(num.norm(), den * den)
    if nm == 0:
        raise LSeriesError("ord2 of zero")
    return min_ord2_roots([nm, -tr, Fraction(1)])


def psi_bar_at(curve: Curve, prime: PrimeIdeal,
               chi: Callable[[QuadInt], int]) -> QuadInt:
    """conj(psi_E(prime)) for a prime ideal coprime to the conductor."""
    if curve.f_norm % prime.p == 0:
        raise LSeriesError(f"prime above {prime.p} divides the conductor")
    gen = prime.gen
    s = chi(gen)
    assert s in (-1, 1)
    return gen.conj().scale(s)


def euler_strip(curve: Curve, m_twist: int, s_primes: Iterable[PrimeIdeal],
                chi: Callable[[QuadInt], int]) -> EulerStrip:
    """prod_{P in S} (1 - conj(psi_M(P))/N(P)) as an exact element of K.

    psi_M = psi_E * (M/.) is the twisted character; every P must be
    coprime to its conductor (in particular to M and to the base conductor).
    Per-factor 2-adic valuations are exposed for order-of-vanishing checks.
    """
    m_elem = as_quadint(curve.q, m_twist)
    num = from_int(curve.q, 1)
    den = 1
    factors = []
    for prime in s_primes:
        if m_twist % prime.p == 0:
            raise LSeriesError(f"prime above {prime.p} divides the twist {m_twist}")
        tw = qr_symbol(m_elem, prime)
        assert tw in (-1, 1)
        psi_bar = psi_bar_at(curve, prime, chi).scale(tw)
        n_p = prime.residue_size
        fac_num = from_int(curve.q, n_p) - psi_bar
        factors.append(StripFactor(prime, fac_num, n_p,
                                   _element_ord2(fac_num, n_p)))
        num = num * fac_num
        den *= n_p
    return EulerStrip(num, den, tuple(factors))
