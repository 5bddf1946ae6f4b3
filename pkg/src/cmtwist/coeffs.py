"""Dirichlet coefficients a_n of L(E, s) and of its quadratic twists.

Ground truth for a_p is point counting mod p on the Weierstrass model.  For
the CM curves handled here a_p = 0 at inert primes, and at split primes
a_p = chi(pi_p) * trace(pi_p) for the Hecke character chi; the fast path
takes chi as a callable and must agree with point counts bit for bit.
Tables extend multiplicatively with a smallest-prime-factor sieve.
"""

from __future__ import annotations

import struct
from array import array
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Mapping

from .qfield import QuadInt, cornacchia_split, split_type
from .registry import Curve

MAX_TABLE = 10 ** 6  # 32-bit storage is safe: |a_n| <= n at this scale


class CoeffError(ValueError):
    pass


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 1."""
    if n < 1:
        raise CoeffError(f"kronecker needs a positive second argument, got {n}")
    if n == 1:
        return 1
    if d % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    # strip factors of 2 from n: (d/2) = 0, +1, -1 for d mod 8 in {even},{1,7},{3,5}
    while n % 2 == 0:
        n //= 2
        if d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    a = d % n
    # jacobi loop for odd n > 1; reciprocity flip uses the pre-swap pair
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def _affine_count(curve: Curve, p: int) -> int:
    """Brute-force count of (x, y) on the long model mod p."""
    a1, a2, a3, a4, a6 = curve.a1, curve.a2, curve.a3, curve.a4, curve.a6
    count = 0
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return count


def ap_enumerate(curve: Curve, p: int) -> int:
    """a_p by direct enumeration on the long model; intended for p <= 3."""
    if curve.conductor % p == 0:
        raise CoeffError(f"p = {p} is a bad prime for {curve.label}")
    return p + 1 - (1 + _affine_count(curve, p))


def ap_point_count(curve: Curve, p: int) -> int:
    """Trace of Frobenius at an odd good prime, from Legendre sums.

    For p >= 5 the substitution u = 2y + a1*x + a3 is a bijection, so
    #E(F_p) = 1 + sum_x (1 + (f(x)/p)) with f = 4x^3 + b2 x^2 + 2 b4 x + b6,
    giving a_p = -sum_x (f(x)/p).  p = 3 falls back to enumeration.
    """
    if p == 2 or curve.conductor % p == 0:
        raise CoeffError(f"p = {p} is not an odd good prime for {curve.label}")
    if p == 3:
        return ap_enumerate(curve, 3)
    b2, b4, b6 = curve.b2 % p, (2 * curve.b4) % p, curve.b6 % p
    total = 0
    for x in range(p):
        v = ((4 * x * x * x + b2 * x * x + b4 * x + b6)) % p
        total += kronecker(v, p)
    a = -total
    assert a * a <= 4 * p, f"Hasse bound violated at {p}: {a}"
    return a


def ap_cm_fast(curve: Curve, p: int,
               chi: Callable[[QuadInt], int] | None = None) -> int:
    """a_p via the CM splitting law: 0 at inert p, chi(pi)*trace(pi) at split p.

    Without a calibrated character the split case falls back to point
    counting, so the result is always the true trace of Frobenius.
    """
    if p == 2 or curve.conductor % p == 0:
        raise CoeffError(f"p = {p} is not an odd good prime for {curve.label}")
    kind = split_type(curve.q, p)
    assert kind != "ramified"  # ramified p = q divides the conductor
    if kind == "inert":
        return 0
    if chi is None:
        return ap_point_count(curve, p)
    pi = cornacchia_split(curve.q, p)
    s = chi(pi)
    assert s in (-1, 1)
    return s * pi.trace()


def spf_sieve(n: int) -> array:
    """Smallest-prime-factor table for 0..n (spf[k] = k marks k prime)."""
    spf = array("l", range(n + 1))
    for i in range(2, isqrt(n) + 1):
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def ap_range(curve: Curve, n_max: int,
             chi: Callable[[QuadInt], int] | None = None) -> dict[int, int]:
    """a_p for every good prime p <= n_max (p = 2, 3 by enumeration)."""
    spf = spf_sieve(n_max)
    out: dict[int, int] = {}
    for p in range(2, n_max + 1):
        if spf[p] != p:
            continue
        if curve.conductor % p == 0:
            continue
        if p <= 3:
            out[p] = ap_enumerate(curve, p)
        else:
            out[p] = ap_cm_fast(curve, p, chi)
    return out


@dataclass(frozen=True)
class CoeffTable:
    curve: Curve
    twist_disc: int  # 0 means untwisted
    n_max: int
    a: array  # signed 32-bit, index 0 unused

    def coeff(self, n: int) -> int:
        assert 1 <= n <= self.n_max
        return self.a[n]


def _check_twist_disc(curve: Curve, d: int) -> None:
    if d == 0 or d == 1:
        return
    if d % 4 != 1:
        raise CoeffError(f"twist discriminant {d} is not 1 mod 4")
    m = abs(d)
    if curve.conductor % 2 == 0 or _gcd(m, curve.conductor) != 1:
        raise CoeffError(f"twist discriminant {d} shares a factor with the conductor")
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            raise CoeffError(f"twist discriminant {d} is not square-free")
        k += 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def build_table(curve: Curve, d: int, n_max: int,
                chi: Callable[[QuadInt], int] | None = None,
                ap_map: Mapping[int, int] | None = None) -> CoeffTable:
    """Coefficient table of L(E^(d), s) up to n_max.

    a'(p) = a(p) * kronecker(d, p) at primes p coprime to N(E)*d and 0
    otherwise; prime powers follow a(p^{k+1}) = a(p)a(p^k) - p a(p^{k-1});
    composites fill multiplicatively.  A precomputed {p: a_p} map for the
    untwisted curve may be supplied and is used for every good prime.
    """
    if not 1 <= n_max <= MAX_TABLE:
        raise CoeffError(f"n_max out of range: {n_max}")
    _check_twist_disc(curve, d)
    d_eff = d if d != 0 else 1
    spf = spf_sieve(n_max)
    a = array("i", bytes(4 * (n_max + 1)))
    a[1] = 1
    for p in range(2, n_max + 1):
        if spf[p] != p:
            continue
        if curve.conductor % p == 0 or d_eff % p == 0:
            ap = 0
        else:
            if ap_map is not None and p in ap_map:
                base = ap_map[p]
            elif p <= 3:
                base = ap_enumerate(curve, p)
            else:
                base = ap_cm_fast(curve, p, chi)
            ap = base * kronecker(d_eff, p)
        a[p] = ap
        good = curve.conductor % p != 0 and d_eff % p != 0
        pk_prev, pk = 1, p  # a(p^k) recursion
        while pk * p <= n_max:
            nxt = ap * a[pk] - (p * a[pk_prev] if good else 0)
            pk_prev, pk = pk, pk * p
            a[pk] = nxt
    for n in range(2, n_max + 1):
        p = spf[n]
        if p == n:
            continue
        pk, m = p, n // p
        while m % p == 0:
            pk *= p
            m //= p
        if m > 1:
            a[n] = a[pk] * a[m]
    assert a[1] == 1
    return CoeffTable(curve=curve, twist_disc=d, n_max=n_max, a=a)


# ---- advisory binary cache ------------------------------------------------
# layout: magic "CMAP", u16 version, u16 label length, label bytes,
# u64 pair count, then (int64 p, int64 a_p) little-endian, p ascending.

_CACHE_MAGIC = b"CMAP"
_CACHE_VERSION = 1


def save_ap_cache(path: str, label: str, ap_map: Mapping[int, int]) -> None:
    lab = label.encode("utf-8")
    pairs = sorted(ap_map.items())
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<HH", _CACHE_VERSION, len(lab)))
        fh.write(lab)
        fh.write(struct.pack("<Q", len(pairs)))
        for p, ap in pairs:
            fh.write(struct.pack("<qq", p, ap))


def load_ap_cache(path: str, label: str) -> dict[int, int]:
    """Read a coefficient cache, validating header, order and Hasse bounds."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _CACHE_MAGIC:
        raise CoeffError(f"{path}: not a coefficient cache")
    version, lab_len = struct.unpack_from("<HH", data, 4)
    if version != _CACHE_VERSION:
        raise CoeffError(f"{path}: unsupported cache version {version}")
    lab = data[8:8 + lab_len].decode("utf-8")
    if lab != label:
        raise CoeffError(f"{path}: cache is for curve {lab!r}, not {label!r}")
    off = 8 + lab_len
    (count,) = struct.unpack_from("<Q", data, off)
    off += 8
    if len(data) != off + 16 * count:
        raise CoeffError(f"{path}: truncated cache")
    out: dict[int, int] = {}
    prev = 0
    for _ in range(count):
        p, ap = struct.unpack_from("<qq", data, off)
        off += 16
        if p <= prev:
            raise CoeffError(f"{path}: primes out of order at {p}")
        if ap * ap > 4 * p:
            raise CoeffError(f"{path}: Hasse bound fails at p = {p}")
        out[p] = ap
        prev = p
    return out
