"""Coefficient fields for character and matrix work.

Two kinds share one protocol: Cyclotomic(m) is Q(zeta_m) with elements
(numerator tuple, denominator) over the power basis of the m-th cyclotomic
polynomial, and GFScalars(ell, m) is GF(ell^k) for the least k with
m | ell^k - 1.  Scalars are immutable and hashable, so they can key dicts
and serialize canonically.

reduce_mod_prime sends Q(zeta_m) integrally onto the finite side.  When ell
divides m, zeta_m goes to z'^t where z' is the canonical primitive root of
the prime-to-ell order m' and t inverts the ell-part of m modulo m'; this is
the unique assignment compatible with the canonical roots of prime-to-ell
order, and it collapses ell-power roots of unity to 1 as it must.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .gf import GF, factorize, field, is_prime


# ---------------------------------------------------------------------------
# cyclotomic polynomials over Z, low degree first

def _zp_divexact(a, b):
    # exact division of integer polynomials, b monic
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    assert not any(a[:db]), "division was not exact"
    return tuple(q)


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    f = tuple([-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            f = _zp_divexact(f, cyclotomic_poly(d))
    return f


# ---------------------------------------------------------------------------

class Cyclotomic:
    """Q(zeta_m).  Scalars are (nums, den): integer tuple of length phi(m),
    positive denominator, in lowest terms."""

    char = 0

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        self.poly = cyclotomic_poly(m)
        self.phi = len(self.poly) - 1
        self._rows = self._reduction_rows()
        self.zero = ((0,) * self.phi, 1)
        self.one = ((1,) + (0,) * (self.phi - 1), 1)
        self.zeta = (self._rows[1 % self.m], 1)

    def _reduction_rows(self):
        # x^j mod Phi_m for 0 <= j < max(m, 2*phi - 1)
        phi = self.phi
        count = max(self.m, 2 * phi - 1, 1)
        rows = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(count):
            rows.append(tuple(cur))
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                for i in range(phi):
                    cur[i] -= lead * self.poly[i]
        return rows

    def __repr__(self):
        return f"Q(zeta_{self.m})"

    def __eq__(self, other):
        return isinstance(other, Cyclotomic) and self.m == other.m

    def __hash__(self):
        return hash((Cyclotomic, self.m))

    def _norm(self, nums, den):
        if den < 0:
            nums = [-v for v in nums]
            den = -den
        g = math.gcd(den, *[abs(v) for v in nums]) if nums else den
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        return (tuple(nums), den)

    # -- protocol

    def from_int(self, n: int):
        return ((n,) + (0,) * (self.phi - 1), 1)

    def from_fraction(self, fr: Fraction):
        return self._norm([fr.numerator] + [0] * (self.phi - 1), fr.denominator)

    def is_zero(self, a):
        return all(v == 0 for v in a[0])

    def add(self, a, b):
        (na, da), (nb, db) = a, b
        return self._norm([x * db + y * da for x, y in zip(na, nb)], da * db)

    def sub(self, a, b):
        (na, da), (nb, db) = a, b
        return self._norm([x * db - y * da for x, y in zip(na, nb)], da * db)

    def neg(self, a):
        return (tuple(-v for v in a[0]), a[1])

    def mul(self, a, b):
        (na, da), (nb, db) = a, b
        phi = self.phi
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(na):
            if x:
                for j, y in enumerate(nb):
                    if y:
                        conv[i + j] += x * y
        out = [0] * phi
        for j, c in enumerate(conv):
            if c:
                row = self._rows[j]
                for i in range(phi):
                    out[i] += c * row[i]
        return self._norm(out, da * db)

    def inv(self, a):
        nums, den = a
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # Bezout over Q[x] against the cyclotomic polynomial
        r0 = [Fraction(c) for c in self.poly]
        r1 = [Fraction(c) for c in nums]
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _qp_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qp_sub(s0, _qp_mul(q, s1))
        c = r1[0]
        u = [v / c for v in s1]
        u += [Fraction(0)] * (self.phi - len(u))
        common = math.lcm(*[f.denominator for f in u]) if u else 1
        nums_u = [int(f * common) for f in u]
        return self._norm([v * den for v in nums_u], common)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def galois(self, a, t: int):
        """The automorphism zeta -> zeta^t, gcd(t, m) = 1."""
        if math.gcd(t, self.m) != 1:
            raise ValueError("not a Galois automorphism")
        nums, den = a
        out = [0] * self.phi
        for i, c in enumerate(nums):
            if c:
                row = self._rows[(i * t) % self.m]
                for j in range(self.phi):
                    out[j] += c * row[j]
        return self._norm(out, den)

    def conj(self, a):
        return self.galois(a, self.m - 1) if self.m > 2 else a

    def root_of_unity(self, n: int):
        if self.m % n:
            raise ValueError(f"no primitive {n}-th root in Q(zeta_{self.m})")
        return (self._rows[(self.m // n) % self.m], 1)

    def as_int(self, a) -> int:
        nums, den = a
        if den != 1 or any(nums[1:]):
            raise ValueError(f"not a rational integer: {a}")
        return nums[0]

    def as_fraction(self, a) -> Fraction:
        nums, den = a
        if any(nums[1:]):
            raise ValueError(f"not rational: {a}")
        return Fraction(nums[0], den)

    def scalar_json(self, a):
        return [list(a[0]), a[1]]

    def scalar_from_json(self, j):
        return self._norm(list(j[0]), j[1])

    def describe(self):
        return {"char": 0, "m": self.m}


def _qp_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(0, len(a) - db)
    inv = 1 / b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _qp_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qp_sub(a, b):
    n = max(len(a), len(b))
    out = [ (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0)) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


# ---------------------------------------------------------------------------

class GFScalars:
    """GF(ell^k) for the least k with m | ell^k - 1, wrapping gf.field."""

    def __init__(self, ell: int, m: int):
        if not is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        if m < 1 or math.gcd(ell, m) != 1:
            raise ValueError(f"m = {m} must be positive and prime to {ell}")
        k = 1
        acc = ell % m
        while acc != 1 % m:
            acc = (acc * ell) % m
            k += 1
        self.char = ell
        self.m = m
        self.F: GF = field(ell, k)
        self.zero = self.F.zero
        self.one = self.F.one

    def __repr__(self):
        return f"GF({self.char}^{self.F.k}; m={self.m})"

    def __eq__(self, other):
        return isinstance(other, GFScalars) and (self.char, self.m) == (other.char, other.m)

    def __hash__(self):
        return hash((GFScalars, self.char, self.m))

    def from_int(self, n: int):
        return self.F.smul(n, self.F.one)

    def is_zero(self, a):
        return a == self.F.zero

    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def inv(self, a):
        return self.F.inv(a)

    def div(self, a, b):
        return self.F.div(a, b)

    def pow(self, a, e: int):
        return self.F.pow(a, e)

    def root_of_unity(self, n: int):
        if (self.F.order - 1) % n:
            raise ValueError(f"no {n}-th root of unity in {self!r}")
        return self.F.exp((self.F.order - 1) // n)

    def scalar_json(self, a):
        return list(a)

    def scalar_from_json(self, j):
        return tuple(int(v) % self.char for v in j)

    def describe(self):
        return {"char": self.char, "m": self.m, "degree": self.F.k}


def make_field(char: int, m: int):
    """Coefficient field containing primitive m-th roots of unity."""
    if char == 0:
        return Cyclotomic(m)
    return GFScalars(char, m)


def reduce_mod_prime(src: Cyclotomic, a, dst: GFScalars):
    """Integral reduction Q(zeta_m) -> GF(ell^k) on the canonical roots.

    The denominator of a must be prime to ell.  Requires the target to
    contain the prime-to-ell part m' of m, i.e. m' | ell^k - 1.
    """
    ell = dst.char
    mprime, lpart = src.m, 1
    while mprime % ell == 0:
        mprime //= ell
        lpart *= ell
    if (dst.F.order - 1) % mprime:
        raise ValueError(f"target {dst!r} lacks {mprime}-th roots of unity")
    if lpart == 1:
        zimg = dst.root_of_unity(src.m) if src.m > 1 else dst.one
    else:
        zprime = dst.root_of_unity(mprime) if mprime > 1 else dst.one
        t = pow(lpart, -1, mprime) if mprime > 1 else 0
        zimg = dst.F.pow(zprime, t) if mprime > 1 else dst.one
    nums, den = a
    if den % ell == 0:
        raise ValueError(f"denominator {den} is not a unit mod {ell}")
    acc = dst.F.zero
    for c in reversed(nums):
        acc = dst.F.add(dst.F.mul(acc, zimg), dst.F.smul(c, dst.F.one))
    dinv = pow(den % ell, ell - 2, ell)
    return dst.F.smul(dinv, acc)
