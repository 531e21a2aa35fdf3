"""Truncated exact arithmetic in a local field and its unramified extension.

Two kinds of base field are supported: F_q((t)) for any prime power q, and
Q_p (residue degree 1 only).  A ring object represents either the base F
(degree 1) or the unramified extension E of degree d over F; elements are
immutable and carry (valuation, unit digits, precision).

Series elements store one residue-field coefficient per power of t.  Mixed
characteristic elements store a polynomial representative in x modulo
(p^r, h(x)) with h the naive integer lift of the residue defining
polynomial; the unit part is a tuple of d integers.  In both kinds the
digit_at / from_unit_digits pair exposes the same residue-digit view, which
is what the group layers build on.
"""

from __future__ import annotations

from functools import lru_cache

from .gf import GF, field, subfield


class LocalElem:
    """p^val * unit, unit known modulo p^(prec - val); val None means the
    element is zero as far as tracked (zero modulo p^prec)."""

    __slots__ = ("home", "val", "digits", "prec")

    def __init__(self, home, val, digits, prec):
        self.home = home
        self.val = val
        self.digits = digits
        self.prec = prec

    def is_zero(self):
        return self.val is None

    def relprec(self):
        return self.prec - self.val if self.val is not None else 0

    def __add__(self, other):
        return self.home.add(self, other)

    def __sub__(self, other):
        return self.home.sub(self, other)

    def __neg__(self):
        return self.home.neg(self)

    def __mul__(self, other):
        return self.home.mul(self, other)

    def __repr__(self):
        if self.val is None:
            return f"O(pi^{self.prec})"
        return f"{self.home._fmt_unit(self.digits)}*pi^{self.val} + O(pi^{self.prec})"


class _RingBase:
    """Shared constructors and derived operations for both field kinds."""

    def zero(self, prec=None):
        return LocalElem(self, None, (), self.N if prec is None else prec)

    def one(self, prec=None):
        return self.from_unit_digits([self.k.one], 0, prec)

    def uniformizer(self, prec=None):
        return self.from_unit_digits([self.k.one], 1, prec)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one()
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def eq_mod(self, a, b, k: int) -> bool:
        d = self.sub(a, b)
        if d.val is None:
            return d.prec >= k
        return d.val >= k

    def unit_digits(self, a, count: int, start: int = None):
        """count residue digits of a, beginning at level start (default
        a.val); absent digits beyond precision raise."""
        if a.val is None:
            if start is None:
                raise ValueError("zero element has no unit digits")
            if start + count > a.prec:
                raise ValueError("digits beyond tracked precision")
            return [self.k.zero] * count
        s = a.val if start is None else start
        if s + count > a.prec:
            raise ValueError("digits beyond tracked precision")
        return [self.digit_at(a, s + i) for i in range(count)]

    def truncate(self, a, prec: int):
        if prec >= a.prec:
            return a
        if a.val is None or a.val >= prec:
            return self.zero(prec)
        return self._trunc(a, prec)

    def residue(self, a):
        """Residue of the unit part of a, as an element of k."""
        if a.val is None:
            raise ValueError("zero has no unit residue")
        return self.digit_at(a, a.val)


class SeriesRing(_RingBase):
    """k((t)) truncated at a working precision, k = F_{q^d}."""

    kind = "eq"

    def __init__(self, p, e, d, N):
        self.p, self.e, self.d = p, e, d
        self.q = p ** e
        self.N = N
        self.k: GF = field(p, e * d)
        self.kF: GF = field(p, e)
        self.sub_kF = subfield(p, e, e * d) if d > 1 else None
        self.base = self if d == 1 else local_ring("eq", p, e, 1, N)

    def __repr__(self):
        return f"F_{self.q ** self.d}((t))" if self.d > 1 else f"F_{self.q}((t))"

    def _fmt_unit(self, digits):
        return "[" + ",".join(str(self.k.to_int(c)) for c in digits) + "]"

    def _mk(self, val, digits, prec):
        # digits is a mutable list of k-elements starting at level val
        digits = list(digits)
        while digits and digits[0] == self.k.zero:
            digits.pop(0)
            val += 1
        if not digits or val >= prec:
            return LocalElem(self, None, (), prec)
        digits = digits[: prec - val]
        digits += [self.k.zero] * (prec - val - len(digits))
        return LocalElem(self, val, tuple(digits), prec)

    def from_unit_digits(self, digits, val=0, prec=None):
        prec = self.N if prec is None else prec
        return self._mk(val, [self.k.el(*c) if not isinstance(c, tuple) else c for c in digits], prec)

    def from_int(self, n: int, prec=None):
        return self.from_unit_digits([self.k.smul(n, self.k.one)], 0, prec)

    def digit_at(self, a, i: int):
        if a.val is None or i < a.val:
            return self.k.zero
        if i >= a.prec:
            raise ValueError("digit beyond tracked precision")
        return a.digits[i - a.val]

    def _trunc(self, a, prec):
        return self._mk(a.val, list(a.digits), prec)

    def add(self, a, b):
        prec = min(a.prec, b.prec)
        if a.val is None:
            return self._trunc(b, prec) if b.val is not None else self.zero(prec)
        if b.val is None:
            return self._trunc(a, prec)
        val = min(a.val, b.val)
        out = [self.k.zero] * (prec - val)
        for src in (a, b):
            for i, c in enumerate(src.digits):
                j = src.val + i - val
                if j < len(out):
                    out[j] = self.k.add(out[j], c)
        return self._mk(val, out, prec)

    def neg(self, a):
        if a.val is None:
            return a
        return LocalElem(self, a.val, tuple(self.k.neg(c) for c in a.digits), a.prec)

    def mul(self, a, b):
        if a.val is None or b.val is None:
            pa = a.prec if a.val is None else a.val
            pb = b.prec if b.val is None else b.val
            return self.zero(pa + pb)
        r = min(a.relprec(), b.relprec())
        out = [self.k.zero] * r
        for i, x in enumerate(a.digits):
            if i >= r or x == self.k.zero:
                continue
            for j, y in enumerate(b.digits):
                if i + j >= r:
                    break
                if y != self.k.zero:
                    out[i + j] = self.k.add(out[i + j], self.k.mul(x, y))
        return self._mk(a.val + b.val, out, a.val + b.val + r)

    def inv(self, a):
        if a.val is None:
            raise ZeroDivisionError("inverse of zero")
        r = a.relprec()
        d0i = self.k.inv(a.digits[0])
        out = [d0i] + [self.k.zero] * (r - 1)
        for n in range(1, r):
            acc = self.k.zero
            for j in range(1, min(n, len(a.digits) - 1) + 1):
                acc = self.k.add(acc, self.k.mul(a.digits[j], out[n - j]))
            out[n] = self.k.neg(self.k.mul(d0i, acc))
        return self._mk(-a.val, out, -a.val + r)

    def frobenius(self, a, times: int = 1):
        """Lift of the q-power map on k, fixing the degree-1 subring."""
        if a.val is None:
            return a
        t = (times * self.e) % (self.e * self.d)
        return LocalElem(self, a.val, tuple(self.k.frob(c, t) for c in a.digits), a.prec)

    def teichmuller(self, x, prec=None):
        if x == self.k.zero:
            raise ValueError("no Teichmuller lift of zero")
        return self.from_unit_digits([x], 0, prec)

    # -- base-change along F -> E

    def emb(self, a):
        """Embed an element of the base ring."""
        if self.d == 1:
            return a
        if a.val is None:
            return self.zero(a.prec)
        return LocalElem(self, a.val, tuple(self.sub_kF.up(c) for c in a.digits), a.prec)

    def retract(self, a):
        """Inverse of emb; raises if a is not in the base ring."""
        if self.d == 1:
            return a
        if a.val is None:
            return self.base.zero(a.prec)
        try:
            digs = [self.sub_kF.down(c) for c in a.digits]
        except ValueError:
            raise ValueError("element does not lie in the base field") from None
        return self.base._mk(a.val, digs, a.prec)


class PadicRing(_RingBase):
    """Unramified extension of Q_p of degree d, elements modulo p^r.

    The unit part is a length-d integer vector in the power basis of x,
    where x satisfies the naive lift h of the canonical F_{p^d} polynomial.
    """

    kind = "padic"

    def __init__(self, p, e, d, N):
        if e != 1:
            raise ValueError("mixed characteristic requires residue degree 1")
        self.p, self.e, self.d = p, 1, d
        self.q = p
        self.N = N
        self.k: GF = field(p, d)
        self.kF: GF = field(p, 1)
        self.sub_kF = subfield(p, 1, d) if d > 1 else None
        self.h = tuple(self.k.poly) + (1,)  # monic integer lift
        self.base = self if d == 1 else local_ring("padic", p, 1, 1, N)
        self._frob_pows = None  # powers of the Frobenius root of h

    def __repr__(self):
        return f"Q_{self.p}" if self.d == 1 else f"Q_{self.p}[x]/h, deg {self.d}"

    def _fmt_unit(self, digits):
        return "(" + ",".join(str(v) for v in digits) + ")"

    def _mk(self, val, vec, prec):
        r = prec - val
        if r <= 0:
            return LocalElem(self, None, (), prec)
        p = self.p
        vec = [v % p ** r for v in vec]
        while any(vec):
            if all(v % p == 0 for v in vec):
                vec = [v // p for v in vec]
                val += 1
                r -= 1
                if r == 0:
                    return LocalElem(self, None, (), prec)
            else:
                break
        if not any(vec):
            return LocalElem(self, None, (), prec)
        return LocalElem(self, val, tuple(vec), prec)

    def from_unit_digits(self, digits, val=0, prec=None):
        prec = self.N if prec is None else prec
        vec = [0] * self.d
        for i, c in enumerate(digits):
            c = self.k.el(*c) if not isinstance(c, tuple) else c
            for j in range(self.d):
                vec[j] += c[j] * self.p ** i
        return self._mk(val, vec, prec)

    def from_int(self, n: int, prec=None):
        prec = self.N if prec is None else prec
        return self._mk(0, [n] + [0] * (self.d - 1), prec)

    def digit_at(self, a, i: int):
        if a.val is None or i < a.val:
            return self.k.zero
        if i >= a.prec:
            raise ValueError("digit beyond tracked precision")
        s = i - a.val
        return tuple((v // self.p ** s) % self.p for v in a.digits)

    def _trunc(self, a, prec):
        return self._mk(a.val, list(a.digits), prec)

    def add(self, a, b):
        prec = min(a.prec, b.prec)
        if a.val is None:
            return self._trunc(b, prec) if b.val is not None else self.zero(prec)
        if b.val is None:
            return self._trunc(a, prec)
        val = min(a.val, b.val)
        sa = self.p ** (a.val - val)
        sb = self.p ** (b.val - val)
        vec = [x * sa + y * sb for x, y in zip(a.digits, b.digits)]
        return self._mk(val, vec, prec)

    def neg(self, a):
        if a.val is None:
            return a
        m = self.p ** a.relprec()
        return LocalElem(self, a.val, tuple((-v) % m for v in a.digits), a.prec)

    def _polymul(self, u, v, mod):
        d = self.d
        out = [0] * (2 * d - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    out[i + j] = (out[i + j] + x * y) % mod
        for i in range(2 * d - 2, d - 1, -1):
            c = out[i]
            if c:
                out[i] = 0
                for j in range(d):
                    out[i - d + j] = (out[i - d + j] - c * self.h[j]) % mod
        return out[:d]

    def mul(self, a, b):
        if a.val is None or b.val is None:
            return self.zero((a.prec if a.val is None else a.val) + (b.prec if b.val is None else b.val))
        r = min(a.relprec(), b.relprec())
        vec = self._polymul(a.digits, b.digits, self.p ** r)
        return self._mk(a.val + b.val, vec, a.val + b.val + r)

    def inv(self, a):
        if a.val is None:
            raise ZeroDivisionError("inverse of zero")
        r = a.relprec()
        p = self.p
        res = tuple(v % p for v in a.digits)
        b = list(self.k.inv(res))  # naive lift of the residue inverse
        known = 1
        while known < r:
            known = min(2 * known, r)
            mod = p ** known
            ab = self._polymul(a.digits, b, mod)
            two_minus = [(-v) % mod for v in ab]
            two_minus[0] = (two_minus[0] + 2) % mod
            b = self._polymul(b, two_minus, mod)
        return self._mk(-a.val, b, -a.val + r)

    # -- Frobenius via the root of h lying over x^p

    def _heval(self, vec, mod, deriv=False):
        d = self.d
        if deriv:
            coeffs = [(i * self.h[i]) % mod for i in range(1, d)] + [d % mod]
        else:
            coeffs = list(self.h)
        acc = [0] * d
        for c in reversed(coeffs):
            acc = self._polymul(acc, vec, mod)
            acc[0] = (acc[0] + c) % mod
        return acc

    def _frob_data(self):
        if self._frob_pows is None:
            p, d, N = self.p, self.d, self.N
            mod = p ** N
            # start from x^p mod h
            if p < d:
                a = [0] * d
                a[p] = 1
            else:
                x = [0, 1] + [0] * (d - 2)
                a = [1] + [0] * (d - 1)
                for _ in range(p):
                    a = self._polymul(a, x, mod)
            # Newton: a <- a - h(a)/h'(a)
            for _ in range(N + 1):
                fa = self._heval(a, mod)
                if not any(fa):
                    break
                da = self._heval(a, mod, deriv=True)
                dinv = self._vec_inv_mod(da, mod)
                corr = self._polymul(fa, dinv, mod)
                a = [(x - y) % mod for x, y in zip(a, corr)]
            pows = [[1] + [0] * (d - 1)]
            for _ in range(d - 1):
                pows.append(self._polymul(pows[-1], a, mod))
            self._frob_pows = pows
        return self._frob_pows

    def _vec_inv_mod(self, vec, mod):
        p = self.p
        res = tuple(v % p for v in vec)
        b = list(self.k.inv(res))
        known = 1
        while p ** known < mod:
            known *= 2
            m2 = min(p ** known, mod)
            ab = self._polymul(vec, b, m2)
            two_minus = [(-v) % m2 for v in ab]
            two_minus[0] = (two_minus[0] + 2) % m2
            b = self._polymul(b, two_minus, m2)
        return [v % mod for v in b]

    def frobenius(self, a, times: int = 1):
        if a.val is None or self.d == 1:
            return a
        times %= self.d
        vec = list(a.digits)
        mod = self.p ** a.relprec()
        pows = self._frob_data()
        for _ in range(times):
            out = [0] * self.d
            for i, c in enumerate(vec):
                if c:
                    for j in range(self.d):
                        out[j] = (out[j] + c * pows[i][j]) % mod
            vec = out
        return self._mk(a.val, vec, a.prec)

    def teichmuller(self, x, prec=None):
        """The root of unity of order dividing p^d - 1 over the residue x."""
        if x == self.k.zero:
            raise ValueError("no Teichmuller lift of zero")
        prec = self.N if prec is None else prec
        mod = self.p ** prec
        vec = list(x) + [0] * (self.d - len(x))
        Q = self.p ** self.d
        for _ in range(prec):
            # z -> z^Q gains one digit of agreement per round
            acc = [1] + [0] * (self.d - 1)
            base = vec
            e = Q
            while e:
                if e & 1:
                    acc = self._polymul(acc, base, mod)
                base = self._polymul(base, base, mod)
                e >>= 1
            vec = acc
        return self._mk(0, vec, prec)

    def emb(self, a):
        if self.d == 1:
            return a
        if a.val is None:
            return self.zero(a.prec)
        return LocalElem(self, a.val, (a.digits[0],) + (0,) * (self.d - 1), a.prec)

    def retract(self, a):
        if self.d == 1:
            return a
        if a.val is None:
            return self.base.zero(a.prec)
        if any(a.digits[1:]):
            raise ValueError("element does not lie in the base field")
        return LocalElem(self.base, a.val, (a.digits[0],), a.prec)


def _norm_trace(E, a):
    n = E.one(a.prec)
    t = E.zero(a.prec)
    cur = a
    for _ in range(E.d):
        n = E.mul(n, cur)
        t = E.add(t, cur)
        cur = E.frobenius(cur)
    return E.retract(n), E.retract(t)


def norm(E, a):
    """N_{E/F}(a), returned in the base ring."""
    return _norm_trace(E, a)[0]


def trace(E, a):
    return _norm_trace(E, a)[1]


def solve_norm_equation(E, target):
    """u in U_E^k with N_{E/F}(u) = target, for target in U_F^k, k >= 1.

    Level by level: the norm on 1 + x*pi^i moves the level-i residue by
    Tr(x), and the relative trace of residue fields is surjective.
    """
    F = E.base
    if target.val != 0 or target.prec < 1:
        raise ValueError("target must be a unit")
    delta = F.sub(target, F.one(target.prec))
    if delta.val is not None and delta.val < 1:
        raise ValueError("target must be congruent to 1 modulo the maximal ideal")
    prec = target.prec
    u = E.one(prec)
    if E.d == 1:
        return target
    S = E.sub_kF
    while True:
        nu = norm(E, u)
        c = F.div(target, nu)
        delta = F.sub(c, F.one(prec))
        if delta.val is None or delta.val >= prec:
            return u
        i = delta.val
        cbar = F.residue(delta)
        xbar = S.trace_preimage(cbar)
        step = E.add(E.one(prec), E.from_unit_digits([xbar], i, prec))
        u = E.mul(u, step)


@lru_cache(maxsize=None)
def local_ring(kind: str, p: int, e: int, d: int, N: int):
    """Shared ring instances; d = 1 is the base field itself."""
    if kind == "eq":
        return SeriesRing(p, e, d, N)
    if kind == "padic":
        return PadicRing(p, e, d, N)
    raise ValueError(f"unknown local field kind {kind!r}")


def default_precision(d: int, f: int) -> int:
    return max(12, d * f + 4)
