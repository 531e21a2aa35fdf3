"""The division algebra D of degree d and invariant r/d over a local field.

Elements are stored as x = a_0 + a_1 p_D + ... + a_{d-1} p_D^{d-1} with
coefficients in the unramified extension E; the two defining relations are
p_D^d = p_F and p_D a p_D^{-1} = sigma^r(a).  With coefficients on the left
of the powers, the p_D-adic valuation and every residue digit are coordinate
reads.

The reduced norm is the determinant of the matrix of left multiplication on
the right-E-module basis 1, p_D, ..., p_D^{d-1}, expanded by permutations so
no division happens; for d = 2 the closed form a*sigma(a) - p_F*b*sigma(b)
is kept alongside as a cross-check.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

from .gf import field, subfield
from .localfield import local_ring, norm as e_norm, solve_norm_equation


class QuatElem:
    __slots__ = ("home", "coeffs")

    def __init__(self, home, coeffs):
        self.home = home
        self.coeffs = tuple(coeffs)

    def __add__(self, other):
        return self.home.add(self, other)

    def __sub__(self, other):
        return self.home.sub(self, other)

    def __neg__(self):
        return self.home.neg(self)

    def __mul__(self, other):
        return self.home.mul(self, other)

    def __repr__(self):
        return "QuatElem(" + ", ".join(repr(c) for c in self.coeffs) + ")"


class DivAlgebra:
    """Central division algebra over F with invariant r/d.

    Precision N is counted in p_D-adic digits; coefficients live in E at
    ceil(N/d) + 1 digits of their own.
    """

    def __init__(self, kind: str, p: int, e: int, d: int, r: int = 1, N: int = 12):
        if d < 2:
            raise ValueError("degree must be at least 2")
        if not (1 <= r <= d) or math.gcd(r, d) != 1:
            raise ValueError("invariant numerator must be prime to d")
        self.kind, self.p, self.e, self.d, self.r = kind, p, e, d, r
        self.q = p ** e
        self.N = N
        self.NE = -(-N // d) + 1
        self.E = local_ring(kind, p, e, d, self.NE)
        self.F = self.E.base
        self.kD = self.E.k
        self.kF = self.E.kF
        self.sub_kF = subfield(p, e, e * d)

    def __repr__(self):
        return f"D(d={self.d}, r={self.r}, q={self.q}, {self.kind}, N={self.N})"

    # -- constructors

    def zero(self):
        return QuatElem(self, [self.E.zero() for _ in range(self.d)])

    def one(self):
        return QuatElem(self, [self.E.one()] + [self.E.zero() for _ in range(self.d - 1)])

    def pd(self):
        cs = [self.E.zero() for _ in range(self.d)]
        cs[1] = self.E.one()
        return QuatElem(self, cs)

    def from_e(self, a):
        """E embedded as the coefficient of p_D^0."""
        return QuatElem(self, [a] + [self.E.zero() for _ in range(self.d - 1)])

    def omega(self):
        """Teichmuller lift of the residue generator: order q^d - 1."""
        return self.from_e(self.E.teichmuller(self.kD.gen))

    def z_norm_one(self):
        """The root of unity z = omega^(q^r - 1), of order (q^d-1)/(q-1)."""
        w = self.E.teichmuller(self.kD.gen)
        return self.from_e(self.E.mul(self.E.frobenius(w, self.r), self.E.inv(w)))

    def from_pd_digits(self, digits, shift: int = 0):
        """Element with the given residue digits at p_D-levels shift, shift+1, ...

        Digit m of the element is digits[m - shift]; entries are k_D elements.
        Only shift >= 0 is supported.
        """
        d = self.d
        cols = [[] for _ in range(d)]
        for m, s in enumerate(digits, start=shift):
            i = m % d
            lvl = m // d
            col = cols[i]
            while len(col) < lvl:
                col.append(self.kD.zero)
            col.append(s)
        coeffs = [self.E.from_unit_digits(col, 0, self.NE) if col else self.E.zero() for col in cols]
        return QuatElem(self, coeffs)

    # -- structure maps

    def pd_val(self, x) -> int | None:
        """p_D-adic valuation; None for (tracked) zero."""
        best = None
        for i, a in enumerate(x.coeffs):
            if a.val is not None:
                w = self.d * a.val + i
                if best is None or w < best:
                    best = w
        return best

    def prec_of(self, x) -> int:
        return min(self.d * a.prec + i for i, a in enumerate(x.coeffs))

    def digit_at_pd(self, x, m: int):
        """Residue digit of x at p_D-level m, as a k_D element."""
        a = x.coeffs[m % self.d]
        return self.E.digit_at(a, m // self.d)

    def pd_digits(self, x, count: int, start: int = 0):
        return [self.digit_at_pd(x, start + m) for m in range(count)]

    def val_residue(self, x):
        """(w, leading residue in k_D*); errors on zero."""
        w = self.pd_val(x)
        if w is None:
            raise ValueError("zero element has no residue")
        return w, self.digit_at_pd(x, w)

    # -- ring operations

    def add(self, x, y):
        return QuatElem(self, [self.E.add(a, b) for a, b in zip(x.coeffs, y.coeffs)])

    def sub(self, x, y):
        return QuatElem(self, [self.E.sub(a, b) for a, b in zip(x.coeffs, y.coeffs)])

    def neg(self, x):
        return QuatElem(self, [self.E.neg(a) for a in x.coeffs])

    def mul(self, x, y):
        E, d, r = self.E, self.d, self.r
        pf = E.uniformizer()
        out = [E.zero() for _ in range(d)]
        for i, a in enumerate(x.coeffs):
            if a.val is None:
                continue
            for j, b in enumerate(y.coeffs):
                if b.val is None:
                    continue
                term = E.mul(a, E.frobenius(b, (r * i) % d))
                s = (i + j) % d
                if i + j >= d:
                    term = E.mul(term, pf)
                out[s] = E.add(out[s], term)
        return QuatElem(self, out)

    def conj_pd(self, x, times: int = 1):
        """p_D^times  x  p_D^(-times): coefficientwise sigma^(r*times)."""
        return QuatElem(self, [self.E.frobenius(a, (self.r * times) % self.d) for a in x.coeffs])

    def pd_shift_left(self, x, m: int):
        """p_D^m * x for any integer m."""
        d = self.d
        out = [None] * d
        for i, a in enumerate(x.coeffs):
            a = self.E.frobenius(a, (self.r * m) % d)
            s = (i + m) % d
            k = (i + m - s) // d
            if k:
                a = self.E.mul(a, self.E.pow(self.E.uniformizer(), k))
            out[s] = a
        return QuatElem(self, out)

    def pd_shift_right(self, x, m: int):
        """x * p_D^m for any integer m."""
        d = self.d
        out = [None] * d
        for i, a in enumerate(x.coeffs):
            s = (i + m) % d
            k = (i + m - s) // d
            if k:
                a = self.E.mul(a, self.E.pow(self.E.uniformizer(), k))
            out[s] = a
        return QuatElem(self, out)

    def unit_part(self, x):
        """(w, u) with x = p_D^w u and u a unit of O_D."""
        w = self.pd_val(x)
        if w is None:
            raise ValueError("zero element has no unit part")
        return w, self.pd_shift_left(x, -w)

    def inv(self, x):
        w = self.pd_val(x)
        if w is None:
            raise ZeroDivisionError("inverse of zero")
        u = self.pd_shift_left(x, -w) if w else x
        ubar = self.digit_at_pd(u, 0)
        y = self.from_e(self.E.from_unit_digits([self.kD.inv(ubar)], 0, self.NE))
        one = self.one()
        rounds = max(1, (self.N).bit_length() + 1)
        for _ in range(rounds):
            # y <- y(2 - u y); the residual 1 - u y squares each round
            corr = self.sub(self.add(one, one), self.mul(u, y))
            y = self.mul(y, corr)
        if w:
            y = self.pd_shift_right(y, -w)
        return y

    def pow(self, x, n: int):
        if n < 0:
            x, n = self.inv(x), -n
        res = self.one()
        while n:
            if n & 1:
                res = self.mul(res, x)
            x = self.mul(x, x)
            n >>= 1
        return res

    def commutator(self, x, y):
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def eq_mod(self, x, y, k: int) -> bool:
        w = self.pd_val(self.sub(x, y))
        return w is None or w >= k

    # -- reduced norm

    def nrd(self, x):
        """Reduced norm, landing in F."""
        E, d, r = self.E, self.d, self.r
        pf = E.uniformizer()
        M = [[None] * d for _ in range(d)]
        for s in range(d):
            for j in range(d):
                a = E.frobenius(x.coeffs[(s - j) % d], (-r * s) % d)
                if s < j:
                    a = E.mul(a, pf)
                M[s][j] = a
        det = E.zero(self.NE)
        for perm in itertools.permutations(range(d)):
            sign = _perm_sign(perm)
            term = E.one()
            for s in range(d):
                term = E.mul(term, M[s][perm[s]])
            det = E.add(det, term if sign > 0 else E.neg(term))
        return E.retract(det)

    def nrd_closed_d2(self, x):
        """a*sigma(a) - p_F*b*sigma(b), only for d = 2."""
        if self.d != 2:
            raise ValueError("closed form is for degree 2")
        E = self.E
        a, b = x.coeffs
        t1 = E.mul(a, E.frobenius(a))
        t2 = E.mul(E.uniformizer(), E.mul(b, E.frobenius(b)))
        return E.retract(E.sub(t1, t2))

    @staticmethod
    def nrd_filtration_image(i: int, d: int) -> int:
        """Level k with nrd(U_D^i) = U_F^k."""
        if i < 1:
            raise ValueError("level must be positive")
        return -(-i // d)

    # -- norm-one machinery

    def residue_norm_preimage(self, c):
        """Least-power k_D* element whose relative norm is c in k_F*."""
        kD, kF = self.kD, self.kF
        if c == kF.zero:
            raise ValueError("norm preimage of zero")
        g = kD.gen
        ng = self.sub_kF.norm(g)
        # N(g^a) = N(g)^a with N(g) generating k_F*
        a = kF.log(c) * pow(kF.log(ng), -1, kF.order - 1) % (kF.order - 1)
        return kD.pow(g, a)

    def normalize_to_D1(self, u):
        """u * e^(-1) in D^1, for e in E* of the same reduced norm as u."""
        w = self.pd_val(u)
        if w != 0:
            raise ValueError("input must be a unit of O_D")
        eta = self.nrd(u)
        ebar = self.residue_norm_preimage(self.F.residue(eta))
        e0 = self.E.teichmuller(ebar)
        rest = self.F.div(eta, e_norm(self.E, e0))
        e1 = solve_norm_equation(self.E, rest)
        e = self.E.mul(e0, e1)
        t = self.mul(u, self.from_e(self.E.inv(e)))
        res = self.nrd(t)
        assert self.F.eq_mod(res, self.F.one(res.prec), res.prec), "norm-one projection failed"
        return t

    def lift_graded_to_D1(self, s, i: int):
        """v in D^1 with v = 1 + (lift of s) p_D^i modulo P_D^(i+1).

        When d | i the trace of s must vanish: the norm of 1 + x p_D^(dk)
        moves the level-k unit digit by Tr(x), which no deeper digit can
        cancel.
        """
        if i < 1:
            raise ValueError("level must be positive")
        if s == self.kD.zero:
            return self.one()
        if i % self.d == 0:
            tr = self.sub_kF.trace(s)
            if tr != self.kF.zero:
                raise ValueError(
                    f"no norm-one lift at level {i}: residue {s} has trace {tr} != 0")
        x = self.add(self.one(), self.from_pd_digits([s], shift=i))
        n = self.nrd(x)
        e = solve_norm_equation(self.E, n)
        v = self.mul(x, self.from_e(self.E.inv(e)))
        # norm repair must not disturb the graded residue
        assert self.digit_at_pd(v, i) == s and self.pd_val(self.sub(v, self.one())) == i, \
            "graded residue was not preserved"
        res = self.nrd(v)
        assert self.F.eq_mod(res, self.F.one(res.prec), res.prec), "lift is not norm one"
        return v

    def random_unit(self, rng, levels: int | None = None):
        levels = self.N if levels is None else levels
        digits = [self.kD.from_int(rng.randrange(1, self.kD.order))]
        digits += [self.kD.from_int(rng.randrange(self.kD.order)) for _ in range(levels - 1)]
        return self.from_pd_digits(digits)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def algebra(kind: str, p: int, e: int, d: int, r: int = 1, N: int = 12) -> DivAlgebra:
    return DivAlgebra(kind, p, e, d, r, N)
