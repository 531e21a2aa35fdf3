"""Finite fields GF(p^k) with deterministic defining data.

Elements are tuples of k ints in [0, p), low degree first.  The defining
polynomial is the first monic irreducible of degree k in counter order
(coefficient vectors read as base-p integers), and the distinguished
multiplicative generator is the first element in counter order of full order
p^k - 1.  Every choice is a pure function of (p, k), so serialized values are
stable across runs.
"""

from __future__ import annotations

import math
from functools import lru_cache

_MAX_TABLE = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for t in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % t == 0:
            return n == t
    f = 41
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; inputs here stay small."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# bootstrap polynomial arithmetic over F_p (int tuples, low degree first)

def _pf_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _pf_mul(p, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pf_trim(out)


def _pf_mod(p, a, m):
    # m monic
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _pf_trim(a)


def _pf_powmod(p, a, e, m):
    r = (1,)
    a = _pf_mod(p, a, m)
    while e:
        if e & 1:
            r = _pf_mod(p, _pf_mul(p, r, a), m)
        a = _pf_mod(p, _pf_mul(p, a, a), m)
        e >>= 1
    return r


def _pf_sub(p, a, b):
    n = max(len(a), len(b))
    return _pf_trim(tuple(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)))


def _pf_gcd(p, a, b):
    a, b = _pf_trim(a), _pf_trim(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = tuple((c * inv) % p for c in b)
        a, b = b, _pf_mod(p, a, bm)
    return a


def _is_irreducible(p, k, low):
    """Monic degree-k polynomial with low coefficients `low` over F_p."""
    if k == 1:
        return True
    m = low + (1,)
    x = (0, 1)
    # x^(p^k) == x mod m, and gcd(x^(p^(k/t)) - x, m) == 1 for primes t | k
    if _pf_sub(p, _pf_powmod(p, x, p ** k, m), x):
        return False
    for t in factorize(k):
        h = _pf_sub(p, _pf_powmod(p, x, p ** (k // t), m), x)
        if len(_pf_gcd(p, h, m)) != 1:
            return False
    return True


def _min_irreducible(p, k):
    for n in range(p ** k):
        low = tuple((n // p ** i) % p for i in range(k))
        if _is_irreducible(p, k, low):
            return low
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------

class GF:
    """The field with p^k elements."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("degree must be positive")
        self.p = p
        self.k = k
        self.order = p ** k
        self.poly = _min_irreducible(p, k)
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)
        self._exp: list[tuple] | None = None
        self._log: dict[tuple, int] | None = None
        self.gen = self._find_generator()
        if self.order <= _MAX_TABLE:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((GF, self.p, self.k))

    # -- encoding

    def from_int(self, n: int) -> tuple:
        p = self.p
        return tuple((n // p ** i) % p for i in range(self.k))

    def to_int(self, a: tuple) -> int:
        p = self.p
        return sum(c * p ** i for i, c in enumerate(a))

    def elements(self):
        for n in range(self.order):
            yield self.from_int(n)

    def el(self, *coeffs) -> tuple:
        cs = tuple(c % self.p for c in coeffs)
        return cs + (0,) * (self.k - len(cs))

    # -- arithmetic

    def is_zero(self, a):
        return a == self.zero

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def smul(self, c: int, a):
        p = self.p
        c %= p
        return tuple((c * x) % p for x in a)

    def mul(self, a, b):
        if self._log is not None:
            la = self._log.get(a)
            if la is None:
                return self.zero
            lb = self._log.get(b)
            if lb is None:
                return self.zero
            return self._exp[(la + lb) % (self.order - 1)]
        return self._mul_poly(a, b)

    def _mul_poly(self, a, b):
        p, k = self.p, self.k
        out = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        for i in range(2 * k - 2, k - 1, -1):
            c = out[i]
            if c:
                out[i] = 0
                for j, pc in enumerate(self.poly):
                    out[i - k + j] = (out[i - k + j] - c * pc) % p
        return tuple(out[:k])

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        n = self.order - 1
        if a == self.zero:
            if e == 0:
                return self.one
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return self.zero
        if self._log is not None:
            return self._exp[(self._log[a] * e) % n]
        e %= n
        r = self.one
        while e:
            if e & 1:
                r = self._mul_poly(r, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return r

    def frob(self, a, times: int = 1):
        """a ** (p ** times); times may be negative."""
        if a == self.zero:
            return self.zero
        return self.pow(a, self.p ** (times % self.k))

    # -- multiplicative structure

    def _find_generator(self):
        n = self.order - 1
        if n == 1:
            return self.one
        primes = list(factorize(n))
        for m in range(1, self.order):
            g = self.from_int(m)
            if g == self.zero:
                continue
            if all(self.pow(g, n // t) != self.one for t in primes):
                return g
        raise AssertionError("no generator found")

    def _build_tables(self):
        n = self.order - 1
        exp = [self.one]
        cur = self.one
        for _ in range(n - 1):
            cur = self._mul_poly(cur, self.gen)
            exp.append(cur)
        self._exp = exp
        self._log = {a: i for i, a in enumerate(exp)}

    def log(self, a) -> int:
        """Discrete log base the distinguished generator."""
        if a == self.zero:
            raise ZeroDivisionError("log of zero")
        if self._log is not None:
            return self._log[a]
        # baby-step giant-step
        n = self.order - 1
        m = math.isqrt(n) + 1
        baby = {}
        cur = self.one
        for j in range(m):
            baby.setdefault(cur, j)
            cur = self.mul(cur, self.gen)
        step = self.inv(self.pow(self.gen, m))
        cur = a
        for i in range(m + 1):
            if cur in baby:
                return (i * m + baby[cur]) % n
            cur = self.mul(cur, step)
        raise AssertionError("discrete log failed")

    def exp(self, e: int):
        if self._exp is not None:
            return self._exp[e % (self.order - 1)]
        return self.pow(self.gen, e)

    def order_of(self, a) -> int:
        if a == self.zero:
            raise ValueError("zero has no multiplicative order")
        n = self.order - 1
        e = n
        for t, mult in factorize(n).items():
            for _ in range(mult):
                if self.pow(a, e // t) == self.one:
                    e //= t
                else:
                    break
        return e


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> GF:
    return GF(p, k)


# ---------------------------------------------------------------------------
# subfield embeddings

def _fp_solve(p, rows, rhs):
    """Solve the F_p system rows * x = rhs; rows is a list of equal-length
    rows.  Returns a solution as a list, or None if inconsistent."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    nr, nc = len(m), len(m[0]) - 1
    piv = []
    r = 0
    for c in range(nc):
        sel = next((i for i in range(r, nr) if m[i][c] % p), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(v - f * w) % p for v, w in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if m[i][nc] % p:
            return None
    x = [0] * nc
    for i, c in enumerate(piv):
        x[c] = m[i][nc]
    return x


class Subfield:
    """GF(p, e) embedded in GF(p, e*d) by the least root of its polynomial.

    The image of the subfield generator-of-representation x is the first
    element of the big field, in counter order, that kills the subfield's
    defining polynomial.
    """

    def __init__(self, sup: GF, sub: GF):
        if sup.p != sub.p or sup.k % sub.k:
            raise ValueError("not a subfield")
        self.sup = sup
        self.sub = sub
        self.rel_deg = sup.k // sub.k
        self.root = self._find_root()
        pw = [sup.one]
        for _ in range(sub.k - 1):
            pw.append(sup.mul(pw[-1], self.root))
        self.pows = pw
        self._tr1 = None

    def _find_root(self):
        monic = self.sub.poly + (1,)
        for a in self.sup.elements():
            acc = self.sup.zero
            for c in reversed(monic):
                acc = self.sup.mul(acc, a)
                acc = tuple((v + (c if i == 0 else 0)) % self.sup.p for i, v in enumerate(acc))
            if acc == self.sup.zero:
                return a
        raise AssertionError("subfield polynomial has no root")

    def up(self, a):
        out = self.sup.zero
        for c, w in zip(a, self.pows):
            out = self.sup.add(out, self.sup.smul(c, w))
        return out

    def down(self, a):
        rows = [list(w) for w in self.pows]
        # columns of the embedding matrix are the powers of the root
        mat = [[rows[j][i] for j in range(self.sub.k)] for i in range(self.sup.k)]
        x = _fp_solve(self.sup.p, mat, list(a))
        if x is None:
            raise ValueError("element is not in the subfield")
        return tuple(x)

    def in_image(self, a) -> bool:
        return self.sup.pow(a, self.sub.order) == a if a != self.sup.zero else True

    def trace(self, a):
        q = self.sub.order
        t = self.sup.zero
        cur = a
        for _ in range(self.rel_deg):
            t = self.sup.add(t, cur)
            cur = self.sup.pow(cur, q)
        return self.down(t)

    def norm(self, a):
        q = self.sub.order
        n = self.sup.one
        cur = a
        for _ in range(self.rel_deg):
            n = self.sup.mul(n, cur)
            cur = self.sup.pow(cur, q)
        return self.down(n)

    def trace_one(self):
        """The first big-field element, in counter order, of trace 1."""
        if self._tr1 is None:
            one = self.sub.one
            for a in self.sup.elements():
                if self.trace(a) == one:
                    self._tr1 = a
                    break
            else:
                raise AssertionError("trace is not surjective")
        return self._tr1

    def trace_preimage(self, c):
        """Some x in the big field with relative trace c; deterministic."""
        return self.sup.mul(self.up(c), self.trace_one())


@lru_cache(maxsize=None)
def subfield(p: int, sub_k: int, sup_k: int) -> Subfield:
    return Subfield(field(p, sup_k), field(p, sub_k))


# ---------------------------------------------------------------------------
# F_p-linear maps on a field, used for additive equations like x^sigma - x = s

def plinear_solutions(K: GF, func, target):
    """All solutions x of func(x) == target for an additive map func on K,
    in counter order.  Builds the F_p matrix of func on the power basis."""
    k = K.k
    basis = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
    cols = [func(b) for b in basis]
    mat = [[cols[j][i] for j in range(k)] for i in range(k)]
    part = _fp_solve(K.p, mat, list(target))
    if part is None:
        return []
    part = tuple(part)
    kern = [a for a in K.elements() if func(a) == K.zero]
    sols = sorted((K.add(part, z) for z in kern), key=K.to_int)
    return sols


# ---------------------------------------------------------------------------
# dense polynomials over a GF instance: tuples of field elements, low degree
# first, no trailing zeros, () is the zero polynomial

def ptrim(K, f):
    i = len(f)
    while i and f[i - 1] == K.zero:
        i -= 1
    return tuple(f[:i])


def padd(K, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else K.zero
        b = g[i] if i < len(g) else K.zero
        out.append(K.add(a, b))
    return ptrim(K, out)


def psub(K, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else K.zero
        b = g[i] if i < len(g) else K.zero
        out.append(K.sub(a, b))
    return ptrim(K, out)


def pscale(K, c, f):
    if c == K.zero:
        return ()
    return tuple(K.mul(c, a) for a in f)


def pmul(K, f, g):
    if not f or not g:
        return ()
    out = [K.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == K.zero:
            continue
        for j, b in enumerate(g):
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return ptrim(K, out)


def pdivmod(K, f, g):
    g = ptrim(K, g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(ptrim(K, f))
    dg = len(g) - 1
    lead_inv = K.inv(g[-1])
    q = [K.zero] * max(0, len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = K.mul(f[i], lead_inv)
        if c == K.zero:
            continue
        q[i - dg] = c
        for j in range(dg + 1):
            f[i - dg + j] = K.sub(f[i - dg + j], K.mul(c, g[j]))
    return ptrim(K, q), ptrim(K, f)


def pmod(K, f, g):
    return pdivmod(K, f, g)[1]


def pmonic(K, f):
    f = ptrim(K, f)
    if not f:
        return f
    return pscale(K, K.inv(f[-1]), f)


def pgcd(K, f, g):
    f, g = ptrim(K, f), ptrim(K, g)
    while g:
        f, g = g, pmod(K, f, g)
    return pmonic(K, f)


def ppowmod(K, f, e, mod):
    r = (K.one,)
    f = pmod(K, f, mod)
    while e:
        if e & 1:
            r = pmod(K, pmul(K, r, f), mod)
        f = pmod(K, pmul(K, f, f), mod)
        e >>= 1
    return r


def peval(K, f, a):
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, a), c)
    return acc


def pderiv(K, f):
    out = []
    for i in range(1, len(f)):
        out.append(K.smul(i, f[i]))
    return ptrim(K, out)


def _proot_p(K, f):
    # f = g(x^p); recover g, taking p-th roots of coefficients
    out = []
    for i in range(0, len(f), K.p):
        c = f[i]
        out.append(K.pow(c, K.order // K.p) if c != K.zero else K.zero)
    return tuple(out)


def _pkey(K, f):
    return (len(f),) + tuple(K.to_int(c) for c in f)


def _edf(K, f, d, rng):
    """Equal-degree factorization: f squarefree, all factors of degree d."""
    n = (len(f) - 1) // d
    if n == 1:
        return [f]
    Q = K.order
    while True:
        r = tuple(K.from_int(rng.randrange(Q)) for _ in range(len(f) - 1))
        r = ptrim(K, r)
        if len(r) < 2:
            continue
        if K.p == 2:
            # trace splitting for even order
            m = K.k * d
            t = r
            acc = r
            for _ in range(m - 1):
                acc = pmod(K, pmul(K, acc, acc), f)
                t = padd(K, t, acc)
            g = pgcd(K, t, f)
        else:
            s = ppowmod(K, r, (Q ** d - 1) // 2, f)
            g = pgcd(K, psub(K, s, (K.one,)), f)
        if 0 < len(g) - 1 < len(f) - 1:
            h = pdivmod(K, f, g)[0]
            return _edf(K, g, d, rng) + _edf(K, h, d, rng)


def pfactor(K, f, rng):
    """Full factorization into monic irreducibles.

    Returns a list of (factor, multiplicity), sorted by degree then by the
    coefficient encoding, so the output does not depend on the rng.
    """
    f = ptrim(K, f)
    if len(f) < 2:
        raise ValueError("cannot factor a constant")
    f = pmonic(K, f)
    work = [(f, 1)]
    sqfree = []
    # squarefree decomposition, char p aware
    while work:
        g, mult = work.pop()
        if len(g) < 2:
            continue
        dg = pderiv(K, g)
        if not dg:
            work.append((_proot_p(K, g), mult * K.p))
            continue
        c = pgcd(K, g, dg)
        w = pdivmod(K, g, c)[0]
        i = 1
        while len(w) > 1:
            y = pgcd(K, w, c)
            fac = pdivmod(K, w, y)[0]
            if len(fac) > 1:
                sqfree.append((fac, mult * i))
            c = pdivmod(K, c, y)[0]
            w = y
            i += 1
        if len(c) > 1:
            work.append((c, mult))
    # distinct degree + equal degree on each squarefree part
    found: dict[tuple, int] = {}
    for g, mult in sqfree:
        Q = K.order
        h = (K.zero, K.one)
        d = 0
        rest = g
        while len(rest) - 1 > 2 * d:
            d += 1
            h = ppowmod(K, h, Q, rest)
            gd = pgcd(K, psub(K, h, (K.zero, K.one)), rest)
            if len(gd) > 1:
                for irr in _edf(K, gd, d, rng):
                    key = _pkey(K, irr)
                    found[key] = found.get(key, 0) + mult
                rest = pdivmod(K, rest, gd)[0]
                h = pmod(K, h, rest)
        if len(rest) > 1:
            key = _pkey(K, rest)
            found[key] = found.get(key, 0) + mult
    out = []
    for key in sorted(found):
        poly = tuple(K.from_int(n) for n in key[1:])
        out.append((poly, found[key]))
    return out
