"""Module splitting over finite fields.

Spinning and Norton-style certification for modules given by square matrices
over a GF instance, plus the univariate polynomial factorization the charpoly
splitting step needs.  Matrices act on row vectors from the right, so a
submodule is a row space closed under v -> v*A; the transpose action certifies
irreducibility from the dual side.

Everything is deterministic given the Random instance passed in.
"""

from __future__ import annotations

from .linalg import Echelon, charpoly, mat_add, mat_mul, nullity, nullspace

# ---------------------------------------------------------------------------
# polynomials over GF(p^k): lists of field elements, low degree first

def _p_trim(F, f):
    while f and f[-1] == F.zero:
        f.pop()
    return f


def _p_monic(F, f):
    if not f:
        return f
    inv = F.inv(f[-1])
    return [F.mul(inv, c) for c in f]


def _p_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != F.zero:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _p_trim(F, out)


def _p_divmod(F, a, b):
    a = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    q = [F.zero] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = F.mul(a[i], inv)
        if c != F.zero:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]))
    return _p_trim(F, q), _p_trim(F, a)


def _p_mod(F, a, b):
    return _p_divmod(F, a, b)[1]


def _p_gcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _p_mod(F, a, b)
    return _p_monic(F, a)


def _p_powmod(F, a, e, m):
    r = [F.one]
    a = _p_mod(F, a, m)
    while e:
        if e & 1:
            r = _p_mod(F, _p_mul(F, r, a), m)
        a = _p_mod(F, _p_mul(F, a, a), m)
        e >>= 1
    return r


def _p_deriv(F, f):
    out = [F.smul(i, c) for i, c in enumerate(f)][1:]
    return _p_trim(F, out)


def _p_pth_root(F, f):
    # f = g(x^p); over GF(p^k) the coefficient root is the (k-1)-fold Frobenius
    p = F.p
    return [F.frob(f[i], F.k - 1) for i in range(0, len(f), p)]


def _rand_poly(F, deg, rng):
    return _p_trim(F, [F.from_int(rng.randrange(F.order)) for _ in range(deg + 1)])


def _equal_degree_split(F, f, d, rng):
    """One proper monic factor of f, all of whose irreducible factors have
    degree d and there are at least two of them.  Cantor-Zassenhaus."""
    n = len(f) - 1
    q = F.order
    while True:
        t = _rand_poly(F, rng.randrange(1, n), rng)
        if not t:
            continue
        g = _p_gcd(F, f, t)
        if 1 < len(g) <= n:
            return g
        if F.p == 2:
            # trace map over GF(2^(k*d))
            h = list(t)
            acc = list(t)
            for _ in range(F.k * d - 1):
                acc = _p_powmod(F, acc, 2, f)
                h = _p_trim(F, [F.add(x, y) for x, y in
                                zip(h + [F.zero] * len(acc), acc + [F.zero] * len(h))])
            g = _p_gcd(F, f, h)
        else:
            h = _p_powmod(F, t, (q ** d - 1) // 2, f)
            h = list(h)
            if h:
                h[0] = F.sub(h[0], F.one)
            else:
                h = [F.neg(F.one)]
            g = _p_gcd(F, f, _p_trim(F, h))
        if 1 < len(g) <= n:
            return g


def poly_factor(F, f, rng):
    """Monic irreducible factors with multiplicity, sorted deterministically."""
    f = _p_monic(F, list(f))
    factors = {}

    def add(g, mult):
        g = tuple(g)
        factors[g] = factors.get(g, 0) + mult

    def squarefree(g, mult):
        while len(g) > 1:
            d = _p_deriv(F, g)
            if not d:
                squarefree(_p_pth_root(F, g), mult * F.p)
                return
            c = _p_gcd(F, g, d)
            w = _p_divmod(F, g, c)[0]
            # w is the squarefree part; peel multiplicities
            i = 1
            while len(w) > 1:
                y = _p_gcd(F, w, c)
                z = _p_divmod(F, w, y)[0]
                if len(z) > 1:
                    ddf(z, mult * i)
                c = _p_divmod(F, c, y)[0]
                w = y
                i += 1
            g = c

    def ddf(g, mult):
        # distinct degree, then equal degree
        d = 1
        h = [F.zero, F.one]
        while len(g) - 1 >= 2 * d:
            h = _p_powmod(F, h, F.order, g)
            sub = list(h)
            while len(sub) < 2:
                sub.append(F.zero)
            sub[1] = F.sub(sub[1], F.one)
            w = _p_gcd(F, g, _p_trim(F, sub))
            if len(w) > 1:
                edf(w, d, mult)
                g = _p_divmod(F, g, w)[0]
                h = _p_mod(F, h, g)
            d += 1
        if len(g) > 1:
            add(g, mult)

    def edf(g, d, mult):
        if len(g) - 1 == d:
            add(g, mult)
            return
        u = _equal_degree_split(F, g, d, rng)
        edf(u, d, mult)
        edf(_p_divmod(F, g, u)[0], d, mult)

    squarefree(f, 1)
    out = sorted(factors.items(),
                 key=lambda kv: (len(kv[0]), [F.to_int(c) for c in kv[0]]))
    return out


def poly_eval_mat(F, f, A):
    """f(A) by Horner."""
    n = len(A)
    out = [[f[-1] if i == j else F.zero for j in range(n)] for i in range(n)]
    for c in reversed(f[:-1]):
        out = mat_mul(F, out, A)
        for i in range(n):
            out[i][i] = F.add(out[i][i], c)
    return out


# ---------------------------------------------------------------------------
# row-action module utilities

def vec_mat(F, v, A):
    n = len(A[0])
    out = [F.zero] * n
    for i, x in enumerate(v):
        if x != F.zero:
            row = A[i]
            for j in range(n):
                if row[j] != F.zero:
                    out[j] = F.add(out[j], F.mul(x, row[j]))
    return out


def spin(F, mats, seeds):
    """Echelonized basis of the submodule of row space generated by seeds.

    Queue vectors are kept raw; the span argument only needs every enqueued
    vector to be multiplied through once."""
    n = len(mats[0])
    ech = Echelon(F, n)
    queue = []
    for v in seeds:
        if ech.add(v):
            queue.append(list(v))
    while queue:
        v = queue.pop()
        for A in mats:
            w = vec_mat(F, v, A)
            if ech.add(w):
                queue.append(w)
    return [list(r) for r in ech.rows]


def _coords(F, basis, pivots, v):
    v = list(v)
    out = []
    for row, pc in zip(basis, pivots):
        c = v[pc]
        out.append(c)
        if c != F.zero:
            for j in range(len(v)):
                v[j] = F.sub(v[j], F.mul(c, row[j]))
    assert all(x == F.zero for x in v), "vector not in span"
    return out


def sub_quot_actions(F, mats, basis):
    """Restrict and coinduce the action to an invariant row space.

    basis must be echelonized rows spanning a submodule.  Returns
    (sub_mats, quot_mats)."""
    n = len(mats[0])
    pivots = [next(j for j, x in enumerate(row) if x != F.zero) for row in basis]
    pivset = set(pivots)
    comp = [j for j in range(n) if j not in pivset]
    full = [list(row) for row in basis]
    for j in comp:
        v = [F.zero] * n
        v[j] = F.one
        full.append(v)
    k = len(basis)
    subs, quots = [], []
    for A in mats:
        S = [_coords(F, basis, pivots, vec_mat(F, v, A)) for v in basis]
        subs.append(S)
        Q = []
        for v in full[k:]:
            w = vec_mat(F, v, A)
            # reduce away dependence on the submodule, keep complement coords
            for row, pc in zip(basis, pivots):
                c = w[pc]
                if c != F.zero:
                    for j in range(n):
                        w[j] = F.sub(w[j], F.mul(c, row[j]))
            Q.append([w[j] for j in comp])
        quots.append(Q)
    return subs, quots


def random_algebra_element(F, mats, rng):
    pool = list(mats)
    for _ in range(2):
        a = rng.randrange(len(mats))
        b = rng.randrange(len(mats))
        pool.append(mat_mul(F, mats[a], mats[b]))
    n = len(mats[0])
    out = [[F.zero] * n for _ in range(n)]
    for A in pool:
        c = F.from_int(rng.randrange(F.order))
        if c != F.zero:
            out = mat_add(F, out, [[F.mul(c, x) for x in row] for row in A])
    return out


def split_once(F, mats, rng, tries=30):
    """One Meataxe step.

    Returns ("split", basis) with basis a proper nonzero invariant row space,
    or ("irreducible", certificate).  The certificate records the algebra
    element and charpoly factor that satisfied Norton's criterion."""
    n = len(mats[0])
    if n == 1:
        return ("irreducible", {"dim": 1})
    transposed = [[[A[i][j] for i in range(n)] for j in range(n)] for A in mats]
    for attempt in range(tries):
        N = random_algebra_element(F, mats, rng)
        cp = charpoly(F, N)
        for fac, _mult in poly_factor(F, list(cp), rng):
            fN = poly_eval_mat(F, list(fac), N)
            ker = nullspace(F, [list(r) for r in zip(*fN)])  # left kernel: v*fN = 0
            if not ker:
                continue
            W = spin(F, mats, [ker[0]])
            if len(W) < n:
                return ("split", W)
            if len(ker) == len(fac) - 1:
                # multiplicity-one factor: Norton's dual check decides
                fNt = [[fN[i][j] for i in range(n)] for j in range(n)]
                kert = nullspace(F, [list(r) for r in zip(*fNt)])
                Wd = spin(F, transposed, [kert[0]])
                if len(Wd) == n:
                    return ("irreducible", {
                        "dim": n,
                        "attempt": attempt,
                        "factor_degree": len(fac) - 1,
                        "kernel_dim": len(ker),
                    })
                # perp of the dual submodule is invariant for the main action
                perp = nullspace(F, Wd)
                basis = spin(F, mats, [list(v) for v in perp])
                assert 0 < len(basis) < n, "dual splitting produced no submodule"
                return ("split", basis)
    raise RuntimeError(f"meataxe failed to decide a dim-{n} module in {tries} tries")


def composition_factors(F, mats, rng):
    """Leaf factors of any composition series, as lists of action matrices."""
    out = []
    stack = [mats]
    while stack:
        cur = stack.pop()
        verdict, payload = split_once(F, cur, rng)
        if verdict == "irreducible":
            out.append(cur)
        else:
            subs, quots = sub_quot_actions(F, cur, payload)
            stack.append(subs)
            stack.append(quots)
    return out


def is_irreducible_mats(F, mats, rng):
    verdict, payload = split_once(F, mats, rng)
    return verdict == "irreducible", payload


def hom_space_dim(F, mats_a, mats_b):
    """dim of {X : X A_i = B_i X}, i.e. intertwiners from the A-module to the
    B-module under the column-action convention."""
    na, nb = len(mats_a[0]), len(mats_b[0])
    rows = []
    for A, B in zip(mats_a, mats_b):
        for r in range(nb):
            for s in range(na):
                row = [F.zero] * (na * nb)
                for k in range(na):
                    row[r * na + k] = F.add(row[r * na + k], A[k][s])
                for k in range(nb):
                    row[k * na + s] = F.sub(row[k * na + s], B[r][k])
                rows.append(row)
    if not rows:
        return na * nb
    return nullity(F, rows)
