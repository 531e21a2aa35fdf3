"""Dense exact linear algebra over any coefficient field from coeffs.

Matrices are tuples/lists of rows of scalars.  Pivoting always takes the
first nonzero entry, so every routine is deterministic.
"""

from __future__ import annotations


def identity(F, n):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def zeros(F, nr, nc):
    return [[F.zero] * nc for _ in range(nr)]


def mat_add(F, A, B):
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(F, A, B):
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(F, c, A):
    return [[F.mul(c, a) for a in row] for row in A]


def mat_mul(F, A, B):
    nr, ni, nc = len(A), len(B), len(B[0])
    Bt = [[B[k][j] for k in range(ni)] for j in range(nc)]
    out = []
    for row in A:
        orow = []
        for col in Bt:
            acc = F.zero
            for a, b in zip(row, col):
                acc = F.add(acc, F.mul(a, b))
            orow.append(acc)
        out.append(orow)
    return out


def mat_vec(F, A, v):
    out = []
    for row in A:
        acc = F.zero
        for a, b in zip(row, v):
            acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out


def mat_pow(F, A, e):
    n = len(A)
    R = identity(F, n)
    while e:
        if e & 1:
            R = mat_mul(F, R, A)
        A = mat_mul(F, A, A)
        e >>= 1
    return R


def transpose(A):
    return [list(col) for col in zip(*A)]


def trace(F, A):
    t = F.zero
    for i in range(len(A)):
        t = F.add(t, A[i][i])
    return t


def mat_eq(A, B):
    return all(ra == rb for ra, rb in zip(A, B)) and len(A) == len(B)


def rref(F, M):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    m = [list(r) for r in M]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    piv = []
    r = 0
    for c in range(nc):
        sel = None
        for i in range(r, nr):
            if not F.is_zero(m[i][c]):
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, v) for v in m[r]]
        for i in range(nr):
            if i != r and not F.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == nr:
            break
    return m, piv


def rank(F, M):
    if not M:
        return 0
    return len(rref(F, M)[1])


def nullity(F, M):
    if not M:
        return 0
    return len(M[0]) - len(rref(F, M)[1])


def nullspace(F, M):
    """Basis of the right kernel, one vector per free column, deterministic."""
    if not M:
        return []
    nc = len(M[0])
    rows, piv = rref(F, M)
    pivset = set(piv)
    free = [c for c in range(nc) if c not in pivset]
    basis = []
    for fc in free:
        v = [F.zero] * nc
        v[fc] = F.one
        for r, pc in enumerate(piv):
            v[pc] = F.neg(rows[r][fc])
        basis.append(v)
    return basis


def solve(F, M, b):
    """One solution x of M x = b, or None; free variables set to zero."""
    nr = len(M)
    nc = len(M[0]) if nr else 0
    aug = [list(r) + [bb] for r, bb in zip(M, b)]
    rows, piv = rref(F, aug)
    for i in range(len(piv), nr):
        if not F.is_zero(rows[i][nc]):
            return None
    if piv and piv[-1] == nc:
        return None
    x = [F.zero] * nc
    for r, pc in enumerate(piv):
        x[pc] = rows[r][nc]
    return x


def inverse(F, M):
    n = len(M)
    aug = [list(r) + idr for r, idr in zip(M, identity(F, n))]
    rows, piv = rref(F, aug)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rows]


def charpoly(F, A):
    """det(xI - A) by the Berkowitz method, so no divisions are performed.
    Coefficients come back low degree first, monic."""
    n = len(A)
    if n == 0:
        return (F.one,)
    p = [F.one]  # highest degree first
    for k in range(1, n + 1):
        S = [row[: k - 1] for row in A[: k - 1]]
        C = [A[i][k - 1] for i in range(k - 1)]
        R = [A[k - 1][j] for j in range(k - 1)]
        a = A[k - 1][k - 1]
        q = [F.one, F.neg(a)]
        v = C
        for _ in range(k - 1):
            acc = F.zero
            for x, y in zip(R, v):
                acc = F.add(acc, F.mul(x, y))
            q.append(F.neg(acc))
            if len(q) <= k:
                v = mat_vec(F, S, v)
        newp = []
        for i in range(k + 1):
            acc = F.zero
            for j in range(max(0, i - len(p) + 1), min(i + 1, len(q))):
                acc = F.add(acc, F.mul(q[j], p[i - j]))
            newp.append(acc)
        p = newp
    return tuple(reversed(p))


class Echelon:
    """Incremental row space kept in reduced echelon form."""

    def __init__(self, F, ncols):
        self.F = F
        self.ncols = ncols
        self.rows = []
        self.pivots = []

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        F = self.F
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if not F.is_zero(c):
                v = [F.sub(a, F.mul(c, b)) for a, b in zip(v, row)]
        return v

    def add(self, v):
        """Insert v; returns True if it enlarged the space."""
        F = self.F
        v = self.reduce(v)
        pc = next((i for i, a in enumerate(v) if not F.is_zero(a)), None)
        if pc is None:
            return False
        inv = F.inv(v[pc])
        v = [F.mul(inv, a) for a in v]
        for i, row in enumerate(self.rows):
            c = row[pc]
            if not F.is_zero(c):
                self.rows[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(row, v)]
        at = next((i for i, p in enumerate(self.pivots) if p > pc), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, pc)
        return True

    def contains(self, v):
        F = self.F
        return all(F.is_zero(a) for a in self.reduce(v))
