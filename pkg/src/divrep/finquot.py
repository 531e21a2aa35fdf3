"""Finite quotients of D* and D^1, and generic finite-group services.

The ambient group is Gamma_f = D*/<p_F>(1+P_D^f).  Elements are normal
forms (eps, digits): eps is the p_D-exponent modulo d, and digits is the
f-tuple of residue digits of the unit part.  Multiplication lifts normal
forms into the division order, multiplies there, and renormalizes; every
product is memoized.  Element indices are positions in the sorted key list,
so all downstream data is reproducible.

Everything else - the norm-one subgroup Delta_f, the paper's inducing
subgroups, derived subgroups, transversals - is a GroupView: a subset of
ambient indices closed under the ambient operations.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .quatorder import algebra

SIZE_LIMIT = 10 ** 5


class AmbientGroup:
    """Gamma_f with lazy lifted arithmetic."""

    def __init__(self, kind, p, e, d, r, f):
        self.kind, self.p, self.e, self.d, self.r, self.f = kind, p, e, d, r, f
        self.q = p ** e
        self.alg = algebra(kind, p, e, d, r, f + d + 2)
        kD = self.alg.kD
        order = d * (kD.order - 1) * kD.order ** (f - 1)
        if order > SIZE_LIMIT:
            raise ValueError(f"group of order {order} exceeds the size limit {SIZE_LIMIT}")
        keys = []
        digit_pool = [kD.from_int(n) for n in range(kD.order)]
        for eps in range(d):
            for lead in digit_pool[1:]:
                for rest in itertools.product(digit_pool, repeat=f - 1):
                    keys.append((eps, (lead,) + rest))
        # index order is lexicographic on (eps, digit integer values), so the
        # identity is element 0 and the p_D class leads its coset
        keys.sort(key=lambda k: (k[0],) + tuple(kD.to_int(s) for s in k[1]))
        self.keys = keys
        self.order = len(keys)
        assert self.order == order
        self.index = {k: i for i, k in enumerate(keys)}
        self.one = self.index[(0, (kD.one,) + (kD.zero,) * (f - 1))]
        self._lifts: dict[int, object] = {}
        self._mul: dict[tuple, int] = {}
        self._inv: dict[int, int] = {}
        self._orders: dict[int, int] = {}

    def __repr__(self):
        return f"Gamma_{self.f}(q={self.q}, d={self.d}, {self.kind})"

    def key(self, i):
        return self.keys[i]

    def eps(self, i):
        return self.keys[i][0]

    def digits(self, i):
        return self.keys[i][1]

    def lift(self, i):
        x = self._lifts.get(i)
        if x is None:
            eps, digs = self.keys[i]
            x = self.alg.from_pd_digits(digs)
            if eps:
                x = self.alg.pd_shift_left(x, eps)
            self._lifts[i] = x
        return x

    def _normalize(self, x):
        w = self.alg.pd_val(x)
        eps = w % self.d
        u = self.alg.pd_shift_left(x, -w)
        digs = tuple(self.alg.pd_digits(u, self.f))
        return self.index[(eps, digs)]

    def mul(self, i, j):
        k = self._mul.get((i, j))
        if k is None:
            k = self._normalize(self.alg.mul(self.lift(i), self.lift(j)))
            self._mul[(i, j)] = k
        return k

    def inv(self, i):
        k = self._inv.get(i)
        if k is None:
            k = self._normalize(self.alg.inv(self.lift(i)))
            self._inv[i] = k
            self._inv[k] = i
        return k

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def comm(self, g, h):
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def pow(self, i, n):
        if n < 0:
            i, n = self.inv(i), -n
        acc = self.one
        while n:
            if n & 1:
                acc = self.mul(acc, i)
            i = self.mul(i, i)
            n >>= 1
        return acc

    def order_of(self, i):
        o = self._orders.get(i)
        if o is None:
            o = 1
            cur = i
            while cur != self.one:
                cur = self.mul(cur, i)
                o += 1
            self._orders[i] = o
        return o


@lru_cache(maxsize=None)
def ambient_group(kind, p, e, d, r, f) -> AmbientGroup:
    return AmbientGroup(kind, p, e, d, r, f)


class GroupView:
    """A subgroup of an ambient group, as a sorted index tuple."""

    def __init__(self, ambient, indices, tag=""):
        self.ambient = ambient
        self.indices = tuple(sorted(indices))
        self.index_set = frozenset(self.indices)
        self.tag = tag
        self._gens = None
        self._classes = None

    @property
    def order(self):
        return len(self.indices)

    @property
    def one(self):
        return self.ambient.one

    def __repr__(self):
        return f"GroupView({self.tag or 'untagged'}, order {self.order})"

    def __contains__(self, i):
        return i in self.index_set

    def elements(self):
        return self.indices

    def mul(self, i, j):
        return self.ambient.mul(i, j)

    def inv(self, i):
        return self.ambient.inv(i)

    def pow(self, i, n):
        return self.ambient.pow(i, n)

    def conj(self, g, x):
        return self.ambient.conj(g, x)

    def order_of(self, i):
        return self.ambient.order_of(i)

    # -- construction

    @staticmethod
    def closure(ambient, seed, tag=""):
        """Subgroup generated by seed indices."""
        G = ambient
        seen = {G.one}
        frontier = [G.one]
        gens = [s for s in dict.fromkeys(seed) if s != G.one]
        for s in gens:
            if s not in seen:
                seen.add(s)
                frontier.append(s)
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = G.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return GroupView(G, seen, tag)

    def normal_closure(self, seed, tag=""):
        """Smallest subgroup of self containing seed and normalized by it."""
        G = self.ambient
        gens = self.generators()
        current = set(seed) - {G.one}
        while True:
            view = GroupView.closure(G, current, tag)
            new = set()
            for g in gens:
                for x in view.indices:
                    y = G.conj(g, x)
                    if y not in view.index_set:
                        new.add(y)
            if not new:
                return GroupView(G, view.index_set, tag)
            current = set(view.indices) | new

    def generators(self):
        """Small deterministic generating set (greedy scan)."""
        if self._gens is None:
            G = self.ambient
            gens = []
            have = {G.one}
            for i in self.indices:
                if i in have:
                    continue
                gens.append(i)
                have = GroupView.closure(G, gens).index_set
                if len(have) == self.order:
                    break
            self._gens = tuple(gens)
        return self._gens

    # -- services

    def conjugacy_classes(self):
        """Sorted by (size, least member); each class a sorted tuple."""
        if self._classes is None:
            G = self.ambient
            gens = self.generators()
            unseen = set(self.indices)
            classes = []
            for i in self.indices:
                if i not in unseen:
                    continue
                orbit = {i}
                frontier = [i]
                while frontier:
                    x = frontier.pop()
                    for g in gens:
                        y = G.conj(g, x)
                        if y not in orbit:
                            orbit.add(y)
                            frontier.append(y)
                unseen -= orbit
                classes.append(tuple(sorted(orbit)))
            classes.sort(key=lambda c: (len(c), c[0]))
            self._classes = classes
        return self._classes

    def class_of(self, i):
        for c in self.conjugacy_classes():
            if i in c:
                return c
        raise KeyError(i)

    def center(self):
        G = self.ambient
        gens = self.generators()
        cen = [i for i in self.indices
               if all(G.mul(i, g) == G.mul(g, i) for g in gens)]
        return GroupView(G, cen, f"Z({self.tag})")

    def derived_subgroup(self):
        G = self.ambient
        gens = self.generators()
        comms = [G.comm(a, b) for a in gens for b in gens]
        return self.normal_closure(comms, f"[{self.tag},{self.tag}]")

    def left_transversal(self, H):
        """Deterministic: the least index in each coset gH."""
        G = self.ambient
        seen = set()
        reps = []
        for i in self.indices:
            if i in seen:
                continue
            reps.append(i)
            for h in H.indices:
                seen.add(G.mul(i, h))
        return reps

    def residue_kernel(self):
        """Kernel of the leading-residue map to k_D*."""
        G = self.ambient
        kD = G.alg.kD
        mem = [i for i in self.indices
               if G.eps(i) == 0 and G.digits(i)[0] == kD.one]
        return GroupView(G, mem, "ker rho")

    def is_subgroup_of(self, other):
        return self.index_set <= other.index_set

    def is_normal_in(self, other):
        G = self.ambient
        return all(G.conj(g, x) in self.index_set
                   for g in other.generators() for x in self.indices)

    def intersection(self, other, tag=""):
        return GroupView(self.ambient, self.index_set & other.index_set, tag)

    def abelianization(self):
        """Invariant factors of self/[self,self], largest first."""
        Q = QuotientGroup(self, self.derived_subgroup())
        return AbelianStructure(Q).invariants

    def summary_json(self):
        classes = self.conjugacy_classes()
        return {
            "order": self.order,
            "num_classes": len(classes),
            "class_sizes": sorted(len(c) for c in classes),
            "abelianization": list(self.abelianization()),
        }


class QuotientGroup:
    """G/N for N normal in G; elements are least-index coset representatives."""

    def __init__(self, G: GroupView, N: GroupView):
        assert N.is_subgroup_of(G) and N.is_normal_in(G), "quotient needs a normal subgroup"
        self.parent = G
        self.normal = N
        amb = G.ambient
        coset_of = {}
        reps = []
        for i in G.indices:
            if i in coset_of:
                continue
            members = sorted(amb.mul(i, n) for n in N.indices)
            rep = members[0]
            reps.append(rep)
            for m in members:
                coset_of[m] = rep
        self.reps = sorted(reps)
        self.coset_of = coset_of
        self.one = coset_of[amb.one]
        self.order = len(self.reps)

    def project(self, i):
        return self.coset_of[i]

    def mul(self, a, b):
        return self.coset_of[self.parent.ambient.mul(a, b)]

    def inv(self, a):
        return self.coset_of[self.parent.ambient.inv(a)]

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        acc = self.one
        while n:
            if n & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            n >>= 1
        return acc

    def elements(self):
        return self.reps

    def order_of(self, a):
        o = 1
        cur = a
        while cur != self.one:
            cur = self.mul(cur, a)
            o += 1
        return o


class AbelianStructure:
    """Cyclic decomposition of a finite abelian group, invariant factors in
    descending order, with discrete logarithms on the chosen basis.

    The basis starts from an element of maximal order; each later generator
    is corrected by y <- y * x^(-c/n) so the decomposition is direct (the
    divisibility n | c is forced by the order bookkeeping).
    """

    def __init__(self, A):
        self.A = A
        self.basis, self.invariants = self._build(A)
        self._dlog = self._dlog_table()

    def _build(self, A):
        els = list(A.elements())
        for a in els:
            for b in els:
                if A.mul(a, b) != A.mul(b, a):
                    raise ValueError("group is not abelian")
        basis = []
        invariants = []
        # work with explicit subgroup chains: span of chosen basis so far
        chosen = []
        span = {A.one}
        while len(span) < A.order:
            best, besto = None, 0
            for x in A.elements():
                o = self._order_mod(A, x, span)
                if o > besto:
                    best, besto = x, o
            x = best
            # correct x so that its order in A equals its order mod span
            x = self._correct(A, x, besto, chosen, invariants)
            chosen.append(x)
            invariants.append(besto)
            span = self._span(A, chosen)
        return chosen, invariants

    @staticmethod
    def _order_mod(A, x, span):
        o = 1
        cur = x
        while cur not in span:
            cur = A.mul(cur, x)
            o += 1
        return o

    @staticmethod
    def _span(A, gens):
        out = {A.one}
        for g in gens:
            cur_list = list(out)
            acc = g
            while acc != A.one:
                for y in cur_list:
                    out.add(A.mul(acc, y))
                acc = A.mul(acc, g)
        return out

    def _correct(self, A, x, n, chosen, invariants):
        # x^n lies in the span of earlier generators: x^n = prod g_i^(c_i);
        # replace x by x * prod g_i^(-c_i/n) to split the extension
        if not chosen:
            return x
        xn = A.pow(x, n)
        if xn == A.one:
            return x
        for exps in itertools.product(*[range(m) for m in invariants]):
            acc = A.one
            for g, c in zip(chosen, exps):
                acc = A.mul(acc, A.pow(g, c))
            if acc == xn:
                fix = A.one
                for g, c, m in zip(chosen, exps, invariants):
                    c = c % m
                    if c:
                        assert c % n == 0, "basis correction divisibility failed"
                        fix = A.mul(fix, A.pow(g, -(c // n) % m))
                return A.mul(x, fix)
        raise AssertionError("power not found in span")

    def _dlog_table(self):
        table = {}
        ranges = [range(m) for m in self.invariants]
        for exps in itertools.product(*ranges):
            acc = self.A.one
            for g, c in zip(self.basis, exps):
                acc = self.A.mul(acc, self.A.pow(g, c))
            if acc not in table:
                table[acc] = exps
        assert len(table) == self.A.order, "dlog table incomplete"
        return table

    def dlog(self, x):
        return self._dlog[x]

    @property
    def exponent(self):
        return self.invariants[0] if self.invariants else 1


# ---------------------------------------------------------------------------
# the standard quotients and subgroups

def _nrd_is_one_at_level(G: AmbientGroup, i, level):
    alg = G.alg
    n = alg.nrd(G.lift(i))
    return alg.F.eq_mod(n, alg.F.one(), level)


@lru_cache(maxsize=None)
def gamma_group(kind, p, e, d, f, r=1) -> GroupView:
    G = ambient_group(kind, p, e, d, r, f)
    return GroupView(G, range(G.order), f"Gamma_{f}")


@lru_cache(maxsize=None)
def delta_group(kind, p, e, d, f, r=1) -> GroupView:
    """Image of D^1 in Gamma_f: norm-one unit classes."""
    G = ambient_group(kind, p, e, d, r, f)
    level = -(-f // d)
    members = [i for i in range(G.order)
               if G.eps(i) == 0 and _nrd_is_one_at_level(G, i, level)]
    return GroupView(G, members, f"Delta_{f}")


def _basis_digits(K):
    """F_p-basis of the field K as single-digit residues."""
    return [tuple(1 if j == i else 0 for j in range(K.k)) for i in range(K.k)]


def unit_level_gens(G: AmbientGroup, start, only_even_kD=False, kF_values=False):
    """Index generators for 1+P_D^start (or its E/F slices) inside Gamma_f."""
    alg = G.alg
    kD, kF = alg.kD, alg.kF
    sub = alg.sub_kF
    gens = []
    for m in range(max(1, start), G.f):
        if only_even_kD and m % alg.d:
            continue
        basis = [sub.up(b) for b in _basis_digits(kF)] if kF_values else _basis_digits(kD)
        for s in basis:
            digs = [kD.one] + [kD.zero] * (G.f - 1)
            digs[m] = s
            gens.append(G.index[(0, tuple(digs))])
    return gens


def teich_unit_index(G: AmbientGroup, c):
    """Index of the Teichmuller class of c in k_D*."""
    alg = G.alg
    x = alg.from_e(alg.E.teichmuller(c))
    digs = tuple(alg.pd_digits(x, G.f))
    return G.index[(0, digs)]


def unit_group_view(G: AmbientGroup) -> GroupView:
    return GroupView(G, [i for i in range(G.order) if G.eps(i) == 0], "U_D")


def u_level_view(G: AmbientGroup, k: int) -> GroupView:
    """Image of 1 + P_D^k, for k >= 1."""
    assert k >= 1
    kD = G.alg.kD
    mem = []
    for i in range(G.order):
        if G.eps(i):
            continue
        digs = G.digits(i)
        if digs[0] == kD.one and all(digs[m] == kD.zero for m in range(1, min(k, G.f))):
            mem.append(i)
    return GroupView(G, mem, f"U^{k}")


def paper_subgroups(G: AmbientGroup) -> dict:
    """The inducing subgroups for level f, degree 2: J plus, at odd f, the
    Heisenberg pair J' and J'' and the normal character domain C."""
    if G.d != 2:
        raise ValueError("inducing subgroups are a degree-2 construction")
    alg = G.alg
    f = G.f
    kD, kF = alg.kD, alg.kF
    out = {}
    # E* image (unramified): Teichmuller generator and even-level one-units
    e_gens = [teich_unit_index(G, kD.gen)] + unit_level_gens(G, 1, only_even_kD=True)
    out["E_unram"] = GroupView.closure(G, e_gens, "E*_unram")
    # F* image: Teichmuller of k_F generator and even-level k_F one-units
    f_gens = ([teich_unit_index(G, alg.sub_kF.up(kF.gen))] if kF.order > 2 else []) \
        + unit_level_gens(G, 1, only_even_kD=True, kF_values=True)
    out["F_units"] = GroupView.closure(G, f_gens, "F*")
    # C = F*(1+P_D^ceil(f/2)): the normal domain of the character chi
    half_up = -(-f // 2)
    c_gens = f_gens + unit_level_gens(G, half_up)
    out["C"] = GroupView.closure(G, c_gens, "C")
    if f % 2 == 0:
        if G.kind == "eq" and G.p == 2:
            raise ValueError(
                "even level over equal characteristic 2 needs a separable "
                "ramified quadratic; use the p-adic base")
        pd_idx = G.index[(1, (kD.one,) + (kD.zero,) * (f - 1))]
        er_gens = ([teich_unit_index(G, alg.sub_kF.up(kF.gen))] if kF.order > 2 else []) \
            + unit_level_gens(G, 1, kF_values=True) + [pd_idx]
        out["E_ram"] = GroupView.closure(G, er_gens, "E*_ram")
        j_gens = er_gens + unit_level_gens(G, f // 2)
        out["J"] = GroupView.closure(G, j_gens, "J")
    else:
        half = (f - 1) // 2
        j_gens = e_gens + (unit_level_gens(G, half) if half else [])
        out["J"] = GroupView.closure(G, j_gens, "J")
        if half:
            pe_gens = unit_level_gens(G, 1, only_even_kD=True)
            jp_gens = f_gens + pe_gens + unit_level_gens(G, half)
            jpp_gens = f_gens + pe_gens + unit_level_gens(G, half + 1)
            out["J1"] = GroupView.closure(G, jp_gens, "J'")
            out["J2"] = GroupView.closure(G, jpp_gens, "J''")
    return out
