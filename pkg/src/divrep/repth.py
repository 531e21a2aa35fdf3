"""Representations of the finite quotients over exact coefficients.

Characters of abelian (quotients of) subgroups, monomial induction,
restriction and twisting, commutant and Hom dimensions, decomposition into
irreducibles, intertwining sets, the tame and wild induced families, and
entrywise mod-ell reduction.

Coefficient conventions.  Every representation attached to an ambient quotient
lives over one field per (ambient, characteristic): Q(zeta_m) with m the
exponent of the full unit-class group, or GF(ell^k) containing the prime-to-ell
roots of the same order.  That keeps characters, twists and reductions of
different constructions directly comparable.

Decomposition strategy.  Characteristic 0 is handled through exact character
arithmetic; when an actual splitting is required the rep is transported to a
large prime field (P > 10^6, P = 1 mod m, P coprime to the group order), split
there, and the component characters are lifted back along the canonical roots
and re-verified exactly against the characteristic-0 character.  A bad prime
cannot pass the verification, so the mode is exact in outcome; the prime and
seed are recorded.  Coprime positive characteristic splits directly over its
own (splitting) field, and ell | |G| falls back to composition factors.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from fractions import Fraction
from hashlib import sha256

from . import meataxe
from .coeffs import Cyclotomic, GFScalars, reduce_mod_prime
from .finquot import (AbelianStructure, GroupView, QuotientGroup, delta_group,
                      gamma_group, paper_subgroups, teich_unit_index,
                      unit_group_view, unit_level_gens)
from .gf import is_prime
from .linalg import charpoly, mat_mul, nullity, nullspace, rank

DIM_LIMIT = 512


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# coefficient fields per ambient

def ambient_exponent(amb) -> int:
    G = gamma_group(amb.kind, amb.p, amb.e, amb.d, amb.f, amb.r)
    if not hasattr(G, "_exponent"):
        m = 1
        for cls in G.conjugacy_classes():
            o = G.order_of(cls[0])
            m = m * o // math.gcd(m, o)
        G._exponent = m
    return G._exponent


def coeff_field(view: GroupView, char: int = 0):
    """The shared coefficient field for everything inside view's ambient."""
    m = ambient_exponent(view.ambient)
    if char == 0:
        return Cyclotomic(m)
    mprime = m
    while mprime % char == 0:
        mprime //= char
    return GFScalars(char, mprime)


_SUBGROUPS = {}


def inducing_subgroups(amb) -> dict:
    """paper_subgroups, cached per ambient so views keep their warm tables."""
    key = (amb.kind, amb.p, amb.e, amb.d, amb.r, amb.f)
    if key not in _SUBGROUPS:
        _SUBGROUPS[key] = paper_subgroups(amb)
    return _SUBGROUPS[key]


def surrogate_prime(m: int, group_order: int, attempt: int = 0) -> int:
    """Smallest primes P = 1 mod m beyond max(10^6, |G|), in order."""
    base = max(10 ** 6, group_order + 1)
    P = base + (1 - base) % m
    found = 0
    while True:
        if P > base and is_prime(P):
            if found == attempt:
                return P
            found += 1
        P += m


# ---------------------------------------------------------------------------
# matrix forms: monomial ("m", perm, scalars) or dense ("d", rows)
# column convention: M e_j = scal[j] * e_{perm[j]}

def _form_identity(F, n, monomial=True):
    if monomial:
        return ("m", tuple(range(n)), (F.one,) * n)
    return ("d", tuple(tuple(F.one if i == j else F.zero for j in range(n))
                       for i in range(n)))


def _form_dim(form):
    return len(form[1])


def _form_dense(F, form):
    if form[0] == "d":
        return form[1]
    _, perm, scal = form
    n = len(perm)
    rows = [[F.zero] * n for _ in range(n)]
    for j in range(n):
        rows[perm[j]][j] = scal[j]
    return tuple(tuple(r) for r in rows)


def _form_mul(F, a, b):
    if a[0] == "m" and b[0] == "m":
        _, pa, sa = a
        _, pb, sb = b
        perm = tuple(pa[pb[j]] for j in range(len(pb)))
        scal = tuple(F.mul(sa[pb[j]], sb[j]) for j in range(len(pb)))
        return ("m", perm, scal)
    A = _form_dense(F, a)
    B = _form_dense(F, b)
    return ("d", tuple(tuple(r) for r in mat_mul(F, A, B)))


def _form_trace(F, form):
    if form[0] == "m":
        _, perm, scal = form
        acc = F.zero
        for j, i in enumerate(perm):
            if i == j:
                acc = F.add(acc, scal[j])
        return acc
    acc = F.zero
    for i, row in enumerate(form[1]):
        acc = F.add(acc, row[i])
    return acc


def _form_scale(F, c, form):
    if form[0] == "m":
        return ("m", form[1], tuple(F.mul(c, s) for s in form[2]))
    return ("d", tuple(tuple(F.mul(c, x) for x in row) for row in form[1]))


def _form_map(fn, form):
    if form[0] == "m":
        return ("m", form[1], tuple(fn(s) for s in form[2]))
    return ("d", tuple(tuple(fn(x) for x in row) for row in form[1]))


# ---------------------------------------------------------------------------
# generator words

def word_table(view: GroupView):
    """BFS words over view.generators(): idx -> (parent, generator position)."""
    if not hasattr(view, "_words"):
        gens = view.generators()
        table = {view.one: None}
        frontier = [view.one]
        while frontier:
            nxt = []
            for x in frontier:
                for gp, g in enumerate(gens):
                    y = view.mul(x, g)
                    if y not in table:
                        table[y] = (x, gp)
                        nxt.append(y)
            frontier = nxt
        assert len(table) == view.order, "generators do not generate"
        view._words = table
    return view._words


def gen_word(view: GroupView, i) -> list:
    """i as a product of view.generators(), earliest factor first."""
    table = word_table(view)
    out = []
    while table[i] is not None:
        parent, gp = table[i]
        out.append(gp)
        i = parent
    out.reverse()
    return out


# ---------------------------------------------------------------------------

class Character:
    """A one-dimensional representation of a subgroup view.

    Values are stored on every element (evaluation is how well-definedness is
    guaranteed); serialization goes through the values on a generating set."""

    def __init__(self, group: GroupView, field, values: dict, provenance=None):
        self.group = group
        self.field = field
        self.values = values
        self.provenance = provenance or {}

    def value(self, i):
        return self.values[i]

    def is_trivial(self) -> bool:
        one = self.field.one
        return all(v == one for v in self.values.values())

    def restrict(self, H: GroupView) -> "Character":
        assert H.index_set <= self.group.index_set
        vals = {i: self.values[i] for i in H.indices}
        return Character(H, self.field, vals, {"restricted_from": self.provenance})

    def mul(self, other: "Character") -> "Character":
        assert other.group.index_set == self.group.index_set
        vals = {i: self.field.mul(v, other.values[i]) for i, v in self.values.items()}
        return Character(self.group, self.field, vals, {"product": True})

    def conjugated(self, g) -> "Character":
        """x -> value(g x g^-1), a character of g^-1 (domain) g."""
        G = self.group.ambient
        vals = {}
        for i in self.group.indices:
            vals[G.conj(G.inv(g), i)] = self.values[i]
        dom = GroupView(G, tuple(sorted(vals)), self.group.tag + "^g")
        return Character(dom, self.field, vals, {"conjugated": True})

    def generator_values(self):
        return {g: self.values[g] for g in self.group.generators()}

    def fingerprint(self) -> str:
        payload = _canonical({
            "field": self.field.describe(),
            "values": [[i, self.field.scalar_json(self.values[i])]
                       for i in self.group.indices],
        })
        return sha256(payload.encode()).hexdigest()[:16]

    def __eq__(self, other):
        return (isinstance(other, Character)
                and self.group.index_set == other.group.index_set
                and self.field == other.field and self.values == other.values)

    def __hash__(self):
        return hash(self.fingerprint())


def _realizable_part(n: int, char: int) -> int:
    if char == 0:
        return n
    while n % char == 0:
        n //= char
    return n


def characters_of(H: GroupView, field) -> list:
    """All field-valued characters of H (through its abelianization), in the
    deterministic exponent-tuple order."""
    D = H.derived_subgroup()
    Q = QuotientGroup(H, D)
    A = AbelianStructure(Q)
    orders = [_realizable_part(n, field.char) for n in A.invariants]
    roots = [field.root_of_unity(n) if n > 1 else field.one for n in orders]
    # precompute projected dlogs once
    dlogs = {i: A.dlog(Q.project(i)) for i in H.indices}
    out = []
    for exps in itertools.product(*[range(n) for n in orders]):
        vals = {}
        for i in H.indices:
            acc = field.one
            for r, n, e, d in zip(roots, orders, exps, dlogs[i]):
                if n > 1 and e:
                    acc = field.mul(acc, field.pow(r, e * d))
            vals[i] = acc
        out.append(Character(H, field, vals, {"exponents": list(exps)}))
    return out


def abelian_characters(H: GroupView, field) -> list:
    """Characters of an abelian subgroup; errors on non-abelian input."""
    for a in H.indices:
        for b in H.indices:
            if H.mul(a, b) != H.mul(b, a):
                raise ValueError("abelian_characters needs an abelian group")
    return characters_of(H, field)


def character_extensions(A: GroupView, B: GroupView, chi: Character) -> list:
    """All characters of A restricting to chi on B, in enumeration order."""
    assert B.is_subgroup_of(A)
    bset = B.index_set
    out = []
    for cand in characters_of(A, chi.field):
        if all(cand.values[i] == chi.values[i] for i in bset):
            out.append(cand)
    return out


# ---------------------------------------------------------------------------

class MatrixRep:
    """A finite-dimensional representation given by generator images."""

    def __init__(self, group: GroupView, field, images: dict, provenance=None):
        self.group = group
        self.field = field
        self.gens = list(group.generators())
        self.images = {g: images[g] for g in self.gens}
        self.provenance = provenance or {}
        if self.gens:
            self.n = _form_dim(self.images[self.gens[0]])
            self.monomial = all(f[0] == "m" for f in self.images.values())
        else:
            # the trivial group still needs a dimension; callers pass it in
            self.n = self.provenance.get("dim", 1)
            self.monomial = True
        self._mats = {group.one: _form_identity(field, self.n, self.monomial)}
        self._char = None

    @property
    def dim(self):
        return self.n

    def mat_at(self, i):
        got = self._mats.get(i)
        if got is not None:
            return got
        table = word_table(self.group)
        chain = []
        while i not in self._mats:
            parent, gp = table[i]
            chain.append((i, gp))
            i = parent
        cur = self._mats[i]
        for node, gp in reversed(chain):
            cur = _form_mul(self.field, cur, self.images[self.gens[gp]])
            self._mats[node] = cur
        return cur

    def dense_at(self, i):
        return _form_dense(self.field, self.mat_at(i))

    def trace_at(self, i):
        return _form_trace(self.field, self.mat_at(i))

    def character(self) -> dict:
        """Trace at each conjugacy class representative."""
        if self._char is None:
            self._char = {cls[0]: self.trace_at(cls[0])
                          for cls in self.group.conjugacy_classes()}
        return self._char

    def gen_mats(self):
        return [self.dense_at(g) for g in self.gens]

    def restrict(self, H: GroupView) -> "MatrixRep":
        assert H.index_set <= self.group.index_set
        images = {g: self.mat_at(g) for g in H.generators()}
        return MatrixRep(H, self.field, images,
                         {"built": "restriction", "of": self.provenance,
                          "dim": self.n})

    def twist(self, chi: Character) -> "MatrixRep":
        assert chi.group.index_set == self.group.index_set
        images = {g: _form_scale(self.field, chi.value(g), self.mat_at(g))
                  for g in self.gens}
        prov = dict(self.provenance)
        prov["twisted_by"] = chi.fingerprint()
        return MatrixRep(self.group, self.field, images, prov)

    def verify(self, samples: int = 100, seed: int = 0) -> None:
        """Spot-check multiplicativity on random products."""
        rng = random.Random((seed, self.group.order, self.n))
        idx = self.group.indices
        F = self.field
        for _ in range(samples):
            a = idx[rng.randrange(len(idx))]
            b = idx[rng.randrange(len(idx))]
            lhs = _form_dense(F, _form_mul(F, self.mat_at(a), self.mat_at(b)))
            rhs = self.dense_at(self.group.mul(a, b))
            assert lhs == rhs, "generator images violate the multiplication table"
        self.provenance["verified_products"] = samples

    def fingerprint(self) -> str:
        ch = self.character()
        payload = _canonical({
            "field": self.field.describe(),
            "dim": self.n,
            "trace": [[i, self.field.scalar_json(v)] for i, v in sorted(ch.items())],
        })
        return sha256(payload.encode()).hexdigest()[:16]


def character_rep(chi: Character) -> MatrixRep:
    images = {g: ("m", (0,), (chi.value(g),)) for g in chi.group.generators()}
    return MatrixRep(chi.group, chi.field, images,
                     {"built": "character", "dim": 1})


def direct_sum(A: MatrixRep, B: MatrixRep) -> MatrixRep:
    assert A.group.index_set == B.group.index_set and A.field == B.field
    F = A.field
    images = {}
    for g in A.gens:
        fa, fb = A.mat_at(g), B.mat_at(g)
        if fa[0] == "m" and fb[0] == "m":
            perm = fa[1] + tuple(p + A.n for p in fb[1])
            images[g] = ("m", perm, fa[2] + fb[2])
        else:
            da, db = _form_dense(F, fa), _form_dense(F, fb)
            rows = [tuple(r) + (F.zero,) * B.n for r in da]
            rows += [(F.zero,) * A.n + tuple(r) for r in db]
            images[g] = ("d", tuple(rows))
    return MatrixRep(A.group, F, images, {"built": "direct_sum"})


# ---------------------------------------------------------------------------
# induction and restriction

def _coset_table(G: GroupView, H: GroupView):
    T = G.left_transversal(H)
    tab = {}
    for a, t in enumerate(T):
        for h in H.indices:
            tab[G.mul(t, h)] = (a, h)
    assert len(tab) == G.order, "transversal does not cover the group"
    return T, tab


def induce(G: GroupView, H: GroupView, rho) -> MatrixRep:
    """Compact induction on the deterministic least-index transversal."""
    assert H.is_subgroup_of(G)
    T, tab = _coset_table(G, H)
    c = len(T)
    if isinstance(rho, Character):
        F = rho.field
        images = {}
        for g in G.generators():
            perm, scal = [], []
            for t in T:
                a, h = tab[G.mul(g, t)]
                perm.append(a)
                scal.append(rho.value(h))
            images[g] = ("m", tuple(perm), tuple(scal))
        prov = {"built": "induced", "index": c, "from_order": H.order,
                "inducing_dim": 1}
        return MatrixRep(G, F, images, prov)
    F = rho.field
    d = rho.n
    n = c * d
    if n > DIM_LIMIT:
        raise ValueError(f"induced dimension {n} exceeds the {DIM_LIMIT} limit")
    images = {}
    for g in G.generators():
        rows = [[F.zero] * n for _ in range(n)]
        for j, t in enumerate(T):
            a, h = tab[G.mul(g, t)]
            block = rho.dense_at(h)
            for r in range(d):
                for s in range(d):
                    rows[a * d + r][j * d + s] = block[r][s]
        images[g] = ("d", tuple(tuple(r) for r in rows))
    prov = {"built": "induced", "index": c, "from_order": H.order,
            "inducing_dim": d}
    return MatrixRep(G, F, images, prov)


# ---------------------------------------------------------------------------
# exact character arithmetic (characteristic 0)

def _char_values(rep_or_chi):
    if isinstance(rep_or_chi, Character):
        G = rep_or_chi.group
        return G, {cls[0]: rep_or_chi.value(cls[0])
                   for cls in G.conjugacy_classes()}
    return rep_or_chi.group, rep_or_chi.character()


def inner_product(A, B) -> int:
    """<chi_A, chi_B> over the class sums; exact, characteristic 0 only."""
    G, chA = _char_values(A)
    G2, chB = _char_values(B)
    assert G.index_set == G2.index_set
    F = A.field
    assert F.char == 0, "inner products are a characteristic-0 computation"
    trB = {i: (B.value if isinstance(B, Character) else B.trace_at)(G.inv(i))
           for i in chB}
    acc = F.zero
    for cls in G.conjugacy_classes():
        rep = cls[0]
        term = F.mul(chA[rep], trB[rep])
        acc = F.add(acc, F.mul(F.from_int(len(cls)), term))
    acc = F.mul(acc, F.from_fraction(Fraction(1, G.order)))
    return F.as_int(acc)


def _stacked_commutant_rows(F, mats):
    n = len(mats[0])
    rows = []
    for A in mats:
        for r in range(n):
            for s in range(n):
                row = [F.zero] * (n * n)
                for k in range(n):
                    row[r * n + k] = F.add(row[r * n + k], A[k][s])
                    row[k * n + s] = F.sub(row[k * n + s], A[r][k])
                rows.append(row)
    return rows


def commutant_dim(rep: MatrixRep) -> int:
    """dim of {X : X g = g X for all generator images}.

    Positive characteristic solves the stacked system directly.  In
    characteristic 0 the same system is solved over a large prime field, which
    can only overcount, and the exact semisimple count <chi,chi> can only
    undercount a wrong answer; agreement certifies the kernel dimension."""
    F = rep.field
    mats = rep.gen_mats()
    if F.char != 0:
        return nullity(F, _stacked_commutant_rows(F, mats))
    exact = inner_product(rep, rep)
    for attempt in range(3):
        P = surrogate_prime(F.m, rep.group.order, attempt)
        dst = GFScalars(P, F.m)
        red = [[[reduce_mod_prime(F, x, dst) for x in row] for row in M]
               for M in mats]
        modular = nullity(dst, _stacked_commutant_rows(dst, red))
        if modular == exact:
            return exact
        assert modular > exact, "modular kernel below the semisimple count"
    raise RuntimeError("commutant dimension did not stabilize over 3 primes")


def hom_dim(A: MatrixRep, B: MatrixRep) -> int:
    """Dimension of the space of intertwiners A -> B."""
    assert A.group.index_set == B.group.index_set and A.field == B.field
    if not A.gens:
        return A.n * B.n
    if A.field.char == 0:
        return inner_product(A, B)
    return meataxe.hom_space_dim(A.field, A.gen_mats(), B.gen_mats())


def is_irreducible(rep: MatrixRep, seed: int = 0) -> bool:
    F = rep.field
    if F.char == 0:
        return inner_product(rep, rep) == 1
    if rep.group.order % F.char:
        return commutant_dim(rep) == 1
    rng = random.Random((seed, "irr", rep.group.order, rep.n))
    mats = [_transpose(M) for M in rep.gen_mats()]
    ok, _cert = meataxe.is_irreducible_mats(F.F, mats, rng)
    return ok


def equivalent_reps(A: MatrixRep, B: MatrixRep, seed: int = 0) -> bool:
    """Equivalence in the strict sense: both irreducible and Hom != 0."""
    if A.n != B.n:
        return False
    if not (is_irreducible(A, seed) and is_irreducible(B, seed)):
        return False
    return hom_dim(A, B) >= 1


def _transpose(M):
    return [list(r) for r in zip(*M)]


# ---------------------------------------------------------------------------
# decomposition

class DecompReport:
    """Component list with multiplicities, commutant dimension and pattern."""

    def __init__(self, rep, components, commutant, pattern, mode, seed,
                 semisimple, prime=None, notes=None):
        self.dim = rep.n
        self.group_order = rep.group.order
        self.field_desc = rep.field.describe()
        self.components = components
        self.commutant = commutant
        self.pattern = pattern
        self.mode = mode
        self.seed = seed
        self.semisimple = semisimple
        self.prime = prime
        self.notes = notes or []

    def component_ids(self):
        return [c["id"] for c in self.components]

    def multiplicities(self):
        return {c["id"]: c["multiplicity"] for c in self.components}

    def to_json(self):
        return {
            "dim": self.dim,
            "group_order": self.group_order,
            "field": self.field_desc,
            "components": self.components,
            "commutant": self.commutant,
            "pattern": self.pattern,
            "mode": self.mode,
            "seed": self.seed,
            "semisimple": self.semisimple,
            "prime": self.prime,
            "notes": self.notes,
        }


def _pattern_tag(components, commutant):
    mults = sorted(c["multiplicity"] for c in components)
    if mults == [1]:
        return "irreducible"
    if mults == [1, 1]:
        return "two-inequivalent"
    if mults == [2]:
        return "one-with-multiplicity-two"
    return "other"


def _root_multiplicities(Fraw, cp, omega_pows):
    """Multiplicity of each candidate root in a monic polynomial, by repeated
    synthetic division.  Returns a list aligned with omega_pows; asserts the
    candidates exhaust the roots."""
    out = []
    total = 0
    for w in omega_pows:
        mult = 0
        poly = list(cp)
        while len(poly) > 1:
            # divide by (x - w)
            q = [Fraw.zero] * (len(poly) - 1)
            carry = Fraw.zero
            for i in range(len(poly) - 1, 0, -1):
                carry = Fraw.add(poly[i], Fraw.mul(carry, w))
                q[i - 1] = carry
            rem = Fraw.add(poly[0], Fraw.mul(carry, w))
            if rem != Fraw.zero:
                break
            mult += 1
            poly = q
        out.append(mult)
        total += mult
    assert total == len(cp) - 1, "eigenvalues escaped the expected root group"
    return out


def _leaf_brauer_character(Fsc, leaf_mats, view, class_items, lift_field):
    """Lifted character of a meataxe leaf (row-action matrices over Fsc.F).

    class_items: list of (class_rep, element_order).  The leaf value at x with
    word g_{i1}..g_{iL} is the trace of T_{iL}...T_{i1}."""
    Fraw = Fsc.F
    m = Fsc.m
    zmr = Fraw.exp((Fraw.order - 1) // m)
    values = {}
    dim = len(leaf_mats[0])
    cache = {}

    def leaf_mat(i):
        if i in cache:
            return cache[i]
        word = gen_word(view, i)
        cur = [[Fraw.one if a == b else Fraw.zero for b in range(dim)]
               for a in range(dim)]
        for gp in reversed(word):
            cur = mat_mul(Fraw, cur, leaf_mats[gp])
        cache[i] = cur
        return cur

    for rep_i, o in class_items:
        M = leaf_mat(rep_i)
        cp = list(charpoly(Fraw, M))
        omegas = [Fraw.pow(zmr, (m // o) * t) for t in range(o)]
        mults = _root_multiplicities(Fraw, cp, omegas)
        acc = lift_field.zero
        zo = lift_field.root_of_unity(o) if o > 1 else lift_field.one
        for t, mult in enumerate(mults):
            if mult:
                acc = lift_field.add(
                    acc, lift_field.mul(lift_field.from_int(mult),
                                        lift_field.pow(zo, t)))
        values[rep_i] = acc
    return values


def _component_entry(field, dim, values):
    ser = [[i, field.scalar_json(v)] for i, v in sorted(values.items())]
    cid = sha256(_canonical({"field": field.describe(), "dim": dim,
                             "trace": ser}).encode()).hexdigest()[:16]
    return {"id": cid, "dim": dim, "values": ser}


def decompose(rep: MatrixRep, seed: int = 0, candidates=None) -> DecompReport:
    """Split into irreducible components; see the module docstring for modes."""
    if rep.n > DIM_LIMIT:
        raise ValueError(f"dimension {rep.n} exceeds the {DIM_LIMIT} limit")
    F = rep.field
    G = rep.group
    if F.char == 0:
        return _decompose_char0(rep, seed, candidates)
    if G.order % F.char:
        return _decompose_coprime(rep, seed)
    return _decompose_modular(rep, seed)


def _decompose_char0(rep, seed, candidates):
    F = rep.field
    G = rep.group
    d = inner_product(rep, rep)
    chi = rep.character()
    if candidates is not None:
        comps = []
        covered = 0
        for cand in candidates:
            m = inner_product(rep, cand)
            if m == 0:
                continue
            _, vals = _char_values(cand)
            dim = cand.n if isinstance(cand, MatrixRep) else 1
            entry = _component_entry(F, dim, vals)
            entry["multiplicity"] = m
            comps.append(entry)
            covered += m * m
        if covered != d:
            raise RuntimeError("candidate list does not span the representation")
        assert sum(c["multiplicity"] * c["dim"] for c in comps) == rep.n
        comps.sort(key=lambda c: (c["dim"], c["id"]))
        return DecompReport(rep, comps, d, _pattern_tag(comps, d),
                            "exact", seed, True)
    if d == 1:
        entry = _component_entry(F, rep.n, chi)
        entry["multiplicity"] = 1
        return DecompReport(rep, [entry], 1, "irreducible", "exact", seed, True)
    class_items = [(cls[0], G.order_of(cls[0])) for cls in G.conjugacy_classes()]
    last = None
    for attempt in range(3):
        P = surrogate_prime(F.m, G.order, attempt)
        dst = GFScalars(P, F.m)
        mats = [_transpose([[reduce_mod_prime(F, x, dst) for x in row]
                            for row in M]) for M in rep.gen_mats()]
        rng = random.Random((seed, P, rep.n, G.order))
        grouped = {}
        try:
            leaves = meataxe.composition_factors(dst.F, mats, rng)
            for leaf in leaves:
                vals = _leaf_brauer_character(dst, leaf, G, class_items, F)
                entry = _component_entry(F, len(leaf[0]), vals)
                key = entry["id"]
                if key not in grouped:
                    entry["multiplicity"] = 0
                    entry["_vals"] = vals
                    grouped[key] = entry
                grouped[key]["multiplicity"] += 1
        except (AssertionError, RuntimeError) as exc:
            last = str(exc)
            continue
        comps = sorted(grouped.values(), key=lambda c: (c["dim"], c["id"]))
        ok = (sum(c["multiplicity"] * c["dim"] for c in comps) == rep.n
              and sum(c["multiplicity"] ** 2 for c in comps) == d)
        if ok:
            for rep_i, _o in class_items:
                acc = F.zero
                for c in comps:
                    acc = F.add(acc, F.mul(F.from_int(c["multiplicity"]),
                                           c["_vals"][rep_i]))
                if acc != chi[rep_i]:
                    ok = False
                    break
        if ok:
            for c in comps:
                del c["_vals"]
            return DecompReport(rep, comps, d, _pattern_tag(comps, d),
                                "surrogate", seed, True, prime=P)
        last = f"prime {P} failed the exact re-verification"
    raise RuntimeError(f"decomposition failed to certify in 3 attempts: {last}")


def _decompose_coprime(rep, seed):
    F = rep.field
    G = rep.group
    class_items = [(cls[0], G.order_of(cls[0])) for cls in G.conjugacy_classes()]
    rng = random.Random((seed, F.char, rep.n, G.order))
    mats = [_transpose(M) for M in rep.gen_mats()]
    leaves = meataxe.composition_factors(F.F, mats, rng)
    lift = Cyclotomic(F.m)
    grouped = {}
    for leaf in leaves:
        vals = _leaf_brauer_character(F, leaf, G, class_items, lift)
        entry = _component_entry(lift, len(leaf[0]), vals)
        if entry["id"] not in grouped:
            entry["multiplicity"] = 0
            grouped[entry["id"]] = entry
        grouped[entry["id"]]["multiplicity"] += 1
    comps = sorted(grouped.values(), key=lambda c: (c["dim"], c["id"]))
    d = nullity(F, _stacked_commutant_rows(F, rep.gen_mats()))
    assert sum(c["multiplicity"] * c["dim"] for c in comps) == rep.n
    assert sum(c["multiplicity"] ** 2 for c in comps) == d, \
        "splitting-field multiplicity identity failed"
    return DecompReport(rep, comps, d, _pattern_tag(comps, d),
                        "splitting-field", seed, True)


def _decompose_modular(rep, seed):
    F = rep.field
    G = rep.group
    ell = F.char
    class_items = [(cls[0], G.order_of(cls[0]))
                   for cls in G.conjugacy_classes()
                   if G.order_of(cls[0]) % ell]
    rng = random.Random((seed, ell, rep.n, G.order))
    mats = [_transpose(M) for M in rep.gen_mats()]
    leaves = meataxe.composition_factors(F.F, mats, rng)
    lift = Cyclotomic(F.m)
    grouped = {}
    for leaf in leaves:
        vals = _leaf_brauer_character(F, leaf, G, class_items, lift)
        entry = _component_entry(lift, len(leaf[0]), vals)
        if entry["id"] not in grouped:
            entry["multiplicity"] = 0
            grouped[entry["id"]] = entry
        grouped[entry["id"]]["multiplicity"] += 1
    comps = sorted(grouped.values(), key=lambda c: (c["dim"], c["id"]))
    d = nullity(F, _stacked_commutant_rows(F, rep.gen_mats()))
    semisimple = sum(c["multiplicity"] ** 2 for c in comps) == d
    return DecompReport(rep, comps, d, _pattern_tag(comps, d),
                        "composition", seed, semisimple)


# ---------------------------------------------------------------------------
# mod-ell reduction

def reduce_mod_ell(rep: MatrixRep, ell: int) -> MatrixRep:
    """Entrywise reduction along the canonical roots of unity."""
    F = rep.field
    assert F.char == 0, "reduction starts from characteristic 0"
    mprime = F.m
    while mprime % ell == 0:
        mprime //= ell
    dst = GFScalars(ell, mprime)
    images = {g: _form_map(lambda x: reduce_mod_prime(F, x, dst), rep.mat_at(g))
              for g in rep.gens}
    prov = {"built": "reduction", "ell": ell, "of": rep.provenance}
    out = MatrixRep(rep.group, dst, images, prov)
    # Brauer consistency: reduced traces must match on ell-regular classes
    chi = rep.character()
    for cls in rep.group.conjugacy_classes():
        i = cls[0]
        if rep.group.order_of(i) % ell:
            assert out.trace_at(i) == reduce_mod_prime(F, chi[i], dst), \
                "reduced trace mismatch on an ell-regular class"
    out.provenance["brauer_trace_match"] = True
    return out


# ---------------------------------------------------------------------------
# intertwining sets

def double_cosets(G: GroupView, H: GroupView) -> list:
    """Least-index representatives of H\\G/H via the left H-action on G/H."""
    T, tab = _coset_table(G, H)
    gens = H.generators()
    seen = set()
    reps = []
    for a in range(len(T)):
        if a in seen:
            continue
        reps.append(T[a])
        frontier = [a]
        seen.add(a)
        while frontier:
            b = frontier.pop()
            for h in gens:
                c = tab[G.mul(h, T[b])][0]
                if c not in seen:
                    seen.add(c)
                    frontier.append(c)
    return reps


def intertwining_set(G: GroupView, H: GroupView, lam) -> dict:
    """Double cosets HgH carrying a nonzero Hom_{H cap gHg^-1}(lam, glam)."""
    reps = double_cosets(G, H)
    amb = G.ambient
    hits = []
    dims = {}
    for g in reps:
        K_idx = tuple(sorted(x for x in H.indices
                             if amb.conj(amb.inv(g), x) in H.index_set))
        K = GroupView(amb, K_idx, "H^g-cap")
        if isinstance(lam, Character):
            ok = all(lam.values[x] == lam.values[amb.conj(amb.inv(g), x)]
                     for x in K.indices)
            dims[g] = 1 if ok else 0
        else:
            lam_K = lam.restrict(K)
            images = {x: lam.mat_at(amb.conj(amb.inv(g), x))
                      for x in K.generators()}
            conj_rep = MatrixRep(K, lam.field, images,
                                 {"built": "conjugate-restriction", "dim": lam.n})
            dims[g] = hom_dim(lam_K, conj_rep)
        if dims[g]:
            hits.append(g)
    return {"cosets": reps, "hom_dims": dims, "support": hits,
            "equals_subgroup": set(hits) == {G.one}}


# ---------------------------------------------------------------------------
# the tame family

def regular_exponents(q: int, char: int = 0) -> list:
    """Orbit representatives {a, qa} of regular characters of the order
    q^2-1 cyclic group, realizable over the given characteristic."""
    m1 = _realizable_part(q * q - 1, char)
    out = []
    seen = set()
    for a in range(1, m1):
        if a in seen:
            continue
        seen.add(a)
        seen.add(a * q % m1)
        if (a * (q - 1)) % m1:
            out.append(a)
    return out


def tame_induction_data(G: GroupView, nu_exponent: int, field=None) -> dict:
    """The inducing pair (unit classes, residue character) and the induced
    dimension-2 representation for a regular exponent."""
    amb = G.ambient
    q = amb.q
    if field is None:
        field = coeff_field(G, 0)
    m1 = _realizable_part(q * q - 1, field.char)
    a = nu_exponent % m1
    if (a * (q - 1)) % m1 == 0:
        raise ValueError(f"exponent {nu_exponent} is not regular: the induced"
                         " representation would be reducible")
    H = unit_group_view(amb)
    kD = amb.alg.kD
    zeta = field.root_of_unity(m1)
    vals = {}
    for i in H.indices:
        t = kD.log(amb.digits(i)[0])
        vals[i] = field.pow(zeta, a * t % m1)
    lam = Character(H, field, vals, {"built": "residue-character", "exponent": a})
    Pi = induce(G, H, lam)
    Pi.provenance.update({"construction": "tame", "nu_exponent": a})
    Pi.verify(100, seed=a)
    return {"H": H, "lam": lam, "Pi": Pi, "exponent": a}


def build_tame_rep(G: GroupView, nu_exponent: int, field=None) -> MatrixRep:
    """The dimension-2 induced representation attached to a regular character
    of the residue field of the algebra, inflated to the given quotient."""
    return tame_induction_data(G, nu_exponent, field)["Pi"]


# ---------------------------------------------------------------------------
# the wild family

def _level_stratum_indices(amb, level):
    """Indices of 1 + s p^level over a basis of the residue coefficients,
    paired with the Frobenius twist of the coefficient."""
    kD = amb.alg.kD
    f = amb.f
    assert 1 <= level < f
    out = []
    for t in range(kD.k):
        s = kD.el(*([0] * t + [1]))
        digs = [kD.one] + [kD.zero] * (f - 1)
        digs[level] = s
        i = amb.index[(0, tuple(digs))]
        digs[level] = kD.frob(s, amb.e)
        j = amb.index[(0, tuple(digs))]
        out.append((i, j))
    return out


def wild_characters(G: GroupView, field=None) -> list:
    """Characters of the chi-domain subgroup that genuinely live at the top
    level, filtered down to the minimal (non-Frobenius-invariant) stratum for
    odd conductor."""
    amb = G.ambient
    f = amb.f
    if field is None:
        field = coeff_field(G, 0)
    S = inducing_subgroups(amb)
    C = S["C"]
    strata = _level_stratum_indices(amb, f - 1)
    for i, j in strata:
        assert i in C.index_set and j in C.index_set
    out = []
    for chi in characters_of(C, field):
        if all(chi.values[i] == field.one for i, _ in strata):
            continue
        if f % 2:
            if all(chi.values[i] == chi.values[j] for i, j in strata):
                continue
        out.append(chi)
    return out


def character_stabilizer(G: GroupView, chi: Character) -> GroupView:
    """{g in G : chi(g^-1 x g) = chi(x)}, for chi on a normal subgroup."""
    amb = G.ambient
    C = chi.group
    gens = C.generators()
    member = []
    for g in G.indices:
        gi = amb.inv(g)
        if all(chi.values[amb.conj(gi, c)] == chi.values[c] for c in gens):
            member.append(g)
    return GroupView(amb, member, "Stab(chi)")


def _cyclic_quotient_dlog(Q: QuotientGroup, gen_class, x_class, order: int) -> int:
    cur = Q.one
    for t in range(order):
        if cur == x_class:
            return t
        cur = Q.mul(cur, gen_class)
    raise AssertionError("element escaped the cyclic quotient")


def _det(F, M):
    n = len(M)
    A = [list(r) for r in M]
    det = F.one
    for c in range(n):
        piv = next((r for r in range(c, n) if not F.is_zero(A[r][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = F.neg(det)
        det = F.mul(det, A[c][c])
        inv = F.inv(A[c][c])
        for r in range(c + 1, n):
            if not F.is_zero(A[r][c]):
                f = F.mul(A[r][c], inv)
                A[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[r], A[c])]
    return det


def _extension_scalar(field, T, T_pow, target, n_rel):
    """The scalar c with (cT)^n = target.

    T spans the intertwiner line, so T^n = s * target for a scalar s, and the
    wanted c satisfies c^n = 1/s.  Scale is pinned down through determinants:
    det(cT) is a root of unity delta (the extended image has finite order), so
    c = (1/s) det(T) / delta, and delta ranges over the canonical roots."""
    n = len(target)
    r0, c0 = next((r, c) for r in range(n) for c in range(n)
                  if not field.is_zero(target[r][c]))
    s = field.div(T_pow[r0][c0], target[r0][c0])
    for r in range(n):
        for c in range(n):
            if T_pow[r][c] != field.mul(s, target[r][c]):
                raise RuntimeError("intertwiner power is not scalar against "
                                   "the cyclic relation")
    s_inv = field.inv(s)
    det_T = _det(field, T)
    m = field.m
    z = field.root_of_unity(m) if m > 1 else field.one
    for j in range(m):
        delta = field.pow(z, j)
        c = field.div(field.mul(s_inv, det_T), delta)
        if field.pow(c, n_rel) == s_inv:
            return j, c
    raise RuntimeError("no scalar normalizes the extension: the intertwiner "
                       "system is inconsistent with the cyclic relation")


def wild_induction_data(G: GroupView, chi: Character, extension: int = 0,
                        field=None) -> dict:
    """The inducing pair (stabilizer, extension of chi) and the induced
    representation for a level-f character, f >= 2.

    Even conductor: chi extends to a character of its stabilizer through the
    abelianization; the extension picked by index is recorded.  Odd conductor:
    the two-step construction — maximal isotropic subgroup of the commutator
    pairing, induction to the middle layer (dimension q, asserted
    irreducible), then the cyclic extension pinned down through the
    determinant scalar."""
    amb = G.ambient
    if amb.d != 2:
        raise ValueError("the inducing-subgroup construction is specific to "
                         "quaternion algebras")
    f = amb.f
    if f < 2:
        raise ValueError("wild representations start at level 2")
    if field is None:
        field = chi.field
    S = inducing_subgroups(amb)
    C = S["C"]
    assert chi.group.index_set == C.index_set, "chi must live on the chi-domain"
    strata = _level_stratum_indices(amb, f - 1)
    if all(chi.values[i] == field.one for i, _ in strata):
        raise ValueError("chi is trivial at the top level; the construction "
                         "needs an exact level-f character")
    if f % 2 == 0:
        J = character_stabilizer(G, chi)
        assert J.order == S["J"].order, \
            "stabilizer order disagrees with the ramified-layer formula"
        exts = character_extensions(J, C, chi)
        if not exts:
            raise RuntimeError("chi does not extend to its stabilizer")
        if not 0 <= extension < len(exts):
            raise ValueError(f"extension index {extension} out of range "
                             f"(0..{len(exts) - 1})")
        lam = exts[extension]
        Pi = induce(G, J, lam)
        Pi.provenance.update({
            "construction": "wild-even",
            "chi": chi.fingerprint(),
            "extension_index": extension,
            "extension_count": len(exts),
        })
        Pi.verify(100, seed=extension)
        return {"J": J, "lam": lam, "Pi": Pi,
                "extension_count": len(exts)}
    if all(chi.values[i] == chi.values[j] for i, j in strata):
        raise ValueError("the top-level coefficient is Frobenius-invariant; "
                         "the minimal construction does not apply")
    q = amb.q
    J = character_stabilizer(G, chi)
    assert J.order == S["J"].order, \
        "stabilizer order disagrees with the unramified-layer formula"
    kD = amb.alg.kD
    j1_idx = [i for i in J.indices
              if kD.frob(amb.digits(i)[0], amb.e) == amb.digits(i)[0]]
    J1 = GroupView(amb, j1_idx, "J'")
    assert J1.order == S["J1"].order
    if f == 3:
        J2 = C
    elif J.index_set == S["J"].index_set:
        J2 = S["J2"]
    else:
        raise ValueError("conjugate stabilizers above level 3 need a matched "
                         "ramified layer; not supported")
    assert J2.order == S["J2"].order
    exts2 = character_extensions(J2, C, chi)
    assert exts2, "chi does not extend to the abelian core"
    chi2 = exts2[0]
    lam_J1 = _heisenberg_rep(G, J1, J2, chi2, field)
    # cyclic extension to J along a generator of the residue unit classes
    QJ = QuotientGroup(J, J1)
    n_rel = q + 1
    assert QJ.order == n_rel, "unexpected unit-class order over the middle layer"
    g = next(i for i in J.indices
             if i != G.one and QJ.order_of(QJ.project(i)) == n_rel)
    gi = amb.inv(g)
    A_mats = [lam_J1.dense_at(x) for x in J1.generators()]
    B_mats = [lam_J1.dense_at(amb.conj(g, x)) for x in J1.generators()]
    sol = nullspace(field, _stacked_hom_rows(field, A_mats, B_mats))
    if len(sol) != 1:
        raise RuntimeError(f"intertwiner space has dimension {len(sol)}; "
                           "chi is not stabilized by the unit class")
    T = [sol[0][r * q:(r + 1) * q] for r in range(q)]
    T_pow = [list(row) for row in T]
    for _ in range(n_rel - 1):
        T_pow = mat_mul(field, T_pow, T)
    target = lam_J1.dense_at(G.pow(g, n_rel))
    j_exp, c = _extension_scalar(field, T, T_pow, target, n_rel)
    # the distinct extensions differ by realizable characters of the quotient
    n_ext = _realizable_part(n_rel, field.char)
    if not 0 <= extension < n_ext:
        raise ValueError(f"extension index {extension} out of range "
                         f"(0..{n_ext - 1})")
    if extension:
        c = field.mul(c, field.pow(field.root_of_unity(n_ext), extension))
    lam_g = ("d", tuple(tuple(field.mul(c, x) for x in row) for row in T))
    images = {}
    for w in J.generators():
        t = _cyclic_quotient_dlog(QJ, QJ.project(g), QJ.project(w), n_rel)
        x = w
        for _ in range(t):
            x = amb.mul(x, gi)
        form = lam_J1.mat_at(x)
        for _ in range(t):
            form = _form_mul(field, form, lam_g)
        images[w] = form
    lam = MatrixRep(J, field, images, {
        "built": "heisenberg-extension",
        "scalar_exponent": j_exp,
        "extension_index": extension,
        "dim": q,
    })
    lam.verify(100, seed=j_exp)
    Pi = induce(G, J, lam)
    Pi.provenance.update({
        "construction": "wild-odd",
        "chi": chi.fingerprint(),
        "scalar_exponent": j_exp,
        "extension_index": extension,
        "extension_count": n_ext,
    })
    Pi.verify(100, seed=j_exp)
    return {"J": J, "J1": J1, "J2": J2, "lam": lam, "Pi": Pi,
            "extension_count": n_ext}


def build_wild_rep(G: GroupView, chi: Character, extension: int = 0,
                   field=None) -> MatrixRep:
    """Induced representation of level f >= 2 attached to chi; see
    wild_induction_data for the construction."""
    return wild_induction_data(G, chi, extension, field)["Pi"]


def _stacked_hom_rows(F, A_mats, B_mats):
    """Rows of the linear system T A = B T, unknowns T flattened row-major."""
    n = len(A_mats[0])
    rows = []
    for A, B in zip(A_mats, B_mats):
        for r in range(n):
            for s in range(n):
                row = [F.zero] * (n * n)
                for k in range(n):
                    row[r * n + k] = F.add(row[r * n + k], A[k][s])
                    row[k * n + s] = F.sub(row[k * n + s], B[r][k])
                rows.append(row)
    return rows


def _heisenberg_rep(G, J1, J2, chi2, field):
    """chi2 pushed through a maximal isotropic subgroup of J1/J2 and induced
    up to J1; dimension q, asserted irreducible."""
    amb = G.ambient
    p, q = amb.p, amb.q
    from .gf import field as gf_field
    Fp = gf_field(p)
    Q = QuotientGroup(J1, J2)
    A = AbelianStructure(Q)
    assert all(n == p for n in A.invariants) and len(A.invariants) == 2 * amb.e, \
        "the middle layer is not elementary abelian of rank 2e"
    zeta_p = field.root_of_unity(p)
    pow_of = {field.pow(zeta_p, t): t for t in range(p)}
    basis = [next(i for i in J1.indices if Q.project(i) == b) for b in A.basis]
    dim = len(basis)
    gram = [[Fp.from_int(pow_of[chi2.values[J2_member(amb, J2, x, y)]])
             for y in basis] for x in basis]
    if nullity(Fp, gram) != 0:
        raise RuntimeError("commutator pairing is degenerate; the Heisenberg "
                           "structure is broken")
    # greedy maximal isotropic subspace over F_p
    lag = []
    while len(lag) < dim // 2:
        if lag:
            rows = [[_dot_gram(Fp, gram, u, [Fp.one if i == j else Fp.zero
                                             for i in range(dim)])
                     for j in range(dim)] for u in lag]
            cands = nullspace(Fp, rows)
        else:
            cands = [[Fp.one if i == j else Fp.zero for i in range(dim)]
                     for j in range(dim)]
        ech_rows = [list(v) for v in lag]
        picked = None
        for v in cands:
            if _independent(Fp, ech_rows, v):
                picked = v
                break
        assert picked is not None, "isotropic subspace refuses to grow"
        lag.append(picked)
    lag_elems = []
    for v in lag:
        acc = G.one
        for b, cv in zip(basis, v):
            acc = amb.mul(acc, G.pow(b, Fp.to_int(cv)))
        lag_elems.append(acc)
    M = GroupView.closure(amb, tuple(list(J2.generators()) + lag_elems), "M")
    assert M.order == J2.order * q and M.is_subgroup_of(J1)
    exts = character_extensions(M, J2, chi2)
    assert exts, "isotropy failed to make the extension abelian"
    lam_M = exts[0]
    lam0 = induce(J1, M, lam_M)
    assert lam0.n == q
    if field.char == 0:
        assert inner_product(lam0, lam0) == 1, "middle-layer induction reducible"
    else:
        assert is_irreducible(lam0), "middle-layer induction reducible"
    lam0.provenance["lagrangian"] = [[Fp.to_int(c) for c in v] for v in lag]
    return lam0


def J2_member(amb, J2, x, y):
    c = amb.comm(x, y)
    assert c in J2.index_set, "commutator escaped the central layer"
    return c


def _dot_gram(Fp, gram, u, v):
    acc = Fp.zero
    for i, ui in enumerate(u):
        if ui != Fp.zero:
            for j, vj in enumerate(v):
                if vj != Fp.zero:
                    acc = Fp.add(acc, Fp.mul(Fp.mul(ui, vj), gram[i][j]))
    return acc


def _independent(Fp, rows, v):
    if not rows:
        return any(x != Fp.zero for x in v)
    stacked = [list(r) for r in rows] + [list(v)]
    return rank(Fp, stacked) == len(rows) + 1


# ---------------------------------------------------------------------------
# twisting by norm characters

def norm_class_characters(G: GroupView, field, square_trivial=True) -> list:
    """Characters of the norm-class quotient of the full unit-class group,
    pulled back to G; optionally only the square-trivial ones."""
    amb = G.ambient
    delta = delta_group(amb.kind, amb.p, amb.e, amb.d, amb.f, amb.r)
    Q = QuotientGroup(G, delta)
    A = AbelianStructure(Q)
    char = getattr(field, "char", 0)
    orders = [_realizable_part(n, char) for n in A.invariants]
    roots = [field.root_of_unity(n) if n > 1 else field.one for n in orders]
    choices = []
    for n in orders:
        opts = [0]
        if square_trivial:
            if n % 2 == 0:
                opts.append(n // 2)
        else:
            opts = list(range(n))
        choices.append(opts)
    dlogs = {i: A.dlog(Q.project(i)) for i in G.indices}
    out = []
    for exps in itertools.product(*choices):
        vals = {}
        for i in G.indices:
            acc = field.one
            for r, n, e, d in zip(roots, orders, exps, dlogs[i]):
                if n > 1 and e:
                    acc = field.mul(acc, field.pow(r, e * d))
            vals[i] = acc
        out.append(Character(G, field, vals, {"norm_exponents": list(exps)}))
    return out


def twist_stabilizer_count(Pi: MatrixRep) -> int:
    """Number of square-trivial norm-class twists fixing Pi up to equivalence,
    decided on (ell-regular) traces."""
    G = Pi.group
    F = Pi.field
    ell = getattr(F, "char", 0)
    chi_Pi = Pi.character()
    usable = [i for i in chi_Pi
              if ell == 0 or G.order_of(i) % ell]
    count = 0
    for chi in norm_class_characters(G, F, square_trivial=True):
        if all(F.mul(chi.values[i], chi_Pi[i]) == chi_Pi[i] for i in usable):
            count += 1
    return count
