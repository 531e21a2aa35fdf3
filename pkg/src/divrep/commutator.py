"""Factor any 1-unit of reduced norm one as a product of two commutators.

The factory fixes two elements once per algebra: z, the Teichmuller root of
order (q^d-1)/(q-1), and t, a norm-one perturbation of 1 + p_D.  Successive
approximation then writes a = (z,b)(t,c): at a level i not divisible by d
the discrepancy is absorbed into b through a commutator with z, and at a
divisible level into c through a commutator with t, which shifts residues by
x -> x^(q^r) - x and therefore reaches exactly the trace-zero hyperplane.

The loop never trusts the error analysis: it re-measures the discrepancy
level after every step and raises if the level failed to advance, so a
returned witness is correct by construction and still independently
checkable with verify_witness.
"""

from __future__ import annotations

from .gf import plinear_solutions
from .quatorder import DivAlgebra, QuatElem, algebra
from .localfield import solve_norm_equation


class TraceObstruction(ValueError):
    """A norm-one element showed a non-trace-zero residue at a divisible
    level.  This cannot happen if the residue-norm formula is right; it is
    surfaced as a first-class event, never repaired silently."""

    def __init__(self, level, residue, trace):
        self.level = level
        self.residue = residue
        self.trace = trace
        super().__init__(
            f"discrepancy at divisible level {level} has residue {residue} "
            f"with nonzero trace {trace}")


def make_z_t(alg: DivAlgebra):
    """The two fixed commutator anchors (z, t)."""
    if alg.N < 3:
        raise ValueError("precision too small to build t")
    z = alg.z_norm_one()
    one_pd = alg.add(alg.one(), alg.pd())
    u = solve_norm_equation(alg.E, alg.nrd(one_pd))
    t = alg.mul(one_pd, alg.from_e(alg.E.inv(u)))
    return z, t


def _zbar_denominator(alg: DivAlgebra, i: int):
    kD = alg.kD
    zbar = kD.pow(kD.gen, alg.q ** alg.r - 1)
    return kD.sub(kD.pow(zbar, 1 - alg.q ** (alg.r * i)), kD.one)


def solve_level_a(alg: DivAlgebra, s, i: int) -> QuatElem:
    """v in D^1 with (z, v) = 1 + s p_D^i modulo P_D^(i+1); needs d not | i."""
    if i % alg.d == 0:
        raise ValueError("level divisible by d belongs to the t-side step")
    if s == alg.kD.zero:
        return alg.one()
    den = _zbar_denominator(alg, i)
    assert den != alg.kD.zero, "commutation with z degenerates; counting inequality violated"
    xbar = alg.kD.div(s, den)
    return alg.lift_graded_to_D1(xbar, i)


def solve_level_b(alg: DivAlgebra, s, i: int) -> QuatElem:
    """v in D^1 with (t, v) = 1 + s p_D^i modulo P_D^(i+1); needs d | i and
    Tr(s) = 0.  v sits one level lower, in U^(i-1)."""
    if i % alg.d:
        raise ValueError("level not divisible by d belongs to the z-side step")
    kD = alg.kD
    if s == kD.zero:
        return alg.one()
    tr = alg.sub_kF.trace(s)
    if tr != alg.kF.zero:
        raise TraceObstruction(i, s, tr)
    sols = plinear_solutions(kD, lambda x: kD.sub(kD.frob(x, alg.r * alg.e), x), s)
    if not sols:
        raise TraceObstruction(i, s, tr)
    xbar = sols[0]
    return alg.lift_graded_to_D1(xbar, i - 1)


class CommutatorWitness:
    """a = (z,b)(t,c) mod P_D^N, all four of z, t, b, c norm one."""

    __slots__ = ("alg", "a", "z", "t", "b", "c", "N", "seed")

    def __init__(self, alg, a, z, t, b, c, N, seed=None):
        self.alg, self.a, self.z, self.t, self.b, self.c, self.N, self.seed = \
            alg, a, z, t, b, c, N, seed


def factor_two_commutators(alg: DivAlgebra, a: QuatElem, seed=None) -> CommutatorWitness:
    N = alg.N
    one = alg.one()
    da = alg.sub(a, one)
    w = alg.pd_val(da)
    if w is not None and w < 1:
        raise ValueError("input is not a 1-unit")
    na = alg.nrd(a)
    if not alg.F.eq_mod(na, alg.F.one(na.prec), na.prec):
        raise ValueError("input does not have reduced norm one")
    z, t = make_z_t(alg)
    b, c = one, one
    guard = 0
    while True:
        X = alg.mul(alg.commutator(z, b), alg.commutator(t, c))
        Xi = alg.inv(X)
        delta_r = alg.mul(Xi, a)
        lvl_elem = alg.sub(delta_r, one)
        lvl = alg.pd_val(lvl_elem)
        if lvl is None or lvl >= N:
            return CommutatorWitness(alg, a, z, t, b, c, N, seed)
        guard += 1
        assert guard <= N + 2, "iteration failed to terminate"
        if lvl % alg.d:
            delta_l = alg.mul(a, Xi)
            s = alg.digit_at_pd(alg.sub(delta_l, one), lvl)
            v = solve_level_a(alg, s, lvl)
            b = alg.mul(v, b)
        else:
            s = alg.digit_at_pd(lvl_elem, lvl)
            v = solve_level_b(alg, s, lvl)
            c = alg.mul(c, v)
        X2 = alg.mul(alg.commutator(z, b), alg.commutator(t, c))
        d2 = alg.sub(alg.mul(alg.inv(X2), a), one)
        lvl2 = alg.pd_val(d2)
        assert lvl2 is None or lvl2 > lvl, \
            f"discrepancy level did not advance past {lvl}"


def verify_witness(w: CommutatorWitness) -> bool:
    return not verify_witness_detail(w)["failures"]


def verify_witness_detail(w: CommutatorWitness) -> dict:
    """Recompute everything the witness claims; reports the first failing
    level of the product identity and any norm-one violations."""
    alg = w.alg
    failures = []
    norm_level = w.N // alg.d
    norms = {}
    for name in ("z", "t", "b", "c", "a"):
        x = getattr(w, name)
        n = alg.nrd(x)
        ok = alg.F.eq_mod(n, alg.F.one(n.prec), min(norm_level, n.prec))
        norms[name] = ok
        if not ok:
            failures.append(f"nrd({name}) != 1")
    X = alg.mul(alg.commutator(w.z, w.b), alg.commutator(w.t, w.c))
    diff = alg.sub(w.a, X)
    lvl = alg.pd_val(diff)
    fail_level = None
    if lvl is not None and lvl < w.N:
        fail_level = lvl
        failures.append(f"a != (z,b)(t,c): first failing level {lvl}")
    return {"failures": failures, "fail_level": fail_level, "norm_one": norms}


# -- serialization: unit elements as lists of residue digits, each digit a
#    list of prime-field coordinates

def elem_to_digits(alg: DivAlgebra, x: QuatElem, count=None):
    count = alg.N if count is None else count
    w = alg.pd_val(x)
    if w != 0:
        raise ValueError("only units of O_D serialize to digit form")
    return [list(dig) for dig in alg.pd_digits(x, count)]


def elem_from_digits(alg: DivAlgebra, digits):
    return alg.from_pd_digits([tuple(int(c) % alg.p for c in dig) for dig in digits])


def witness_to_json(w: CommutatorWitness) -> dict:
    alg = w.alg
    doc = {
        "algebra": {"kind": alg.kind, "p": alg.p, "e": alg.e, "d": alg.d,
                    "r": alg.r, "precision": alg.N},
        "precision": w.N,
        "elements": {name: elem_to_digits(alg, getattr(w, name))
                     for name in ("a", "z", "t", "b", "c")},
    }
    if w.seed is not None:
        doc["seed"] = w.seed
    return doc


def witness_from_json(doc: dict) -> CommutatorWitness:
    spec = doc["algebra"]
    alg = algebra(spec["kind"], spec["p"], spec["e"], spec["d"], spec["r"],
                  spec["precision"])
    els = {name: elem_from_digits(alg, doc["elements"][name])
           for name in ("a", "z", "t", "b", "c")}
    return CommutatorWitness(alg, els["a"], els["z"], els["t"], els["b"],
                             els["c"], doc["precision"], doc.get("seed"))


def derived_subgroup_check(p: int, e: int, d: int, f: int, kind: str = "eq") -> dict:
    """Compare the commutator closure of the finite norm-one quotient with
    the kernel of the residue map; the index must be (q^d-1)/(q-1)."""
    from .finquot import delta_group
    q = p ** e
    G = delta_group(kind, p, e, d, f)
    der = G.derived_subgroup()
    ker = G.residue_kernel()
    index = G.order // der.order
    expected = (q ** d - 1) // (q - 1)
    return {
        "match": der.index_set == ker.index_set,
        "index": index,
        "expected_index": expected,
        "ok": der.index_set == ker.index_set and index == expected,
    }
