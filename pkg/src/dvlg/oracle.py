"""Brute-force decision over finite standard structures.

Lattice quantifiers expand over all subsets of the ground set; each
group-quantified variable becomes one rational unknown per ground
point, and membership atoms compile pointwise to linear constraints
decided by Fourier-Motzkin elimination. Sound and complete at small
sizes, and completely independent of the reduction engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import syntax as S
from .errors import PreconditionViolated, ResourceLimit, UnboundVariable
from .linear import CONST, Lin, LinConstraint, fm_eliminate, fm_eliminate_conj
from .rewrites import linearize_group_term, one_point, rename_bound
from .standard import FinStdStructure, GroupVector, SubsetL, std_valuation

__all__ = [
    "Assignment",
    "eval_qf",
    "decide_finite",
    "fm_eliminate",
    "fm_eliminate_conj",
    "DEFAULT_LIMITS",
]

DEFAULT_LIMITS = {
    "max_n": 4,
    "max_quantifiers": 6,
    "max_atoms": 64,
    "max_dnf": 50000,
}


@dataclass(frozen=True)
class Assignment:
    """Concrete values for free variables of both sorts."""

    group_env: dict[str, GroupVector] = field(default_factory=dict)
    lattice_env: dict[str, SubsetL] = field(default_factory=dict)

    def check_sizes(self, n: int):
        for name, v in self.group_env.items():
            if len(v) != n:
                raise PreconditionViolated(
                    f"vector for {name} has length {len(v)}, structure has {n}"
                )
        for name, s in self.lattice_env.items():
            if s.width != n:
                raise PreconditionViolated(
                    f"subset for {name} has width {s.width}, structure has {n}"
                )


def _count_quantifiers(phi: S.Formula) -> int:
    if isinstance(phi, (S.Exists, S.Forall)):
        return 1 + _count_quantifiers(phi.body)
    if isinstance(phi, S.Not):
        return _count_quantifiers(phi.arg)
    if isinstance(phi, (S.And, S.Or, S.Implies)):
        return _count_quantifiers(phi.left) + _count_quantifiers(phi.right)
    return 0


def count_atoms(phi: S.Formula) -> int:
    if isinstance(phi, (S.GLeq, S.GEq, S.LBelow, S.LEq)):
        return 1
    if isinstance(phi, (S.Exists, S.Forall)):
        return count_atoms(phi.body)
    if isinstance(phi, S.Not):
        return count_atoms(phi.arg)
    if isinstance(phi, (S.And, S.Or, S.Implies)):
        return count_atoms(phi.left) + count_atoms(phi.right)
    return 0


# --- direct quantifier-free evaluation ---

def eval_gterm(t: S.Term, n: int, genv: dict[str, GroupVector]) -> GroupVector:
    if isinstance(t, S.GVar):
        if t.name not in genv:
            raise UnboundVariable(f"group variable {t.name} not assigned")
        return genv[t.name]
    if isinstance(t, S.Zero):
        return GroupVector((Fraction(0),) * n)
    if isinstance(t, S.Add):
        a, b = eval_gterm(t.left, n, genv), eval_gterm(t.right, n, genv)
        return GroupVector(tuple(x + y for x, y in zip(a.values, b.values)))
    if isinstance(t, S.Neg):
        a = eval_gterm(t.arg, n, genv)
        return GroupVector(tuple(-x for x in a.values))
    if isinstance(t, S.GMeet):
        a, b = eval_gterm(t.left, n, genv), eval_gterm(t.right, n, genv)
        return GroupVector(tuple(min(x, y) for x, y in zip(a.values, b.values)))
    if isinstance(t, S.GJoin):
        a, b = eval_gterm(t.left, n, genv), eval_gterm(t.right, n, genv)
        return GroupVector(tuple(max(x, y) for x, y in zip(a.values, b.values)))
    if isinstance(t, (S.IntScale, S.RatScale)):
        a = eval_gterm(t.arg, n, genv)
        q = Fraction(t.factor)
        return GroupVector(tuple(q * x for x in a.values))
    raise PreconditionViolated(f"not a G-term: {t!r}")


def eval_lterm(t: S.Term, n: int, genv, lenv) -> SubsetL:
    if isinstance(t, S.LVar):
        if t.name not in lenv:
            raise UnboundVariable(f"lattice variable {t.name} not assigned")
        return lenv[t.name]
    if isinstance(t, S.Bot):
        return SubsetL(0, n)
    if isinstance(t, S.Top):
        return SubsetL((1 << n) - 1, n)
    if isinstance(t, S.LMeet):
        a, b = eval_lterm(t.left, n, genv, lenv), eval_lterm(t.right, n, genv, lenv)
        return SubsetL(a.bits & b.bits, n)
    if isinstance(t, S.LJoin):
        a, b = eval_lterm(t.left, n, genv, lenv), eval_lterm(t.right, n, genv, lenv)
        return SubsetL(a.bits | b.bits, n)
    if isinstance(t, S.Compl):
        a = eval_lterm(t.arg, n, genv, lenv)
        return SubsetL((1 << n) - 1 & ~a.bits, n)
    if isinstance(t, S.Val):
        return std_valuation(eval_gterm(t.arg, n, genv))
    raise PreconditionViolated(f"not an L-term: {t!r}")


def eval_qf(struct: FinStdStructure, env: Assignment, phi: S.Formula) -> bool:
    """Tarskian truth of a quantifier-free formula under a full assignment."""
    n = struct.ground_size
    env.check_sizes(n)
    genv, lenv = env.group_env, env.lattice_env

    def go(f: S.Formula) -> bool:
        if isinstance(f, S.TrueF):
            return True
        if isinstance(f, S.FalseF):
            return False
        if isinstance(f, S.GLeq):
            a = eval_gterm(f.left, n, genv)
            b = eval_gterm(f.right, n, genv)
            return all(x <= y for x, y in zip(a.values, b.values))
        if isinstance(f, S.GEq):
            return eval_gterm(f.left, n, genv) == eval_gterm(f.right, n, genv)
        if isinstance(f, S.LBelow):
            a = eval_lterm(f.left, n, genv, lenv)
            b = eval_lterm(f.right, n, genv, lenv)
            return a.bits & ~b.bits == 0
        if isinstance(f, S.LEq):
            return eval_lterm(f.left, n, genv, lenv) == eval_lterm(f.right, n, genv, lenv)
        if isinstance(f, S.Not):
            return not go(f.arg)
        if isinstance(f, S.And):
            return go(f.left) and go(f.right)
        if isinstance(f, S.Or):
            return go(f.left) or go(f.right)
        if isinstance(f, S.Implies):
            return (not go(f.left)) or go(f.right)
        raise PreconditionViolated(f"eval_qf requires a quantifier-free formula, got {f!r}")

    return go(phi)


# --- symbolic compilation for group quantifiers ---
#
# Boolean formulas over LinConstraint atoms are nested tuples:
# True/False, a LinConstraint, ("not", f), ("and", (f, ...)),
# ("or", (f, ...)).

def b_and(parts):
    out = []
    for p in parts:
        if p is False:
            return False
        if p is True:
            continue
        out.append(p)
    if not out:
        return True
    if len(out) == 1:
        return out[0]
    return ("and", tuple(out))


def b_or(parts):
    out = []
    for p in parts:
        if p is True:
            return True
        if p is False:
            continue
        out.append(p)
    if not out:
        return False
    if len(out) == 1:
        return out[0]
    return ("or", tuple(out))


def b_not(f):
    if f is True:
        return False
    if f is False:
        return True
    if isinstance(f, tuple) and f and f[0] == "not":
        return f[1]
    return ("not", f)


def _conj_insert(store: dict, c: LinConstraint):
    """Add a constraint to a conjunction store; False on contradiction."""
    t = c.constant_truth()
    if t is not None:
        return t
    lhs, rel = c.lhs, c.rel
    nrel = store.get(-lhs)
    if nrel is not None and (rel == ">" or nrel == ">"):
        return False
    cur = store.get(lhs)
    if cur is None or cur == rel:
        store[lhs] = rel
        return True
    pair = {cur, rel}
    if pair == {">=", ">"}:
        store[lhs] = ">"
        return True
    if pair == {">=", "="}:
        store[lhs] = "="
        return True
    return False  # {">", "="} is unsatisfiable


def _store_to_conj(store: dict) -> list[LinConstraint]:
    return [
        LinConstraint(l, r)
        for l, r in sorted(store.items(), key=lambda kv: kv[0].coeffs)
    ]


def prune_dnf(dnf):
    """Drop contradictory, duplicate, and subsumed conjunctions."""
    stores = {}
    for conj in dnf:
        store: dict = {}
        ok = True
        for c in conj:
            r = _conj_insert(store, c)
            if r is False:
                ok = False
                break
        if ok:
            stores.setdefault(frozenset(store.items()), store)
    items = list(stores.items())
    if len(items) <= 800:
        keys = [k for k, _ in items]
        items = [
            items[i]
            for i in range(len(items))
            if not any(j != i and keys[j] < keys[i] for j in range(len(items)))
        ]
    return [_store_to_conj(store) for _, store in items]


def to_dnf(f, cap: int):
    """Pruned DNF as a list of LinConstraint conjunctions, bounded by cap."""

    def nnf(f, neg: bool):
        if f is True or f is False:
            return (f != neg)
        if isinstance(f, LinConstraint):
            if not neg:
                return f
            return b_or(f.negated())
        tag = f[0]
        if tag == "not":
            return nnf(f[1], not neg)
        if tag == "and":
            parts = [nnf(p, neg) for p in f[1]]
            return b_or(parts) if neg else b_and(parts)
        if tag == "or":
            parts = [nnf(p, neg) for p in f[1]]
            return b_and(parts) if neg else b_or(parts)
        raise ValueError(f"bad boolean node {f!r}")

    def dist(f) -> list[dict]:
        """List of conjunction stores; contradictions pruned eagerly."""
        if f is True:
            return [{}]
        if f is False:
            return []
        if isinstance(f, LinConstraint):
            store: dict = {}
            return [store] if _conj_insert(store, f) else []
        tag = f[0]
        if tag == "or":
            out = []
            for p in f[1]:
                out.extend(dist(p))
                if len(out) > cap:
                    raise ResourceLimit("DNF size limit exceeded")
            return out
        if tag == "and":
            out = [{}]
            for p in f[1]:
                branches = dist(p)
                merged = []
                for a in out:
                    for b in branches:
                        combo = dict(a)
                        ok = True
                        for lhs, rel in b.items():
                            if not _conj_insert(combo, LinConstraint(lhs, rel)):
                                ok = False
                                break
                        if ok:
                            merged.append(combo)
                        if len(merged) > cap:
                            raise ResourceLimit("DNF size limit exceeded")
                out = merged
            return out
        raise ValueError(f"bad boolean node {f!r}")

    return prune_dnf([_store_to_conj(s) for s in dist(nnf(f, False))])


def _dnf_to_bform(dnf):
    return b_or([b_and(list(conj)) for conj in dnf])


class _Compiler:
    def __init__(self, struct: FinStdStructure, genv, limits):
        self.n = struct.ground_size
        self.genv = genv  # concrete values for free group variables
        self.cap = limits["max_dnf"]
        self.struct = struct

    def point_constraint(self, lin: Lin, x: int) -> "LinConstraint | bool":
        """ lin(x) >= 0 with free group variables folded to constants."""
        out: dict[str, Fraction] = {}
        for var, c in lin.coeffs:
            if var == CONST:
                out[CONST] = out.get(CONST, Fraction(0)) + c
            elif var in self.genv:
                out[CONST] = out.get(CONST, Fraction(0)) + c * self.genv[var].values[x]
            else:
                key = f"{var}@{x}"
                out[key] = out.get(key, Fraction(0)) + c
        c = LinConstraint(Lin.make(out), ">=")
        t = c.constant_truth()
        return c if t is None else t

    def nonneg_at(self, t: S.Term, x: int):
        """Boolean constraint formula for t(x) >= 0."""
        jom = linearize_group_term(t)
        return b_or(
            [b_and([self.point_constraint(l, x) for l in meet]) for meet in jom]
        )

    def member_at(self, t: S.Term, x: int, lenv):
        if isinstance(t, S.LVar):
            if t.name not in lenv:
                raise UnboundVariable(f"lattice variable {t.name} not assigned")
            return bool(lenv[t.name].bits >> x & 1)
        if isinstance(t, S.Bot):
            return False
        if isinstance(t, S.Top):
            return True
        if isinstance(t, S.LMeet):
            return b_and([self.member_at(t.left, x, lenv), self.member_at(t.right, x, lenv)])
        if isinstance(t, S.LJoin):
            return b_or([self.member_at(t.left, x, lenv), self.member_at(t.right, x, lenv)])
        if isinstance(t, S.Compl):
            return b_not(self.member_at(t.arg, x, lenv))
        if isinstance(t, S.Val):
            return self.nonneg_at(t.arg, x)
        raise PreconditionViolated(f"not an L-term: {t!r}")

    def compile(self, f: S.Formula, lenv):
        """Boolean constraint formula for f; group quantifiers eliminated."""
        points = range(self.n)
        if isinstance(f, S.TrueF):
            return True
        if isinstance(f, S.FalseF):
            return False
        if isinstance(f, S.GLeq):
            diff = S.Add(f.right, S.Neg(f.left))
            return b_and([self.nonneg_at(diff, x) for x in points])
        if isinstance(f, S.GEq):
            return b_and(
                [self.compile(S.GLeq(f.left, f.right), lenv),
                 self.compile(S.GLeq(f.right, f.left), lenv)]
            )
        if isinstance(f, S.LBelow):
            return b_and(
                [b_or([b_not(self.member_at(f.left, x, lenv)),
                       self.member_at(f.right, x, lenv)])
                 for x in points]
            )
        if isinstance(f, S.LEq):
            left = [self.member_at(f.left, x, lenv) for x in points]
            right = [self.member_at(f.right, x, lenv) for x in points]
            return b_and(
                [b_and([b_or([b_not(a), b]), b_or([a, b_not(b)])])
                 for a, b in zip(left, right)]
            )
        if isinstance(f, S.Not):
            return b_not(self.compile(f.arg, lenv))
        if isinstance(f, S.And):
            return b_and([self.compile(f.left, lenv), self.compile(f.right, lenv)])
        if isinstance(f, S.Or):
            return b_or([self.compile(f.left, lenv), self.compile(f.right, lenv)])
        if isinstance(f, S.Implies):
            return b_or([b_not(self.compile(f.left, lenv)), self.compile(f.right, lenv)])
        if isinstance(f, (S.Exists, S.Forall)) and f.sort == S.L:
            parts = []
            for s in self.struct.all_subsets():
                inner = dict(lenv)
                inner[f.var] = s
                parts.append(self.compile(f.body, inner))
            return b_or(parts) if isinstance(f, S.Exists) else b_and(parts)
        if isinstance(f, S.Exists):
            return self.eliminate_exists(f.var, self.compile(f.body, lenv))
        if isinstance(f, S.Forall):
            return b_not(
                self.eliminate_exists(f.var, b_not(self.compile(f.body, lenv)))
            )
        raise PreconditionViolated(f"unknown formula node {f!r}")

    def eliminate_exists(self, var: str, bform):
        dnf = to_dnf(bform, self.cap)
        for x in range(self.n):
            dnf = prune_dnf(fm_eliminate(f"{var}@{x}", dnf))
            if len(dnf) > self.cap:
                raise ResourceLimit("DNF size limit exceeded")
        return _dnf_to_bform(dnf)


def _bform_truth(f) -> bool:
    if f is True or f is False:
        return f
    if isinstance(f, LinConstraint):
        t = f.constant_truth()
        if t is None:
            raise UnboundVariable(
                f"constraint still mentions unknowns: {f.lhs.vars()}"
            )
        return t
    tag = f[0]
    if tag == "not":
        return not _bform_truth(f[1])
    if tag == "and":
        return all(_bform_truth(p) for p in f[1])
    return any(_bform_truth(p) for p in f[1])


def decide_finite(
    struct: FinStdStructure,
    phi: S.Formula,
    env: Assignment | None = None,
    limits: dict | None = None,
) -> bool:
    """Truth of an arbitrary sentence-with-parameters in the structure."""
    lim = dict(DEFAULT_LIMITS)
    if limits:
        lim.update(limits)
    if struct.ground_size > lim["max_n"]:
        raise ResourceLimit(
            f"ground size {struct.ground_size} exceeds cap {lim['max_n']}"
        )
    env = env or Assignment()
    env.check_sizes(struct.ground_size)
    phi = one_point(rename_bound(phi, prefix="_d"))
    if _count_quantifiers(phi) > lim["max_quantifiers"]:
        raise ResourceLimit("quantifier count exceeds cap")
    if count_atoms(phi) > lim["max_atoms"]:
        raise ResourceLimit("atom count exceeds cap")
    comp = _Compiler(struct, env.group_env, lim)

    def go(f: S.Formula, lenv) -> bool:
        # stay concrete (with short-circuiting) until a group quantifier
        if isinstance(f, S.Not):
            return not go(f.arg, lenv)
        if isinstance(f, S.And):
            return go(f.left, lenv) and go(f.right, lenv)
        if isinstance(f, S.Or):
            return go(f.left, lenv) or go(f.right, lenv)
        if isinstance(f, S.Implies):
            return (not go(f.left, lenv)) or go(f.right, lenv)
        if isinstance(f, (S.Exists, S.Forall)) and f.sort == S.L:
            subsets = struct.all_subsets()
            if isinstance(f, S.Exists):
                return any(go(f.body, {**lenv, f.var: s}) for s in subsets)
            return all(go(f.body, {**lenv, f.var: s}) for s in subsets)
        if isinstance(f, (S.Exists, S.Forall)):
            return _bform_truth(comp.compile(f, lenv))
        return eval_qf(
            struct, Assignment(env.group_env, dict(lenv)), f
        )

    return go(phi, dict(env.lattice_env))
