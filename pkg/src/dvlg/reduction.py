"""Reduction of two-sorted formulas to the lattice sort.

Group atoms are traded for valuation atoms using density, valuations
are pushed to primitive linear arguments, and group quantifiers are
eliminated by the patching argument: each valuation atom mentioning
the quantified variable becomes a fresh lattice variable, and the
candidate regions carry lower/upper bound conditions whose pairwise
compatibility is expressible without the group variable. The result is
a lattice formula chi together with group terms t_i bound through
p_i = P(t_i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import syntax as S
from .boolalg import ba_decide, ba_qe
from .errors import NotPrimitive, NotSentence, UnsupportedFragment
from .linear import Lin
from .rewrites import (
    group_atoms_to_lattice,
    gterm_to_lin,
    one_point,
    push_valuation_formula,
    rename_bound,
    simplify,
    val_of_lin,
)

__all__ = [
    "PrimitiveBlock",
    "ReductionOutput",
    "eliminate_group_var",
    "reduce",
    "assemble_reduct",
    "decide_ec",
]


@dataclass(frozen=True)
class PrimitiveBlock:
    """Bounds on one group variable, grouped by the lattice region where
    each bound is active. Bound coefficients on the variable are already
    normalized away (divisibility permits rational rescaling)."""

    variable: str
    lowers: tuple  # (region: L-term, bound: Lin, strict: bool)
    uppers: tuple
    # pairs with these indices are complementary regions and are skipped
    skip_pairs: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class ReductionOutput:
    chi: S.Formula
    terms: tuple  # G-sorted Terms
    k: int
    mode: str
    eliminations: int = 0

    def to_json(self):
        return {
            "k": self.k,
            "terms": [S.print_term(t) for t in self.terms],
            "chi": S.print_formula(self.chi),
            "mode": self.mode,
        }


def eliminate_group_var(block: PrimitiveBlock) -> S.Formula:
    """Side conditions equivalent to the existential over the variable.

    For every active lower bound l on region r and upper bound u on
    region r', compatibility needs r meet r' inside P(u - l); if either
    bound is strict the strict form P(u - l) meet compl(P(l - u)) is
    required. One-sided blocks need no conditions: divisible ordered
    stalks are unbounded and dense.
    """
    conds = []
    for i, (r, low, ls) in enumerate(block.lowers):
        for j, (rp, up, us) in enumerate(block.uppers):
            if (i, j) in block.skip_pairs:
                continue
            diff = up - low
            target = val_of_lin(diff)
            if ls or us:
                target = S.LMeet(target, S.Compl(val_of_lin(-diff)))
            conds.append(S.LBelow(S.LMeet(r, rp), target))
    out = S.TRUE
    for c in conds:
        out = c if isinstance(out, S.TrueF) else S.And(out, c)
    return simplify(out)


def _formula_has_var(f: S.Formula, var: str) -> bool:
    return var in S.free_vars(f)


def _collect_val_atoms(f: S.Formula, var: str, out: list[S.Term]):
    """Distinct Val terms whose argument mentions var, by first occurrence."""
    if isinstance(f, (S.LBelow, S.LEq)):
        for side in (f.left, f.right):
            _collect_val_terms(side, var, out)
        return
    if isinstance(f, (S.GLeq, S.GEq)):
        raise NotPrimitive(
            f"group atom survived normalization: {S.print_formula(f)}"
        )
    for attr in ("arg", "left", "right", "body"):
        child = getattr(f, attr, None)
        if isinstance(child, S.Formula):
            _collect_val_atoms(child, var, out)


def _collect_val_terms(t: S.Term, var: str, out: list[S.Term]):
    if isinstance(t, S.Val):
        if var in S.term_vars(t.arg) and t not in out:
            out.append(t)
        return
    for attr in ("left", "right", "arg"):
        child = getattr(t, attr, None)
        if isinstance(child, S.Term):
            _collect_val_terms(child, var, out)


def _subst_terms(f: S.Formula, mapping: dict[S.Term, S.Term]) -> S.Formula:
    def sub_term(t: S.Term) -> S.Term:
        if t in mapping:
            return mapping[t]
        kids = {}
        for attr in ("left", "right", "arg"):
            child = getattr(t, attr, None)
            if isinstance(child, S.Term):
                kids[attr] = sub_term(child)
        if not kids:
            return t
        fields = {k: getattr(t, k) for k in ("factor", "name") if hasattr(t, k)}
        fields.update(kids)
        return type(t)(**fields)

    def go(g: S.Formula) -> S.Formula:
        if isinstance(g, (S.LBelow, S.LEq)):
            return type(g)(sub_term(g.left), sub_term(g.right))
        if isinstance(g, S.Not):
            return S.Not(go(g.arg))
        if isinstance(g, (S.And, S.Or, S.Implies)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (S.Exists, S.Forall)):
            return type(g)(g.var, g.sort, go(g.body))
        return g

    return go(f)


class _Reducer:
    def __init__(self, mode: str):
        if mode not in ("tplus", "ec"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.fresh = itertools.count()
        self.eliminations = 0

    def fresh_lvar(self) -> str:
        return f"_y{next(self.fresh)}"

    def run(self, phi: S.Formula) -> S.Formula:
        if isinstance(phi, S.Exists) and phi.sort == S.G:
            names = []
            while isinstance(phi, S.Exists) and phi.sort == S.G:
                names.append(phi.var)
                phi = phi.body
            body = self.run(phi)
            for var in reversed(names):
                body = self.eliminate_exists(var, body)
            return body
        if isinstance(phi, S.Forall) and phi.sort == S.G:
            names = []
            while isinstance(phi, S.Forall) and phi.sort == S.G:
                names.append(phi.var)
                phi = phi.body
            body = simplify(S.Not(self.run(phi)))
            for var in reversed(names):
                body = self.eliminate_exists(var, body)
            return simplify(S.Not(body))
        if isinstance(phi, (S.Exists, S.Forall)):
            return type(phi)(phi.var, phi.sort, self.run(phi.body))
        if isinstance(phi, S.Not):
            return S.Not(self.run(phi.arg))
        if isinstance(phi, (S.And, S.Or, S.Implies)):
            return type(phi)(self.run(phi.left), self.run(phi.right))
        return phi

    def eliminate_exists(self, var: str, body: S.Formula) -> S.Formula:
        """Eliminate 'exists var:G.' from a body with no group quantifiers."""
        self.eliminations += 1
        body = simplify(body)
        # hoist a top-of-scope existential lattice block (they commute)
        if isinstance(body, S.Not) and isinstance(body.arg, S.Not):
            return self.eliminate_exists(var, body.arg.arg)
        if isinstance(body, S.Not) and isinstance(body.arg, S.Forall):
            q = body.arg
            return self.eliminate_exists(
                var, S.Exists(q.var, q.sort, S.Not(q.body))
            )
        if isinstance(body, S.Exists) and body.sort == S.L:
            return S.Exists(
                body.var, S.L, self.eliminate_exists(var, body.body)
            )
        body = self.resolve_lattice_quantifiers(var, body)
        if not _formula_has_var(body, var):
            return body
        val_terms: list[S.Term] = []
        _collect_val_atoms(body, var, val_terms)
        if not val_terms:
            raise NotPrimitive(
                f"variable {var} occurs outside valuation atoms"
            )
        mapping = {}
        lowers, uppers, skip = [], [], set()
        for vt in val_terms:
            lin = gterm_to_lin(vt.arg)
            c = lin.get(var)
            rest = lin + Lin.make({var: -c})
            y = S.LVar(self.fresh_lvar())
            mapping[vt] = y
            if c > 0:
                # lin >= 0 iff var >= -rest/c : active lower bound on y
                bound = rest.scale(Fraction(-1) / c)
                li, ui = len(lowers), len(uppers)
                lowers.append((y, bound, False))
                uppers.append((S.Compl(y), bound, True))
            else:
                # lin >= 0 iff var <= rest/(-c) : active upper bound on y
                bound = rest.scale(Fraction(-1) / c)
                li, ui = len(lowers), len(uppers)
                uppers.append((y, bound, False))
                lowers.append((S.Compl(y), bound, True))
            skip.add((li, ui))
        block = PrimitiveBlock(
            var, tuple(lowers), tuple(uppers), frozenset(skip)
        )
        side = eliminate_group_var(block)
        chi = simplify(S.And(_subst_terms(body, mapping), side))
        for vt in reversed(val_terms):
            chi = S.Exists(mapping[vt].name, S.L, chi)
        return simplify(one_point(chi))

    def resolve_lattice_quantifiers(self, var: str, f: S.Formula) -> S.Formula:
        """Deal with lattice-quantified subformulas mentioning var.

        tplus mode rejects them; ec mode removes the quantifiers with
        ba_qe, which is sound in the existentially closed theory."""
        if isinstance(f, (S.Exists, S.Forall)):
            if not _formula_has_var(f, var):
                return f  # opaque: var-free subformulas pass through
            if self.mode == "tplus":
                raise UnsupportedFragment(
                    f"group variable {var} crosses the lattice quantifier "
                    f"over {f.var} in: {S.print_formula(f)}"
                )
            return simplify(ba_qe(f))
        if isinstance(f, S.Not):
            return S.Not(self.resolve_lattice_quantifiers(var, f.arg))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(
                self.resolve_lattice_quantifiers(var, f.left),
                self.resolve_lattice_quantifiers(var, f.right),
            )
        return f


def _extract_terms(phi: S.Formula):
    """Replace Val atoms over free group variables by fresh p_i."""
    terms: list[S.Term] = []

    def sub_term(t: S.Term) -> S.Term:
        if isinstance(t, S.Val):
            if t.arg not in terms:
                terms.append(t.arg)
            return S.LVar(f"p{terms.index(t.arg) + 1}")
        kids = {}
        for attr in ("left", "right", "arg"):
            child = getattr(t, attr, None)
            if isinstance(child, S.Term):
                kids[attr] = sub_term(child)
        if not kids:
            return t
        fields = {k: getattr(t, k) for k in ("factor", "name") if hasattr(t, k)}
        fields.update(kids)
        return type(t)(**fields)

    def go(f: S.Formula) -> S.Formula:
        if isinstance(f, (S.LBelow, S.LEq)):
            return type(f)(sub_term(f.left), sub_term(f.right))
        if isinstance(f, S.Not):
            return S.Not(go(f.arg))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, (S.Exists, S.Forall)):
            return type(f)(f.var, f.sort, go(f.body))
        return f

    return go(phi), terms


def reduce(phi: S.Formula, mode: str = "tplus") -> ReductionOutput:
    """Lattice-sort reduction of an arbitrary well-sorted formula."""
    S.sort_check(phi, S.free_vars(phi))
    phi = rename_bound(phi)
    phi = group_atoms_to_lattice(phi)
    phi = push_valuation_formula(phi)
    phi = simplify(phi)
    reducer = _Reducer(mode)
    chi = simplify(one_point(reducer.run(phi)))
    chi, terms = _extract_terms(chi)
    return ReductionOutput(
        chi=simplify(chi),
        terms=tuple(terms),
        k=len(terms),
        mode=mode,
        eliminations=reducer.eliminations,
    )


def assemble_reduct(out: ReductionOutput) -> S.Formula:
    """The formula (exists p_1..p_k : L)(chi and each p_i = P(t_i))."""
    body = out.chi
    for i, t in enumerate(out.terms, start=1):
        body = S.And(body, S.LEq(S.LVar(f"p{i}"), S.Val(t)))
    for i in range(out.k, 0, -1):
        body = S.Exists(f"p{i}", S.L, body)
    return body


def decide_ec(sigma: S.Formula) -> bool:
    """Truth in every existentially closed densely valued l-group."""
    if S.free_vars(sigma):
        raise NotSentence(f"free variables: {sorted(S.free_vars(sigma))}")
    out = reduce(sigma, mode="ec")
    return ba_decide(out.chi)
