"""Normalization passes on terms and formulas.

These implement the compiler-style front half of the reduction
pipeline: distributing group operations to join-of-meets of linear
forms, pushing the valuation symbol down to primitive linear
arguments, trading group atoms for lattice atoms, and removing lattice
complements in favour of existential witnesses.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import syntax as S
from .errors import SortError
from .linear import Lin

JoinOfMeets = tuple  # tuple of tuples of Lin


def linearize_group_term(t: S.Term) -> JoinOfMeets:
    """Rewrite a G-sorted term as a join of meets of linear forms."""
    if isinstance(t, S.GVar):
        return ((Lin.var(t.name),),)
    if isinstance(t, S.Zero):
        return ((Lin.zero(),),)
    if isinstance(t, S.Add):
        a, b = linearize_group_term(t.left), linearize_group_term(t.right)
        return tuple(
            tuple(x + y for x in meet_a for y in meet_b)
            for meet_a in a
            for meet_b in b
        )
    if isinstance(t, S.Neg):
        return _negate_jom(linearize_group_term(t.arg))
    if isinstance(t, S.GMeet):
        a, b = linearize_group_term(t.left), linearize_group_term(t.right)
        return tuple(ma + mb for ma in a for mb in b)
    if isinstance(t, S.GJoin):
        return linearize_group_term(t.left) + linearize_group_term(t.right)
    if isinstance(t, (S.IntScale, S.RatScale)):
        q = Fraction(t.factor)
        inner = linearize_group_term(t.arg)
        if q == 0:
            return ((Lin.zero(),),)
        if q > 0:
            return tuple(tuple(l.scale(q) for l in meet) for meet in inner)
        return _negate_jom(
            tuple(tuple(l.scale(-q) for l in meet) for meet in inner)
        )
    raise SortError(f"not a G-sorted term: {S.print_term(t)}")


def _negate_jom(jom: JoinOfMeets) -> JoinOfMeets:
    # -(join of meets) = meet of joins of negations; redistribute by
    # picking one negated disjunct from each meet-of-joins factor.
    factors = [tuple(-l for l in meet) for meet in jom]
    return tuple(tuple(choice) for choice in itertools.product(*factors))


def lin_to_gterm(lin: Lin) -> S.Term:
    """Canonical G-term for a linear form (integer coefficients)."""
    parts = []
    for var, coeff in lin.coeffs:
        n = int(coeff)
        if coeff != n:
            raise ValueError("lin_to_gterm expects integer coefficients")
        leaf = S.GVar(var)
        if abs(n) > 1:
            leaf = S.IntScale(abs(n), leaf)
        if n < 0:
            leaf = S.Neg(leaf)
        parts.append(leaf)
    if not parts:
        return S.Zero()
    out = parts[0]
    for p in parts[1:]:
        out = S.Add(out, p)
    return out


def gterm_to_lin(t: S.Term) -> Lin:
    """Linear form of a meet/join-free G-term."""
    jom = linearize_group_term(t)
    if len(jom) != 1 or len(jom[0]) != 1:
        raise ValueError(f"term is not linear: {S.print_term(t)}")
    return jom[0][0]


def val_of_lin(lin: Lin) -> S.Term:
    """Valuation atom for a linear form, in primitive canonical form."""
    if lin.is_zero():
        return S.Top()
    return S.Val(lin_to_gterm(lin.primitive()))


def push_valuation(t: S.Term) -> S.Term:
    """Push every valuation application down to a primitive linear form."""
    if isinstance(t, S.Val):
        jom = linearize_group_term(t.arg)
        joins = []
        for meet in jom:
            vals = [val_of_lin(l) for l in meet]
            out = vals[0]
            for v in vals[1:]:
                out = S.LMeet(out, v)
            joins.append(out)
        result = joins[0]
        for j in joins[1:]:
            result = S.LJoin(result, j)
        return simplify_lterm(result)
    if isinstance(t, (S.LMeet, S.LJoin)):
        return type(t)(push_valuation(t.left), push_valuation(t.right))
    if isinstance(t, S.Compl):
        return S.Compl(push_valuation(t.arg))
    return t


def group_atoms_to_lattice(phi: S.Formula) -> S.Formula:
    """Replace G-sort atoms using density: s <= t becomes P(t - s) = top."""

    def leq(s: S.Term, t: S.Term) -> S.Formula:
        return S.LEq(S.Val(S.Add(t, S.Neg(s))), S.Top())

    def go(f: S.Formula) -> S.Formula:
        if isinstance(f, S.GLeq):
            return leq(f.left, f.right)
        if isinstance(f, S.GEq):
            return S.And(leq(f.left, f.right), leq(f.right, f.left))
        if isinstance(f, (S.LBelow, S.LEq, S.TrueF, S.FalseF)):
            return f
        if isinstance(f, S.Not):
            return S.Not(go(f.arg))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, (S.Exists, S.Forall)):
            return type(f)(f.var, f.sort, go(f.body))
        raise ValueError(f"unknown formula {f!r}")

    return go(phi)


def push_valuation_formula(phi: S.Formula) -> S.Formula:
    """Apply push_valuation below every lattice atom."""

    def go(f: S.Formula) -> S.Formula:
        if isinstance(f, (S.LBelow, S.LEq)):
            return type(f)(push_valuation(f.left), push_valuation(f.right))
        if isinstance(f, S.Not):
            return S.Not(go(f.arg))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, (S.Exists, S.Forall)):
            return type(f)(f.var, f.sort, go(f.body))
        return f

    return go(phi)


# --- complement removal ---

def _term_has_compl(t: S.Term) -> bool:
    if isinstance(t, S.Compl):
        return True
    for attr in ("left", "right", "arg"):
        child = getattr(t, attr, None)
        if isinstance(child, S.Term) and _term_has_compl(child):
            return True
    return False


def _innermost_compl(t: S.Term):
    """Some Compl subterm whose own argument is Compl-free."""
    if isinstance(t, S.Compl) and not _term_has_compl(t.arg):
        return t
    for attr in ("left", "right", "arg"):
        child = getattr(t, attr, None)
        if isinstance(child, S.Term):
            found = _innermost_compl(child)
            if found is not None:
                return found
    return None


def _replace_term(t: S.Term, old: S.Term, new: S.Term) -> S.Term:
    if t == old:
        return new
    kids = {}
    for attr in ("left", "right", "arg"):
        child = getattr(t, attr, None)
        if isinstance(child, S.Term):
            kids[attr] = _replace_term(child, old, new)
    if not kids:
        return t
    fields = {k: getattr(t, k) for k in ("factor", "name") if hasattr(t, k)}
    fields.update(kids)
    return type(t)(**fields)


def remove_complement(phi: S.Formula, _counter=None) -> S.Formula:
    """Eliminate Compl by Boolean-complement witnesses.

    Each removed occurrence costs one existential lattice variable
    asserting the join-top / meet-bottom equations against the
    complemented subterm.
    """
    counter = _counter if _counter is not None else itertools.count()

    def fix_atom(f: S.Formula) -> S.Formula:
        target = _innermost_compl(getattr(f, "left", S.Bot()))
        if target is None:
            target = _innermost_compl(getattr(f, "right", S.Bot()))
        if target is None:
            return f
        w = f"_c{next(counter)}"
        wv = S.LVar(w)
        inner = type(f)(
            _replace_term(f.left, target, wv),
            _replace_term(f.right, target, wv),
        )
        s = target.arg
        side = S.And(
            S.LEq(S.LJoin(wv, s), S.Top()), S.LEq(S.LMeet(wv, s), S.Bot())
        )
        return S.Exists(w, S.L, S.And(fix_atom(inner), side))

    def go(f: S.Formula) -> S.Formula:
        if isinstance(f, (S.LBelow, S.LEq)):
            return fix_atom(f)
        if isinstance(f, (S.GLeq, S.GEq, S.TrueF, S.FalseF)):
            return f
        if isinstance(f, S.Not):
            return S.Not(go(f.arg))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(go(f.left), go(f.right))
        if isinstance(f, (S.Exists, S.Forall)):
            return type(f)(f.var, f.sort, go(f.body))
        raise ValueError(f"unknown formula {f!r}")

    return go(phi)


# --- renaming and prenex form ---

def rename_bound(phi: S.Formula, prefix: str = "_q") -> S.Formula:
    """Give every bound variable a fresh name (no shadowing afterwards)."""
    counter = itertools.count()

    def sub_term(t: S.Term, env: dict[str, str]) -> S.Term:
        if isinstance(t, S.GVar) and t.name in env:
            return S.GVar(env[t.name])
        if isinstance(t, S.LVar) and t.name in env:
            return S.LVar(env[t.name])
        kids = {}
        for attr in ("left", "right", "arg"):
            child = getattr(t, attr, None)
            if isinstance(child, S.Term):
                kids[attr] = sub_term(child, env)
        if not kids:
            return t
        fields = {k: getattr(t, k) for k in ("factor", "name") if hasattr(t, k)}
        fields.update(kids)
        return type(t)(**fields)

    def go(f: S.Formula, env: dict[str, str]) -> S.Formula:
        if isinstance(f, (S.GLeq, S.GEq, S.LBelow, S.LEq)):
            return type(f)(sub_term(f.left, env), sub_term(f.right, env))
        if isinstance(f, S.Not):
            return S.Not(go(f.arg, env))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(go(f.left, env), go(f.right, env))
        if isinstance(f, (S.Exists, S.Forall)):
            fresh = f"{prefix}{next(counter)}"
            inner = dict(env)
            inner[f.var] = fresh
            return type(f)(fresh, f.sort, go(f.body, inner))
        return f

    return go(phi, {})


def to_prenex(phi: S.Formula) -> S.Formula:
    """Logically equivalent prenex form with freshly renamed binders."""
    phi = rename_bound(phi)

    def pull(f: S.Formula):
        """Return (prefix, matrix); prefix is a list of (cls, var, sort)."""
        if isinstance(f, (S.Exists, S.Forall)):
            prefix, matrix = pull(f.body)
            return [(type(f), f.var, f.sort)] + prefix, matrix
        if isinstance(f, S.Not):
            prefix, matrix = pull(f.arg)
            flipped = [
                (S.Forall if cls is S.Exists else S.Exists, v, s)
                for cls, v, s in prefix
            ]
            return flipped, S.Not(matrix)
        if isinstance(f, (S.And, S.Or)):
            lp, lm = pull(f.left)
            rp, rm = pull(f.right)
            return lp + rp, type(f)(lm, rm)
        if isinstance(f, S.Implies):
            return pull(S.Or(S.Not(f.left), f.right))
        return [], f

    prefix, matrix = pull(phi)
    out = matrix
    for cls, var, sort in reversed(prefix):
        out = cls(var, sort, out)
    return out


# --- one-point rule ---

def _subst_var_term(t: S.Term, var: S.Term, repl: S.Term) -> S.Term:
    if t == var:
        return repl
    kids = {}
    for attr in ("left", "right", "arg"):
        child = getattr(t, attr, None)
        if isinstance(child, S.Term):
            kids[attr] = _subst_var_term(child, var, repl)
    if not kids:
        return t
    fields = {k: getattr(t, k) for k in ("factor", "name") if hasattr(t, k)}
    fields.update(kids)
    return type(t)(**fields)


def _subst_var(f: S.Formula, var: S.Term, repl: S.Term) -> S.Formula:
    if isinstance(f, (S.GLeq, S.GEq, S.LBelow, S.LEq)):
        return type(f)(
            _subst_var_term(f.left, var, repl), _subst_var_term(f.right, var, repl)
        )
    if isinstance(f, S.Not):
        return S.Not(_subst_var(f.arg, var, repl))
    if isinstance(f, (S.And, S.Or, S.Implies)):
        return type(f)(
            _subst_var(f.left, var, repl), _subst_var(f.right, var, repl)
        )
    if isinstance(f, (S.Exists, S.Forall)):
        return type(f)(f.var, f.sort, _subst_var(f.body, var, repl))
    return f


def _conjuncts(f: S.Formula):
    if isinstance(f, S.And):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


def one_point(phi: S.Formula) -> S.Formula:
    """Inline quantified variables pinned by a top-level equality.

    'exists x (... and x = t and ...)' with x not in t becomes the body
    with t substituted for x; requires the binders to be non-shadowing
    (run rename_bound first if unsure).
    """
    if isinstance(phi, S.Not):
        return S.Not(one_point(phi.arg))
    if isinstance(phi, (S.And, S.Or, S.Implies)):
        return type(phi)(one_point(phi.left), one_point(phi.right))
    if isinstance(phi, S.Forall):
        return S.Forall(phi.var, phi.sort, one_point(phi.body))
    if not isinstance(phi, S.Exists):
        return phi
    body = one_point(phi.body)
    var = S.GVar(phi.var) if phi.sort == S.G else S.LVar(phi.var)
    eq_cls = S.GEq if phi.sort == S.G else S.LEq
    for c in _conjuncts(body):
        if isinstance(c, eq_cls):
            for mine, other in ((c.left, c.right), (c.right, c.left)):
                if mine == var and phi.var not in S.term_vars(other):
                    return simplify(_subst_var(body, var, other))
    return S.Exists(phi.var, phi.sort, body)


# --- simplification ---

def simplify_lterm(t: S.Term) -> S.Term:
    if isinstance(t, S.LMeet):
        a, b = simplify_lterm(t.left), simplify_lterm(t.right)
        if isinstance(a, S.Bot) or isinstance(b, S.Bot):
            return S.Bot()
        if isinstance(a, S.Top):
            return b
        if isinstance(b, S.Top):
            return a
        if a == b:
            return a
        return S.LMeet(a, b)
    if isinstance(t, S.LJoin):
        a, b = simplify_lterm(t.left), simplify_lterm(t.right)
        if isinstance(a, S.Top) or isinstance(b, S.Top):
            return S.Top()
        if isinstance(a, S.Bot):
            return b
        if isinstance(b, S.Bot):
            return a
        if a == b:
            return a
        return S.LJoin(a, b)
    if isinstance(t, S.Compl):
        a = simplify_lterm(t.arg)
        if isinstance(a, S.Top):
            return S.Bot()
        if isinstance(a, S.Bot):
            return S.Top()
        if isinstance(a, S.Compl):
            return a.arg
        return S.Compl(a)
    return t


def simplify(phi: S.Formula) -> S.Formula:
    """Constant folding over connectives, quantifiers, and easy atoms."""
    if isinstance(phi, (S.LBelow, S.LEq)):
        a, b = simplify_lterm(phi.left), simplify_lterm(phi.right)
        if a == b:
            return S.TRUE
        if isinstance(phi, S.LBelow):
            if isinstance(a, S.Bot) or isinstance(b, S.Top):
                return S.TRUE
        if {type(a), type(b)} == {S.Top, S.Bot}:
            # nontrivial lattice: top and bot differ
            return S.FALSE
        return type(phi)(a, b)
    if isinstance(phi, S.Not):
        a = simplify(phi.arg)
        if isinstance(a, S.TrueF):
            return S.FALSE
        if isinstance(a, S.FalseF):
            return S.TRUE
        if isinstance(a, S.Not):
            return a.arg
        return S.Not(a)
    if isinstance(phi, S.And):
        a, b = simplify(phi.left), simplify(phi.right)
        if isinstance(a, S.FalseF) or isinstance(b, S.FalseF):
            return S.FALSE
        if isinstance(a, S.TrueF):
            return b
        if isinstance(b, S.TrueF):
            return a
        if a == b:
            return a
        return S.And(a, b)
    if isinstance(phi, S.Or):
        a, b = simplify(phi.left), simplify(phi.right)
        if isinstance(a, S.TrueF) or isinstance(b, S.TrueF):
            return S.TRUE
        if isinstance(a, S.FalseF):
            return b
        if isinstance(b, S.FalseF):
            return a
        if a == b:
            return a
        return S.Or(a, b)
    if isinstance(phi, S.Implies):
        a, b = simplify(phi.left), simplify(phi.right)
        if isinstance(a, S.FalseF) or isinstance(b, S.TrueF):
            return S.TRUE
        if isinstance(a, S.TrueF):
            return b
        if isinstance(b, S.FalseF):
            return simplify(S.Not(a))
        return S.Implies(a, b)
    if isinstance(phi, (S.Exists, S.Forall)):
        body = simplify(phi.body)
        if isinstance(body, (S.TrueF, S.FalseF)):
            return body  # both sorts are inhabited
        fv = S.free_vars(body)
        if phi.var not in fv:
            return body
        return type(phi)(phi.var, phi.sort, body)
    return phi
