"""Two-sorted terms and formulas for the valued l-group language.

Sorts are G (group) and L (lattice). All nodes are immutable; rewriting
passes build fresh trees. RatScale and linear-combination terms are
engine-internal: the surface grammar only has integer scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SortError
from .rationals import format_rat

G = "G"
L = "L"


class Term:
    __slots__ = ()


# --- group-sorted terms ---

@dataclass(frozen=True)
class GVar(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class GMeet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class GJoin(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class IntScale(Term):
    factor: int
    arg: Term


@dataclass(frozen=True)
class RatScale(Term):
    """Engine-internal rational scaling; never produced by the parser."""

    factor: Fraction
    arg: Term


# --- lattice-sorted terms ---

@dataclass(frozen=True)
class LVar(Term):
    name: str


@dataclass(frozen=True)
class Bot(Term):
    pass


@dataclass(frozen=True)
class Top(Term):
    pass


@dataclass(frozen=True)
class LMeet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class LJoin(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Compl(Term):
    arg: Term


@dataclass(frozen=True)
class Val(Term):
    """The valuation symbol applied to a group-sorted term."""

    arg: Term


# --- formulas ---

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class GLeq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class GEq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class LBelow(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class LEq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sort: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    sort: str
    body: Formula


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


TRUE = TrueF()
FALSE = FalseF()

_G_NODES = (GVar, Zero, Add, Neg, GMeet, GJoin, IntScale, RatScale)
_L_NODES = (LVar, Bot, Top, LMeet, LJoin, Compl, Val)


def term_sort(t: Term, context: dict[str, str] | None = None) -> str:
    """Sort of a term, checking well-sortedness along the way."""
    context = context or {}
    if isinstance(t, GVar):
        if context.get(t.name, G) != G:
            raise SortError(f"variable {t.name} used at sort G but declared L")
        return G
    if isinstance(t, LVar):
        if context.get(t.name, L) != L:
            raise SortError(f"variable {t.name} used at sort L but declared G")
        return L
    if isinstance(t, Zero):
        return G
    if isinstance(t, (Bot, Top)):
        return L
    if isinstance(t, (Add, GMeet, GJoin)):
        for side in (t.left, t.right):
            if term_sort(side, context) != G:
                raise SortError(f"G-operator over L-sorted operand: {print_term(side)}")
        return G
    if isinstance(t, (Neg, IntScale, RatScale)):
        if term_sort(t.arg, context) != G:
            raise SortError(f"G-operator over L-sorted operand: {print_term(t.arg)}")
        return G
    if isinstance(t, (LMeet, LJoin)):
        for side in (t.left, t.right):
            if term_sort(side, context) != L:
                raise SortError(f"L-operator over G-sorted operand: {print_term(side)}")
        return L
    if isinstance(t, Compl):
        if term_sort(t.arg, context) != L:
            raise SortError(f"compl over G-sorted operand: {print_term(t.arg)}")
        return L
    if isinstance(t, Val):
        if term_sort(t.arg, context) != G:
            raise SortError(f"P takes a G-sorted argument: {print_term(t.arg)}")
        return L
    raise SortError(f"unknown term node {t!r}")


def sort_check(phi: Formula, context: dict[str, str] | None = None) -> None:
    """Raise SortError unless every constructor respects the signatures."""
    context = dict(context or {})

    def check(f: Formula, ctx: dict[str, str]):
        if isinstance(f, (GLeq, GEq)):
            for side in (f.left, f.right):
                if term_sort(side, ctx) != G:
                    raise SortError(f"G-relation over L-sorted term: {print_term(side)}")
        elif isinstance(f, (LBelow, LEq)):
            for side in (f.left, f.right):
                if term_sort(side, ctx) != L:
                    raise SortError(f"L-relation over G-sorted term: {print_term(side)}")
        elif isinstance(f, Not):
            check(f.arg, ctx)
        elif isinstance(f, (And, Or, Implies)):
            check(f.left, ctx)
            check(f.right, ctx)
        elif isinstance(f, (Exists, Forall)):
            if f.sort not in (G, L):
                raise SortError(f"unknown sort {f.sort!r}")
            inner = dict(ctx)
            inner[f.var] = f.sort
            check(f.body, inner)
        elif isinstance(f, (TrueF, FalseF)):
            pass
        else:
            raise SortError(f"unknown formula node {f!r}")

    check(phi, context)


def term_vars(t: Term) -> set[str]:
    if isinstance(t, (GVar, LVar)):
        return {t.name}
    out: set[str] = set()
    for attr in ("left", "right", "arg"):
        child = getattr(t, attr, None)
        if isinstance(child, Term):
            out |= term_vars(child)
    return out


def free_vars(phi: Formula) -> dict[str, str]:
    """Free variables with their sorts (sorts inferred from use sites)."""
    out: dict[str, str] = {}

    def visit_term(t: Term, bound: dict[str, str], sort_hint: str):
        if isinstance(t, (GVar, LVar)):
            s = G if isinstance(t, GVar) else L
            if t.name not in bound:
                out.setdefault(t.name, s)
            return
        for attr in ("left", "right", "arg"):
            child = getattr(t, attr, None)
            if isinstance(child, Term):
                visit_term(child, bound, sort_hint)

    def visit(f: Formula, bound: dict[str, str]):
        if isinstance(f, (GLeq, GEq, LBelow, LEq)):
            visit_term(f.left, bound, "")
            visit_term(f.right, bound, "")
        elif isinstance(f, Not):
            visit(f.arg, bound)
        elif isinstance(f, (And, Or, Implies)):
            visit(f.left, bound)
            visit(f.right, bound)
        elif isinstance(f, (Exists, Forall)):
            inner = dict(bound)
            inner[f.var] = f.sort
            visit(f.body, inner)

    visit(phi, {})
    return out


# --- printing ---
#
# Precedence (loosest to tightest): quantifier, ->, |, &, ~, relations,
# +/-, meet/join/cap/cup, scaling, unary.

def print_term(t: Term) -> str:
    def go(t: Term, prec: int) -> str:
        if isinstance(t, GVar) or isinstance(t, LVar):
            return t.name
        if isinstance(t, Zero):
            return "0"
        if isinstance(t, Bot):
            return "bot"
        if isinstance(t, Top):
            return "top"
        if isinstance(t, Add):
            s = f"{go(t.left, 1)} + {go(t.right, 2)}"
            return f"({s})" if prec > 1 else s
        if isinstance(t, Neg):
            return f"-{go(t.arg, 4)}"
        if isinstance(t, (GMeet, GJoin, LMeet, LJoin)):
            word = {GMeet: "meet", GJoin: "join", LMeet: "cap", LJoin: "cup"}[type(t)]
            s = f"{go(t.left, 2)} {word} {go(t.right, 3)}"
            return f"({s})" if prec > 2 else s
        if isinstance(t, IntScale):
            s = f"{t.factor}*{go(t.arg, 4)}"
            return f"({s})" if prec > 3 else s
        if isinstance(t, RatScale):
            s = f"{format_rat(t.factor)}*{go(t.arg, 4)}"
            return f"({s})" if prec > 3 else s
        if isinstance(t, Compl):
            return f"compl({go(t.arg, 0)})"
        if isinstance(t, Val):
            return f"P({go(t.arg, 0)})"
        raise ValueError(f"unknown term {t!r}")

    return go(t, 0)


def print_formula(phi: Formula) -> str:
    def go(f: Formula, prec: int) -> str:
        if isinstance(f, TrueF):
            return "true"
        if isinstance(f, FalseF):
            return "false"
        if isinstance(f, GLeq):
            return f"{print_term(f.left)} <= {print_term(f.right)}"
        if isinstance(f, LBelow):
            return f"{print_term(f.left)} << {print_term(f.right)}"
        if isinstance(f, (GEq, LEq)):
            return f"{print_term(f.left)} = {print_term(f.right)}"
        if isinstance(f, Not):
            return f"~{go(f.arg, 4)}"
        if isinstance(f, And):
            s = f"{go(f.left, 3)} & {go(f.right, 4)}"
            return f"({s})" if prec > 3 else s
        if isinstance(f, Or):
            s = f"{go(f.left, 2)} | {go(f.right, 3)}"
            return f"({s})" if prec > 2 else s
        if isinstance(f, Implies):
            s = f"{go(f.left, 2)} -> {go(f.right, 1)}"
            return f"({s})" if prec > 1 else s
        if isinstance(f, (Exists, Forall)):
            word = "exists" if isinstance(f, Exists) else "forall"
            s = f"{word} {f.var}:{f.sort}. {go(f.body, 0)}"
            return f"({s})" if prec > 0 else s
        raise ValueError(f"unknown formula {f!r}")

    return go(phi, 0)
