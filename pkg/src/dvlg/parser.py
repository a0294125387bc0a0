"""Recursive-descent parser for the ASCII surface syntax.

Grammar summary (tightest binding first): unary minus and integer
scaling, meet/join/cap/cup, + and binary -, relations (<=, <<, =, and
strict < as sugar), ~, &, |, ->, quantifiers. Quantifier bodies extend
as far right as possible.
"""

from __future__ import annotations

import re

from .errors import FormulaSyntaxError, SortError
from . import syntax as S

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>->|<=|<<|[()\.:,;&|~+\-*=<]))"
)

_KEYWORDS = {
    "forall", "exists", "meet", "join", "cap", "cup", "compl",
    "bot", "top", "true", "false", "P",
}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise FormulaSyntaxError(
                    f"unexpected character {text[pos]!r}", position=pos
                )
            break
        if m.group("num"):
            tokens.append(("num", m.group("num"), m.start()))
        elif m.group("ident"):
            word = m.group("ident")
            kind = "kw" if word in _KEYWORDS else "ident"
            tokens.append((kind, word, m.start()))
        else:
            tokens.append(("op", m.group("op"), m.start()))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, context: dict[str, str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.context = dict(context or {})
        self.bound: list[tuple[str, str]] = []

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise FormulaSyntaxError(
                f"expected {value!r}, found {val or 'end of input'!r}", position=pos
            )

    def at(self, value: str) -> bool:
        return self.peek()[1] == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    # --- sorts of variables in scope ---

    def var_sort(self, name: str):
        for var, sort in reversed(self.bound):
            if var == name:
                return sort
        return self.context.get(name)

    # --- formulas ---

    def formula(self) -> S.Formula:
        kind, val, _ = self.peek()
        if val in ("forall", "exists"):
            self.next()
            names = [self.ident()]
            while self.accept(","):
                names.append(self.ident())
            self.expect(":")
            sort = self.sort()
            self.expect(".")
            for name in names:
                self.bound.append((name, sort))
            body = self.formula()
            cls = S.Forall if val == "forall" else S.Exists
            for name in reversed(names):
                self.bound.pop()
                body = cls(name, sort, body)
            return body
        return self.implies()

    def ident(self) -> str:
        kind, val, pos = self.next()
        if kind != "ident":
            raise FormulaSyntaxError(f"expected a variable, found {val!r}", position=pos)
        return val

    def sort(self) -> str:
        kind, val, pos = self.next()
        if val not in (S.G, S.L):
            raise FormulaSyntaxError(f"expected sort G or L, found {val!r}", position=pos)
        return val

    def implies(self) -> S.Formula:
        left = self.or_()
        if self.accept("->"):
            return S.Implies(left, self.implies())
        return left

    def or_(self) -> S.Formula:
        out = self.and_()
        while self.accept("|"):
            out = S.Or(out, self.and_())
        return out

    def and_(self) -> S.Formula:
        out = self.not_()
        while self.accept("&"):
            out = S.And(out, self.not_())
        return out

    def not_(self) -> S.Formula:
        if self.accept("~"):
            return S.Not(self.not_())
        return self.atom()

    def atom(self) -> S.Formula:
        if self.accept("true"):
            return S.TRUE
        if self.accept("false"):
            return S.FALSE
        kind, val, pos = self.peek()
        if val in ("forall", "exists"):
            return self.formula()
        if val == "(":
            # Could be a parenthesized formula or a parenthesized term
            # opening a relation; try the formula reading first.
            mark = self.i
            try:
                self.next()
                inner = self.formula()
                self.expect(")")
                return inner
            except (FormulaSyntaxError, SortError):
                self.i = mark
        return self.relation()

    def relation(self) -> S.Formula:
        _, _, pos = self.peek()
        left = self.term()
        kind, op, oppos = self.next()
        if op not in ("<=", "<<", "=", "<"):
            raise FormulaSyntaxError(
                f"expected a relation, found {op or 'end of input'!r}", position=oppos
            )
        right = self.term()
        lsort = self.term_sort_of(left)
        rsort = self.term_sort_of(right)
        sort = lsort or rsort
        if op == "<=":
            sort = sort or S.G
            if sort != S.G:
                raise SortError(f"<= relates G-sorted terms near position {pos}")
            return S.GLeq(left, right)
        if op == "<<":
            sort = sort or S.L
            if sort != S.L:
                raise SortError(f"<< relates L-sorted terms near position {pos}")
            return S.LBelow(left, right)
        if sort is None:
            raise SortError(
                f"cannot infer the sort of '{S.print_term(left)} {op} "
                f"{S.print_term(right)}'; declare the variables"
            )
        if op == "=":
            return S.GEq(left, right) if sort == S.G else S.LEq(left, right)
        # strict < is sugar for (<= or <<) plus disequality
        if sort == S.G:
            return S.And(S.GLeq(left, right), S.Not(S.GEq(left, right)))
        return S.And(S.LBelow(left, right), S.Not(S.LEq(left, right)))

    def term_sort_of(self, t: S.Term):
        """Sort if determinable: structural, or from binders/context."""
        if isinstance(t, S.GVar):
            return self.var_sort(t.name)
        try:
            ctx = dict(self.context)
            ctx.update(dict(self.bound))
            return S.term_sort(t, ctx)
        except SortError:
            raise

    # --- terms ---
    # Bare variables parse as GVar placeholders; resolve() retypes them
    # once the variable's sort is known.

    def term(self) -> S.Term:
        left = self.lat_level()
        while True:
            if self.accept("+"):
                left = S.Add(left, self.lat_level())
            elif self.accept("-"):
                left = S.Add(left, S.Neg(self.lat_level()))
            else:
                return left

    def lat_level(self) -> S.Term:
        left = self.unary()
        while True:
            if self.accept("meet"):
                left = S.GMeet(left, self.unary())
            elif self.accept("join"):
                left = S.GJoin(left, self.unary())
            elif self.accept("cap"):
                left = S.LMeet(left, self.unary())
            elif self.accept("cup"):
                left = S.LJoin(left, self.unary())
            else:
                return left

    def unary(self) -> S.Term:
        kind, val, pos = self.peek()
        if val == "-":
            self.next()
            return S.Neg(self.unary())
        if kind == "num":
            self.next()
            if val == "0" and not self.at("*"):
                return S.Zero()
            self.expect("*")
            return S.IntScale(int(val), self.unary())
        return self.primary()

    def primary(self) -> S.Term:
        kind, val, pos = self.next()
        if val == "bot":
            return S.Bot()
        if val == "top":
            return S.Top()
        if val == "P":
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return S.Val(arg)
        if val == "compl":
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return S.Compl(arg)
        if val == "(":
            inner = self.term()
            self.expect(")")
            return inner
        if kind == "ident":
            sort = self.var_sort(val)
            return S.LVar(val) if sort == S.L else S.GVar(val)
        raise FormulaSyntaxError(
            f"expected a term, found {val or 'end of input'!r}", position=pos
        )


def _resolve_var_nodes(phi: S.Formula, context: dict[str, str]) -> S.Formula:
    """Retype bare variable leaves to their declared sorts.

    Variables bound at sort L but used before the binder was visible in
    term position (or free L-vars named in context) may have parsed as
    GVar; fix them against the final scoping.
    """

    def fix_term(t: S.Term, ctx: dict[str, str]) -> S.Term:
        if isinstance(t, (S.GVar, S.LVar)):
            sort = ctx.get(t.name)
            if sort == S.L:
                return S.LVar(t.name)
            if sort == S.G:
                return S.GVar(t.name)
            return t
        kids = {}
        for attr in ("left", "right", "arg"):
            child = getattr(t, attr, None)
            if isinstance(child, S.Term):
                kids[attr] = fix_term(child, ctx)
        if not kids:
            return t
        return type(t)(**{**_term_fields(t), **kids})

    def fix(f: S.Formula, ctx: dict[str, str]) -> S.Formula:
        if isinstance(f, (S.GLeq, S.GEq, S.LBelow, S.LEq)):
            return type(f)(fix_term(f.left, ctx), fix_term(f.right, ctx))
        if isinstance(f, S.Not):
            return S.Not(fix(f.arg, ctx))
        if isinstance(f, (S.And, S.Or, S.Implies)):
            return type(f)(fix(f.left, ctx), fix(f.right, ctx))
        if isinstance(f, (S.Exists, S.Forall)):
            inner = dict(ctx)
            inner[f.var] = f.sort
            return type(f)(f.var, f.sort, fix(f.body, inner))
        return f

    return fix(phi, dict(context))


def _term_fields(t: S.Term) -> dict:
    out = {}
    for attr in ("factor", "left", "right", "arg", "name"):
        if hasattr(t, attr):
            out[attr] = getattr(t, attr)
    return out


def parse(text: str, context: dict[str, str] | None = None) -> S.Formula:
    """Parse one formula; context declares the sorts of free variables."""
    parser = _Parser(text, context)
    phi = parser.formula()
    kind, val, pos = parser.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"trailing input at {val!r}", position=pos)
    phi = _resolve_var_nodes(phi, parser.context)
    S.sort_check(phi, context)
    return phi


def parse_many(text: str, context: dict[str, str] | None = None) -> list[S.Formula]:
    """Parse a batch: ';'-separated blocks, else one formula per line."""
    if ";" in text:
        units = text.split(";")
    else:
        units = text.splitlines()
    return [parse(u, context) for u in units if u.strip()]
