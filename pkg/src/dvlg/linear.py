"""Linear rational forms and Fourier-Motzkin elimination.

A Lin is a formal rational combination of variables with no constant
part in the group language; the oracle layer reuses it with synthetic
per-point unknowns plus a dedicated constant slot named CONST.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .rationals import rat

CONST = "1"  # reserved pseudo-variable carrying the constant part


@dataclass(frozen=True)
class Lin:
    """Sparse linear form: mapping variable -> nonzero coefficient."""

    coeffs: tuple[tuple[str, Fraction], ...]

    @classmethod
    def make(cls, mapping) -> "Lin":
        items = tuple(
            sorted((v, rat(c)) for v, c in dict(mapping).items() if c != 0)
        )
        return cls(items)

    @classmethod
    def var(cls, name: str) -> "Lin":
        return cls.make({name: Fraction(1)})

    @classmethod
    def zero(cls) -> "Lin":
        return cls(())

    @classmethod
    def const(cls, q) -> "Lin":
        return cls.make({CONST: rat(q)})

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def get(self, var: str) -> Fraction:
        return dict(self.coeffs).get(var, Fraction(0))

    def __add__(self, other: "Lin") -> "Lin":
        out = self.as_dict()
        for v, c in other.coeffs:
            out[v] = out.get(v, Fraction(0)) + c
        return Lin.make(out)

    def __neg__(self) -> "Lin":
        return Lin(tuple((v, -c) for v, c in self.coeffs))

    def __sub__(self, other: "Lin") -> "Lin":
        return self + (-other)

    def scale(self, q) -> "Lin":
        q = rat(q)
        if q == 0:
            return Lin.zero()
        return Lin(tuple(sorted((v, q * c) for v, c in self.coeffs)))

    def is_zero(self) -> bool:
        return not self.coeffs

    def vars(self) -> set[str]:
        return {v for v, _ in self.coeffs if v != CONST}

    def primitive(self) -> "Lin":
        """Scale by the unique positive rational giving integer
        coefficients with gcd 1. Signs are unchanged."""
        if not self.coeffs:
            return self
        denom_lcm = 1
        for _, c in self.coeffs:
            denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
        nums = [c * denom_lcm for _, c in self.coeffs]
        g = 0
        for n in nums:
            g = gcd(g, int(n))
        return self.scale(Fraction(denom_lcm, g))

    def eval(self, env: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for v, c in self.coeffs:
            if v == CONST:
                total += c
            else:
                total += c * env[v]
        return total


@dataclass(frozen=True)
class LinConstraint:
    """lhs REL 0 with REL one of >=, >, =."""

    lhs: Lin
    rel: str  # ">=", ">", "="

    def __post_init__(self):
        if self.rel not in (">=", ">", "="):
            raise ValueError(f"bad relation {self.rel!r}")

    def holds(self, env: dict[str, Fraction]) -> bool:
        v = self.lhs.eval(env)
        if self.rel == ">=":
            return v >= 0
        if self.rel == ">":
            return v > 0
        return v == 0

    def constant_truth(self):
        """Truth value if variable-free, else None."""
        if self.lhs.vars():
            return None
        return self.holds({})

    def negated(self) -> list["LinConstraint"]:
        """Negation as a disjunction of atomic constraints."""
        if self.rel == ">=":
            return [LinConstraint(-self.lhs, ">")]
        if self.rel == ">":
            return [LinConstraint(-self.lhs, ">=")]
        return [LinConstraint(self.lhs, ">"), LinConstraint(-self.lhs, ">")]


def fm_eliminate_conj(var: str, constraints: list[LinConstraint]) -> list[LinConstraint] | None:
    """Eliminate var from a conjunction; None means plainly unsatisfiable.

    Equalities mentioning the variable are substituted first; remaining
    bounds are paired lower-vs-upper with strictness ORed.
    """
    work = list(constraints)

    # substitute an equality if present
    for i, c in enumerate(work):
        a = c.lhs.get(var)
        if c.rel == "=" and a != 0:
            # var = -(rest)/a
            rest = c.lhs + Lin.make({var: -a})
            sol = rest.scale(Fraction(-1) / a)
            out = []
            for j, d in enumerate(work):
                if j == i:
                    continue
                b = d.lhs.get(var)
                newlhs = d.lhs + Lin.make({var: -b}) + sol.scale(b)
                nd = LinConstraint(newlhs, d.rel)
                t = nd.constant_truth()
                if t is False:
                    return None
                if t is None:
                    out.append(nd)
            return out

    lowers, uppers, rest = [], [], []
    for c in work:
        a = c.lhs.get(var)
        if a == 0:
            t = c.constant_truth()
            if t is False:
                return None
            if t is None:
                rest.append(c)
        else:
            # normalize to  var REL bound  /  bound REL var
            bound = (c.lhs + Lin.make({var: -a})).scale(Fraction(-1) / a)
            strict = c.rel == ">"
            if a > 0:
                lowers.append((bound, strict))  # var >= bound
            else:
                uppers.append((bound, strict))  # var <= bound
    for lo, lo_strict in lowers:
        for up, up_strict in uppers:
            diff = up - lo
            rel = ">" if (lo_strict or up_strict) else ">="
            c = LinConstraint(diff, rel)
            t = c.constant_truth()
            if t is False:
                return None
            if t is None:
                rest.append(c)
    return rest


def fm_eliminate(var: str, dnf: list[list[LinConstraint]]) -> list[list[LinConstraint]]:
    """Eliminate an existential variable from a DNF of constraint lists.

    Result is an equivalent DNF over the remaining variables; an empty
    conjunction means True, an empty disjunction False.
    """
    out = []
    for conj in dnf:
        reduced = fm_eliminate_conj(var, conj)
        if reduced is not None:
            out.append(reduced)
    return out


def dnf_satisfiable_grid(dnf, var_names, grid):
    """Brute-force check used as a test oracle: any grid point satisfying
    some disjunct."""
    from itertools import product

    for point in product(grid, repeat=len(var_names)):
        env = dict(zip(var_names, point))
        for conj in dnf:
            if all(c.holds(env) for c in conj):
                return True
    return False
