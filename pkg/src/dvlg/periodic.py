"""The countable model of 2^n-periodic rational sequences.

Group elements are functions from the naturals to the rationals whose
period divides some power of two; they are stored as the value list of
one minimal period. Lattice elements are periodic subsets of the
naturals, stored the same way as bitmasks. Stage vectors keep an
explicit (non-minimal) period exponent so the doubling embeddings
between finite stages are representable without collapsing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadLength, EmptyInput, NegativeInput, PreconditionViolated
from .rationals import format_rat, rat


def _is_doubled(vals) -> bool:
    half = len(vals) // 2
    return vals[:half] == vals[half:]


@dataclass(frozen=True)
class PeriodicFn:
    """A 2^k-periodic sequence in minimal-period form."""

    k: int
    vals: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vals", tuple(rat(v) for v in self.vals))
        if len(self.vals) != 1 << self.k:
            raise BadLength(f"expected 2^{self.k} values, got {len(self.vals)}")
        if self.k > 0 and _is_doubled(self.vals):
            raise BadLength("not in minimal-period form; use normalize()")

    def at(self, i: int) -> Fraction:
        return self.vals[i % len(self.vals)]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.vals)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.vals)

    def lift(self, k: int) -> tuple[Fraction, ...]:
        """Value list at period exponent k >= self.k."""
        return self.vals * (1 << (k - self.k))

    def to_json(self):
        return {"k": self.k, "vals": [format_rat(v) for v in self.vals]}

    @classmethod
    def from_json(cls, data) -> "PeriodicFn":
        return normalize(data["k"], [rat(v) for v in data["vals"]])


@dataclass(frozen=True)
class PeriodicSet:
    """A 2^k-periodic subset of the naturals in minimal-period form."""

    k: int
    mask: int

    def __post_init__(self):
        width = 1 << self.k
        if self.mask < 0 or self.mask >> width:
            raise BadLength(f"mask wider than 2^{self.k}")
        if self.k > 0:
            half = width // 2
            if self.mask >> half == self.mask & ((1 << half) - 1):
                raise BadLength("not in minimal-period form; use normalize_set()")

    def contains(self, i: int) -> bool:
        return bool(self.mask >> (i % (1 << self.k)) & 1)

    def is_empty(self) -> bool:
        return self.mask == 0

    def is_full(self) -> bool:
        return self.mask == (1 << (1 << self.k)) - 1

    def lift_mask(self, k: int) -> int:
        mask, width = self.mask, 1 << self.k
        for _ in range(k - self.k):
            mask |= mask << width
            width *= 2
        return mask

    def to_json(self):
        return {"k": self.k, "mask": [i for i in range(1 << self.k) if self.mask >> i & 1]}

    @classmethod
    def from_json(cls, data) -> "PeriodicSet":
        mask = 0
        for i in data["mask"]:
            mask |= 1 << i
        return normalize_set(data["k"], mask)


@dataclass(frozen=True)
class StageVector:
    """An element of the finite stage n, deliberately not normalized."""

    n: int
    vals: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vals", tuple(rat(v) for v in self.vals))
        if len(self.vals) != 1 << self.n:
            raise BadLength(f"stage {self.n} needs exactly 2^{self.n} values")


PERIODIC_BOT = PeriodicSet(0, 0)
PERIODIC_TOP = PeriodicSet(0, 1)


def normalize(k: int, vals) -> PeriodicFn:
    """Minimal-period representative of the same sequence."""
    vals = [rat(v) for v in vals]
    if len(vals) != 1 << k:
        raise BadLength(f"expected 2^{k} values, got {len(vals)}")
    while k > 0 and _is_doubled(vals):
        vals = vals[: len(vals) // 2]
        k -= 1
    return PeriodicFn(k, tuple(vals))


def normalize_set(k: int, mask: int) -> PeriodicSet:
    width = 1 << k
    if mask < 0 or mask >> width:
        raise BadLength(f"mask wider than 2^{k}")
    while k > 0:
        half = width // 2
        lo = mask & ((1 << half) - 1)
        if mask >> half != lo:
            break
        mask, width, k = lo, half, k - 1
    return PeriodicSet(k, mask)


def periodic_op(kind: str, f: PeriodicFn, g: PeriodicFn | None = None) -> PeriodicFn:
    """Pointwise add/neg/meet/join after lifting to a common period."""
    if kind == "neg":
        return PeriodicFn(f.k, tuple(-v for v in f.vals))
    if g is None:
        raise BadLength(f"{kind} takes two operands")
    k = max(f.k, g.k)
    fv, gv = f.lift(k), g.lift(k)
    if kind == "add":
        out = [a + b for a, b in zip(fv, gv)]
    elif kind == "meet":
        out = [min(a, b) for a, b in zip(fv, gv)]
    elif kind == "join":
        out = [max(a, b) for a, b in zip(fv, gv)]
    else:
        raise ValueError(f"unknown periodic op {kind!r}")
    return normalize(k, out)


def periodic_scale(q, f: PeriodicFn) -> PeriodicFn:
    q = rat(q)
    if q == 0:
        return PeriodicFn(0, (Fraction(0),))
    return PeriodicFn(f.k, tuple(q * v for v in f.vals))


def periodic_leq(f: PeriodicFn, g: PeriodicFn) -> bool:
    k = max(f.k, g.k)
    return all(a <= b for a, b in zip(f.lift(k), g.lift(k)))


def periodic_valuation(f: PeriodicFn) -> PeriodicSet:
    mask = 0
    for i, v in enumerate(f.vals):
        if v >= 0:
            mask |= 1 << i
    return normalize_set(f.k, mask)


def set_op(kind: str, c: PeriodicSet, d: PeriodicSet | None = None):
    if kind == "complement":
        full = (1 << (1 << c.k)) - 1
        return normalize_set(c.k, full & ~c.mask)
    if d is None:
        raise BadLength(f"{kind} takes two operands")
    k = max(c.k, d.k)
    cm, dm = c.lift_mask(k), d.lift_mask(k)
    if kind == "meet":
        return normalize_set(k, cm & dm)
    if kind == "join":
        return normalize_set(k, cm | dm)
    if kind == "below":
        return cm & ~dm == 0
    raise ValueError(f"unknown set op {kind!r}")


def alpha_embed(v: StageVector) -> StageVector:
    """Stage embedding: repeat the value list into the next stage."""
    return StageVector(v.n + 1, v.vals + v.vals)


def beta_embed(mask: int, n: int) -> int:
    """Lattice half of the stage embedding: duplicate the mask."""
    width = 1 << n
    if mask < 0 or mask >> width:
        raise BadLength(f"mask wider than 2^{n}")
    return mask | mask << width


def stage_valuation(v: StageVector) -> int:
    mask = 0
    for i, x in enumerate(v.vals):
        if x >= 0:
            mask |= 1 << i
    return mask


def zero_set(f: PeriodicFn) -> PeriodicSet:
    mask = 0
    for i, v in enumerate(f.vals):
        if v == 0:
            mask |= 1 << i
    return normalize_set(f.k, mask)


def split_nonempty(c: PeriodicSet) -> PeriodicSet:
    """A periodic set strictly between bottom and c; witnesses atomlessness."""
    if c.is_empty():
        raise EmptyInput("cannot split the empty set")
    # Keep c on the first block of the doubled period, drop the second.
    return normalize_set(c.k + 1, c.mask)


def polar_equiv(a: PeriodicFn, b: PeriodicFn) -> bool:
    """Whether a and b have the same polar, via valuations of negations."""
    if not (a.is_nonnegative() and b.is_nonnegative()):
        raise NegativeInput("inputs must be non-negative")
    return periodic_valuation(periodic_op("neg", a)) == periodic_valuation(
        periodic_op("neg", b)
    )


def archimedean_bound(f: PeriodicFn, g: PeriodicFn) -> int:
    """Least n >= 1 for which n*f < g fails, in the lattice partial order.

    Always terminates: the rationals are Archimedean, so some pointwise
    multiple of f escapes below g wherever f is positive.
    """
    for h in (f, g):
        if not h.is_nonnegative() or h.is_zero():
            raise PreconditionViolated("inputs must be strictly positive")
    n = 1
    while True:
        nf = periodic_scale(n, f)
        if not (periodic_leq(nf, g) and nf != g):
            return n
        n += 1


def archimedean_analytic_bound(f: PeriodicFn, g: PeriodicFn) -> int:
    """Desk-scale upper bound: 1 + max over support of f of ceil(g/f)."""
    k = max(f.k, g.k)
    fv, gv = f.lift(k), g.lift(k)
    best = 0
    for a, b in zip(fv, gv):
        if a > 0:
            best = max(best, math.ceil(b / a))
    return 1 + best


def shift(f: PeriodicFn) -> PeriodicFn:
    """The automorphism n -> n + 1: rotate one step left."""
    if f.k == 0:
        return f
    return normalize(f.k, f.vals[1:] + f.vals[:1])


def induced_lattice_auto(c: PeriodicSet) -> PeriodicSet:
    if c.k == 0:
        return c
    width = 1 << c.k
    rotated = (c.mask >> 1) | ((c.mask & 1) << (width - 1))
    return normalize_set(c.k, rotated)
