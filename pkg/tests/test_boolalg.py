"""Atomless-Boolean-algebra engine and the interval-algebra checker."""

from fractions import Fraction

import pytest

from dvlg import syntax as S
from dvlg.boolalg import (
    INTERVAL_BOT,
    INTERVAL_TOP,
    IntervalAlgebraElem,
    ba_decide,
    ba_qe,
    interval_check,
)
from dvlg.errors import DepthExceeded, NotLatticeSorted
from dvlg.parser import parse
from dvlg.syntax import free_vars

ATOMLESS = (
    "forall x:L. (~(x = bot)) -> "
    "(exists y:L. ~(y = bot) & y << x & ~(y = x))"
)


def _equivalent(phi, psi, var="l"):
    """Closed equivalence sentence decided in the atomless theory."""
    both = S.And(S.Implies(phi, psi), S.Implies(psi, phi))
    return ba_decide(S.Forall(var, S.L, both))


class TestBaQe:
    def test_strict_subelement(self):
        phi = parse("exists y:L. y << l & ~(y = bot) & ~(y = l)", {"l": S.L})
        out = ba_qe(phi)
        assert not _has_quantifier(out)
        assert set(free_vars(out)) <= {"l"}
        expected = parse("~(l = bot)", {"l": S.L})
        assert _equivalent(out, expected)

    def test_complement_exists(self):
        phi = parse("exists y:L. y cap l = bot & y cup l = top", {"l": S.L})
        assert _equivalent(ba_qe(phi), S.TRUE)

    def test_trivial_witness(self):
        phi = parse("exists y:L. y = l", {"l": S.L})
        assert _equivalent(ba_qe(phi), S.TRUE)

    def test_quantifier_free_output_everywhere(self):
        phi = parse(
            "forall y:L. exists z:L. z << y cap l & (y = bot -> z = bot)",
            {"l": S.L},
        )
        out = ba_qe(phi)
        assert not _has_quantifier(out)
        assert set(free_vars(out)) <= {"l"}

    def test_group_atoms_rejected(self):
        with pytest.raises(NotLatticeSorted):
            ba_qe(parse("exists a:G. a <= 0"))


class TestBaDecide:
    def test_atomless(self):
        assert ba_decide(parse(ATOMLESS)) is True

    def test_no_atoms_exist(self):
        phi = parse(
            "exists x:L. ~(x = bot) & "
            "(forall y:L. y << x -> y = bot | y = x)"
        )
        assert ba_decide(phi) is False

    def test_nontrivial(self):
        assert ba_decide(parse("top = bot")) is False

    def test_complementation(self):
        phi = parse("forall a:L. a cup compl(a) = top & a cap compl(a) = bot")
        assert ba_decide(phi) is True

    def test_distributivity(self):
        phi = parse(
            "forall x:L. forall y:L. forall z:L. "
            "x cap (y cup z) = (x cap y) cup (x cap z)"
        )
        assert ba_decide(phi) is True


class TestIntervalAlgebra:
    def test_canonical_merge(self):
        a = IntervalAlgebraElem.make(
            [(Fraction(0), Fraction(1, 2)), (Fraction(1, 2), Fraction(3, 4))]
        )
        assert a.intervals == ((Fraction(0), Fraction(3, 4)),)

    def test_empty_dropped(self):
        a = IntervalAlgebraElem.make([(Fraction(1, 3), Fraction(1, 3))])
        assert a == INTERVAL_BOT

    def test_complement(self):
        a = IntervalAlgebraElem.make([(Fraction(1, 4), Fraction(1, 2))])
        c = a.complement()
        assert c.intervals == (
            (Fraction(0), Fraction(1, 4)),
            (Fraction(1, 2), Fraction(1)),
        )
        assert a.join(c) == INTERVAL_TOP
        assert a.meet(c) == INTERVAL_BOT

    def test_proper_half(self):
        a = IntervalAlgebraElem.make([(Fraction(0), Fraction(1, 2))])
        h = a.proper_half()
        assert h.below(a) and h != a and h != INTERVAL_BOT

    def test_checker_examples(self):
        assert interval_check(parse(ATOMLESS), 2) is True
        assert interval_check(parse("exists x:L. x cap compl(x) = bot"), 1) is True
        assert interval_check(parse("forall x:L. x = bot | x = top"), 1) is False

    def test_depth_exceeded(self):
        with pytest.raises(DepthExceeded):
            interval_check(parse(ATOMLESS), 5)


def _has_quantifier(phi):
    if isinstance(phi, (S.Exists, S.Forall)):
        return True
    kids = []
    if isinstance(phi, S.Not):
        kids = [phi.arg]
    elif isinstance(phi, (S.And, S.Or, S.Implies)):
        kids = [phi.left, phi.right]
    return any(_has_quantifier(k) for k in kids)
