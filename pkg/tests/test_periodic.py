"""Periodic model: frozen values, stage maps, automorphism laws."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dvlg.errors import BadLength, EmptyInput, NegativeInput, PreconditionViolated
from dvlg.periodic import (
    PERIODIC_BOT,
    PERIODIC_TOP,
    PeriodicFn,
    PeriodicSet,
    StageVector,
    alpha_embed,
    archimedean_analytic_bound,
    archimedean_bound,
    beta_embed,
    induced_lattice_auto,
    normalize,
    normalize_set,
    periodic_leq,
    periodic_op,
    periodic_scale,
    periodic_valuation,
    polar_equiv,
    set_op,
    shift,
    split_nonempty,
    stage_valuation,
    zero_set,
)
from dvlg.rationals import rat


def pf(k, vals):
    return normalize(k, vals)


def ps(k, indices):
    mask = 0
    for i in indices:
        mask |= 1 << i
    return normalize_set(k, mask)


class TestNormalize:
    def test_doubled_collapses(self):
        assert pf(2, [3, 5, 3, 5]) == PeriodicFn(1, (rat(3), rat(5)))

    def test_minimal_unchanged(self):
        assert pf(1, [3, 5]) == PeriodicFn(1, (rat(3), rat(5)))

    def test_aperiodic_unchanged(self):
        assert pf(2, [1, 2, 3, 4]).k == 2

    def test_bad_length(self):
        with pytest.raises(BadLength):
            normalize(2, [1, 2, 3])

    def test_constructor_rejects_doubled(self):
        with pytest.raises(BadLength):
            PeriodicFn(1, (rat(3), rat(3)))

    def test_idempotent_and_denotation_preserving(self):
        f = pf(3, [1, 2, 1, 2, 1, 2, 1, 2])
        assert f.k == 1
        g = pf(1, [1, 2])
        for i in range(32):
            assert f.at(i) == g.at(i)


class TestOps:
    def test_meet_example(self):
        assert periodic_op("meet", pf(0, [2]), pf(1, [1, 3])) == pf(1, [1, 2])

    def test_add_cancellation(self):
        assert periodic_op("add", pf(1, [1, -1]), pf(1, [-1, 1])) == pf(0, [0])

    def test_neg(self):
        assert periodic_op("neg", pf(1, [1, 0])) == pf(1, [-1, 0])

    def test_lift_independence(self):
        f, g = pf(1, [1, -2]), pf(2, [0, 3, -1, 3])
        direct = periodic_op("join", f, g)
        # lifting both operands one exponent higher changes nothing
        lifted = periodic_op(
            "join", pf(2, list(f.lift(2))), pf(3, list(g.lift(3)))
        )
        assert direct == lifted


class TestValuation:
    def test_mixed(self):
        assert periodic_valuation(pf(2, [1, -1, 0, -2])) == ps(2, [0, 2])

    def test_negative_constant_bot(self):
        assert periodic_valuation(pf(0, [-1])) == PERIODIC_BOT

    def test_zero_top(self):
        assert periodic_valuation(pf(0, [0])) == PERIODIC_TOP


class TestStageMaps:
    def test_alpha(self):
        v = StageVector(1, (rat(1), rat(-1)))
        assert alpha_embed(v) == StageVector(2, (rat(1), rat(-1), rat(1), rat(-1)))

    def test_beta(self):
        # {0} at stage 1 -> {0, 2} at stage 2
        assert beta_embed(0b01, 1) == 0b0101

    def test_valued_embedding_square(self):
        v = StageVector(1, (rat(-1), rat(2)))
        assert stage_valuation(alpha_embed(v)) == beta_embed(stage_valuation(v), 1)
        assert stage_valuation(alpha_embed(v)) == 0b1010  # {1, 3}

    def test_directed_system_coherence(self):
        v = StageVector(1, (rat(1), rat(-2)))
        assert alpha_embed(alpha_embed(v)).vals == v.vals * 4


class TestSplit:
    def test_top_gives_evens(self):
        assert split_nonempty(PERIODIC_TOP) == ps(1, [0])

    def test_evens_split(self):
        out = split_nonempty(ps(1, [0]))
        assert out == ps(2, [0])
        # strict containment in the lift of the input
        assert set_op("below", out, ps(1, [0]))
        assert out != ps(1, [0])

    def test_normalized_input(self):
        # (1, {0,1}) normalizes to top, whose split is the evens
        assert split_nonempty(ps(1, [0, 1])) == ps(1, [0])

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            split_nonempty(PERIODIC_BOT)

    def test_strictly_between(self):
        c = ps(2, [0, 3])
        out = split_nonempty(c)
        assert not out.is_empty()
        assert set_op("below", out, c)
        assert out != c


class TestZeroSet:
    def test_mixed(self):
        assert zero_set(pf(1, [0, -3])) == ps(1, [0])

    def test_zero_is_top(self):
        assert zero_set(pf(0, [0])) == PERIODIC_TOP

    def test_no_zero_is_bot(self):
        assert zero_set(pf(2, [1, 2, 3, 4])) == PERIODIC_BOT


class TestPolar:
    def test_equal_zero_sets(self):
        assert polar_equiv(pf(1, [1, 0]), pf(1, [2, 0]))

    def test_different_zero_sets(self):
        assert not polar_equiv(pf(0, [1]), pf(1, [1, 0]))

    def test_reflexive(self):
        a = pf(2, [1, 0, 2, 0])
        assert polar_equiv(a, a)

    def test_negative_rejected(self):
        with pytest.raises(NegativeInput):
            polar_equiv(pf(0, [-1]), pf(0, [1]))

    def test_matches_zero_sets(self):
        a, b = pf(2, [1, 0, 0, 2]), pf(2, [3, 0, 0, 1])
        assert polar_equiv(a, b) == (zero_set(a) == zero_set(b))


class TestArchimedean:
    def test_constants(self):
        assert archimedean_bound(pf(0, [1]), pf(0, [5])) == 5

    def test_pointwise(self):
        # 3*(1,2) = (3,6) <= (3,10) and is distinct, so 3 still works;
        # 4*(1,2) = (4,8) fails below (3,10): the bound is 4.
        assert archimedean_bound(pf(1, [1, 2]), pf(1, [3, 10])) == 4

    def test_partial_support(self):
        assert archimedean_bound(pf(1, [0, 1]), pf(0, [1])) == 2

    def test_precondition(self):
        with pytest.raises(PreconditionViolated):
            archimedean_bound(pf(0, [0]), pf(0, [1]))
        with pytest.raises(PreconditionViolated):
            archimedean_bound(pf(0, [1]), pf(1, [1, -1]))

    def test_analytic_bound_dominates(self):
        cases = [
            (pf(0, [1]), pf(0, [5])),
            (pf(1, [1, 2]), pf(1, [3, 10])),
            (pf(1, [0, 1]), pf(0, [1])),
            (pf(2, ["1/2", 1, 0, 2]), pf(1, [3, "7/2"])),
        ]
        for f, g in cases:
            n = archimedean_bound(f, g)
            assert 1 <= n <= archimedean_analytic_bound(f, g)
            # minimality: every smaller multiple is strictly below g
            for m in range(1, n):
                mf = periodic_scale(m, f)
                assert periodic_leq(mf, g) and mf != g


class TestShift:
    def test_rotation(self):
        assert shift(pf(2, [1, 2, 3, 4])) == pf(2, [2, 3, 4, 1])

    def test_lattice_rotation(self):
        assert induced_lattice_auto(ps(1, [0])) == ps(1, [1])

    def test_commutes_with_valuation(self):
        f = pf(2, [1, -1, 2, -2])
        assert periodic_valuation(shift(f)) == induced_lattice_auto(
            periodic_valuation(f)
        )
        assert periodic_valuation(shift(f)) == ps(2, [1, 3])

    def test_order_of_iterate(self):
        f = pf(2, [1, 2, 3, 4])
        g = f
        for _ in range(4):
            g = shift(g)
        assert g == f


rats = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=4
)


@st.composite
def periodic_fns(draw, max_k=2):
    k = draw(st.integers(0, max_k))
    vals = draw(st.lists(rats, min_size=1 << k, max_size=1 << k))
    return normalize(k, vals)


@given(periodic_fns(), periodic_fns())
def test_shift_is_homomorphism(f, g):
    for kind in ("add", "meet", "join"):
        assert shift(periodic_op(kind, f, g)) == periodic_op(
            kind, shift(f), shift(g)
        )


@given(periodic_fns(), periodic_fns())
def test_valuation_meet_law(f, g):
    assert periodic_valuation(periodic_op("meet", f, g)) == set_op(
        "meet", periodic_valuation(f), periodic_valuation(g)
    )
