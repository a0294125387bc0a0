"""Lattice-sort reduction engine and the ec-theory decider."""

from fractions import Fraction

import pytest

from dvlg import syntax as S
from dvlg.corpus import gen_tplus_corpus, named_rng
from dvlg.errors import NotSentence, UnsupportedFragment
from dvlg.linear import Lin
from dvlg.oracle import Assignment, decide_finite
from dvlg.parser import parse
from dvlg.reduction import (
    PrimitiveBlock,
    assemble_reduct,
    decide_ec,
    eliminate_group_var,
    reduce,
)
from dvlg.rewrites import rename_bound
from dvlg.standard import FinStdStructure, GroupVector, SubsetL
from dvlg.syntax import sort_check

CTX = {"a": S.G, "b": S.G, "l": S.L, "m": S.L}


def _no_group_symbols(f):
    """chi must be purely lattice-sorted: no G atoms, no G quantifiers."""
    if isinstance(f, (S.GLeq, S.GEq)):
        return False
    if isinstance(f, (S.Exists, S.Forall)):
        return f.sort == S.L and _no_group_symbols(f.body)
    if isinstance(f, S.Not):
        return _no_group_symbols(f.arg)
    if isinstance(f, (S.And, S.Or, S.Implies)):
        return _no_group_symbols(f.left) and _no_group_symbols(f.right)
    return True


def _rand_env(rng, n):
    genv = {
        v: GroupVector(tuple(Fraction(rng.randint(-3, 3)) for _ in range(n)))
        for v in ("a", "b")
    }
    lenv = {v: SubsetL(rng.randrange(1 << n), n) for v in ("l", "m")}
    return Assignment(genv, lenv)


def _reduct_matches_oracle(text, seed=17, per_n=6):
    phi = parse(text, CTX)
    out = reduce(phi, mode="tplus")
    reduct = assemble_reduct(out)
    rng = named_rng(seed, f"reduction:{text}")
    for n in (1, 2, 3):
        struct = FinStdStructure(n)
        for _ in range(per_n):
            env = _rand_env(rng, n)
            lhs = decide_finite(struct, phi, env)
            rhs = decide_finite(
                struct, reduct, env, limits={"max_quantifiers": 25}
            )
            assert lhs == rhs, (text, n)


class TestEliminateGroupVar:
    def _block(self, lowers, uppers):
        return PrimitiveBlock("x", tuple(lowers), tuple(uppers))

    def test_two_sided(self):
        # exists x (l below P(x - a) and m below P(b - x))
        out = eliminate_group_var(
            self._block(
                [(S.LVar("l"), Lin.var("a"), False)],
                [(S.LVar("m"), Lin.var("b"), False)],
            )
        )
        assert isinstance(out, S.LBelow)
        assert out.left == S.LMeet(S.LVar("l"), S.LVar("m"))
        # target is P(b - a)
        assert isinstance(out.right, S.Val)

    def test_one_sided_true(self):
        out = eliminate_group_var(
            self._block([(S.Top(), Lin.var("a"), False)], [])
        )
        assert out == S.TRUE

    def test_strict_pair_gets_two_sided_form(self):
        out = eliminate_group_var(
            self._block(
                [(S.LVar("l"), Lin.var("a"), True)],
                [(S.LVar("m"), Lin.var("b"), False)],
            )
        )
        assert isinstance(out, S.LBelow)
        assert isinstance(out.right, S.LMeet)
        assert isinstance(out.right.right, S.Compl)

    def test_oracle_equivalence(self):
        # frozen instances checked semantically against the oracle
        cases = [
            ("exists x:G. l << P(x - a) & m << P(b - x)", "l cap m << P(b - a)"),
            ("exists x:G. top << P(x - a)", "top << top"),
            ("exists x:G. l << P(x - a) & l << P(-x)", "l << P(-a)"),
        ]
        rng = named_rng(23, "elim-equiv")
        for text, expected in cases:
            phi, psi = parse(text, CTX), parse(expected, CTX)
            for n in (1, 2, 3):
                struct = FinStdStructure(n)
                for _ in range(8):
                    env = _rand_env(rng, n)
                    assert decide_finite(struct, phi, env) == decide_finite(
                        struct, psi, env
                    ), (text, n)


class TestReduce:
    def test_simple_atom(self):
        out = reduce(parse("0 <= a", CTX))
        assert out.k == 1
        assert out.to_json()["terms"] == ["a"]
        assert out.chi == S.LEq(S.LVar("p1"), S.Top())

    def test_divisibility_witness_erased(self):
        out = reduce(parse("exists b:G. b + b = a", CTX))
        assert out.k == 0
        assert out.chi == S.TRUE

    def test_chi_has_no_group_symbols(self):
        for text, phi, ctx in gen_tplus_corpus(31, count=60):
            out = reduce(phi, mode="tplus")
            assert _no_group_symbols(out.chi), text
            # reassembled formula still sort-checks
            sort_check(assemble_reduct(out), S.free_vars(phi))

    def test_positive_existential_preserved(self):
        samples = [
            "exists x:G. l << P(x - a) & m << P(b - x)",
            "exists x:G. x <= a | b <= x",
            "exists x:G. exists w:G. x <= a & w <= x",
        ]
        for text in samples:
            out = reduce(parse(text, CTX), mode="tplus")
            assert _positive_existential(out.chi), text

    def test_tplus_equivalence_frozen_samples(self):
        samples = [
            "0 <= a",
            "exists b:G. b + b = a",
            "exists x:G. l << P(x - a) & m << P(b - x)",
            "forall x:G. x <= a -> x <= a + b",
            "exists x:G. 2*x <= a & b <= 3*x",
            "(exists x:G. x + x = a) | l << m",
        ]
        for text in samples:
            _reduct_matches_oracle(text)

    def test_fragment_rejection(self):
        # the group variable's scope retains a lattice quantifier that
        # mentions it: outside the tplus fragment
        text = "exists x:G. forall y:L. y << P(x - a)"
        with pytest.raises(UnsupportedFragment):
            reduce(parse(text, CTX), mode="tplus")
        # ec mode handles the same input
        out = reduce(parse(text, CTX), mode="ec")
        assert _no_group_symbols(out.chi)

    def test_ec_weak_order_unit_shape(self):
        out = reduce(
            parse("exists g:G. 0 <= g & ~(g = 0) & a meet g = 0", CTX),
            mode="ec",
        )
        assert _no_group_symbols(out.chi)
        assert out.k == len(out.terms) >= 1
        assert set(S.free_vars(out.chi)) <= {f"p{i+1}" for i in range(out.k)}


class TestDecideEc:
    def test_known_truths(self):
        assert decide_ec(parse("forall v:G. exists b:G. b + b = v")) is True
        assert decide_ec(parse("exists v:G. 0 <= v & P(-v) = bot")) is True

    def test_known_falsehoods(self):
        phi = parse(
            "forall a:G. 0 <= a -> "
            "(exists g:G. 0 <= g & ~(g = 0) & a meet g = 0)"
        )
        assert decide_ec(phi) is False
        assert decide_ec(parse("top = bot")) is False

    def test_open_formula_rejected(self):
        with pytest.raises(NotSentence):
            decide_ec(parse("0 <= a", CTX))

    def test_invariant_under_bound_renaming(self):
        sentences = [
            "forall v:G. exists b:G. b + b = v",
            "exists v:G. 0 <= v & P(-v) = bot",
            "forall x:L. ~(x = bot) -> "
            "(exists y:L. ~(y = bot) & y << x & ~(y = x))",
        ]
        for text in sentences:
            phi = parse(text)
            assert decide_ec(phi) == decide_ec(rename_bound(phi, prefix="_z"))


def _positive_existential(f):
    if isinstance(f, (S.Not, S.Implies, S.Forall)):
        return False
    if isinstance(f, (S.And, S.Or)):
        return _positive_existential(f.left) and _positive_existential(f.right)
    if isinstance(f, S.Exists):
        return _positive_existential(f.body)
    return True
