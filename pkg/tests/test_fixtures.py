"""Reference behaviors and hidden-bit models reproduce their targets."""

import math
from itertools import product

import numpy as np
import pytest

from triloc.behavior import is_no_signalling, marginal
from triloc.fixtures import (HiddenBitModel, bit_moment, corr1_t2_model,
                             corr1_target, ghz_witness_s2_model,
                             ghz_witness_scenario, s2_mixture, s2_strategies)
from triloc.inequalities import expr_ordered_witness, expr_split
from triloc.membership import classify
from triloc.quantum import born_behavior
from triloc.rational import rat


def test_corr1_parity_constraints():
    b = corr1_target()
    # a xor b is pinned to 0 whenever X=0, Y=1
    for Z in (0, 1):
        agree = sum(b.p[0, 1, Z, a, a, c] for a in (0, 1) for c in (0, 1))
        assert agree == 1
    # opposite parities of the full triple at (0,0,0) and (1,1,1)
    assert sum(b.p[0, 0, 0, a, bb, c]
               for a, bb, c in product((0, 1), repeat=3)
               if (a + bb + c) % 2 == 0) == 1
    assert sum(b.p[1, 1, 1, a, bb, c]
               for a, bb, c in product((0, 1), repeat=3)
               if (a + bb + c) % 2 == 1) == 1


def test_corr1_uniform_marginals_and_no_signalling():
    b = corr1_target()
    half = (rat(1, 2), rat(1, 2))
    for party in "ABC":
        for ins in product((0, 1), repeat=3):
            assert marginal(b, party, ins) == half
    ok, viol = is_no_signalling(b)
    assert ok, viol


def test_corr1_is_not_local():
    assert not classify(corr1_target(), "local").member


def test_corr1_model_reproduces_target_in_both_orderings():
    model = corr1_t2_model()
    target = corr1_target()
    assert set(model.orderings) == {"B<C", "C<B"}
    for ordering in model.orderings:
        assert bool(np.all(model.behavior(ordering).p == target.p))
    assert model.ordering_invariant()


def test_corr1_model_rules_respect_their_orderings():
    model = corr1_t2_model()
    bob_first = model.responses["B<C"]
    charles_first = model.responses["C<B"]
    for lam in model.hidden:
        for X, Y, Z in product((0, 1), repeat=3):
            a, b, c = bob_first(lam, X, Y, Z)
            # Bob acts before Charles: a and b cannot read Z
            assert (a, b) == bob_first(lam, X, Y, Z ^ 1)[:2]
            a2, b2, c2 = charles_first(lam, X, Y, Z)
            # Charles acts before Bob: a and c cannot read Y
            assert (a2, c2) == tuple(
                charles_first(lam, X, Y ^ 1, Z)[i] for i in (0, 2))
    # the trailing party really uses the earlier party's input
    assert any(
        bob_first(lam, X, 0, Z)[2] != bob_first(lam, X, 1, Z)[2]
        for lam in model.hidden for X in (0, 1) for Z in (0, 1))


def test_hidden_bit_model_validation():
    ok_rule = lambda lam, X, Y, Z: (0, 0, 0)
    with pytest.raises(ValueError):
        HiddenBitModel("bad", ((0,), (1,)), (rat(1, 2),), {"A<B": ok_rule})
    with pytest.raises(ValueError):
        HiddenBitModel("bad", ((0,),), (rat(1, 2),), {"A<B": ok_rule})
    with pytest.raises(ValueError):
        HiddenBitModel("bad", ((0,),), (rat(1),),
                       {"A<B": lambda lam, X, Y, Z: (0, 2, 0)})
    with pytest.raises(ValueError):
        HiddenBitModel("bad", ((0,),), (rat(1),), {})
    two = corr1_t2_model()
    with pytest.raises(ValueError):
        two.behavior()  # ambiguous: two orderings


def test_s2_strategies_are_deterministic_bits():
    strats = s2_strategies()
    assert len(strats) == 4
    for strat in strats:
        for X, Y, Z in product((0, 1), repeat=3):
            out = strat(X, Y, Z)
            assert all(v in (0, 1) for v in out)


def test_s2_mixture_bit_moment_table():
    b = s2_mixture()
    for X, Y, Z in product((0, 1), repeat=3):
        ins = (X, Y, Z)
        assert bit_moment(b, "A", ins) == rat(1, 2)
        assert bit_moment(b, "B", ins) == rat(1 + Y, 4)
        assert bit_moment(b, "C", ins) == rat(3, 4)
        assert bit_moment(b, "AB", ins) == rat(1 - X + X * Y, 4)
        assert bit_moment(b, "AC", ins) == rat(1 + X + Z - X * Z, 4)
        assert bit_moment(b, "BC", ins) == rat(2 * Y + Z - Y * Z, 4)
        assert bit_moment(b, "ABC", ins) == rat(
            Y + Z - X * Z - Y * Z + X * Y * Z, 4)


def test_s2_mixture_splits_the_chain():
    b = s2_mixture()
    assert expr_split().evaluate(b) == rat(1, 4)
    assert classify(b, "s2").member
    assert not classify(b, "t2").member


def test_ghz_witness_value():
    b = born_behavior(ghz_witness_scenario())
    value = expr_ordered_witness().evaluate(b)
    assert value == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-12)


def test_ghz_model_matches_quantum_behavior():
    quantum = born_behavior(ghz_witness_scenario())
    model = ghz_witness_s2_model()
    assert model.orderings == ("C<B",)
    mb = model.behavior("C<B")
    gap = np.abs(mb.p.astype(float) - quantum.p.astype(float)).max()
    assert gap <= 1e-9
    value = expr_ordered_witness().evaluate(mb)
    assert value == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-9)


def test_ghz_model_rule_respects_its_ordering():
    model = ghz_witness_s2_model()
    rule = model.responses["C<B"]
    for lam in model.hidden:
        for X, Y, Z in product((0, 1), repeat=3):
            a, b, c = rule(lam, X, Y, Z)
            # Charles acts first: his output ignores everyone's inputs
            assert c == rule(lam, X ^ 1, Y ^ 1, Z ^ 1)[2]
            # Alice is in the other group: she cannot read Y or Z
            assert a == rule(lam, X, Y ^ 1, Z ^ 1)[0]


def test_ghz_model_behavior_is_s2_member():
    mb = ghz_witness_s2_model().behavior("C<B")
    assert classify(mb, "s2").member
