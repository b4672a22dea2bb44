"""Class membership: LP systems, certificates, thresholds, maximization."""

import numpy as np
import pytest

from conftest import random_ns_behavior
from triloc.behavior import SignallingInput, mix, uniform_behavior
from triloc.fixtures import corr1_target, s2_mixture
from triloc.inequalities import expr_ordered_witness, expr_split
from triloc.membership import (CLASSES, DecompositionCertificate,
                               _threshold_problem, build_system, classify,
                               maximize, split_check, threshold,
                               verify_certificate, verify_functional)
from triloc.rational import rat
from triloc.solver import solve_certified
from triloc.vertices import enumerate_ns2


def test_class_chain_order():
    assert CLASSES == ("local", "ns2", "t2", "k2", "s2", "ns")


def test_build_system_shapes():
    expected = {
        "local": (64, 1),
        "ns2": (160, 1),
        "t2": (1728, 397),
        "k2": (1728, 385),
        "s2": (3072, 1),
        "ns": (64, 56),
    }
    for tag, (nvars, nrows) in expected.items():
        sys_ = build_system(tag)
        assert sys_.nvars == nvars
        assert len(sys_.internal_rows) == nrows
    hybrid_free = build_system("ns2", form="constraint")
    assert hybrid_free.nvars == 1728
    assert hybrid_free.meta.get("hybrid")


def test_build_system_rejects_unknown():
    with pytest.raises(ValueError):
        build_system("ns3")
    with pytest.raises(ValueError):
        build_system("ns2", form="mystery")


@pytest.mark.parametrize("tag", CLASSES)
def test_uniform_is_member_of_every_class(tag):
    res = classify(uniform_behavior("rational"), tag)
    assert res.member
    assert res.threshold == 1
    ok, why = verify_certificate(res.certificate, uniform_behavior("rational"))
    assert ok, why


def test_corr1_is_t2_member_with_valid_certificate():
    b = corr1_target()
    res = classify(b, "t2")
    assert res.member
    cert = res.certificate
    assert cert.hybrids is not None and set(cert.hybrids) == {
        "AB|C", "AC|B", "BC|A"}
    ok, why = verify_certificate(cert, b)
    assert ok, why


def test_corr1_is_not_ns2_member_functional_separates():
    b = corr1_target()
    res = classify(b, "ns2")
    assert not res.member
    fn = res.functional
    assert fn.gap > 0
    assert fn.value_on(b) - fn.offset == fn.gap
    # at most the offset on every generator of the class
    for g in enumerate_ns2().points:
        assert fn.value_on(g) <= fn.offset
    ok, why = verify_functional(fn, b)
    assert ok, why


def test_s2_mixture_verdicts_split_chain():
    b = s2_mixture()
    assert classify(b, "s2").member
    assert not classify(b, "k2").member
    assert not classify(b, "t2").member
    assert not classify(b, "ns2").member
    assert classify(b, "ns").member


def test_maximize_split_is_zero_on_ordered_classes():
    for tag in ("local", "ns2", "t2"):
        res = maximize(expr_split(), tag)
        assert res.value == 0, tag


def test_maximize_split_s2_slice():
    res = maximize(expr_split(), "s2")
    assert res.value == rat(3, 7)
    # the witness value is attained by the reconstructed argmax
    assert expr_split().evaluate(res.argmax) == rat(3, 7)


def test_maximize_ordered_witness_bounds():
    assert maximize(expr_ordered_witness(), "ns2").value == 3
    assert maximize(expr_ordered_witness(), "t2").value == 3
    assert maximize(expr_ordered_witness(), "s2").value == 5


def test_maximize_scan_and_lp_agree_on_hull_classes():
    for tag in ("local", "ns2"):
        scan = maximize(expr_ordered_witness(), tag, method="scan")
        lp = maximize(expr_ordered_witness(), tag, method="lp")
        assert scan.value == lp.value, tag


def test_threshold_uniform_is_one():
    res = threshold(uniform_behavior("rational"), "local")
    assert res.p_max == 1
    assert res.functional is None


def test_threshold_mixture_t2_exact_and_boundary_mix():
    b = s2_mixture()
    res = threshold(b, "t2")
    assert res.p_max == rat(2, 3)
    boundary = mix(b, uniform_behavior("rational"), res.p_max)
    ok, why = verify_certificate(res.certificate, boundary)
    assert ok, why
    assert res.functional is not None
    assert verify_functional(res.functional, b)[0]


def test_mix_just_past_threshold_leaves_class():
    b = s2_mixture().to_double()
    u = uniform_behavior("double")
    inside = mix(b, u, 2 / 3 - 1e-6)
    outside = mix(b, u, 2 / 3 + 1e-6)
    assert classify(inside, "t2").member
    assert not classify(outside, "t2").member


def test_split_check_identity_on_fixtures_and_random():
    total, first, second = split_check(s2_mixture())
    assert total == first + second
    assert total == rat(1, 4)
    rng = np.random.default_rng(7)
    for _ in range(5):
        b = random_ns_behavior(rng)
        total, first, second = split_check(b)
        assert total == first + second


def test_split_check_rejects_signalling():
    from triloc.vertices import enumerate_one_way
    ow = enumerate_one_way("AB", "first<second")
    signalling = next(
        p for p in ow.points
        if any(p.p[0, y, z, :, 1, :].sum() != p.p[1, y, z, :, 1, :].sum()
               for y, z in np.ndindex(2, 2)))
    with pytest.raises(SignallingInput):
        split_check(signalling)


def test_ns2_constraint_form_agrees_with_hull_form():
    rng = np.random.default_rng(11)
    hull = build_system("ns2")
    constraint = build_system("ns2", form="constraint")
    for _ in range(2):
        b = random_ns_behavior(rng, scale=8)
        values = []
        for sys_ in (hull, constraint):
            prob, _ = _threshold_problem(sys_, b, "rational")
            out = solve_certified(prob)
            assert out.status == "optimal"
            values.append(out.value)
        assert values[0] == values[1]


def test_tampered_certificate_is_rejected():
    b = corr1_target()
    res = classify(b, "t2")
    cert = res.certificate
    # corrupt one hybrid entry; the reconstruction no longer matches
    bad_hybrids = {bip: t.copy() for bip, t in cert.hybrids.items()}
    bad_hybrids["AB|C"][0, 0, 0, 0, 0, 0] += rat(1, 7)
    bad = DecompositionCertificate(cert.tag, cert.weights, bad_hybrids,
                                   cert.mode)
    ok, why = verify_certificate(bad, b)
    assert not ok and why


def test_classify_unknown_class_rejected():
    with pytest.raises(ValueError):
        classify(uniform_behavior("rational"), "quantum")
