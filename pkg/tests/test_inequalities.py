"""Expression algebra, relabeling group, catalog, facet verification."""

import numpy as np
import pytest

from conftest import random_ns_behavior
from triloc.behavior import (SignallingInput, is_no_signalling,
                             uniform_behavior)
from triloc.fixtures import s2_mixture
from triloc.inequalities import (BellExpression, CatalogMissing,
                                 canonicalize, enumerate_relabelings,
                                 dump_catalog, expr_ordered_witness,
                                 expr_split, expr_split_first,
                                 expr_split_second, facet_rank, load_catalog,
                                 load_expression, ns2_polytope_dim,
                                 relabel_behavior, relabel_expression,
                                 save_expression, verify_bound, verify_facet)
from triloc.rational import rat
from triloc.vertices import enumerate_one_way


def test_family_1_vanishes_on_uniform():
    fam = load_catalog().family(1)
    assert fam.expression.evaluate(uniform_behavior("rational")) == 0


def test_split_value_on_mixture():
    assert expr_split().evaluate(s2_mixture()) == rat(1, 4)


def test_split_is_sum_of_its_one_way_parts():
    rng = np.random.default_rng(5)
    b = random_ns_behavior(rng)
    total = expr_split().evaluate(b)
    assert total == (expr_split_first().evaluate(b)
                     + expr_split_second().evaluate(b))


def test_probability_term_correlator_view():
    expr = BellExpression.from_probability_terms({"A0B0": 1})
    quarter = rat(1, 4)
    assert expr.correlator_terms() == {
        "1": quarter, "A0": quarter, "B0": quarter, "A0B0": quarter}


def test_constant_term_round_trip():
    expr = BellExpression.from_correlator_terms({"1": 1})
    assert expr.evaluate(uniform_behavior("rational")) == 1
    assert expr.correlator_terms() == {"1": rat(1)}


def test_basis_round_trip_identity():
    expr = expr_ordered_witness()
    back = BellExpression.from_probability_terms(expr.probability_terms())
    rng = np.random.default_rng(9)
    for _ in range(3):
        b = random_ns_behavior(rng)
        assert expr.evaluate(b) == back.evaluate(b)


def test_conditioned_probability_term():
    b = s2_mixture()
    expr = BellExpression.from_probability_terms({"B1C1|A0": 1})
    # both listed outputs 0 at Y=1, Z=1 with Alice's input pinned to 0
    direct = sum(b.p[0, 1, 1, a, 0, 0] for a in (0, 1))
    assert expr.evaluate(b) == direct


def test_evaluate_correlator_basis_matches_probability_basis():
    rng = np.random.default_rng(4)
    b = random_ns_behavior(rng)
    expr = expr_split()
    assert expr.evaluate(b, basis="correlator") == expr.evaluate(b)


def test_correlator_basis_rejects_signalling():
    signalling = next(
        p for p in enumerate_one_way("AB", "first<second").points
        if not is_no_signalling(p)[0])
    with pytest.raises(SignallingInput):
        expr_split().evaluate(signalling, basis="correlator")


def test_relabeling_group_order():
    assert len(enumerate_relabelings()) == 3072


def test_relabeling_preserves_evaluation():
    rng = np.random.default_rng(12)
    group = enumerate_relabelings()
    expr = load_catalog().family(99).expression
    b = random_ns_behavior(rng)
    for gi in rng.choice(len(group), size=4, replace=False):
        g = group[int(gi)]
        assert (relabel_expression(g, expr).evaluate(relabel_behavior(g, b))
                == expr.evaluate(b))


def test_canonicalize_idempotent_and_relabel_invariant():
    rng = np.random.default_rng(13)
    expr = load_catalog().family(12).expression
    cf = canonicalize(expr)
    assert canonicalize(cf.expression).key == cf.key
    g = enumerate_relabelings()[int(rng.integers(3072))]
    assert canonicalize(relabel_expression(g, expr)).key == cf.key


def test_orbit_stabilizer_product():
    cf = canonicalize(load_catalog().family(185).expression)
    assert cf.orbit_size == 8
    assert cf.stabilizer_size == 384
    assert cf.orbit_size * cf.stabilizer_size == 3072


def test_split_matches_family_6_up_to_relabeling():
    fam = load_catalog().family(6)
    assert canonicalize(expr_split()).key == canonicalize(fam.expression).key


def test_families_164_and_165_differ():
    cat = load_catalog()
    k164 = canonicalize(cat.family(164).expression).key
    k165 = canonicalize(cat.family(165).expression).key
    assert k164 != k165


def test_catalog_loads_185_distinct_families():
    cat = load_catalog()
    assert len(cat) == 185
    assert list(cat) == list(range(1, 186))
    term_sets = {tuple(sorted(rec["terms"].items()))
                 for rec in dump_catalog(cat)}
    assert len(term_sets) == 185


def test_catalog_dump_round_trips(tmp_path):
    import json
    cat = load_catalog()
    path = tmp_path / "catalog_copy.json"
    path.write_text(json.dumps(dump_catalog(cat)))
    again = load_catalog(path)
    for n in (1, 99, 185):
        assert dump_catalog(cat)[n - 1] == dump_catalog(again)[n - 1]


def test_catalog_missing_family_and_file():
    with pytest.raises(CatalogMissing):
        load_catalog().family(999)
    with pytest.raises(CatalogMissing):
        load_catalog("/nonexistent/catalog.json")


def test_declared_bounds_follow_class_chain():
    cat = load_catalog()
    for n in cat:
        bounds = cat.family(n).bounds
        assert bounds["ns2"] <= bounds["t2"] <= bounds["s2"], n


def test_verify_bound_samples():
    assert verify_bound(2, "s2").computed == rat(32, 5)
    assert verify_bound(12, "t2").computed == 6
    for tag in ("ns2", "t2", "s2"):
        chk = verify_bound(185, tag)
        assert chk.passed and chk.computed == 4


def test_verify_bound_rejects_unknown_class():
    with pytest.raises(ValueError):
        verify_bound(1, "quantum")


def test_verify_facet_family_1():
    fc = verify_facet(1)
    assert fc.passed
    assert fc.affine_rank == 25
    assert fc.polytope_dim == 26


def test_weakened_bound_is_not_a_facet():
    fam = load_catalog().family(1)
    fc = facet_rank(fam.expression, fam.bounds["ns2"] + 1)
    assert not fc.passed
    assert fc.saturating == 0


def test_expression_file_round_trip(tmp_path):
    expr = load_catalog().family(116).expression
    path = tmp_path / "fam116.expr.json"
    save_expression(expr, path)
    back = load_expression(path)
    assert list(back.weights) == list(expr.weights)
    assert back.const == expr.const
    assert back.bounds["t2"].value == expr.bounds["t2"].value


def test_expression_file_rejects_bad_payload(tmp_path):
    path = tmp_path / "bad.expr.json"
    path.write_text('{"weights": [1, 2, 3]}')
    with pytest.raises(ValueError):
        load_expression(path)


def test_ns2_polytope_dim_cached_value():
    assert ns2_polytope_dim() == 26
