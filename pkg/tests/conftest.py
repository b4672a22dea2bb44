"""Shared randomized-behavior helpers for the test suite."""

import numpy as np

from triloc.behavior import (Behavior, CorrelatorForm, InvalidCorrelators,
                             from_correlators, to_correlators)
from triloc.quantum import Observable, QuantumScenario, QuantumState, born_behavior
from triloc.rational import rat

PAIRS = ("AB", "AC", "BC")


def random_ns_behavior(rng, scale=32):
    """Exact-rational no-signalling behavior with small random correlators.

    |c| <= 1/32 for all 26 coordinates keeps every probability positive."""
    def r():
        return rat(int(rng.integers(-scale, scale + 1)), 32 * scale)

    singles = {p: [r(), r()] for p in "ABC"}
    doubles = {pair: np.array([[r(), r()], [r(), r()]], dtype=object)
               for pair in PAIRS}
    triples = np.array([[[r(), r()] for _ in (0, 1)] for _ in (0, 1)],
                       dtype=object)
    return from_correlators(CorrelatorForm(singles, doubles, triples,
                                           "rational"))


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_scenario(rng):
    vec = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = QuantumState.from_pure(vec / np.linalg.norm(vec))
    obs = {p: (Observable.from_bloch(random_unit(rng)),
               Observable.from_bloch(random_unit(rng))) for p in "ABC"}
    return QuantumScenario(state, obs)


def random_quantum_mix_behavior(rng, denom=4096, scenario=None):
    """Exact-rational behavior: Born correlators of a (given or random)
    scenario snapped to denominator `denom`, scaled by a random noise
    weight, damped further toward white noise until valid."""
    if scenario is None:
        scenario = random_scenario(rng)
    corr = to_correlators(born_behavior(scenario))

    def snap(v):
        return rat(int(round(float(v) * denom)), denom)

    weight = rat(int(rng.integers(0, denom + 1)), denom)
    while True:
        singles = {p: [snap(v) * weight for v in corr.singles[p]]
                   for p in "ABC"}
        doubles = {pair: np.array(
            [[snap(corr.doubles[pair][u, v]) * weight for v in (0, 1)]
             for u in (0, 1)], dtype=object) for pair in PAIRS}
        triples = np.array(
            [[[snap(corr.triples[x, y, z]) * weight for z in (0, 1)]
              for y in (0, 1)] for x in (0, 1)], dtype=object)
        try:
            return from_correlators(CorrelatorForm(singles, doubles, triples,
                                                   "rational"))
        except InvalidCorrelators:
            weight = weight * rat(9, 10)
