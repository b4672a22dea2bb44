"""Reference behaviors and explicit hidden-variable models used as ground truth."""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .behavior import SHAPE, Behavior
from .quantum import SIGMA_X, SIGMA_Z, Observable, QuantumScenario, ghz_state
from .rational import rat

__all__ = [
    "HiddenBitModel",
    "bit_moment",
    "corr1_target",
    "corr1_t2_model",
    "ghz_witness_s2_model",
    "ghz_witness_scenario",
    "s2_mixture",
    "s2_strategies",
]


@dataclass(frozen=True)
class HiddenBitModel:
    """Shared hidden values plus deterministic binary response rules, one rule
    set per allowed communication ordering."""

    label: str
    hidden: tuple      # hidden value tuples
    weights: tuple     # one weight per hidden value, rational or float
    responses: dict    # ordering label -> rule(hidden, X, Y, Z) -> (a, b, c)

    def __post_init__(self):
        if len(self.hidden) != len(self.weights):
            raise ValueError("need exactly one weight per hidden value")
        if not self.responses:
            raise ValueError("need at least one response rule")
        total = sum(self.weights)
        if self._exact():
            if total != 1:
                raise ValueError("weights must sum to 1")
        elif abs(total - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        for rule in self.responses.values():
            for lam in self.hidden:
                for X, Y, Z in product((0, 1), repeat=3):
                    out = rule(lam, X, Y, Z)
                    if len(out) != 3 or any(o not in (0, 1) for o in out):
                        raise ValueError("response rules must return output bits")

    def _exact(self):
        return all(not isinstance(w, float) for w in self.weights)

    @property
    def orderings(self):
        return tuple(self.responses)

    def behavior(self, ordering=None) -> Behavior:
        """Observed behavior when responses follow the given ordering."""
        if ordering is None:
            if len(self.responses) != 1:
                raise ValueError(f"ordering must be one of {self.orderings}")
            (ordering,) = self.responses
        rule = self.responses[ordering]
        exact = self._exact()
        p = np.zeros(SHAPE, dtype=object if exact else float)
        for lam, w in zip(self.hidden, self.weights):
            for X, Y, Z in product((0, 1), repeat=3):
                a, b, c = rule(lam, X, Y, Z)
                p[X, Y, Z, a, b, c] += w
        return Behavior(p, "rational" if exact else "double")

    def ordering_invariant(self, tol=1e-12):
        """True when every ordering yields the same observed behavior."""
        behaviors = [self.behavior(o) for o in self.orderings]
        first = behaviors[0]
        for other in behaviors[1:]:
            if first.mode == "rational" and other.mode == "rational":
                if not bool(np.all(first.p == other.p)):
                    return False
            else:
                gap = np.abs(first.to_double().p - other.to_double().p)
                if float(gap.max()) > tol:
                    return False
        return True


def bit_moment(b: Behavior, parties, inputs):
    """Expectation of the product of the named parties' 0/1 outcome bits at a
    full input triple (X, Y, Z)."""
    X, Y, Z = inputs
    total = 0
    for a, bb, c in product((0, 1), repeat=3):
        bits = {"A": a, "B": bb, "C": c}
        if all(bits[P] for P in parties):
            total = total + b.entry(X, Y, Z, a, bb, c)
    return total


# One parity constraint applies per input triple; together they admit no
# deterministic global assignment.
def _corr1_holds(X, Y, Z, a, b, c):
    if (X, Y, Z) == (0, 0, 0):
        return (a + b + c) % 2 == 0
    if (X, Y, Z) == (1, 1, 1):
        return (a + b + c) % 2 == 1
    if X == 0 and Y == 1:
        return (a + b) % 2 == 0
    if X == 1 and Z == 0:
        return (a + c) % 2 == 0
    if Y == 0 and Z == 1:
        return (b + c) % 2 == 0
    raise AssertionError("every input triple is covered by one constraint")


def corr1_target() -> Behavior:
    """Parity-constrained behavior, uniform over the satisfying outcome
    triples of each input; two-group-local only with an ordering-dependent
    rule set (tag t2, not ns2)."""
    q = rat(1, 4)
    p = np.zeros(SHAPE, dtype=object)
    for X, Y, Z in product((0, 1), repeat=3):
        sols = [out for out in product((0, 1), repeat=3)
                if _corr1_holds(X, Y, Z, *out)]
        assert len(sols) == 4
        for a, b, c in sols:
            p[X, Y, Z, a, b, c] = q
    return Behavior(p, "rational")


def corr1_t2_model() -> HiddenBitModel:
    """Two uniform shared bits with time-ordered rules for the grouping
    A | BC; both orderings of Bob and Charles reproduce corr1_target."""
    hidden = tuple(product((0, 1), repeat=2))
    weights = (rat(1, 4),) * 4

    def bob_first(lam, X, Y, Z):
        l0, l1 = lam
        a = l0 if X == 0 else l1
        b = (l0 + l1) % 2 if Y == 0 else l0
        c = l1 if Z == 0 else (l0 + l1 + Y) % 2  # Charles sees Bob's input
        return a, b, c

    def charles_first(lam, X, Y, Z):
        l0, l1 = lam
        a = l0 if X == 0 else l1
        b = (l0 + l1 + Z) % 2 if Y == 0 else l0  # Bob sees Charles' input
        c = l1 if Z == 0 else (l0 + l1 + 1) % 2
        return a, b, c

    return HiddenBitModel(
        label="corr1-two-bit",
        hidden=hidden,
        weights=weights,
        responses={"B<C": bob_first, "C<B": charles_first},
    )


def s2_strategies():
    """Four deterministic strategies, each local up to one party reading
    Charles' input (groupings A | BC and AB | C)."""

    def s1(X, Y, Z):
        return (X + Z - X * Z, 0, 1)

    def s2(X, Y, Z):
        return (1 - Z + X * Z, Y, 1)

    def s3(X, Y, Z):
        return (0, Y - Y * Z, 1 - Z)

    def s4(X, Y, Z):
        return (1 - X, 1 - Y + Y * Z, Z)

    return (s1, s2, s3, s4)


def s2_mixture() -> Behavior:
    """Uniform mixture of the four grouping-local strategies; no-signalling,
    s2-member, yet violates the two-group threshold expression."""
    q = rat(1, 4)
    p = np.zeros(SHAPE, dtype=object)
    for strat in s2_strategies():
        for X, Y, Z in product((0, 1), repeat=3):
            a, b, c = strat(X, Y, Z)
            p[X, Y, Z, a, b, c] += q
    return Behavior(p, "rational")


def ghz_witness_scenario() -> QuantumScenario:
    """GHZ measurements whose behavior beats the ordered-witness t2 bound yet
    admits the two-group model below."""
    s = 1.0 / math.sqrt(2.0)
    c_minus = Observable.from_bloch((-s, 0.0, s))  # (sigma_z - sigma_x)/sqrt 2
    c_plus = Observable.from_bloch((s, 0.0, s))    # (sigma_z + sigma_x)/sqrt 2
    return QuantumScenario(ghz_state(), {
        "A": (SIGMA_Z, SIGMA_X),
        "B": (SIGMA_Z, SIGMA_X),
        "C": (c_minus, c_plus),
    })


def ghz_witness_s2_model() -> HiddenBitModel:
    """Grouping BC | A model (Charles signals to Bob) reproducing the
    ghz_witness_scenario behavior exactly."""
    cos2 = math.cos(math.pi / 8) ** 2
    hidden = tuple(product((0, 1), repeat=3))  # (charles output, r0, r1)
    weights = tuple(0.25 * (cos2 if r0 == 0 else 1.0 - cos2)
                    for _, r0, _ in hidden)

    def rule(lam, X, Y, Z):
        ch, r0, r1 = lam
        ze = Z ^ 1  # Bob reads the flipped input, matching Charles' settings
        if ch == 0:
            a = (r0, r1)[X]
            b = (r0 + Y * (r1 + ze)) % 2
        else:
            a = ((r0, r1)[X] + X + 1) % 2
            b = (r0 + 1 + Y * (r1 + ze)) % 2
        return a, b, ch

    return HiddenBitModel(
        label="ghz-witness-two-group",
        hidden=hidden,
        weights=weights,
        responses={"C<B": rule},
    )
