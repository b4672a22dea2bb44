"""Tripartite binary behaviors P(abc|XYZ) and their basic operations.

The central value type is a full conditional distribution for 3 parties,
2 inputs and 2 outputs per party, stored as a tensor indexed
p[X][Y][Z][a][b][c] (party order A, B, C; outcome 0 first). Two arithmetic
modes exist: 'rational' (exact, used for LP certification) and 'double'
(used by the quantum layer). A behavior never mixes modes.
"""

import json

import numpy as np

from .rational import format_rational, rat, rat_from, snap

PARTIES = ("A", "B", "C")
DOUBLE_TOL = 1e-12

SHAPE = (2, 2, 2, 2, 2, 2)  # X, Y, Z, a, b, c


class SignallingInput(ValueError):
    """Raised when an operation requires a no-signalling behavior."""


class InvalidCorrelators(ValueError):
    """Raised when correlator values do not describe a valid behavior."""


class Behavior:
    """P(abc|XYZ) as a (2,2,2,2,2,2) tensor plus its arithmetic mode."""

    __slots__ = ("p", "mode")

    def __init__(self, p, mode):
        if mode not in ("rational", "double"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "rational":
            arr = np.empty(SHAPE, dtype=object)
            flat = np.asarray(p, dtype=object).reshape(-1)
            if flat.size != 64:
                raise ValueError("behavior tensor must have 64 entries")
            arr.reshape(-1)[:] = [rat_from(v) for v in flat]
        else:
            arr = np.asarray(p, dtype=float).reshape(SHAPE).copy()
        self.p = arr
        self.mode = mode

    def __repr__(self):
        return f"Behavior(mode={self.mode!r})"

    def __eq__(self, other):
        if not isinstance(other, Behavior) or self.mode != other.mode:
            return NotImplemented
        if self.mode == "rational":
            return bool(np.all(self.p == other.p))
        return bool(np.all(np.abs(self.p - other.p) <= DOUBLE_TOL))

    def copy(self):
        return Behavior(self.p.copy(), self.mode)

    def entry(self, X, Y, Z, a, b, c):
        return self.p[X, Y, Z, a, b, c]

    def flat(self):
        """The 64 entries in X-major index order."""
        return self.p.reshape(-1)

    def to_double(self):
        if self.mode == "double":
            return self.copy()
        return Behavior(np.array([float(v) for v in self.flat()]), "double")

    def to_rational(self, max_denominator=10**6):
        """Snap a double behavior to exact rationals (explicit, bounded
        denominator). Rational behaviors are returned unchanged."""
        if self.mode == "rational":
            return self.copy()
        return Behavior([snap(v, max_denominator) for v in self.flat()],
                        "rational")


def uniform_behavior(mode="rational"):
    if mode == "rational":
        return Behavior([rat(1, 8)] * 64, "rational")
    return Behavior(np.full(64, 1 / 8), "double")


def normalize_check(b: Behavior) -> bool:
    """True iff all entries are >= 0 and each input triple sums to 1
    (exactly in rational mode, within 1e-12 in double mode)."""
    if b.mode == "rational":
        if any(v < 0 for v in b.flat()):
            return False
        for X in (0, 1):
            for Y in (0, 1):
                for Z in (0, 1):
                    if sum(b.p[X, Y, Z].reshape(-1)) != 1:
                        return False
        return True
    if np.any(b.p < -DOUBLE_TOL):
        return False
    sums = b.p.reshape(8, 8).sum(axis=1)
    return bool(np.all(np.abs(sums - 1.0) <= DOUBLE_TOL))


def _party_axis(party):
    try:
        return PARTIES.index(party)
    except ValueError:
        raise ValueError(f"invalid party id {party!r}") from None


def marginal(b: Behavior, party, inputs):
    """Distribution of one party's outcome at the given input triple.

    Returns (P(outcome=0), P(outcome=1)); the other two outcomes are
    summed out, the conditioning inputs are kept as given.
    """
    ax = _party_axis(party)
    X, Y, Z = inputs
    block = b.p[X, Y, Z]  # a, b, c
    keep = block.sum(axis=tuple(i for i in range(3) if i != ax))
    return (keep[0], keep[1])


def pair_marginal(b: Behavior, pair, inputs):
    """Joint outcome distribution of a pair of parties at an input triple,
    as a 2x2 array indexed by the pair's outcomes in party order."""
    axes = [_party_axis(p) for p in pair]
    if len(axes) != 2 or axes[0] >= axes[1]:
        raise ValueError(f"invalid pair {pair!r}")
    X, Y, Z = inputs
    traced = next(i for i in range(3) if i not in axes)
    return b.p[X, Y, Z].sum(axis=traced)


class BipartiteMarginal:
    """Two-party marginal q(ab|XY) of a behavior, remembering which input
    the traced third party was given."""

    __slots__ = ("pair", "q", "traced_input")

    def __init__(self, pair, q, traced_input):
        self.pair = pair  # 'AB', 'AC' or 'BC'
        self.q = q        # [X_pair, Y_pair, a_pair, b_pair]
        self.traced_input = traced_input

    def row_sums_ok(self, tol=DOUBLE_TOL):
        for i in (0, 1):
            for j in (0, 1):
                s = self.q[i, j].reshape(-1).sum()
                if isinstance(s, float):
                    if abs(s - 1.0) > tol:
                        return False
                elif s != 1:
                    return False
        return True


def bipartite_marginal(b: Behavior, pair, traced_input=0):
    pair_axes = [_party_axis(p) for p in pair]
    traced = next(i for i in range(3) if i not in pair_axes)
    q = np.empty((2, 2, 2, 2), dtype=b.p.dtype)
    for u in (0, 1):
        for v in (0, 1):
            inputs = [None, None, None]
            inputs[pair_axes[0]] = u
            inputs[pair_axes[1]] = v
            inputs[traced] = traced_input
            X, Y, Z = inputs
            q[u, v] = b.p[X, Y, Z].sum(axis=traced)
    return BipartiteMarginal(pair, q, traced_input)


def _entries_equal(x, y, mode):
    if mode == "rational":
        return x == y
    return abs(x - y) <= DOUBLE_TOL


def is_no_signalling(b: Behavior):
    """Check that every one- and two-party marginal is independent of the
    remaining parties' inputs. Returns (ok, list of violation strings)."""
    violations = []
    # single-party marginals: vary one of the other inputs
    for party in PARTIES:
        ax = _party_axis(party)
        others = [p for p in PARTIES if p != party]
        for own in (0, 1):
            base = [0, 0, 0]
            base[ax] = own
            ref = marginal(b, party, tuple(base))
            for combo in ((0, 1), (1, 0), (1, 1)):
                ins = list(base)
                for other, val in zip(others, combo):
                    ins[_party_axis(other)] = val
                got = marginal(b, party, tuple(ins))
                if not _entries_equal(ref[0], got[0], b.mode):
                    violations.append(
                        f"{party}-marginal at {party}={own} depends on "
                        f"inputs of {''.join(others)}")
                    break
    # two-party marginals: vary the traced party's input
    for pair in ("AB", "AC", "BC"):
        traced = next(p for p in PARTIES if p not in pair)
        m0 = bipartite_marginal(b, pair, 0)
        m1 = bipartite_marginal(b, pair, 1)
        if not all(
            _entries_equal(x, y, b.mode)
            for x, y in zip(m0.q.reshape(-1), m1.q.reshape(-1))
        ):
            violations.append(f"{pair}-marginal depends on input of {traced}")
    return (not violations, violations)


# --- correlator transform -------------------------------------------------
#
# A no-signalling behavior is exactly parametrized by 27 numbers: the unit,
# 6 singles <A_x>, <B_y>, <C_z>, 12 doubles and 8 triples, with
# <A_X B_Y> = sum_{ab} (-1)^{a+b} P(ab|XY) etc. Signalling behaviors lose
# information under this map, so the conversion refuses them.

class CorrelatorForm:
    """Correlator coordinates of a no-signalling behavior."""

    __slots__ = ("singles", "doubles", "triples", "mode")

    def __init__(self, singles, doubles, triples, mode):
        self.singles = singles  # {'A': [s0, s1], ...}
        self.doubles = doubles  # {'AB': 2x2, 'AC': 2x2, 'BC': 2x2}
        self.triples = triples  # 2x2x2 array [x, y, z]
        self.mode = mode

    def values(self):
        """All 26 non-unit correlators in the fixed term order."""
        out = []
        for p in PARTIES:
            out.extend(self.singles[p])
        for pair in ("AB", "AC", "BC"):
            out.extend(np.asarray(self.doubles[pair]).reshape(-1))
        out.extend(np.asarray(self.triples).reshape(-1))
        return out


def _sign(k):
    return -1 if k else 1


def to_correlators(b: Behavior) -> CorrelatorForm:
    ok, violations = is_no_signalling(b)
    if not ok:
        raise SignallingInput(
            "correlator form requires a no-signalling behavior: "
            + "; ".join(violations))
    singles = {}
    for party in PARTIES:
        ax = _party_axis(party)
        vals = []
        for x in (0, 1):
            ins = [0, 0, 0]
            ins[ax] = x
            m = marginal(b, party, tuple(ins))
            vals.append(m[0] - m[1])
        singles[party] = vals
    doubles = {}
    for pair in ("AB", "AC", "BC"):
        q = bipartite_marginal(b, pair, 0).q
        d = np.empty((2, 2), dtype=b.p.dtype)
        for u in (0, 1):
            for v in (0, 1):
                d[u, v] = sum(
                    _sign(i) * _sign(j) * q[u, v, i, j]
                    for i in (0, 1) for j in (0, 1))
        doubles[pair] = d
    triples = np.empty((2, 2, 2), dtype=b.p.dtype)
    for X in (0, 1):
        for Y in (0, 1):
            for Z in (0, 1):
                triples[X, Y, Z] = sum(
                    _sign(a) * _sign(b_) * _sign(c) * b.p[X, Y, Z, a, b_, c]
                    for a in (0, 1) for b_ in (0, 1) for c in (0, 1))
    return CorrelatorForm(singles, doubles, triples, b.mode)


def from_correlators(c: CorrelatorForm) -> Behavior:
    eighth = rat(1, 8) if c.mode == "rational" else 0.125
    p = np.empty(SHAPE, dtype=object if c.mode == "rational" else float)
    for X in (0, 1):
        for Y in (0, 1):
            for Z in (0, 1):
                for a in (0, 1):
                    for b_ in (0, 1):
                        for cc in (0, 1):
                            sa, sb, sc = _sign(a), _sign(b_), _sign(cc)
                            val = (
                                1
                                + sa * c.singles["A"][X]
                                + sb * c.singles["B"][Y]
                                + sc * c.singles["C"][Z]
                                + sa * sb * c.doubles["AB"][X, Y]
                                + sa * sc * c.doubles["AC"][X, Z]
                                + sb * sc * c.doubles["BC"][Y, Z]
                                + sa * sb * sc * c.triples[X, Y, Z]
                            ) * eighth
                            p[X, Y, Z, a, b_, cc] = val
    tol = 0 if c.mode == "rational" else DOUBLE_TOL
    if any(v < -tol for v in p.reshape(-1)):
        raise InvalidCorrelators("correlators produce a negative probability")
    return Behavior(p, c.mode)


def mix(b1: Behavior, b2: Behavior, weight) -> Behavior:
    """Entrywise weight*b1 + (1-weight)*b2; both behaviors in one mode."""
    if b1.mode != b2.mode:
        raise ValueError("cannot mix behaviors of different modes")
    if b1.mode == "rational":
        w = rat_from(weight)
        if w < 0 or w > 1:
            raise ValueError("mixing weight must lie in [0, 1]")
        return Behavior(w * b1.p + (1 - w) * b2.p, "rational")
    w = float(weight)
    if w < 0 or w > 1:
        raise ValueError("mixing weight must lie in [0, 1]")
    return Behavior(w * b1.p + (1 - w) * b2.p, "double")


# --- file format ----------------------------------------------------------

def behavior_to_dict(b: Behavior) -> dict:
    if b.mode == "rational":
        entries = [format_rational(v) for v in b.flat()]
    else:
        entries = [float(v) for v in b.flat()]
    return {"scenario": [3, 2, 2], "mode": b.mode, "p": entries}


def behavior_from_dict(d: dict) -> Behavior:
    if d.get("scenario") != [3, 2, 2]:
        raise ValueError("unsupported scenario, expected [3, 2, 2]")
    mode = d.get("mode")
    entries = d.get("p")
    if not isinstance(entries, list) or len(entries) != 64:
        raise ValueError("field 'p' must be a list of 64 entries")
    if mode == "rational":
        return Behavior([rat_from(e) for e in entries], "rational")
    if mode == "double":
        return Behavior([float(e) for e in entries], "double")
    raise ValueError(f"unknown mode {mode!r}")


def save_behavior(b: Behavior, path):
    with open(path, "w") as fh:
        json.dump(behavior_to_dict(b), fh, indent=1)
        fh.write("\n")


def load_behavior(path) -> Behavior:
    with open(path) as fh:
        return behavior_from_dict(json.load(fh))
