"""Bell-expression algebra for the three-party two-input two-output scenario.

A BellExpression is an affine functional on behaviors, stored exactly as a
constant plus rational weights over the 64 conditional-probability entries.
Correlator and zero-outcome probability term dictionaries are derived views
of those weights.  The module also provides the 3072-element relabeling
group (party permutations, input swaps, per-input output flips), orbit
canonicalization, the shipped 185-family inequality catalog with declared
class bounds, and facet verification against the two-group no-signalling
polytope generators.
"""

import json
import re
from collections import namedtuple
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from pathlib import Path

import numpy as np

from .behavior import Behavior, SHAPE, to_correlators
from .rational import R0, R1, format_rational, parse_rational, rat, rat_from

PARTY_LETTERS = ("A", "B", "C")
_TRIPLES01 = tuple(product((0, 1), repeat=3))

_TERM_RE = re.compile(r"^(A[01])?(B[01])?(C[01])?$")


def _ordered_terms():
    # fixed comparison order: degree, then party tuple, then input tuple
    terms = ["1"]
    for r in (1, 2, 3):
        for parties in combinations(range(3), r):
            for inputs in product((0, 1), repeat=r):
                terms.append("".join(
                    f"{PARTY_LETTERS[p]}{x}" for p, x in zip(parties, inputs)))
    return tuple(terms)


CORRELATOR_TERMS = _ordered_terms()


def _parse_term_key(key):
    """'A0B1' -> ((0, 0), (1, 1)) as (party index, input) pairs."""
    m = _TERM_RE.match(key)
    if not m or not key:
        raise ValueError(f"bad term key {key!r}")
    return tuple((p, int(m.group(p + 1)[1]))
                 for p in range(3) if m.group(p + 1))


def _term_key(pairs):
    return "".join(f"{PARTY_LETTERS[p]}{x}" for p, x in sorted(pairs))


def _flat_index(inputs, outputs):
    i = 0
    for v in inputs + outputs:
        i = 2 * i + v
    return i


DeclaredBound = namedtuple("DeclaredBound", "value source")


class BellExpression:
    """Affine functional on behaviors: const + exact entry weights."""

    __slots__ = ("name", "const", "weights", "bounds")

    def __init__(self, const, weights, name=None, bounds=None):
        w = np.empty(64, dtype=object)
        flat = np.asarray(weights, dtype=object).reshape(-1)
        if flat.size != 64:
            raise ValueError("expression needs 64 entry weights")
        w[:] = [rat_from(v) for v in flat]
        self.const = rat_from(const)
        self.weights = w
        self.name = name or "expr"
        self.bounds = dict(bounds) if bounds else {}

    def __repr__(self):
        return f"<BellExpression {self.name}>"

    # --- constructors -------------------------------------------------

    @classmethod
    def from_correlator_terms(cls, terms, name=None, bounds=None):
        """Build from {'1': c, 'A0': c, 'A1B0C1': c, ...} correlator coefficients."""
        const = R0
        w = np.zeros(64, dtype=object)
        w[:] = R0
        for key, coeff in terms.items():
            coeff = rat_from(coeff)
            if key == "1":
                const += coeff
                continue
            pairs = _parse_term_key(key)
            fixed = dict(pairs)
            # average over unspecified inputs, parity sign over specified outputs
            factor = coeff * rat(1, 2 ** (3 - len(pairs)))
            for X in _TRIPLES01:
                if any(X[p] != x for p, x in fixed.items()):
                    continue
                for a in _TRIPLES01:
                    sgn = sum(a[p] for p in fixed) & 1
                    w[_flat_index(X, a)] += -factor if sgn else factor
        return cls(const, w, name=name, bounds=bounds)

    @classmethod
    def from_probability_terms(cls, terms, name=None, bounds=None):
        """Build from zero-outcome probability terms.

        Keys: '1', 'A1B1' (all listed outputs 0 at the listed inputs, other
        inputs averaged), or 'B1C1|A0' (same, but conditioning inputs pinned).
        """
        const = R0
        w = np.zeros(64, dtype=object)
        w[:] = R0
        for key, coeff in terms.items():
            coeff = rat_from(coeff)
            if key == "1":
                const += coeff
                continue
            head, _, cond = key.partition("|")
            pinned = _parse_term_key(head)
            extra = _parse_term_key(cond) if cond else ()
            fixed = dict(pinned)
            if set(fixed) & {p for p, _ in extra}:
                raise ValueError(f"term {key!r} pins an input twice")
            fixed.update(extra)
            zero_parties = [p for p, _ in pinned]
            factor = coeff * rat(1, 2 ** (3 - len(fixed)))
            for X in _TRIPLES01:
                if any(X[p] != x for p, x in fixed.items()):
                    continue
                for a in _TRIPLES01:
                    if any(a[p] for p in zero_parties):
                        continue
                    w[_flat_index(X, a)] += factor
        return cls(const, w, name=name, bounds=bounds)

    # --- evaluation -----------------------------------------------------

    def prob_vector(self):
        """(constant, 64 entry weights) in flat X-major order."""
        return self.const, list(self.weights)

    def evaluate(self, b: Behavior, basis="probability"):
        """Value on a behavior; correlator basis insists on no-signalling."""
        if basis == "correlator":
            cf = to_correlators(b)
            vals = dict(zip(CORRELATOR_TERMS[1:], cf.values()))
            terms = self.correlator_terms()
            if b.mode == "rational":
                total = terms.get("1", R0)
                for key, c in terms.items():
                    if key != "1":
                        total += c * vals[key]
                return total
            total = float(terms.get("1", R0))
            for key, c in terms.items():
                if key != "1":
                    total += float(c) * float(vals[key])
            return total
        if basis != "probability":
            raise ValueError(f"unknown basis {basis!r}")
        flat = b.flat()
        if b.mode == "rational":
            total = self.const
            for wv, pv in zip(self.weights, flat):
                if wv:
                    total += wv * pv
            return total
        return float(self.const) + float(
            np.dot(self.weights.astype(float), np.asarray(flat, dtype=float)))

    # --- basis views ------------------------------------------------------

    def correlator_terms(self):
        """Correlator coefficients of the functional restricted to the
        no-signalling set (unique there; distinct lifts of one expression
        share them)."""
        eighth = rat(1, 8)
        hat = {}
        for S in _SUBSETS:
            for X in _TRIPLES01:
                tot = R0
                for a in _TRIPLES01:
                    v = self.weights[_flat_index(X, a)]
                    if not v:
                        continue
                    tot += -v if (sum(a[p] for p in S) & 1) else v
                hat[S, X] = tot * eighth
        terms = {}
        unit = self.const + sum((hat[(), X] for X in _TRIPLES01), R0)
        if unit:
            terms["1"] = unit
        for S in _SUBSETS[1:]:
            for xs in product((0, 1), repeat=len(S)):
                fixed = dict(zip(S, xs))
                c = sum((hat[S, X] for X in _TRIPLES01
                         if all(X[p] == x for p, x in fixed.items())), R0)
                if c:
                    terms[_term_key(fixed.items())] = c
        return terms

    def probability_terms(self):
        """Coefficients over '1' and zero-outcome probability terms."""
        out = {}
        for key, c in self.correlator_terms().items():
            for pkey, factor in _corr_term_to_prob(key).items():
                out[pkey] = out.get(pkey, R0) + c * factor
        return {k: v for k, v in out.items() if v}


_SUBSETS = tuple(
    s for r in range(4) for s in combinations(range(3), r))


@lru_cache(maxsize=None)
def _corr_term_to_prob(key):
    """Correlator term as a combination of zero-outcome probability terms."""
    if key == "1":
        return {"1": R1}
    pairs = _parse_term_key(key)
    if len(pairs) == 1:
        return {key: rat(2), "1": rat(-1)}
    if len(pairs) == 2:
        k1, k2 = (_term_key([p]) for p in pairs)
        return {key: rat(4), k1: rat(-2), k2: rat(-2), "1": R1}
    singles = [_term_key([p]) for p in pairs]
    doubles = [_term_key(c) for c in combinations(pairs, 2)]
    out = {key: rat(8), "1": rat(-1)}
    for k in doubles:
        out[k] = rat(-4)
    for k in singles:
        out[k] = rat(2)
    return out


def to_correlator_basis(expr: BellExpression):
    """Correlator-basis coefficient dict of an expression."""
    return expr.correlator_terms()


def to_probability_basis(expr: BellExpression):
    """Zero-outcome probability-basis coefficient dict of an expression."""
    return expr.probability_terms()


# --- relabeling group -------------------------------------------------------


@dataclass(frozen=True)
class RelabelingElement:
    """Party permutation + per-party input swap + per-party-per-input output flip."""

    party_map: tuple      # original party i plays role party_map[i]
    input_swaps: tuple    # party i's input x becomes x ^ input_swaps[i]
    output_flips: tuple   # party i's output gains output_flips[i][x] at input x

    def apply_to_term(self, pairs):
        """Image of a correlator term and its sign."""
        sign = 1
        new = []
        for p, x in pairs:
            if self.output_flips[p][x]:
                sign = -sign
            new.append((self.party_map[p], x ^ self.input_swaps[p]))
        return tuple(sorted(new)), sign


def identity_relabeling():
    return RelabelingElement((0, 1, 2), (0, 0, 0), ((0, 0), (0, 0), (0, 0)))


def compose(g: RelabelingElement, h: RelabelingElement):
    """Element acting as h first, then g."""
    party = tuple(g.party_map[h.party_map[i]] for i in range(3))
    swaps = tuple(h.input_swaps[i] ^ g.input_swaps[h.party_map[i]]
                  for i in range(3))
    flips = tuple(
        tuple(h.output_flips[i][x]
              ^ g.output_flips[h.party_map[i]][x ^ h.input_swaps[i]]
              for x in (0, 1))
        for i in range(3))
    return RelabelingElement(party, swaps, flips)


@lru_cache(maxsize=1)
def enumerate_relabelings():
    """All 3072 relabelings: 6 party orders, 8 input swaps, 64 output flips."""
    out = []
    for pm in permutations(range(3)):
        for sw in product((0, 1), repeat=3):
            for fl in product((0, 1), repeat=6):
                flips = (fl[0:2], fl[2:4], fl[4:6])
                out.append(RelabelingElement(pm, sw, flips))
    assert len(out) == 3072
    return tuple(out)


def _relabel_coords(g, X, a):
    Xn = [0, 0, 0]
    an = [0, 0, 0]
    for i in range(3):
        j = g.party_map[i]
        Xn[j] = X[i] ^ g.input_swaps[i]
        an[j] = a[i] ^ g.output_flips[i][X[i]]
    return tuple(Xn), tuple(an)


def relabel_behavior(g: RelabelingElement, b: Behavior):
    """Push a behavior through a relabeling."""
    q = np.empty(SHAPE, dtype=b.p.dtype)
    for X in _TRIPLES01:
        for a in _TRIPLES01:
            Xn, an = _relabel_coords(g, X, a)
            q[Xn + an] = b.p[X + a]
    return Behavior(q, b.mode)


def relabel_expression(g: RelabelingElement, expr: BellExpression):
    """Companion action on expressions: value is preserved on relabeled behaviors."""
    w = np.empty(64, dtype=object)
    for X in _TRIPLES01:
        for a in _TRIPLES01:
            Xn, an = _relabel_coords(g, X, a)
            w[_flat_index(Xn, an)] = expr.weights[_flat_index(X, a)]
    return BellExpression(expr.const, w, name=f"relabeled({expr.name})",
                          bounds=expr.bounds)


@lru_cache(maxsize=1)
def _group_term_action():
    """Per group element: index permutation + signs over the 26 non-unit terms."""
    terms = CORRELATOR_TERMS[1:]
    index = {t: i for i, t in enumerate(terms)}
    parsed = [_parse_term_key(t) for t in terms]
    acts = []
    for g in enumerate_relabelings():
        perm = [0] * 26
        sign = [1] * 26
        for i, pairs in enumerate(parsed):
            new, s = g.apply_to_term(pairs)
            perm[i] = index[_term_key(new)]
            sign[i] = s
        acts.append((tuple(perm), tuple(sign)))
    return acts


def _coeff_vector(expr):
    terms = expr.correlator_terms()
    return [terms.get(t, R0) for t in CORRELATOR_TERMS[1:]]


def _normalize_scale(vec):
    """Scale rationals to coprime integers (positive factor only)."""
    from math import gcd
    fracs = [parse_rational(format_rational(v)) for v in vec]
    dens = [f.denominator for f in fracs]
    L = 1
    for d in dens:
        L = L * d // gcd(L, d)
    ints = [int(f * L) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _sign_normalized(vec):
    for v in vec:
        if v:
            return vec if v > 0 else tuple(-u for u in vec)
    return vec


@dataclass(frozen=True)
class CanonicalForm:
    expression: BellExpression
    key: tuple
    orbit_size: int
    stabilizer_size: int


def canonicalize(expr: BellExpression) -> CanonicalForm:
    """Minimum over the 3072 relabeling images of the scale-normalized
    integer coefficient vector (non-unit correlator terms, fixed order)."""
    base = _normalize_scale(_coeff_vector(expr))
    images = set()
    ident = None
    stab = 0
    for perm, sign in _group_term_action():
        img = [0] * 26
        for i, v in enumerate(base):
            if v:
                img[perm[i]] = v if sign[i] > 0 else -v
        img = _sign_normalized(tuple(img))
        images.add(img)
        if ident is None:
            ident = _sign_normalized(tuple(base))
        if img == ident:
            stab += 1
    key = min(images)
    rep = BellExpression.from_correlator_terms(
        {t: c for t, c in zip(CORRELATOR_TERMS[1:], key) if c},
        name=f"canonical({expr.name})")
    return CanonicalForm(rep, key, len(images), stab)


# --- catalog ----------------------------------------------------------------


class CatalogMissing(KeyError):
    """Catalog data file or requested family is not available."""


@dataclass(frozen=True)
class CatalogFamily:
    family: int
    expression: BellExpression
    bounds: dict  # class tag -> rational bound; quantum -> float


class Catalog:
    """Immutable family id -> representative inequality table."""

    def __init__(self, families):
        self._families = dict(families)

    def __len__(self):
        return len(self._families)

    def __iter__(self):
        return iter(sorted(self._families))

    def family(self, n) -> CatalogFamily:
        try:
            return self._families[n]
        except KeyError:
            raise CatalogMissing(f"family {n} not in catalog") from None


_DATA_PATH = Path(__file__).parent / "data" / "catalog.json"


def _family_from_record(rec):
    n = rec["family"]
    bounds = {}
    declared = {}
    for tag in ("ns2", "t2", "s2"):
        val = rat_from(parse_rational(rec["bounds"][tag]))
        bounds[tag] = val
        declared[tag] = DeclaredBound(val, "catalog-table")
    bounds["quantum"] = rec["bounds"]["quantum"]
    declared["quantum"] = DeclaredBound(rec["bounds"]["quantum"],
                                        "quantum-numeric")
    if "quantum_upper" in rec["bounds"]:
        bounds["quantum_upper"] = rec["bounds"]["quantum_upper"]
        declared["quantum_upper"] = DeclaredBound(
            rec["bounds"]["quantum_upper"], "quantum-numeric")
    expr = BellExpression.from_correlator_terms(
        rec["terms"], name=f"family-{n}", bounds=declared)
    return CatalogFamily(n, expr, bounds)


def _family_to_record(fam: CatalogFamily):
    terms = fam.expression.correlator_terms()
    rec = {
        "family": fam.family,
        "terms": {k: int(v) for k, v in sorted(
            terms.items(), key=lambda kv: CORRELATOR_TERMS.index(kv[0]))},
        "bounds": {
            "ns2": format_rational(fam.bounds["ns2"]),
            "t2": format_rational(fam.bounds["t2"]),
            "s2": format_rational(fam.bounds["s2"]),
            "quantum": fam.bounds["quantum"],
        },
    }
    if "quantum_upper" in fam.bounds:
        rec["bounds"]["quantum_upper"] = fam.bounds["quantum_upper"]
    return rec


@lru_cache(maxsize=4)
def load_catalog(path=None) -> Catalog:
    p = Path(path) if path else _DATA_PATH
    if not p.exists():
        raise CatalogMissing(f"catalog data file {p} not found")
    records = json.loads(p.read_text())
    families = {}
    for rec in records:
        fam = _family_from_record(rec)
        if fam.family in families:
            raise ValueError(f"duplicate family id {fam.family}")
        families[fam.family] = fam
    return Catalog(families)


def dump_catalog(catalog: Catalog):
    """Records in the file format; load/dump round-trips exactly."""
    return [_family_to_record(catalog.family(n)) for n in catalog]


def expression_to_dict(expr: BellExpression) -> dict:
    d = {"name": expr.name,
         "const": format_rational(expr.const),
         "weights": [format_rational(w) for w in expr.weights]}
    if expr.bounds:
        d["bounds"] = {
            tag: {"value": db.value if isinstance(db.value, float)
                  else format_rational(db.value),
                  "source": db.source}
            for tag, db in expr.bounds.items()}
    return d


def expression_from_dict(d: dict) -> BellExpression:
    weights = d.get("weights")
    if not isinstance(weights, list) or len(weights) != 64:
        raise ValueError("field 'weights' must be a list of 64 entries")
    bounds = {}
    for tag, rec in d.get("bounds", {}).items():
        val = rec["value"]
        if not isinstance(val, float):
            val = rat_from(val)
        bounds[tag] = DeclaredBound(val, rec.get("source", "file"))
    return BellExpression(rat_from(d.get("const", "0")),
                          [rat_from(w) for w in weights],
                          name=d.get("name"), bounds=bounds)


def save_expression(expr: BellExpression, path):
    with open(path, "w") as fh:
        json.dump(expression_to_dict(expr), fh, indent=1)
        fh.write("\n")


def load_expression(path) -> BellExpression:
    with open(path) as fh:
        return expression_from_dict(json.load(fh))


# --- bound and facet verification -------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    family: int
    class_tag: str
    passed: bool
    computed: object
    declared: object
    method: str


def verify_bound(family, class_tag, catalog_path=None) -> BoundCheck:
    """Recompute a declared class bound exactly and compare."""
    fam = load_catalog(catalog_path).family(family)
    if class_tag not in ("ns2", "t2", "s2"):
        raise ValueError(f"no declared bound for class {class_tag!r}")
    declared = fam.bounds[class_tag]
    from . import membership
    res = membership.maximize(fam.expression, class_tag)
    return BoundCheck(family, class_tag, res.value == declared,
                      res.value, declared, res.method)


@dataclass(frozen=True)
class FacetCheck:
    passed: bool
    affine_rank: int
    saturating: int
    polytope_dim: int


def _affine_rank(flats):
    """Exact affine rank of a list of 64-entry rational points."""
    if not flats:
        return -1
    base = flats[0]
    rows = [[v - b for v, b in zip(f, base)] for f in flats[1:]]
    rank = 0
    col = 0
    nrows = len(rows)
    while rank < nrows and col < 64:
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = R1 / prow[col]
        for r in range(rank + 1, nrows):
            f = rows[r][col]
            if f:
                f = f * inv
                rows[r] = [a - f * p for a, p in zip(rows[r], prow)]
        rank += 1
        col += 1
    return rank


@lru_cache(maxsize=1)
def _ns2_generator_flats():
    from .vertices import enumerate_ns2
    vs = enumerate_ns2()
    return tuple(tuple(g.flat()) for g in vs.points)


@lru_cache(maxsize=1)
def ns2_polytope_dim():
    """Affine dimension of the two-group no-signalling polytope (26)."""
    return _affine_rank(list(_ns2_generator_flats()))


def facet_rank(expr: BellExpression, bound) -> FacetCheck:
    """Affine rank of the polytope generators saturating expr <= bound."""
    bound = rat_from(bound)
    flats = _ns2_generator_flats()
    sat = []
    for f in flats:
        val = expr.const + sum(
            (w * v for w, v in zip(expr.weights, f) if w), R0)
        if val == bound:
            sat.append(list(f))
    dim = ns2_polytope_dim()
    rank = _affine_rank(sat)
    return FacetCheck(rank == dim - 1, rank, len(sat), dim)


def verify_facet(family, catalog_path=None) -> FacetCheck:
    """Is the family's inequality a facet of the two-group polytope?"""
    fam = load_catalog(catalog_path).family(family)
    return facet_rank(fam.expression, fam.bounds["ns2"])


# --- named fixture expressions ----------------------------------------------


def expr_split() -> BellExpression:
    """Zero-bounded test on two-way ordered models; splits into the two
    one-way parts below, which sum to it on no-signalling behaviors."""
    half = rat(1, 2)
    return BellExpression.from_probability_terms(
        {
            "A1B1": -2, "B1C1": -2, "A1C1": -2,
            "A0B0C1": -1, "A0B1C0": -1, "A1B0C0": -1,
            "A1B1C0": 2, "A1B0C1": 2, "A0B1C1": 2, "A1B1C1": 2,
        },
        name="ordered-split-total",
        bounds={"t2": DeclaredBound(R0, "fixture"),
                "s2": DeclaredBound(rat(3, 7), "fixture")})


def expr_split_first() -> BellExpression:
    """Half of the split test that one-way models signalling first-to-second
    keep non-positive."""
    return BellExpression.from_probability_terms(
        {
            "A1B1": -1, "B1C1|A0": -1, "A1C1": -1,
            "A0B0C1": rat(-1, 2), "A1B0C0": -1,
            "A1B1C0": 1, "A1B0C1": 1, "A0B1C1": 1, "A1B1C1": 1,
        },
        name="ordered-split-first")


def expr_split_second() -> BellExpression:
    """Mirror half of the split test (first two parties exchanged)."""
    return BellExpression.from_probability_terms(
        {
            "A1B1": -1, "A1C1|B0": -1, "B1C1": -1,
            "A0B0C1": rat(-1, 2), "A0B1C0": -1,
            "A1B1C0": 1, "A0B1C1": 1, "A1B0C1": 1, "A1B1C1": 1,
        },
        name="ordered-split-second")


def expr_ordered_witness() -> BellExpression:
    """Correlator test bounded by 3 on two-way ordered models yet reaching
    1 + 2*sqrt(2) with three-qubit measurements."""
    return BellExpression.from_correlator_terms(
        {"A0B0": 1, "A0C0": 1, "B0C1": 1, "A1B1C0": -1, "A1B1C1": 1},
        name="ordered-witness",
        bounds={"t2": DeclaredBound(rat(3), "fixture"),
                "s2": DeclaredBound(rat(5), "fixture"),
                "quantum": DeclaredBound(1 + 2 * 2 ** 0.5,
                                         "quantum-numeric")})
