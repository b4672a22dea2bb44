"""Extremal and generating strategies of the locality classes.

Enumeration always runs in rational mode; identity of points is exact tensor
equality. Bipartitions are named 'AB|C', 'AC|B', 'BC|A' (pair first). All
orderings are fixed so that provenance labels are reproducible run to run.
"""

import itertools
import json
import os

import numpy as np

from .behavior import SHAPE, Behavior
from .rational import R0, R1, rat

BIPARTITIONS = ("AB|C", "AC|B", "BC|A")

# response tables are tuples: single-party (o(0), o(1)); pair functions are
# indexed by 2*u + v for pair inputs (u, v)
SINGLE_TABLES = tuple(itertools.product((0, 1), repeat=2))
PAIR_TABLES = tuple(itertools.product((0, 1), repeat=4))


class DeterministicStrategy:
    """A deterministic response-table strategy of one of three kinds."""

    __slots__ = ("kind", "tables")

    def __init__(self, kind, tables):
        if kind not in ("single-party", "one-way-pair", "unrestricted-pair"):
            raise ValueError(f"unknown strategy kind {kind!r}")
        self.kind = kind
        self.tables = tables

    def __repr__(self):
        return f"DeterministicStrategy({self.kind!r}, {self.tables!r})"


class OrderingDirection:
    """Which member of a bipartition's pair acts first."""

    __slots__ = ("pair", "direction")

    def __init__(self, pair, direction):
        if pair not in ("AB", "AC", "BC"):
            raise ValueError(f"invalid pair {pair!r}")
        if direction not in ("first<second", "second<first"):
            raise ValueError(f"invalid direction {direction!r}")
        self.pair = pair
        self.direction = direction

    def __repr__(self):
        a, b = self.pair
        arrow = f"{a}<{b}" if self.direction == "first<second" else f"{b}<{a}"
        return f"OrderingDirection({arrow})"


class VertexSet:
    """A labeled, duplicate-free list of generating Behavior points."""

    __slots__ = ("tag", "points", "labels")

    def __init__(self, tag, points, labels):
        self.tag = tag
        self.points = points
        self.labels = labels  # labels[i] is a tuple of provenance strings

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _pair_axes(bipartition):
    pair, single = bipartition.split("|")
    axes = {"A": 0, "B": 1, "C": 2}
    return [axes[p] for p in pair], axes[single]


def product_point(bipartition, fa, fb, fsingle):
    """Deterministic product behavior for a bipartition.

    fa, fb are the pair's response tables over the pair inputs (u, v) in
    party order of the pair; fsingle is the lone party's table over its own
    input. Entries land in {0, 1}.
    """
    (ax1, ax2), ax3 = _pair_axes(bipartition)
    p = np.empty(SHAPE, dtype=object)
    for X in (0, 1):
        for Y in (0, 1):
            for Z in (0, 1):
                ins = (X, Y, Z)
                u, v = ins[ax1], ins[ax2]
                w = ins[ax3]
                outs = [None, None, None]
                outs[ax1] = fa[2 * u + v]
                outs[ax2] = fb[2 * u + v]
                outs[ax3] = fsingle[w]
                for a in (0, 1):
                    for b in (0, 1):
                        for c in (0, 1):
                            hit = (a, b, c) == tuple(outs)
                            p[X, Y, Z, a, b, c] = R1 if hit else R0
    return Behavior(p, "rational")


def local_point(ta, tb, tc):
    """Fully local deterministic behavior from three single-party tables."""
    fa = tuple(ta[u] for u, _ in ((0, 0), (0, 1), (1, 0), (1, 1)))
    fb = tuple(tb[v] for _, v in ((0, 0), (0, 1), (1, 0), (1, 1)))
    return product_point("AB|C", fa, fb, tc)


def _tensor_key(b: Behavior):
    return tuple(b.flat())


def enumerate_local() -> VertexSet:
    """All 64 products of single-party deterministic strategies."""
    points, labels = [], []
    for ta in SINGLE_TABLES:
        for tb in SINGLE_TABLES:
            for tc in SINGLE_TABLES:
                points.append(local_point(ta, tb, tc))
                labels.append(
                    (f"local:a={ta[0]}{ta[1]},b={tb[0]}{tb[1]},"
                     f"c={tc[0]}{tc[1]}",))
    return VertexSet("local", points, labels)


def pr_box_variants():
    """The 8 extremal nonlocal bipartite boxes, as 16-entry maps
    q[(u, v, a, b)], obtained as the relabeling orbit of a ^ b = u*v."""
    def box(inswap_u, inswap_v, flip_a, flip_b):
        # flips are tables over the (already swapped) local input
        q = {}
        for u in (0, 1):
            for v in (0, 1):
                uu = 1 - u if inswap_u else u
                vv = 1 - v if inswap_v else v
                for a in (0, 1):
                    for b in (0, 1):
                        aa = a ^ flip_a[uu]
                        bb = b ^ flip_b[vv]
                        q[(u, v, a, b)] = (
                            rat(1, 2) if (aa ^ bb) == uu * vv else R0)
        return q

    seen = {}
    for inswap_u in (0, 1):
        for inswap_v in (0, 1):
            for flip_a in SINGLE_TABLES:
                for flip_b in SINGLE_TABLES:
                    q = box(inswap_u, inswap_v, flip_a, flip_b)
                    key = tuple(q[k] for k in sorted(q))
                    seen.setdefault(key, q)
    # fixed variant order: sort by the flattened tuple
    return [seen[k] for k in sorted(seen)]


def pr_product_point(bipartition, pr_box, fsingle):
    """(PR box on the pair) x (deterministic lone party)."""
    (ax1, ax2), ax3 = _pair_axes(bipartition)
    p = np.empty(SHAPE, dtype=object)
    for X in (0, 1):
        for Y in (0, 1):
            for Z in (0, 1):
                ins = (X, Y, Z)
                u, v, w = ins[ax1], ins[ax2], ins[ax3]
                for a in (0, 1):
                    for b in (0, 1):
                        for c in (0, 1):
                            outs = (a, b, c)
                            pairval = pr_box[(u, v, outs[ax1], outs[ax2])]
                            ok = outs[ax3] == fsingle[w]
                            p[X, Y, Z, a, b, c] = pairval if ok else R0
    return Behavior(p, "rational")


def enumerate_ns2() -> VertexSet:
    """64 local points plus, per bipartition, 8 PR variants x 4 lone-party
    strategies; 160 points total."""
    base = enumerate_local()
    points = list(base.points)
    labels = list(base.labels)
    boxes = pr_box_variants()
    for bip in BIPARTITIONS:
        for k, q in enumerate(boxes):
            for ts in SINGLE_TABLES:
                points.append(pr_product_point(bip, q, ts))
                labels.append((f"{bip}:PR{k},single={ts[0]}{ts[1]}",))
    return VertexSet("NS2", points, labels)


def one_way_pair_tables(direction):
    """(first table, second table) pairs with one-way signalling only.

    direction 'first<second': the first party answers from its own input
    alone, the second sees both. 64 pairs either way.
    """
    out = []
    if direction == "first<second":
        for t1 in SINGLE_TABLES:
            f1 = (t1[0], t1[0], t1[1], t1[1])  # ignores the second input
            for f2 in PAIR_TABLES:
                out.append((f1, f2, f"{t1[0]}{t1[1]}", _tbl4(f2)))
    elif direction == "second<first":
        for f1 in PAIR_TABLES:
            for t2 in SINGLE_TABLES:
                f2 = (t2[0], t2[1], t2[0], t2[1])  # ignores the first input
                out.append((f1, f2, _tbl4(f1), f"{t2[0]}{t2[1]}"))
    else:
        raise ValueError(f"invalid direction {direction!r}")
    return out


def _tbl4(f):
    return "".join(str(x) for x in f)


def enumerate_one_way(pair, direction) -> VertexSet:
    """Products (one-way pair strategy) x (lone-party strategy): 256 points."""
    OrderingDirection(pair, direction)  # validates arguments
    bip = next(b for b in BIPARTITIONS if b.startswith(pair))
    points, labels = [], []
    for f1, f2, lab1, lab2 in one_way_pair_tables(direction):
        for ts in SINGLE_TABLES:
            points.append(product_point(bip, f1, f2, ts))
            arrow = (f"{pair[0]}<{pair[1]}" if direction == "first<second"
                     else f"{pair[1]}<{pair[0]}")
            labels.append(
                (f"{bip}:{arrow}:first={lab1},second={lab2},"
                 f"single={ts[0]}{ts[1]}",))
    return VertexSet(f"one-way({pair},{direction})", points, labels)


def s2_labeled_strategies():
    """All (bipartition, pair tables, lone table) triples: 3*256*4 = 3072.

    This is the labeled generator list the S2 membership LP indexes its
    columns by; tensors repeat across bipartitions for fully local entries.
    """
    out = []
    for bip in BIPARTITIONS:
        for f1 in PAIR_TABLES:
            for f2 in PAIR_TABLES:
                for ts in SINGLE_TABLES:
                    label = (f"{bip}:pair={_tbl4(f1)}/{_tbl4(f2)},"
                             f"single={ts[0]}{ts[1]}")
                    out.append((label, bip, f1, f2, ts))
    return out


def enumerate_s2_generators() -> VertexSet:
    """Deduplicated point list of the 3072 labeled S2 generators; every
    point keeps all provenance labels that produced it."""
    points, labels, index = [], [], {}
    for label, bip, f1, f2, ts in s2_labeled_strategies():
        b = product_point(bip, f1, f2, ts)
        key = _tensor_key(b)
        if key in index:
            labels[index[key]] = labels[index[key]] + (label,)
        else:
            index[key] = len(points)
            points.append(b)
            labels.append((label,))
    return VertexSet("S2-generators", points, labels)


def dump_vertex_set(vs: VertexSet, directory):
    """One behavior file per point plus an index of provenance labels."""
    from .behavior import save_behavior
    os.makedirs(directory, exist_ok=True)
    index = []
    for i, (pt, labs) in enumerate(zip(vs.points, vs.labels)):
        fname = f"point_{i:04d}.json"
        save_behavior(pt, os.path.join(directory, fname))
        index.append({"file": fname, "labels": list(labs)})
    with open(os.path.join(directory, "index.json"), "w") as fh:
        json.dump({"tag": vs.tag, "points": index}, fh, indent=1)
        fh.write("\n")
