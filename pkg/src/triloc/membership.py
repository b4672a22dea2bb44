"""Membership, maximization and noise-threshold queries for the locality
classes, answered by LP with independently verifiable certificates.

Classes, ordered by inclusion:

    local < ns2 < t2 < k2 < s2        (every class except s2 lies inside ns)

local/ns2/s2 are convex hulls of explicit generator lists (module vertices).
t2 is cut out by the hybrid-decomposition system: the behavior splits into
three pair/lone terms, each term decomposes over one-way-signalling
deterministic strategies in both measurement orderings of its pair, with the
per-lone-strategy masses of the two orderings coupled. k2 is the same with
the mass coupling dropped (orderings known in advance). ns is the linear
no-signalling space.

Membership is decided through a noise-path LP: maximize t such that
t*b + (1-t)*uniform lies in the class. The behavior is a member exactly when
t* = 1; otherwise the LP dual yields a functional separating b from the
whole class, and t* itself is the visibility threshold of b.
"""

from math import gcd

import numpy as np

from .behavior import (SHAPE, Behavior, is_no_signalling, mix,
                       uniform_behavior)
from .rational import R0, R1, rat, rat_from
from .solver import LpProblem, solve_certified, solve_double
from .vertices import (BIPARTITIONS, SINGLE_TABLES, enumerate_local,
                       enumerate_ns2, one_way_pair_tables, product_point,
                       s2_labeled_strategies)

CLASSES = ("local", "ns2", "t2", "k2", "s2", "ns")

# containment chain used for verdict sanity checks; ns2/t2/k2 also sit
# inside ns, s2 does not
CHAIN = ("local", "ns2", "t2", "k2", "s2")


def _check_class(tag):
    tag = str(tag).lower()
    if tag not in CLASSES:
        raise ValueError(f"unknown locality class {tag!r}")
    return tag


class ClassSystem:
    """LP template for one class: per-variable contributions to the 64
    behavior entries plus the internal constraint rows."""

    __slots__ = ("tag", "nvars", "var_labels", "match_cols", "internal_rows",
                 "meta")

    def __init__(self, tag, nvars, var_labels, match_cols, internal_rows,
                 meta=None):
        self.tag = tag
        self.nvars = nvars
        self.var_labels = var_labels
        self.match_cols = match_cols      # var -> {entry index: coeff}
        self.internal_rows = internal_rows  # list of ({var: coeff}, rhs)
        self.meta = meta or {}


def _hull_system(tag, points, labels):
    match_cols = {}
    for v, pt in enumerate(points):
        flat = pt.flat()
        match_cols[v] = {i: flat[i] for i in range(64) if flat[i]}
    mass = ({v: R1 for v in range(len(points))}, R1)
    return ClassSystem(tag, len(points),
                       [lab[0] if isinstance(lab, tuple) else lab
                        for lab in labels],
                       match_cols, [mass])


# no-signalling equality rows over the 64 behavior entries: every pair
# marginal is independent of the traced party's input (48 rows; single-party
# conditions follow)
def _ns_rows_on_entries():
    rows = []
    axes = {"A": 0, "B": 1, "C": 2}
    for pair in ("AB", "AC", "BC"):
        pax = [axes[p] for p in pair]
        tax = next(i for i in range(3) if i not in pax)
        for u in (0, 1):
            for v in (0, 1):
                for oa in (0, 1):
                    for ob in (0, 1):
                        row = {}
                        for tin in (0, 1):
                            ins = [None] * 3
                            ins[pax[0]], ins[pax[1]], ins[tax] = u, v, tin
                            sgn = R1 if tin == 0 else -R1
                            for to in (0, 1):
                                outs = [None] * 3
                                outs[pax[0]], outs[pax[1]] = oa, ob
                                outs[tax] = to
                                idx = np.ravel_multi_index(
                                    tuple(ins) + tuple(outs), SHAPE)
                                row[idx] = row.get(idx, R0) + sgn
                        rows.append(({i: c for i, c in row.items() if c}, R0))
    return rows


def _system_ns():
    match_cols = {i: {i: R1} for i in range(64)}
    labels = [f"p[{i}]" for i in range(64)]
    rows = []
    for blk in range(8):
        rows.append(({blk * 8 + k: R1 for k in range(8)}, R1))
    rows.extend(_ns_rows_on_entries())
    return ClassSystem("ns", 64, labels, match_cols, rows)


def _pair_of(bip):
    return bip.split("|")[0]


def _t2_layout():
    """Variable ids for the hybrid-decomposition systems.

    H[bip][i]          id = 64*bip + i                      (192 vars)
    q[bip][d][lam][s]  id = 192 + 512*bip + 256*d + 64*lam + s
    with d = 0 for first<second, d = 1 for second<first; lam indexes the
    lone party's table, s the one-way pair strategy.
    """
    def hvar(bip, i):
        return 64 * bip + i

    def qvar(bip, d, lam, s):
        return 192 + 512 * bip + 256 * d + 64 * lam + s

    return hvar, qvar


def _system_hybrid(tag, coupling, ns2_rows=False):
    """T2-style system; `coupling` adds the per-lone-strategy mass equality
    between orderings (t2), ns2_rows additionally forces the two orderings
    to reconstruct identical pair correlations per lone strategy."""
    hvar, qvar = _t2_layout()
    nvars = 192 + 1536
    labels = [None] * nvars
    match_cols = {}
    internal = []
    directions = ("first<second", "second<first")
    for bip_i, bip in enumerate(BIPARTITIONS):
        for i in range(64):
            v = hvar(bip_i, i)
            labels[v] = f"H[{bip}][{i}]"
            match_cols[v] = {i: R1}
    strategies = {d: one_way_pair_tables(d) for d in directions}
    for bip_i, bip in enumerate(BIPARTITIONS):
        pair = _pair_of(bip)
        for d_i, d in enumerate(directions):
            tabs = strategies[d]
            # hybrid-definition rows: H - sum_q q * tensor = 0, per entry
            rows = [{hvar(bip_i, i): R1} for i in range(64)]
            for s, (f1, f2, lab1, lab2) in enumerate(tabs):
                for lam, lone in enumerate(SINGLE_TABLES):
                    v = qvar(bip_i, d_i, lam, s)
                    arrow = (f"{pair[0]}<{pair[1]}" if d_i == 0
                             else f"{pair[1]}<{pair[0]}")
                    labels[v] = (f"q[{bip}][{arrow}][lone={lone[0]}"
                                 f"{lone[1]}][first={lab1},second={lab2}]")
                    flat = product_point(bip, f1, f2, lone).flat()
                    for i in range(64):
                        if flat[i]:
                            rows[i][v] = -flat[i]
            for i in range(64):
                internal.append((rows[i], R0))
        if coupling:
            for lam in range(4):
                row = {}
                for s in range(64):
                    row[qvar(bip_i, 0, lam, s)] = R1
                    row[qvar(bip_i, 1, lam, s)] = -R1
                internal.append((row, R0))
        if ns2_rows:
            # both orderings reconstruct the same pair correlations for
            # each lone strategy: 16 rows per (bipartition, lone table)
            for lam in range(4):
                for u in (0, 1):
                    for v_in in (0, 1):
                        for oa in (0, 1):
                            for ob in (0, 1):
                                row = {}
                                for d_i, d in enumerate(directions):
                                    sgn = R1 if d_i == 0 else -R1
                                    for s, (f1, f2, _, _) in enumerate(
                                            strategies[d]):
                                        if (f1[2 * u + v_in] == oa
                                                and f2[2 * u + v_in] == ob):
                                            vv = qvar(bip_i, d_i, lam, s)
                                            row[vv] = row.get(vv, R0) + sgn
                                row = {k: c for k, c in row.items() if c}
                                if row:
                                    internal.append((row, R0))
    mass = {}
    for bip_i in range(3):
        for lam in range(4):
            for s in range(64):
                mass[qvar(bip_i, 0, lam, s)] = R1
    internal.append((mass, R1))
    return ClassSystem(tag, nvars, labels, match_cols, internal,
                       meta={"hybrid": True})


_SYSTEM_CACHE = {}


def build_system(tag, form="default") -> ClassSystem:
    """Constraint system whose feasible set (over the 64 entries reached by
    the match columns) is exactly the class."""
    tag = _check_class(tag)
    key = (tag, form)
    if key in _SYSTEM_CACHE:
        return _SYSTEM_CACHE[key]
    if tag == "local":
        vs = enumerate_local()
        sys_ = _hull_system(tag, vs.points, vs.labels)
    elif tag == "ns2" and form == "default":
        vs = enumerate_ns2()
        sys_ = _hull_system(tag, vs.points, vs.labels)
    elif tag == "ns2" and form == "constraint":
        sys_ = _system_hybrid("ns2", coupling=True, ns2_rows=True)
    elif tag == "s2":
        labeled = s2_labeled_strategies()
        points = [product_point(bip, f1, f2, ts)
                  for _, bip, f1, f2, ts in labeled]
        sys_ = _hull_system(tag, points, [lab for lab, *_ in labeled])
    elif tag == "t2":
        sys_ = _system_hybrid("t2", coupling=True)
    elif tag == "k2":
        sys_ = _system_hybrid("k2", coupling=False)
    elif tag == "ns":
        sys_ = _system_ns()
    else:
        raise ValueError(f"unknown system form {form!r} for {tag}")
    _SYSTEM_CACHE[key] = sys_
    return sys_


# --- certificates -----------------------------------------------------------

class DecompositionCertificate:
    """Explicit class model reproducing a behavior: nonnegative weights on
    labeled strategies, plus the reconstructed pair/lone hybrid tensors for
    the hybrid classes."""

    __slots__ = ("tag", "weights", "hybrids", "mode")

    def __init__(self, tag, weights, hybrids=None, mode="rational"):
        self.tag = tag
        self.weights = weights   # {label: weight}, zeros omitted
        self.hybrids = hybrids   # {bipartition: (2,)*6 tensor} for t2/k2
        self.mode = mode

    def to_dict(self):
        from .rational import format_rational
        enc = (format_rational if self.mode == "rational" else float)
        d = {"class": self.tag, "mode": self.mode,
             "weights": {k: enc(v) for k, v in self.weights.items()}}
        if self.hybrids is not None:
            d["hybrids"] = {
                bip: [enc(v) for v in tensor.reshape(-1)]
                for bip, tensor in self.hybrids.items()}
        return d


class SeparatingFunctional:
    """Linear functional with coefficients on the 64 entries: at most
    `offset` on the whole class, strictly more on the queried behavior."""

    __slots__ = ("tag", "coeffs", "offset", "gap", "mode")

    def __init__(self, tag, coeffs, offset, gap, mode="rational"):
        self.tag = tag
        self.coeffs = coeffs
        self.offset = offset
        self.gap = gap
        self.mode = mode

    def value_on(self, b: Behavior):
        flat = b.flat()
        return sum(c * flat[i] for i, c in enumerate(self.coeffs) if c)

    def to_dict(self):
        from .rational import format_rational
        enc = (format_rational if self.mode == "rational" else float)
        return {"class": self.tag, "mode": self.mode,
                "coeffs": [enc(c) for c in self.coeffs],
                "offset": enc(self.offset), "gap": enc(self.gap)}


class ClassifyResult:
    __slots__ = ("tag", "member", "certificate", "functional", "threshold")

    def __init__(self, tag, member, certificate=None, functional=None,
                 threshold=None):
        self.tag = tag
        self.member = member
        self.certificate = certificate
        self.functional = functional
        self.threshold = threshold  # the noise-path optimum t*

    def __repr__(self):
        verdict = "member" if self.member else "nonmember"
        return f"ClassifyResult({self.tag}, {verdict})"


class ThresholdResult:
    __slots__ = ("tag", "p_max", "certificate", "functional")

    def __init__(self, tag, p_max, certificate, functional=None):
        self.tag = tag
        self.p_max = p_max
        self.certificate = certificate  # decomposition of the boundary mix
        self.functional = functional    # supporting functional when p < 1


class MaximizeResult:
    __slots__ = ("tag", "value", "argmax", "weights", "method")

    def __init__(self, tag, value, argmax, weights, method):
        self.tag = tag
        self.value = value
        self.argmax = argmax    # a Behavior achieving the value
        self.weights = weights  # {label: weight} decomposition of argmax
        self.method = method


# --- LP assembly ------------------------------------------------------------

def _threshold_problem(sys_: ClassSystem, b: Behavior, mode):
    """max t s.t. (match vars reconstruct) u + t*(b - u), internal rows,
    0 <= t <= 1. Variables: system vars, then t, then the slack of t<=1."""
    u = uniform_behavior(mode)
    n = sys_.nvars
    t_var, s_var = n, n + 1
    prob = LpProblem(n + 2, mode)
    bflat, uflat = b.flat(), u.flat()
    rows = [dict() for _ in range(64)]
    for v, col in sys_.match_cols.items():
        for i, cval in col.items():
            rows[i][v] = cval
    for i in range(64):
        d = bflat[i] - uflat[i]
        if d:
            rows[i][t_var] = -d
        prob.add_row(rows[i], uflat[i])
    for coeffs, rhs in sys_.internal_rows:
        prob.add_row(coeffs, rhs)
    prob.add_row({t_var: 1, s_var: 1}, 1)
    prob.set_objective({t_var: 1})
    return prob, t_var


def _solver_for(mode, exact):
    if mode == "double":
        return solve_double
    return solve_certified if exact else solve_certified


def _extract_weights(sys_, x):
    w = {}
    for v in range(sys_.nvars):
        lab = sys_.var_labels[v]
        if lab is not None and not lab.startswith("H[") and x[v]:
            w[lab] = x[v]
    return w


def _extract_hybrids(sys_, x, mode):
    if not sys_.meta.get("hybrid"):
        return None
    hvar, _ = _t2_layout()
    out = {}
    for bip_i, bip in enumerate(BIPARTITIONS):
        t = np.empty(SHAPE, dtype=object if mode == "rational" else float)
        flatview = t.reshape(-1)
        for i in range(64):
            flatview[i] = x[hvar(bip_i, i)]
        out[bip] = t
    return out


def _hull_points(sys_):
    """Behavior tensors of a hull system's columns, as flat lists."""
    pts = []
    for v in range(sys_.nvars):
        col = sys_.match_cols[v]
        pts.append([col.get(i, R0) for i in range(64)])
    return pts


def _normalize_functional(coeffs, offset, gap, mode):
    if mode != "rational":
        scale = max((abs(c) for c in coeffs), default=1.0)
        if scale == 0:
            scale = 1.0
        return ([c / scale for c in coeffs], offset / scale, gap / scale)
    from fractions import Fraction
    fracs = [Fraction(int(rat_from(c).numerator), int(rat_from(c).denominator))
             for c in coeffs]
    off = rat_from(offset)
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    den = den * int(off.denominator) // gcd(den, int(off.denominator))
    ints = [int(f * den) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = gcd(g, abs(int(off.numerator * (den // off.denominator))))
    if g == 0:
        g = 1
    scale = rat(den, g)
    return ([rat_from(c) * scale for c in coeffs], off * scale,
            rat_from(gap) * scale)


def classify(b: Behavior, tag, verify=True) -> ClassifyResult:
    """Member with an explicit decomposition, or nonmember with a verified
    separating functional. Exact in rational mode."""
    tag = _check_class(tag)
    mode = b.mode
    sys_ = build_system(tag)
    prob, t_var = _threshold_problem(sys_, b, mode)
    out = _solver_for(mode, True)(prob)
    if out.status != "optimal":
        raise RuntimeError(f"threshold LP unexpectedly {out.status}")
    tstar = out.value
    member = (tstar == 1) if mode == "rational" else (tstar >= 1 - 1e-9)
    if member:
        cert = DecompositionCertificate(
            tag, _extract_weights(sys_, out.x),
            _extract_hybrids(sys_, out.x, mode), mode)
        if verify and mode == "rational":
            ok, why = verify_certificate(cert, b)
            if not ok:
                raise RuntimeError(f"certificate failed verification: {why}")
        return ClassifyResult(tag, True, certificate=cert, threshold=tstar)
    fn = _functional_from_dual(sys_, out.y, b, mode)
    if verify and mode == "rational":
        ok, why = verify_functional(fn, b)
        if not ok:
            raise RuntimeError(f"functional failed verification: {why}")
    return ClassifyResult(tag, False, functional=fn, threshold=tstar)


def _functional_from_dual(sys_, y, b, mode):
    # rows 0..63 are the match rows; internal rows follow; t-row is last.
    # With dual y: f = -y[0:64] satisfies f.P <= offset := sum of internal
    # duals times internal rhs for every P in the class, while f.b exceeds
    # the offset by at least 1 - t*.
    coeffs = [-y[i] for i in range(64)]
    offset = R0 if mode == "rational" else 0.0
    for k, (_, rhs) in enumerate(sys_.internal_rows):
        if rhs:
            offset = offset + y[64 + k] * rhs
    gap = sum(c * v for c, v in zip(coeffs, b.flat()) if c) - offset
    coeffs, offset, gap = _normalize_functional(coeffs, offset, gap, mode)
    return SeparatingFunctional(sys_.tag, coeffs, offset, gap, mode)


def threshold(b: Behavior, tag) -> ThresholdResult:
    """Largest p with p*b + (1-p)*uniform still inside the class, plus a
    decomposition of the boundary mixture (and, off the boundary p < 1, the
    separating functional supporting it)."""
    tag = _check_class(tag)
    mode = b.mode
    sys_ = build_system(tag)
    prob, t_var = _threshold_problem(sys_, b, mode)
    out = _solver_for(mode, True)(prob)
    if out.status != "optimal":
        raise RuntimeError(f"threshold LP unexpectedly {out.status}")
    p_max = out.value
    cert = DecompositionCertificate(
        tag, _extract_weights(sys_, out.x),
        _extract_hybrids(sys_, out.x, mode), mode)
    fn = None
    strict = (p_max < 1) if mode == "rational" else (p_max < 1 - 1e-9)
    if strict:
        fn = _functional_from_dual(sys_, out.y, b, mode)
    return ThresholdResult(tag, p_max, cert, fn)


def maximize(objective, tag, restrict_to_ns=True, method="auto"):
    """Maximal value of a linear expression over a class.

    `objective` is (constant, 64 entry coefficients) or an object exposing
    .prob_vector(). local/ns2 scan their generators (the LP agrees; see
    tests). s2 is maximized over the no-signalling slice of the hull by
    default, which is the bound observable correlations can reach; pass
    restrict_to_ns=False for the unrestricted hull (a generator scan).
    t2/k2/ns always go through the LP.
    """
    tag = _check_class(tag)
    if hasattr(objective, "prob_vector"):
        const, coeffs = objective.prob_vector()
    else:
        const, coeffs = objective
    mode = "double" if isinstance(const, float) or any(
        isinstance(c, float) for c in coeffs) else "rational"
    if method == "auto":
        if tag in ("local", "ns2") or (tag == "s2" and not restrict_to_ns):
            method = "scan"
        else:
            method = "lp"
    if method == "scan":
        if tag not in ("local", "ns2", "s2"):
            raise ValueError(f"no generator scan for class {tag}")
        return _maximize_scan(const, coeffs, tag, mode)
    return _maximize_lp(const, coeffs, tag, mode, restrict_to_ns)


def _maximize_scan(const, coeffs, tag, mode):
    sys_ = build_system(tag)
    conv = (lambda v: v) if mode == "rational" else float
    best, best_v = None, None
    for v in range(sys_.nvars):
        col = sys_.match_cols[v]
        val = sum(coeffs[i] * conv(c) for i, c in col.items() if coeffs[i])
        if best is None or val > best:
            best, best_v = val, v
    label = sys_.var_labels[best_v]
    pt = Behavior([sys_.match_cols[best_v].get(i, R0) for i in range(64)],
                  "rational")
    if mode == "double":
        pt = pt.to_double()
    one = R1 if mode == "rational" else 1.0
    return MaximizeResult(tag, const + best, pt, {label: one}, "scan")


def _maximize_lp(const, coeffs, tag, mode, restrict_to_ns):
    sys_ = build_system(tag)
    conv = (lambda v: v) if mode == "rational" else float
    prob = LpProblem(sys_.nvars, mode)
    obj = {}
    for v, col in sys_.match_cols.items():
        val = sum(coeffs[i] * conv(c) for i, c in col.items() if coeffs[i])
        if val:
            obj[v] = val
    prob.set_objective(obj)
    for row, rhs in sys_.internal_rows:
        prob.add_row(row, rhs)
    if restrict_to_ns and tag == "s2":
        # observable correlations are no-signalling; cut the hull down to
        # that slice before maximizing
        by_entry = {}
        for v, col in sys_.match_cols.items():
            for i, cv in col.items():
                by_entry.setdefault(i, []).append((v, cv))
        for row, rhs in _ns_rows_on_entries():
            lifted = {}
            for i, c in row.items():
                for v, cv in by_entry.get(i, ()):
                    lifted[v] = lifted.get(v, R0) + c * cv
            lifted = {v: c for v, c in lifted.items() if c}
            if lifted:
                prob.add_row(lifted, rhs)
    out = _solver_for(mode, True)(prob)
    if out.status != "optimal":
        raise RuntimeError(f"maximize LP unexpectedly {out.status}")
    recon = _reconstruct(sys_, out.x, mode)
    return MaximizeResult(tag, const + out.value, recon,
                          _extract_weights(sys_, out.x), "lp")


def _reconstruct(sys_, x, mode):
    zero = R0 if mode == "rational" else 0.0
    conv = (lambda v: v) if mode == "rational" else float
    flat = [zero] * 64
    for v, col in sys_.match_cols.items():
        if x[v]:
            for i, c in col.items():
                flat[i] = flat[i] + conv(c) * x[v]
    return Behavior(flat, mode)


# --- certificate verification ------------------------------------------------

def verify_certificate(cert: DecompositionCertificate, b: Behavior):
    """Re-derives the behavior from the certificate's own fields."""
    if cert.mode != "rational":
        return False, "only rational certificates are verified exactly"
    tol_ok = lambda x: x == 0
    if cert.tag in ("local", "ns2", "s2"):
        sys_ = build_system(cert.tag)
        by_label = {sys_.var_labels[v]: v for v in range(sys_.nvars)}
        total = R0
        recon = [R0] * 64
        for lab, w in cert.weights.items():
            if w < 0:
                return False, f"negative weight on {lab}"
            if lab not in by_label:
                return False, f"unknown strategy label {lab}"
            total += w
            for i, c in sys_.match_cols[by_label[lab]].items():
                recon[i] += w * c
        if total != 1:
            return False, "weights do not sum to 1"
        if any(recon[i] != b.flat()[i] for i in range(64)):
            return False, "reconstruction does not match the behavior"
        return True, ""
    if cert.tag in ("t2", "k2"):
        return _verify_hybrid_certificate(cert, b)
    if cert.tag == "ns":
        ok, viol = is_no_signalling(b)
        return (ok, "" if ok else "; ".join(viol))
    return False, f"unknown class {cert.tag}"


def _verify_hybrid_certificate(cert, b):
    sys_ = build_system(cert.tag)
    by_label = {sys_.var_labels[v]: v for v in range(sys_.nvars)}
    hvar, qvar = _t2_layout()
    x = [R0] * sys_.nvars
    for lab, w in cert.weights.items():
        if w < 0:
            return False, f"negative weight on {lab}"
        if lab not in by_label:
            return False, f"unknown strategy label {lab}"
        x[by_label[lab]] = w
    if cert.hybrids is None:
        return False, "hybrid tensors missing"
    for bip_i, bip in enumerate(BIPARTITIONS):
        if bip not in cert.hybrids:
            return False, f"hybrid tensor for {bip} missing"
        flat = cert.hybrids[bip].reshape(-1)
        for i in range(64):
            x[hvar(bip_i, i)] = rat_from(flat[i])
    # every internal row of the class system must hold on the certificate
    for row, rhs in sys_.internal_rows:
        acc = R0
        for v, c in row.items():
            if x[v]:
                acc += c * x[v]
        if acc != rhs:
            return False, "internal decomposition constraint violated"
    # hybrid terms sum to the behavior
    bflat = b.flat()
    for i in range(64):
        tot = sum(x[hvar(bip_i, i)] for bip_i in range(3))
        if tot != bflat[i]:
            return False, "hybrid terms do not sum to the behavior"
    return True, ""


def verify_functional(fn: SeparatingFunctional, b: Behavior):
    """Checks separation: fn <= offset on the entire class (generator scan
    for hull classes, LP for the rest), fn > offset on b."""
    val_b = fn.value_on(b)
    if not val_b > fn.offset:
        return False, "functional does not exceed the offset on the behavior"
    if fn.tag in ("local", "ns2", "s2"):
        sys_ = build_system(fn.tag)
        for v in range(sys_.nvars):
            col = sys_.match_cols[v]
            val = sum(fn.coeffs[i] * c for i, c in col.items())
            if val > fn.offset:
                return False, f"generator {sys_.var_labels[v]} violates"
        return True, ""
    res = maximize((R0 if fn.mode == "rational" else 0.0, fn.coeffs), fn.tag,
                   restrict_to_ns=False)
    if res.value > fn.offset:
        return False, "class maximum exceeds the offset"
    return True, ""


# --- the one-way split check -------------------------------------------------

def split_check(b: Behavior):
    """Values (total, first, second) of the ordered-split test expression and
    its two one-way parts; asserts total = first + second on the given
    no-signalling behavior."""
    from .inequalities import (expr_split, expr_split_first,
                               expr_split_second)
    ok, viol = is_no_signalling(b)
    if not ok:
        from .behavior import SignallingInput
        raise SignallingInput("split_check needs a no-signalling behavior: "
                              + "; ".join(viol))
    total = expr_split().evaluate(b)
    first = expr_split_first().evaluate(b)
    second = expr_split_second().evaluate(b)
    if b.mode == "rational":
        assert total == first + second
    else:
        assert abs(total - (first + second)) <= 1e-9
    return total, first, second
