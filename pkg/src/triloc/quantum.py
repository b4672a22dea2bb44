"""Three-qubit quantum engine: states, Bloch observables, Born-rule behaviors,
seesaw optimization of Bell expressions, visibility thresholds along the
white-noise path, and pure-state grid scans.

Grid points and seesaw restarts are independent of each other; every
randomized routine draws from per-task generators spawned off one seed, so
runs are reproducible and safe to parallelize.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path

import numpy as np

from .behavior import Behavior, PARTIES
from .inequalities import BellExpression, _parse_term_key

HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNIT_TOL = 1e-12

PAULI = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

_TRIPLES01 = tuple(product((0, 1), repeat=3))


class InvariantViolation(ValueError):
    """State, observable or scenario breaks a declared invariant."""


# --- states -------------------------------------------------------------


class QuantumState:
    """8x8 density matrix with validated invariants."""

    __slots__ = ("rho",)

    def __init__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (8, 8):
            raise InvariantViolation("density matrix must be 8x8")
        if np.abs(rho - rho.conj().T).max() > HERM_TOL:
            raise InvariantViolation("density matrix not Hermitian")
        if abs(np.trace(rho).real - 1) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
            raise InvariantViolation("density matrix trace != 1")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise InvariantViolation("density matrix not positive semidefinite")
        self.rho = rho

    @classmethod
    def from_pure(cls, vec):
        v = np.asarray(vec, dtype=complex).reshape(-1)
        if v.size != 8:
            raise InvariantViolation("pure state needs 8 amplitudes")
        n = np.linalg.norm(v)
        if abs(n - 1) > 1e-9:
            raise InvariantViolation("pure state not normalized")
        v = v / n
        return cls(np.outer(v, v.conj()))

    def with_white_noise(self, p):
        """p * rho + (1 - p) * maximally mixed."""
        return QuantumState(p * self.rho + (1 - p) * np.eye(8) / 8)

    def correlation_tensor(self):
        """T[i,j,k] = Tr[rho s_i x s_j x s_k], Pauli index 0 = identity."""
        return np.real(np.einsum("ab,nba->n", self.rho,
                                 _pauli_kron())).reshape(4, 4, 4)


@lru_cache(maxsize=1)
def _pauli_kron():
    mats = [np.kron(np.kron(PAULI[i], PAULI[j]), PAULI[k])
            for i in range(4) for j in range(4) for k in range(4)]
    return np.stack(mats)


def ghz_state() -> QuantumState:
    """(|000> + |111>)/sqrt(2)."""
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / math.sqrt(2)
    return QuantumState.from_pure(v)


def w_state() -> QuantumState:
    """(|001> + |010> + |100>)/sqrt(3)."""
    v = np.zeros(8, dtype=complex)
    v[1] = v[2] = v[4] = 1 / math.sqrt(3)
    return QuantumState.from_pure(v)


@dataclass(frozen=True)
class PureStateParams:
    """Five nonnegative amplitudes (|000>, |100>, |101>, |110>, |111>) with
    one phase on the |100> amplitude."""

    lams: tuple
    phase: float = 0.0

    def __post_init__(self):
        if len(self.lams) != 5:
            raise InvariantViolation("need five amplitudes")
        if any(l < 0 for l in self.lams):
            raise InvariantViolation("amplitudes must be nonnegative")
        if abs(sum(l * l for l in self.lams) - 1) > UNIT_TOL:
            raise InvariantViolation("amplitudes must have unit square sum")
        if not 0 <= self.phase <= math.pi + 1e-12:
            raise InvariantViolation("phase must lie in [0, pi]")

    def vector(self):
        l0, l1, l2, l3, l4 = self.lams
        v = np.zeros(8, dtype=complex)
        v[0] = l0
        v[4] = l1 * np.exp(1j * self.phase)
        v[5] = l2
        v[6] = l3
        v[7] = l4
        return v

    def state(self) -> QuantumState:
        return QuantumState.from_pure(self.vector())

    def entanglement_guards(self, tol=1e-12):
        """Failed genuine-tripartite-entanglement guards (empty = passes)."""
        l0, l1, l2, l3, l4 = self.lams
        failed = []
        if l0 <= tol:
            failed.append("first amplitude vanishes")
        if l2 + l4 <= tol:
            failed.append("third and fifth amplitudes both vanish")
        if l3 + l4 <= tol:
            failed.append("fourth and fifth amplitudes both vanish")
        return tuple(failed)


# --- observables ---------------------------------------------------------


class Observable:
    """Projective +-1 qubit observable along a Bloch direction."""

    __slots__ = ("theta", "phi", "bloch", "matrix")

    def __init__(self, theta, phi):
        n = np.array([math.sin(theta) * math.cos(phi),
                      math.sin(theta) * math.sin(phi),
                      math.cos(theta)])
        self.theta = float(theta)
        self.phi = float(phi)
        self.bloch = n
        self.matrix = n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3]

    @classmethod
    def from_bloch(cls, n):
        n = np.asarray(n, dtype=float)
        norm = np.linalg.norm(n)
        if abs(norm - 1) > 1e-6:
            raise InvariantViolation("Bloch vector must be unit length")
        n = n / norm
        return cls(math.acos(max(-1.0, min(1.0, n[2]))),
                   math.atan2(n[1], n[0]))

    def projector(self, outcome):
        """Outcome 0 is the +1 eigenspace, outcome 1 the -1 eigenspace."""
        sign = 1 if outcome == 0 else -1
        return (PAULI[0] + sign * self.matrix) / 2


SIGMA_Z = Observable(0.0, 0.0)
SIGMA_X = Observable(math.pi / 2, 0.0)


class QuantumScenario:
    """A state plus two observables per party."""

    __slots__ = ("state", "observables")

    def __init__(self, state, observables):
        if not isinstance(state, QuantumState):
            raise InvariantViolation("state must be a QuantumState")
        obs = {}
        for party in PARTIES:
            try:
                pair = observables[party]
            except (KeyError, TypeError):
                raise InvariantViolation(f"missing observables for {party}")
            pair = tuple(pair)
            if len(pair) != 2 or not all(isinstance(o, Observable) for o in pair):
                raise InvariantViolation(f"{party} needs two observables")
            obs[party] = pair
        self.state = state
        self.observables = obs


def born_behavior(scenario: QuantumScenario) -> Behavior:
    """p(abc|XYZ) = Tr[rho projector-product]; double-mode output."""
    if not isinstance(scenario, QuantumScenario):
        raise InvariantViolation("need a QuantumScenario")
    rho = scenario.state.rho
    proj = {(party, x, a): scenario.observables[party][x].projector(a)
            for party in PARTIES for x in (0, 1) for a in (0, 1)}
    p = np.empty((2,) * 6, dtype=float)
    for X in _TRIPLES01:
        for a in _TRIPLES01:
            M = np.kron(np.kron(proj["A", X[0], a[0]], proj["B", X[1], a[1]]),
                        proj["C", X[2], a[2]])
            p[X + a] = np.real(np.einsum("ab,ba->", rho, M))
    return Behavior(p, "double")


def save_angles(observables, path):
    """One JSON record per observable: party, setting, theta, phi."""
    lines = []
    for party in PARTIES:
        for setting in (0, 1):
            o = observables[party][setting]
            lines.append(json.dumps({"party": party, "setting": setting,
                                     "theta": o.theta, "phi": o.phi}))
    Path(path).write_text("\n".join(lines) + "\n")


def load_angles(path):
    recs = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        recs[d["party"], d["setting"]] = Observable(d["theta"], d["phi"])
    out = {}
    for party in PARTIES:
        if (party, 0) not in recs or (party, 1) not in recs:
            raise InvariantViolation(f"angle file misses settings for {party}")
        out[party] = (recs[party, 0], recs[party, 1])
    return out


# --- seesaw -----------------------------------------------------------------


_E0 = np.array([1.0, 0.0, 0.0, 0.0])
_AXES = "ijk"


def _vec4(n):
    return np.array([0.0, n[0], n[1], n[2]])


def _organize(terms):
    """(unit, [(pairs, coeff), ...]) with float coefficients."""
    unit = float(terms.get("1", 0.0))
    items = [(_parse_term_key(k), float(c))
             for k, c in terms.items() if k != "1"]
    return unit, items


def _objective_value(T, unit, items, vecs):
    total = unit
    for pairs, c in items:
        ops = [_E0, _E0, _E0]
        for p, x in pairs:
            ops[p] = _vec4(vecs[p][x])
        total += c * np.einsum("ijk,i,j,k->", T, *ops)
    return total


def _setting_gradient(T, items, vecs, party, setting):
    g = np.zeros(4)
    for pairs, c in items:
        if (party, setting) not in pairs:
            continue
        d = dict(pairs)
        ops = []
        sub = []
        for p in range(3):
            if p == party:
                continue
            ops.append(_vec4(vecs[p][d[p]]) if p in d else _E0)
            sub.append(_AXES[p])
        g += c * np.einsum(f"ijk,{sub[0]},{sub[1]}->{_AXES[party]}", T, *ops)
    return g[1:]


def _seesaw_once(T, unit, items, vecs, tol=1e-10, max_sweeps=500):
    """Cyclic closed-form updates; monotone by construction and checked."""
    val = _objective_value(T, unit, items, vecs)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        before = val
        for party in range(3):
            for setting in (0, 1):
                g = _setting_gradient(T, items, vecs, party, setting)
                norm = np.linalg.norm(g)
                if norm > 1e-13:
                    vecs[party][setting] = g / norm
            new = _objective_value(T, unit, items, vecs)
            assert new >= val - 1e-9 * (1 + abs(val)), "seesaw decreased"
            val = new
        if val - before <= tol * (1 + abs(val)):
            break
    return val, vecs, sweeps


def _sphere_point(rng):
    v = rng.normal(size=3)
    n = np.linalg.norm(v)
    return v / n if n > 1e-12 else np.array([0.0, 0.0, 1.0])


def _random_vecs(rng):
    return [[_sphere_point(rng) for _ in (0, 1)] for _ in range(3)]


def _vecs_to_observables(vecs):
    return {party: (Observable.from_bloch(vecs[i][0]),
                    Observable.from_bloch(vecs[i][1]))
            for i, party in enumerate(PARTIES)}


@dataclass(frozen=True)
class SeesawResult:
    value: float
    observables: dict
    sweeps: int
    restart_values: tuple


def seesaw_maximize(expr: BellExpression, state: QuantumState,
                    restarts=50, seed=0, tol=1e-10) -> SeesawResult:
    """Best value of the expression over projective measurements on the state,
    from `restarts` random starts (closed-form party-wise ascent)."""
    unit, items = _organize(expr.correlator_terms())
    T = state.correlation_tensor()
    best = (-math.inf, None, 0)
    values = []
    for ss in np.random.SeedSequence(seed).spawn(max(1, restarts)):
        rng = np.random.default_rng(ss)
        val, vecs, sweeps = _seesaw_once(T, unit, items, _random_vecs(rng),
                                         tol=tol)
        values.append(val)
        if val > best[0]:
            best = (val, vecs, sweeps)
    return SeesawResult(float(best[0]), _vecs_to_observables(best[1]),
                        best[2], tuple(values))


# --- visibility thresholds ---------------------------------------------------


def _float_corr_terms(weights):
    """Correlator restriction of 64 float entry weights (unit term dropped
    up to the behavior-normalization constant)."""
    w = np.asarray(weights, dtype=float).reshape(8, 8)
    aflat = np.array(_TRIPLES01)
    terms = {}
    unit = 0.0
    for S in _SUBSETS_Q:
        sgn = (-1.0) ** (aflat[:, list(S)].sum(axis=1)) if S else np.ones(8)
        hat = w @ sgn / 8
        if not S:
            unit += hat.sum()
            continue
        for xs in product((0, 1), repeat=len(S)):
            mask = np.array([all(X[p] == v for p, v in zip(S, xs))
                             for X in _TRIPLES01])
            c = hat[mask].sum()
            if c:
                key = "".join(f"{PARTIES[p]}{v}" for p, v in zip(S, xs))
                terms[key] = c
    if unit:
        terms["1"] = unit
    return terms


_SUBSETS_Q = tuple(
    s for r in range(4) for s in combinations(range(3), r))


@dataclass(frozen=True)
class ThresholdSearchResult:
    state_label: str
    class_tag: str
    p: float
    observables: dict
    rounds: int
    restart_values: tuple


def _observables_to_vecs(observables):
    return [[np.array(observables[party][x].bloch, dtype=float)
             for x in (0, 1)] for party in PARTIES]


@lru_cache(maxsize=8)
def _catalog_seesaws(label, seed, quick_restarts):
    """Quick seesaw value and observables for every catalog family."""
    from .inequalities import load_catalog
    state = ghz_state() if label == "ghz" else w_state()
    catalog = load_catalog()
    out = []
    for n in sorted(catalog):
        res = seesaw_maximize(catalog.family(n).expression, state,
                              restarts=quick_restarts, seed=[seed, n])
        out.append((n, res.value, res.observables))
    return tuple(out)


def _catalog_starts(label, class_tag, seed, count=4, quick_restarts=4):
    """Measurement sets from quick seesaws over the catalog families, ranked
    by declared bound over achieved value (small ratio = deep violation)."""
    from .inequalities import load_catalog
    catalog = load_catalog()
    rank_tag = class_tag if class_tag in ("ns2", "t2", "s2") else "t2"
    scored = []
    for n, value, obs in _catalog_seesaws(label, seed, quick_restarts):
        bound = float(catalog.family(n).bounds[rank_tag])
        if value > bound + 1e-7:
            scored.append((bound / value, n, obs))
    scored.sort(key=lambda s: (s[0], s[1]))
    return [_observables_to_vecs(obs) for _, _, obs in scored[:count]]


def optimize_threshold(state_family, class_tag, restarts=8, seed=0,
                       p_tol=1e-6, max_rounds=25,
                       catalog_starts=4) -> ThresholdSearchResult:
    """Minimal white-noise visibility at which the state's behavior leaves the
    class: alternates the visibility LP (giving a separating functional) with
    a seesaw over measurements maximizing that functional.  Starts from the
    `catalog_starts` deepest catalog-family violations plus `restarts` random
    measurement sets (random-only when catalog_starts=0)."""
    from . import membership
    label = state_family.lower()
    if label == "ghz":
        state = ghz_state()
    elif label == "w":
        state = w_state()
    else:
        raise ValueError(f"unknown state family {state_family!r}")
    T = state.correlation_tensor()
    starts = []
    if catalog_starts:
        starts.extend(_catalog_starts(label, class_tag, seed,
                                      count=catalog_starts))
    for ss in np.random.SeedSequence(seed).spawn(max(1, restarts)):
        starts.append(_random_vecs(np.random.default_rng(ss)))
    best_p = 1.0
    best_vecs = None
    best_rounds = 0
    per_restart = []
    for vecs in starts:
        prev_p = math.inf
        local_p = 1.0
        rounds = 0
        for rounds in range(1, max_rounds + 1):
            b = born_behavior(QuantumScenario(state, _vecs_to_observables(vecs)))
            res = membership.threshold(b, class_tag)
            p = float(res.p_max)
            local_p = min(local_p, p)
            if p < best_p:
                best_p = p
                best_vecs = [list(map(np.copy, v)) for v in vecs]
                best_rounds = rounds
            if res.functional is None or prev_p - p <= p_tol:
                break
            prev_p = p
            unit, items = _organize(_float_corr_terms(res.functional.coeffs))
            _, vecs, _ = _seesaw_once(T, unit, items, vecs)
        per_restart.append(local_p)
    if best_vecs is None:
        best_vecs = _random_vecs(np.random.default_rng(seed))
    return ThresholdSearchResult(label, class_tag, best_p,
                                 _vecs_to_observables(best_vecs),
                                 best_rounds, tuple(per_restart))


# --- pure-state grid scan ----------------------------------------------------


@dataclass(frozen=True)
class ScanEntry:
    params: PureStateParams
    value: float
    violation: float


@dataclass(frozen=True)
class ScanReport:
    resolution: int
    expression: str
    bound: float
    entries: tuple
    skipped: tuple          # (params, reason)
    min_violation: float
    non_violating: tuple


def _scan_state(task):
    params, ss, unit, items, restarts = task
    T = params.state().correlation_tensor()
    best = -math.inf
    for child in ss.spawn(max(1, restarts)):
        rng = np.random.default_rng(child)
        val, _, _ = _seesaw_once(T, unit, items, _random_vecs(rng))
        best = max(best, val)
    return best


def scan_pure_states(resolution=4, expr=None, restarts=10, seed=0,
                     jobs=1) -> ScanReport:
    """Seesaw the expression on every admissible grid state: the last four
    amplitudes range over a grid, the first is fixed by normalization, the
    phase grids [0, pi]; guard-failing states are reported and skipped.
    Results are identical for any jobs count (per-state seed streams)."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if expr is None:
        from .inequalities import expr_split
        expr = expr_split()
    declared = expr.bounds.get("t2")
    bound = float(declared.value) if declared else 0.0
    steps = [i / (resolution - 1) for i in range(resolution)]
    phases = np.linspace(0.0, math.pi, resolution)
    states = []
    skipped = []
    for l4s in product(steps, repeat=4):
        sq = sum(l * l for l in l4s)
        if sq > 1 + 1e-12:
            continue
        l0 = math.sqrt(max(0.0, 1 - sq))
        for phi in phases:
            params = PureStateParams((l0,) + l4s, float(phi))
            guards = params.entanglement_guards()
            if guards:
                skipped.append((params, "; ".join(guards)))
            else:
                states.append(params)
    unit, items = _organize(expr.correlator_terms())
    seeds = np.random.SeedSequence(seed).spawn(len(states))
    tasks = [(params, ss, unit, items, restarts)
             for params, ss in zip(states, seeds)]
    if jobs == 1:
        bests = [_scan_state(t) for t in tasks]
    else:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            bests = list(pool.map(_scan_state, tasks, chunksize=8))
    entries = [ScanEntry(params, best, best - bound)
               for (params, *_), best in zip(tasks, bests)]
    min_violation = min((e.violation for e in entries), default=math.inf)
    non_violating = tuple(e for e in entries if e.violation <= 0)
    return ScanReport(resolution, expr.name, bound, tuple(entries),
                      tuple(skipped), min_violation, non_violating)


def scan_report_lines(report: ScanReport):
    """Line-oriented text form of a scan report."""
    yield (f"# scan resolution={report.resolution} expression={report.expression}"
           f" bound={report.bound:g} states={len(report.entries)}"
           f" skipped={len(report.skipped)}")
    for e in report.entries:
        lams = ",".join(f"{l:.6f}" for l in e.params.lams)
        yield (f"lams={lams} phase={e.params.phase:.6f}"
               f" value={e.value:.8f} violation={e.violation:.8f}")
    for params, reason in report.skipped:
        lams = ",".join(f"{l:.6f}" for l in params.lams)
        yield f"skipped lams={lams} phase={params.phase:.6f} reason={reason}"
    yield f"# min violation {report.min_violation:.8f}"
    yield (f"# non-violating states: {len(report.non_violating)}")
