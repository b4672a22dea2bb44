"""Linear programming kernel with exact rational and double backends.

Problems are equality-constrained maximizations over nonnegative variables:

    maximize c.x  subject to  A x = b,  x >= 0.

Three entry points:
  solve_double    scipy HiGHS, float certificates, 1e-9 tolerances
  solve_exact     self-contained two-phase simplex over exact rationals
                  (Bland's rule, dense tableau, explicit artificials)
  solve_certified double solve to locate an optimal basis, then exact
                  rational refactorization and independent verification of
                  the primal/dual pair; falls back to solve_exact whenever
                  the shortcut cannot be certified

Every certificate returned in rational mode is re-verified by direct
substitution before it leaves this module, so a bug in the pivoting logic
can produce a failure or a fallback, never a wrong certified answer.
"""

import numpy as np
import scipy.sparse
from scipy.optimize import linprog

from ._kernels import sparse_axpy, sparse_dot, sparse_scale, tableau_pivot
from .rational import R0, R1, rat, rat_from

FLOAT_FEAS_TOL = 1e-9
# tolerance for reading the support/reduced costs of a HiGHS solution when
# guessing a basis; certification is exact so this only affects fallbacks
CROSSOVER_TOL = 1e-7


class DimensionMismatch(ValueError):
    pass


class NumericalBreakdown(RuntimeError):
    pass


class LpProblem:
    """max c.x s.t. A x = b, x >= 0, with A stored as sparse dict rows."""

    __slots__ = ("n", "c", "rows", "rhs", "mode")

    def __init__(self, n, mode="rational"):
        if mode not in ("rational", "double"):
            raise ValueError(f"unknown mode {mode!r}")
        self.n = n
        self.mode = mode
        zero = R0 if mode == "rational" else 0.0
        self.c = [zero] * n
        self.rows = []
        self.rhs = []

    def _coerce(self, v):
        return rat_from(v) if self.mode == "rational" else float(v)

    def set_objective(self, coeffs):
        """coeffs: dict {var: coeff} or full-length sequence."""
        zero = R0 if self.mode == "rational" else 0.0
        self.c = [zero] * self.n
        items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
        for j, v in items:
            if not 0 <= j < self.n:
                raise DimensionMismatch(f"objective index {j} out of range")
            self.c[j] = self._coerce(v)

    def add_row(self, coeffs: dict, rhs):
        row = {}
        for j, v in coeffs.items():
            if not 0 <= j < self.n:
                raise DimensionMismatch(f"constraint index {j} out of range")
            v = self._coerce(v)
            if v:
                row[j] = v
        self.rows.append(row)
        self.rhs.append(self._coerce(rhs))

    @property
    def m(self):
        return len(self.rows)

    def value_of(self, x):
        return sum(cj * xj for cj, xj in zip(self.c, x) if cj and xj)

    def columns(self):
        """Transpose view: list of {row: coeff} dicts per variable."""
        cols = [dict() for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                cols[j][i] = v
        return cols


class LpOutcome:
    __slots__ = ("status", "value", "x", "y", "farkas", "mode", "stats")

    def __init__(self, status, value=None, x=None, y=None, farkas=None,
                 mode="rational", stats=None):
        self.status = status  # 'optimal' | 'infeasible' | 'unbounded'
        self.value = value
        self.x = x
        self.y = y            # row duals: y.A >= c on the nonneg cone
        self.farkas = farkas  # on infeasible: f.A <= 0 componentwise, f.b > 0
        self.mode = mode
        self.stats = stats or {}

    def __repr__(self):
        return f"LpOutcome({self.status}, value={self.value})"


# --- certificate verification (independent of how the solve was done) -----

def residual_primal(prob: LpProblem, x):
    """Max |A x - b| entry and min x entry, computed directly."""
    worst = R0 if prob.mode == "rational" else 0.0
    for row, b in zip(prob.rows, prob.rhs):
        r = sum(v * x[j] for j, v in row.items() if x[j]) - b
        if abs(r) > abs(worst):
            worst = r
    xmin = min(x) if len(x) else 0
    return worst, xmin


def verify_primal(prob, x, tol=None):
    worst, xmin = residual_primal(prob, x)
    if prob.mode == "rational":
        return worst == 0 and xmin >= 0
    tol = FLOAT_FEAS_TOL if tol is None else tol
    return abs(worst) <= tol and xmin >= -tol


def verify_dual(prob, y, tol=None):
    """y.A_j >= c_j for every column j (dual feasibility for max form)."""
    cols = prob.columns()
    if prob.mode == "rational":
        return all(prob.c[j] - sparse_dot(cols[j], y) <= 0
                   for j in range(prob.n))
    tol = FLOAT_FEAS_TOL if tol is None else tol
    return all(prob.c[j] - sparse_dot(cols[j], y) <= tol
               for j in range(prob.n))


def verify_farkas(prob, f):
    """f.b > 0 and f.A <= 0 on every column: certifies Ax=b, x>=0 empty."""
    fb = sum(fi * bi for fi, bi in zip(f, prob.rhs) if fi)
    if fb <= 0:
        return False
    cols = prob.columns()
    return all(sparse_dot(cols[j], f) <= 0 for j in range(prob.n))


# --- double backend (scipy HiGHS) ------------------------------------------

def _scipy_matrices(prob):
    data, indices, indptr = [], [], [0]
    for row in prob.rows:
        for j in sorted(row):
            indices.append(j)
            data.append(float(row[j]))
        indptr.append(len(indices))
    A = scipy.sparse.csr_matrix(
        (data, indices, indptr), shape=(prob.m, prob.n))
    b = np.array([float(v) for v in prob.rhs])
    c = np.array([float(v) for v in prob.c])
    return A, b, c


def solve_double(prob: LpProblem) -> LpOutcome:
    A, b, c = _scipy_matrices(prob)
    res = linprog(-c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if res.status == 2:
        return LpOutcome("infeasible", mode="double",
                         stats={"method": "highs"})
    if res.status == 3:
        return LpOutcome("unbounded", mode="double",
                         stats={"method": "highs"})
    if res.status != 0:
        raise NumericalBreakdown(f"highs failed: {res.message}")
    # linprog minimizes -c.x; its equality marginals are d(fun)/d(b), so the
    # max-form duals flip sign
    y = [-v for v in res.eqlin.marginals]
    return LpOutcome("optimal", value=-res.fun, x=list(res.x), y=y,
                     mode="double", stats={"method": "highs",
                                           "iterations": int(res.nit)})


# --- exact backend: dense two-phase simplex --------------------------------

def _build_tableau(prob):
    """Tableau rows 0..m-1 = constraints (rhs made nonnegative, artificial
    basis), row m = phase-1 cost row, row m+1 = phase-2 cost row.

    Columns: 0..n-1 structural, n..n+m-1 artificial, last = rhs. Cost rows
    store z_j - c_j for a maximization, so a negative entry means the column
    can still improve the objective.
    """
    m, n = prob.m, prob.n
    T = np.full((m + 2, n + m + 1), R0, dtype=object)
    for i, row in enumerate(prob.rows):
        b = prob.rhs[i]
        s = -1 if b < 0 else 1
        for j, v in row.items():
            T[i, j] = s * v
        T[i, n + i] = R1
        T[i, -1] = s * b
    # phase 1: maximize -sum(artificials); with the artificial basis,
    # z_j - c_j = -sum_i T[i, j] for structural j and -sum b for the rhs
    for j in range(n):
        acc = R0
        for i in range(m):
            if T[i, j]:
                acc += T[i, j]
        T[m, j] = -acc
    T[m, -1] = -sum(T[i, -1] for i in range(m))
    # phase 2 cost row: z_j - c_j = -c_j under the zero-cost artificial basis
    for j in range(n):
        if prob.c[j]:
            T[m + 1, j] = -prob.c[j]
    return T


def _bland_enter(T, cost_row, allowed):
    row = T[cost_row]
    for j in allowed:
        if row[j] < 0:
            return j
    return None


def _ratio_leave(T, m, pc, basis, blocked_rows):
    best = None
    for i in range(m):
        if i in blocked_rows:
            continue
        a = T[i, pc]
        if a > 0:
            ratio = T[i, -1] / a
            if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]):
                best = (ratio, i)
    return None if best is None else best[1]


def solve_exact(prob: LpProblem) -> LpOutcome:
    """Two-phase primal simplex with Bland's rule, exact arithmetic."""
    m, n = prob.m, prob.n
    if len(prob.rhs) != m:
        raise DimensionMismatch("rhs length")
    T = _build_tableau(prob)
    basis = [n + i for i in range(m)]
    pivots = 0

    def pivot(pr, pc):
        nonlocal pivots
        tableau_pivot(T, pr, pc)
        basis[pr] = pc
        pivots += 1

    # phase 1
    structural = range(n)
    while True:
        pc = _bland_enter(T, m, structural)
        if pc is None:
            break
        pr = _ratio_leave(T, m, pc, basis, ())
        if pr is None:
            # the phase-1 objective is bounded by 0, so this cannot happen
            raise NumericalBreakdown("phase-1 unbounded")
        pivot(pr, pc)
    if T[m, -1] < 0:
        # infeasible; phase-1 duals give a Farkas certificate
        f = []
        for i in range(m):
            yi = T[m, n + i] - 1  # z_j - c_j on artificial j has c_j = -1
            s = -1 if prob.rhs[i] < 0 else 1
            f.append(-yi * s)
        if not verify_farkas(prob, f):
            raise NumericalBreakdown("farkas certificate failed verification")
        return LpOutcome("infeasible", farkas=f, mode=prob.mode,
                         stats={"method": "exact-simplex", "pivots": pivots})

    # drive artificials out of the basis where possible; rows that cannot
    # pivot are redundant and stay inert (their structural entries are zero)
    blocked = set()
    for i in range(m):
        if basis[i] >= n:
            pc = next((j for j in range(n) if T[i, j]), None)
            if pc is None:
                blocked.add(i)
            else:
                pivot(i, pc)

    # phase 2
    while True:
        pc = _bland_enter(T, m + 1, structural)
        if pc is None:
            break
        pr = _ratio_leave(T, m, pc, basis, blocked)
        if pr is None:
            return LpOutcome("unbounded", mode=prob.mode,
                             stats={"method": "exact-simplex",
                                    "pivots": pivots})
        pivot(pr, pc)

    zero = R0 if prob.mode == "rational" else 0.0
    x = [zero] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    y = []
    for i in range(m):
        s = -1 if prob.rhs[i] < 0 else 1
        y.append(T[m + 1, n + i] * s)  # artificial cost is 0 in phase 2
    value = prob.value_of(x)
    if prob.mode == "rational":
        if not verify_primal(prob, x) or not verify_dual(prob, y):
            raise NumericalBreakdown("optimal certificate failed verification")
        ydotb = sum(yi * bi for yi, bi in zip(y, prob.rhs))
        if ydotb != value:
            raise NumericalBreakdown("strong duality gap in exact solve")
    return LpOutcome("optimal", value=value, x=x, y=y, mode=prob.mode,
                     stats={"method": "exact-simplex", "pivots": pivots})


# --- exact sparse Gauss-Jordan (used by the crossover) ----------------------

def _gauss_jordan(rows, width, stages=None):
    """Eliminates a list of sparse {col: val} rows in place.

    Columns >= width are an augmentation and never pivoted. `stages`
    optionally partitions the pivotable columns into priority groups: every
    possible pivot from an earlier group is taken before a later group is
    touched (the crossover needs the float support pivoted first so that
    completion columns come out basic at zero). Returns the (row, col) pivot
    pairs. Pivot choice prefers short rows and unit-magnitude entries to
    limit coefficient growth and fill-in.
    """
    if stages is None:
        stages = [set(range(width))]
    pivots = []
    remaining = set(range(len(rows)))
    pivoted_cols = set()
    for stage in stages:
        while True:
            best = None
            for i in remaining:
                cands = [j for j in rows[i]
                         if j in stage and j not in pivoted_cols]
                if not cands:
                    continue
                nnz = len(rows[i])
                unit = any(abs(rows[i][j]) == 1 for j in cands)
                key = (nnz, not unit, i)
                if best is None or key < best[0]:
                    best = (key, i, cands)
            if best is None:
                break
            _, pr, cands = best
            unit_cands = [j for j in cands if abs(rows[pr][j]) == 1]
            pc = min(unit_cands) if unit_cands else min(cands)
            piv = rows[pr][pc]
            if piv != 1:
                sparse_scale(rows[pr], 1 / piv)
            for i in range(len(rows)):
                if i == pr:
                    continue
                f = rows[i].get(pc)
                if f is not None:
                    sparse_axpy(rows[i], rows[pr], f)
            pivots.append((pr, pc))
            remaining.discard(pr)
            pivoted_cols.add(pc)
    return pivots


def _candidate_basis(prob, res_x, res_y):
    """Columns likely to form an optimal basis: the float support, then
    columns whose float reduced cost vanishes (degenerate completions)."""
    cols = prob.columns()
    support = sorted(
        (j for j in range(prob.n) if res_x[j] > CROSSOVER_TOL),
        key=lambda j: -res_x[j])
    chosen = set(support)
    near = []
    for j in range(prob.n):
        if j in chosen:
            continue
        rc = float(prob.c[j]) - sparse_dot(
            {i: float(v) for i, v in cols[j].items()}, res_y)
        if abs(rc) <= CROSSOVER_TOL:
            near.append((abs(rc), j))
    near.sort()
    return support, [j for _, j in near]


def solve_certified(prob: LpProblem) -> LpOutcome:
    """Exact outcome via a float solve plus exact verification; falls back
    to the pure exact simplex when the shortcut cannot be certified."""
    if prob.mode == "double":
        return solve_double(prob)
    try:
        fl = solve_double(_as_double(prob))
    except NumericalBreakdown:
        return solve_exact(prob)
    if fl.status != "optimal":
        # exact run settles status and, if infeasible, produces the Farkas
        # certificate that the float path cannot provide
        return solve_exact(prob)
    out = _crossover(prob, fl)
    if out is not None:
        return out
    return solve_exact(prob)


def _as_double(prob):
    d = LpProblem(prob.n, "double")
    d.c = [float(v) for v in prob.c]
    d.rows = [{j: float(v) for j, v in row.items()} for row in prob.rows]
    d.rhs = [float(v) for v in prob.rhs]
    return d


def _crossover(prob, fl):
    m, n = prob.m, prob.n
    support, near = _candidate_basis(prob, fl.x, fl.y)
    order = support + near
    if not order:
        return None
    colset = prob.columns()
    col_index = {j: k for k, j in enumerate(order)}
    # rows of [B | b] restricted to candidate columns, b at column `len(order)`
    width = len(order)
    rows = []
    for i in range(m):
        rows.append({})
    for j in order:
        k = col_index[j]
        for i, v in colset[j].items():
            rows[i][k] = v
    for i in range(m):
        if prob.rhs[i]:
            rows[i][width] = prob.rhs[i]
    stages = [set(range(len(support))),
              set(range(len(support), width))]
    pivots = _gauss_jordan(rows, width, stages)
    pivoted_rows = {pr for pr, _ in pivots}
    # unpivoted rows must be consistent (their candidate part is zero)
    for i in range(m):
        if i not in pivoted_rows and rows[i].get(width):
            return None
    zero = R0
    x = [zero] * n
    basis = []
    for pr, pc in pivots:
        j = order[pc]
        xj = rows[pr].get(width, zero)
        if xj < 0:
            return None
        x[j] = xj
        basis.append(j)
    if not verify_primal(prob, x):
        return None
    # dual: solve y.B = c_B via Gauss-Jordan on [B^T | c_B]
    trows = []
    for j in basis:
        tr = dict(colset[j])
        cj = prob.c[j]
        if cj:
            tr[m] = cj
        trows.append(tr)
    tpivots = _gauss_jordan(trows, m)
    if len(tpivots) != len(basis):
        return None
    y = [zero] * m
    for pr, pc in tpivots:
        y[pc] = trows[pr].get(m, zero)
    if not verify_dual(prob, y):
        return None
    value = prob.value_of(x)
    ydotb = sum(yi * bi for yi, bi in zip(y, prob.rhs) if yi)
    if ydotb != value:
        return None
    return LpOutcome("optimal", value=value, x=x, y=y, mode=prob.mode,
                     stats={"method": "certified-crossover",
                            "float_iterations": fl.stats.get("iterations")})
