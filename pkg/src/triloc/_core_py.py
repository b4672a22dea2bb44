"""Pure-Python kernels for the exact LP machinery.

Same contracts as the compiled versions in _core.pyx; _kernels picks one
implementation at import time. All routines work on exact scalar types
(gmpy2.mpq or fractions.Fraction) and exploit sparsity by skipping zeros.
"""

BACKEND = "python"


def tableau_pivot(T, pr, pc):
    """In-place pivot of a dense object-dtype tableau on (pr, pc).

    Normalizes the pivot row, then cancels column pc from every other row,
    skipping rows already zero there and zero entries of the pivot row.
    """
    m, n = T.shape
    piv = T[pr, pc]
    if not piv:
        raise ZeroDivisionError("pivot on a zero entry")
    if piv != 1:
        inv = 1 / piv
        row = T[pr]
        for j in range(n):
            if row[j]:
                row[j] = row[j] * inv
    prow = T[pr]
    nz = [j for j in range(n) if prow[j]]
    for i in range(m):
        if i == pr:
            continue
        f = T[i, pc]
        if not f:
            continue
        row = T[i]
        for j in nz:
            row[j] = row[j] - f * prow[j]
    return None


def sparse_axpy(dst, src, factor):
    """dst -= factor * src for rows stored as {col: value} dicts; entries
    that cancel exactly are removed."""
    if not factor:
        return
    for k, v in src.items():
        w = factor * v
        cur = dst.get(k)
        if cur is None:
            dst[k] = -w
        else:
            t = cur - w
            if t:
                dst[k] = t
            else:
                del dst[k]


def sparse_scale(row, factor):
    """row *= factor in place (factor must be nonzero)."""
    for k in row:
        row[k] = row[k] * factor


def sparse_dot(col, y):
    """Sum of col[i] * y[i] over the sparse column's entries."""
    acc = 0
    for i, v in col.items():
        yi = y[i]
        if yi:
            acc = acc + v * yi
    return acc
