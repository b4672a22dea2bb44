# cython: language_level=3
"""Compiled kernels for the exact LP machinery.

Mirrors _core_py exactly; operates on Python objects (exact rationals), so
the speedup comes from compiled loop control and dict/array access, not from
machine arithmetic.
"""

import cython

BACKEND = "cython"


def tableau_pivot(object[:, :] T, Py_ssize_t pr, Py_ssize_t pc):
    """In-place pivot of a dense object-dtype tableau on (pr, pc)."""
    cdef Py_ssize_t m = T.shape[0]
    cdef Py_ssize_t n = T.shape[1]
    cdef Py_ssize_t i, j, k, nnz
    cdef object piv, inv, f, v
    cdef list nz_idx, nz_val

    piv = T[pr, pc]
    if not piv:
        raise ZeroDivisionError("pivot on a zero entry")
    if piv != 1:
        inv = 1 / piv
        for j in range(n):
            v = T[pr, j]
            if v:
                T[pr, j] = v * inv
    nz_idx = []
    nz_val = []
    for j in range(n):
        v = T[pr, j]
        if v:
            nz_idx.append(j)
            nz_val.append(v)
    nnz = len(nz_idx)
    for i in range(m):
        if i == pr:
            continue
        f = T[i, pc]
        if not f:
            continue
        for k in range(nnz):
            j = <Py_ssize_t> nz_idx[k]
            T[i, j] = T[i, j] - f * <object> nz_val[k]
    return None


def sparse_axpy(dict dst, dict src, object factor):
    """dst -= factor * src for {col: value} rows, dropping exact zeros."""
    cdef object k, v, cur, t, w
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


def sparse_scale(dict row, object factor):
    """row *= factor in place (factor must be nonzero)."""
    cdef object k
    for k in row:
        row[k] = row[k] * factor


def sparse_dot(dict col, list y):
    """Sum of col[i] * y[i] over the sparse column's entries."""
    cdef object acc = 0
    cdef object i, v, yi
    for i, v in col.items():
        yi = y[<Py_ssize_t> i]
        if yi:
            acc = acc + v * yi
    return acc
