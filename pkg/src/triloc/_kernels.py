"""Kernel selection: compiled extension if available, else pure Python."""

try:
    from ._core import (BACKEND, sparse_axpy, sparse_dot, sparse_scale,
                        tableau_pivot)
except ImportError:
    from ._core_py import (BACKEND, sparse_axpy, sparse_dot, sparse_scale,
                           tableau_pivot)

KERNEL_BACKEND = BACKEND

__all__ = ["KERNEL_BACKEND", "sparse_axpy", "sparse_dot", "sparse_scale",
           "tableau_pivot"]
