"""Rank and nullspace over the exact and float backends.

Exact matrices are reduced by Gauss-Jordan elimination over :class:`QQi`.
Float matrices use an mpmath SVD with a relative gap of ``10**(-digits/2)``.
"""
from __future__ import annotations

import mpmath

from .scalar import Backend, QQi, half_tol, to_mpc


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _singular_values(rows: list[list]) -> list:
    a = mpmath.matrix([[to_mpc(x) for x in r] for r in rows])
    return [abs(s) for s in mpmath.svd_c(a, compute_uv=False)]


def rank(rows: list[list], ncols: int, backend: Backend, scale=None) -> int:
    if not rows or ncols == 0:
        return 0
    if backend == Backend.EXACT:
        return len(rref(rows)[1])
    sv = _singular_values(rows)
    ref = scale if scale is not None else max(sv)
    if ref == 0:
        return 0
    return sum(1 for s in sv if s > half_tol() * ref)


def _float_null_vector(rows: list[list], ncols: int) -> list:
    a = mpmath.matrix([[to_mpc(x) for x in r] for r in rows])
    if a.rows < ncols:
        pad = mpmath.zeros(ncols - a.rows, ncols)
        a = mpmath.matrix(a.tolist() + pad.tolist())
    _, s, v = mpmath.svd_c(a)
    k = min(range(len(s)), key=lambda i: abs(s[i]))
    return [mpmath.conj(v[k, j]) for j in range(ncols)]


def _exact_null_vector(rows: list[list], ncols: int) -> list:
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    f = free[0]
    vec = [QQi(0)] * ncols
    vec[f] = QQi(1)
    for i, pc in enumerate(pivots):
        vec[pc] = -red[i][f]
    return vec


def min_degree_null_vector(rows: list[list], ncols: int, backend: Backend) -> tuple[list, int]:
    """Nonzero kernel vector with the smallest last nonzero index, and the nullity.

    For a fixed smallest last index the kernel vector is unique up to scaling,
    so the result is deterministic after dividing by its last entry.
    """
    if backend == Backend.EXACT:
        nullity = ncols - rank(rows, ncols, backend)
    else:
        sv = _singular_values(rows) if rows else []
        scale = max(sv) if sv else mpmath.mpf(1)
        nullity = ncols - (sum(1 for s in sv if s > half_tol() * scale) if scale else 0)
    for d in range(ncols):
        sub = [r[: d + 1] for r in rows]
        if backend == Backend.EXACT:
            r = rank(sub, d + 1, backend)
        else:
            r = rank(sub, d + 1, backend, scale=scale) if rows else 0
        if r < d + 1:
            if not rows:
                vec = [0] * d + [1]
            elif backend == Backend.EXACT:
                vec = _exact_null_vector(sub, d + 1)
            else:
                vec = _float_null_vector(sub, d + 1)
            last = vec[d]
            vec = [x / last for x in vec] + [0] * (ncols - d - 1)
            if backend == Backend.EXACT:
                vec = [QQi.coerce(x) for x in vec]
            else:
                vec = [to_mpc(x) for x in vec]
            return vec, nullity
    raise ArithmeticError("matrix has a trivial kernel")


def kernel_basis(rows: list[list], ncols: int, backend: Backend) -> list[list]:
    """Kernel basis (exact: reduced echelon; float: small right singular vectors)."""
    if backend == Backend.EXACT:
        red, pivots = rref(rows) if rows else ([], [])
        out = []
        for f in (c for c in range(ncols) if c not in pivots):
            vec = [QQi(0)] * ncols
            vec[f] = QQi(1)
            for i, pc in enumerate(pivots):
                vec[pc] = -red[i][f]
            out.append(vec)
        return out
    if not rows:
        return [[mpmath.mpc(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    a = mpmath.matrix([[to_mpc(x) for x in r] for r in rows])
    if a.rows < ncols:
        a = mpmath.matrix(a.tolist() + mpmath.zeros(ncols - a.rows, ncols).tolist())
    _, s, v = mpmath.svd_c(a)
    smax = max(abs(x) for x in s)
    return [[mpmath.conj(v[k, j]) for j in range(ncols)]
            for k in range(len(s)) if smax == 0 or abs(s[k]) <= half_tol() * smax]
