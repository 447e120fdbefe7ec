"""Dense linear algebra over F_p.

Matrices are numpy integer arrays with entries in ``[0, p)``.  Elimination
is a blocked Gauss-Jordan: pivots are found panel by panel with a small
unblocked pass, and the rest of the matrix is updated with one float64
matrix product per panel.  Every such product sums at most ``PANEL`` terms
below ``p**2``, which stays exact in double precision for ``p < 2**20``.
Pivot choice is "first nonzero entry", so the output is deterministic.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .fieldpoly import scalar_inverse

PANEL = 48
_MAX_P = 1 << 20


class RowReduction(NamedTuple):
    rank: int
    reduced: np.ndarray  # reduced row-echelon form, rank rows on top
    pivot_cols: tuple


def _mod(x: np.ndarray, p: int) -> np.ndarray:
    """In-place reduction of an integral float64 array into ``[0, p)``.

    ``np.remainder`` on floats is very slow; floor-division by multiplying
    with 1/p is exact up to an off-by-one that the two masks repair.
    """
    q = x * (1.0 / p)
    np.floor(q, out=q)
    q *= p
    x -= q
    x[x >= p] -= p
    x[x < 0] += p
    return x


def _as_float(M, p):
    A = np.asarray(M)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if p >= _MAX_P:
        raise ValueError(f"modulus {p} too large for float64 elimination")
    return _mod(A.astype(np.float64), p)


def _inv_small(T: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a small invertible matrix mod p (plain Gauss-Jordan)."""
    k = T.shape[0]
    A = np.concatenate([T.astype(np.int64) % p, np.eye(k, dtype=np.int64)], axis=1)
    for c in range(k):
        r = c + int(np.nonzero(A[c:, c])[0][0])
        if r != c:
            A[[c, r]] = A[[r, c]]
        A[c] = A[c] * scalar_inverse(int(A[c, c]), p) % p
        col = A[:, c].copy()
        col[c] = 0
        nz = np.nonzero(col)[0]
        if len(nz):
            A[nz] = (A[nz] - col[nz, None] * A[c]) % p
    return A[:, k:]


def _panel_pivots(P: np.ndarray, p: int):
    """Unblocked elimination on a tall panel.

    Returns (rows, cols): indices into P of the pivot rows and the pivot
    columns, in order.  P is consumed.
    """
    P = P.astype(np.int64)
    rows, cols = [], []
    active = np.ones(P.shape[0], dtype=bool)
    for c in range(P.shape[1]):
        cand = np.nonzero(active & (P[:, c] != 0))[0]
        if len(cand) == 0:
            continue
        r = int(cand[0])
        rows.append(r)
        cols.append(c)
        active[r] = False
        inv = scalar_inverse(int(P[r, c]), p)
        prow = P[r] * inv % p
        others = cand[1:]
        if len(others):
            P[others] = (P[others] - P[others, c][:, None] * prow) % p
    return rows, cols


def _small_rref(P: np.ndarray, p: int):
    """RREF of a matrix with few rows; returns (rows, pivot_cols)."""
    P = P.astype(np.int64) % p
    r = 0
    cols = []
    for c in range(P.shape[1]):
        if r == P.shape[0]:
            break
        nz = np.nonzero(P[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            P[[r, i]] = P[[i, r]]
        P[r] = P[r] * scalar_inverse(int(P[r, c]), p) % p
        col = P[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            P[nzr] = (P[nzr] - col[nzr, None] * P[r]) % p
        cols.append(c)
        r += 1
    return P[:r], cols


def _find_panel_pivots(panel: np.ndarray, p: int, chunk: int):
    """Pick rows spanning the row space of ``panel`` plus its pivot profile.

    Rows are consumed in chunks so that a full-rank panel usually only
    touches its first few rows.  The returned profile is that of the row
    space, so the final echelon form is canonical.
    """
    n = panel.shape[1]
    target = int(panel.any(axis=0).sum())
    basis = np.zeros((0, n), dtype=np.int64)
    bcols: list = []
    chosen: list = []
    for s in range(0, panel.shape[0], chunk):
        C = panel[s : s + chunk].astype(np.int64)
        if bcols:
            C = (C - (C[:, bcols] @ basis) % p) % p
        nzr = np.nonzero(C.any(axis=1))[0]
        if len(nzr) == 0:
            continue
        loc_rows, _ = _panel_pivots(C[nzr], p)
        new = nzr[loc_rows]
        chosen.extend(int(s + i) for i in new)
        basis, bcols = _small_rref(np.concatenate([basis, C[new]]), p)
        if len(bcols) == target:
            break
    return chosen, bcols


def row_reduce(M, p: int, full: bool = True) -> RowReduction:
    """Reduced row-echelon form of ``M`` over F_p.

    With ``full=False`` only forward elimination is done: the rank and the
    pivot columns are right but the returned matrix is not reduced above
    the pivots.
    """
    A = _as_float(M, p)
    m, n = A.shape
    pivot_rows = []  # rows of A already holding a normalised pivot, in order
    pivot_cols = []
    free = np.ones(m, dtype=bool)
    c0 = 0
    while c0 < n and free.any():
        c1 = min(n, c0 + PANEL)
        cand = np.nonzero(free)[0]
        panel = A[cand, c0:c1]
        prow_local, pcols_local = _find_panel_pivots(panel, p, 2 * PANEL)
        if not prow_local:
            c0 = c1
            continue
        prows = cand[prow_local]
        pcols = [c0 + c for c in pcols_local]
        T = A[np.ix_(prows, pcols)]
        Tinv = _inv_small(T, p).astype(np.float64)
        lo = 0 if full else c0
        B = _mod(Tinv @ A[prows, lo:], p)
        A[prows, lo:] = B
        free[prows] = False
        if full:
            others = np.ones(m, dtype=bool)
            others[prows] = False
        else:
            others = free
        others = np.nonzero(others)[0]
        if len(others):
            coef = A[np.ix_(others, pcols)]
            touched = np.nonzero(coef.any(axis=1))[0]
            if len(touched):
                keep = others[touched]
                sub = A[keep, lo:]
                sub -= coef[touched] @ B
                A[keep, lo:] = _mod(sub, p)
        pivot_rows.extend(int(r) for r in prows)
        pivot_cols.extend(pcols)
        c0 = c1
    order = np.argsort(pivot_cols, kind="stable")
    pivot_rows = [pivot_rows[i] for i in order]
    pivot_cols = tuple(pivot_cols[i] for i in order)
    rank = len(pivot_cols)
    reduced = np.zeros((m, n), dtype=np.int64)
    if rank:
        reduced[:rank] = A[pivot_rows].astype(np.int64)
    return RowReduction(rank, reduced, pivot_cols)


def rank(M, p: int) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    # fewer columns means fewer panels
    if A.shape[1] > A.shape[0]:
        A = A.T
    return row_reduce(A, p, full=False).rank


def kernel_basis(M, p: int, return_free: bool = False):
    """Basis of ``{v : M v = 0}`` as the rows of the returned array.

    Row k is 1 at the k-th non-pivot column and 0 at the other non-pivot
    columns; ``return_free=True`` also returns those columns, which give
    coordinates of any kernel vector in this basis.
    """
    A = np.asarray(M)
    n = A.shape[1]
    if A.shape[0] == 0:
        K = np.eye(n, dtype=np.int64)
        return (K, list(range(n))) if return_free else K
    r, R, piv = row_reduce(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    if free:
        piv = list(piv)
        for k, c in enumerate(free):
            K[k, c] = 1
        if r:
            # x_piv = -R[:r, free] x_free
            K[:, piv] = (-R[:r][:, free].T) % p
    return (K, free) if return_free else K


def solve(M, b, p: int):
    """A solution ``x`` of ``M x = b``, or None when b is outside the column span."""
    A = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.shape[0] != len(b):
        raise ValueError("dimension mismatch")
    n = A.shape[1]
    if not b.any():
        return np.zeros(n, dtype=np.int64)
    aug = np.concatenate([A % p, (b % p)[:, None]], axis=1)
    r, R, piv = row_reduce(aug, p)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def matmul(A, B, p: int) -> np.ndarray:
    """Exact product mod p (chunked so float64 partial sums stay exact)."""
    A = np.asarray(A)
    B = np.asarray(B)
    k = A.shape[1]
    chunk = max(1, int((2**52) // (p * p)))
    Af = _mod(A.astype(np.float64), p)
    Bf = _mod(B.astype(np.float64), p)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.float64)
    for s in range(0, k, chunk):
        out = _mod(out + Af[:, s : s + chunk] @ Bf[s : s + chunk], p)
    return out.astype(np.int64)


def span_complement(S, V, p: int):
    """Rows of ``V`` reduced modulo the row space of ``S``, then echelonised.

    Returns a basis (rows) of ``(span S + span V) / span S`` lifted to
    vectors of span V + span S.
    """
    S = np.asarray(S, dtype=np.int64).reshape(-1, np.asarray(V).shape[1])
    V = np.asarray(V, dtype=np.int64)
    if V.shape[0] == 0:
        return V
    if S.shape[0] == 0:
        r, R, _ = row_reduce(V, p)
        return R[:r]
    rs, RS, piv = row_reduce(S, p)
    Vr = reduce_rows(V, RS[:rs], piv, p)
    r, R, _ = row_reduce(Vr, p)
    return R[:r]


def reduce_rows(V, R, pivot_cols, p: int) -> np.ndarray:
    """Subtract from rows of ``V`` the multiples of RREF rows ``R`` clearing its pivots."""
    V = np.asarray(V, dtype=np.int64)
    if len(pivot_cols) == 0 or V.shape[0] == 0:
        return V % p
    coef = V[:, list(pivot_cols)]
    return (V - matmul(coef, R, p)) % p


def debug_grid(M) -> str:
    """Plain-text dump of a small matrix."""
    A = np.asarray(M)
    return "\n".join(" ".join(f"{int(x):>6}" for x in row) for row in A)
