"""Rank-revealing linear algebra on both backends.

Float lane: SVD / Hermitian eigendecompositions from numpy (LAPACK), with
relative thresholds from :class:`ToleranceProfile`.  Exact lane: the
fraction-free echelon kernel plus exact back-substitution; positivity is
decided by a pivoted LDL* sweep, so no scalar square root is ever taken.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from shortedop._kernels import QQi, ff_echelon
from shortedop.errors import DimensionError, NotPSDError
from shortedop.matrix import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    HermitianMatrix,
    Matrix,
    hermitian,
    hstack,
)

_QQI_ZERO = QQi(0)
_QQI_ONE = QQi(1)


# ---------------------------------------------------------------------------
# exact echelon machinery


def _int_rows(m):
    """Clear denominators row-wise, yielding interleaved-int rows."""
    out = []
    for row in m.tolist():
        lcm = 1
        for x in row:
            lcm = lcm * x.d // gcd(lcm, x.d)
        flat = []
        for x in row:
            f = lcm // x.d
            flat.append(x.an * f)
            flat.append(x.bn * f)
        out.append(flat)
    return out


def _echelon(m):
    """Run the fraction-free echelon pass; returns (rank, pivots, int rows)."""
    rows = _int_rows(m)
    rank, piv = ff_echelon(rows, m.cols)
    return rank, piv, rows


def rref_exact(m):
    """Reduced row echelon form of a rational matrix.

    Returns ``(rank, pivot_columns, R)`` with the pivots normalized to one
    and eliminated upwards, all exactly.
    """
    if m.backend != RATIONAL:
        raise DimensionError("rref_exact needs the rational backend")
    rank, piv, rows = _echelon(m)
    n = m.cols
    red = [[QQi(Fraction(rows[i][2 * j]), Fraction(rows[i][2 * j + 1]))
            for j in range(n)] for i in range(rank)]
    for k in reversed(range(rank)):
        pc = piv[k]
        p = red[k][pc]
        red[k] = [x / p for x in red[k]]
        for i in range(k):
            f = red[i][pc]
            if f:
                rk = red[k]
                red[i] = [a - f * b for a, b in zip(red[i], rk)]
    if rank == 0:
        return 0, [], Matrix.zeros(0, n, RATIONAL)
    return rank, piv, Matrix.from_rows(red, RATIONAL)


def _svd(m):
    return np.linalg.svd(m.data, full_matrices=False)


def rank(m, tol=DEFAULT_TOL):
    """Numerical (float) or exact (rational) rank."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.backend == RATIONAL:
        r, _, _ = _echelon(m)
        return r
    s = np.linalg.svd(m.data, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int((s > tol.rank_rel_threshold * s[0]).sum())


def rank_factorization(m, tol=DEFAULT_TOL):
    """Factor M = F G with F of full column rank spanning ran M.

    The zero matrix yields empty factors of width zero.
    """
    if m.backend == RATIONAL:
        r, piv, red = rref_exact(m)
        if r == 0:
            return Matrix.zeros(m.rows, 0, RATIONAL), Matrix.zeros(0, m.cols, RATIONAL)
        f = Matrix(m.data[:, piv])
        return f, red
    u, s, vh = _svd(m)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int((s > tol.rank_rel_threshold * s[0]).sum())
    f = Matrix(u[:, :r] * s[:r])
    g = Matrix(vh[:r])
    return f, g


def column_space_basis(m, tol=DEFAULT_TOL):
    """Full-column-rank matrix whose columns span ran M.

    Float basis is orthonormal (left singular vectors); rational basis is
    the pivot columns of M.
    """
    if m.backend == RATIONAL:
        r, piv, _ = rref_exact(m)
        return Matrix(m.data[:, piv]) if r else Matrix.zeros(m.rows, 0, RATIONAL)
    u, s, _ = _svd(m)
    if s.size == 0 or s[0] == 0.0:
        return Matrix.zeros(m.rows, 0, FLOAT)
    r = int((s > tol.rank_rel_threshold * s[0]).sum())
    return Matrix(u[:, :r])


def kernel_basis(m, tol=DEFAULT_TOL):
    """Full-column-rank basis of ker M (an n x k matrix, k = n - rank)."""
    n = m.cols
    if n == 0:
        return Matrix.zeros(0, 0, m.backend)
    if m.rows == 0:
        return Matrix.identity(n, m.backend)
    if m.backend == RATIONAL:
        r, piv, red = rref_exact(m)
        free = [j for j in range(n) if j not in set(piv)]
        cols = []
        for fcol in free:
            v = [_QQI_ZERO] * n
            v[fcol] = _QQI_ONE
            for i, pc in enumerate(piv):
                v[pc] = -red.entry(i, fcol)
            cols.append(v)
        if not cols:
            return Matrix.zeros(n, 0, RATIONAL)
        return Matrix.from_rows(list(map(list, zip(*cols))), RATIONAL)
    u, s, vh = np.linalg.svd(m.data)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int((s > tol.rank_rel_threshold * s[0]).sum())
    return Matrix(vh[r:].conj().T)


def inverse_exact(m):
    """Exact inverse of a nonsingular rational square matrix."""
    if m.backend != RATIONAL or m.rows != m.cols:
        raise DimensionError("inverse_exact needs a square rational matrix")
    n = m.rows
    if n == 0:
        return m
    aug = hstack([m, Matrix.identity(n, RATIONAL)])
    r, piv, red = rref_exact(aug)
    if r < n or piv[:n] != list(range(n)):
        raise DimensionError("matrix is singular")
    return red.submatrix(0, n, n, 2 * n)


def pseudo_inverse(m, tol=DEFAULT_TOL):
    """Moore-Penrose pseudo-inverse (exact on the rational backend)."""
    if m.backend == FLOAT:
        if m.rows == 0 or m.cols == 0:
            return Matrix.zeros(m.cols, m.rows, FLOAT)
        return Matrix(np.linalg.pinv(m.data, rcond=tol.rank_rel_threshold))
    f, g = rank_factorization(m, tol)
    if f.cols == 0:
        return Matrix.zeros(m.cols, m.rows, RATIONAL)
    # M+ = G* (G G*)^-1 (F* F)^-1 F*  for any rank factorization M = F G
    return (g.adjoint() @ inverse_exact(g @ g.adjoint())
            @ inverse_exact(f.adjoint() @ f) @ f.adjoint())


# ---------------------------------------------------------------------------
# positivity


def _psd_exact(h):
    """Pivoted LDL* positivity sweep; exact verdict for Hermitian input.

    A non-negative matrix admits only non-negative pivots, and a vanishing
    diagonal block forces the whole remaining block to vanish; either
    failure certifies indefiniteness.
    """
    n = h.rows
    rows = h.tolist()
    for k in range(n):
        best, best_val = k, rows[k][k].re
        for i in range(k + 1, n):
            dv = rows[i][i].re
            if dv > best_val:
                best, best_val = i, dv
        if best_val < 0:
            return False
        if best_val == 0:
            for i in range(k, n):
                ri = rows[i]
                for j in range(k, n):
                    if ri[j]:
                        return False
            return True
        if best != k:
            rows[k], rows[best] = rows[best], rows[k]
            for r in rows:
                r[k], r[best] = r[best], r[k]
        piv = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            f = rows[i][k] / piv
            if f:
                ri = rows[i]
                for j in range(k + 1, n):
                    ri[j] = ri[j] - f * rk[j]
    return True


def is_psd(h, tol=DEFAULT_TOL):
    """Whether a Hermitian matrix is non-negative.

    Float: smallest eigenvalue down to ``-psd_rel_slack`` relative to the
    largest absolute eigenvalue (or 1 for the zero matrix).  Rational:
    exact pivoted LDL* sweep.  Non-Hermitian input raises.
    """
    h = hermitian(h)
    if h.rows == 0:
        return True
    if h.backend == RATIONAL:
        return _psd_exact(h)
    w = np.linalg.eigvalsh(h.data)
    scale = float(np.abs(w).max())
    if scale == 0.0:
        scale = 1.0
    return bool(w.min() >= -tol.psd_rel_slack * scale)


def loewner_leq(h1, h2, tol=DEFAULT_TOL):
    """Loewner order: H1 <= H2 iff H2 - H1 is non-negative."""
    h1, h2 = hermitian(h1), hermitian(h2)
    if h1.shape != h2.shape:
        raise DimensionError(f"shape mismatch: {h1.shape} vs {h2.shape}")
    return is_psd(hermitian(h2 - h1), tol)


# ---------------------------------------------------------------------------
# float-only decompositions


def eigh(h):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian float matrix."""
    return np.linalg.eigh(hermitian(h).data)


def pivoted_cholesky(h, tol=DEFAULT_TOL):
    """Diagonally pivoted Cholesky factor of a PSD float matrix.

    Returns R of shape (r, n) with A = R*R and r the detected rank; stops
    once the largest remaining diagonal entry falls below the rank
    threshold relative to the initial diagonal maximum.
    """
    if h.backend != FLOAT:
        raise DimensionError("pivoted_cholesky needs the float backend")
    a = np.array(hermitian(h).data, dtype=np.complex128)
    n = a.shape[0]
    perm = np.arange(n)
    d0 = float(a.diagonal().real.max()) if n else 0.0
    thr = tol.rank_rel_threshold * max(d0, 0.0)
    r = 0
    for i in range(n):
        d = a.diagonal().real.copy()
        j = i + int(np.argmax(d[i:]))
        if d[j] <= thr:
            break
        if j != i:
            a[[i, j], :] = a[[j, i], :]
            a[:, [i, j]] = a[:, [j, i]]
            perm[[i, j]] = perm[[j, i]]
        piv = np.sqrt(d[j])
        a[i, i] = piv
        a[i + 1 :, i] /= piv
        a[i + 1 :, i + 1 :] -= np.outer(a[i + 1 :, i], a[i + 1 :, i].conj())
        a[i, i + 1 :] = 0.0
        r += 1
    ltilde = np.tril(a)[:, :r]
    lfull = np.empty((n, r), dtype=np.complex128)
    lfull[perm, :] = ltilde
    return Matrix(lfull.conj().T)


def require_psd(h, tol=DEFAULT_TOL, name="matrix"):
    h = hermitian(h, name)
    if not is_psd(h, tol):
        raise NotPSDError(f"{name} not non-negative")
    return h
