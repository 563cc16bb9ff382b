"""Square-root factors of PSD matrices and the machinery built on them.

A factor of a non-negative A is a pair (R, H) with A = R*R, realized here
as an h x n matrix R (H = C^h).  Minimal factors have full row rank, which
is the finite-dimensional version of ran R being dense in H.  The
generalized inverse of R* acts on ran R* and is computed through the
pseudo-inverse, whose minimal-norm solution lands in ran R as required.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shortedop.errors import (
    BackendUnsupportedError,
    DimensionError,
    InternalCheckError,
    OrderViolationError,
    RangeMembershipError,
)
from shortedop.linalg import (
    eigh,
    is_psd,
    kernel_basis,
    loewner_leq,
    pivoted_cholesky,
    pseudo_inverse,
    rank,
    require_psd,
)
from shortedop.matrix import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    Matrix,
    as_vector,
    hermitian,
    hstack,
    pairing,
    vstack,
)
from shortedop.rng import Stream
from shortedop.subspace import Subspace, range_inclusion

_MIX_SEED = 0x5EED0F0D


def _require_float(m, what):
    if m.backend == RATIONAL:
        raise BackendUnsupportedError(
            f"square roots unsupported on exact backend ({what})"
        )


@dataclass(frozen=True)
class SquareRootFactor:
    """Matrix factor R (h x n) of a PSD matrix, with A = R*R."""

    r: Matrix
    hilbert_dim: int
    minimal: bool

    def gram(self):
        """Reassemble R*R."""
        return hermitian(self.r.adjoint() @ self.r)


@dataclass(frozen=True)
class DouglasFactorization:
    """W with R_A* = R_D* W, ran W inside ran R_D, ker W = ker R_A*."""

    w: Matrix
    alpha: float
    op_norm_w: float
    root_a: SquareRootFactor
    root_d: SquareRootFactor


@dataclass(frozen=True)
class MembershipCertificate:
    """Two-condition test for membership of a functional in ran R*."""

    in_range: bool
    annihilates_kernel: bool
    sup_finite: bool
    sup_value: float | None


def minimal_square_root(a, tol=DEFAULT_TOL):
    """Minimal factor via the Hermitian eigendecomposition.

    Keeps eigenpairs above the relative rank threshold, so h = rank(A) and
    the factor has full row rank.
    """
    a = require_psd(a, tol)
    _require_float(a, "minimal_square_root")
    if a.rows == 0:
        return SquareRootFactor(Matrix.zeros(0, 0, FLOAT), 0, True)
    w, v = eigh(a)
    scale = float(np.abs(w).max()) if w.size else 0.0
    keep = w > tol.rank_rel_threshold * scale
    h = int(keep.sum())
    r = np.sqrt(w[keep])[:, None] * v[:, keep].conj().T
    return SquareRootFactor(Matrix(r.reshape(h, a.cols)), h, True)


def cholesky_square_root(a, tol=DEFAULT_TOL):
    """Minimal factor via diagonally pivoted Cholesky (same contract)."""
    a = require_psd(a, tol)
    _require_float(a, "cholesky_square_root")
    r = pivoted_cholesky(a, tol)
    return SquareRootFactor(r, r.rows, True)


def nonminimal_square_root(a, pad, tol=DEFAULT_TOL, mix_seed=_MIX_SEED):
    """Factor on a space ``pad`` dimensions larger than necessary.

    Zero rows are appended to the minimal factor and a deterministic
    unitary mixes them in; pad = 0 reduces to the minimal contract.
    Exists so square-root independence can be exercised.
    """
    base = minimal_square_root(a, tol)
    if pad == 0:
        return base
    if pad < 0:
        raise DimensionError("pad must be non-negative")
    h = base.hilbert_dim + pad
    stacked = vstack([base.r, Matrix.zeros(pad, a.cols, FLOAT)])
    stream = Stream(mix_seed)
    raw = np.array([[stream.cnum() for _ in range(h)] for _ in range(h)])
    q, _ = np.linalg.qr(raw)
    mixed = Matrix(q) @ stacked
    return SquareRootFactor(mixed, h, False)


def membership_ran_Rstar(rf, xprime, tol=DEFAULT_TOL):
    """Certificate that a functional lies in ran R*.

    Condition one: the functional annihilates ker R.  Condition two: the
    ratio |<x', x>|^2 / |Rx|^2 stays bounded, with its supremum available
    in closed form as the squared norm of the generalized-inverse image.
    In finite dimensions the two conditions coincide with membership.
    """
    r = rf.r
    xprime = as_vector(xprime, r.backend, r.cols)
    ker = kernel_basis(r, tol)
    if ker.cols == 0:
        annihilates = True
    else:
        vals = ker.adjoint() @ xprime
        bound = 1e-8 * max(1.0, xprime.max_abs())
        annihilates = vals.max_abs() <= bound if r.backend == FLOAT else vals.is_zero()
    in_range = range_inclusion(xprime, r.adjoint(), tol)
    sup_value = None
    if in_range:
        h = pseudo_inverse(r.adjoint(), tol) @ xprime
        sup_value = float(sum(abs(complex(x)) ** 2 for x in h.to_float().data.flat))
    return MembershipCertificate(
        in_range=in_range,
        annihilates_kernel=annihilates,
        sup_finite=in_range,
        sup_value=sup_value,
    )


def generalized_inverse_apply(rf, xprime, tol=DEFAULT_TOL):
    """The unique h in ran R with R*h = x', for x' in ran R*.

    Raises RangeMembershipError when x' lies outside ran R*.
    """
    r = rf.r
    xprime = as_vector(xprime, r.backend, r.cols)
    if not range_inclusion(xprime, r.adjoint(), tol):
        raise RangeMembershipError("outside ran R∗")
    return pseudo_inverse(r.adjoint(), tol) @ xprime


def douglas_factorization(a, d, alpha, tol=DEFAULT_TOL):
    """Factor R_A* through R_D* when A <= alpha^2 D.

    Returns the unique W with R_A* = R_D* W, ran W inside ran R_D,
    ker W = ker R_A* and operator norm at most alpha.
    """
    a = require_psd(a, tol, "A")
    d = require_psd(d, tol, "D")
    _require_float(a, "douglas_factorization")
    if a.shape != d.shape:
        raise DimensionError("A and D must have equal shape")
    scaled = hermitian(d.scale(alpha * alpha))
    if not loewner_leq(a, scaled, tol):
        raise OrderViolationError("A ≰ α²D")
    root_a = minimal_square_root(a, tol)
    root_d = minimal_square_root(d, tol)
    w = pseudo_inverse(root_d.r.adjoint(), tol) @ root_a.r.adjoint()
    if w.data.size:
        op_norm = float(np.linalg.svd(w.data, compute_uv=False)[0])
    else:
        op_norm = 0.0
    if op_norm > alpha + 1e-6:
        raise InternalCheckError(
            f"contraction bound violated: |W| = {op_norm} > {alpha}"
        )
    return DouglasFactorization(w, float(alpha), op_norm, root_a, root_d)


def linking_isometry(rf, sf, tol=DEFAULT_TOL):
    """Isometry U with U S = R linking a factor R to a minimal factor S."""
    if not sf.minimal:
        raise DimensionError("the second factor must be minimal")
    _require_float(rf.r, "linking_isometry")
    dev = (rf.gram() - sf.gram()).max_abs()
    scale = max(1.0, rf.gram().max_abs())
    if dev > 1e-8 * scale:
        raise DimensionError("factors disagree: R*R differs from S*S")
    return rf.r @ pseudo_inverse(sf.r, tol)


@dataclass(frozen=True)
class RangeAdditivityReport:
    """ran R* of a Gram sum against the sum of the summand ranges."""

    holds: bool
    sum_range: Subspace
    part1: Subspace
    part2: Subspace


def verify_range_additivity(r1, r2, tol=DEFAULT_TOL):
    """Check ran R* = ran R1* + ran R2* for R*R = R1*R1 + R2*R2.

    On the float backend an actual factor of the sum is built; on the
    exact backend ran R* equals ran(R*R), so the test runs square-root
    free on the assembled sum.
    """
    if r1.cols != r2.cols:
        raise DimensionError("equal column counts required")
    total = hermitian(r1.adjoint() @ r1 + r2.adjoint() @ r2)
    if total.backend == FLOAT:
        root = minimal_square_root(total, tol)
        sum_range = Subspace.from_columns(root.r.adjoint(), tol)
    else:
        sum_range = Subspace.from_columns(total, tol)
    part1 = Subspace.from_columns(r1.adjoint(), tol)
    part2 = Subspace.from_columns(r2.adjoint(), tol)
    combined = part1.add(part2, tol)
    return RangeAdditivityReport(
        holds=sum_range.equals(combined, tol),
        sum_range=sum_range,
        part1=part1,
        part2=part2,
    )
