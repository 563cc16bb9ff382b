"""Generalized Schur complements and shorted operators of block matrices.

For a Hermitian [[A, B], [B*, D]] whose (A, B) is a positive pair, the
complement is sigma = D - omega(A, B) and the shorted operator is
diag(0, sigma): the largest Hermitian minorant vanishing on the first
block.  The non-negativity of the whole matrix is equivalent to positive
type plus non-negativity of sigma (the Albert criterion), and in the PSD
case sigma admits a square-root-projection formula and a nested-quotient
identity; all of that is implemented and cross-checked here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shortedop._kernels import descent_minimize
from shortedop.blocks import Block2, Block3, y_corner_embedding
from shortedop.errors import (
    ChainError,
    DimensionError,
    InternalCheckError,
    NotPositivePairError,
    NotPSDError,
)
from shortedop.linalg import (
    is_psd,
    loewner_leq,
    pseudo_inverse,
    require_psd,
)
from shortedop.matrix import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    HermitianMatrix,
    Matrix,
    as_vector,
    hermitian,
    qform,
    real_part,
    scalar_of,
    vstack,
)
from shortedop.pairs import (
    PSEUDO_INVERSE,
    build_pair,
    check_positive_pair,
)
from shortedop.sqroot import minimal_square_root
from shortedop.subspace import Subspace, orthoprojector

PSD = "PSD"
NOT_POSITIVE_TYPE = "NOT_POSITIVE_TYPE"
SIGMA_NOT_PSD = "SIGMA_NOT_PSD"


@dataclass(frozen=True)
class ShortedResult:
    """Complement sigma plus the shorted operator diag(0, sigma)."""

    sigma: HermitianMatrix
    shorted: Block2
    positive_type: bool

    def shorted_matrix(self):
        return self.shorted.assembled()


@dataclass(frozen=True)
class AlbertVerdict:
    """Non-negativity classification of a Hermitian block matrix."""

    classification: str
    sigma_if_any: HermitianMatrix | None


def pair_status(m, tol=DEFAULT_TOL):
    """Positive-type check that reports instead of raising.

    Returns ``(ok, reason)`` where reason explains the first failing
    condition (A indefinite, or one of the two pair conditions).
    """
    try:
        ok, diag = check_positive_pair(m.a, m.b, tol)
    except NotPSDError as exc:
        return False, str(exc)
    return ok, diag.failure_text()


def _pair_or_raise(m, backend, tol):
    try:
        return build_pair(m.a, m.b, backend, tol)
    except NotPSDError as exc:
        raise NotPositivePairError(str(exc)) from exc


def schur_complement(m, backend=None, tol=DEFAULT_TOL):
    """sigma = D - omega(A, B); exact on the rational backend.

    Raises NotPositivePairError (with the two-condition diagnostic) when
    the matrix is not of positive type.
    """
    pair = _pair_or_raise(m, backend, tol)
    sigma = hermitian(m.d - pair.omega)
    shorted = Block2(
        hermitian(Matrix.zeros(m.n_x, m.n_x, m.backend)),
        Matrix.zeros(m.n_x, m.n_y, m.backend),
        sigma,
    )
    return ShortedResult(sigma=sigma, shorted=shorted, positive_type=True)


def shorted_via_projection(m, tol=DEFAULT_TOL):
    """Shorted operator as R* P R over a factor R of the whole matrix.

    P projects onto the orthogonal complement of the image of the first
    block of coordinates; requires the assembled matrix PSD and the float
    backend.  Agrees with :func:`schur_complement`.
    """
    full = require_psd(m.assembled(), tol)
    rf = minimal_square_root(full, tol)
    rx = rf.r.submatrix(0, rf.hilbert_dim, 0, m.n_x)
    image_x = Subspace.from_columns(rx, tol)
    eye = Matrix.identity(rf.hilbert_dim, FLOAT)
    p = eye - orthoprojector(image_x, tol)
    s = hermitian(rf.r.adjoint() @ p @ rf.r)
    corner = hermitian(s.submatrix(m.n_x, m.n_x + m.n_y, m.n_x, m.n_x + m.n_y))
    upper = s.submatrix(0, m.n_x, 0, m.n_x + m.n_y)
    if upper.max_abs() > 1e-7 * max(1.0, full.max_abs()):
        raise InternalCheckError("projection short has a nonzero X block")
    shorted = Block2(
        hermitian(Matrix.zeros(m.n_x, m.n_x, FLOAT)),
        Matrix.zeros(m.n_x, m.n_y, FLOAT),
        corner,
    )
    return ShortedResult(sigma=corner, shorted=shorted, positive_type=True)


def variational_value(m, x, y, tol=DEFAULT_TOL):
    """Closed-form infimum over z of the form at (x - z, y).

    The infimum is attained at x - z = -A+ B y, hence independent of x;
    the returned value equals the shorted quadratic form at (x, y).
    """
    pair = _pair_or_raise(m, PSEUDO_INVERSE, tol)
    y = as_vector(y, m.backend, m.n_y)
    as_vector(x, m.backend, m.n_x)  # shape check only; the value drops x
    u = -(pseudo_inverse(m.a, tol) @ (m.b @ y))
    quad = qform(m.a, u)
    cross = real_part(scalar_of(u.adjoint() @ (m.b @ y)))
    return quad + 2 * cross + qform(m.d, y)


def descent_value(m, x, y, iters=10_000, step0=1.0):
    """Brute-force oracle: coordinate descent on the same quadratic.

    Starts at z = 0 and can only approach the infimum from above.  Float
    backend only; exists to corroborate :func:`variational_value`.
    """
    if m.backend != FLOAT:
        raise DimensionError("descent oracle runs on the float backend")
    y = as_vector(y, FLOAT, m.n_y)
    x = as_vector(x, FLOAT, m.n_x)
    v = (m.b @ y).data.ravel()
    c0 = qform(m.d, y)
    return descent_minimize(m.a.data, v, c0, x.data.ravel(), iters, step0)


def albert_classify(m, tol=DEFAULT_TOL):
    """Non-negativity via positive type plus non-negativity of sigma."""
    ok, _reason = pair_status(m, tol)
    if not ok:
        return AlbertVerdict(NOT_POSITIVE_TYPE, None)
    sigma = schur_complement(m, None, tol).sigma
    if not is_psd(sigma, tol):
        return AlbertVerdict(SIGMA_NOT_PSD, sigma)
    return AlbertVerdict(PSD, sigma)


def contraction_decomposition(m, tol=DEFAULT_TOL):
    """Contraction K with B = R_A* K R_D for factors of the diagonal blocks.

    Requires the assembled matrix PSD (float backend).  The returned K has
    operator norm at most one and range inside ran R_A.
    """
    require_psd(m.assembled(), tol)
    root_a = minimal_square_root(hermitian(m.a), tol)
    root_d = minimal_square_root(hermitian(m.d), tol)
    k = pseudo_inverse(root_a.r.adjoint(), tol) @ m.b @ pseudo_inverse(root_d.r, tol)
    proj = root_a.r @ pseudo_inverse(root_a.r, tol)
    k = proj @ k
    if k.data.size:
        norm = float(np.linalg.svd(k.data, compute_uv=False)[0])
        if norm > 1.0 + 1e-6:
            raise InternalCheckError(f"contraction norm {norm} exceeds one")
    return k


def minimal_completion(a, b, tol=DEFAULT_TOL):
    """The smallest PSD completion [[A, B], [B*, omega(A, B)]]."""
    pair = build_pair(a, b, None, tol)
    return Block2(pair.a, pair.b, pair.omega)


# ---------------------------------------------------------------------------
# nested quotients


def _complement_of_head(h, n_head, tol):
    """Schur complement of the leading n_head corner of a Hermitian matrix."""
    m = Block2.from_matrix(h, n_head)
    return schur_complement(m, PSEUDO_INVERSE, tol).sigma


@dataclass(frozen=True)
class QuotientReport:
    corner_matches: bool
    identity_holds: bool
    full_over_a: HermitianMatrix
    head_over_a: HermitianMatrix
    nested: HermitianMatrix
    direct: HermitianMatrix

    @property
    def holds(self):
        return self.corner_matches and self.identity_holds


def quotient_formula_check(m3, tol=DEFAULT_TOL):
    """Nested-quotient identity for a PSD 3 x 3 block matrix.

    With M the full matrix, H its upper-left 2 x 2 block part and A the
    leading corner: H/A is the leading corner of M/A, and
    (M/A)/(H/A) = M/H.  Exact on the rational backend.
    """
    full = require_psd(m3.assembled(), tol)
    n_x, n_y, n_z = m3.partition
    full_over_a = _complement_of_head(full, n_x, tol)  # (n_y + n_z) square
    head_over_a = _complement_of_head(m3.head_pair().assembled(), n_x, tol)
    corner = hermitian(full_over_a.submatrix(0, n_y, 0, n_y))
    if full.backend == RATIONAL:
        corner_matches = corner.equals(head_over_a)
    else:
        scale = max(1.0, full.max_abs())
        corner_matches = (corner - head_over_a).max_abs() <= 1e-9 * scale
    nested = _complement_of_head(full_over_a, n_y, tol)
    direct = _complement_of_head(full, n_x + n_y, tol)
    if full.backend == RATIONAL:
        identity_holds = nested.equals(direct)
    else:
        scale = max(1.0, full.max_abs())
        identity_holds = (nested - direct).max_abs() <= 1e-8 * scale
    return QuotientReport(
        corner_matches=corner_matches,
        identity_holds=identity_holds,
        full_over_a=full_over_a,
        head_over_a=head_over_a,
        nested=nested,
        direct=direct,
    )


# ---------------------------------------------------------------------------
# order-theoretic infimum along decreasing chains


@dataclass(frozen=True)
class ChainReport:
    limit_positive_type: bool
    limit_reason: str
    shorted_limit: ShortedResult | None
    dominated_by_chain: bool
    bounds_dominated: bool
    sigma_chain_positive_type: tuple


def infimum_of_chain(chain, tol=DEFAULT_TOL, limit=None, lower_bounds=()):
    """Check the shorted operator of a decreasing chain's infimum.

    The chain must be Loewner-decreasing; the infimum is the supplied
    ``limit`` (default: the last element).  When the limit is of positive
    type, its shorted operator must sit below every chain element's and
    above every supplied lower bound diag(0, L).
    """
    chain = list(chain)
    if not chain:
        raise ChainError("empty chain")
    for prev, nxt in zip(chain, chain[1:]):
        if prev.partition != nxt.partition:
            raise ChainError("partition changes along the chain")
        if not loewner_leq(nxt.assembled(), prev.assembled(), tol):
            raise ChainError("chain is not Loewner-decreasing")
    head = limit if limit is not None else chain[-1]
    if limit is not None:
        if not loewner_leq(head.assembled(), chain[-1].assembled(), tol):
            raise ChainError("supplied limit is not below the chain")
    ok, reason = pair_status(head, tol)
    if not ok:
        return ChainReport(
            limit_positive_type=False,
            limit_reason=reason,
            shorted_limit=None,
            dominated_by_chain=False,
            bounds_dominated=False,
            sigma_chain_positive_type=(),
        )
    res0 = schur_complement(head, None, tol)
    dominated = True
    types = []
    for mk in chain:
        ok_k, _ = pair_status(mk, tol)
        types.append(ok_k)
        if not ok_k:
            dominated = False
            continue
        sig_k = schur_complement(mk, None, tol).sigma
        if not loewner_leq(res0.sigma, sig_k, tol):
            dominated = False
    bounds_ok = all(
        loewner_leq(hermitian(lb), res0.sigma, tol) for lb in lower_bounds
    )
    return ChainReport(
        limit_positive_type=True,
        limit_reason="positive type",
        shorted_limit=res0,
        dominated_by_chain=dominated,
        bounds_dominated=bounds_ok,
        sigma_chain_positive_type=tuple(types),
    )
