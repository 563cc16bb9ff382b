"""Positive pairs (A, B): a PSD A whose range absorbs every column of B.

For such a pair the coupling form omega(A, B) = B* A+ B is defined; it is
the smallest D-corner making [[A, B], [B*, D]] PSD, and equals T*T for
T = (R*)+ B over any square-root factor R of A.
"""

from __future__ import annotations

from dataclasses import dataclass

from shortedop.errors import (
    BackendUnsupportedError,
    DimensionError,
    NotPositivePairError,
)
from shortedop.linalg import is_psd, loewner_leq, kernel_basis, pseudo_inverse, require_psd
from shortedop.matrix import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    HermitianMatrix,
    Matrix,
    as_vector,
    hermitian,
    qform,
)
from shortedop.sqroot import minimal_square_root
from shortedop.subspace import range_inclusion

SQUARE_ROOT = "square-root"
PSEUDO_INVERSE = "pseudo-inverse"


@dataclass(frozen=True)
class PairDiagnostic:
    """Outcome of the two positive-pair conditions, reported separately.

    kernel_condition: every column of B annihilates ker A.
    bounded_condition: the ratio |<By, x>|^2 / <Ax, x> stays bounded in x
        for every y; when it does, ``sup_per_basis`` carries the closed-form
        suprema for the standard basis vectors y = e_j (the diagonal of the
        coupling form).
    """

    kernel_condition: bool
    bounded_condition: bool
    sup_per_basis: tuple | None

    @property
    def is_pair(self):
        return self.kernel_condition and self.bounded_condition

    def failure_text(self):
        parts = []
        if not self.kernel_condition:
            parts.append("(i) fails: ker A is not annihilated by B")
        if not self.bounded_condition:
            parts.append("(ii) fails: the ratio supremum is infinite")
        return "; ".join(parts) if parts else "positive pair"


@dataclass(frozen=True)
class PositivePairData:
    """Validated pair with its coupling form (and factor image when float)."""

    a: HermitianMatrix
    b: Matrix
    t: Matrix | None
    omega: HermitianMatrix
    backend_used: str


def check_positive_pair(a, b, tol=DEFAULT_TOL):
    """Decide the positive-pair property; returns (bool, diagnostic)."""
    a = require_psd(a, tol, "A")
    if b.rows != a.rows:
        raise DimensionError("B must have as many rows as A")
    ker = kernel_basis(a, tol)
    if ker.cols == 0:
        kernel_ok = True
    else:
        vals = b.adjoint() @ ker
        if a.backend == RATIONAL:
            kernel_ok = vals.is_zero()
        else:
            kernel_ok = vals.max_abs() <= 1e-8 * max(1.0, b.max_abs())
    bounded_ok = range_inclusion(b, a, tol)
    sups = None
    if bounded_ok:
        omega = hermitian(b.adjoint() @ pseudo_inverse(a, tol) @ b)
        sups = tuple(omega.entry(j, j) for j in range(omega.rows))
    return bounded_ok, PairDiagnostic(kernel_ok, bounded_ok, sups)


def build_pair(a, b, backend=None, tol=DEFAULT_TOL):
    """Construct PositivePairData, computing T and the coupling form.

    backend "square-root": factor A, set T = (R*)+ B and omega = T*T
    (float only).  backend "pseudo-inverse": omega = B* A+ B with no T
    (works on both scalar backends, exactly on the rational one).
    """
    ok, diag = check_positive_pair(a, b, tol)
    if not ok:
        raise NotPositivePairError(diag.failure_text(), diag)
    a = hermitian(a)
    if backend is None:
        backend = SQUARE_ROOT if a.backend == FLOAT else PSEUDO_INVERSE
    if backend == SQUARE_ROOT:
        if a.backend == RATIONAL:
            raise BackendUnsupportedError(
                "square roots unsupported on exact backend (build_pair)"
            )
        rf = minimal_square_root(a, tol)
        t = pseudo_inverse(rf.r.adjoint(), tol) @ b
        omega = hermitian(t.adjoint() @ t)
    elif backend == PSEUDO_INVERSE:
        t = None
        omega = hermitian(b.adjoint() @ pseudo_inverse(a, tol) @ b)
    else:
        raise DimensionError(f"unknown pair backend {backend!r}")
    return PositivePairData(a=a, b=b, t=t, omega=omega, backend_used=backend)


def sup_ratio(pair, y, tol=DEFAULT_TOL):
    """Supremum over x of |<By, x>|^2 / <Ax, x> with its maximizer.

    The value is the coupling form at y; the certificate x* = A+ B y
    attains the ratio whenever the value is positive (zero vector
    otherwise, following the 0/0 := 0 convention).
    """
    y = as_vector(y, pair.a.backend, pair.b.cols)
    value = qform(pair.omega, y)
    if value:
        cert = pseudo_inverse(pair.a, tol) @ (pair.b @ y)
    else:
        cert = Matrix.zeros(pair.a.rows, 1, pair.a.backend)
    return value, cert


@dataclass(frozen=True)
class SubadditivityReport:
    """Coupling form of a pair sum against the sum of coupling forms."""

    sum_is_pair: bool
    holds: bool
    omega_sum: HermitianMatrix | None
    omega_parts: HermitianMatrix


def omega_subadditivity_check(pair1, pair2, tol=DEFAULT_TOL):
    """Check that pairs add and the coupling form is subadditive."""
    if pair1.a.shape != pair2.a.shape or pair1.b.shape != pair2.b.shape:
        raise DimensionError("pair shapes must match")
    a = hermitian(pair1.a + pair2.a)
    b = pair1.b + pair2.b
    ok, _ = check_positive_pair(a, b, tol)
    rhs = hermitian(pair1.omega + pair2.omega)
    if not ok:
        return SubadditivityReport(False, False, None, rhs)
    lhs = build_pair(a, b, PSEUDO_INVERSE, tol).omega
    return SubadditivityReport(True, loewner_leq(lhs, rhs, tol), lhs, rhs)
