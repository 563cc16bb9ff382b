"""Subspaces of C^n as full-column-rank basis matrices.

Inclusion and equality are decided by rank tests, which are exact on the
rational backend.  All subspaces here are closed (finite dimension), so
range and kernel computations never need topological care.
"""

from __future__ import annotations

import numpy as np

from shortedop.errors import DimensionError
from shortedop.linalg import (
    column_space_basis,
    inverse_exact,
    kernel_basis,
    rank,
)
from shortedop.matrix import DEFAULT_TOL, FLOAT, RATIONAL, Matrix, hstack


def range_inclusion(m, n, tol=DEFAULT_TOL):
    """Whether ran M is contained in ran N, via rank(N) = rank([N | M])."""
    if m.rows != n.rows:
        raise DimensionError("range_inclusion needs equal row counts")
    if m.cols == 0:
        return True
    rn = rank(n, tol)
    return rank(hstack([n, m]), tol) == rn


class Subspace:
    """A linear subspace of C^ambient_dim, held as a basis matrix."""

    __slots__ = ("basis",)

    def __init__(self, basis):
        self.basis = basis

    @classmethod
    def from_columns(cls, m, tol=DEFAULT_TOL):
        """Span of the columns of ``m`` (basis extracted rank-revealingly)."""
        return cls(column_space_basis(m, tol))

    @classmethod
    def zero(cls, ambient_dim, backend=FLOAT):
        return cls(Matrix.zeros(ambient_dim, 0, backend))

    @classmethod
    def full(cls, ambient_dim, backend=FLOAT):
        return cls(Matrix.identity(ambient_dim, backend))

    @property
    def ambient_dim(self):
        return self.basis.rows

    @property
    def dim(self):
        return self.basis.cols

    @property
    def backend(self):
        return self.basis.backend

    def contains(self, other, tol=DEFAULT_TOL):
        if isinstance(other, Subspace):
            other = other.basis
        return range_inclusion(other, self.basis, tol)

    def contains_vector(self, v, tol=DEFAULT_TOL):
        return range_inclusion(v, self.basis, tol)

    def equals(self, other, tol=DEFAULT_TOL):
        """Mutual inclusion (dimension check first, for speed)."""
        if self.ambient_dim != other.ambient_dim:
            return False
        if self.dim != other.dim:
            return False
        return self.contains(other, tol) and other.contains(self, tol)

    def add(self, other, tol=DEFAULT_TOL):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimension mismatch")
        return Subspace.from_columns(hstack([self.basis, other.basis]), tol)

    def intersect(self, other, tol=DEFAULT_TOL):
        """Intersection via the kernel of [B1 | -B2]."""
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimension mismatch")
        b1, b2 = self.basis, other.basis
        if b1.cols == 0 or b2.cols == 0:
            return Subspace.zero(self.ambient_dim, self.backend)
        k = kernel_basis(hstack([b1, -b2]), tol)
        if k.cols == 0:
            return Subspace.zero(self.ambient_dim, self.backend)
        top = k.submatrix(0, b1.cols, 0, k.cols)
        return Subspace.from_columns(b1 @ top, tol)

    def ortho_complement(self, tol=DEFAULT_TOL):
        """Orthogonal complement: the kernel of the adjoint of the basis."""
        return Subspace(kernel_basis(self.basis.adjoint(), tol))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def orthoprojector(s, tol=DEFAULT_TOL):
    """Orthogonal projector onto the subspace: P = P* = P^2 with ran P = S.

    Float bases are orthonormal, so P = B B*; the rational lane computes
    B (B*B)^-1 B* exactly.
    """
    b = s.basis
    n = s.ambient_dim
    if b.cols == 0:
        return Matrix.zeros(n, n, b.backend)
    if b.backend == RATIONAL:
        return b @ inverse_exact(b.adjoint() @ b) @ b.adjoint()
    q = b.data
    # guard against a caller handing in a non-orthonormal basis
    gram = q.conj().T @ q
    if np.abs(gram - np.eye(b.cols)).max() > 1e-8:
        q = np.linalg.qr(q)[0]
    return Matrix(q @ q.conj().T)
