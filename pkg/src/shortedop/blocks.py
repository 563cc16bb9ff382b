"""Two- and three-way Hermitian block partitions of a square matrix.

A Block2 holds the pieces of [[A, B], [B*, D]] together with the
partition (n_x, n_y); assembling always produces an exactly Hermitian
matrix because the off-diagonal corner is stored once.
"""

from __future__ import annotations

from dataclasses import dataclass

from shortedop.errors import DimensionError
from shortedop.matrix import Matrix, HermitianMatrix, block, hermitian, hstack, vstack


@dataclass(frozen=True)
class Block2:
    """Hermitian block operator [[A, B], [B*, D]] with partition (n_x, n_y)."""

    a: HermitianMatrix
    b: Matrix
    d: HermitianMatrix

    def __post_init__(self):
        a, b, d = self.a, self.b, self.d
        object.__setattr__(self, "a", hermitian(a, "A"))
        object.__setattr__(self, "d", hermitian(d, "D"))
        if b.rows != a.rows or b.cols != d.rows:
            raise DimensionError(
                f"B must be {a.rows}x{d.rows}, got {b.rows}x{b.cols}"
            )

    @property
    def n_x(self):
        return self.a.rows

    @property
    def n_y(self):
        return self.d.rows

    @property
    def partition(self):
        return (self.n_x, self.n_y)

    @property
    def backend(self):
        return self.a.backend

    @classmethod
    def from_matrix(cls, m, n_x):
        """Split a Hermitian (n_x + n_y)-square matrix at position n_x."""
        m = hermitian(m)
        n = m.rows
        if not 0 <= n_x <= n:
            raise DimensionError(f"partition point {n_x} outside 0..{n}")
        return cls(
            a=m.submatrix(0, n_x, 0, n_x),
            b=m.submatrix(0, n_x, n_x, n),
            d=m.submatrix(n_x, n, n_x, n),
        )

    def assembled(self):
        return hermitian(
            block([[self.a, self.b], [self.b.adjoint(), self.d]])
        )

    def __add__(self, other):
        if not isinstance(other, Block2) or other.partition != self.partition:
            raise DimensionError("Block2 addition needs matching partitions")
        return Block2(hermitian(self.a + other.a), self.b + other.b,
                      hermitian(self.d + other.d))

    def __sub__(self, other):
        if not isinstance(other, Block2) or other.partition != self.partition:
            raise DimensionError("Block2 subtraction needs matching partitions")
        return Block2(hermitian(self.a - other.a), self.b - other.b,
                      hermitian(self.d - other.d))

    def scale(self, s):
        return Block2(hermitian(self.a.scale(s)), self.b.scale(s),
                      hermitian(self.d.scale(s)))


@dataclass(frozen=True)
class Block3:
    """Hermitian 3 x 3 block operator with partition (n_x, n_y, n_z).

    Layout: [[A, B, B_X], [B*, D, B_Y], [B_X*, B_Y*, D_1]].
    """

    a: HermitianMatrix
    b: Matrix
    b_x: Matrix
    d: HermitianMatrix
    b_y: Matrix
    d_1: HermitianMatrix

    def __post_init__(self):
        object.__setattr__(self, "a", hermitian(self.a, "A"))
        object.__setattr__(self, "d", hermitian(self.d, "D"))
        object.__setattr__(self, "d_1", hermitian(self.d_1, "D_1"))
        n_x, n_y, n_z = self.partition
        if self.b.shape != (n_x, n_y):
            raise DimensionError("B block shape mismatch")
        if self.b_x.shape != (n_x, n_z):
            raise DimensionError("B_X block shape mismatch")
        if self.b_y.shape != (n_y, n_z):
            raise DimensionError("B_Y block shape mismatch")

    @property
    def partition(self):
        return (self.a.rows, self.d.rows, self.d_1.rows)

    @classmethod
    def from_matrix(cls, m, n_x, n_y):
        m = hermitian(m)
        n = m.rows
        if n_x < 0 or n_y < 0 or n_x + n_y > n:
            raise DimensionError("bad 3-way partition")
        k = n_x + n_y
        return cls(
            a=m.submatrix(0, n_x, 0, n_x),
            b=m.submatrix(0, n_x, n_x, k),
            b_x=m.submatrix(0, n_x, k, n),
            d=m.submatrix(n_x, k, n_x, k),
            b_y=m.submatrix(n_x, k, k, n),
            d_1=m.submatrix(k, n, k, n),
        )

    def assembled(self):
        return hermitian(block([
            [self.a, self.b, self.b_x],
            [self.b.adjoint(), self.d, self.b_y],
            [self.b_x.adjoint(), self.b_y.adjoint(), self.d_1],
        ]))

    def head_pair(self):
        """The upper-left Block2 [[A, B], [B*, D]]."""
        return Block2(self.a, self.b, self.d)

    def as_two_blocks(self):
        """Regroup as ((X x Y), Z): Block2 with corner D_1."""
        top = self.head_pair().assembled()
        off = vstack([self.b_x, self.b_y])
        return Block2(top, off, self.d_1)


def y_corner_embedding(n_x, n_y, backend):
    """Basis of the dual corner {0}^n_x x C^n_y inside C^(n_x + n_y)."""
    return vstack([
        Matrix.zeros(n_x, n_y, backend),
        Matrix.identity(n_y, backend),
    ])
