"""Dense complex matrices over two scalar backends.

Backend "float" stores complex128 numpy arrays; backend "rational" stores
object arrays of exact Gaussian-rational scalars (:class:`QQi`).  Every
value is immutable after construction and every operation is a pure
function, so instances are safe to share across threads.

The adjoint is the conjugate transpose throughout: the pairing between a
space and its dual is fixed to the standard sesquilinear form, so the dual
of a map is represented by the conjugate-transposed matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from shortedop._kernels import QQi
from shortedop.errors import DimensionError, NotHermitianError

FLOAT = "float"
RATIONAL = "rational"

# Float inputs this far from Hermitian are symmetrized; beyond, rejected.
HERMITIAN_REL_TOL = 1e-8


@dataclass(frozen=True)
class ToleranceProfile:
    """Thresholds for the float backend; the exact backend ignores both.

    rank_rel_threshold: a singular value / pivot counts as nonzero iff it
        exceeds this fraction of the largest one.
    psd_rel_slack: eigenvalues above ``-slack * scale`` count as
        non-negative, where scale is the largest absolute eigenvalue
        (1 for a zero matrix).
    """

    rank_rel_threshold: float = 1e-10
    psd_rel_slack: float = 1e-8


DEFAULT_TOL = ToleranceProfile()

_QQI_ZERO = QQi(0)
_QQI_ONE = QQi(1)


def _coerce_rational(x):
    if isinstance(x, QQi):
        return x
    if isinstance(x, (int, Fraction, str)):
        return QQi(Fraction(x))
    if isinstance(x, tuple) and len(x) == 2:
        return QQi(Fraction(x[0]), Fraction(x[1]))
    raise TypeError(f"cannot coerce {x!r} to a Gaussian rational")


class Matrix:
    """Immutable dense matrix; backend inferred from the array dtype."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got ndim={arr.ndim}")
        if arr.dtype != object:
            arr = arr.astype(np.complex128)
        if arr.flags.writeable:
            arr = arr.copy()
            arr.setflags(write=False)
        self.data = arr

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows, backend=FLOAT, cols=None):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        if backend == RATIONAL:
            arr = np.empty((len(rows), ncols), dtype=object)
            for i, r in enumerate(rows):
                for j, x in enumerate(r):
                    arr[i, j] = _coerce_rational(x)
        elif backend == FLOAT:
            arr = np.array(rows, dtype=np.complex128).reshape(len(rows), ncols)
        else:
            raise DimensionError(f"unknown backend {backend!r}")
        return cls(arr)

    @classmethod
    def zeros(cls, rows, cols, backend=FLOAT):
        if backend == RATIONAL:
            arr = np.empty((rows, cols), dtype=object)
            arr[...] = _QQI_ZERO
        else:
            arr = np.zeros((rows, cols), dtype=np.complex128)
        return cls(arr)

    @classmethod
    def identity(cls, n, backend=FLOAT):
        if backend == RATIONAL:
            arr = np.empty((n, n), dtype=object)
            arr[...] = _QQI_ZERO
            for i in range(n):
                arr[i, i] = _QQI_ONE
        else:
            arr = np.eye(n, dtype=np.complex128)
        return cls(arr)

    # -- structure --------------------------------------------------------

    @property
    def backend(self):
        return RATIONAL if self.data.dtype == object else FLOAT

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def entry(self, i, j):
        return self.data[i, j]

    def submatrix(self, r0, r1, c0, c1):
        return Matrix(self.data[r0:r1, c0:c1])

    def column(self, j):
        return Matrix(self.data[:, j : j + 1])

    def tolist(self):
        return [list(row) for row in self.data]

    # -- arithmetic -------------------------------------------------------

    def _require_same_backend(self, other):
        if self.backend != other.backend:
            raise DimensionError(
                f"backend mismatch: {self.backend} vs {other.backend}"
            )

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._require_same_backend(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.rows, other.cols, self.backend)
        return Matrix(np.dot(self.data, other.data))

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._require_same_backend(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Matrix(self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._require_same_backend(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Matrix(self.data - other.data)

    def __neg__(self):
        return Matrix(-self.data)

    def scale(self, s):
        """Multiply by a scalar (backend-coerced)."""
        if self.backend == RATIONAL:
            s = _coerce_rational(s)
            if self.data.size == 0:
                return self
            return Matrix(self.data * s)
        return Matrix(self.data * complex(s))

    def adjoint(self):
        if self.backend == RATIONAL:
            out = np.empty((self.cols, self.rows), dtype=object)
            src = self.data
            for i in range(self.rows):
                for j in range(self.cols):
                    out[j, i] = src[i, j].conjugate()
            return Matrix(out)
        return Matrix(self.data.conj().T)

    # -- predicates and norms ----------------------------------------------

    def equals(self, other):
        """Exact entrywise equality (same backend, same shape)."""
        if not isinstance(other, Matrix) or self.backend != other.backend:
            return False
        if self.shape != other.shape:
            return False
        if self.data.size == 0:
            return True
        return bool(np.equal(self.data, other.data).all())

    def max_abs(self):
        """Largest entry magnitude as a float (0.0 for empty matrices)."""
        if self.data.size == 0:
            return 0.0
        if self.backend == RATIONAL:
            return max(float(x.norm_sq()) for x in self.data.flat) ** 0.5
        return float(np.abs(self.data).max())

    def is_zero(self, atol=0.0):
        if self.data.size == 0:
            return True
        if self.backend == RATIONAL:
            return all(not x for x in self.data.flat)
        return self.max_abs() <= atol

    # -- conversions --------------------------------------------------------

    def to_float(self):
        if self.backend == FLOAT:
            return self
        out = np.empty(self.shape, dtype=np.complex128)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = complex(self.data[i, j])
        return Matrix(out)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.backend})"


class HermitianMatrix(Matrix):
    """Matrix validated (and on the float backend symmetrized) as Hermitian."""

    __slots__ = ()


def hstack(mats):
    mats = list(mats)
    if not mats:
        raise DimensionError("hstack of nothing")
    for m in mats[1:]:
        mats[0]._require_same_backend(m)
    return Matrix(np.hstack([m.data for m in mats]))


def vstack(mats):
    mats = list(mats)
    if not mats:
        raise DimensionError("vstack of nothing")
    for m in mats[1:]:
        mats[0]._require_same_backend(m)
    return Matrix(np.vstack([m.data for m in mats]))


def block(rows_of_blocks):
    """Assemble a matrix from a 2-d grid of conforming blocks."""
    return vstack([hstack(row) for row in rows_of_blocks])


def hermitian(m, name="matrix"):
    """Validate ``m`` as Hermitian and return it as a :class:`HermitianMatrix`.

    Exact backend: requires entrywise equality with the adjoint.  Float
    backend: symmetrizes to (M + M*)/2 when the deviation is within
    ``HERMITIAN_REL_TOL`` relative to the largest entry, else rejects.
    """
    if not isinstance(m, Matrix):
        raise TypeError("hermitian() expects a Matrix")
    if m.rows != m.cols:
        raise NotHermitianError(f"not Hermitian: {name} is {m.rows}x{m.cols}")
    if isinstance(m, HermitianMatrix):
        return m
    adj = m.adjoint()
    if m.backend == RATIONAL:
        if not m.equals(adj):
            raise NotHermitianError(f"not Hermitian: {name}")
        out = HermitianMatrix.__new__(HermitianMatrix)
        out.data = m.data
        return out
    dev = (m - adj).max_abs()
    scale = m.max_abs()
    if dev > HERMITIAN_REL_TOL * max(scale, 1e-300) and dev > 0.0:
        raise NotHermitianError(f"not Hermitian: {name} deviates by {dev:.3e}")
    sym = (m + adj).scale(0.5)
    out = HermitianMatrix.__new__(HermitianMatrix)
    out.data = sym.data
    return out


def symmetrized(m, context="product"):
    """Hermitian part (M + M*)/2 of a matrix that is Hermitian by theory.

    Unlike :func:`hermitian` this never applies the relative input
    tolerance (which misfires on numerically-zero results); it still traps
    gross asymmetry, which would indicate a formula bug rather than
    rounding.
    """
    if isinstance(m, HermitianMatrix):
        return m
    adj = m.adjoint()
    dev = (m - adj).max_abs()
    if dev > 1e-6 * (1.0 + m.max_abs()):
        raise NotHermitianError(f"not Hermitian: {context} deviates by {dev:.3e}")
    sym = (m + adj).scale(0.5) if m.backend == FLOAT else m
    out = HermitianMatrix.__new__(HermitianMatrix)
    out.data = sym.data
    return out


def as_vector(x, backend=FLOAT, dim=None):
    """Coerce ``x`` (sequence, 1-d array, or n x 1 matrix) to an n x 1 Matrix."""
    if isinstance(x, Matrix):
        if x.cols == 1:
            v = x
        elif x.rows == 1:
            v = Matrix(x.data.reshape(-1, 1))
        else:
            raise DimensionError(f"not a vector: shape {x.shape}")
        if x.backend != backend:
            raise DimensionError("vector backend mismatch")
    else:
        v = Matrix.from_rows([[e] for e in x], backend)
    if dim is not None and v.rows != dim:
        raise DimensionError(f"expected a vector of length {dim}, got {v.rows}")
    return v


def scalar_of(m):
    """Extract the single entry of a 1 x 1 matrix."""
    if m.shape != (1, 1):
        raise DimensionError(f"expected 1x1, got {m.shape}")
    return m.entry(0, 0)


def real_part(s):
    """Real part of a backend scalar as Fraction (QQi) or float."""
    if isinstance(s, QQi):
        return s.re
    return complex(s).real


def qform(h, x):
    """Quadratic form x*Hx as an exact Fraction or a float.

    The imaginary part (zero for Hermitian H up to rounding) is dropped.
    """
    val = scalar_of(x.adjoint() @ (h @ x))
    return real_part(val)


def pairing(xprime, x):
    """Value of the functional ``xprime`` at ``x``: x* . xprime."""
    return scalar_of(x.adjoint() @ xprime)
