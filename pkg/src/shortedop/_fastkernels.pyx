# cython: language_level=3
"""Compiled twin of ``shortedop._purekernels``.

Same API, same semantics; the scalar type and the two inner loops are the
hot paths, so they get typed implementations here.  Keep any behavioural
change in sync with the pure module (the parity tests compare them).
"""

from fractions import Fraction
from math import gcd

import numpy as np

cimport cython

IMPL = "compiled"


cdef class QQi:
    """Exact complex scalar (an + bn*i)/d with d > 0 and gcd(an, bn, d) = 1."""

    cdef readonly object an
    cdef readonly object bn
    cdef readonly object d

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi):
            if im:
                raise TypeError("cannot add an imaginary part to a QQi")
            self.an, self.bn, self.d = (<QQi>re).an, (<QQi>re).bn, (<QQi>re).d
            return
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("QQi rejects floats; use the float backend instead")
        re = Fraction(re)
        im = Fraction(im)
        dr = re.denominator
        di = im.denominator
        d = dr * di // gcd(dr, di)
        an = re.numerator * (d // dr)
        bn = im.numerator * (d // di)
        g = gcd(an, bn, d)
        if g > 1:
            an //= g
            bn //= g
            d //= g
        self.an, self.bn, self.d = an, bn, d

    @staticmethod
    cdef QQi _mk(object an, object bn, object d):
        cdef QQi out
        if d < 0:
            an, bn, d = -an, -bn, -d
        g = gcd(an, bn, d)
        if g > 1:
            an //= g
            bn //= g
            d //= g
        out = QQi.__new__(QQi)
        out.an, out.bn, out.d = an, bn, d
        return out

    @property
    def re(self):
        return Fraction(self.an, self.d)

    @property
    def im(self):
        return Fraction(self.bn, self.d)

    def conjugate(self):
        return QQi._mk(self.an, -self.bn, self.d)

    def norm_sq(self):
        return Fraction(self.an * self.an + self.bn * self.bn, self.d * self.d)

    def is_real(self):
        return self.bn == 0

    @staticmethod
    cdef QQi _coerce(object x):
        if isinstance(x, QQi):
            return <QQi>x
        if isinstance(x, (int, Fraction)):
            return QQi(x)
        return None

    def __add__(self, other):
        cdef QQi a = QQi._coerce(self)
        cdef QQi o = QQi._coerce(other)
        if a is None or o is None:
            return NotImplemented
        return QQi._mk(a.an * o.d + o.an * a.d,
                       a.bn * o.d + o.bn * a.d,
                       a.d * o.d)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        cdef QQi a = QQi._coerce(self)
        cdef QQi o = QQi._coerce(other)
        if a is None or o is None:
            return NotImplemented
        return QQi._mk(a.an * o.d - o.an * a.d,
                       a.bn * o.d - o.bn * a.d,
                       a.d * o.d)

    def __rsub__(self, other):
        cdef QQi o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __neg__(self):
        return QQi._mk(-self.an, -self.bn, self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        cdef QQi a = QQi._coerce(self)
        cdef QQi o = QQi._coerce(other)
        if a is None or o is None:
            return NotImplemented
        return QQi._mk(a.an * o.an - a.bn * o.bn,
                       a.an * o.bn + a.bn * o.an,
                       a.d * o.d)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        cdef QQi a = QQi._coerce(self)
        cdef QQi o = QQi._coerce(other)
        if a is None or o is None:
            return NotImplemented
        n = o.an * o.an + o.bn * o.bn
        if n == 0:
            raise ZeroDivisionError("division by zero QQi")
        return QQi._mk((a.an * o.an + a.bn * o.bn) * o.d,
                       (a.bn * o.an - a.an * o.bn) * o.d,
                       a.d * n)

    def __rtruediv__(self, other):
        cdef QQi o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __eq__(self, other):
        cdef QQi o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return self.an == o.an and self.bn == o.bn and self.d == o.d

    def __hash__(self):
        if self.bn == 0:
            return hash(Fraction(self.an, self.d))
        return hash((Fraction(self.an, self.d), Fraction(self.bn, self.d)))

    def __bool__(self):
        return self.an != 0 or self.bn != 0

    cdef object _real_cmp(self, object other):
        cdef QQi o = QQi._coerce(other)
        if o is None:
            return None
        if self.bn != 0 or o.bn != 0:
            raise TypeError("ordering is defined for real QQi values only")
        return (self.an * o.d) - (o.an * self.d)

    def __lt__(self, other):
        c = self._real_cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._real_cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._real_cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._real_cmp(other)
        return NotImplemented if c is None else c >= 0

    def __complex__(self):
        return complex(self.an / self.d, self.bn / self.d)

    def __repr__(self):
        if self.bn == 0:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"


def ff_echelon(list rows, Py_ssize_t ncols):
    """Fraction-free (Bareiss) echelon transform over the Gaussian integers.

    In-place on interleaved-int rows; returns (rank, pivot_columns).
    """
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t c, i, j, sel
    cdef list piv_cols = []
    cdef list row, prow
    cdef bint trivial_prev
    pa, pb = 1, 0
    for c in range(ncols):
        if r == m:
            break
        sel = -1
        for i in range(r, m):
            row = <list>rows[i]
            if row[2 * c] != 0 or row[2 * c + 1] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            rows[sel], rows[r] = rows[r], rows[sel]
        prow = <list>rows[r]
        qa, qb = prow[2 * c], prow[2 * c + 1]
        pn = pa * pa + pb * pb
        trivial_prev = pn == 1 and pa == 1
        for i in range(r + 1, m):
            row = <list>rows[i]
            fa, fb = row[2 * c], row[2 * c + 1]
            for j in range(2 * c, 2 * ncols, 2):
                xa, xb = row[j], row[j + 1]
                ya, yb = prow[j], prow[j + 1]
                ta = qa * xa - qb * xb - (fa * ya - fb * yb)
                tb = qa * xb + qb * xa - (fa * yb + fb * ya)
                if trivial_prev:
                    row[j], row[j + 1] = ta, tb
                else:
                    row[j] = (ta * pa + tb * pb) // pn
                    row[j + 1] = (tb * pa - ta * pb) // pn
            row[2 * c] = 0
            row[2 * c + 1] = 0
        piv_cols.append(c)
        pa, pb = qa, qb
        r += 1
    return r, piv_cols


@cython.boundscheck(False)
@cython.wraparound(False)
def descent_minimize(object a_in, object v_in, double c0, object u0_in,
                     long long iters, double step0):
    """Coordinate descent with step halving for q(u) = u*Au + 2Re(u*v) + c0."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    v_arr = np.array(v_in, dtype=np.complex128)
    u0_arr = np.array(u0_in, dtype=np.complex128)
    g_arr = a_arr @ u0_arr + v_arr
    cdef double val = float((np.vdot(u0_arr, a_arr @ u0_arr)
                             + 2.0 * np.vdot(u0_arr, v_arr)).real + c0)
    cdef Py_ssize_t n = a_arr.shape[0]
    if n == 0:
        return val
    cdef double complex[:, :] a = a_arr
    cdef double complex[:] g = g_arr
    diag_arr = np.array(a_arr.diagonal().real)
    cdef double[:] diag = diag_arr
    cdef double s = step0
    cdef long long used = 0
    cdef Py_ssize_t k, j
    cdef int sgn, imag_dir
    cdef bint improved
    cdef double akk, t, dval
    cdef double complex gk, w
    while used < iters and s > 1e-18:
        improved = False
        for k in range(n):
            akk = diag[k]
            for sgn in range(2):
                for imag_dir in range(2):
                    if used >= iters:
                        return val
                    used += 1
                    t = s if sgn == 0 else -s
                    gk = g[k]
                    dval = 2.0 * t * (gk.imag if imag_dir else gk.real) + t * t * akk
                    if dval < 0.0:
                        val += dval
                        w = (1j * t) if imag_dir else t
                        for j in range(n):
                            g[j] = g[j] + w * a[j, k]
                        improved = True
        if not improved:
            s *= 0.5
    return val
