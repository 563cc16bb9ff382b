"""Pure-Python twin of the compiled kernels.

``shortedop._kernels`` prefers the Cython build (``shortedop._fastkernels``)
and falls back to this module when the extension is unavailable or when
``SHORTEDOP_PURE=1`` is set.  The two implementations must stay
behaviourally identical; ``tests/test_kernel_parity.py`` checks that.

The kernels are the two inner loops that dominate suite runtime:

* exact Gaussian-rational scalar arithmetic (:class:`QQi`) plus the
  fraction-free echelon transform used by every exact rank / kernel /
  pseudo-inverse computation, and
* the coordinate-descent quadratic minimizer used as a brute-force oracle
  for the variational characterization of the shorted operator.
"""

from fractions import Fraction
from math import gcd

import numpy as np

IMPL = "pure"


class QQi:
    """Exact complex scalar (an + bn*i)/d with d > 0 and gcd(an, bn, d) = 1.

    Arithmetic is closed and exact.  Ints, Fractions and "p/q" strings
    coerce; floats are rejected so binary rounding can never leak into the
    exact backend.
    """

    __slots__ = ("an", "bn", "d")

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi):
            if im:
                raise TypeError("cannot add an imaginary part to a QQi")
            self.an, self.bn, self.d = re.an, re.bn, re.d
            return
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("QQi rejects floats; use the float backend instead")
        re = Fraction(re)
        im = Fraction(im)
        dr, di = re.denominator, im.denominator
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
    def _mk(an, bn, d):
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
    def _coerce(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, (int, Fraction)):
            return QQi(x)
        return None

    def __add__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return QQi._mk(self.an * o.d + o.an * self.d,
                       self.bn * o.d + o.bn * self.d,
                       self.d * o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return QQi._mk(self.an * o.d - o.an * self.d,
                       self.bn * o.d - o.bn * self.d,
                       self.d * o.d)

    def __rsub__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __neg__(self):
        return QQi._mk(-self.an, -self.bn, self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return QQi._mk(self.an * o.an - self.bn * o.bn,
                       self.an * o.bn + self.bn * o.an,
                       self.d * o.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        n = o.an * o.an + o.bn * o.bn
        if n == 0:
            raise ZeroDivisionError("division by zero QQi")
        return QQi._mk((self.an * o.an + self.bn * o.bn) * o.d,
                       (self.bn * o.an - self.an * o.bn) * o.d,
                       self.d * n)

    def __rtruediv__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __eq__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return self.an == o.an and self.bn == o.bn and self.d == o.d

    def __hash__(self):
        if self.bn == 0:
            return hash(Fraction(self.an, self.d))
        return hash((Fraction(self.an, self.d), Fraction(self.bn, self.d)))

    def __bool__(self):
        return self.an != 0 or self.bn != 0

    def _real_cmp(self, other):
        o = QQi._coerce(other)
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


def ff_echelon(rows, ncols):
    """Fraction-free (Bareiss) echelon transform over the Gaussian integers.

    ``rows`` is a list of rows, each a list of ``2 * ncols`` Python ints
    interleaving real and imaginary parts.  The transform happens in place;
    returns ``(rank, pivot_columns)``.  Every division performed is exact,
    so entries never pick up spurious denominators.
    """
    m = len(rows)
    r = 0
    piv_cols = []
    pa, pb = 1, 0  # previous pivot
    for c in range(ncols):
        if r == m:
            break
        sel = -1
        for i in range(r, m):
            row = rows[i]
            if row[2 * c] or row[2 * c + 1]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            rows[sel], rows[r] = rows[r], rows[sel]
        prow = rows[r]
        qa, qb = prow[2 * c], prow[2 * c + 1]
        pn = pa * pa + pb * pb
        trivial_prev = pn == 1 and pa == 1
        for i in range(r + 1, m):
            row = rows[i]
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


def descent_minimize(a, v, c0, u0, iters, step0):
    """Coordinate descent with step halving for q(u) = u*Au + 2Re(u*v) + c0.

    ``a`` must be Hermitian PSD.  Walks real and imaginary coordinate
    directions, accepting a trial step exactly when it lowers the value;
    the step halves after a full sweep without improvement.  Each trial
    evaluation counts against ``iters``.  Returns the best value found.
    """
    a = np.array(a, dtype=np.complex128, order="C")
    v = np.array(v, dtype=np.complex128)
    u0 = np.array(u0, dtype=np.complex128)
    g = a @ u0 + v
    val = float((np.vdot(u0, a @ u0) + 2.0 * np.vdot(u0, v)).real + c0)
    n = a.shape[0]
    if n == 0:
        return val
    diag = a.diagonal().real
    s = float(step0)
    used = 0
    while used < iters and s > 1e-18:
        improved = False
        for k in range(n):
            akk = diag[k]
            for sign in (1.0, -1.0):
                for imag_dir in (False, True):
                    if used >= iters:
                        return val
                    used += 1
                    t = sign * s
                    gk = g[k]
                    dval = 2.0 * t * (gk.imag if imag_dir else gk.real) + t * t * akk
                    if dval < 0.0:
                        val += dval
                        w = 1j * t if imag_dir else t
                        g += w * a[:, k]
                        improved = True
        if not improved:
            s *= 0.5
    return val
