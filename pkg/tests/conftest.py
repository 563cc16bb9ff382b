from fractions import Fraction

import numpy as np
import pytest

from shortedop._kernels import QQi
from shortedop.matrix import RATIONAL, Matrix, hermitian


def rational_matrix(rng, rows, cols, span=5):
    """Random small-integer Gaussian-rational matrix (test-local helper)."""
    if rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols, RATIONAL)
    num = rng.integers(-span, span + 1, size=(rows, cols, 4))
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            a, b, c, d = (int(x) for x in num[i, j])
            row.append(QQi(Fraction(a, abs(b) % 3 + 1), Fraction(c, abs(d) % 3 + 1)))
        out.append(row)
    return Matrix.from_rows(out, RATIONAL)


def float_matrix(rng, rows, cols):
    re = rng.uniform(-1.0, 1.0, size=(rows, cols))
    im = rng.uniform(-1.0, 1.0, size=(rows, cols))
    return Matrix(re + 1j * im)


def rational_gram(rng, n, k, span=3):
    g = rational_matrix(rng, k, n, span)
    return hermitian(g.adjoint() @ g)


def float_gram(rng, n, k):
    g = float_matrix(rng, k, n)
    return hermitian(g.adjoint() @ g)


def to_sympy(m):
    """Independent exact representation (oracle side) of a rational Matrix."""
    import sympy

    return sympy.Matrix(
        [
            [
                sympy.Rational(x.re.numerator, x.re.denominator)
                + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)
                for x in row
            ]
            for row in m.tolist()
        ]
        if m.rows
        else sympy.zeros(0, m.cols)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
