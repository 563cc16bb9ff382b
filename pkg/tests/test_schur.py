"""Schur complement, shorted operator, Albert classification, quotients."""

from fractions import Fraction

import numpy as np
import pytest

from shortedop.blocks import Block2, Block3, y_corner_embedding
from shortedop.errors import ChainError, NotPositivePairError, NotPSDError
from shortedop.linalg import is_psd, kernel_basis, loewner_leq
from shortedop.matrix import FLOAT, RATIONAL, Matrix, as_vector, hermitian, qform
from shortedop.schur import (
    NOT_POSITIVE_TYPE,
    PSD,
    SIGMA_NOT_PSD,
    albert_classify,
    contraction_decomposition,
    descent_value,
    infimum_of_chain,
    minimal_completion,
    quotient_formula_check,
    schur_complement,
    shorted_via_projection,
    variational_value,
)
from shortedop.subspace import Subspace

from conftest import float_gram, float_matrix, rational_gram, rational_matrix


def rblock(rows, n_x):
    return Block2.from_matrix(hermitian(Matrix.from_rows(rows, RATIONAL)), n_x)


def fblock(rows, n_x):
    return Block2.from_matrix(hermitian(Matrix(np.array(rows, dtype=complex))), n_x)


ONES_R = rblock([[1, 1], [1, 1]], 1)
WEDGE_R = rblock([[2, 1], [1, 1]], 1)
INDEF_R = rblock([[1, 2], [2, 1]], 1)


def random_psd_block2(rng, n_x, n_y, backend=RATIONAL, rank=None):
    n = n_x + n_y
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    gram = (rational_gram if backend == RATIONAL else float_gram)(rng, n, rank)
    return Block2.from_matrix(gram, n_x)


# ---------------------------------------------------------------------------
# sigma


def test_sigma_rank_one_gram():
    assert schur_complement(ONES_R).sigma.equals(
        hermitian(Matrix.from_rows([[0]], RATIONAL))
    )


def test_sigma_wedge():
    assert schur_complement(WEDGE_R).sigma.entry(0, 0) == Fraction(1, 2)


def test_sigma_indefinite_corner():
    assert schur_complement(INDEF_R).sigma.entry(0, 0) == -3


def test_sigma_errors_without_positive_type():
    bad = rblock([[0, 1], [1, 0]], 1)
    with pytest.raises(NotPositivePairError):
        schur_complement(bad)


def test_sigma_degenerate_partitions(rng):
    m = random_psd_block2(rng, 0, 3)
    res = schur_complement(m)
    assert res.sigma.equals(m.d)  # no first block: shorting changes nothing
    m2 = random_psd_block2(rng, 3, 0)
    res2 = schur_complement(m2)
    assert res2.sigma.shape == (0, 0)


# ---------------------------------------------------------------------------
# projection route


def test_projection_route_diagonal():
    res = shorted_via_projection(fblock([[1, 0], [0, 1]], 1))
    np.testing.assert_allclose(res.sigma.data, [[1.0]], atol=1e-12)


def test_projection_route_all_ones():
    res = shorted_via_projection(fblock([[1, 1], [1, 1]], 1))
    np.testing.assert_allclose(res.sigma.data, [[0.0]], atol=1e-12)


def test_projection_route_wedge_agrees():
    m = fblock([[2, 1], [1, 1]], 1)
    res = shorted_via_projection(m)
    np.testing.assert_allclose(res.sigma.data, [[0.5]], atol=1e-10)
    direct = schur_complement(m)
    assert (res.sigma - direct.sigma).max_abs() <= 1e-10


def test_projection_route_random_agreement(rng):
    for _ in range(25):
        m = random_psd_block2(rng, int(rng.integers(0, 4)), int(rng.integers(0, 4)),
                              backend=FLOAT)
        res = shorted_via_projection(m)
        direct = schur_complement(m)
        scale = 1e-9 * (1.0 + m.assembled().max_abs())
        assert (res.sigma - direct.sigma).max_abs() <= scale


# ---------------------------------------------------------------------------
# variational characterization


def test_variational_zero_coupling(rng):
    d = rational_gram(rng, 2, 2)
    m = Block2(hermitian(Matrix.identity(3, RATIONAL)),
               Matrix.zeros(3, 2, RATIONAL), d)
    y = as_vector([1, 2], RATIONAL)
    for x in ([0, 0, 0], [5, -1, 3]):
        assert variational_value(m, x, y) == qform(d, y)


def test_variational_all_ones_vanishes():
    assert variational_value(ONES_R, [7], [1]) == 0


def test_variational_wedge_value():
    assert variational_value(WEDGE_R, [7], [1]) == Fraction(1, 2)


def test_variational_matches_shorted_form(rng):
    for _ in range(20):
        m = random_psd_block2(rng, 2, 2)
        y = rational_matrix(rng, 2, 1)
        x = rational_matrix(rng, 2, 1)
        sig = schur_complement(m).sigma
        assert variational_value(m, x, y) == qform(sig, y)


def test_descent_oracle_brackets_infimum(rng):
    m = fblock([[2, 1], [1, 1]], 1)
    closed = variational_value(m, [7.0], [1.0])
    brute = descent_value(m, [7.0], [1.0])
    assert brute >= closed - 1e-12
    assert brute - closed <= 1e-6


# ---------------------------------------------------------------------------
# Albert classification


def test_albert_identity():
    assert albert_classify(rblock([[1, 0], [0, 1]], 1)).classification == PSD


def test_albert_not_positive_type():
    v = albert_classify(rblock([[0, 1], [1, 0]], 1))
    assert v.classification == NOT_POSITIVE_TYPE and v.sigma_if_any is None


def test_albert_sigma_indefinite():
    v = albert_classify(INDEF_R)
    assert v.classification == SIGMA_NOT_PSD


def test_albert_matches_direct_psd_check(rng):
    for _ in range(80):
        n_x = int(rng.integers(0, 4))
        n_y = int(rng.integers(0, 4))
        n = n_x + n_y
        if n == 0:
            continue
        raw = rational_matrix(rng, n, n, span=3)
        h = hermitian((raw + raw.adjoint()).scale(Fraction(1, 2)))
        m = Block2.from_matrix(h, n_x)
        assert (albert_classify(m).classification == PSD) == is_psd(h)


# ---------------------------------------------------------------------------
# contraction decomposition


def test_contraction_zero_coupling(rng):
    d = float_gram(rng, 2, 2)
    m = Block2(hermitian(Matrix.identity(2, FLOAT)), Matrix.zeros(2, 2, FLOAT), d)
    k = contraction_decomposition(m)
    assert k.max_abs() <= 1e-12


def test_contraction_all_ones():
    k = contraction_decomposition(fblock([[1, 1], [1, 1]], 1))
    assert k.shape == (1, 1)
    np.testing.assert_allclose(abs(complex(k.entry(0, 0))), 1.0, atol=1e-10)


def test_contraction_random_gram(rng):
    from shortedop.sqroot import minimal_square_root

    for _ in range(50):
        m = random_psd_block2(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)),
                              backend=FLOAT)
        k = contraction_decomposition(m)
        ra = minimal_square_root(m.a)
        rd = minimal_square_root(m.d)
        recon = ra.r.adjoint() @ k @ rd.r
        assert (recon - m.b).max_abs() <= 1e-9 * (1.0 + m.b.max_abs())
        if k.data.size:
            assert np.linalg.svd(k.data, compute_uv=False)[0] <= 1 + 1e-9


# ---------------------------------------------------------------------------
# quotient identity


def test_quotient_all_ones():
    ones = hermitian(Matrix.from_rows([[1, 1, 1]] * 3, RATIONAL))
    rep = quotient_formula_check(Block3.from_matrix(ones, 1, 1))
    assert rep.holds
    assert rep.full_over_a.is_zero()
    assert rep.direct.is_zero()


def test_quotient_block_diagonal(rng):
    a = rational_gram(rng, 2, 2)
    d = rational_gram(rng, 2, 1)
    d1 = rational_gram(rng, 1, 1)
    m3 = Block3(
        a=a, b=Matrix.zeros(2, 2, RATIONAL), b_x=Matrix.zeros(2, 1, RATIONAL),
        d=d, b_y=Matrix.zeros(2, 1, RATIONAL), d_1=d1,
    )
    rep = quotient_formula_check(m3)
    assert rep.holds
    assert rep.direct.equals(d1)


def test_quotient_random_rational(rng):
    for _ in range(30):
        dims = [int(rng.integers(1, 3)) for _ in range(3)]
        n = sum(dims)
        gram = rational_gram(rng, n, int(rng.integers(1, n + 1)), span=2)
        rep = quotient_formula_check(Block3.from_matrix(gram, dims[0], dims[1]))
        assert rep.holds


def test_quotient_rejects_indefinite():
    bad = hermitian(Matrix.from_rows(
        [[1, 2, 0], [2, 1, 0], [0, 0, 1]], RATIONAL))
    with pytest.raises(NotPSDError):
        quotient_formula_check(Block3.from_matrix(bad, 1, 1))


# ---------------------------------------------------------------------------
# minimal completion and the order corollaries


def test_minimal_completion_zero_b(rng):
    a = rational_gram(rng, 2, 1)
    m = minimal_completion(a, Matrix.zeros(2, 2, RATIONAL))
    assert m.d.is_zero()


def test_minimal_completion_examples():
    ones = hermitian(Matrix.from_rows([[1, 1], [1, 1]], RATIONAL))
    m = minimal_completion(ones, Matrix.from_rows([[1], [1]], RATIONAL))
    assert m.d.entry(0, 0) == 1
    diag = hermitian(Matrix.from_rows([[1, 0], [0, 0]], RATIONAL))
    m2 = minimal_completion(diag, Matrix.from_rows([[1], [0]], RATIONAL))
    assert m2.d.entry(0, 0) == 1


def test_minimal_completion_is_psd_and_minimal(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        a = rational_gram(rng, n, int(rng.integers(0, n + 1)), span=2)
        b = a @ rational_matrix(rng, n, 2, span=2)
        mex = minimal_completion(a, b)
        assert is_psd(mex.assembled())
        bump = rational_gram(rng, 2, 2, span=2)
        other = Block2(a, b, hermitian(mex.d + bump))
        assert loewner_leq(mex.assembled(), other.assembled())


def test_shorted_below_source_and_kernel_inclusion(rng):
    for _ in range(30):
        m = random_psd_block2(rng, int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        full = m.assembled()
        res = schur_complement(m)
        assert loewner_leq(res.shorted_matrix(), full)
        ker_full = Subspace.from_columns(kernel_basis(full))
        ker_short = Subspace.from_columns(kernel_basis(res.shorted_matrix()))
        assert ker_short.contains(ker_full)


def test_shorted_monotone(rng):
    for _ in range(30):
        n_x, n_y = int(rng.integers(0, 3)), int(rng.integers(1, 3))
        m = random_psd_block2(rng, n_x, n_y)
        bump = Block2.from_matrix(rational_gram(rng, n_x + n_y,
                                                int(rng.integers(0, n_x + n_y + 1)),
                                                span=2), n_x)
        bigger = m + bump
        assert loewner_leq(schur_complement(m).sigma,
                           schur_complement(bigger).sigma)


def test_shorted_superadditive(rng):
    for _ in range(30):
        n_x, n_y = int(rng.integers(0, 3)), int(rng.integers(1, 3))
        m1 = random_psd_block2(rng, n_x, n_y)
        m2 = random_psd_block2(rng, n_x, n_y)
        lhs = hermitian(schur_complement(m1).sigma + schur_complement(m2).sigma)
        rhs = schur_complement(m1 + m2).sigma
        assert loewner_leq(lhs, rhs)


def test_range_of_shorted_is_range_meet_corner(rng):
    # PSD case: ran(shorted) equals ran(full) intersected with the Y corner
    for _ in range(30):
        n_x, n_y = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        m = random_psd_block2(rng, n_x, n_y)
        full = m.assembled()
        res = schur_complement(m)
        corner = Subspace.from_columns(y_corner_embedding(n_x, n_y, RATIONAL))
        meet = Subspace.from_columns(full).intersect(corner)
        ran_short = Subspace.from_columns(res.shorted_matrix())
        assert ran_short.equals(meet)


def test_positive_type_meet_inclusion_indefinite_corner(rng):
    # positive type only: inclusion of the meet in ran(shorted)
    for _ in range(20):
        n_x, n_y = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        a = rational_gram(rng, n_x, int(rng.integers(0, n_x + 1)), span=2)
        b = a @ rational_matrix(rng, n_x, n_y, span=2)
        d = hermitian((lambda r: (r + r.adjoint()).scale(Fraction(1, 2)))(
            rational_matrix(rng, n_y, n_y, span=2)))
        m = Block2(a, b, d)
        res = schur_complement(m)
        corner = Subspace.from_columns(y_corner_embedding(n_x, n_y, RATIONAL))
        meet = Subspace.from_columns(m.assembled()).intersect(corner)
        assert Subspace.from_columns(res.shorted_matrix()).contains(meet)


def test_shorted_is_maximal_corner_minorant(rng):
    # any diag(0, D1) below the matrix satisfies D1 <= sigma
    for _ in range(20):
        n_x, n_y = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        m = random_psd_block2(rng, n_x, n_y)
        sigma = schur_complement(m).sigma
        shaved = hermitian(sigma - rational_gram(rng, n_y,
                                                 int(rng.integers(0, n_y + 1)),
                                                 span=2))
        member = Block2(hermitian(Matrix.zeros(n_x, n_x, RATIONAL)),
                        Matrix.zeros(n_x, n_y, RATIONAL), shaved)
        assert loewner_leq(member.assembled(), m.assembled())
        assert loewner_leq(shaved, sigma)


def test_corner_minorant_characterizes_positive_type(rng):
    # sigma itself witnesses the existence direction
    m = random_psd_block2(rng, 2, 2)
    sigma = schur_complement(m).sigma
    witness = Block2(hermitian(Matrix.zeros(2, 2, RATIONAL)),
                     Matrix.zeros(2, 2, RATIONAL), sigma)
    assert is_psd(hermitian(m.assembled() - witness.assembled()))
    # and conversely a Hermitian corner minorant forces positive type
    from shortedop.schur import pair_status

    ok, _ = pair_status(m)
    assert ok


# ---------------------------------------------------------------------------
# chains


def test_chain_constant(rng):
    m = random_psd_block2(rng, 1, 2)
    rep = infimum_of_chain([m, m, m])
    assert rep.limit_positive_type and rep.dominated_by_chain


def test_chain_harmonic_example():
    chain = []
    for n in range(1, 8):
        d = hermitian(Matrix.from_rows([[1 + Fraction(1, n)]], RATIONAL))
        chain.append(Block2(hermitian(Matrix.from_rows([[1]], RATIONAL)),
                            Matrix.from_rows([[1]], RATIONAL), d))
    limit = Block2.from_matrix(
        hermitian(Matrix.from_rows([[1, 1], [1, 1]], RATIONAL)), 1)
    rep = infimum_of_chain(chain, limit=limit)
    assert rep.limit_positive_type
    assert rep.shorted_limit.sigma.is_zero()
    assert rep.dominated_by_chain
    for n, m in enumerate(chain, start=1):
        assert schur_complement(m).sigma.entry(0, 0) == Fraction(1, n)


def test_chain_limit_outside_positive_type():
    chain = []
    for n in range(1, 6):
        a = hermitian(Matrix.from_rows([[Fraction(1, n)]], RATIONAL))
        chain.append(Block2(a, Matrix.from_rows([[1]], RATIONAL),
                            hermitian(Matrix.from_rows([[0]], RATIONAL))))
    limit = Block2(hermitian(Matrix.from_rows([[0]], RATIONAL)),
                   Matrix.from_rows([[1]], RATIONAL),
                   hermitian(Matrix.from_rows([[0]], RATIONAL)))
    rep = infimum_of_chain(chain, limit=limit)
    assert not rep.limit_positive_type
    # the complements dive: sigma_n = -n
    sigmas = [schur_complement(m).sigma.entry(0, 0) for m in chain]
    assert sigmas == [-n for n in range(1, 6)]


def test_chain_rejects_non_decreasing(rng):
    small = random_psd_block2(rng, 1, 1, rank=1)
    grown = small + random_psd_block2(rng, 1, 1, rank=2)
    with pytest.raises(ChainError):
        infimum_of_chain([small, grown])


def test_chain_lower_bounds(rng):
    m = random_psd_block2(rng, 1, 2)
    sigma = schur_complement(m).sigma
    bound = hermitian(sigma - rational_gram(rng, 2, 1, span=2))
    rep = infimum_of_chain([m, m], lower_bounds=[bound])
    assert rep.bounds_dominated
