from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdv.core import (
    InconsistentSystem,
    MultiPoly,
    RatMatrix,
    as_scalar,
    mat_kernel,
    mat_rank,
    mat_solve,
    parse_scalar,
    poly_mul,
    scalar_str,
)

small = st.integers(-6, 6)
rationals = st.fractions(max_denominator=7).filter(lambda q: abs(q) < 20)


def matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    ).map(RatMatrix)


def test_scalars_are_exact():
    assert as_scalar(Fraction(4, 2)) == 2 and type(as_scalar(Fraction(4, 2))) is int
    with pytest.raises(TypeError):
        as_scalar(0.5)
    assert scalar_str(3) == "3/1"
    assert scalar_str(Fraction(-1, 2)) == "-1/2"
    assert parse_scalar("-6/4") == Fraction(-3, 2)


@given(rationals)
def test_scalar_text_round_trip(q):
    assert parse_scalar(scalar_str(q)) == q


def test_rank_and_kernel_examples():
    m = RatMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert mat_rank(m) == 2
    (v,) = mat_kernel(m)
    assert v == (-1, -1, 1)
    assert mat_rank(RatMatrix.zeros(3, 4)) == 0
    assert mat_kernel(RatMatrix.identity(3)) == []


def _det(rows):
    # cofactor expansion: an oracle independent of elimination
    if len(rows) == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(len(rows)) if rows[0][j])


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(m):
    kernel = mat_kernel(m)
    assert mat_rank(m) + len(kernel) == m.cols
    for v in kernel:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m.entries)
    assert mat_rank(m) == mat_rank(m.transpose())


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: st.lists(st.lists(small, min_size=k, max_size=k), min_size=k, max_size=k)))
def test_full_rank_iff_nonzero_determinant(rows):
    assert (mat_rank(RatMatrix(rows)) == len(rows)) == (_det(rows) != 0)


def test_kernel_basis_uses_unit_free_variables():
    m = RatMatrix([[1, 1, 0, 2]])
    assert mat_kernel(m) == [(-1, 1, 0, 0), (0, 0, 1, 0), (-2, 0, 0, 1)]


def test_solve_and_inconsistency():
    m = RatMatrix([[2, 1], [1, 3]])
    assert mat_solve(m, [3, 5]) == (Fraction(4, 5), Fraction(7, 5))
    with pytest.raises(InconsistentSystem):
        mat_solve(RatMatrix([[1, 1], [2, 2]]), [1, 3])


def test_matrix_algebra():
    a = RatMatrix([[1, 2], [3, 4]])
    b = RatMatrix([[0, 1], [1, 0]])
    assert a @ b == RatMatrix([[2, 1], [4, 3]])
    assert (a - a).is_zero()
    assert a.trace() == 5
    assert RatMatrix.identity(3).scale(Fraction(2, 3)).scalar_value() == Fraction(2, 3)
    assert a.scalar_value() is None
    with pytest.raises(ValueError):
        a @ RatMatrix([[1, 2, 3]])


VARS = ("a", "b")


def polys():
    return st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=5).map(
        lambda t: MultiPoly(VARS, t))


@settings(max_examples=80)
@given(polys(), polys(), polys())
def test_polynomial_ring_laws(p, q, r):
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@settings(max_examples=80)
@given(polys(), polys())
def test_leibniz_rule(p, q):
    for i in range(2):
        assert (p * q).derivative(i) == p.derivative(i) * q + p * q.derivative(i)


def test_polynomial_text_and_variable_mismatch():
    p = MultiPoly(VARS, {(1, 0): 2, (0, 2): Fraction(-1, 3)})
    assert str(p) == "-1/3*a^0*b^2 + 2/1*a^1*b^0"
    assert str(MultiPoly.zero(VARS)) == "0"
    with pytest.raises(ValueError):
        poly_mul(p, MultiPoly(("c",), {(1,): 1}))
    assert MultiPoly.gen(VARS, "b") ** 3 == MultiPoly.monomial(VARS, (0, 3))
    assert p.weighted_degrees((1, 2)) == {1, 4}
