import random
from fractions import Fraction
from math import ceil, comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdv import diffops as do
from mdv.core import RatMatrix, mat_rank
from mdv.diffops import Endo, TruncPoly


def x_matrix(n):
    return RatMatrix([[1 if i == j + 1 else 0 for j in range(n + 1)] for i in range(n + 1)])


def naive_ad_x(d: Endo) -> Endo:
    # [x, d] through full matrix products
    X = x_matrix(d.n)
    return Endo(d.n, X @ d.mat - d.mat @ X)


def falling(j, k):
    return factorial(j) // factorial(j - k) if j >= k else 0


def d_op(n, k=1):
    """d^k/dx^k on O_n from its action on monomials."""
    return Endo(n, RatMatrix([[falling(j, k) if i == j - k else 0 for j in range(n + 1)] for i in range(n + 1)]))


def endos(n_max=4):
    return st.integers(0, n_max).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n + 1, max_size=n + 1),
                           min_size=n + 1, max_size=n + 1).map(lambda rows: Endo(n, RatMatrix(rows))))


@settings(max_examples=60, deadline=None)
@given(endos())
def test_ad_x_matches_matrix_commutator(d):
    assert do.ad_x(d) == naive_ad_x(d)
    assert do.ad_x(d) == do.commutator(do.mult_op(TruncPoly.x(d.n)), d)


@settings(max_examples=40, deadline=None)
@given(endos(), st.integers(0, 3))
def test_ad_of_monomial_multiplication(d, l):
    f = TruncPoly.monomial(d.n, l)
    assert do.ad_f(f, d) == do.commutator(do.mult_op(f), d)


@settings(max_examples=60, deadline=None)
@given(endos())
def test_order_is_first_vanishing_power(d):
    p = do.order_of(d)
    assert do.ad_x_pow(d, p + 1).is_zero()
    if p:
        assert not do.ad_x_pow(d, p).is_zero()


def test_multiplication_and_truncation():
    f = TruncPoly(2, [1, 2, 3])
    assert f * TruncPoly.x(2) == TruncPoly(2, [0, 1, 2])
    assert TruncPoly.monomial(2, 5).is_zero()
    assert do.mult_op(f).apply(TruncPoly(2, [1])) == f
    assert TruncPoly(3, [0, 0, 4]).valuation() == 2
    assert TruncPoly(3).valuation() is None


def euler_power(n, k):
    """x^k d^k/dx^k, which preserves (x^(n+1)) and so acts on O_n."""
    return do.mult_op(TruncPoly.monomial(n, k)) * d_op(n, k)


def test_derivation_orders():
    for n in range(1, 6):
        assert do.order_of(Endo.identity(n)) == 0
        for k in range(1, n + 1):
            assert do.order_of(euler_power(n, k)) == k
        assert do.order_of(Endo.unit(n, 0, n)) == 2 * n


def test_order_bound_is_enforced():
    # a matrix that is not an operator on O_n cannot come from the constructor, so
    # the bound is checked on every unit of the maximal size
    for n in range(4):
        assert max(do.order_of(Endo.unit(n, i, j)) for i in range(n + 1) for j in range(n + 1)) == 2 * n


def expected_dims(n):
    v = [0] + [ceil(q / 2) for q in range(1, 2 * n + 1)]
    out, total = [], 0
    for q in range(2 * n + 1):
        total += n - v[q] + 1
        out.append(total)
    return out


def brute_dims(n):
    """Kernel dimensions of ad_x^(p+1) as (n+1)^2-square matrices built from matrix commutators."""
    size = n + 1
    units = [Endo.unit(n, k // size, k % size) for k in range(size * size)]
    dims, images = [], units
    for p in range(2 * n + 1):
        images = [naive_ad_x(u) for u in images]
        op = RatMatrix([list(col) for col in zip(*[u.mat.flatten() for u in images])])
        dims.append(size * size - mat_rank(op))
    return dims


@pytest.mark.parametrize("n", range(0, 5))
def test_filtration_dims_against_brute_force(n):
    assert do.filtration_dims(n) == brute_dims(n) == expected_dims(n)


def test_filtration_examples():
    assert do.filtration_dims(2) == [3, 5, 7, 8, 9]
    assert do.filtration_dims(0) == [1]
    assert len(do.filtration_basis(2, 10)) == 9
    for b in do.filtration_basis(3, 2):
        assert do.order_of(b) <= 2


@pytest.mark.parametrize("n", range(1, 9))
def test_v_table(n):
    vt = do.v_table(n)
    assert vt == [ceil(p / 2) for p in range(1, 2 * n + 1)]
    assert sum(vt) == n * (n + 1)
    with pytest.raises(ValueError):
        do.v_of(n, 0)
    with pytest.raises(ValueError):
        do.v_of(n, 2 * n + 1)


def test_v_table_example():
    assert do.v_table(3) == [1, 1, 2, 2, 3, 3]


def test_distinguished_operators_from_formulas():
    for n in range(0, 6):
        half = Fraction(n, 2)
        X, D, D2 = do.mult_op(TruncPoly.x(n)), d_op(n), d_op(n, 2)
        d0, d1, d2 = do.distinguished(n)
        assert d0 == X
        assert d1 == -1 * X * D + half * Endo.identity(n)
        assert d2 == X * D2 - n * D


def test_distinguished_n1_matrices():
    d0, d1, d2 = do.distinguished(1)
    assert d0.to_json()["entries"] == [["0/1", "0/1"], ["1/1", "0/1"]]
    assert d1.to_json()["entries"] == [["1/2", "0/1"], ["0/1", "-1/2"]]
    assert d2.to_json()["entries"] == [["0/1", "-1/1"], ["0/1", "0/1"]]
    assert Endo.from_json(d2.to_json()) == d2


@pytest.mark.parametrize("n", range(0, 17))
def test_casimir_scalar(n):
    assert do.casimir_scalar(n) == Fraction(n * (n + 2), 4)


@pytest.mark.parametrize("n", range(1, 9))
def test_sharp_nilpotency(n):
    d0, _, d2 = do.distinguished(n)
    assert do.ad_x_pow(d2 ** n, 2 * n) == factorial(2 * n) * d0 ** n
    assert not (d0 ** n).is_zero()


def test_symbols_of_distinguished_and_derivatives():
    for n in range(1, 6):
        x = TruncPoly.x(n)
        for p, op in enumerate(do.distinguished(n)):
            assert do.symbol_of(op) == do.SymbolValue(p, x)
        # (1/k!) ad_x^k (x^k d^k) = (-x)^k
        for k in range(1, n + 1):
            assert do.symbol_of(euler_power(n, k)) == do.SymbolValue(k, TruncPoly.monomial(n, k, (-1) ** k))
    with pytest.raises(ValueError):
        do.symbol_of(Endo.zero(2))


@pytest.mark.parametrize("n", range(0, 5))
def test_symbol_multiplicativity(n):
    rng = random.Random(f"mult-{n}")
    for _ in range(40):
        a = do.random_of_order(n, rng.randint(0, 2 * n), rng)
        b = do.random_of_order(n, rng.randint(0, 2 * n), rng)
        if a.is_zero() or b.is_zero():
            continue
        sa, sb = do.symbol_of(a), do.symbol_of(b)
        top = do.ad_x_pow(a * b, sa.order + sb.order)
        # the leading commutator of a product is the product of leading commutators, up to a binomial
        assert top == comb(sa.order + sb.order, sa.order) * (do.ad_x_pow(a, sa.order) * do.ad_x_pow(b, sb.order))
        assert top.apply(TruncPoly(n, [1])) * Fraction(1, factorial(sa.order + sb.order)) == sa.value * sb.value


@pytest.mark.parametrize("n", range(0, 4))
def test_grothendieck_equivalence(n):
    rng = random.Random(f"groth-{n}")
    for _ in range(25):
        d = do.random_endo(n, rng)
        p = do.order_of(d)
        fs = [TruncPoly(n, [rng.randint(-3, 3) for _ in range(n + 1)]) for _ in range(p + 1)]
        assert do.grothendieck_check(d, p, fs)
        if p:
            assert not do.grothendieck_check(d, p - 1, [TruncPoly.x(n)] * p)
    with pytest.raises(ValueError):
        do.grothendieck_check(Endo.identity(2), 1, [TruncPoly.x(2)])


def test_endo_algebra():
    n = 3
    D = d_op(n)
    X = do.mult_op(TruncPoly.x(n))
    assert D * X - X * D == Endo.identity(n) - Endo.unit(n, n, n) * (n + 1)
    assert (D ** (n + 1)).is_zero()
    assert (2 * D).trace() == 0
    with pytest.raises(ValueError):
        D + Endo.identity(2)
