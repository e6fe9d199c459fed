"""Differential operators of the truncated polynomial ring O_n = k[x]/(x^(n+1)).

Every endomorphism of O_n is a differential operator, so an operator is a
square matrix in the basis (1, x, ..., x^n): column j holds the image of x^j.
Commutators with multiplication by x^l are computed by shifting rows and
columns instead of multiplying matrices, since multiplication by x^l just
shifts the basis.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, List, Sequence, Tuple

from .core import RatMatrix, as_scalar, mat_kernel, scalar_str, parse_scalar


class TruncPoly:
    """Element of O_n; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence = ()):
        if n < 0:
            raise ValueError("n must be nonnegative")
        cs = [as_scalar(c) for c in coeffs]
        # anything beyond x^n is zero in O_n
        cs = (cs + [0] * (n + 1))[: n + 1]
        self.n = n
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, n: int, l: int, c=1) -> "TruncPoly":
        coeffs = [0] * (n + 1)
        if l <= n:
            coeffs[l] = c
        return cls(n, coeffs)

    @classmethod
    def x(cls, n: int) -> "TruncPoly":
        return cls.monomial(n, 1)

    def _check(self, other: "TruncPoly") -> None:
        if self.n != other.n:
            raise ValueError(f"O_{self.n} vs O_{other.n}")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TruncPoly":
        return TruncPoly(self.n, [-a for a in self.coeffs])

    def __mul__(self, other) -> "TruncPoly":
        if not isinstance(other, TruncPoly):
            return TruncPoly(self.n, [as_scalar(other) * a for a in self.coeffs])
        self._check(other)
        out = [0] * (self.n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncPoly(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self):
        """x-adic valuation, or None for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __str__(self) -> str:
        terms = [f"{scalar_str(c)}*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"

    def __repr__(self) -> str:
        return f"TruncPoly(n={self.n}: {self})"


class Endo:
    """k-linear endomorphism of O_n.

    ``a * b`` is composition (apply b first), ``c * a`` scales by a rational.
    """

    __slots__ = ("n", "mat")

    def __init__(self, n: int, mat: RatMatrix):
        if mat.shape != (n + 1, n + 1):
            raise ValueError(f"O_{n} needs a {(n + 1, n + 1)} matrix, got {mat.shape}")
        self.n = n
        self.mat = mat

    @classmethod
    def _from_rows(cls, n: int, rows) -> "Endo":
        e = object.__new__(cls)
        e.n = n
        e.mat = RatMatrix._trusted(rows)
        return e

    @classmethod
    def identity(cls, n: int) -> "Endo":
        return cls(n, RatMatrix.identity(n + 1))

    @classmethod
    def zero(cls, n: int) -> "Endo":
        return cls(n, RatMatrix.zeros(n + 1, n + 1))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Endo":
        """Matrix unit sending x^j to x^i."""
        rows = [[0] * (n + 1) for _ in range(n + 1)]
        rows[i][j] = 1
        return cls(n, RatMatrix(rows))

    @property
    def rows(self):
        return self.mat.entries

    def _check(self, other: "Endo") -> None:
        if self.n != other.n:
            raise ValueError(f"operators on O_{self.n} and O_{other.n}")

    def __add__(self, other: "Endo") -> "Endo":
        self._check(other)
        return Endo(self.n, self.mat + other.mat)

    def __sub__(self, other: "Endo") -> "Endo":
        self._check(other)
        return Endo(self.n, self.mat - other.mat)

    def __neg__(self) -> "Endo":
        return Endo(self.n, -self.mat)

    def __mul__(self, other) -> "Endo":
        if isinstance(other, Endo):
            self._check(other)
            return Endo(self.n, self.mat @ other.mat)
        return Endo(self.n, self.mat.scale(other))

    def __rmul__(self, c) -> "Endo":
        return Endo(self.n, self.mat.scale(c))

    def __pow__(self, k: int) -> "Endo":
        result = Endo.identity(self.n)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Endo):
            return NotImplemented
        return self.n == other.n and self.mat == other.mat

    def __hash__(self) -> int:
        return hash((self.n, self.mat))

    def __repr__(self) -> str:
        return f"Endo(n={self.n}, {self.mat!r})"

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def trace(self):
        return self.mat.trace()

    def apply(self, f: TruncPoly) -> TruncPoly:
        if f.n != self.n:
            raise ValueError("size mismatch")
        return TruncPoly(self.n, [sum(a * c for a, c in zip(row, f.coeffs)) for row in self.rows])

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[scalar_str(a) for a in row] for row in self.rows]}

    @classmethod
    def from_json(cls, record: dict) -> "Endo":
        n = int(record["n"])
        return cls(n, RatMatrix([[parse_scalar(a) for a in row] for row in record["entries"]]))


def commutator(a, b):
    return a * b - b * a


# ---------------------------------------------------------------------------
# ad calculus


def _ad_monomial_rows(rows, l: int):
    """Rows of [x^l, d] = X^l d - d X^l, computed by shifting."""
    size = len(rows)
    out = []
    for i in range(size):
        upper = rows[i - l] if i >= l else None
        row = rows[i]
        new = []
        for j in range(size):
            v = upper[j] if upper is not None else 0
            if j + l < size:
                v = v - row[j + l]
            new.append(v)
        out.append(tuple(new))
    return tuple(out)


def mult_op(f: TruncPoly) -> Endo:
    n = f.n
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        for i in range(j, n + 1):
            rows[i][j] = f.coeffs[i - j]
    return Endo(n, RatMatrix(rows))


def ad_f(f: TruncPoly, d: Endo) -> Endo:
    """[f(x), d]."""
    if f.n != d.n:
        raise ValueError(f"O_{f.n} function against an operator on O_{d.n}")
    size = d.n + 1
    acc = [[0] * size for _ in range(size)]
    for l, c in enumerate(f.coeffs):
        if not c or l == 0:
            continue
        shifted = _ad_monomial_rows(d.rows, l)
        for i in range(size):
            ai, si = acc[i], shifted[i]
            for j in range(size):
                if si[j]:
                    ai[j] += c * si[j]
    return Endo._from_rows(d.n, tuple(tuple(r) for r in acc))


def ad_x(d: Endo) -> Endo:
    return Endo._from_rows(d.n, _ad_monomial_rows(d.rows, 1))


def ad_x_pow(d: Endo, k: int) -> Endo:
    if k < 0:
        raise ValueError("negative power of ad_x")
    rows = d.rows
    for _ in range(k):
        rows = _ad_monomial_rows(rows, 1)
    return Endo._from_rows(d.n, rows)


def _is_zero_rows(rows) -> bool:
    return not any(any(r) for r in rows)


def order_of(d: Endo) -> int:
    """Smallest p with ad_x^(p+1)(d) = 0."""
    rows = d.rows
    for p in range(2 * d.n + 1):
        rows = _ad_monomial_rows(rows, 1)
        if _is_zero_rows(rows):
            return p
    raise RuntimeError(f"ad_x^{2 * d.n + 1} did not vanish on O_{d.n}")


def _column0(d: Endo) -> TruncPoly:
    return TruncPoly(d.n, [row[0] for row in d.rows])


def symbol_in_degree(d: Endo, p: int) -> TruncPoly:
    """(1/p!) ad_x^p(d) as an element of O_n, for d of order at most p."""
    top = ad_x_pow(d, p)
    if not ad_x(top).is_zero():
        raise ValueError(f"operator has order greater than {p}")
    # top commutes with x, so it is multiplication by top(1)
    return _column0(top) * Fraction(1, factorial(p))


class SymbolValue:
    __slots__ = ("order", "value")

    def __init__(self, order: int, value: TruncPoly):
        self.order = order
        self.value = value

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolValue):
            return NotImplemented
        return (self.order, self.value) == (other.order, other.value)

    def __repr__(self) -> str:
        return f"SymbolValue(order={self.order}, value={self.value!r})"


def symbol_of(d: Endo) -> SymbolValue:
    if d.is_zero():
        raise ValueError("the zero operator has no principal symbol")
    p = order_of(d)
    return SymbolValue(p, symbol_in_degree(d, p))


@lru_cache(maxsize=None)
def _filtration_table(n: int) -> Tuple[Tuple[Endo, ...], ...]:
    """Kernel bases of ad_x^(p+1) on End(O_n) for p = 0..2n."""
    size = n + 1
    dim = size * size
    # images[k] = ad_x^power applied to the k-th matrix unit (row-major)
    images = [Endo.unit(n, k // size, k % size).rows for k in range(dim)]
    table = []
    for p in range(2 * n + 1):
        images = [_ad_monomial_rows(r, 1) for r in images]
        columns = [tuple(a for row in r for a in row) for r in images]
        op = RatMatrix._trusted(tuple(zip(*columns)))
        basis = []
        for v in mat_kernel(op):
            rows = tuple(tuple(v[i * size:(i + 1) * size]) for i in range(size))
            basis.append(Endo._from_rows(n, rows))
        table.append(tuple(basis))
    return tuple(table)


def filtration_basis(n: int, p: int) -> List[Endo]:
    """Basis of D^p(O_n), the operators killed by ad_x^(p+1)."""
    if n < 0 or p < 0:
        raise ValueError("n and p must be nonnegative")
    table = _filtration_table(n)
    return list(table[min(p, 2 * n)])


def filtration_dims(n: int) -> List[int]:
    return [len(filtration_basis(n, p)) for p in range(2 * n + 1)]


@lru_cache(maxsize=None)
def v_of(n: int, p: int) -> int:
    """Valuation generating the ideal ad_x^p(D^p) of O_n."""
    if not 1 <= p <= 2 * n:
        raise ValueError(f"p={p} outside 1..{2 * n}")
    vals = []
    for b in filtration_basis(n, p):
        v = symbol_in_degree(b, p).valuation()
        if v is not None:
            vals.append(v)
    return min(vals)


def v_table(n: int) -> List[int]:
    return [v_of(n, p) for p in range(1, 2 * n + 1)]


def _monomial_operator(n: int, action: Callable[[int], Dict[int, object]]) -> Endo:
    """Operator whose column j is action(j) = {exponent: coefficient}, truncated."""
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        for i, c in action(j).items():
            if 0 <= i <= n:
                rows[i][j] += as_scalar(c)
    return Endo(n, RatMatrix(rows))


def distinguished(n: int) -> Tuple[Endo, Endo, Endo]:
    """(x, -x d/dx + n/2, x d^2/dx^2 - n d/dx) on O_n."""
    half_n = Fraction(n, 2)
    d0 = _monomial_operator(n, lambda j: {j + 1: 1})
    d1 = _monomial_operator(n, lambda j: {j: half_n - j})
    d2 = _monomial_operator(n, lambda j: {j - 1: j * (j - 1) - n * j} if j else {})
    return d0, d1, d2


class NotScalar(ArithmeticError):
    pass


def casimir_scalar(n: int):
    d0, d1, d2 = distinguished(n)
    m = d1 * d1 - Fraction(1, 2) * (d0 * d2 + d2 * d0)
    c = m.mat.scalar_value()
    if c is None:
        raise NotScalar(f"Casimir combination is not scalar on O_{n}")
    return as_scalar(c)


def grothendieck_check(d: Endo, p: int, fs: Sequence[TruncPoly]) -> bool:
    """True iff [f_0, [f_1, ..., [f_p, d]...]] vanishes."""
    if len(fs) != p + 1:
        raise ValueError(f"need {p + 1} functions, got {len(fs)}")
    out = d
    for f in reversed(fs):
        out = ad_f(f, out)
    return out.is_zero()


def random_endo(n: int, rng: random.Random, lo: int = -9, hi: int = 9) -> Endo:
    rows = tuple(tuple(rng.randint(lo, hi) for _ in range(n + 1)) for _ in range(n + 1))
    return Endo._from_rows(n, rows)


def random_of_order(n: int, p: int, rng: random.Random) -> Endo:
    """Random integer combination of the D^p basis (order at most p)."""
    out = Endo.zero(n)
    for b in filtration_basis(n, p):
        c = rng.randint(-9, 9)
        if c:
            out = out + c * b
    return out
