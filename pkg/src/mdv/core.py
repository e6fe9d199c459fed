"""Exact rational scalars, sparse commutative polynomials and dense rational matrices.

Scalars are Python ``int`` or ``fractions.Fraction`` values; both are exact and
interoperate, and integral values are kept as ``int`` on the hot paths because
big-int arithmetic is much cheaper than ``Fraction`` arithmetic. Floats are
rejected everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Scalar = Rational
Monomial = Tuple[int, ...]


def as_scalar(value) -> Scalar:
    """Coerce ``value`` to an exact scalar; accepts ints, Fractions and "p/q" strings."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_scalar(Fraction(value.strip()))
    if isinstance(value, Rational):
        return as_scalar(Fraction(value.numerator, value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


def scalar_str(value: Scalar) -> str:
    """Serialize a scalar as "p/q" (the denominator is always written)."""
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(text: str) -> Scalar:
    return as_scalar(text)


def _bit_cost(value: Scalar) -> int:
    q = Fraction(value)
    return abs(q.numerator).bit_length() + q.denominator.bit_length()


# ---------------------------------------------------------------------------
# Matrices


class RatMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("_rows", "_shape")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("a matrix needs at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged rows")
        self._rows = data
        self._shape = (len(data), width)

    @classmethod
    def _trusted(cls, rows: Tuple[Tuple[Scalar, ...], ...]) -> "RatMatrix":
        m = object.__new__(cls)
        m._rows = rows
        m._shape = (len(rows), len(rows[0]))
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls._trusted(tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        return cls._trusted(
            tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size))
        )

    @property
    def rows(self) -> int:
        return self._shape[0]

    @property
    def cols(self) -> int:
        return self._shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._shape

    @property
    def entries(self) -> Tuple[Tuple[Scalar, ...], ...]:
        return self._rows

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"RatMatrix([{body}])"

    def _check_shape(self, other: "RatMatrix") -> None:
        if self._shape != other._shape:
            raise ValueError(f"shape mismatch {self._shape} vs {other._shape}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_shape(other)
        return RatMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_shape(other)
        return RatMatrix._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._trusted(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c) -> "RatMatrix":
        c = as_scalar(c)
        return RatMatrix._trusted(tuple(tuple(c * a for a in r) for r in self._rows))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self._shape} by {other._shape}")
        cols = tuple(zip(*other._rows))
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum(a * col[k] for k, a in nz) for col in cols))
        return RatMatrix._trusted(tuple(out))

    def transpose(self) -> "RatMatrix":
        return RatMatrix._trusted(tuple(zip(*self._rows)))

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum(self._rows[i][i] for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def scalar_value(self):
        """Return c if the matrix equals c times the identity, else None."""
        if self.rows != self.cols:
            return None
        c = self._rows[0][0]
        for i, r in enumerate(self._rows):
            for j, a in enumerate(r):
                if a != (c if i == j else 0):
                    return None
        return c

    def flatten(self) -> Tuple[Scalar, ...]:
        return tuple(a for r in self._rows for a in r)

    @classmethod
    def from_flat(cls, values: Sequence, rows: int, cols: int) -> "RatMatrix":
        if len(values) != rows * cols:
            raise ValueError("wrong number of entries")
        return cls([values[i * cols:(i + 1) * cols] for i in range(rows)])

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(r[j] for r in self._rows)


def _rref(rows: Sequence[Sequence[Scalar]], ncols: int):
    """Gauss-Jordan elimination; returns (reduced rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots = []
    top = 0
    for c in range(ncols):
        if top == len(work):
            break
        candidates = [i for i in range(top, len(work)) if work[i][c]]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: _bit_cost(work[i][c]))
        work[top], work[best] = work[best], work[top]
        prow = work[top]
        inv = Fraction(1) / prow[c]
        if inv != 1:
            prow = [as_scalar(a * inv) if a else 0 for a in prow]
            work[top] = prow
        nz = [k for k in range(c, ncols) if prow[k]]
        for i in range(len(work)):
            if i == top:
                continue
            factor = work[i][c]
            if factor:
                row = work[i]
                for k in nz:
                    row[k] -= factor * prow[k]
        pivots.append(c)
        top += 1
    return work[:top], pivots


def mat_rank(m: RatMatrix) -> int:
    return len(_rref(m.entries, m.cols)[1])


def mat_kernel(m: RatMatrix):
    """Basis of the right null space, one vector per free column.

    Vectors follow the reduced-echelon convention: entry 1 at the free column,
    zeros at the other free columns, so the basis is canonical.
    """
    reduced, pivots = _rref(m.entries, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [0] * m.cols
        v[free] = 1
        for row, pc in zip(reduced, pivots):
            if row[free]:
                v[pc] = as_scalar(-row[free])
        basis.append(tuple(v))
    return basis


class InconsistentSystem(ValueError):
    pass


def mat_solve(m: RatMatrix, rhs: Sequence) -> Tuple[Scalar, ...]:
    """One solution of m·v = rhs (free variables set to zero)."""
    if len(rhs) != m.rows:
        raise ValueError("right-hand side has the wrong length")
    aug = [list(r) + [as_scalar(b)] for r, b in zip(m.entries, rhs)]
    reduced, pivots = _rref(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        raise InconsistentSystem("system has no solution")
    v = [0] * m.cols
    for row, pc in zip(reduced, pivots):
        v[pc] = as_scalar(row[m.cols])
    return tuple(v)


# ---------------------------------------------------------------------------
# Polynomials


class MultiPoly:
    """Sparse commutative polynomial over named variables."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, object] = ()):
        self.variables = tuple(variables)
        clean: Dict[Monomial, Scalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        k = len(self.variables)
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != k or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for variables {self.variables}")
            c = as_scalar(c)
            if c:
                total = clean.get(mono, 0) + c
                if total:
                    clean[mono] = total
                else:
                    clean.pop(mono, None)
        self._terms = clean

    @classmethod
    def _trusted(cls, variables: Tuple[str, ...], terms: Dict[Monomial, Scalar]) -> "MultiPoly":
        p = object.__new__(cls)
        p.variables = variables
        p._terms = terms
        return p

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls._trusted(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], c=1) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def gen(cls, variables: Sequence[str], name_or_index) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        mono = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls._trusted(variables, {mono: 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(variables, {tuple(exps): c})

    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, mono: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(mono), 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.variables, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self._terms.items())))

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        return MultiPoly.constant(self.variables, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            t = out.get(m, 0) + c
            if t:
                out[m] = t
            else:
                out.pop(m, None)
        return MultiPoly._trusted(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._trusted(self.variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = as_scalar(c)
        if not c:
            return MultiPoly.zero(self.variables)
        return MultiPoly._trusted(self.variables, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "MultiPoly":
        return self.scale(other)

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> "MultiPoly":
        out: Dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = out.get(mm, 0) + e * c
        return MultiPoly._trusted(self.variables, {m: c for m, c in out.items() if c})

    def total_degree(self) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        return max(sum(m) for m in self._terms)

    def weighted_degrees(self, weights: Sequence[int]) -> set:
        return {sum(w * e for w, e in zip(weights, m)) for m in self._terms}

    def sorted_terms(self):
        return sorted(self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [scalar_str(c)] + [f"{v}^{e}" for v, e in zip(self.variables, mono)]
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self.sorted_terms()})"


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.variables != q.variables:
        raise ValueError(f"variable mismatch {p.variables} vs {q.variables}")
    out: Dict[Monomial, Scalar] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return MultiPoly._trusted(p.variables, {m: c for m, c in out.items() if c})
