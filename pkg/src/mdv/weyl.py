"""One-variable Weyl algebra in normal form sum c * x^a * D^b.

Two copies are used: the ``line`` side, filtered by order in D, and the
``dual_line`` side, filtered by the degree of the polynomial coefficients.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Dict, Tuple

from .core import MultiPoly, RatMatrix, as_scalar, scalar_str
from .diffops import Endo

LINE = "line"
DUAL = "dual_line"
SIDES = (LINE, DUAL)

_NAMES = {LINE: ("x", "D"), DUAL: ("xh", "Dh")}
SYMBOL_VARS = {LINE: ("x0", "x1"), DUAL: ("xh0", "xh1")}


class NotDescendable(ValueError):
    """The operator does not preserve the ideal (x^(n+1)); ``witness`` is the offending m."""

    def __init__(self, witness: int, image: Dict[int, object], n: int):
        self.witness = witness
        self.image = image
        self.n = n
        shown = " + ".join(f"{scalar_str(c)}*x^{e}" for e, c in sorted(image.items()))
        super().__init__(f"image of x^{witness} is {shown}, not in (x^{n + 1})")


class WeylOp:
    __slots__ = ("side", "_terms")

    def __init__(self, side: str, terms=()):
        if side not in SIDES:
            raise ValueError(f"unknown side {side!r}")
        self.side = side
        clean: Dict[Tuple[int, int], object] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for (a, b), c in items:
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            c = as_scalar(c)
            t = clean.get((a, b), 0) + c
            if t:
                clean[(a, b)] = t
            else:
                clean.pop((a, b), None)
        self._terms = clean

    @classmethod
    def one(cls, side: str = LINE) -> "WeylOp":
        return cls(side, {(0, 0): 1})

    @classmethod
    def zero(cls, side: str = LINE) -> "WeylOp":
        return cls(side)

    @classmethod
    def x(cls, side: str = LINE) -> "WeylOp":
        return cls(side, {(1, 0): 1})

    @classmethod
    def d(cls, side: str = LINE) -> "WeylOp":
        return cls(side, {(0, 1): 1})

    @property
    def terms(self) -> Dict[Tuple[int, int], object]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "WeylOp") -> None:
        if self.side != other.side:
            raise ValueError(f"side mismatch: {self.side} vs {other.side}")

    def _coerce(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            self._check(other)
            return other
        return WeylOp(self.side, {(0, 0): other})

    def __add__(self, other) -> "WeylOp":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return WeylOp(self.side, out)

    __radd__ = __add__

    def __neg__(self) -> "WeylOp":
        return WeylOp(self.side, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "WeylOp":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "WeylOp":
        return self._coerce(other) - self

    def __mul__(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            return weyl_mul(self, other)
        c = as_scalar(other)
        return WeylOp(self.side, {k: c * v for k, v in self._terms.items()})

    def __rmul__(self, c) -> "WeylOp":
        c = as_scalar(c)
        return WeylOp(self.side, {k: c * v for k, v in self._terms.items()})

    def __pow__(self, k: int) -> "WeylOp":
        out = WeylOp.one(self.side)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.side == other.side and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.side, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        xn, dn = _NAMES[self.side]
        return " + ".join(
            f"{scalar_str(c)}*{xn}^{a}*{dn}^{b}" for (a, b), c in sorted(self._terms.items())
        )

    def __repr__(self) -> str:
        return f"WeylOp({self.side}: {self})"


def weyl_mul(u: WeylOp, v: WeylOp) -> WeylOp:
    """Normal-ordered product, using D^b x^a = sum_k k! C(b,k) C(a,k) x^(a-k) D^(b-k)."""
    if u.side != v.side:
        raise ValueError(f"side mismatch: {u.side} vs {v.side}")
    out: Dict[Tuple[int, int], object] = {}
    for (a1, b1), c1 in u._terms.items():
        for (a2, b2), c2 in v._terms.items():
            c = c1 * c2
            for k in range(min(b1, a2) + 1):
                key = (a1 + a2 - k, b1 + b2 - k)
                out[key] = out.get(key, 0) + c * factorial(k) * comb(b1, k) * comb(a2, k)
    return WeylOp(u.side, out)


def weyl_order(u: WeylOp) -> int:
    if u.is_zero():
        raise ValueError("order of the zero operator")
    return max(b for _, b in u._terms)


def coeff_degree(u: WeylOp) -> int:
    if u.is_zero():
        raise ValueError("coefficient degree of the zero operator")
    return max(a for a, _ in u._terms)


def order_symbol(u: WeylOp) -> MultiPoly:
    top = weyl_order(u)
    return MultiPoly(SYMBOL_VARS[u.side], {(a, b): c for (a, b), c in u._terms.items() if b == top})


def coeff_symbol(u: WeylOp) -> MultiPoly:
    top = coeff_degree(u)
    return MultiPoly(SYMBOL_VARS[u.side], {(a, b): c for (a, b), c in u._terms.items() if a == top})


def apply_to_monomial(u: WeylOp, m: int) -> Dict[int, object]:
    """u(x^m) as {exponent: coefficient}."""
    out: Dict[int, object] = {}
    for (a, b), c in u._terms.items():
        if b <= m:
            e = m - b + a
            out[e] = out.get(e, 0) + c * (factorial(m) // factorial(m - b))
    return {e: c for e, c in out.items() if c}


def descend_to_On(u: WeylOp, n: int) -> Endo:
    """Operator induced on O_n, provided u maps (x^(n+1)) into itself.

    Only x^m with n+1 <= m <= n + order(u) need checking: for larger m every
    term x^a D^b lands in degree m - b + a > n.
    """
    if u.side != LINE:
        raise ValueError("only line-side operators act on O_n")
    if not u.is_zero():
        for m in range(n + 1, n + weyl_order(u) + 1):
            image = apply_to_monomial(u, m)
            if any(e <= n for e in image):
                raise NotDescendable(m, image, n)
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        for e, c in apply_to_monomial(u, j).items():
            if e <= n:
                rows[e][j] += c
    return Endo(n, RatMatrix(rows))


def quantum_fourier(u: WeylOp) -> WeylOp:
    """xh -> D, Dh -> -x, extended multiplicatively."""
    if u.side != DUAL:
        raise ValueError("quantum Fourier transform takes dual-line operators")
    d, x = WeylOp.d(LINE), WeylOp.x(LINE)
    out = WeylOp.zero(LINE)
    for (a, b), c in u._terms.items():
        out = out + c * ((d ** a) * ((-x) ** b))
    return out


def sl2_birational_images() -> Tuple[WeylOp, WeylOp, WeylOp]:
    """(e, h, f) as vector fields of the birational action on the dual line."""
    return (
        WeylOp(DUAL, {(0, 1): -1}),
        WeylOp(DUAL, {(1, 1): -2}),
        WeylOp(DUAL, {(2, 1): 1}),
    )


def sl2_line_images() -> Tuple[WeylOp, WeylOp, WeylOp]:
    e, h, f = (quantum_fourier(u) for u in sl2_birational_images())
    for lhs, rhs, label in sl2_relation_residuals(e, h, f):
        if lhs != rhs:
            raise ArithmeticError(f"sl2 relation {label} fails on the line images")
    casimir = h * h + 2 * (e * f + f * e)
    if not casimir.is_zero():
        raise ArithmeticError(f"Casimir of the line images is {casimir}, expected 0")
    return e, h, f


def sl2_relation_residuals(e, h, f):
    """(lhs, rhs, label) for [e,f]=h, [h,e]=2e, [h,f]=-2f in any algebra."""
    return [
        (e * f - f * e, h, "[e,f]=h"),
        (h * e - e * h, 2 * e, "[h,e]=2e"),
        (h * f - f * h, -2 * f, "[h,f]=-2f"),
    ]


def printed_f_line_image() -> WeylOp:
    """Variant f image with x^2 in place of x in the leading term."""
    return WeylOp(LINE, {(2, 2): -1, (0, 1): -2})
