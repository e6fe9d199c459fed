"""U(sl2) in PBW normal form e^a h^b f^c, and its evaluation homomorphisms."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Tuple

from .core import RatMatrix, as_scalar, mat_rank, scalar_str
from .diffops import Endo, distinguished, order_of
from .weyl import sl2_relation_residuals

Key = Tuple[int, int, int]


class RelationViolation(ArithmeticError):
    pass


class PBWOp:
    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        clean: Dict[Key, object] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for key, c in items:
            key = tuple(key)
            if len(key) != 3 or min(key) < 0:
                raise ValueError(f"bad PBW exponent {key}")
            c = as_scalar(c)
            t = clean.get(key, 0) + c
            if t:
                clean[key] = t
            else:
                clean.pop(key, None)
        self._terms = clean

    @classmethod
    def one(cls) -> "PBWOp":
        return cls({(0, 0, 0): 1})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coeff=1) -> "PBWOp":
        return cls({(a, b, c): coeff})

    @property
    def terms(self) -> Dict[Key, object]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other) -> "PBWOp":
        return other if isinstance(other, PBWOp) else PBWOp({(0, 0, 0): other})

    def __add__(self, other) -> "PBWOp":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return PBWOp(out)

    __radd__ = __add__

    def __neg__(self) -> "PBWOp":
        return PBWOp({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "PBWOp":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PBWOp":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PBWOp":
        if isinstance(other, PBWOp):
            return pbw_mul(self, other)
        c = as_scalar(other)
        return PBWOp({k: c * v for k, v in self._terms.items()})

    def __rmul__(self, c) -> "PBWOp":
        c = as_scalar(c)
        return PBWOp({k: c * v for k, v in self._terms.items()})

    def __pow__(self, k: int) -> "PBWOp":
        out = PBWOp.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PBWOp({(0, 0, 0): other})
        if not isinstance(other, PBWOp):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{scalar_str(c)}*e^{a}*h^{b}*f^{cc}" for (a, b, cc), c in sorted(self._terms.items())
        )

    def __repr__(self) -> str:
        return f"PBWOp({self})"


E = PBWOp.monomial(1, 0, 0)
H = PBWOp.monomial(0, 1, 0)
F = PBWOp.monomial(0, 0, 1)


def _times_e(a: int, b: int, c: int) -> Dict[Key, int]:
    # f^c e = e f^c - c h f^(c-1) - c(c-1) f^(c-1);  h^b e = e (h+2)^b
    out: Dict[Key, int] = {}
    for k in range(b + 1):
        out[(a + 1, k, c)] = comb(b, k) * 2 ** (b - k)
    if c:
        out[(a, b + 1, c - 1)] = out.get((a, b + 1, c - 1), 0) - c
        if c > 1:
            out[(a, b, c - 1)] = out.get((a, b, c - 1), 0) - c * (c - 1)
    return out


def _times_h(a: int, b: int, c: int) -> Dict[Key, int]:
    # f^c h = (h + 2c) f^c
    out = {(a, b + 1, c): 1}
    if c:
        out[(a, b, c)] = 2 * c
    return out


def _times_f(a: int, b: int, c: int) -> Dict[Key, int]:
    return {(a, b, c + 1): 1}


_RIGHT = {"e": _times_e, "h": _times_h, "f": _times_f}


def _right_mul_gen(terms: Dict[Key, object], g: str) -> Dict[Key, object]:
    rule = _RIGHT[g]
    out: Dict[Key, object] = {}
    for key, c in terms.items():
        for k2, c2 in rule(*key).items():
            out[k2] = out.get(k2, 0) + c * c2
    return {k: c for k, c in out.items() if c}


@lru_cache(maxsize=4096)
def _mono_mul(left: Key, right: Key) -> Tuple[Tuple[Key, object], ...]:
    terms: Dict[Key, object] = {left: 1}
    a, b, c = right
    for g, times in (("e", a), ("h", b), ("f", c)):
        for _ in range(times):
            terms = _right_mul_gen(terms, g)
    return tuple(terms.items())


def pbw_mul(u: PBWOp, v: PBWOp) -> PBWOp:
    out: Dict[Key, object] = {}
    for k1, c1 in u._terms.items():
        for k2, c2 in v._terms.items():
            for k, c in _mono_mul(k1, k2):
                out[k] = out.get(k, 0) + c1 * c2 * c
    return PBWOp(out)


def casimir() -> PBWOp:
    return H * H + 2 * (E * F + F * E)


def nonstd_degree(u: PBWOp) -> int:
    """Degree for the filtration giving e, h, f orders 0, 1, 2."""
    if u.is_zero():
        raise ValueError("degree of zero")
    return max(b + 2 * c for (_, b, c) in u._terms)


def check_relations(images, label: str = "target") -> None:
    e, h, f = images
    for lhs, rhs, name in sl2_relation_residuals(e, h, f):
        if lhs != rhs:
            raise RelationViolation(f"{name} fails in {label}")


def evaluate(u: PBWOp, images, one):
    """Image of u under e, h, f -> images; ``one`` is the unit of the target."""
    check_relations(images)
    e, h, f = images
    cache = {}

    def power(g, k, idx):
        key = (idx, k)
        if key not in cache:
            cache[key] = one if k == 0 else power(g, k - 1, idx) * g
        return cache[key]

    total = one - one
    for (a, b, c), coeff in sorted(u._terms.items()):
        total = total + coeff * (power(e, a, 0) * power(h, b, 1) * power(f, c, 2))
    return total


def distinguished_images(n: int) -> Tuple[Endo, Endo, Endo]:
    d0, d1, d2 = distinguished(n)
    return d0, -2 * d1, -d2


def distinguished_hom(n: int, u: PBWOp) -> Endo:
    return evaluate(u, distinguished_images(n), Endo.identity(n))


def spanning_monomials(n: int):
    """Exponents (i, j, l) of e^i h^j f^l whose images should span End(O_n)."""
    keys = [(i, 0, l) for i in range(n + 1) for l in range(n + 1 - i)]
    keys += [(i, 1, l) for i in range(n) for l in range(n - i)]
    return keys


def surjectivity_check(n: int) -> Tuple[bool, int]:
    images = [distinguished_hom(n, PBWOp({k: 1})) for k in spanning_monomials(n)]
    rank = mat_rank(RatMatrix([img.mat.flatten() for img in images]))
    return rank == (n + 1) ** 2, rank


def filtration_compat_check(n: int, samples: Iterable[PBWOp]) -> bool:
    for u in samples:
        if u.is_zero():
            continue
        if order_of(distinguished_hom(n, u)) > nonstd_degree(u):
            return False
    if n >= 1:
        for g, expected in ((E, 0), (H, 1), (F, 2)):
            if order_of(distinguished_hom(n, g)) != expected:
                return False
    return True
