"""Finitely presented graded Poisson algebras and the maps between them.

A presentation is a polynomial ring on named generators with integer degrees,
a bracket table on generators (extended as a biderivation), monomial rewrite
rules, and an optional truncation bound L killing every monomial of length
(total exponent) at least L. Elements are stored fully reduced.

Degree conventions: the cone generators z0, z1, z2 (or y0, y1, y2) have
degrees 0, 1, 2; the line plane (x0, x1) has degrees (0, 1); the dual plane
(xh0, xh1) has degrees (1, 0).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
import functools
import inspect
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .core import InconsistentSystem, MultiPoly, RatMatrix, mat_kernel, mat_rank, mat_solve
from .diffops import (
    Endo,
    TruncPoly,
    commutator,
    distinguished,
    filtration_dims,
    symbol_in_degree,
)

Monomial = Tuple[int, ...]


class IllDefinedMap(ValueError):
    pass


class PoissonPresentation:
    def __init__(
        self,
        name: str,
        variables: Sequence[str],
        degrees: Sequence[int],
        brackets: Mapping[Tuple[str, str], object],
        rules: Sequence[Tuple[Sequence[int], object]] = (),
        truncation: int = 0,
    ):
        self.name = name
        self.variables = tuple(variables)
        self.degrees = tuple(degrees)
        if len(self.degrees) != len(self.variables):
            raise ValueError("one degree per generator")
        k = len(self.variables)
        self.truncation = truncation
        table: Dict[Tuple[int, int], MultiPoly] = {}
        for (a, b), value in brackets.items():
            i, j = self.variables.index(a), self.variables.index(b)
            value = self._lift(value)
            if (i, j) in table and table[(i, j)] != value:
                raise ValueError(f"conflicting brackets for {a}, {b}")
            table[(i, j)] = value
            table[(j, i)] = -value
        for i in range(k):
            if not table.get((i, i), MultiPoly.zero(self.variables)).is_zero():
                raise ValueError("bracket of a generator with itself must vanish")
            for j in range(k):
                table.setdefault((i, j), MultiPoly.zero(self.variables))
        for (i, j), value in table.items():
            expected = self.degrees[i] + self.degrees[j] - 1
            if not value.is_zero() and value.weighted_degrees(self.degrees) != {expected}:
                raise ValueError(
                    f"{{{self.variables[i]}, {self.variables[j]}}} must have degree {expected}"
                )
        self.table = table
        self.rules = tuple((tuple(p), self._lift(r)) for p, r in rules)
        for p, _ in self.rules:
            if len(p) != k:
                raise ValueError("rule pattern has the wrong length")

    def _lift(self, value) -> MultiPoly:
        if isinstance(value, MultiPoly):
            if value.variables != self.variables:
                raise ValueError("polynomial over the wrong variables")
            return value
        if isinstance(value, PolyElement):
            return value.poly
        return MultiPoly.constant(self.variables, value)

    def __repr__(self) -> str:
        return f"PoissonPresentation({self.name})"

    # -- normal forms -----------------------------------------------------

    def killed(self, mono: Monomial) -> bool:
        return self.truncation > 0 and sum(mono) >= self.truncation

    def _applicable(self, mono: Monomial):
        return [(p, r) for p, r in self.rules if all(a >= b for a, b in zip(mono, p))]

    def is_normal(self, mono: Monomial) -> bool:
        return not self.killed(mono) and not self._applicable(mono)

    def reduce(self, poly: MultiPoly, rng: Optional[random.Random] = None) -> MultiPoly:
        """Normal form; ``rng`` randomizes which term and which step is applied next."""
        pending: Dict[Monomial, object] = dict(poly.items())
        done: Dict[Monomial, object] = {}
        while pending:
            mono = rng.choice(sorted(pending)) if rng else next(iter(pending))
            c = pending.pop(mono)
            rules = self._applicable(mono)
            kill = self.killed(mono)
            if kill and (not rules or rng is None or rng.random() < 0.5):
                continue
            if not rules:
                t = done.get(mono, 0) + c
                if t:
                    done[mono] = t
                else:
                    done.pop(mono)
                continue
            pattern, repl = rng.choice(rules) if rng else rules[0]
            rest = tuple(a - b for a, b in zip(mono, pattern))
            for m2, c2 in repl.items():
                key = tuple(a + b for a, b in zip(rest, m2))
                t = pending.get(key, 0) + c * c2
                if t:
                    pending[key] = t
                else:
                    pending.pop(key, None)
        return MultiPoly._trusted(self.variables, done)

    def normal_monomials(self, max_length: Optional[int] = None) -> List[Monomial]:
        bound = self.truncation if self.truncation > 0 else None
        if max_length is not None:
            bound = max_length + 1 if bound is None else min(bound, max_length + 1)
        if bound is None:
            raise ValueError("infinite presentation: give max_length")
        out = []
        for total in range(bound):
            for mono in _compositions(total, len(self.variables)):
                if self.is_normal(mono):
                    out.append(mono)
        return out

    def weighted_degree(self, mono: Monomial) -> int:
        return sum(d * e for d, e in zip(self.degrees, mono))

    # -- elements ---------------------------------------------------------

    def element(self, poly) -> "PolyElement":
        return PolyElement(self, self.reduce(self._lift(poly)))

    def gen(self, name: str) -> "PolyElement":
        return self.element(MultiPoly.gen(self.variables, name))

    def gens(self) -> List["PolyElement"]:
        return [self.gen(v) for v in self.variables]

    def one(self) -> "PolyElement":
        return self.element(MultiPoly.constant(self.variables))

    def zero(self) -> "PolyElement":
        return PolyElement(self, MultiPoly.zero(self.variables))

    def monomial(self, mono: Sequence[int], c=1) -> "PolyElement":
        return self.element(MultiPoly.monomial(self.variables, mono, c))

    def raw_bracket(self, p: MultiPoly, q: MultiPoly) -> MultiPoly:
        """Biderivation extension of the table, without reduction."""
        out = MultiPoly.zero(self.variables)
        k = len(self.variables)
        dp = [p.derivative(i) for i in range(k)]
        dq = [q.derivative(j) for j in range(k)]
        for i in range(k):
            if dp[i].is_zero():
                continue
            for j in range(k):
                t = self.table[(i, j)]
                if t.is_zero() or dq[j].is_zero():
                    continue
                out = out + dp[i] * dq[j] * t
        return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class PolyElement:
    __slots__ = ("presentation", "poly")

    def __init__(self, presentation: PoissonPresentation, poly: MultiPoly):
        self.presentation = presentation
        self.poly = poly

    def _coerce(self, other) -> "PolyElement":
        if isinstance(other, PolyElement):
            if other.presentation is not self.presentation:
                raise ValueError(
                    f"elements of {self.presentation.name} and {other.presentation.name}"
                )
            return other
        return self.presentation.element(other)

    def __add__(self, other) -> "PolyElement":
        return PolyElement(self.presentation, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __neg__(self) -> "PolyElement":
        return PolyElement(self.presentation, -self.poly)

    def __sub__(self, other) -> "PolyElement":
        return PolyElement(self.presentation, self.poly - self._coerce(other).poly)

    def __rsub__(self, other) -> "PolyElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PolyElement":
        if isinstance(other, PolyElement):
            other = self._coerce(other)
            return self.presentation.element(self.poly * other.poly)
        return PolyElement(self.presentation, self.poly.scale(other))

    def __rmul__(self, c) -> "PolyElement":
        return PolyElement(self.presentation, self.poly.scale(c))

    def __pow__(self, k: int) -> "PolyElement":
        out = self.presentation.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.presentation.element(other)
        if not isinstance(other, PolyElement):
            return NotImplemented
        return self.presentation is other.presentation and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((id(self.presentation), self.poly))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def degrees(self) -> set:
        return self.poly.weighted_degrees(self.presentation.degrees)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"PolyElement({self.presentation.name}: {self})"


def poisson_bracket(a: PolyElement, b: PolyElement) -> PolyElement:
    if a.presentation is not b.presentation:
        raise ValueError("bracket of elements from different presentations")
    pres = a.presentation
    return PolyElement(pres, pres.reduce(pres.raw_bracket(a.poly, b.poly)))


def is_poisson_quotient(pres: PoissonPresentation) -> bool:
    """Whether the rules and the truncation ideal are closed under brackets with generators."""
    gens = [MultiPoly.gen(pres.variables, i) for i in range(len(pres.variables))]
    relations = [MultiPoly.monomial(pres.variables, p) - r for p, r in pres.rules]
    if pres.truncation > 0:
        relations += [
            MultiPoly.monomial(pres.variables, m)
            for m in _compositions(pres.truncation, len(pres.variables))
        ]
    for r in relations:
        for g in gens:
            if not pres.reduce(pres.raw_bracket(r, g)).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# Presentations

def _interned(factory):
    """Cache a presentation factory on its normalized arguments, so equal calls share one instance."""
    sig = inspect.signature(factory)
    cache = {}

    @functools.wraps(factory)
    def wrapper(*args, **kwargs):
        bound = sig.bind(*args, **kwargs)
        bound.apply_defaults()
        key = tuple(tuple(v) if isinstance(v, list) else v for v in bound.arguments.values())
        if key not in cache:
            cache[key] = factory(*key)
        return cache[key]

    return wrapper


def _kk_table(names: Sequence[str]) -> Dict[Tuple[str, str], MultiPoly]:
    z0, z1, z2 = names
    g = lambda v, c=1: MultiPoly.gen(names, v).scale(c)
    return {(z0, z1): g(z0), (z0, z2): g(z1, 2), (z1, z2): g(z2)}


@_interned
def kk_free(names: Sequence[str] = ("z0", "z1", "z2")) -> PoissonPresentation:
    """Polynomial functions on sl2* with the graded Kirillov-Kostant bracket."""
    return PoissonPresentation("S(sl2)", names, (0, 1, 2), _kk_table(names))


@_interned
def nilpotent_cone(names: Sequence[str] = ("z0", "z1", "z2")) -> PoissonPresentation:
    """k[z0, z1, z2]/(z1^2 - z0 z2) with the Kirillov-Kostant bracket."""
    z0z2 = MultiPoly.monomial(names, (1, 0, 1))
    return PoissonPresentation("cone", names, (0, 1, 2), _kk_table(names), [((0, 2, 0), z0z2)])


@_interned
def truncated_cone(n: int) -> PoissonPresentation:
    """The cone modulo the (n+1)-st power of the vertex ideal, on y0, y1, y2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    names = ("y0", "y1", "y2")
    y0y2 = MultiPoly.monomial(names, (1, 0, 1))
    return PoissonPresentation(
        f"P_{n}", names, (0, 1, 2), _kk_table(names), [((0, 2, 0), y0y2)], truncation=n + 1
    )


@_interned
def symplectic_plane(side: str = "line", N: int = 0, rank: int = 1) -> PoissonPresentation:
    """Functions on a cotangent plane, {q, p} = -1 per coordinate pair; N > 0 truncates."""
    if side not in ("line", "dual_line"):
        raise ValueError(f"unknown side {side!r}")
    if N < 0 or rank < 1:
        raise ValueError("need N >= 0 and rank >= 1")
    base = "x" if side == "line" else "xh"
    degs = (0, 1) if side == "line" else (1, 0)
    if rank == 1:
        qs, ps = [f"{base}0"], [f"{base}1"]
    else:
        qs = [f"{base}0_{i}" for i in range(1, rank + 1)]
        ps = [f"{base}1_{i}" for i in range(1, rank + 1)]
    variables = qs + ps
    degrees = [degs[0]] * rank + [degs[1]] * rank
    brackets = {(q, p): -1 for q, p in zip(qs, ps)}
    label = "T*A1" if side == "line" else "T*A1^"
    return PoissonPresentation(label, variables, degrees, brackets, truncation=N)


@_interned
def truncated_line(n: int) -> PoissonPresentation:
    """O_n with the trivial grading and zero bracket."""
    return PoissonPresentation(f"O_{n}", ("x",), (0,), {}, truncation=n + 1)


# ---------------------------------------------------------------------------
# Maps


class AlgebraMap:
    """Ring map determined by generator images; well-definedness is checked eagerly."""

    def __init__(self, source: PoissonPresentation, target: PoissonPresentation, images, name=""):
        self.source = source
        self.target = target
        self.name = name
        if isinstance(images, Mapping):
            missing = set(source.variables) - set(images)
            if missing:
                raise ValueError(f"no image for {sorted(missing)}")
            images = [images[v] for v in source.variables]
        self.images = tuple(target.element(img) if not isinstance(img, PolyElement) else img
                            for img in images)
        if len(self.images) != len(source.variables):
            raise ValueError("one image per source generator")
        for img in self.images:
            if img.presentation is not target:
                raise ValueError("image lives in a different presentation")
        self._validate()

    def _validate(self) -> None:
        src = self.source
        for pattern, repl in src.rules:
            diff = self._apply_poly(MultiPoly.monomial(src.variables, pattern) - repl)
            if not diff.is_zero():
                raise IllDefinedMap(f"{self.name or 'map'}: rule {pattern} maps to {diff}")
        if src.truncation > 0:
            for mono in _compositions(src.truncation, len(src.variables)):
                img = self._apply_poly(MultiPoly.monomial(src.variables, mono))
                if not img.is_zero():
                    raise IllDefinedMap(f"{self.name or 'map'}: killed monomial {mono} maps to {img}")

    def _apply_poly(self, poly: MultiPoly) -> PolyElement:
        tgt = self.target
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            if (i, e) not in powers:
                powers[(i, e)] = (
                    MultiPoly.constant(tgt.variables) if e == 0 else tgt.reduce(power(i, e - 1) * self.images[i].poly)
                )
            return powers[(i, e)]

        acc = MultiPoly.zero(tgt.variables)
        for mono, c in poly.items():
            term = MultiPoly.constant(tgt.variables, c)
            for i, e in enumerate(mono):
                if e:
                    term = tgt.reduce(term * power(i, e))
            acc = acc + term
        return PolyElement(tgt, tgt.reduce(acc))

    def __call__(self, a: PolyElement) -> PolyElement:
        return map_apply(self, a)

    def image_of(self, name: str) -> PolyElement:
        return self.images[self.source.variables.index(name)]

    def to_json(self) -> Dict[str, str]:
        return {v: str(img) for v, img in zip(self.source.variables, self.images)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.images == other.images)

    def __repr__(self) -> str:
        return f"AlgebraMap({self.source.name} -> {self.target.name}: {self.to_json()})"


def map_apply(m: AlgebraMap, a: PolyElement) -> PolyElement:
    if a.presentation is not m.source:
        raise ValueError("element is not in the source of the map")
    return m._apply_poly(a.poly)


def compose(g: AlgebraMap, f: AlgebraMap, name: str = "") -> AlgebraMap:
    """g after f."""
    if f.target is not g.source:
        raise ValueError("maps are not composable")
    return AlgebraMap(f.source, g.target, [g(img) for img in f.images], name=name)


def check_poisson_hom(m: AlgebraMap, degree_bound: Optional[int] = None) -> Tuple[bool, Optional[str]]:
    """Bracket compatibility on generator pairs plus grading preservation.

    ``degree_bound`` optionally restricts the grading check to generators of
    degree at most that bound.
    """
    src = m.source
    names = src.variables
    for i, j in itertools.combinations(range(len(names)), 2):
        lhs = poisson_bracket(m.images[i], m.images[j])
        rhs = m._apply_poly(src.table[(i, j)])
        if lhs != rhs:
            return False, f"({names[i]}, {names[j]}): {{images}} = {lhs}, image of bracket = {rhs}"
    for name, deg, img in zip(names, src.degrees, m.images):
        if degree_bound is not None and deg > degree_bound:
            continue
        if not img.is_zero() and img.degrees() != {deg}:
            return False, f"{name} has degree {deg} but its image {img} has degrees {sorted(img.degrees())}"
    return True, None


def _identity_images(target: PoissonPresentation) -> List[MultiPoly]:
    return [MultiPoly.gen(target.variables, i) for i in range(len(target.variables))]


def inf_moment_map(n: int) -> AlgebraMap:
    """S(sl2) onto P_n, z_p -> y_p."""
    pn = truncated_cone(n)
    return AlgebraMap(kk_free(), pn, _identity_images(pn), name=f"moment map to P_{n}")


def cone_moment_map() -> AlgebraMap:
    """S(sl2) onto the quadratic cone Y, z_p -> y_p."""
    cone = nilpotent_cone(("y0", "y1", "y2"))
    return AlgebraMap(kk_free(), cone, _identity_images(cone), name="moment map to Y")


def _poly(pres: PoissonPresentation, terms: Mapping[Tuple[int, ...], object]) -> MultiPoly:
    return MultiPoly(pres.variables, terms)


def bir_moment_map(z1_sign: int = 1) -> AlgebraMap:
    """Moment map of the birational sl2 action on the dual cotangent plane.

    ``z1_sign=-1`` gives the sign variant, which fails the bracket check.
    """
    dual = symplectic_plane("dual_line")
    images = [
        _poly(dual, {(0, 1): -1}),
        _poly(dual, {(1, 1): z1_sign}),
        _poly(dual, {(2, 1): -1}),
    ]
    return AlgebraMap(kk_free(), dual, images, name="birational moment map")


def classical_fourier(rank: int = 1) -> AlgebraMap:
    """xh0 -> x1, xh1 -> -x0 on each coordinate pair."""
    dual, line = symplectic_plane("dual_line", 0, rank), symplectic_plane("line", 0, rank)
    images = []
    for i in range(rank):
        images.append(MultiPoly.gen(line.variables, rank + i))
    for i in range(rank):
        images.append(-MultiPoly.gen(line.variables, i))
    return AlgebraMap(dual, line, images, name="classical Fourier")


def resolution_map(y1_sign: int = -1, h: Optional[Sequence] = None) -> AlgebraMap:
    """Y -> T*A1: y0 -> x0, y1 -> x0 h(x0) x1, y2 -> x0 h(x0)^2 x1^2 (h = y1_sign by default)."""
    line = symplectic_plane("line")
    x0, x1 = (MultiPoly.gen(line.variables, i) for i in range(2))
    hp = (MultiPoly(line.variables, {(i, 0): c for i, c in enumerate(h)})
          if h is not None else MultiPoly.constant(line.variables, y1_sign))
    images = [x0, x0 * hp * x1, x0 * hp * hp * x1 * x1]
    return AlgebraMap(nilpotent_cone(("y0", "y1", "y2")), line, images, name="resolution")


def cone_to_truncation(n: int) -> AlgebraMap:
    """Quotient map from the cone onto P_n, z_p -> y_p."""
    pn = truncated_cone(n)
    return AlgebraMap(nilpotent_cone(), pn, _identity_images(pn), name=f"cone -> P_{n}")


def inverse_system_map(n: int) -> AlgebraMap:
    if n < 0:
        raise ValueError("n must be nonnegative")
    pn = truncated_cone(n)
    return AlgebraMap(truncated_cone(n + 1), pn, _identity_images(pn), name=f"P_{n + 1} -> P_{n}")


def zero_section_and_projection(n: int) -> Tuple[AlgebraMap, AlgebraMap]:
    on, pn = truncated_line(n), truncated_cone(n)
    inclusion = AlgebraMap(on, pn, [MultiPoly.gen(pn.variables, 0)], name="zero section")
    x = MultiPoly.gen(on.variables, 0)
    zero = MultiPoly.zero(on.variables)
    projection = AlgebraMap(pn, on, [x, zero, zero], name="projection")
    return inclusion, projection


def is_surjective_on_generators(m: AlgebraMap) -> bool:
    """Every nonzero target generator is the image of some source generator."""
    images = {img.poly for img in m.images}
    for i in range(len(m.target.variables)):
        g = m.target.reduce(MultiPoly.gen(m.target.variables, i))
        if not g.is_zero() and g not in images:
            return False
    return True


# ---------------------------------------------------------------------------
# Comparison with the matrix side


def symbol_embedding(a: PolyElement, n: int) -> TruncPoly:
    """Image in O_n of a homogeneous element of P_n: y-monomials go to x^length."""
    out = [0] * (n + 1)
    for mono, c in a.poly.items():
        length = sum(mono)
        if length <= n:
            out[length] += c
    return TruncPoly(n, out)


def lift_monomial(mono: Sequence[int], n: int) -> Endo:
    """delta0^a delta1^b delta2^c on O_n."""
    d = distinguished(n)
    out = Endo.identity(n)
    for op, e in zip(d, mono):
        for _ in range(e):
            out = out * op
    return out


def slice_dims(pres: PoissonPresentation) -> Dict[int, int]:
    dims: Dict[int, int] = {}
    for mono in pres.normal_monomials():
        w = pres.weighted_degree(mono)
        dims[w] = dims.get(w, 0) + 1
    return dims


@dataclass
class SymbolAlgebraRecord:
    n: int
    poly_dims: List[int]
    matrix_dims: List[int]
    bracket_checks: List[Tuple[str, bool]] = field(default_factory=list)
    basis_checks: int = 0
    basis_failures: List[str] = field(default_factory=list)
    lifted_bracket_checks: int = 0
    lifted_bracket_failures: List[str] = field(default_factory=list)

    @property
    def dims_match(self) -> bool:
        return self.poly_dims == self.matrix_dims

    @property
    def passed(self) -> bool:
        return (self.dims_match and all(ok for _, ok in self.bracket_checks)
                and not self.basis_failures and not self.lifted_bracket_failures)


def _graded_bracket_matches(n: int, lhs_op: Endo, degree: int, rhs: PolyElement) -> bool:
    if degree < 0:
        return lhs_op.is_zero() and rhs.is_zero()
    return symbol_in_degree(lhs_op, degree) == symbol_embedding(rhs, n)


def theorem1_iso(n: int) -> Tuple[AlgebraMap, SymbolAlgebraRecord]:
    """P_n against the graded algebra of D(O_n): dimensions, basis symbols and brackets."""
    quotient = cone_to_truncation(n)
    pn = quotient.target
    dims = slice_dims(pn)
    poly_dims = [dims.get(p, 0) for p in range(2 * n + 1)]
    filt = filtration_dims(n)
    matrix_dims = [filt[0]] + [filt[p] - filt[p - 1] for p in range(1, 2 * n + 1)]
    record = SymbolAlgebraRecord(n, poly_dims, matrix_dims)

    deltas = distinguished(n)
    y = pn.gens()
    for i, j in ((0, 1), (0, 2), (1, 2)):
        ok = _graded_bracket_matches(n, commutator(deltas[i], deltas[j]), i + j - 1,
                                     poisson_bracket(y[i], y[j]))
        record.bracket_checks.append((f"{{y{i}, y{j}}}", ok))

    for mono in pn.normal_monomials():
        p = pn.weighted_degree(mono)
        lifted = lift_monomial(mono, n)
        record.basis_checks += 1
        if symbol_in_degree(lifted, p) != symbol_embedding(pn.monomial(mono), n):
            record.basis_failures.append(str(mono))
        for g in range(3):
            record.lifted_bracket_checks += 1
            ok = _graded_bracket_matches(n, commutator(lifted, deltas[g]), p + g - 1,
                                         poisson_bracket(pn.monomial(mono), y[g]))
            if not ok:
                record.lifted_bracket_failures.append(f"{mono} with y{g}")
    return quotient, record


# ---------------------------------------------------------------------------
# Diamond


@dataclass
class DiamondRecord:
    left: Dict[str, str]
    right: Dict[str, str]
    agree: bool
    right_printed_sign: Dict[str, str]
    printed_sign_agrees: bool
    printed_sign_poisson: bool
    printed_sign_witness: Optional[str]


def diamond_left() -> AlgebraMap:
    return compose(resolution_map(), cone_moment_map(), name="resolution o moment map")


def diamond_right(z1_sign: int = 1) -> AlgebraMap:
    return compose(classical_fourier(), bir_moment_map(z1_sign), name="Fourier o birational moment map")


def diamond_check() -> DiamondRecord:
    left, right, printed = diamond_left(), diamond_right(1), diamond_right(-1)
    poisson_ok, witness = check_poisson_hom(bir_moment_map(-1))
    return DiamondRecord(
        left=left.to_json(),
        right=right.to_json(),
        agree=left.images == right.images,
        right_printed_sign=printed.to_json(),
        printed_sign_agrees=left.images == printed.images,
        printed_sign_poisson=poisson_ok,
        printed_sign_witness=witness,
    )


# ---------------------------------------------------------------------------
# Uniqueness of the resolution


class NoSolution(ArithmeticError):
    pass


class MultipleSolutions(ArithmeticError):
    pass


class TruncationTooSmall(ValueError):
    pass


@dataclass
class SolverResult:
    h: Tuple
    equations: int
    linear_rank: int
    induced_map: AlgebraMap


def _plane_bracket(A, B, cvars):
    """{A, B} with {x0, x1} = -1 for dicts (i, j) -> MultiPoly in the unknowns."""
    out: Dict[Tuple[int, int], MultiPoly] = {}
    for (i1, j1), a in A.items():
        for (i2, j2), b in B.items():
            # d/dx0 A * d/dx1 B - d/dx1 A * d/dx0 B, times -1
            coeff = i1 * j2 - j1 * i2
            if not coeff:
                continue
            key = (i1 + i2 - 1, j1 + j2 - 1)
            out[key] = out.get(key, MultiPoly.zero(cvars)) + (a * b).scale(-coeff)
    return out


def _plane_mul(A, B, cvars):
    out: Dict[Tuple[int, int], MultiPoly] = {}
    for (i1, j1), a in A.items():
        for (i2, j2), b in B.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, MultiPoly.zero(cvars)) + a * b
    return out


def _plane_sub(A, B, cvars):
    out = dict(A)
    for key, b in B.items():
        out[key] = out.get(key, MultiPoly.zero(cvars)) - b
    return out


def uniqueness_solver(N: int = 12, d: int = 8, conditions: Sequence[int] = (0, 1, 2)) -> SolverResult:
    """Solve for h(x0) = sum c_i x0^i making y -> (x0, x0 h x1, x0 h^2 x1^2) Poisson.

    The three bracket conditions are imposed modulo monomials of length >= N.
    Linear equations determine the candidate; the rest are checked on it.
    """
    if N < 3:
        raise TruncationTooSmall(f"truncation {N} < 3")
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    cvars = tuple(f"c{i}" for i in range(d + 1))
    one = MultiPoly.constant(cvars)
    h = {(i, 0): MultiPoly.gen(cvars, i) for i in range(d + 1)}
    x0 = {(1, 0): one}
    x1 = {(0, 1): one}
    f1 = _plane_mul(_plane_mul(x0, h, cvars), x1, cvars)
    f2 = _plane_mul(_plane_mul(_plane_mul(x0, h, cvars), h, cvars), _plane_mul(x1, x1, cvars), cvars)
    two_f1 = {k: v.scale(2) for k, v in f1.items()}
    residuals = [
        _plane_sub(_plane_bracket(x0, f1, cvars), x0, cvars),
        _plane_sub(_plane_bracket(x0, f2, cvars), two_f1, cvars),
        _plane_sub(_plane_bracket(f1, f2, cvars), f2, cvars),
    ]
    equations = []
    for idx in conditions:
        for key in sorted(residuals[idx]):
            eq = residuals[idx][key]
            if sum(key) < N and not eq.is_zero():
                equations.append(eq)

    linear = [eq for eq in equations if eq.total_degree() <= 1]
    k = d + 1
    if not linear:
        raise MultipleSolutions("no linear constraints on the coefficients of h")
    rows, rhs = [], []
    for eq in linear:
        row = [eq.coeff(tuple(1 if j == i else 0 for j in range(k))) for i in range(k)]
        rows.append(row)
        rhs.append(-eq.coeff((0,) * k))
    m = RatMatrix(rows)
    try:
        sol = mat_solve(m, rhs)
    except InconsistentSystem as exc:
        raise NoSolution(str(exc)) from None
    rank = mat_rank(m)
    if rank < k:
        free = [i for i, v in enumerate(_free_directions(m)) if v]
        raise MultipleSolutions(f"linear constraints leave {k - rank} free coefficient(s) {free}")
    for eq in equations:
        if _evaluate(eq, sol) != 0:
            raise NoSolution(f"equation {eq} fails at {sol}")
    return SolverResult(tuple(sol), len(equations), rank, resolution_map(h=sol))


def _free_directions(m: RatMatrix):
    mask = [0] * m.cols
    for v in mat_kernel(m):
        for i, a in enumerate(v):
            if a:
                mask[i] = 1
    return mask


def _evaluate(eq: MultiPoly, point: Sequence) -> object:
    total = 0
    for mono, c in eq.items():
        term = c
        for v, e in zip(point, mono):
            term *= v ** e
        total += term
    return total


# ---------------------------------------------------------------------------
# Bracket of ideal powers in the plane


def ideal_bracket_witness(a_pow: int, b_pow: int, N: int, loss: int = 1):
    """First pair of monomials of lengths a_pow, b_pow whose bracket leaves m^(a+b-loss)."""
    if N <= a_pow + b_pow:
        raise ValueError("truncation must exceed a_pow + b_pow")
    line = symplectic_plane("line", N)
    bound = a_pow + b_pow - loss
    for ma in _compositions(a_pow, 2):
        for mb in _compositions(b_pow, 2):
            br = poisson_bracket(line.monomial(ma), line.monomial(mb))
            low = [m for m, _ in br.poly.items() if sum(m) < bound]
            if low:
                return ma, mb, br
    return None


def ideal_bracket_check(a_pow: int, b_pow: int, N: int, loss: int = 1) -> bool:
    """Whether {m^a, m^b} lies in m^(a+b-loss) for m = (x0, x1) in the line plane."""
    return ideal_bracket_witness(a_pow, b_pow, N, loss) is None
