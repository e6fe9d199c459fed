"""Named batteries of exact checks, aggregated into verification reports."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import ceil, factorial
from typing import Callable, Dict, List

from . import diffops as do
from . import poisson as ps
from . import sl2
from . import weyl as wl
from .report import Check, VerificationReport, check, noted

SUITES = (
    "filtration",
    "symbols",
    "sl2",
    "theorem1",
    "theorem2",
    "inverse-system",
    "uniqueness",
    "diamond",
    "quantum-diamond",
)
ALL = "all"

# randomized batteries are expensive in n; beyond these sizes they are skipped
GROTHENDIECK_MAX_N = 5
MULTIPLICATIVITY_MAX_N = 6


class UnknownSuite(ValueError):
    pass


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class SuiteParams:
    suite: str
    n_min: int = 0
    n_max: int = 8
    seed: int = 0
    trunc: int = 12
    degree_bound: int = 8

    def __post_init__(self):
        if self.suite not in SUITES and self.suite != ALL:
            raise UnknownSuite(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + (ALL,))}")
        if not 0 <= self.n_min <= self.n_max:
            raise InvalidParams(f"need 0 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if not -(2 ** 63) <= self.seed < 2 ** 64:
            raise InvalidParams("seed must fit in 64 bits")
        if self.suite in ("uniqueness", ALL) and self.trunc < 3:
            raise InvalidParams(f"trunc must be at least 3, got {self.trunc}")
        if self.degree_bound < 0:
            raise InvalidParams("degree bound must be nonnegative")

    @property
    def ns(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def rng(self, label: str, n: int = 0) -> random.Random:
        return random.Random(f"{self.seed}/{label}/{n}")


# ---------------------------------------------------------------------------
# filtration on End(O_n)


def _filtration(p: SuiteParams) -> List[Check]:
    out = []
    for n in p.ns:
        dims = do.filtration_dims(n)
        v = [0] + (do.v_table(n) if n else [])
        expected, running = [], 0
        for q in range(2 * n + 1):
            running += n - v[q] + 1
            expected.append(running)
        out.append(check(f"filtration-dims n={n}", dims == expected, "order-filtration/dimensions",
                         f"dims {dims}, formula {expected}"))
        out.append(check(f"top-filtration n={n}", dims[-1] == (n + 1) ** 2, "order-filtration/exhaustive",
                         f"dim D^{2 * n} = {dims[-1]}"))
        if n:
            vt = v[1:]
            out.append(check(f"v-table n={n}", vt == [ceil(q / 2) for q in range(1, 2 * n + 1)],
                             "symbol-ideal/valuations", f"v = {vt}"))
            out.append(check(f"v-sum n={n}", sum(vt) == n * (n + 1), "symbol-ideal/valuations",
                             f"sum v = {sum(vt)}"))
            out.append(check(f"v-positive n={n}", min(vt) >= 1, "symbol-ideal/valuations", f"min v = {min(vt)}"))
        out.append(_nilpotency(n))
        if n:
            d0, _, d2 = do.distinguished(n)
            top = do.ad_x_pow(d2 ** n, 2 * n)
            ok = top == factorial(2 * n) * d0 ** n and not top.is_zero()
            out.append(check(f"sharp-nilpotency n={n}", ok, "order-filtration/nilpotency",
                             f"ad_x^{2 * n}(delta2^{n}) = {top!r}"))
        if n <= GROTHENDIECK_MAX_N:
            out.append(_grothendieck(n, p))
    return out


def _nilpotency(n: int) -> Check:
    size = n + 1
    for i in range(size):
        for j in range(size):
            img = do.ad_x_pow(do.Endo.unit(n, i, j), 2 * n + 1)
            if not img.is_zero():
                return check(f"nilpotency n={n}", False, "order-filtration/nilpotency",
                             f"ad_x^{2 * n + 1}(E_{i}{j}) != 0")
    return check(f"nilpotency n={n}", True, "order-filtration/nilpotency")


def _grothendieck(n: int, p: SuiteParams, operators: int = 100, tuples: int = 20) -> Check:
    rng = p.rng("grothendieck", n)
    x = do.TruncPoly.x(n)
    for k in range(operators):
        d = do.random_endo(n, rng)
        order = do.order_of(d)
        for _ in range(tuples):
            fs = [do.TruncPoly.monomial(n, rng.randint(0, n)) for _ in range(order + 1)]
            if not do.grothendieck_check(d, order, fs):
                return check(f"grothendieck-order n={n}", False, "order-filtration/grothendieck",
                             f"operator {k}: commutator with exponents "
                             f"{[f.valuation() for f in fs]} does not vanish")
        if order and do.grothendieck_check(d, order - 1, [x] * order):
            return check(f"grothendieck-order n={n}", False, "order-filtration/grothendieck",
                         f"operator {k}: ad_x^{order} vanishes below its order")
    return check(f"grothendieck-order n={n}", True, "order-filtration/grothendieck")


# ---------------------------------------------------------------------------
# principal symbols


def _symbols(p: SuiteParams) -> List[Check]:
    out = []
    for n in p.ns:
        witness = []
        if n:
            x = do.TruncPoly.x(n)
            for order, op in enumerate(do.distinguished(n)):
                s = do.symbol_of(op)
                if s != do.SymbolValue(order, x):
                    witness.append(f"delta{order} has symbol {s!r}")
        out.append(check(f"distinguished-symbols n={n}", not witness, "principal-symbol/examples",
                         "; ".join(witness)))
        if n <= MULTIPLICATIVITY_MAX_N:
            out.append(_multiplicativity(n, p))
    return out


def _multiplicativity(n: int, p: SuiteParams, pairs: int = 100) -> Check:
    rng = p.rng("multiplicativity", n)
    for k in range(pairs):
        a = do.random_of_order(n, rng.randint(0, 2 * n), rng)
        b = do.random_of_order(n, rng.randint(0, 2 * n), rng)
        if a.is_zero() or b.is_zero():
            continue
        sa, sb = do.symbol_of(a), do.symbol_of(b)
        total = sa.order + sb.order
        lhs = do.ad_x_pow(a * b, total)
        lhs = do.TruncPoly(n, [row[0] for row in lhs.rows]) * Fraction(1, factorial(total))
        if lhs != sa.value * sb.value:
            return check(f"symbol-multiplicativity n={n}", False, "principal-symbol/multiplicativity",
                         f"pair {k}: orders {sa.order}, {sb.order}")
    return check(f"symbol-multiplicativity n={n}", True, "principal-symbol/multiplicativity")


# ---------------------------------------------------------------------------
# sl2 on O_n


def _line_model(n: int):
    """(x, 2x D - n, -x D^2 + n D) in the Weyl algebra of the line."""
    L = wl.LINE
    return (
        wl.WeylOp(L, {(1, 0): 1}),
        wl.WeylOp(L, {(1, 1): 2, (0, 0): -n}),
        wl.WeylOp(L, {(1, 2): -1, (0, 1): n}),
    )


def _sl2(p: SuiteParams) -> List[Check]:
    out = []
    for n in p.ns:
        images = sl2.distinguished_images(n)
        bad = [label for lhs, rhs, label in wl.sl2_relation_residuals(*images) if lhs != rhs]
        out.append(check(f"sl2-relations n={n}", not bad, "sl2/relations", f"failing: {bad}"))
        c = do.casimir_scalar(n)
        want = Fraction(n, 2) * (Fraction(n, 2) + 1)
        out.append(check(f"casimir-scalar n={n}", c == want, "sl2/casimir-scalar", f"got {c}, expected {want}"))
        cas = sl2.distinguished_hom(n, sl2.casimir())
        out.append(check(f"casimir-image n={n}", cas == n * (n + 2) * do.Endo.identity(n), "sl2/casimir-image",
                         f"C -> {cas!r}"))
        try:
            descended = tuple(wl.descend_to_On(u, n) for u in _line_model(n))
            ok, witness = descended == images, "descended operators differ from the distinguished images"
        except wl.NotDescendable as exc:
            ok, witness = False, str(exc)
        out.append(check(f"weyl-descent n={n}", ok, "sl2/weyl-descent", witness))

    cas = sl2.casimir()
    central = all(cas * g == g * cas for g in (sl2.E, sl2.H, sl2.F))
    out.append(check("casimir-central", central, "sl2/casimir-central", "C fails to commute with a generator"))
    out.append(_pbw_associativity(p))
    return out


def _random_pbw(rng: random.Random, terms: int = 3, top: int = 3) -> sl2.PBWOp:
    return sl2.PBWOp({(rng.randint(0, top), rng.randint(0, top), rng.randint(0, top)): rng.randint(-5, 5)
                      for _ in range(terms)})


def _pbw_associativity(p: SuiteParams, samples: int = 20) -> Check:
    rng = p.rng("pbw-associativity")
    for k in range(samples):
        a, b, c = (_random_pbw(rng) for _ in range(3))
        if (a * b) * c != a * (b * c):
            return check("pbw-associativity", False, "sl2/pbw", f"sample {k}: ({a}) ({b}) ({c})")
    return check("pbw-associativity", True, "sl2/pbw")


# ---------------------------------------------------------------------------
# symbol algebra of D(O_n) against P_n


def _symbol_algebra(p: SuiteParams) -> List[Check]:
    out = []
    for n in p.ns:
        _, rec = ps.theorem1_iso(n)
        witness = (f"poly dims {rec.poly_dims}, matrix dims {rec.matrix_dims}, "
                   f"brackets {rec.bracket_checks}, basis failures {rec.basis_failures[:3]}, "
                   f"lifted bracket failures {rec.lifted_bracket_failures[:3]}")
        out.append(check(f"symbol-algebra-iso n={n}", rec.passed, "symbol-algebra/cone-quotient", witness))
        out.append(check(f"hilbert-sum n={n}", sum(rec.poly_dims) == (n + 1) ** 2, "symbol-algebra/cone-quotient",
                         f"sum {sum(rec.poly_dims)}"))
        m = ps.inf_moment_map(n)
        ok, w = ps.check_poisson_hom(m)
        out.append(check(f"moment-map-poisson n={n}", ok, "moment-map/infinitesimal", w))
        out.append(check(f"moment-map-surjective n={n}", ps.is_surjective_on_generators(m),
                         "moment-map/infinitesimal", "a generator of P_n is missed"))
        z0, z1, z2 = m.source.gens()
        rel = m(z1 * z1 - z0 * z2)
        out.append(check(f"moment-map-cone-relation n={n}", rel.is_zero(), "moment-map/infinitesimal",
                         f"z1^2 - z0 z2 -> {rel}"))
        out.append(check(f"truncation-poisson n={n}", ps.is_poisson_quotient(m.target), "symbol-algebra/cone-quotient",
                         "truncation ideal is not closed under brackets"))
    plane = ps.symplectic_plane("line", max(p.trunc, 2))
    out.append(check("plane-truncation-not-poisson", not ps.is_poisson_quotient(plane), "limit/plane",
                     "a truncated plane passed as Poisson"))
    return out


# ---------------------------------------------------------------------------
# U(sl2) onto D(O_n)


def _enveloping(p: SuiteParams) -> List[Check]:
    out = []
    for n in p.ns:
        ok, rank = sl2.surjectivity_check(n)
        out.append(check(f"surjectivity n={n}", ok, "enveloping/surjective", f"rank {rank}, need {(n + 1) ** 2}"))
        top = sl2.distinguished_hom(n, sl2.E ** (n + 1))
        out.append(check(f"kernel-power n={n}", top.is_zero(), "enveloping/kernel", f"e^{n + 1} -> {top!r}"))
        below = sl2.distinguished_hom(n, sl2.E ** n)
        out.append(check(f"kernel-sharp n={n}", not below.is_zero(), "enveloping/kernel", f"e^{n} -> 0"))
        cas = sl2.distinguished_hom(n, sl2.casimir())
        out.append(check(f"central-character n={n}", cas == n * (n + 2) * do.Endo.identity(n),
                         "enveloping/kernel", f"C -> {cas!r}"))
        rng = p.rng("pbw-filtration", n)
        samples = [_random_pbw(rng, terms=2, top=2) for _ in range(10)]
        out.append(check(f"filtration-compatible n={n}", sl2.filtration_compat_check(n, samples),
                         "enveloping/filtration", "an image exceeds its nonstandard degree"))
    return out


# ---------------------------------------------------------------------------
# inverse system and the completed plane


def _inverse_system(p: SuiteParams) -> List[Check]:
    out = []
    for n in p.ns:
        m = ps.inverse_system_map(n)
        ok, w = ps.check_poisson_hom(m)
        out.append(check(f"inverse-system-poisson n={n}", ok, "limit/inverse-system", w))
        out.append(check(f"inverse-system-surjective n={n}", ps.is_surjective_on_generators(m),
                         "limit/inverse-system", "a generator is missed"))
        inc, proj = ps.zero_section_and_projection(n)
        x = inc.source.gen("x")
        ok = all(proj(inc(x ** k)) == x ** k for k in range(n + 2))
        y0 = proj.source.gen("y0")
        ok = ok and proj(y0 * y0) == x * x
        out.append(check(f"zero-section n={n}", ok, "limit/degree-zero", "projection o inclusion != id"))

    # literal inclusion {m^a, m^b} in m^(a+b-1), and the degree-two loss the bracket actually has
    for total in range(3, 9):
        if p.trunc <= total:
            continue
        for loss, label in ((1, "literal"), (2, "sharp")):
            witness = None
            for a in range(1, total):
                found = ps.ideal_bracket_witness(a, total - a, p.trunc, loss)
                if found:
                    ma, mb, br = found
                    line = br.presentation
                    witness = f"{{{line.monomial(ma)}, {line.monomial(mb)}}} = {br} leaves m^{total - loss}"
                    break
            out.append(check(f"ideal-bracket-{label} a+b={total}", witness is None,
                             "limit/ideal-bracket", witness))
    return out


# ---------------------------------------------------------------------------
# uniqueness of the resolution map


def _uniqueness(p: SuiteParams) -> List[Check]:
    out = []
    expected = (-1,) + (0,) * p.degree_bound
    try:
        res = ps.uniqueness_solver(p.trunc, p.degree_bound)
        out.append(check("solver-value", res.h == expected, "resolution/uniqueness", f"h = {res.h}"))
        out.append(check("solver-map", res.induced_map == ps.resolution_map(), "resolution/uniqueness",
                         f"map {res.induced_map.to_json()}"))
    except (ps.NoSolution, ps.MultipleSolutions) as exc:
        out.append(check("solver-value", False, "resolution/uniqueness", f"{type(exc).__name__}: {exc}"))
    try:
        first = ps.uniqueness_solver(p.trunc, p.degree_bound, conditions=(0,))
        out.append(check("solver-first-condition", first.h == expected, "resolution/uniqueness",
                         f"h = {first.h}"))
    except (ps.NoSolution, ps.MultipleSolutions) as exc:
        out.append(check("solver-first-condition", False, "resolution/uniqueness", f"{type(exc).__name__}: {exc}"))
    try:
        ps.uniqueness_solver(3, max(p.degree_bound, 2))
        out.append(check("solver-underdetermined", False, "resolution/uniqueness",
                         "truncation 3 pinned every coefficient"))
    except ps.MultipleSolutions:
        out.append(check("solver-underdetermined", True, "resolution/uniqueness"))
    for sign in (-1, 1):
        ok, w = ps.check_poisson_hom(ps.resolution_map(y1_sign=sign))
        out.append(check(f"resolution-sign {sign:+d}", ok == (sign == -1), "resolution/uniqueness",
                         f"y1 -> {sign:+d} x0 x1 gives poisson={ok} ({w})"))
    return out


# ---------------------------------------------------------------------------
# classical diamond


_DIAMOND_VALUES = {"z0": "1/1*x0^1*x1^0", "z1": "-1/1*x0^1*x1^1", "z2": "1/1*x0^1*x1^2"}


def _diamond(p: SuiteParams) -> List[Check]:
    rec = ps.diamond_check()
    out = [check("diamond-commutes", rec.agree, "diamond/classical",
                 f"left {rec.left}, right {rec.right}")]
    for name, want in _DIAMOND_VALUES.items():
        got = rec.left[name], rec.right[name]
        out.append(check(f"diamond-value {name}", got == (want, want), "diamond/classical",
                         f"left {got[0]}, right {got[1]}, expected {want}"))
    for label, m in (("cone-moment-map", ps.cone_moment_map()), ("resolution", ps.resolution_map()),
                     ("classical-fourier", ps.classical_fourier()), ("birational-moment-map", ps.bir_moment_map())):
        ok, w = ps.check_poisson_hom(m)
        out.append(check(f"poisson {label}", ok, "diamond/classical", w))
    if rec.printed_sign_agrees or rec.printed_sign_poisson:
        out.append(check("printed-z1-sign", False, "diamond/moment-map-sign",
                         "the minus sign unexpectedly works"))
    else:
        out.append(noted("printed-z1-sign", "diamond/moment-map-sign",
                         f"z1 -> -xh0*xh1 is not Poisson ({rec.printed_sign_witness}) and the square gives "
                         f"z1 -> {rec.right_printed_sign['z1']}; the sign +xh0*xh1 is used"))
    return out


# ---------------------------------------------------------------------------
# quantum diamond


def _quantum_diamond(p: SuiteParams) -> List[Check]:
    L, D = wl.LINE, wl.DUAL
    out = []
    images = tuple(wl.quantum_fourier(u) for u in wl.sl2_birational_images())
    want = _line_model(-2)
    out.append(check("fourier-images", images == want, "diamond/quantum",
                     f"got {[str(u) for u in images]}"))
    bad = [label for lhs, rhs, label in wl.sl2_relation_residuals(*images) if lhs != rhs]
    out.append(check("fourier-relations", not bad, "diamond/quantum", f"failing {bad}"))
    e, h, f = images
    cas = h * h + 2 * (e * f + f * e)
    out.append(check("fourier-casimir", cas.is_zero(), "diamond/quantum", f"C -> {cas}"))
    cas_eval = sl2.evaluate(sl2.casimir(), images, wl.WeylOp.one(L))
    out.append(check("fourier-casimir-eval", cas_eval.is_zero(), "diamond/quantum", f"C -> {cas_eval}"))
    printed = wl.printed_f_line_image()
    if printed == f:
        out.append(check("printed-f-image", False, "diamond/quantum-f-image", "printed form unexpectedly matches"))
    else:
        out.append(noted("printed-f-image", "diamond/quantum-f-image",
                         f"printed {printed}, computed {f}; the x^2 is read as x"))

    fourier = ps.classical_fourier()
    mismatched = None
    for a in range(7):
        for b in range(7):
            u = wl.WeylOp(D, {(a, b): 1})
            fu = wl.quantum_fourier(u)
            sym = fourier(fourier.source.element(wl.coeff_symbol(u)))
            if wl.order_symbol(fu) != sym.poly or wl.coeff_degree(u) != wl.weyl_order(fu):
                mismatched = (a, b)
                break
        if mismatched:
            break
    out.append(check("fourier-symbols", mismatched is None, "diamond/fourier-symbols",
                     f"xh^{mismatched and mismatched[0]} Dh^{mismatched and mismatched[1]}"))

    rng = p.rng("quantum-fourier")
    bad_pair = None
    for k in range(20):
        u, v = (wl.WeylOp(D, {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-4, 4) for _ in range(3)})
                for _ in range(2))
        if wl.quantum_fourier(u * v) != wl.quantum_fourier(u) * wl.quantum_fourier(v):
            bad_pair = k
            break
    out.append(check("fourier-homomorphism", bad_pair is None, "diamond/quantum", f"sample {bad_pair}"))

    dual_syms = [wl.coeff_symbol(g) for g in _moment_normalized(wl.sl2_birational_images())]
    bir = [img.poly for img in ps.bir_moment_map().images]
    out.append(check("quantum-symbols-birational", dual_syms == bir, "diamond/quantum-symbols",
                     f"{[str(s) for s in dual_syms]} vs {[str(s) for s in bir]}"))
    line_syms = [wl.order_symbol(g) for g in _moment_normalized(images)]
    left = [ps.diamond_left().images[i].poly for i in range(3)]
    out.append(check("quantum-symbols-line", line_syms == left, "diamond/quantum-symbols",
                     f"{[str(s) for s in line_syms]} vs {[str(s) for s in left]}"))
    return out


def _moment_normalized(images):
    """(e, -h/2, -f): the combination matching the generators z0, z1, z2."""
    e, h, f = images
    return e, Fraction(-1, 2) * h, -f


_BATTERIES: Dict[str, Callable[[SuiteParams], List[Check]]] = {
    "filtration": _filtration,
    "symbols": _symbols,
    "sl2": _sl2,
    "theorem1": _symbol_algebra,
    "theorem2": _enveloping,
    "inverse-system": _inverse_system,
    "uniqueness": _uniqueness,
    "diamond": _diamond,
    "quantum-diamond": _quantum_diamond,
}


def run_suite(params: SuiteParams, timing: bool = False) -> VerificationReport:
    """Run one suite (or all of them, in fixed order).

    ``elapsed_ms`` stays 0 unless ``timing`` is set, so reports are
    byte-identical across runs with the same parameters.
    """
    started = time.perf_counter()
    names = SUITES if params.suite == ALL else (params.suite,)
    checks: List[Check] = []
    for name in names:
        for c in _BATTERIES[name](params):
            checks.append(c if params.suite != ALL else Check(f"{name}: {c.name}", c.status, c.anchor, c.witness))
    report = VerificationReport(suite=params.suite, params=asdict(params), checks=checks)
    del report.params["suite"]
    if timing:
        report.elapsed_ms = int((time.perf_counter() - started) * 1000)
    return report
