import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdv import sl2
from mdv.diffops import Endo, distinguished, order_of
from mdv.expr import ParseError, parse_expression
from mdv.sl2 import E, F, H, PBWOp
from mdv.weyl import WeylOp, sl2_line_images

ORDER = {"e": 0, "h": 1, "f": 2}
# ba -> ab + [b, a] for each out-of-order adjacent pair
SWAP = {
    ("h", "e"): {"eh": 1, "e": 2},   # he = eh + 2e
    ("f", "e"): {"ef": 1, "h": -1},  # fe = ef - h
    ("f", "h"): {"hf": 1, "f": 2},   # fh = hf + 2f
}


@lru_cache(maxsize=None)
def straighten(word: str):
    """PBW coefficients of a word in e, h, f by repeated adjacent swaps."""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if ORDER[a] > ORDER[b]:
            out = {}
            for rep, c in SWAP[(a, b)].items():
                for k, v in straighten(word[:i] + rep + word[i + 2:]).items():
                    out[k] = out.get(k, 0) + c * v
            return {k: v for k, v in out.items() if v}
    return {(word.count("e"), word.count("h"), word.count("f")): 1}


def word_element(word: str) -> PBWOp:
    out = PBWOp.one()
    for g in word:
        out = out * {"e": E, "h": H, "f": F}[g]
    return out


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet="ehf", max_size=7))
def test_product_matches_word_straightening(word):
    assert word_element(word).terms == straighten(word)


def pbw_elements():
    return st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
                           st.integers(-3, 3), max_size=3).map(PBWOp)


@settings(max_examples=50, deadline=None)
@given(pbw_elements(), pbw_elements(), pbw_elements())
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_defining_relations():
    assert E * F - F * E == H
    assert H * E - E * H == 2 * E
    assert H * F - F * H == -2 * F
    assert F * E == E * F - H


def test_casimir_is_central_and_normal():
    c = sl2.casimir()
    assert c == H * H + 4 * E * F - 2 * H
    for g in (E, H, F):
        assert c * g == g * c
    assert str(c) == "-2/1*e^0*h^1*f^0 + 1/1*e^0*h^2*f^0 + 4/1*e^1*h^0*f^1"


def test_nonstandard_degree():
    assert sl2.nonstd_degree(E ** 5) == 0
    assert sl2.nonstd_degree(H * F) == 3
    with pytest.raises(ValueError):
        sl2.nonstd_degree(PBWOp())


@pytest.mark.parametrize("n", range(0, 9))
def test_distinguished_hom(n):
    d0, d1, d2 = distinguished(n)
    assert sl2.distinguished_hom(n, E) == d0
    assert sl2.distinguished_hom(n, H) == -2 * d1
    assert sl2.distinguished_hom(n, F) == -1 * d2
    assert sl2.distinguished_hom(n, sl2.casimir()) == n * (n + 2) * Endo.identity(n)
    assert sl2.distinguished_hom(n, E ** (n + 1)).is_zero()
    assert not sl2.distinguished_hom(n, E ** n).is_zero()


def test_hom_example_n1():
    assert sl2.distinguished_hom(1, H) == Endo.from_json({"n": 1, "entries": [["-1/1", "0/1"], ["0/1", "1/1"]]})


@pytest.mark.parametrize("n", range(0, 7))
def test_surjectivity(n):
    ok, rank = sl2.surjectivity_check(n)
    assert ok and rank == (n + 1) ** 2
    assert len(sl2.spanning_monomials(n)) == (n + 1) ** 2


@pytest.mark.parametrize("n", range(1, 6))
def test_images_respect_nonstandard_filtration(n):
    rng = random.Random(n)
    for _ in range(15):
        u = PBWOp({(rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)): rng.randint(1, 3)})
        assert order_of(sl2.distinguished_hom(n, u)) <= sl2.nonstd_degree(u)
    assert sl2.filtration_compat_check(n, [E * H, F * F, H ** 3])


def test_evaluate_checks_relations():
    with pytest.raises(sl2.RelationViolation):
        d0, d1, d2 = distinguished(2)
        sl2.evaluate(E, (d0, d1, d2), Endo.identity(2))


def test_evaluation_in_weyl_algebra():
    images = sl2_line_images()
    assert sl2.evaluate(sl2.casimir(), images, WeylOp.one()).is_zero()
    e, h, f = images
    assert sl2.evaluate(E * H * F, images, WeylOp.one()) == e * h * f


def test_text_round_trip():
    env = {"e": E, "h": H, "f": F}
    u = parse_expression("f^2*e - 3/4*h*e + 1", env, PBWOp.one())
    assert parse_expression(str(u), env, PBWOp.one()) == u
    assert parse_expression("h^2 + 2*(e*f + f*e)", env, PBWOp.one()) == sl2.casimir()
    with pytest.raises(ParseError):
        parse_expression("e + q", env, PBWOp.one())
    with pytest.raises(ParseError):
        parse_expression("e*(h", env, PBWOp.one())
