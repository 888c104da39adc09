import pytest
from hypothesis import given, settings, strategies as st

from modrep.modring import ModulusError, factorize
from modrep.polynomial import (ONE, Polynomial, format_poly, monomial, parse_poly, poly_add,
                               poly_coeff, poly_eval, poly_mul)

M6 = factorize(6)


def P(text, m=6):
    return parse_poly(text, factorize(m))


def test_coeff_examples():
    g = P("3*x1*x2 + 4*x2*x3 + x1*x3")
    assert poly_coeff(g, monomial(1, 2)) == 3
    assert poly_coeff(g, monomial(1)) == 0
    assert poly_coeff(Polynomial.zero(M6), monomial(1, 2)) == 0


def test_add_examples():
    assert poly_add(P("x1 + 4"), P("x2 + 4")) == P("x1 + x2 + 2")
    p = P("2*x1^2 + 5")
    assert p + Polynomial.zero(M6) == p
    s = P("3*x1") + P("3*x1")
    assert s.is_zero() and len(s) == 0


def test_mul_examples():
    assert poly_mul(P("x1 + 4"), P("x1 + 3")) == P("x1^2 + x1")
    p = P("2*x1*x2 + 5")
    assert p * Polynomial.constant(1, M6) == p
    assert P("x1") * P("x2") == P("x1*x2")


def test_eval_examples():
    g = P("3*x1*x2 + 4*x2*x3 + x1*x3")
    assert poly_eval(g, {1: 1, 2: 1, 3: 1}) == 2
    f = P("x1*x2 + x2*x3 + x1*x3")
    assert poly_eval(f, {1: 1, 2: 1, 3: 1}) == 3
    h = P("x1^2 + 5*x2 + 4")
    assert poly_eval(h, {1: 0, 2: 0}) == 4


def test_eval_missing_variable():
    with pytest.raises(KeyError):
        P("x1 + x2").evaluate({1: 1})


def test_modulus_mismatch():
    with pytest.raises(ModulusError):
        P("x1") + P("x1", 10)
    with pytest.raises(ModulusError):
        P("x1") * P("x1", 10)


def test_parse_variants():
    a = P("3*x1^1*x2 + 4*x2^2")
    assert a == P("3x1x2 + 4 x2^2")
    assert a == P("3 * x1 * x2+4*x2*x2")
    assert P("7*x1") == P("x1")
    assert P("0").is_zero()
    assert P("2*3*x1") == P("0")


@pytest.mark.parametrize("bad", ["", "x1 +", "3*y1", "x1 ^", "+x1"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        P(bad)


def test_format_is_canonical():
    g = P("x1*x3 + 4*x2*x3 + 3*x1*x2 + 4*x2 + 3*x1^2")
    assert format_poly(g) == "3*x1^2 + 3*x1*x2 + x1*x3 + 4*x2*x3 + 4*x2"
    assert parse_poly(format_poly(g), M6) == g
    assert format_poly(Polynomial.zero(M6)) == "0"


def test_substitute_and_multilinear():
    q = P("x1^2 + 2*x1*x2")
    sub = q.substitute({1: P("x3 + 1")})
    assert sub == P("x3^2 + 2*x3 + 1 + 2*x3*x2 + 2*x2")
    assert q.multilinear() == P("x1 + 2*x1*x2")


def test_monomial_builder():
    assert monomial() == ONE
    assert monomial(2, 1, 1) == ((1, 2), (2, 1))
    assert monomial((3, 0)) == ONE


@st.composite
def polys(draw, mod):
    nterms = draw(st.integers(0, 5))
    terms = []
    for _ in range(nterms):
        exps = draw(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 3)), max_size=3))
        mono = monomial(*exps)
        if sum(e for _, e in mono) <= 3:
            terms.append((mono, draw(st.integers(0, mod.m - 1))))
    return Polynomial(mod, terms)


@st.composite
def triples(draw):
    mod = factorize(draw(st.integers(2, 30)))
    return mod, draw(polys(mod)), draw(polys(mod)), draw(polys(mod))


@settings(max_examples=200, deadline=None)
@given(triples())
def test_ring_laws(t):
    _, a, b, c = t
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(a.modulus)
    for p in (a + b, a * b):
        assert all(0 < c_ < p.modulus.m for c_ in p.terms.values())


@settings(max_examples=200, deadline=None)
@given(triples(), st.data())
def test_eval_is_homomorphism(t, data):
    mod, a, b, _ = t
    point = {v: data.draw(st.integers(0, mod.m - 1)) for v in range(1, 5)}
    assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point) % mod.m
    assert (a + b).evaluate(point) == (a.evaluate(point) + b.evaluate(point)) % mod.m
