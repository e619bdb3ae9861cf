from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from oracles import close, evaluate, to_sympy
from qgf.coeffring import (
    ConfigurationError,
    DivergentLimit,
    ExpPoly,
    Ring,
    change_ring,
    expand_series,
    limit_param,
    param_series,
    partial_derivative,
    UnsupportedSubstitution,
    substitute,
    variable_to_param,
)

RINGS = {None: Ring("w"), -1: Ring("w", -1), 0: Ring("w", 0), 1: Ring("w", 1)}
POINT = {"x": mpmath.mpf("0.37"), "y": mpmath.mpf("-0.61")}
W = mpmath.mpf("0.23")


@st.composite
def elements(draw, s=None):
    """Random sums of c w^p x^a y^b j^e exp(k x + l w y)."""
    ring = RINGS[s]
    out = ring.zero()
    for _ in range(draw(st.integers(0, 4))):
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
        t = ring.scalar(c, draw(st.integers(-1, 2)))
        t = t * ring.var("x", draw(st.integers(0, 2))) * ring.var("y", draw(st.integers(0, 2)))
        if ring.has_unit and draw(st.booleans()):
            t = t * ring.j
        k, l = draw(st.integers(-2, 2)), draw(st.integers(-2, 2))
        kx = ring.scalar(k) + (ring.j * draw(st.integers(-1, 1)) if ring.has_unit else ring.zero())
        t = t * ring.exp({"x": kx}) * ring.exp({"y": l * ring.p})
        out = out + t
    return out


signatures = st.sampled_from([None, -1, 0, 1])


@given(signatures.flatmap(lambda s: st.tuples(elements(s), elements(s), elements(s))))
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == f.ring.zero()
    assert f * f.ring.one() == f


@given(signatures.flatmap(lambda s: st.tuples(elements(s), elements(s))))
def test_product_matches_numeric_oracle(fg):
    f, g = fg
    assert close(evaluate(f * g, POINT, W), evaluate(f, POINT, W) * evaluate(g, POINT, W))
    assert close(evaluate(f + g, POINT, W), evaluate(f, POINT, W) + evaluate(g, POINT, W))


@given(signatures.flatmap(elements))
def test_canonical_form_is_unique(f):
    # rebuilding term by term yields the identical key set
    g = f.ring.zero()
    for key, c in reversed(list(f.terms.items())):
        g = g + ExpPoly(f.ring, {key: c})
    assert g == f and hash(g) == hash(f)


@given(st.tuples(elements(None), elements(None)))
def test_derivative_is_a_derivation(fg):
    f, g = fg
    d = lambda u: partial_derivative(u, "x")
    assert d(f * g) == d(f) * g + f * d(g)


@given(elements(None))
def test_derivative_matches_sympy(f):
    x = sympy.Symbol("x")
    got = to_sympy(partial_derivative(f, "x"))
    assert sympy.simplify(got - sympy.diff(to_sympy(f), x)) == 0


def test_unit_normal_forms():
    r0, r1, rm = RINGS[0], RINGS[1], RINGS[-1]
    x = "x"
    # j^2 = 0: exp(j x) = 1 + j x
    assert r0.exp({x: r0.j}) == r0.one() + r0.j * r0.var(x)
    # j^2 = 1: exp(j x) = (1+j)/2 e^x + (1-j)/2 e^-x
    ep, em = r1.exp({x: 1}), r1.exp({x: -1})
    assert r1.exp({x: r1.j}) == (r1.one() + r1.j) / 2 * ep + (r1.one() - r1.j) / 2 * em
    # j^2 = -1 keeps j-exponents and combines them
    assert rm.exp({x: rm.j}) * rm.exp({x: rm.j}) == rm.exp({x: 2 * rm.j})
    assert rm.j * rm.j == -rm.one()
    assert rm.j * rm.j_inverse() == rm.one()


@pytest.mark.parametrize("s", [-1, 0, 1])
def test_unit_exponential_numeric(s):
    r = RINGS[s]
    f = r.exp({"x": 3 * r.j}) * r.exp({"y": 2 + r.j})
    assert close(evaluate(f, POINT, W), evaluate(r.exp({"x": 3 * r.j}), POINT, W) * evaluate(r.exp({"y": 2 + r.j}), POINT, W))


def test_ring_mismatch():
    with pytest.raises(ConfigurationError):
        Ring("w").one() + Ring("v").one()
    with pytest.raises(ConfigurationError):
        Ring("w", 3)
    with pytest.raises(ConfigurationError):
        Ring("w").scalar(1, 0, 1)


def test_series_expansion_against_sympy():
    r = RINGS[None]
    w, x = sympy.symbols("w x")
    f = r.p * (r.exp({"x": 2}) - 1)
    got = to_sympy(expand_series(f, 5))
    want = sympy.expand(sympy.series(w * (sympy.exp(2 * x) - 1), x, 0, 6).removeO())
    assert sympy.expand(got - want) == 0


def test_param_series_and_limit():
    r = RINGS[None]
    w, x = sympy.symbols("w x")
    f = (r.exp({"x": 2 * r.p}) - 1) / r.p
    assert limit_param(f) == 2 * r.var("x")
    got = to_sympy(param_series(f, 3))
    want = sympy.expand(sympy.series((sympy.exp(2 * w * x) - 1) / w, w, 0, 4).removeO())
    assert sympy.expand(got - want) == 0
    with pytest.raises(DivergentLimit):
        limit_param(r.scalar(1, -1) * r.var("x"))


def test_substitute_and_linear_exponent_images():
    r = RINGS[None]
    f = r.exp({"t": 1}) * r.var("t")
    g = substitute(f, {"t": -2 * r.var("chi")})
    assert g == -2 * r.var("chi") * r.exp({"chi": -2})


def test_change_ring_round_trip():
    r = Ring("v", 1)
    lam = Ring("lam", 1)
    f = r.p * r.var("a") + r.j * r.exp({"a": 2}) * r.p**2
    moved = change_ring(f, lam, lam.var("v'"))
    assert variable_to_param(moved, "v'", r) == f
    with pytest.raises(UnsupportedSubstitution):
        change_ring(r.exp({"a": r.p}), lam, lam.var("v'"))
