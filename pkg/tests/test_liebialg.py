import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qgf import catalog_get
from qgf.checks import FAIL, PASS
from qgf.coeffring import Ring
from qgf.liebialg import (
    Cocommutator,
    DegeneratePairing,
    LieAlgebraSC,
    RMatrix,
    bialgebra_suite,
    check_bialgebra_duality,
    check_cocycle,
    check_cojacobi,
    check_cybe,
    check_first_order,
    check_first_order_dual,
    check_mcybe,
    classical_limit,
    coboundary_cocommutator,
    delta_noncoboundary,
    duality_suite,
    expected_delta_hat,
    expected_delta_n,
    is_totally_antisymmetric,
    iso11,
    pairing_matrix,
    r_hat,
    r_nonstandard,
    r_standard,
    sb2,
    schouten,
)

R = Ring("w")
PK = iso11(R, "pk")
AH = iso11(R, "ah")
SB = sb2(R)
W = sympy.Symbol("w")


def _sym(x):
    return sum((sympy.Rational(c.numerator, c.denominator) * W ** k[2] for k, c in x.terms.items()), sympy.Integer(0))


def _adjoint(g):
    mats = []
    for i in range(g.dim):
        M = sympy.zeros(g.dim, g.dim)
        for j in range(g.dim):
            for k, c in g.bracket(i, j).items():
                M[k, j] += _sym(c)
        mats.append(M)
    return mats


def _schouten_oracle(g, r):
    """[[r,r]] through the (faithful) adjoint representation."""
    ad = _adjoint(g)
    I = sympy.eye(g.dim)
    kron = sympy.kronecker_product

    def place(i, j, legs):
        factors = [I, I, I]
        factors[legs[0]], factors[legs[1]] = ad[i], ad[j]
        return kron(*factors)

    def r_at(legs):
        return sum((_sym(v) * place(i, j, legs) for (i, j), v in r.r.items()), sympy.zeros(g.dim**3))

    r12, r13, r23 = r_at((0, 1)), r_at((0, 2)), r_at((1, 2))
    comm = lambda A, B: A * B - B * A
    return (comm(r12, r13) + comm(r12, r23) + comm(r13, r23)).applyfunc(sympy.expand)


def _image(g, t):
    ad = _adjoint(g)
    out = sympy.zeros(g.dim**3)
    for (i, j, k), v in t.items():
        out += _sym(v) * sympy.kronecker_product(ad[i], ad[j], ad[k])
    return out.applyfunc(sympy.expand)


wedge_coefs = st.tuples(*[st.integers(-3, 3)] * 3)


@pytest.mark.parametrize("g", [PK, SB], ids=["iso11", "sb2"])
@given(coefs=wedge_coefs)
def test_schouten_matches_adjoint_oracle(g, coefs):
    a, b, c = g.names
    r = RMatrix.from_wedges(g, (coefs[0], a, b), (coefs[1], a, c), (coefs[2], b, c))
    s = schouten(r)
    assert is_totally_antisymmetric(s)
    assert _image(g, s) == _schouten_oracle(g, r)


@pytest.mark.parametrize("g", [PK, SB], ids=["iso11", "sb2"])
@given(coefs=wedge_coefs)
def test_coboundaries_are_cocycles(g, coefs):
    a, b, c = g.names
    r = RMatrix.from_wedges(g, (coefs[0], a, b), (coefs[1], a, c), (coefs[2], b, c))
    assert check_cocycle(coboundary_cocommutator(r)).status == PASS
    # Lambda^3 is one-dimensional and ad_x acts on it by the trace of ad_x:
    # iso(1,1) is unimodular, sb(2) is not
    passes = check_mcybe(r).status == PASS
    assert passes if g is PK else passes == (not schouten(r))


def test_jacobi_violation_rejected():
    with pytest.raises(ValueError):
        LieAlgebraSC(R, ["x", "y", "z"], {("x", "y"): {"z": 1}, ("y", "z"): {"y": 1}, ("x", "z"): {"x": 1}})


def test_nonstandard_r_solves_cybe():
    assert check_cybe(r_nonstandard(PK)).status == PASS
    assert check_cybe(RMatrix.from_wedges(PK, (1, "Pp", "Pm"))).status == PASS
    assert check_cybe(r_hat(SB)).status == PASS


def test_standard_r_is_modified():
    rs = r_standard(PK)
    s = schouten(rs)
    assert check_cybe(rs).status == FAIL
    assert PK.render(s) == "(-4)*K^Pp^Pm"
    res = check_mcybe(rs)
    assert res.status == PASS and not res.details["schouten_zero"]


def test_noncoboundary_cocommutator():
    d = delta_noncoboundary(PK)
    assert check_cocycle(d).status == PASS
    assert check_cojacobi(d).status == PASS


def test_ad_hoc_cocommutator_fails_cocycle():
    d = Cocommutator(PK, {"Pp": PK.wedge("K", "Pm")})
    res = check_cocycle(d)
    assert res.status == FAIL
    assert "K^Pm" in res.witness["residual"]


def test_cojacobi_failure_detected():
    # delta(x) = x^y, delta(y) = y^z, delta(z) = z^x on an abelian algebra
    g = LieAlgebraSC(R, ["x", "y", "z"], {})
    d = Cocommutator(g, {"x": g.wedge("x", "y"), "y": g.wedge("y", "z"), "z": g.wedge("z", "x")})
    assert check_cojacobi(d).status == FAIL


def test_coboundary_closed_forms():
    w = R.p
    assert coboundary_cocommutator(r_nonstandard(AH, w)) == expected_delta_n(AH)
    assert coboundary_cocommutator(r_hat(SB)) == expected_delta_hat(SB)
    assert expected_delta_n(AH).render()["H"] == "(-2*w)*Ap^H"


def test_duality_pairing():
    res = duality_suite()
    assert res.status == PASS
    assert res.details["free"] == ["c0"]
    assert res.details["pairing"] == {"<Am,am>": "1", "<Ap,ap>": "1", "<H,chi>": "1"}


def _duality_data():
    d1 = coboundary_cocommutator(r_nonstandard(AH, R.p))
    d2 = coboundary_cocommutator(r_hat(SB))
    return d1, d2


def test_scaled_pairing_fails_with_witness():
    d1, d2 = _duality_data()
    M = pairing_matrix(R, [1, 2, 1])
    res = check_bialgebra_duality(AH, d1, SB, d2, M)
    assert res.status == FAIL and res.witness


def test_free_constant_really_is_free():
    d1, d2 = _duality_data()
    assert check_bialgebra_duality(AH, d1, SB, d2, pairing_matrix(R, [5, 1, 1])).status == PASS


def test_degenerate_pairing_raises():
    d1, d2 = _duality_data()
    with pytest.raises(DegeneratePairing):
        check_bialgebra_duality(AH, d1, SB, d2, pairing_matrix(R, [1, 0, 1]))


def test_abelian_self_duality():
    g = LieAlgebraSC(R, ["x", "y"], {})
    d = Cocommutator(g, {})
    assert check_bialgebra_duality(g, d, g, d, pairing_matrix(R, [1, 1])).status == PASS


def test_first_order_coproducts():
    assert check_first_order().status == PASS
    assert check_first_order_dual().status == PASS


def test_classical_limit_of_quantum_algebra():
    g = classical_limit(catalog_get("uw-iso11-pk").algebra)
    assert g.c == LieAlgebraSC(R, ["Pm", "Pp", "K"], {("K", "Pp"): {"Pp": 2}, ("K", "Pm"): {"Pm": -2}}).c
    # the coordinate algebra becomes commutative
    assert classical_limit(catalog_get("funw-iso11").algebra).c == {}


def test_bialgebra_suite():
    res = bialgebra_suite()
    assert res.status == PASS, res.witness
    assert res.details["schouten_r_s"] == "(-4)*K^Pp^Pm"
