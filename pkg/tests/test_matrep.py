import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from oracles import close, evaluate
from qgf import catalog_get
from qgf.checks import FAIL, PASS
from qgf.coeffring import Ring
from qgf.hopfcore import funv_ck
from qgf.matrep import (
    D_matrices,
    DimensionMismatch,
    Q_matrices,
    SymMatrix,
    T_Dq,
    T_Q,
    UnsupportedSpectrum,
    basis_change_suite,
    check_coproduct_multiplicativity,
    check_exp_inverse,
    check_frt,
    check_golden_matrix,
    check_representation,
    ck_group_matrix,
    ck_plane,
    coaction_check,
    coaction_suite,
    frt_suite,
    group_element_D,
    group_element_Q,
    basis_change_relations,
    matrix_exp_generator,
    minimal_polynomial,
    multiplicativity_suite,
    numeric_matrix,
    r_matrix_D,
    representation_suite,
    specialize_T,
)
from qgf.ncengine import CommutativeAlgebra

R = Ring("w")
# unimodular conjugator, so triangular spectra stay integral
P = sympy.Matrix([[1, 1, 0], [0, 1, 0], [1, 1, 1]])
P_INV = P.inv()


def _numeric_exp(M, t):
    return mpmath.expm(mpmath.matrix(M) * t)


@given(
    diag=st.tuples(*[st.integers(-2, 2)] * 3),
    upper=st.tuples(*[st.integers(-2, 2)] * 3),
    t=st.floats(-1, 1),
)
def test_exp_matches_numeric_oracle(diag, upper, t):
    U = sympy.Matrix([[diag[0], upper[0], upper[1]], [0, diag[1], upper[2]], [0, 0, diag[2]]])
    A = P * U * P_INV
    M = [[int(A[i, j]) for j in range(3)] for i in range(3)]
    E = matrix_exp_generator(numeric_matrix(M, R), "t", R)
    want = _numeric_exp(M, mpmath.mpf(t))
    for i in range(3):
        for j in range(3):
            assert close(evaluate(E[i][j], {"t": mpmath.mpf(t)}, 1), want[i, j])


def test_nilpotent_exp_is_a_finite_series():
    N = [[0, 1, 3], [0, 0, 2], [0, 0, 0]]
    E = matrix_exp_generator(numeric_matrix(N, R), "t", R)
    t = R.var("t")
    want = [[1, t, 3 * t + t * t], [0, 1, 2 * t], [0, 0, 1]]
    assert E == [[R.coerce(v) for v in row] for row in want]


def test_parameter_dependent_spectrum():
    M = [[R.zero(), R.one()], [R.zero(), 2 * R.p]]
    E = matrix_exp_generator(M, "t", R)
    assert E[1][1] == R.exp({"t": 2 * R.p})
    assert E[0][1] == (R.exp({"t": 2 * R.p}) - 1) / (2 * R.p)
    assert check_exp_inverse(M, R).status == PASS


def test_exp_of_zero_is_identity():
    E = matrix_exp_generator(numeric_matrix([[0, 0], [0, 0]], R), "t", R)
    assert E == [[R.one(), R.zero()], [R.zero(), R.one()]]


def test_unsupported_spectrum():
    with pytest.raises(UnsupportedSpectrum):
        matrix_exp_generator(numeric_matrix([[0, 1], [2, 0]], R), "t", R)
    with pytest.raises(UnsupportedSpectrum):
        matrix_exp_generator(numeric_matrix([[0, -1], [1, 0]], R), "t", R)


def test_minimal_polynomial_degree():
    x = sympy.Symbol("x")
    assert minimal_polynomial(sympy.eye(3) * 2, x).as_expr() == x - 2
    assert minimal_polynomial(sympy.Matrix([[0, 1], [0, 0]]), x).as_expr() == x**2


def test_specialization_edge_cases():
    alg = CommutativeAlgebra(R)
    assert specialize_T([], alg, 3) == SymMatrix.identity(alg, 3)
    with pytest.raises(DimensionMismatch):
        specialize_T([("x", numeric_matrix([[0]], R)), ("y", numeric_matrix([[0, 0], [0, 0]], R))], alg)
    with pytest.raises(DimensionMismatch):
        SymMatrix.identity(alg, 2) @ SymMatrix.identity(alg, 3)


def test_group_element_goldens():
    Fun = catalog_get("funw-iso11")
    U = catalog_get("uw-iso11-ah")
    assert check_golden_matrix("D", T_Dq(Fun), group_element_D(Fun.ring)).status == PASS
    assert check_golden_matrix("Q", T_Q(U), group_element_Q(U.ring)).status == PASS
    assert check_golden_matrix("D", T_Dq(Fun), group_element_Q(Fun.ring)[:3]).status == FAIL


def test_basis_change():
    res = basis_change_suite(R)
    assert res.status == PASS, res.witness
    assert [p["name"] for p in res.details["parts"]] == [
        "basis-change", "basis-change[closed-form]", "basis-change[w->0]", "basis-change[second-factorization]", "basis-change[identity]",
    ]


def test_am_relation_limit_against_sympy():
    w, A1, A2 = sympy.symbols("w A1 A2")
    expr = (sympy.exp(-2 * w * A1 + 2 * w * A2) - 2 * sympy.exp(-2 * w * A1) + 1) / (2 * w)
    assert sympy.expand(sympy.limit(expr, w, 0)) == A1 + A2
    # and the frozen closed form is that expression
    got = basis_change_relations(R)["Am"]
    assert got == (R.exp({"A1": -2 * R.p, "A2": 2 * R.p}) - 2 * R.exp({"A1": -2 * R.p}) + 1) / (2 * R.p)


def test_multiplicativity():
    res = multiplicativity_suite()
    assert res.status == PASS, res.witness
    Fun = catalog_get("funw-iso11")
    T = T_Dq(Fun)
    # transposing the group element breaks Delta(G) = G (x) G
    Tt = SymMatrix(T.algebra, [list(r) for r in zip(*T.rows)])
    assert check_coproduct_multiplicativity(Tt, Fun).status == FAIL


def test_frt():
    res = frt_suite()
    assert res.status == PASS, res.witness
    parts = {p["name"]: p for p in res.details["parts"]}
    assert parts["frt[D]"]["checked"] == 81
    assert parts["frt[w=0]"]["status"] == PASS


def test_frt_rejects_scaled_r():
    Fun = catalog_get("funw-iso11")
    res = check_frt(r_matrix_D(Fun.ring, 2), T_Dq(Fun))
    assert res.status == FAIL and res.witness["violations"] > 0


def test_coaction_all_signatures():
    res = coaction_suite()
    assert res.status == PASS, res.witness


@pytest.mark.parametrize("s", [-1, 0, 1])
def test_coaction_rejects_wrong_plane(s):
    H = funv_ck(s)
    G = ck_group_matrix(H, s)
    assert coaction_check(G, ck_plane(s, H.ring)).status == PASS
    assert coaction_check(G, ck_plane(s, H.ring, -H.ring.p)).status == FAIL


def test_representations():
    res = representation_suite()
    assert res.status == PASS, res.witness
    pk = catalog_get("uw-iso11-pk")
    D = dict(D_matrices(pk.ring))
    D["K"] = numeric_matrix([[0, 0, 0], [0, 0, 2], [0, 2, 0]], pk.ring)
    assert check_representation(D, pk).status == FAIL


def test_q_matrices_square_to_zero_in_chi():
    Q = Q_matrices(R)
    z = R.zero()
    sq = [[sum((Q["chi"][i][k] * Q["chi"][k][j] for k in range(4)), z) for j in range(4)] for i in range(4)]
    assert all(not v for row in sq for v in row)
