import ast
import time

import pytest
import sympy

from qgf import catalog_get
from qgf.checks import FAIL, PASS
from qgf.dualform import (
    check_grading,
    compute_structure_tensor,
    coordinate_lie_algebra,
    dump_tensor,
    extract_dual_commutators,
    standard_exponential_brackets,
    structure_family,
    triples,
    verify_dual_product,
    verify_recurrences,
)


@pytest.fixture(scope="module")
def F():
    return compute_structure_tensor(catalog_get("uw-iso11-ah"), 4)


def test_triples():
    assert len(triples(4)) == 35
    assert len(triples(2, exact=True)) == 6
    assert triples(1) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]


def _commutative_oracle(a, b, D=4):
    """Delta(Am^a Ap^b) with commuting legs, expanded in sympy and truncated
    legwise at degree D."""
    w, A1, A2, P1, P2 = sympy.symbols("w A1 A2 P1 P2")
    e = sum((-2 * w * P1) ** k / sympy.factorial(k) for k in range(D + 1))
    expr = sympy.expand((A1 + e * A2) ** a * (P1 + P2) ** b)
    out = {}
    for (l, m, q, r), coef in sympy.Poly(expr, A1, P1, A2, P2).terms():
        if l + m <= D and q + r <= D:
            out[((l, m, 0), (q, r, 0))] = sympy.expand(coef)
    return out


@pytest.mark.parametrize("ab", [(a, b) for a in range(5) for b in range(5) if a + b <= 4])
def test_commuting_sector_matches_sympy(F, ab):
    a, b = ab
    want = _commutative_oracle(a, b)
    got = {(lmn, qrs): c for (abc, lmn, qrs), c in F.entries.items() if abc == (a, b, 0)}
    w = sympy.Symbol("w")
    assert set(got) == {k for k, v in want.items() if v != 0}
    for k, c in got.items():
        val = sum(sympy.Rational(x.numerator, x.denominator) * w ** key[2] for key, x in c.terms.items())
        assert sympy.expand(val - want[k]) == 0, k


def test_frozen_entries(F):
    w = F.ring.p
    assert F[(1, 0, 0), (0, 1, 0), (1, 0, 0)] == -2 * w
    assert F[(0, 0, 1), (0, 0, 1), (0, 1, 0)] == 2 * w
    assert F[(1, 1, 0), (0, 1, 0), (1, 1, 0)] == -2 * w
    assert F[(0, 0, 1), (0, 1, 0), (0, 0, 1)] == 0
    assert len(F.entries) == 892


def test_recurrences_in_dual_basis_scope(F):
    res = verify_recurrences(F, "q0")
    assert res.status == PASS, res.witness
    assert res.details["ap_row_outside_scope"] == 10


def test_recurrences_as_stated_have_ten_violations(F):
    res = verify_recurrences(F)
    assert res.status == FAIL
    assert res.witness["counts"] == {"Ap-row": 10}
    # every violation has q >= 1
    for v in res.witness["violations"]:
        assert ast.literal_eval(v["index"].split("|")[2])[0] >= 1


def test_corrupted_entry_breaks_recurrence(F):
    bad = F.with_entry(((1, 1, 0), (0, 0, 0), (1, 1, 0)), 2 * F.ring.one())
    assert verify_recurrences(bad, "q0").status == FAIL
    with pytest.raises(ValueError):
        verify_recurrences(F, "everything")


def test_structure_family_up_to_six():
    F6 = compute_structure_tensor(catalog_get("uw-iso11-ah"), 6, sources=[(0, 0, k) for k in range(7)] + [(0, 1, 1)])
    res = structure_family(F6, 6)
    assert res.status == PASS and res.checked == 7


def test_grading(F):
    assert check_grading(F).status == PASS
    bad = F.with_entry(((0, 0, 0), (1, 0, 0), (1, 0, 0)), F.ring.one())
    assert check_grading(bad).status == FAIL


def test_dual_product_all_pairs(F):
    start = time.perf_counter()
    res = verify_dual_product(F)
    assert res.status == PASS, res.witness
    assert res.checked == 35 * 35
    assert time.perf_counter() - start < 120


def test_dual_product_detects_corruption(F):
    bad = F.with_entry(((1, 2, 0), (0, 1, 0), (1, 1, 0)), F.ring.zero())
    res = verify_dual_product(bad)
    assert res.status == FAIL
    assert res.witness["count"] >= 1


def test_dual_product_rejects_excess_degree(F):
    with pytest.raises(ValueError):
        verify_dual_product(F, D=5)


def test_dual_commutators(F):
    res = extract_dual_commutators(F)
    assert res.status == PASS
    assert all(row["match"] for row in res.details["table"].values())


def test_coordinate_lie_algebra():
    res = coordinate_lie_algebra()
    assert res.status == PASS, res.witness
    assert res.details["brackets"]["[f1,ap]"] == "-2*w*exp(2*chi) + 2*w*exp(4*chi)"


def test_standard_exponentials_reported():
    out = standard_exponential_brackets(range(-1, 2))
    assert set(out["table"]) == {f"[g{n},{x}]" for n in (-1, 0, 1) for x in ("a1", "a2")}
    assert out["table"]["[g0,a1]"] == "0"


def test_dump_is_deterministic(F):
    assert dump_tensor(F) == dump_tensor(compute_structure_tensor(catalog_get("uw-iso11-ah"), 4))
