import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgf import catalog_get
from qgf.checks import FAIL, PASS
from qgf.coeffring import Ring
from qgf.liebialg import RMatrix, iso11
from qgf.matrep import D_matrices, Q_matrices, group_element_D, group_element_Q
from qgf.poissonlie import (
    MissingField,
    PoissonStructure,
    SklyaninRecipe,
    bracket_table,
    check_invariant_fields,
    check_jacobi,
    check_poisson_hopf,
    check_table,
    check_weyl_correspondence,
    field_closure,
    field_commutator,
    iso11_fields,
    iso11_recipe,
    poisson_hopf_suite,
    sb2_fields,
    sb2_recipe,
    sklyanin_bracket,
    sklyanin_suite,
    table_iso11,
    table_sb2,
    vfield,
    weyl_suite,
)

R = Ring("w")
ISO = bracket_table(iso11_recipe(R))
SB = bracket_table(sb2_recipe(R))


@st.composite
def functions(draw, coords):
    """Small sums c * x^a * y^b * exp(k z) over the given coordinates."""
    out = R.zero()
    for _ in range(draw(st.integers(1, 3))):
        t = R.scalar(draw(st.integers(-3, 3)), draw(st.integers(0, 1)))
        for x in coords[:2]:
            t = t * R.var(x, draw(st.integers(0, 2)))
        t = t * R.exp({coords[2]: draw(st.integers(-2, 2))})
        out = out + t
    return out


iso_fns = functions(("am", "ap", "chi"))


@given(iso_fns, iso_fns, iso_fns)
def test_bracket_is_a_biderivation(f, g, h):
    assert ISO.bracket(f, g) == -ISO.bracket(g, f)
    assert ISO.bracket(f, g * h) == ISO.bracket(f, g) * h + g * ISO.bracket(f, h)


@given(iso_fns, iso_fns, iso_fns)
def test_jacobi_on_functions(f, g, h):
    P = ISO
    total = P.bracket(f, P.bracket(g, h)) + P.bracket(g, P.bracket(h, f)) + P.bracket(h, P.bracket(f, g))
    assert not total


@given(iso_fns, iso_fns)
def test_vector_fields_are_derivations(f, g):
    for X in iso11_fields(R)[0].values():
        assert X(f * g) == X(f) * g + f * X(g)


def test_sklyanin_tables():
    assert check_table("iso11", ISO, table_iso11(R)).status == PASS
    assert check_table("sb2", SB, table_sb2(R)).status == PASS


def test_literal_right_field_gives_wrong_sign():
    typo = bracket_table(sb2_recipe(R, literal_typo=True))
    res = check_table("sb2", typo, table_sb2(R))
    assert res.status == FAIL
    assert typo.get("H", "Ap") == (R.exp({"Ap": -2 * R.p}) - 1) / R.p
    _, sr = sb2_fields(R, literal_typo=True)
    assert check_invariant_fields(sr, group_element_Q(R), Q_matrices(R), "right", "r").status == FAIL


def test_jacobi_on_coordinates():
    assert check_jacobi(ISO).status == PASS
    assert check_jacobi(SB).status == PASS


def test_corrupted_table_breaks_jacobi():
    table = dict(ISO.table)
    am = R.var("am")
    table[("chi", "am")], table[("am", "chi")] = am, -am
    res = check_jacobi(PoissonStructure(R, ISO.coords, table))
    assert res.status == FAIL


def test_zero_r_gives_zero_bracket():
    zero = bracket_table(iso11_recipe(R, scale=0))
    assert all(not zero.get(a, b) for a, b in zero.pairs())


def test_invariant_symmetric_part_drops_out():
    rec = iso11_recipe(R)
    g = rec.r.algebra
    r = dict(rec.r.r)
    i, j = g.index["Pp"], g.index["Pm"]
    for key in ((i, j), (j, i)):
        r[key] = r.get(key, R.zero()) + 3 * R.p
    shifted = SklyaninRecipe(RMatrix(g, r), rec.left, rec.right, rec.coords)
    assert bracket_table(shifted) == ISO


def test_missing_field():
    left, right = iso11_fields(R)
    del right["Pp"]
    rec = iso11_recipe(R)
    with pytest.raises(MissingField):
        sklyanin_bracket(rec.r, left, right, R.var("am"), R.var("ap"))


def test_field_commutator():
    X = vfield(R, x=R.var("y"))
    Y = vfield(R, y=R.one())
    assert field_commutator(X, Y) == vfield(R, x=-R.one())
    assert field_commutator(X, X) == vfield(R)


def test_field_closure_signs():
    gl, gr = iso11_fields(R)
    g = iso11(R, "pk")
    assert field_closure(gl, g, "l").details["sign"] == 1
    assert field_closure(gr, g, "r").details["sign"] == -1


def test_invariance_of_fields():
    gl, gr = iso11_fields(R)
    D = D_matrices(R)
    G = group_element_D(R)
    assert check_invariant_fields(gl, G, D, "left", "l").status == PASS
    assert check_invariant_fields(gr, G, D, "right", "r").status == PASS
    # sides swapped
    assert check_invariant_fields(gl, G, D, "right", "r").status == FAIL


def test_weyl_correspondence():
    assert weyl_suite().status == PASS
    Fun = catalog_get("funw-iso11")
    scaled = PoissonStructure.from_pairs(R, ISO.coords, {p: 2 * ISO.get(*p) for p in ISO.pairs()})
    assert check_weyl_correspondence(scaled, Fun, name="w").status == FAIL


def test_poisson_hopf():
    assert poisson_hopf_suite().status == PASS
    Fun = catalog_get("funw-iso11")
    table = dict(ISO.table)
    am = R.var("am")
    table[("chi", "am")], table[("am", "chi")] = am, -am
    bad = PoissonStructure(R, ISO.coords, table)
    assert check_poisson_hopf(bad, group_element_D(R), Fun.coproduct).status == FAIL


def test_sklyanin_suite():
    res = sklyanin_suite()
    assert res.status == PASS, res.witness
    assert set(res.details["closure_signs"].values()) == {1, -1}
