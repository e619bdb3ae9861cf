"""Poisson-Lie structures on commutative coordinate rings.

Vector fields are derivations given on coordinates.  Sklyanin brackets are
built from an r-matrix and left/right invariant fields; bracket tables are
then checked for Jacobi, against the quantum commutators, and against the
group law.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .checks import CheckResult, combine, fail
from .coeffring import ExpPoly, Ring, partial_derivative, substitute
from .hopfcore import HopfPresentation, funw_iso11, uw_iso11_ah
from .liebialg import LieAlgebraSC, RMatrix, iso11, sb2


class MissingField(KeyError):
    pass


@dataclass(frozen=True)
class VectorField:
    ring: Ring
    coeffs: Mapping  # coordinate -> coefficient

    def __call__(self, f: ExpPoly) -> ExpPoly:
        out = self.ring.zero()
        for x, c in self.coeffs.items():
            d = partial_derivative(f, x)
            if d:
                out = out + c * d
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        keys = set(self.coeffs) | set(other.coeffs)
        z = self.ring.zero()
        return VectorField(self.ring, _nonzero({k: self.coeffs.get(k, z) + other.coeffs.get(k, z) for k in keys}))

    def scale(self, c) -> "VectorField":
        c = self.ring.coerce(c)
        return VectorField(self.ring, _nonzero({k: c * v for k, v in self.coeffs.items()}))

    def __eq__(self, other):
        return isinstance(other, VectorField) and _nonzero(self.coeffs) == _nonzero(other.coeffs)

    def __hash__(self):
        return hash(tuple(sorted(_nonzero(self.coeffs).items(), key=lambda kv: str(kv[0]))))

    def render(self) -> str:
        items = sorted(_nonzero(self.coeffs).items(), key=lambda kv: str(kv[0]))
        return " + ".join(f"({c})*d/d{x}" for x, c in items) or "0"


def _nonzero(d: Mapping) -> dict:
    return {k: v for k, v in d.items() if v}


def vfield(ring: Ring, **coeffs) -> VectorField:
    return VectorField(ring, {k: ring.coerce(v) for k, v in coeffs.items()})


def field_commutator(X: VectorField, Y: VectorField) -> VectorField:
    """[X,Y](x) = X(Y(x)) - Y(X(x)) on each coordinate."""
    coords = set(X.coeffs) | set(Y.coeffs)
    return VectorField(X.ring, _nonzero({x: X(Y.coeffs.get(x, X.ring.zero())) - Y(X.coeffs.get(x, X.ring.zero())) for x in coords}))


# --------------------------------------------------------------------------
# Poisson structures


@dataclass
class PoissonStructure:
    ring: Ring
    coords: tuple
    table: dict = field(default_factory=dict)  # (xi, xj) -> {xi, xj}, both orders

    @classmethod
    def from_pairs(cls, ring: Ring, coords: Sequence, pairs: Mapping) -> "PoissonStructure":
        table = {}
        for (a, b), v in pairs.items():
            v = ring.coerce(v)
            table[(a, b)] = v
            table[(b, a)] = -v
        return cls(ring, tuple(coords), table)

    def get(self, a, b) -> ExpPoly:
        return self.table.get((a, b), self.ring.zero())

    def bracket(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        """{f,g} = sum_ij df/dxi dg/dxj {xi,xj}."""
        out = self.ring.zero()
        df = {x: partial_derivative(f, x) for x in self.coords}
        dg = {x: partial_derivative(g, x) for x in self.coords}
        for a in self.coords:
            if not df[a]:
                continue
            for b in self.coords:
                if a != b and dg[b]:
                    c = self.get(a, b)
                    if c:
                        out = out + df[a] * dg[b] * c
        return out

    def pairs(self):
        return list(itertools.combinations(self.coords, 2))

    def render(self) -> dict:
        return {f"{{{a},{b}}}": self.get(a, b).to_text() for a, b in self.pairs()}

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and all(
            self.get(a, b) == other.get(a, b) for a, b in self.pairs()
        )


def bivector_structure(ring: Ring, coords: Sequence, terms) -> PoissonStructure:
    """Bracket m o (sum c_k d_a ^ d_b): terms are (c, a, b)."""
    pairs: dict = {}
    for c, a, b in terms:
        c = ring.coerce(c)
        pairs[(a, b)] = pairs.get((a, b), ring.zero()) + c
    return PoissonStructure.from_pairs(ring, coords, pairs)


# --------------------------------------------------------------------------
# Sklyanin brackets


@dataclass
class SklyaninRecipe:
    r: RMatrix
    left: Mapping[str, VectorField]
    right: Mapping[str, VectorField]
    coords: tuple


def sklyanin_bracket(r: RMatrix, left: Mapping, right: Mapping, f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """{f,g} = r^{ab} (X^L_a f X^L_b g - X^R_a f X^R_b g)."""
    names = r.algebra.names
    ring = f.ring
    out = ring.zero()
    for (a, b), c in r.r.items():
        na, nb = names[a], names[b]
        for fields in (left, right):
            if na not in fields or nb not in fields:
                raise MissingField(na if na not in fields else nb)
        term = left[na](f) * left[nb](g) - right[na](f) * right[nb](g)
        if term:
            out = out + c * term
    return out


def bracket_table(recipe: SklyaninRecipe) -> PoissonStructure:
    ring = recipe.r.algebra.ring
    pairs = {}
    for a, b in itertools.combinations(recipe.coords, 2):
        pairs[(a, b)] = sklyanin_bracket(recipe.r, recipe.left, recipe.right, ring.var(a), ring.var(b))
    return PoissonStructure.from_pairs(ring, recipe.coords, pairs)


# --------------------------------------------------------------------------
# catalog data


def iso11_fields(ring: Ring):
    """Left and right invariant fields on ISO(1,1) in coordinates (am, ap, chi)."""
    e2, em2 = ring.exp({"chi": 2}), ring.exp({"chi": -2})
    ap, am = ring.var("ap"), ring.var("am")
    left = {"K": vfield(ring, chi=1), "Pp": vfield(ring, ap=e2), "Pm": vfield(ring, am=em2)}
    right = {"K": vfield(ring, chi=1, ap=2 * ap, am=-2 * am), "Pp": vfield(ring, ap=1), "Pm": vfield(ring, am=1)}
    return left, right


def sb2_fields(ring: Ring, literal_typo: bool = False):
    """Left and right invariant fields on SB(2) in coordinates (Am, Ap, H).

    ``literal_typo`` uses exp(-2w Ap) d/dH for the right chi field, the form
    that fails both the invariance test and the expected bracket table.
    """
    w = ring.p
    H, Am = ring.var("H"), ring.var("Am")
    left = {
        "chi": vfield(ring, H=1),
        "ap": vfield(ring, H=2 * w * H, Ap=1),
        "am": vfield(ring, Am=ring.exp({"Ap": -2 * w})),
    }
    right = {
        "chi": vfield(ring, H=ring.exp({"Ap": (2 if not literal_typo else -2) * w})),
        "ap": vfield(ring, Am=-2 * w * Am, Ap=1),
        "am": vfield(ring, Am=1),
    }
    return left, right


def iso11_recipe(ring: Ring | None = None, scale=None) -> SklyaninRecipe:
    ring = ring or Ring("w")
    g = iso11(ring, "pk")
    r = RMatrix.from_wedges(g, (ring.p if scale is None else scale, "K", "Pp"))
    left, right = iso11_fields(ring)
    return SklyaninRecipe(r, left, right, ("am", "ap", "chi"))


def sb2_recipe(ring: Ring | None = None, literal_typo: bool = False) -> SklyaninRecipe:
    ring = ring or Ring("w")
    g = sb2(ring)
    r = RMatrix.from_wedges(g, (ring.one() / ring.p, "ap", "chi"))
    left, right = sb2_fields(ring, literal_typo)
    return SklyaninRecipe(r, left, right, ("Am", "Ap", "H"))


def table_iso11(ring: Ring) -> PoissonStructure:
    w = ring.p
    return PoissonStructure.from_pairs(
        ring,
        ("am", "ap", "chi"),
        {("chi", "ap"): w * (ring.exp({"chi": 2}) - 1), ("chi", "am"): 0, ("ap", "am"): -2 * w * ring.var("am")},
    )


def bivector_iso11(ring: Ring) -> PoissonStructure:
    """m o ((exp(2chi)-1) d_chi ^ d_ap - 2 am d_ap ^ d_am)."""
    return bivector_structure(
        ring, ("am", "ap", "chi"), [(ring.exp({"chi": 2}) - 1, "chi", "ap"), (-2 * ring.var("am"), "ap", "am")]
    )


def table_sb2(ring: Ring) -> PoissonStructure:
    w = ring.p
    e = ring.exp({"Ap": 2 * w})
    return PoissonStructure.from_pairs(
        ring,
        ("Am", "Ap", "H"),
        {("H", "Ap"): (e - 1) / w, ("H", "Am"): -2 * ring.var("Am") * e, ("Ap", "Am"): 0},
    )


# --------------------------------------------------------------------------
# checks


def check_table(name: str, got: PoissonStructure, want: PoissonStructure) -> CheckResult:
    n = 0
    for a, b in want.pairs():
        n += 1
        if got.get(a, b) != want.get(a, b):
            return fail(name, n, pair=f"{{{a},{b}}}", got=got.get(a, b).to_text(), expected=want.get(a, b).to_text())
    return CheckResult(name, checked=n, details={"table": got.render()})


def check_jacobi(P: PoissonStructure, name: str = "jacobi") -> CheckResult:
    n = 0
    ring = P.ring
    for a, b, c in itertools.combinations(P.coords, 3):
        n += 1
        x, y, z = ring.var(a), ring.var(b), ring.var(c)
        total = P.bracket(x, P.bracket(y, z)) + P.bracket(y, P.bracket(z, x)) + P.bracket(z, P.bracket(x, y))
        if total:
            return fail(name, n, triple=[a, b, c], residual=total.to_text())
    return CheckResult(name, checked=n)


def check_weyl_correspondence(
    P: PoissonStructure, H: HopfPresentation, names: Mapping | None = None, name: str = "weyl"
) -> CheckResult:
    """Quantum commutators of the generators equal the Poisson table literally."""
    names = names or {x: x for x in P.coords}
    n = 0
    for a, b in P.pairs():
        n += 1
        q = H.algebra.commutator(H.gen(names[a]), H.gen(names[b]))
        c = P.get(a, b)
        if q != c:
            return fail(name, n, pair=f"[{a},{b}]", quantum=H.render(q), poisson=c.to_text())
    return CheckResult(name, checked=n)


def _tensor_ring_bracket(P: PoissonStructure, F: ExpPoly, G: ExpPoly) -> ExpPoly:
    """Legwise bracket on the commutative tensor square (variables (leg, x))."""
    ring = P.ring
    out = ring.zero()
    for leg in (0, 1):
        dF = {x: partial_derivative(F, (leg, x)) for x in P.coords}
        dG = {x: partial_derivative(G, (leg, x)) for x in P.coords}
        for a in P.coords:
            if not dF[a]:
                continue
            for b in P.coords:
                c = P.get(a, b)
                if a != b and dG[b] and c:
                    out = out + dF[a] * dG[b] * c.map_variables(lambda v, leg=leg: (leg, v))
    return out


def classical_coproduct(group_law: Sequence[Sequence[ExpPoly]], coproduct: Mapping, name: str = "group-law"):
    """Check Delta(G_ij) = sum_k G_ik (x) G_kj with commuting legs.

    Returns the coordinate coproduct (as a substitution) and the check.
    """
    n = len(group_law)
    sub = {x: v for x, v in coproduct.items()}
    cnt = 0
    for i in range(n):
        for j in range(n):
            cnt += 1
            lhs = substitute(group_law[i][j], sub)
            rhs = lhs.ring.zero()
            for k in range(n):
                rhs = rhs + group_law[i][k].map_variables(lambda v: (0, v)) * group_law[k][j].map_variables(lambda v: (1, v))
            if lhs != rhs:
                return sub, fail(name, cnt, entry=[i, j], delta=lhs.to_text(), product=rhs.to_text())
    return sub, CheckResult(name, checked=cnt)


def check_poisson_hopf(P: PoissonStructure, group_law, coproduct: Mapping, name: str = "poisson-hopf") -> CheckResult:
    """Delta is a Poisson map: {Delta x, Delta y} = Delta{x, y}."""
    sub, law = classical_coproduct(group_law, coproduct, f"{name}[group-law]")
    if law.status == "fail":
        return law
    n = 0
    ring = P.ring
    for a, b in P.pairs():
        n += 1
        lhs = _tensor_ring_bracket(P, sub[a], sub[b])
        rhs = substitute(P.bracket(ring.var(a), ring.var(b)), sub)
        if lhs != rhs:
            return fail(name, n, pair=f"{{{a},{b}}}", tensor_bracket=lhs.to_text(), coproduct=rhs.to_text())
    return CheckResult(name, checked=n + law.checked)


def check_invariant_fields(fields: Mapping, G, D: Mapping, side: str, name: str) -> CheckResult:
    """X_a(G) = G D(a) (left) or D(a) G (right), entries commuting."""
    ring = G[0][0].ring
    n = len(G)
    cnt = 0
    for a, X in fields.items():
        M = [[ring.coerce(v) for v in row] for row in D[a]]
        for i in range(n):
            for j in range(n):
                cnt += 1
                if side == "left":
                    want = sum((G[i][k] * M[k][j] for k in range(n)), ring.zero())
                else:
                    want = sum((M[i][k] * G[k][j] for k in range(n)), ring.zero())
                got = X(G[i][j])
                if got != want:
                    return fail(name, cnt, field=a, entry=[i, j], got=got.to_text(), expected=want.to_text())
    return CheckResult(name, checked=cnt)


def field_closure(fields: Mapping, g: LieAlgebraSC, name: str) -> CheckResult:
    """[X_a, X_b] = sign * X_[a,b] with one sign for the whole set."""
    signs = set()
    cnt = 0
    zero = VectorField(g.ring, {})
    for a, b in itertools.combinations(g.names, 2):
        cnt += 1
        Z = field_commutator(fields[a], fields[b])
        want = zero
        for k, c in g.bracket(g.index[a], g.index[b]).items():
            want = want + fields[g.names[k]].scale(c)
        if Z == zero and want == zero:
            continue
        if Z == want:
            signs.add(1)
        elif Z == want.scale(-1):
            signs.add(-1)
        else:
            return fail(name, cnt, pair=f"[{a},{b}]", got=Z.render(), expected=want.render())
    if len(signs) > 1:
        return fail(name, cnt, note="closure signs differ between pairs")
    res = CheckResult(name, checked=cnt)
    res.details["sign"] = signs.pop() if signs else None
    return res


# --------------------------------------------------------------------------
# suites


def _group_law_iso11(ring: Ring):
    from .matrep import group_element_D

    return group_element_D(ring)


def _group_law_sb2(ring: Ring):
    from .matrep import group_element_Q

    return group_element_Q(ring)


def sklyanin_suite() -> CheckResult:
    from .matrep import D_matrices, Q_matrices

    ring = Ring("w")
    parts = []
    iso = bracket_table(iso11_recipe(ring))
    parts.append(check_table("sklyanin[iso11]", iso, table_iso11(ring)))
    biv = bivector_iso11(ring)
    scaled = PoissonStructure.from_pairs(ring, biv.coords, {p: ring.p * biv.get(*p) for p in biv.pairs()})
    parts.append(check_table("sklyanin[iso11 bivector]", iso, scaled))
    sb = bracket_table(sb2_recipe(ring))
    parts.append(check_table("sklyanin[sb2]", sb, table_sb2(ring)))
    parts.append(check_jacobi(iso, "jacobi[iso11]"))
    parts.append(check_jacobi(sb, "jacobi[sb2]"))
    zero = bracket_table(iso11_recipe(ring, scale=0))
    parts.append(
        CheckResult("sklyanin[r=0]", checked=3)
        if all(not zero.get(a, b) for a, b in zero.pairs())
        else fail("sklyanin[r=0]", 3, table=zero.render())
    )
    gl, gr = iso11_fields(ring)
    D = D_matrices(ring)
    G_iso = _group_law_iso11(ring)
    parts.append(check_invariant_fields(gl, G_iso, D, "left", "fields[iso11,left]"))
    parts.append(check_invariant_fields(gr, G_iso, D, "right", "fields[iso11,right]"))
    sl, sr = sb2_fields(ring)
    Q = Q_matrices(ring)
    G_sb = _group_law_sb2(ring)
    parts.append(check_invariant_fields(sl, G_sb, Q, "left", "fields[sb2,left]"))
    parts.append(check_invariant_fields(sr, G_sb, Q, "right", "fields[sb2,right]"))
    g_iso, g_sb = iso11(ring, "pk"), sb2(ring)
    for label, f, g in (("iso11,left", gl, g_iso), ("iso11,right", gr, g_iso), ("sb2,left", sl, g_sb), ("sb2,right", sr, g_sb)):
        parts.append(field_closure(f, g, f"closure[{label}]"))
    out = combine("sklyanin", parts)
    out.details["tables"] = {"iso11": iso.render(), "sb2": sb.render()}
    out.details["closure_signs"] = {
        p["name"]: p.get("details", {}).get("sign") for p in out.details["parts"] if p["name"].startswith("closure")
    }
    return out


def weyl_suite() -> CheckResult:
    from .matrep import T_Dq, T_Q, check_coproduct_multiplicativity

    ring = Ring("w")
    Fun = funw_iso11(ring)
    U = uw_iso11_ah(ring)
    parts = [
        check_weyl_correspondence(bracket_table(iso11_recipe(ring)), Fun, name="weyl[funw<->iso11]"),
        check_weyl_correspondence(bracket_table(sb2_recipe(ring)), U, name="weyl[uw<->sb2]"),
        check_coproduct_multiplicativity(T_Dq(Fun), Fun, "weyl[coproduct D]"),
        check_coproduct_multiplicativity(T_Q(U), U, "weyl[coproduct Q]"),
    ]
    return combine("weyl-correspondence", parts)


def poisson_hopf_suite() -> CheckResult:
    ring = Ring("w")
    Fun = funw_iso11(ring)
    U = uw_iso11_ah(ring)
    iso = bracket_table(iso11_recipe(ring))
    sb = bracket_table(sb2_recipe(ring))
    zero = PoissonStructure.from_pairs(ring, iso.coords, {})
    parts = [
        check_poisson_hopf(iso, _group_law_iso11(ring), Fun.coproduct, "poisson-hopf[iso11]"),
        check_poisson_hopf(sb, _group_law_sb2(ring), U.coproduct, "poisson-hopf[sb2]"),
        check_poisson_hopf(zero, _group_law_iso11(ring), Fun.coproduct, "poisson-hopf[zero]"),
    ]
    return combine("poisson-hopf", parts)
