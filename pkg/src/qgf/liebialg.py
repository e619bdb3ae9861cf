"""Finite-dimensional Lie bialgebras: Schouten bracket, (modified) CYBE,
coboundary cocommutators, cocycle and co-Jacobi conditions, and duality.

Tensors over the basis are dicts from index tuples to scalar ``ExpPoly``
values; ``a ^ b`` means ``a (x) b - b (x) a``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass
from typing import Mapping, Sequence

import sympy

from .checks import CheckResult, combine, fail
from .coeffring import ExpPoly, Ring, expand_series, limit_param, param_coefficient, param_series
from .hopfcore import HopfPresentation, funw_iso11, uw_iso11_ah
from .ncengine import TowerPresentation


class DegeneratePairing(ValueError):
    pass


def _add(out: dict, key, c) -> None:
    v = out.get(key)
    v = c if v is None else v + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _clean(t: dict) -> dict:
    return {k: v for k, v in t.items() if v}


class LieAlgebraSC:
    """Lie algebra given by structure constants [e_i, e_j] = sum_k c^k_ij e_k."""

    def __init__(self, ring: Ring, names: Sequence[str], brackets: Mapping[tuple, Mapping[str, object]]):
        self.ring = ring
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.dim = len(self.names)
        c: dict = {}
        for (a, b), rhs in brackets.items():
            i, j = self.index[a], self.index[b]
            for name, coef in rhs.items():
                coef = ring.coerce(coef)
                k = self.index[name]
                _add(c, (i, j, k), coef)
                _add(c, (j, i, k), -coef)
        self.c = c
        bad = self.jacobi_residual()
        if bad:
            raise ValueError(f"structure constants violate Jacobi: {bad}")

    def bracket(self, i: int, j: int) -> dict:
        return {k: v for (a, b, k), v in self.c.items() if a == i and b == j}

    def jacobi_residual(self):
        for i, j, k in itertools.combinations(range(self.dim), 3):
            total: dict = {}
            for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                for m, cyz in self.bracket(y, z).items():
                    for n, c2 in self.bracket(x, m).items():
                        _add(total, n, cyz * c2)
            if total:
                return (self.names[i], self.names[j], self.names[k])
        return None

    def ad(self, x: int, t: dict, leg: int) -> dict:
        """ad_x acting on one leg of a tensor."""
        out: dict = {}
        for key, v in t.items():
            for k, c in self.bracket(x, key[leg]).items():
                _add(out, key[:leg] + (k,) + key[leg + 1:], v * c)
        return out

    def ad_all(self, x: int, t: dict) -> dict:
        out: dict = {}
        order = len(next(iter(t))) if t else 0
        for leg in range(order):
            for k, v in self.ad(x, t, leg).items():
                _add(out, k, v)
        return out

    def wedge(self, a: str, b: str, coef=1) -> dict:
        i, j = self.index[a], self.index[b]
        coef = self.ring.coerce(coef)
        out: dict = {}
        _add(out, (i, j), coef)
        _add(out, (j, i), -coef)
        return out

    def render(self, t: dict) -> str:
        """Text in the strictly increasing wedge basis (antisymmetric input)."""
        if not t:
            return "0"
        parts = []
        for key in sorted(t):
            if list(key) == sorted(key) and len(set(key)) == len(key):
                parts.append(f"({t[key]})*" + "^".join(self.names[i] for i in key))
        return " + ".join(parts) if parts else "<non-antisymmetric>"


@dataclass
class RMatrix:
    algebra: LieAlgebraSC
    r: dict

    @classmethod
    def from_wedges(cls, g: LieAlgebraSC, *terms) -> "RMatrix":
        """terms: (coef, a, b) meaning coef * a ^ b."""
        r: dict = {}
        for coef, a, b in terms:
            for k, v in g.wedge(a, b, coef).items():
                _add(r, k, v)
        return cls(g, r)

    def is_antisymmetric(self) -> bool:
        return all(self.r.get((j, i), None) == -v for (i, j), v in self.r.items())


def schouten(r: RMatrix) -> dict:
    """[[r,r]] = [r12,r13] + [r12,r23] + [r13,r23]."""
    g = r.algebra
    out: dict = {}
    items = list(r.r.items())
    for (i, j), a in items:
        for (k, l), b in items:
            ab = a * b
            for m, c in g.bracket(i, k).items():
                _add(out, (m, j, l), ab * c)
            for m, c in g.bracket(j, k).items():
                _add(out, (i, m, l), ab * c)
            for m, c in g.bracket(j, l).items():
                _add(out, (i, k, m), ab * c)
    return out


def is_totally_antisymmetric(t: dict) -> bool:
    for key, v in t.items():
        for perm in itertools.permutations(range(len(key))):
            sign = _perm_sign(perm)
            other = tuple(key[p] for p in perm)
            if t.get(other) != (v if sign > 0 else -v):
                return False
    return True


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def check_cybe(r: RMatrix, name: str = "cybe") -> CheckResult:
    s = schouten(r)
    if s:
        return fail(name, 1, schouten=r.algebra.render(s))
    return CheckResult(name, checked=1)


def check_mcybe(r: RMatrix, name: str = "mcybe") -> CheckResult:
    """[[r,r]] is ad-invariant."""
    g = r.algebra
    s = schouten(r)
    for x in range(g.dim):
        res = g.ad_all(x, s)
        if res:
            return fail(name, x + 1, generator=g.names[x], residual=g.render(res))
    return CheckResult(name, checked=g.dim, details={"schouten": g.render(s), "schouten_zero": not s})


class Cocommutator:
    def __init__(self, algebra: LieAlgebraSC, images: Mapping[str, dict]):
        self.algebra = algebra
        self.images = {algebra.index[k]: _clean(v) for k, v in images.items()}
        for i in range(algebra.dim):
            self.images.setdefault(i, {})

    def __call__(self, x: int) -> dict:
        return self.images[x]

    def apply(self, t: dict) -> dict:
        """delta on a linear combination {index: coef}."""
        out: dict = {}
        for x, c in t.items():
            for k, v in self.images[x].items():
                _add(out, k, c * v)
        return out

    def render(self) -> dict:
        return {self.algebra.names[i]: self.algebra.render(v) for i, v in sorted(self.images.items())}

    def __eq__(self, other):
        return isinstance(other, Cocommutator) and self.images == other.images


def coboundary_cocommutator(r: RMatrix) -> Cocommutator:
    """delta(x) = (ad_x (x) 1 + 1 (x) ad_x) r."""
    g = r.algebra
    return Cocommutator(g, {g.names[x]: g.ad_all(x, r.r) for x in range(g.dim)})


def check_cocycle(delta: Cocommutator, name: str = "cocycle") -> CheckResult:
    g = delta.algebra
    n = 0
    for x, y in itertools.combinations(range(g.dim), 2):
        n += 1
        lhs = delta.apply(g.bracket(x, y))
        rhs = dict(g.ad_all(x, delta(y)))
        for k, v in g.ad_all(y, delta(x)).items():
            _add(rhs, k, -v)
        if lhs != rhs:
            diff = dict(lhs)
            for k, v in rhs.items():
                _add(diff, k, -v)
            return fail(name, n, pair=f"[{g.names[x]},{g.names[y]}]", residual=g.render(diff))
    return CheckResult(name, checked=n)


def check_cojacobi(delta: Cocommutator, name: str = "cojacobi") -> CheckResult:
    g = delta.algebra
    for x in range(g.dim):
        first = delta(x)
        dd: dict = {}
        for (i, j), c in first.items():
            for (a, b), c2 in delta(i).items():
                _add(dd, (a, b, j), c * c2)
        total: dict = {}
        for (a, b, c), v in dd.items():
            for key in ((a, b, c), (b, c, a), (c, a, b)):
                _add(total, key, v)
        if total:
            return fail(name, x + 1, generator=g.names[x], residual=g.render(total))
    return CheckResult(name, checked=g.dim)


def check_bialgebra_duality(
    g1: LieAlgebraSC, d1: Cocommutator, g2: LieAlgebraSC, d2: Cocommutator, pairing: Sequence[Sequence]
) -> CheckResult:
    """<d1(x), xi (x) eta> = <x, [xi,eta]> and <d2(xi), x (x) y> = <xi, [x,y]>."""
    name = "bialgebra-duality"
    ring = g1.ring
    M = [[ring.coerce(v) for v in row] for row in pairing]
    if _det(M, ring) == ring.zero():
        raise DegeneratePairing("pairing matrix is degenerate")

    def pair2(t: dict, a: int, b: int, transpose: bool) -> ExpPoly:
        out = ring.zero()
        for (i, j), v in t.items():
            out = out + v * (M[a][i] * M[b][j] if transpose else M[i][a] * M[j][b])
        return out

    def pair1(vec: dict, a: int, transpose: bool) -> ExpPoly:
        out = ring.zero()
        for i, v in vec.items():
            out = out + v * (M[a][i] if transpose else M[i][a])
        return out

    n = 0
    for x in range(g1.dim):
        for a in range(g2.dim):
            for b in range(g2.dim):
                n += 1
                lhs = pair2(d1(x), a, b, False)
                rhs = pair1(g2.bracket(a, b), x, True)
                if lhs != rhs:
                    return fail(
                        name, n, side="delta1", x=g1.names[x], pair=f"{g2.names[a]},{g2.names[b]}",
                        residual=str(lhs - rhs),
                    )
    for a in range(g2.dim):
        for x in range(g1.dim):
            for y in range(g1.dim):
                n += 1
                lhs = pair2(d2(a), x, y, True)
                rhs = pair1(g1.bracket(x, y), a, False)
                if lhs != rhs:
                    return fail(
                        name, n, side="delta2", xi=g2.names[a], pair=f"{g1.names[x]},{g1.names[y]}",
                        residual=str(lhs - rhs),
                    )
    return CheckResult(name, checked=n)


def _det(M, ring: Ring) -> ExpPoly:
    n = len(M)
    total = ring.zero()
    for perm in itertools.permutations(range(n)):
        term = ring.one() * _perm_sign(perm)
        for i, p in enumerate(perm):
            term = term * M[i][p]
        total = total + term
    return total


# --------------------------------------------------------------------------
# sympy bridge for the pairing search


def _to_sympy(x: ExpPoly, w: sympy.Symbol):
    if not x.is_scalar() or x.has_unit_part():
        raise ValueError("only parameter polynomials convert")
    return sum((sympy.Rational(c.numerator, c.denominator) * w ** p for (_, _, p, _), c in x.terms.items()), sympy.Integer(0))


def solve_diagonal_pairing(g1: LieAlgebraSC, d1: Cocommutator, g2: LieAlgebraSC, d2: Cocommutator) -> dict:
    """Find all diagonal pairings <e_i, f_i> = c_i making the bialgebras dual.

    Returns the sympy solution list (each a dict symbol -> value) and the
    normalised choice with free constants set to 1.
    """
    w = sympy.Symbol(g1.ring.param, nonzero=True)
    cs = sympy.symbols(f"c0:{g1.dim}", nonzero=True)
    eqs = []
    for x in range(g1.dim):
        for a in range(g2.dim):
            for b in range(g2.dim):
                lhs = sum((_to_sympy(v, w) * (cs[i] if i == a else 0) * (cs[j] if j == b else 0)
                           for (i, j), v in d1(x).items()), sympy.Integer(0))
                rhs = sum((_to_sympy(v, w) * (cs[x] if k == x else 0) for k, v in g2.bracket(a, b).items()), sympy.Integer(0))
                eqs.append(sympy.expand(lhs - rhs))
    for a in range(g2.dim):
        for x in range(g1.dim):
            for y in range(g1.dim):
                lhs = sum((_to_sympy(v, w) * (cs[i] if i == x else 0) * (cs[j] if j == y else 0)
                           for (i, j), v in d2(a).items()), sympy.Integer(0))
                rhs = sum((_to_sympy(v, w) * (cs[a] if k == a else 0) for k, v in g1.bracket(x, y).items()), sympy.Integer(0))
                eqs.append(sympy.expand(lhs - rhs))
    eqs = [e for e in eqs if e != 0]
    sols = sympy.solve(eqs, cs, dict=True) if eqs else [{}]
    if not sols:
        return {"solutions": [], "normalized": None}
    sol = sols[0]
    normalized = []
    for i, c in enumerate(cs):
        v = sympy.sympify(sol.get(c, c)).subs({cc: 1 for cc in cs})
        normalized.append(v)
    free = [str(c) for c in cs if c not in sol]
    return {
        "solutions": [{str(k): str(v) for k, v in s.items()} for s in sols],
        "free": free,
        "normalized": [str(v) for v in normalized],
        "values": normalized,
    }


def pairing_matrix(ring: Ring, values) -> list:
    """Diagonal pairing matrix from sympy rationals / rational multiples of w^p."""
    n = len(values)
    M = [[ring.zero()] * n for _ in range(n)]
    w = sympy.Symbol(ring.param, nonzero=True)
    for i, v in enumerate(values):
        out = ring.zero()
        for term in sympy.Add.make_args(sympy.expand(sympy.sympify(v))):
            coef, p = term.as_coeff_exponent(w)
            coef = sympy.Rational(coef)
            out = out + ring.scalar(Fraction(int(coef.p), int(coef.q)), int(p))
        M[i][i] = out
    return M


# --------------------------------------------------------------------------
# catalog algebras and bialgebras


def iso11(ring: Ring | None = None, basis: str = "pk") -> LieAlgebraSC:
    ring = ring or Ring("w")
    if basis == "pk":
        return LieAlgebraSC(ring, ["K", "Pp", "Pm"], {("K", "Pp"): {"Pp": 2}, ("K", "Pm"): {"Pm": -2}})
    return LieAlgebraSC(ring, ["Am", "Ap", "H"], {("H", "Ap"): {"Ap": 2}, ("H", "Am"): {"Am": -2}})


def sb2(ring: Ring | None = None) -> LieAlgebraSC:
    """Linearised coordinate algebra: [chi,ap] = 2w chi, [ap,am] = -2w am."""
    ring = ring or Ring("w")
    w = ring.p
    return LieAlgebraSC(ring, ["am", "ap", "chi"], {("chi", "ap"): {"chi": 2 * w}, ("ap", "am"): {"am": -2 * w}})


def classical_limit(P: TowerPresentation) -> LieAlgebraSC:
    """Lie algebra of the w -> 0 limit of the rules (must be linear)."""
    brackets = {}
    for (hi, lo), c in P.rules.items():
        lim = limit_param(c)
        rhs = {}
        for (mono, lin, _, jb), coef in lim.terms.items():
            if lin or jb or len(mono) != 1 or mono[0][1] != 1:
                raise ValueError(f"limit of [{P.generators[hi]},{P.generators[lo]}] is not linear: {lim}")
            rhs[mono[0][0]] = coef
        brackets[(P.generators[hi], P.generators[lo])] = rhs
    return LieAlgebraSC(P.ring, P.generators, brackets)


def r_nonstandard(g: LieAlgebraSC, scale=1) -> RMatrix:
    names = set(g.names)
    if {"K", "Pp"} <= names:
        return RMatrix.from_wedges(g, (scale, "K", "Pp"))
    return RMatrix.from_wedges(g, (scale, "H", "Ap"))


def r_standard(g: LieAlgebraSC) -> RMatrix:
    return RMatrix.from_wedges(g, (1, "K", "Pm"), (1, "K", "Pp"))


def r_hat(g: LieAlgebraSC) -> RMatrix:
    w = g.ring.p
    return RMatrix.from_wedges(g, (g.ring.one() / w, "ap", "chi"))


def delta_noncoboundary(g: LieAlgebraSC) -> Cocommutator:
    """delta(K) = 0, delta(P+-) = P+- ^ K."""
    return Cocommutator(g, {"K": {}, "Pp": g.wedge("Pp", "K"), "Pm": g.wedge("Pm", "K")})


def expected_delta_n(g: LieAlgebraSC) -> Cocommutator:
    w = g.ring.p
    return Cocommutator(
        g, {"Ap": {}, "Am": g.wedge("Am", "Ap", 2 * w), "H": g.wedge("H", "Ap", 2 * w)}
    )


def expected_delta_hat(g: LieAlgebraSC) -> Cocommutator:
    return Cocommutator(g, {"ap": g.wedge("chi", "ap", 2), "am": g.wedge("chi", "am", -2), "chi": {}})


# --------------------------------------------------------------------------
# first-order consistency with the quantum coproducts


def _as_tensor_symbol(g: LieAlgebraSC, t: dict, ring: Ring) -> ExpPoly:
    out = ring.zero()
    for (i, j), v in t.items():
        out = out + v * ring.var((0, g.names[i])) * ring.var((1, g.names[j]))
    return out


def antisymmetrized_coproduct(H: HopfPresentation, g: str) -> ExpPoly:
    d = H.delta(H.gen(g))
    return d - H.T2.swap(d)


def check_first_order(H: HopfPresentation | None = None) -> CheckResult:
    """(Delta - sigma Delta)(x) to first order in w equals delta^{(n)}(x)."""
    H = H or uw_iso11_ah()
    g = iso11(H.ring, "ah")
    expected = expected_delta_n(g)
    n = 0
    for x in H.generators:
        n += 1
        full = param_series(antisymmetrized_coproduct(H, x), 1)
        got = param_coefficient(full, 1) * H.ring.p
        want = _as_tensor_symbol(g, expected(g.index[x]), H.ring)
        if got != want:
            return fail("first-order[uw]", n, generator=x, got=H.T2.render(got), expected=H.T2.render(want))
    return CheckResult("first-order[uw]", checked=n)


def check_first_order_dual(Fun: HopfPresentation | None = None) -> CheckResult:
    """Quadratic part of (Delta - sigma Delta) on the coordinates equals the
    linearised cocommutator."""
    Fun = Fun or funw_iso11()
    g = sb2(Fun.ring)
    expected = expected_delta_hat(g)
    blocks = [{(leg, x) for x in Fun.generators} for leg in (0, 1)]
    n = 0
    for x in Fun.generators:
        n += 1
        full = expand_series(antisymmetrized_coproduct(Fun, x), 2)
        quad = ExpPoly(Fun.ring, {k: c for k, c in full.terms.items() if sum(e for _, e in k[0]) == 2})
        want = _as_tensor_symbol(g, expected(g.index[x]), Fun.ring)
        if quad != want:
            return fail("first-order[fun]", n, generator=x, got=Fun.T2.render(quad), expected=Fun.T2.render(want))
    return CheckResult("first-order[fun]", checked=n)


def bialgebra_suite(ring: Ring | None = None) -> CheckResult:
    ring = ring or Ring("w")
    w = ring.p
    pk = iso11(ring, "pk")
    ah = iso11(ring, "ah")
    s2 = sb2(ring)
    parts = []
    rn = r_nonstandard(pk)
    rs = r_standard(pk)
    parts.append(check_cybe(rn, "cybe[r_n]"))
    rs_cybe = check_cybe(rs, "cybe[r_s]")
    parts.append(
        CheckResult("schouten-nonzero[r_s]", checked=1)
        if rs_cybe.status == "fail"
        else fail("schouten-nonzero[r_s]", 1, note="[[r_s,r_s]] vanished")
    )
    parts.append(check_mcybe(rs, "mcybe[r_s]"))
    dnc = delta_noncoboundary(pk)
    parts.append(check_cocycle(dnc, "cocycle[nc]"))
    parts.append(check_cojacobi(dnc, "cojacobi[nc]"))
    for label, r in (("r_n", rn), ("r_s", rs), ("r_hat", r_hat(s2))):
        d = coboundary_cocommutator(r)
        parts.append(check_cocycle(d, f"cocycle[{label}]"))
        parts.append(check_cojacobi(d, f"cojacobi[{label}]"))
    dn = coboundary_cocommutator(r_nonstandard(ah, w))
    parts.append(
        CheckResult("coboundary[iso11]", checked=3)
        if dn == expected_delta_n(ah)
        else fail("coboundary[iso11]", 3, got=dn.render())
    )
    dh = coboundary_cocommutator(r_hat(s2))
    parts.append(
        CheckResult("coboundary[sb2]", checked=3)
        if dh == expected_delta_hat(s2)
        else fail("coboundary[sb2]", 3, got=dh.render())
    )
    parts.append(check_cybe(r_hat(s2), "cybe[r_hat]"))
    parts.append(check_first_order())
    parts.append(check_first_order_dual())
    res = combine("bialgebra", parts)
    res.details["schouten_r_s"] = pk.render(schouten(rs))
    return res


def duality_suite(ring: Ring | None = None) -> CheckResult:
    """iso(1,1) with delta^{(n)} against sb(2) with the linearised delta."""
    ring = ring or Ring("w")
    w = ring.p
    ah = iso11(ring, "ah")
    s2 = sb2(ring)
    d1 = coboundary_cocommutator(r_nonstandard(ah, w))
    d2 = coboundary_cocommutator(r_hat(s2))
    found = solve_diagonal_pairing(ah, d1, s2, d2)
    if found["normalized"] is None:
        return fail("bialgebra-duality", 0, reason="no diagonal pairing")
    M = pairing_matrix(ring, found["values"])
    res = check_bialgebra_duality(ah, d1, s2, d2, M)
    res.details = {
        "pairing": {f"<{a},{b}>": v for a, b, v in zip(ah.names, s2.names, found["normalized"])},
        "free": found["free"],
        "solutions": found["solutions"],
    }
    return res
