"""Structure tensor of the coproduct and the dual (coordinate) algebra.

``F[a,b,c; l,m,n; q,r,s]`` is the coefficient of ``X^{lmn} (x) X^{qrs}`` in
``Delta(X^{abc})``, ``X^{abc} = Am^a Ap^b H^c``.  By duality the same
numbers give the product of the dual basis ``p_{lmn} p_{qrs}``; comparing
with the product computed directly from the coordinate relations checks the
dual basis formula ``p_{qrs} = am^q ap^r chi^s / (q! r! s!)`` and the bracket
table of the coordinates at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .checks import CheckResult, combine, fail
from .coeffring import ExpPoly, Ring, expand_series
from .hopfcore import HopfPresentation, funs_iso11_standard, funw_iso11, uw_iso11_ah

__all__ = [
    "StructureTensor",
    "DualWitness",
    "triples",
    "compute_structure_tensor",
    "verify_recurrences",
    "verify_dual_product",
    "extract_dual_commutators",
    "coordinate_lie_algebra",
    "dual_basis_element",
    "dump_tensor",
]

U_GENS = ("Am", "Ap", "H")
FUN_GENS = ("am", "ap", "chi")


def triples(D: int, exact: bool = False):
    """Index triples of total degree <= D (== D with ``exact``), sorted."""
    out = [t for t in itertools.product(range(D + 1), repeat=3) if sum(t) <= D]
    if exact:
        out = [t for t in out if sum(t) == D]
    return sorted(out, key=lambda t: (sum(t), t))


@dataclass
class StructureTensor:
    ring: Ring
    cutoff: int
    entries: dict = field(default_factory=dict)
    sources: tuple = ()

    def __getitem__(self, key) -> ExpPoly:
        abc, lmn, qrs = key
        return self.entries.get((tuple(abc), tuple(lmn), tuple(qrs)), self.ring.zero())

    def in_range(self, abc, lmn, qrs) -> bool:
        return tuple(abc) in self.source_set and sum(lmn) <= self.cutoff and sum(qrs) <= self.cutoff

    @property
    def source_set(self) -> frozenset:
        return frozenset(self.sources)

    def with_entry(self, key, value) -> "StructureTensor":
        entries = dict(self.entries)
        key = tuple(tuple(k) for k in key)
        if value:
            entries[key] = value
        else:
            entries.pop(key, None)
        return StructureTensor(self.ring, self.cutoff, entries, self.sources)


def _word(ring: Ring, names, idx) -> ExpPoly:
    out = ring.one()
    for g, e in zip(names, idx):
        if e:
            out = out * ring.var(g, e)
    return out


def _index(mono, names, leg=None) -> tuple:
    d = dict(mono)
    if leg is None:
        return tuple(d.get(g, 0) for g in names)
    return tuple(d.get((leg, g), 0) for g in names)


def compute_structure_tensor(U: HopfPresentation | None = None, D: int = 4, sources=None) -> StructureTensor:
    """Materialise F for ``sources`` (default: all a+b+c <= D); each leg is
    expanded and truncated at degree D."""
    U = U or uw_iso11_ah()
    ring = U.ring
    sources = tuple(sorted(set(map(tuple, sources)))) if sources is not None else tuple(triples(D))
    blocks = [{(leg, g) for g in U_GENS} for leg in (0, 1)]
    entries = {}
    for abc in sources:
        d = U.delta(_word(ring, U_GENS, abc))
        expanded = expand_series(d, D, blocks)
        for (mono, lin), coef in expanded.scalar_coefficients().items():
            assert not lin
            entries[(abc, _index(mono, U_GENS, 0), _index(mono, U_GENS, 1))] = coef
    return StructureTensor(ring, D, entries, sources)


# --------------------------------------------------------------------------
# recurrences


def _delta(*pairs) -> int:
    return int(all(x == y for x, y in pairs))


def verify_recurrences(F: StructureTensor, ap_row_scope: str = "stated") -> CheckResult:
    """The boundary values and the two recurrences (left multiplication by
    Am and Ap), plus the three closed families of low-degree entries.

    The closed form of the ``F_{010;qrs}`` row is wrong as soon as q >= 1:
    ``ap`` does not commute with ``am``, e.g. F^{110}_{010;110} = -2w.  With
    ``ap_row_scope="q0"`` that family is checked only for q = 0 (the range
    needed for the dual basis) and the out-of-scope disagreements are
    counted in ``details["ap_row_outside_scope"]``.
    """
    if ap_row_scope not in ("stated", "q0"):
        raise ValueError(f"unknown scope {ap_row_scope!r}")
    ring = F.ring
    w = ring.p
    D = F.cutoff
    targets = triples(D)
    witnesses = []
    counts: dict = {}
    families: dict = {}
    n = 0

    outside = 0

    def check(name, abc, lmn, qrs, expected):
        nonlocal n, outside
        got = F[abc, lmn, qrs]
        expected = ring.coerce(expected)
        if name == "Ap-row" and ap_row_scope == "q0" and qrs[0] >= 1:
            outside += got != expected
            return
        n += 1
        families[name] = families.get(name, 0) + 1
        if got != expected:
            counts[name] = counts.get(name, 0) + 1
        if got != expected and len(witnesses) < 20:
            witnesses.append(
                {"identity": name, "index": f"{abc}|{lmn}|{qrs}", "got": str(got), "expected": str(expected)}
            )

    zero3 = (0, 0, 0)
    for abc in F.sources:
        for t in targets:
            check("boundary-left", abc, zero3, t, _delta(*zip(abc, t)))
            check("boundary-right", abc, t, zero3, _delta(*zip(abc, t)))
            if abc == zero3:
                for u in targets:
                    check("boundary-unit", abc, t, u, _delta(*zip(t + u, (0,) * 6)))
        a, b, c = abc
        if a >= 1 and (a - 1, b, c) in F.source_set:
            prev = (a - 1, b, c)
            for lmn in targets:
                l, m, nn = lmn
                for qrs in targets:
                    q, r, s = qrs
                    if not (q >= 1 and l >= 1):
                        continue
                    exp = F[prev, (l - 1, m, nn), qrs]
                    for k in range(m + 1):
                        exp = exp + F[prev, (l, k, nn), (q - 1, r, s)] * (-2 * w) ** (m - k) * Fraction(
                            1, factorial(m - k)
                        )
                    check("Am-recurrence", abc, lmn, qrs, exp)
        if b >= 1 and (a, b - 1, c) in F.source_set:
            prev = (a, b - 1, c)
            for lmn in targets:
                l, m, nn = lmn
                for qrs in targets:
                    q, r, s = qrs
                    if not (m >= 1 and r >= 1):
                        continue
                    exp = F[prev, (l, m - 1, nn), qrs] + F[prev, lmn, (q, r - 1, s)]
                    check("Ap-recurrence", abc, lmn, qrs, exp)
        for qrs in targets:
            q, r, s = qrs
            if a >= 1:
                check("Am-row", abc, (1, 0, 0), qrs, a * _delta((a, q + 1), (b, r), (c, s)))
            if b >= 1:
                check("Ap-row", abc, (0, 1, 0), qrs, b * _delta((a, q), (b, r + 1), (c, s)))
        for lmn in targets:
            l, m, nn = lmn
            if c >= 1:
                check("H-column", abc, lmn, (0, 0, 1), c * _delta((a, l), (b, m), (c, nn + 1)))
    res = CheckResult("recurrences", checked=n)
    res.details = {"families": families, "ap_row_scope": ap_row_scope}
    if ap_row_scope == "q0":
        res.details["ap_row_outside_scope"] = outside
    if witnesses:
        res.status = "fail"
        res.witness = {"violations": witnesses, "counts": counts}
    return res


def check_grading(F: StructureTensor) -> CheckResult:
    """Degree growth of an entry is paid for by powers of the parameter."""
    n = 0
    for (abc, lmn, qrs), coef in sorted(F.entries.items()):
        n += 1
        excess = sum(lmn) + sum(qrs) - sum(abc)
        if min(k[2] for k in coef.terms) < excess:
            return fail("grading", n, index=f"{abc}|{lmn}|{qrs}", scalar=str(coef))
    return CheckResult("grading", checked=n)


# --------------------------------------------------------------------------
# dual product


@dataclass
class DualWitness:
    left_index: tuple
    right_index: tuple
    product: str
    tensor_side: str
    residual: str

    def to_dict(self):
        return {
            "pair": f"p{self.left_index} p{self.right_index}",
            "product": self.product,
            "tensor_side": self.tensor_side,
            "residual": self.residual,
        }


def dual_basis_element(Fun: HopfPresentation, qrs) -> ExpPoly:
    q, r, s = qrs
    return _word(Fun.ring, FUN_GENS, qrs) * Fraction(1, factorial(q) * factorial(r) * factorial(s))


def _tensor_side(F: StructureTensor, Fun: HopfPresentation, lmn, qrs, D) -> ExpPoly:
    out = Fun.ring.zero()
    for abc in F.sources:
        if sum(abc) <= D:
            c = F[abc, lmn, qrs]
            if c:
                out = out + c * dual_basis_element(Fun, abc)
    return out


def _same_ring(F: StructureTensor, Fun: HopfPresentation):
    if F.ring != Fun.ring:
        raise ValueError("tensor and dual algebra live over different rings")


def verify_dual_product(F: StructureTensor, Fun: HopfPresentation | None = None, D: int | None = None):
    """p_{lmn} p_{qrs} (coordinate algebra) == sum_abc F p_abc, to degree D."""
    Fun = Fun or funw_iso11(F.ring)
    _same_ring(F, Fun)
    D = F.cutoff if D is None else D
    if D > F.cutoff:
        raise ValueError("degree exceeds the tensor cutoff")
    idx = triples(D)
    witnesses = []
    n = 0
    for lmn in idx:
        pl = dual_basis_element(Fun, lmn)
        for qrs in idx:
            n += 1
            prod = Fun.algebra.mul(pl, dual_basis_element(Fun, qrs))
            left = expand_series(prod, D)
            right = _tensor_side(F, Fun, lmn, qrs, D)
            if left != right:
                witnesses.append(
                    DualWitness(lmn, qrs, Fun.render(prod), Fun.render(right), Fun.render(left - right))
                )
    res = CheckResult("dual-product", checked=n)
    if witnesses:
        res.status = "fail"
        res.witness = {"count": len(witnesses), "first": [w.to_dict() for w in witnesses[:5]]}
    return res


def extract_dual_commutators(F: StructureTensor, Fun: HopfPresentation | None = None, D: int | None = None):
    """[p_u, p_v] = sum (F_{u;v} - F_{v;u}) p for the coordinate pairs,
    compared with the closed-form brackets expanded to degree D."""
    Fun = Fun or funw_iso11(F.ring)
    _same_ring(F, Fun)
    D = F.cutoff if D is None else D
    coord = {"am": (1, 0, 0), "ap": (0, 1, 0), "chi": (0, 0, 1)}
    table = {}
    parts = []
    for x, y in (("chi", "ap"), ("chi", "am"), ("ap", "am")):
        u, v = coord[x], coord[y]
        series = _tensor_side(F, Fun, u, v, D) - _tensor_side(F, Fun, v, u, D)
        closed = Fun.algebra.commutator(Fun.gen(x), Fun.gen(y))
        ok = expand_series(closed, D) == series
        table[f"[{x},{y}]"] = {"series": Fun.render(series), "closed": Fun.render(closed), "match": ok}
        if not ok:
            parts.append(fail(f"dual-commutator[{x},{y}]", 1, series=Fun.render(series), closed=Fun.render(closed)))
        else:
            parts.append(CheckResult(f"dual-commutator[{x},{y}]", checked=1))
    res = combine("dual-commutators", parts)
    res.details = {"table": table}
    return res


def structure_family(F: StructureTensor, kmax: int) -> CheckResult:
    """F^{00k}_{001;010} = 2^k w for 1 <= k <= kmax and F^{011}_{001;010} = 1."""
    w = F.ring.p
    n = 0
    for k in range(1, kmax + 1):
        n += 1
        got = F[(0, 0, k), (0, 0, 1), (0, 1, 0)]
        if got != (2**k) * w:
            return fail("F00k-family", n, k=k, got=str(got))
    n += 1
    if F[(0, 1, 1), (0, 0, 1), (0, 1, 0)] != F.ring.one():
        return fail("F00k-family", n, index="011|001|010")
    return CheckResult("F00k-family", checked=n)


# --------------------------------------------------------------------------
# infinite dimensional coordinate Lie algebra


def _span_coordinates(f: ExpPoly, chi: str, scale: int, others) -> dict | None:
    """Write f as a combination of e^{scale k chi} and the ``others``; None if
    impossible."""
    out = {}
    for (mono, lin), c in f.scalar_coefficients().items():
        if not mono and not lin:
            key = ("f", 0)
        elif not mono and len(lin) == 1 and lin[0][0] == chi and lin[0][1] == 0 and not lin[0][3]:
            k = lin[0][2] / scale
            if k.denominator != 1:
                return None
            key = ("f", int(k))
        elif not lin and len(mono) == 1 and mono[0][1] == 1 and mono[0][0] in others:
            key = ("g", mono[0][0])
        else:
            return None
        out[key] = c
    return out


def coordinate_lie_algebra(Fun: HopfPresentation | None = None, m_range=range(-4, 5)) -> CheckResult:
    """Brackets and coproducts of f_m = e^{2 m chi}, ap, am."""
    Fun = Fun or funw_iso11()
    ring = Fun.ring
    w = ring.p
    P = Fun.algebra
    T = Fun.T2
    ap, am = Fun.gen("ap"), Fun.gen("am")

    def f(m):
        return ring.exp({"chi": 2 * m})

    parts = []
    n = 0
    table = {}
    bad = []
    for m in m_range:
        n += 1
        got = P.commutator(f(m), ap)
        table[f"[f{m},ap]"] = P.render(got)
        if got != 2 * w * m * (f(m + 1) - f(m)):
            bad.append(f"[f{m},ap]")
        if P.commutator(f(m), am):
            bad.append(f"[f{m},am]")
        for k in m_range:
            if P.commutator(f(m), f(k)):
                bad.append(f"[f{m},f{k}]")
        if Fun.delta(f(m)) != T.simple(f(m), f(m)):
            bad.append(f"Delta(f{m})")
    parts.append(
        fail("brackets", n, wrong=bad) if bad else CheckResult("brackets", checked=n, details={"table": table})
    )
    one = ring.one()
    cop_ok = Fun.delta(ap) == T.simple(ap, one) + T.simple(f(1), ap) and Fun.delta(am) == T.simple(
        am, one
    ) + T.simple(f(-1), am)
    parts.append(CheckResult("group-like-coproducts", checked=2) if cop_ok else fail("group-like-coproducts", 2))

    # linear closure: every bracket of basis elements lies in the span
    basis = [("f", m) for m in m_range] + [("g", "ap"), ("g", "am")]

    def element(b):
        return f(b[1]) if b[0] == "f" else Fun.gen(b[1])

    brackets = {}
    span_bad = []
    for x in basis:
        for y in basis:
            c = P.commutator(element(x), element(y))
            coords = _span_coordinates(c, "chi", 2, ("ap", "am"))
            if coords is None:
                span_bad.append(f"[{x},{y}]")
            brackets[(x, y)] = coords or {}
    parts.append(
        fail("linear-closure", len(basis) ** 2, outside=span_bad)
        if span_bad
        else CheckResult("linear-closure", checked=len(basis) ** 2)
    )

    # antisymmetry and Jacobi from the table alone (extended bilinearly)
    def br(u: dict, v: dict) -> dict:
        out: dict = {}
        for x, cx in u.items():
            for y, cy in v.items():
                key = (x, y)
                if key not in brackets:
                    coords = _span_coordinates(P.commutator(element(x), element(y)), "chi", 2, ("ap", "am"))
                    brackets[key] = coords or {}
                for z, cz in brackets[key].items():
                    out[z] = out.get(z, ring.zero()) + cx * cy * cz
        return {k: v for k, v in out.items() if v}

    jac_bad = []
    count = 0
    for x, y in itertools.product(basis, repeat=2):
        if br({x: one}, {y: one}) != {k: -v for k, v in br({y: one}, {x: one}).items()}:
            jac_bad.append(f"antisymmetry {x},{y}")
    for x, y, z in itertools.combinations(basis, 3):
        count += 1
        X, Y, Z = {x: one}, {y: one}, {z: one}
        total: dict = {}
        for u, v, t in ((X, Y, Z), (Y, Z, X), (Z, X, Y)):
            for k, c in br(u, br(v, t)).items():
                total[k] = total.get(k, ring.zero()) + c
        if any(total.values()):
            jac_bad.append(f"Jacobi {x},{y},{z}")
    parts.append(fail("table-jacobi", count, wrong=jac_bad[:10]) if jac_bad else CheckResult("table-jacobi", checked=count))

    # {f_m, ap} is closed under coproduct, counit and antipode
    def in_sub(e: ExpPoly, tensor=False) -> bool:
        for (mono, lin), _ in e.scalar_coefficients().items():
            for v, _e in mono:
                if (v[1] if tensor else v) != "ap":
                    return False
            for v, p, re, im in lin:
                if (v[1] if tensor else v) != "chi" or p or im or (re / 2).denominator != 1:
                    return False
        return True

    sub_ok = all(
        in_sub(Fun.delta(x), True) and in_sub(Fun.gamma(x)) and in_sub(Fun.eps(x))
        for x in [ap] + [f(m) for m in m_range]
    )
    parts.append(CheckResult("hopf-subalgebra", checked=len(m_range) + 1) if sub_ok else fail("hopf-subalgebra", 1))
    res = combine("coordinate-lie-algebra", parts)
    res.details["brackets"] = table
    res.details["standard"] = standard_exponential_brackets(m_range)
    return res


def standard_exponential_brackets(n_range=range(-2, 3)) -> dict:
    """Brackets of g_n = e^{n theta} with a1, a2 in the standard algebra.

    There is nothing to compare against; the table and whether it closes
    linearly on {g_n, a1, a2} are reported as is.
    """
    S = funs_iso11_standard()
    P = S.algebra
    ring = S.ring
    out = {}
    closed = True
    for n in n_range:
        g = ring.exp({"theta": n})
        for x in ("a1", "a2"):
            c = P.commutator(g, ring.var(x))
            out[f"[g{n},{x}]"] = P.render(c)
            if _span_coordinates(c, "theta", 1, ("a1", "a2")) is None:
                closed = False
    return {"table": out, "linearly_closed": closed}


def dump_tensor(F: StructureTensor) -> str:
    lines = []
    for (abc, lmn, qrs), c in sorted(F.entries.items()):
        lines.append(
            f"{abc[0]} {abc[1]} {abc[2]} | {lmn[0]} {lmn[1]} {lmn[2]} | {qrs[0]} {qrs[1]} {qrs[2]} | {c}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
