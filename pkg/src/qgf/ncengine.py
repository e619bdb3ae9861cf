"""Normal ordering for algebras presented as solvable towers.

A presentation fixes an ordered list of generators.  An element is stored by
its *symbol*: an :class:`ExpPoly` over the generator names where every term
``c * g1^e1 exp(l1 g1) ... gn^en exp(ln gn)`` is read as the ordered product
of its per-generator blocks, lowest generator leftmost.  Generators tagged
``func`` may carry exponentials; ``poly`` generators appear polynomially.

Each ordered pair ``(hi, lo)`` has a commutator rule ``[hi, lo] = c``.  Rules
fall into four kinds, decided from the support of ``c``:

``zero``
    the generators commute.
``derivation``
    ``c`` only involves generators below ``hi`` that commute among
    themselves; ``ad(hi)`` acts on them as a derivation and
    ``hi^k f = sum_r C(k, r) delta^r(f) hi^(k-r)``.
``mirror``
    ``c`` is a function of ``hi`` alone; then
    ``phi(hi) lo^m = sum_r C(m, r) lo^(m-r) D^r(phi)`` with ``D = c d/dhi``.
``lie``
    ``c = alpha lo + beta hi`` with scalar ``alpha, beta`` (two dimensional
    Lie algebra); handled as an Ore extension with shift ``lo -> lo + beta``.

Tensor powers of presentations reuse the machinery legwise: a tensor symbol
is an :class:`ExpPoly` whose variables are ``(leg, generator)`` pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .coeffring import (
    ConfigurationError,
    ExpPoly,
    Ring,
    UnsupportedSubstitution,
    _as_linear,
    _lin_add,
    _lin_coefficient,
    _lin_scalar,
    canonicalize,
    expand_series,
    multiply,
    partial_derivative,
    substitute,
)

__all__ = [
    "TowerPresentation",
    "TensorAlgebra",
    "CommutativeAlgebra",
    "NCElement",
    "TensorElement",
    "ExponentOverflow",
    "PresentationError",
    "validate_presentation",
    "nc_multiply",
    "commutator",
    "tensor_multiply",
    "apply_morphism",
    "expand_to_degree",
    "map_leg",
    "map_legs",
    "Morphism",
]


class ExponentOverflow(OverflowError):
    pass


class PresentationError(ValueError):
    pass


def _scale_into(out: dict, poly: ExpPoly, coef: Fraction, wp: int, jb: int, s) -> None:
    for (m, l, p, b), c in poly.terms.items():
        c = c * coef
        if b and jb:
            if s == 0:
                continue
            c *= s
            nb = 0
        else:
            nb = b | jb
        key = (m, l, p + wp, nb)
        c = out.get(key, 0) + c
        if c:
            out[key] = c
        else:
            del out[key]


class _AlgebraBase:
    ring: Ring

    def one(self) -> ExpPoly:
        return self.ring.one()

    def zero(self) -> ExpPoly:
        return self.ring.zero()

    def element(self, symbol) -> "NCElement":
        return NCElement(self, self.ring.coerce(symbol))

    def commutator(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        return self.mul(f, g) - self.mul(g, f)


class CommutativeAlgebra(_AlgebraBase):
    """The coefficient ring itself, seen as a (commutative) target algebra."""

    def __init__(self, ring: Ring, name: str = "commutative"):
        self.ring = ring
        self.name = name

    def mul(self, f, g):
        return multiply(f, g)

    def commuting(self, variables) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, CommutativeAlgebra) and other.ring == self.ring

    def __hash__(self):
        return hash(("comm", self.ring))


class TowerPresentation(_AlgebraBase):
    """Generators in tower order, commutator rules, and the product.

    ``rules`` maps ``(a, b)`` to the symbol of ``[a, b]``; either order of the
    pair may be given.  ``func`` lists the generators allowed inside
    exponentials.  ``declared_support`` optionally states which generators
    each rule depends on; validation compares it with the actual support.
    """

    def __init__(
        self,
        ring: Ring,
        generators: Sequence[str],
        rules: Mapping[tuple, ExpPoly],
        func: Iterable[str] = (),
        name: str = "",
        declared_support: Mapping[tuple, Iterable[str]] | None = None,
        exponent_cap: int = 16,
        display: Mapping[str, str] | None = None,
    ):
        self.ring = ring
        self.generators = tuple(generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise PresentationError("duplicate generator names")
        self.func = frozenset(func)
        self.name = name
        self.exponent_cap = exponent_cap
        self.display = dict(display or {})
        self.rules: dict[tuple[int, int], ExpPoly] = {}
        self.declared_support = {}
        for (a, b), c in rules.items():
            c = ring.coerce(c)
            ia, ib = self._idx(a), self._idx(b)
            if ia == ib:
                if c:
                    raise PresentationError(f"[{a},{a}] must vanish")
                continue
            if ia < ib:
                ia, ib, c = ib, ia, -c
            self.rules[(ia, ib)] = c
        for (a, b), sup in (declared_support or {}).items():
            ia, ib = self._idx(a), self._idx(b)
            self.declared_support[(max(ia, ib), min(ia, ib))] = frozenset(sup)
        self.kinds: dict[tuple[int, int], str] = {}
        self.lie: dict[tuple[int, int], tuple[ExpPoly, ExpPoly]] = {}
        for hi in range(len(self.generators)):
            for lo in range(hi):
                self.kinds[(hi, lo)] = self._classify(hi, lo)
        self._mul_cache: dict = {}
        self._exchange_cache: dict = {}
        self._word_cache: dict = {}
        self._key_cache: dict = {}

    # -- bookkeeping ---------------------------------------------------
    def _idx(self, g) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise PresentationError(f"unknown generator {g!r} in {self.name}") from None

    def rule(self, hi: int, lo: int) -> ExpPoly:
        return self.rules.get((hi, lo), self.ring.zero())

    def _classify(self, hi: int, lo: int) -> str:
        c = self.rule(hi, lo)
        if not c:
            return "zero"
        support = c.variables()
        unknown = support - set(self.generators)
        if unknown:
            raise PresentationError(f"rule [{self.generators[hi]},{self.generators[lo]}] uses {unknown}")
        sup = {self.index[g] for g in support}
        ghi = self.generators[hi]
        if not sup:
            return "derivation" if ghi not in self.func else "mirror"
        if sup == {hi}:
            return "mirror"
        if hi not in sup and max(sup) < hi:
            return "derivation"
        lie = self._lie_coefficients(c, hi, lo)
        if lie is not None:
            self.lie[(hi, lo)] = lie
            return "lie"
        raise PresentationError(
            f"rule [{ghi},{self.generators[lo]}] = {c} is not of tower type"
        )

    def _lie_coefficients(self, c: ExpPoly, hi: int, lo: int):
        alpha = self.ring.zero()
        beta = self.ring.zero()
        for (m, l, wp, jb), coef in c.terms.items():
            if l or len(m) != 1 or m[0][1] != 1:
                return None
            g = m[0][0]
            piece = ExpPoly(self.ring, {((), (), wp, jb): coef})
            if g == self.generators[lo]:
                alpha = alpha + piece
            elif g == self.generators[hi]:
                beta = beta + piece
            else:
                return None
        return alpha, beta

    def is_poly(self, g) -> bool:
        return g not in self.func

    def commuting(self, variables) -> bool:
        idx = sorted(self._idx(v) for v in variables)
        return all(
            self.kinds[(b, a)] == "zero" for i, a in enumerate(idx) for b in idx[i + 1:] if a != b
        )

    def name_of(self, g) -> str:
        return self.display.get(g, g)

    # -- words ---------------------------------------------------------
    def _word(self, mono: tuple, lin: tuple) -> tuple:
        key = (mono, lin)
        w = self._word_cache.get(key)
        if w is None:
            blocks = {}
            for v, e in mono:
                blocks[self._idx(v)] = [e, None]
            for v, p, re, im in lin:
                i = self._idx(v)
                if v not in self.func:
                    raise PresentationError(f"exponential of poly generator {v!r}")
                blocks.setdefault(i, [0, None])[1] = (p, re, im)
            w = tuple((i, k, lc) for i, (k, lc) in sorted(blocks.items()))
            for _, k, _ in w:
                if k > self.exponent_cap:
                    raise ExponentOverflow(f"exponent {k} exceeds cap {self.exponent_cap}")
            self._word_cache[key] = w
        return w

    def _key(self, word: tuple) -> tuple:
        k = self._key_cache.get(word)
        if k is None:
            mono = []
            lin = []
            for i, e, lc in word:
                g = self.generators[i]
                if e:
                    if e > self.exponent_cap:
                        raise ExponentOverflow(f"exponent {e} exceeds cap {self.exponent_cap}")
                    mono.append((g, e))
                if lc is not None:
                    lin.append((g, *lc))
            k = (tuple(sorted(mono)), tuple(sorted(lin)))
            self._key_cache[word] = k
        return k

    def _word_poly(self, word: tuple) -> ExpPoly:
        m, l = self._key(word)
        return ExpPoly(self.ring, {(m, l, 0, 0): Fraction(1)})

    def _block_poly(self, block) -> ExpPoly:
        return self._word_poly((block,))

    def words(self, f: ExpPoly):
        """Yield (word, coefficient, param power, jbit) for each term."""
        for (m, l, wp, jb), c in f.terms.items():
            yield self._word(m, l), c, wp, jb

    # -- product -------------------------------------------------------
    def mul(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        if f.ring != self.ring or g.ring != self.ring:
            raise ConfigurationError("operands belong to a different ring")
        s = self.ring.s
        out: dict = {}
        gw = [(self._word(m, l), c, wp, jb) for (m, l, wp, jb), c in g.terms.items()]
        for (m1, l1, p1, b1), c1 in f.terms.items():
            w1 = self._word(m1, l1)
            for w2, c2, p2, b2 in gw:
                coef = c1 * c2
                if b1 and b2:
                    if s == 0:
                        continue
                    coef *= s
                    b = 0
                else:
                    b = b1 | b2
                _scale_into(out, self._mul_words(w1, w2), coef, p1 + p2, b, s)
        return ExpPoly(self.ring, out)

    def _mul_words(self, A: tuple, B: tuple) -> ExpPoly:
        key = (A, B)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        if not A or not B or A[-1][0] < B[0][0]:
            res = self._word_poly(A + B)
        elif A[-1][0] == B[0][0]:
            i, k1, l1 = A[-1]
            _, k2, l2 = B[0]
            if l1 is None:
                lc = l2
            elif l2 is None:
                lc = l1
            else:
                g = self.generators[i]
                merged = _lin_add(((g, *l1),), ((g, *l2),), self.ring.s)
                lc = merged[0][1:] if merged else None
            mid = ((i, k1 + k2, lc),) if (k1 + k2 or lc is not None) else ()
            res = self._word_poly(A[:-1] + mid + B[1:])
        else:
            swapped = self._exchange(A[-1], B[0])
            left, right = A[:-1], B[1:]
            res = self._mul_word_poly(left, swapped, right)
        self._mul_cache[key] = res
        return res

    def _mul_word_poly(self, left: tuple, f: ExpPoly, right: tuple) -> ExpPoly:
        """``left * f * right`` for words ``left``, ``right``."""
        s = self.ring.s
        out: dict = {}
        for w, c, wp, jb in self.words(f):
            mid = self._mul_words(left, w) if left else self._word_poly(w)
            if right:
                inner: dict = {}
                for w2, c2, wp2, jb2 in self.words(mid):
                    _scale_into(inner, self._mul_words(w2, right), c2, wp2, jb2, s)
                mid = ExpPoly(self.ring, inner)
            _scale_into(out, mid, c, wp, jb, s)
        return ExpPoly(self.ring, out)

    def _delta(self, hi: int, f: ExpPoly) -> ExpPoly:
        out = self.ring.zero()
        for v in f.variables():
            i = self.index[v]
            kind = self.kinds.get((hi, i), "zero")
            if kind == "zero":
                continue
            if kind != "derivation":
                raise PresentationError(
                    f"[{self.generators[hi]},{v}] is not a derivation rule"
                )
            out = out + partial_derivative(f, v) * self.rule(hi, i)
        return out

    def _exchange(self, a: tuple, b: tuple) -> ExpPoly:
        """Normal form of block ``a`` (higher generator) times block ``b``."""
        key = (a, b)
        hit = self._exchange_cache.get(key)
        if hit is not None:
            return hit
        hi, k, la = a
        lo, m, lb = b
        kind = self.kinds[(hi, lo)]
        ring = self.ring
        if kind == "zero":
            res = self._word_poly((b, a))
        elif kind == "derivation":
            if la is not None:
                raise PresentationError(
                    f"exponential of {self.generators[hi]} past a derivation rule"
                )
            f = self._block_poly(b)
            res = ring.zero()
            for r in range(k + 1):
                if not f:
                    break
                tail = ring.var(self.generators[hi], k - r)
                res = res + f * tail * comb(k, r)
                f = self._delta(hi, f)
        elif kind == "mirror":
            if lb is not None:
                raise PresentationError(
                    f"exponential of {self.generators[lo]} past a mirror rule"
                )
            phi = self._block_poly(a)
            c = self.rule(hi, lo)
            g = self.generators[hi]
            res = ring.zero()
            for r in range(m + 1):
                if not phi:
                    break
                head = ring.var(self.generators[lo], m - r)
                res = res + head * phi * comb(m, r)
                phi = partial_derivative(phi, g) * c
        else:
            if la is not None or lb is not None:
                raise PresentationError("exponentials are not supported for Lie-type rules")
            res = self._lie_exchange(hi, k, lo, m)
        self._exchange_cache[key] = res
        return res

    def _lie_exchange(self, hi: int, k: int, lo: int, m: int) -> ExpPoly:
        alpha, beta = self.lie[(hi, lo)]
        ring = self.ring
        x = self.generators[lo]
        y = self.generators[hi]
        xv = ring.var(x)
        shift = {x: xv + beta}

        def tau(f: ExpPoly) -> ExpPoly:
            # sigma-derivation with tau(x) = alpha x, sigma(x) = x + beta
            out = ring.zero()
            for (mono, l, wp, jb), c in f.terms.items():
                n = dict(mono).get(x, 0)
                coef = ExpPoly(ring, {((), (), wp, jb): c})
                acc = ring.zero()
                for t in range(1, n + 1):
                    acc = acc + ring.var(x, n - t) * (beta ** (t - 1)) * comb(n, t)
                out = out + coef * alpha * xv * acc
            return out

        state = {0: ring.var(x, m)}
        for _ in range(k):
            new: dict = {}
            for p, f in state.items():
                sf = substitute(f, shift)
                tf = tau(f)
                new[p + 1] = new.get(p + 1, ring.zero()) + sf
                new[p] = new.get(p, ring.zero()) + tf
            state = {p: f for p, f in new.items() if f}
        res = ring.zero()
        for p, f in state.items():
            res = res + f * ring.var(y, p)
        return res

    # -- slow oracle ---------------------------------------------------
    def mul_oracle(self, f: ExpPoly, g: ExpPoly, max_steps: int = 200000) -> ExpPoly:
        """Product by single adjacent swaps; independent of the closed forms."""
        ring = self.ring
        pending: dict = {}

        def letters(word):
            out = []
            for i, k, lc in word:
                out.extend([(i, None)] * k)
                if lc is not None:
                    out.append((i, lc))
            return tuple(out)

        for (m1, l1, p1, b1), c1 in f.terms.items():
            for (m2, l2, p2, b2), c2 in g.terms.items():
                coef = ExpPoly(ring, {((), (), p1, b1): c1}) * ExpPoly(ring, {((), (), p2, b2): c2})
                if not coef:
                    continue
                key = letters(self._word(m1, l1)) + letters(self._word(m2, l2))
                pending[key] = pending.get(key, ring.zero()) + coef
        result = ring.zero()
        steps = 0
        while pending:
            steps += 1
            if steps > max_steps:
                raise RuntimeError("single-swap rewriting did not terminate")
            word, c = pending.popitem()
            if not c:
                continue
            pos = next((t for t in range(len(word) - 1) if word[t][0] > word[t + 1][0]), None)
            if pos is None:
                result = result + c * self._letters_symbol(word)
                continue
            a, b = word[pos], word[pos + 1]
            swapped = word[:pos] + (b, a) + word[pos + 2:]
            pending[swapped] = pending.get(swapped, ring.zero()) + c
            comm = self._letter_commutator(a, b)
            for (m, l, wp, jb), cc in comm.terms.items():
                mid = letters(self._word(m, l))
                new = word[:pos] + mid + word[pos + 2:]
                pending[new] = pending.get(new, ring.zero()) + c * ExpPoly(ring, {((), (), wp, jb): cc})
        return result

    def _letters_symbol(self, word) -> ExpPoly:
        out = self.ring.one()
        for i, lc in word:
            g = self.generators[i]
            if lc is None:
                out = out * self.ring.var(g)
            else:
                out = out * canonicalize(self.ring, [(1, (), ((g, *lc),), 0, 0)])
        return out

    def _letter_commutator(self, a, b) -> ExpPoly:
        hi, la = a
        lo, lb = b
        kind = self.kinds[(hi, lo)]
        c = self.rule(hi, lo)
        if kind == "zero":
            return self.ring.zero()
        if la is None and lb is None:
            return c
        if la is not None and lb is None and kind == "mirror":
            g = self.generators[hi]
            e = canonicalize(self.ring, [(1, (), ((g, *la),), 0, 0)])
            return _lin_scalar(self.ring, *la) * e * c
        if la is None and lb is not None and kind == "derivation":
            g = self.generators[lo]
            e = canonicalize(self.ring, [(1, (), ((g, *lb),), 0, 0)])
            return _lin_scalar(self.ring, *lb) * e * c
        raise PresentationError("single-swap rewriting cannot move this exponential")

    # -- misc ------------------------------------------------------------
    def gen(self, g: str) -> "NCElement":
        self._idx(g)
        return NCElement(self, self.ring.var(g))

    def exp(self, coefficients: Mapping[str, object]) -> "NCElement":
        for g in coefficients:
            if g not in self.func:
                raise PresentationError(f"{g!r} is not tagged func")
        return NCElement(self, self.ring.exp(coefficients))

    def monomials(self, degree: int, exact: bool = False):
        """Polynomial normal words of total degree <= ``degree``."""
        n = len(self.generators)

        def rec(i, left):
            if i == n:
                yield ()
                return
            for e in range(left + 1):
                for rest in rec(i + 1, left - e):
                    yield (e,) + rest

        out = []
        for exps in rec(0, degree):
            if exact and sum(exps) != degree:
                continue
            mono = tuple(sorted((g, e) for g, e in zip(self.generators, exps) if e))
            out.append(ExpPoly(self.ring, {(mono, (), 0, 0): Fraction(1)}))
        out.sort(key=lambda p: (p.degree(), str(p)))
        return out

    def with_rules(self, rules: Mapping[tuple, ExpPoly], name: str | None = None) -> "TowerPresentation":
        """A copy with some rules replaced."""
        merged = {
            (self.generators[hi], self.generators[lo]): c for (hi, lo), c in self.rules.items()
        }
        for (a, b), c in rules.items():
            ia, ib = self._idx(a), self._idx(b)
            merged.pop((a, b), None)
            merged.pop((b, a), None)
            merged[(a, b)] = c
        return TowerPresentation(
            self.ring,
            self.generators,
            merged,
            self.func,
            name=name or self.name,
            exponent_cap=self.exponent_cap,
            display=self.display,
        )

    def render(self, f: ExpPoly) -> str:
        return _render_ordered(f, lambda v: self.index[v], self.name_of)

    def __repr__(self):
        return f"TowerPresentation({self.name or ','.join(self.generators)})"


def _render_ordered(f: ExpPoly, order, name) -> str:
    # same text as ExpPoly rendering but with factors in word order
    tmp = f.map_variables(lambda v: _Ordered(order(v), name(v)))
    return tmp.to_text(lambda v: v.text, ordered=True)


@dataclass(frozen=True, order=True)
class _Ordered:
    pos: object
    text: str = field(compare=False)

    def __repr__(self):
        return repr(self.pos)


class TensorAlgebra(_AlgebraBase):
    """k-fold tensor product of presentations (k = 2 or 3 in practice)."""

    def __init__(self, factors: Sequence[TowerPresentation]):
        factors = tuple(factors)
        if not factors:
            raise PresentationError("empty tensor product")
        rings = {f.ring for f in factors}
        if len(rings) != 1:
            raise ConfigurationError("tensor factors over different rings")
        self.ring = factors[0].ring
        self.factors = factors
        self.power = len(factors)
        self._split_cache: dict = {}
        self._mul_cache: dict = {}
        self._tag_cache: dict = {}
        self.name = "⊗".join(f.name for f in factors)

    def __eq__(self, other):
        return isinstance(other, TensorAlgebra) and other.factors == self.factors

    def __hash__(self):
        return hash(self.factors)

    def commuting(self, variables) -> bool:
        by_leg: dict = {}
        for leg, g in variables:
            by_leg.setdefault(leg, []).append(g)
        return all(self.factors[leg].commuting(gs) for leg, gs in by_leg.items())

    def split(self, mono: tuple, lin: tuple) -> tuple:
        key = (mono, lin)
        hit = self._split_cache.get(key)
        if hit is None:
            legs_m = [[] for _ in range(self.power)]
            legs_l = [[] for _ in range(self.power)]
            for (leg, g), e in mono:
                legs_m[leg].append((g, e))
            for (leg, g), *rest in lin:
                legs_l[leg].append((g, *rest))
            hit = tuple(
                self.factors[i]._word(tuple(sorted(legs_m[i])), tuple(sorted(legs_l[i])))
                for i in range(self.power)
            )
            self._split_cache[key] = hit
        return hit

    def tag(self, f: ExpPoly, leg: int) -> ExpPoly:
        return f.map_variables(lambda v: (leg, v))

    def _tagged_word(self, leg: int, poly: ExpPoly) -> ExpPoly:
        key = (leg, poly)
        hit = self._tag_cache.get(key)
        if hit is None:
            hit = self.tag(poly, leg)
            self._tag_cache[key] = hit
        return hit

    def mul(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        if f.ring != self.ring or g.ring != self.ring:
            raise ConfigurationError("operands belong to a different ring")
        s = self.ring.s
        out: dict = {}
        gs = [(self.split(m, l), c, wp, jb) for (m, l, wp, jb), c in g.terms.items()]
        for (m1, l1, p1, b1), c1 in f.terms.items():
            s1 = self.split(m1, l1)
            for s2, c2, p2, b2 in gs:
                coef = c1 * c2
                if b1 and b2:
                    if s == 0:
                        continue
                    coef *= s
                    b = 0
                else:
                    b = b1 | b2
                _scale_into(out, self._mul_legs(s1, s2), coef, p1 + p2, b, s)
        return ExpPoly(self.ring, out)

    def _mul_legs(self, s1: tuple, s2: tuple) -> ExpPoly:
        key = (s1, s2)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = self.ring.one()
            for leg, (a, b) in enumerate(zip(s1, s2)):
                part = self.factors[leg]._mul_words(a, b)
                hit = multiply(hit, self._tagged_word(leg, part))
                if not hit:
                    break
            self._mul_cache[key] = hit
        return hit

    def simple(self, *legs: ExpPoly) -> ExpPoly:
        """Symbol of ``x0 ⊗ x1 ⊗ ...`` for per-leg symbols in normal form."""
        if len(legs) != self.power:
            raise PresentationError(f"expected {self.power} legs")
        out = self.ring.one()
        for i, x in enumerate(legs):
            x = x.symbol if isinstance(x, NCElement) else self.ring.coerce(x)
            out = multiply(out, self.tag(x, i))
        return out

    def leg_symbols(self, f: ExpPoly):
        """Yield (scalar, [leg symbols]) per term."""
        for (m, l, wp, jb), c in f.terms.items():
            words = self.split(m, l)
            yield (
                ExpPoly(self.ring, {((), (), wp, jb): c}),
                [self.factors[i]._word_poly(w) for i, w in enumerate(words)],
            )

    def swap(self, f: ExpPoly) -> ExpPoly:
        """Flip the legs of a two-fold tensor."""
        if self.power != 2 or self.factors[0] is not self.factors[1]:
            raise PresentationError("swap needs a tensor square")
        return f.map_variables(lambda v: (1 - v[0], v[1]))

    def render(self, f: ExpPoly) -> str:
        order = lambda v: (v[0], self.factors[v[0]].index[v[1]])
        name = lambda v: f"{self.factors[v[0]].name_of(v[1])}[{v[0] + 1}]"
        return _render_ordered(f, order, name)


class NCElement:
    """An element of a presentation (or of any algebra object above)."""

    __slots__ = ("algebra", "symbol")

    def __init__(self, algebra, symbol: ExpPoly):
        self.algebra = algebra
        self.symbol = symbol

    def _wrap(self, other):
        if isinstance(other, NCElement):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise ConfigurationError("elements of different algebras")
            return other.symbol
        return self.algebra.ring.coerce(other)

    def __add__(self, other):
        return NCElement(self.algebra, self.symbol + self._wrap(other))

    __radd__ = __add__

    def __sub__(self, other):
        return NCElement(self.algebra, self.symbol - self._wrap(other))

    def __rsub__(self, other):
        return NCElement(self.algebra, self._wrap(other) - self.symbol)

    def __neg__(self):
        return NCElement(self.algebra, -self.symbol)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NCElement(self.algebra, self.symbol * other)
        if isinstance(other, ExpPoly) and other.is_scalar():
            return NCElement(self.algebra, self.symbol * other)
        return NCElement(self.algebra, self.algebra.mul(self.symbol, self._wrap(other)))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NCElement(self.algebra, self.symbol * other)
        other = self.algebra.ring.coerce(other)
        if not other.is_scalar():
            return NCElement(self.algebra, self.algebra.mul(other, self.symbol))
        return NCElement(self.algebra, other * self.symbol)

    def __pow__(self, n: int):
        out = NCElement(self.algebra, self.algebra.one())
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCElement):
            return self.algebra == other.algebra and self.symbol == other.symbol
        if isinstance(other, (ExpPoly, int, Fraction)):
            return self.symbol == self.algebra.ring.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.symbol)

    def __bool__(self):
        return bool(self.symbol)

    def __str__(self):
        render = getattr(self.algebra, "render", None)
        return render(self.symbol) if render else str(self.symbol)

    __repr__ = __str__


class TensorElement(NCElement):
    __slots__ = ()

    @property
    def power(self) -> int:
        return self.algebra.power


# --------------------------------------------------------------------------
# module-level operations


def nc_multiply(x: NCElement, y: NCElement) -> NCElement:
    if x.algebra != y.algebra:
        raise ConfigurationError("elements of different presentations")
    return NCElement(x.algebra, x.algebra.mul(x.symbol, y.symbol))


def commutator(x: NCElement, y: NCElement) -> NCElement:
    return nc_multiply(x, y) - nc_multiply(y, x)


def tensor_multiply(u: TensorElement, v: TensorElement) -> TensorElement:
    if not isinstance(u.algebra, TensorAlgebra) or u.algebra != v.algebra:
        raise ConfigurationError("tensor power or presentation mismatch")
    return TensorElement(u.algebra, u.algebra.mul(u.symbol, v.symbol))


class Morphism:
    """Multiplicative (or anti-multiplicative) extension of generator images.

    ``images`` maps each generator of ``source`` to a symbol in ``target``.
    The exponential ``exp(l g)`` is sent to ``exp(l * image(g))``, which
    requires ``image(g)`` to be a linear form in mutually commuting
    generators of ``target``.
    """

    def __init__(self, source: TowerPresentation, target, images: Mapping, anti: bool = False):
        self.source = source
        self.target = target
        self.anti = anti
        missing = set(source.generators) - set(images)
        if missing:
            raise PresentationError(f"morphism undefined on {sorted(missing)}")
        self.images = {g: target.ring.coerce(images[g]) for g in source.generators}
        self._block_cache: dict = {}
        self._word_cache: dict = {}

    def _exp_image(self, g, lc) -> ExpPoly:
        ring = self.target.ring
        img = self.images[g]
        try:
            lin = _as_linear(img)
        except UnsupportedSubstitution as exc:
            raise UnsupportedSubstitution(
                f"exp of {g!r}: image {img} is not a linear form"
            ) from exc
        if len(lin) > 1 and not self.target.commuting(lin.keys()):
            raise UnsupportedSubstitution(f"exp of {g!r}: image generators do not commute")
        lam = _lin_scalar(ring, *lc)
        return ring.exp({v: lam * c for v, c in lin.items()})

    def _block(self, block) -> ExpPoly:
        hit = self._block_cache.get(block)
        if hit is None:
            i, k, lc = block
            g = self.source.generators[i]
            hit = self.target.one()
            for _ in range(k):
                hit = self.target.mul(hit, self.images[g])
            if lc is not None:
                hit = self.target.mul(hit, self._exp_image(g, lc))
            self._block_cache[block] = hit
        return hit

    def _word(self, word) -> ExpPoly:
        hit = self._word_cache.get(word)
        if hit is None:
            hit = self.target.one()
            blocks = reversed(word) if self.anti else word
            for b in blocks:
                hit = self.target.mul(hit, self._block(b))
                if not hit:
                    break
            self._word_cache[word] = hit
        return hit

    def __call__(self, f: ExpPoly) -> ExpPoly:
        if isinstance(f, NCElement):
            f = f.symbol
        s = self.target.ring.s
        out: dict = {}
        for word, c, wp, jb in self.source.words(f):
            _scale_into(out, self._word(word), c, wp, jb, s)
        return ExpPoly(self.target.ring, out)


def apply_morphism(images: Mapping, x: NCElement, target=None, mode: str = "homomorphism"):
    """Extend ``images`` (anti)multiplicatively and apply to ``x``."""
    if mode not in ("homomorphism", "antihomomorphism"):
        raise ValueError(f"unknown mode {mode!r}")
    if target is None:
        sample = next(iter(images.values()))
        target = sample.algebra if isinstance(sample, NCElement) else CommutativeAlgebra(x.algebra.ring)
    imgs = {g: (v.symbol if isinstance(v, NCElement) else v) for g, v in images.items()}
    m = Morphism(x.algebra, target, imgs, anti=(mode == "antihomomorphism"))
    cls = TensorElement if isinstance(target, TensorAlgebra) else NCElement
    return cls(target, m(x.symbol))


def map_leg(algebra: TensorAlgebra, f: ExpPoly, leg: int, fn, out_algebra: TensorAlgebra, width: int) -> ExpPoly:
    """Apply ``fn`` (leg symbol -> symbol of a ``width``-fold tensor) on one leg.

    The other legs are re-indexed so that the image occupies positions
    ``leg .. leg + width - 1`` of ``out_algebra``.
    """
    ring = algebra.ring
    s = ring.s
    out: dict = {}
    cache: dict = {}
    for (m, l, wp, jb), c in f.terms.items():
        words = algebra.split(m, l)
        key = words
        hit = cache.get(key)
        if hit is None:
            hit = ring.one()
            for i, w in enumerate(words):
                sym = algebra.factors[i]._word_poly(w)
                if i == leg:
                    img = fn(sym)
                    img = img.map_variables(lambda v, o=leg: (v[0] + o, v[1]))
                else:
                    shift = i if i < leg else i + width - 1
                    img = sym.map_variables(lambda v, o=shift: (o, v))
                hit = multiply(hit, img)
            cache[key] = hit
        _scale_into(out, hit, c, wp, jb, s)
    return ExpPoly(ring, out)


def map_legs(algebra: TensorAlgebra, f: ExpPoly, fns: Sequence, ring: Ring | None = None) -> ExpPoly:
    """Apply ``fns[i]`` (leg symbol -> untagged symbol) on each leg independently."""
    ring = ring or algebra.ring
    s = ring.s
    out: dict = {}
    cache: dict = {}
    for (m, l, wp, jb), c in f.terms.items():
        words = algebra.split(m, l)
        hit = cache.get(words)
        if hit is None:
            hit = ring.one()
            for i, w in enumerate(words):
                img = fns[i](algebra.factors[i]._word_poly(w))
                hit = multiply(hit, img.map_variables(lambda v, o=i: (o, v)))
                if not hit:
                    break
            cache[words] = hit
        _scale_into(out, hit, c, wp, jb, s)
    return ExpPoly(ring, out)


def expand_to_degree(x: NCElement, D: int) -> dict:
    """Taylor-expand exponentials and truncate at word degree ``D``.

    Exponentials sit in their own generator's block, so expansion needs no
    reordering.  Tensors are truncated legwise.  Returns
    ``{word key: scalar}`` where a word key is a tuple of (generator,
    exponent) pairs (per leg for tensors).
    """
    alg = x.algebra
    if isinstance(alg, TensorAlgebra):
        blocks = [
            {(leg, g) for g in alg.factors[leg].generators} for leg in range(alg.power)
        ]
        expanded = expand_series(x.symbol, D, blocks)
    else:
        expanded = expand_series(x.symbol, D)
    return {m: coef for (m, l), coef in expanded.scalar_coefficients().items()}


def expanded(x: NCElement, D: int) -> NCElement:
    alg = x.algebra
    if isinstance(alg, TensorAlgebra):
        blocks = [{(leg, g) for g in alg.factors[leg].generators} for leg in range(alg.power)]
        sym = expand_series(x.symbol, D, blocks)
    else:
        sym = expand_series(x.symbol, D)
    return type(x)(alg, sym)


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    valid: bool
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


def validate_presentation(P: TowerPresentation) -> ValidationReport:
    """Check the tower hypotheses and the Jacobi identity on generators."""
    problems = []
    gens = P.generators
    for (hi, lo), kind in sorted(P.kinds.items()):
        c = P.rule(hi, lo)
        pair = f"[{gens[hi]},{gens[lo]}]"
        declared = P.declared_support.get((hi, lo))
        if declared is not None and set(declared) != c.variables():
            problems.append((pair, "declared support mismatch", str(c)))
        for v in c.exp_variables():
            if v not in P.func:
                problems.append((pair, f"exponential of poly generator {v}", str(c)))
        if kind == "derivation":
            if gens[hi] in P.func:
                problems.append((pair, "derivation rule needs a poly upper generator", str(c)))
            cluster = c.variables() | {gens[lo]}
            for a in cluster:
                for b in cluster:
                    ia, ib = P.index[a], P.index[b]
                    if ia > ib and P.kinds[(ia, ib)] != "zero":
                        problems.append((pair, f"commutant condition fails: [{a},{b}] != 0", str(P.rule(ia, ib))))
        elif kind == "mirror":
            if gens[lo] in P.func:
                problems.append((pair, "mirror rule needs a poly lower generator", str(c)))
    if not problems:
        n = len(gens)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    x, y, z = (P.gen(gens[t]) for t in (i, j, k))
                    try:
                        res = (
                            commutator(x, commutator(y, z))
                            + commutator(y, commutator(z, x))
                            + commutator(z, commutator(x, y))
                        )
                    except PresentationError as exc:
                        problems.append((f"({gens[i]},{gens[j]},{gens[k]})", str(exc), ""))
                        continue
                    if res:
                        problems.append(
                            (f"Jacobi({gens[i]},{gens[j]},{gens[k]})", "residual", P.render(res.symbol))
                        )
    return ValidationReport(not problems, problems)


def random_monomial(P: TowerPresentation, rng: random.Random, max_degree: int = 3, exp_range=(-2, 2)) -> ExpPoly:
    """Random normal word; func generators get a random exponential.

    The exponent uses the same parameter power as the rules of ``P`` so that
    products stay inside one exponential family.
    """
    powers = {}
    for c in P.rules.values():
        for (_, l, _, _) in c.terms:
            for v, p, _, _ in l:
                powers[v] = p
    out = P.ring.one()
    for g in P.generators:
        k = rng.randint(0, max_degree)
        if k:
            out = out * P.ring.var(g, k)
        if g in P.func and rng.random() < 0.5:
            lam = rng.randint(*exp_range)
            if lam:
                out = out * P.ring.exp({g: P.ring.scalar(lam, powers.get(g, 0))})
    return out
