"""Exact commutative coefficient ring.

Elements are finite sums of terms

    c * param^k * j^b * x1^e1 ... xn^en * exp(L)

with ``c`` rational, ``param`` a single distinguished deformation parameter
(Laurent powers allowed), ``j`` an optional adjoined unit with ``j**2 = s``
and ``L`` a linear form in the ring variables.  Every element is kept in a
canonical sparse form so equality is decided key by key.

Scalars are simply elements without variables; there is no separate scalar
class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Hashable, Iterable, Mapping

__all__ = [
    "Ring",
    "ExpPoly",
    "ConfigurationError",
    "UnsupportedSubstitution",
    "DivergentLimit",
    "canonicalize",
    "multiply",
    "partial_derivative",
    "expand_series",
    "substitute",
    "limit_param",
    "param_series",
]


class ConfigurationError(ValueError):
    """Operands live in different ring instances, or data is malformed."""


class UnsupportedSubstitution(ValueError):
    pass


class DivergentLimit(ArithmeticError):
    def __init__(self, message: str, term: "ExpPoly | None" = None):
        super().__init__(message)
        self.term = term


@dataclass(frozen=True)
class Ring:
    """A ring instance: one deformation parameter, optionally a unit j.

    ``s`` is ``None`` when no unit is adjoined, otherwise one of -1, 0, 1.
    """

    param: str = "w"
    s: int | None = None

    def __post_init__(self):
        if self.s not in (None, -1, 0, 1):
            raise ConfigurationError(f"j**2 must be -1, 0 or 1, got {self.s}")

    @property
    def has_unit(self) -> bool:
        return self.s is not None

    def zero(self) -> "ExpPoly":
        return ExpPoly(self, {})

    def one(self) -> "ExpPoly":
        return self.scalar(1)

    def scalar(self, c=1, power: int = 0, j: int = 0) -> "ExpPoly":
        """``c * param**power * j**j``."""
        c = Fraction(c)
        if j and not self.has_unit:
            raise ConfigurationError("ring has no unit j")
        if j > 1:
            if self.s == 0:
                return self.zero()
            c *= self.s ** (j // 2)
            j %= 2
        if c == 0:
            return self.zero()
        return ExpPoly(self, {((), (), power, j): c})

    @property
    def p(self) -> "ExpPoly":
        """The deformation parameter as an element."""
        return self.scalar(1, 1)

    @property
    def j(self) -> "ExpPoly":
        return self.scalar(1, 0, 1)

    def j_inverse(self) -> "ExpPoly":
        if self.s in (None, 0):
            raise ZeroDivisionError("j has no inverse in this ring")
        return self.scalar(Fraction(1, self.s), 0, 1)

    def var(self, name: Hashable, power: int = 1) -> "ExpPoly":
        if power < 0:
            raise ValueError("negative variable powers are not ring elements")
        mono = ((name, power),) if power else ()
        return ExpPoly(self, {(mono, (), 0, 0): Fraction(1)})

    def exp(self, linear: "Mapping[Hashable, ExpPoly | int | Fraction] | ExpPoly") -> "ExpPoly":
        """``exp(sum c_x x)``; each ``c_x`` a scalar with a single param power."""
        if isinstance(linear, ExpPoly):
            linear = _as_linear(linear)
        lin = []
        for name, c in linear.items():
            entry = _lin_coefficient(self, c)
            if entry is not None:
                lin.append((name, *entry))
        lin.sort(key=lambda e: _sort_key(e[0]))
        return canonicalize(self, [(Fraction(1), (), tuple(lin), 0, 0)])

    def coerce(self, x) -> "ExpPoly":
        if isinstance(x, ExpPoly):
            if x.ring != self:
                raise ConfigurationError(f"ring mismatch: {x.ring} vs {self}")
            return x
        if isinstance(x, (int, Fraction)):
            return self.scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")


def _sort_key(name):
    # variables are strings inside one algebra and (leg, name) tuples in
    # tensor powers; never mixed within one element
    return name


def _lin_coefficient(ring: Ring, c):
    """(param power, real part, j part) of a single-power scalar."""
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return None if c == 0 else (0, c, Fraction(0))
    c = ring.coerce(c)
    if not c.is_scalar():
        raise ConfigurationError("exponent coefficient must be a scalar")
    if not c.terms:
        return None
    powers = {k[2] for k in c.terms}
    if len(powers) != 1:
        raise ConfigurationError(
            f"exponent coefficient {c} must involve a single power of {ring.param}"
        )
    (power,) = powers
    re = c.terms.get(((), (), power, 0), Fraction(0))
    im = c.terms.get(((), (), power, 1), Fraction(0))
    return (power, re, im)


def _as_linear(f: "ExpPoly") -> dict:
    out = {}
    for (mono, lin, wp, jb), c in f.terms.items():
        if lin or len(mono) != 1 or mono[0][1] != 1:
            raise UnsupportedSubstitution(f"{f} is not a homogeneous linear form")
        name = mono[0][0]
        out.setdefault(name, f.ring.zero())
        out[name] = out[name] + ExpPoly(f.ring, {((), (), wp, jb): c})
    return out


# --------------------------------------------------------------------------
# key arithmetic


@lru_cache(maxsize=None)
def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda t: _sort_key(t[0])))


@lru_cache(maxsize=None)
def _lin_add(a: tuple, b: tuple, s) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = {v: (p, re, im) for v, p, re, im in a}
    for v, p, re, im in b:
        if v in d:
            p0, re0, im0 = d[v]
            if p0 != p:
                raise ConfigurationError(
                    f"exponent coefficients of {v!r} mix parameter powers {p0} and {p}"
                )
            re, im = re + re0, im + im0
            if re == 0 and im == 0:
                del d[v]
                continue
        d[v] = (p, re, im)
    return tuple(sorted(((v, *t) for v, t in d.items()), key=lambda e: _sort_key(e[0])))


def _normalize_unit(ring: Ring, coef, mono, lin, wp, jb):
    """Rewrite j-proportional exponents for s in {0, 1}; yields raw terms."""
    s = ring.s
    if not any(e[3] for e in lin):
        yield coef, mono, lin, wp, jb
        return
    if s is None:
        raise ConfigurationError("j-valued exponent in a ring without a unit")
    if s == -1:
        yield coef, mono, lin, wp, jb
        return
    if s == 0:
        # exp(j*b*x) = 1 + j*b*x exactly since j**2 = 0
        base = tuple((v, p, re, Fraction(0)) for v, p, re, im in lin if re != 0)
        yield coef, mono, base, wp, jb
        if jb:
            return
        for v, p, re, im in lin:
            if im:
                yield coef * im, _mono_mul(mono, ((v, 1),)), base, wp + p, 1
        return
    # s == 1: exp(j*b*x) = (1+j)/2 exp(b*x) + (1-j)/2 exp(-b*x)
    idx = next(i for i, e in enumerate(lin) if e[3])
    v, p, re, im = lin[idx]
    half = Fraction(1, 2)
    for sign in (1, -1):
        new_re = re + sign * im
        rest = list(lin)
        if new_re == 0:
            del rest[idx]
        else:
            rest[idx] = (v, p, new_re, Fraction(0))
        rest = tuple(rest)
        # (1 + sign*j)/2 * j**jb
        if jb:
            parts = ((half * sign, 0), (half, 1))  # j*(1+sign j)/2 = (sign + j)/2
        else:
            parts = ((half, 0), (half * sign, 1))
        for c, b in parts:
            yield from _normalize_unit(ring, coef * c, mono, rest, wp, b)


def canonicalize(ring: Ring, terms: Iterable) -> "ExpPoly":
    """Build a canonical element from raw terms.

    Each raw term is ``(coef, mono, lin, param_power, jbit)`` with ``mono`` a
    mapping or tuple of (var, exponent) pairs and ``lin`` a tuple of
    ``(var, param_power, real, jpart)`` entries.  Duplicate keys merge and
    zero coefficients vanish; order of the input never matters.
    """
    out: dict = {}
    for coef, mono, lin, wp, jb in terms:
        coef = Fraction(coef)
        if coef == 0:
            continue
        if isinstance(mono, Mapping):
            mono = mono.items()
        mono = tuple(sorted(((v, e) for v, e in mono if e), key=lambda t: _sort_key(t[0])))
        if any(e < 0 for _, e in mono):
            raise ConfigurationError("negative variable exponent")
        lin = tuple(sorted((e for e in lin if e[2] or e[3]), key=lambda e: _sort_key(e[0])))
        if jb and ring.s is None:
            raise ConfigurationError("j used in a ring without a unit")
        if jb > 1:
            if ring.s == 0:
                continue
            coef *= ring.s ** (jb // 2)
            jb %= 2
        for c, m, l, p, b in _normalize_unit(ring, coef, mono, lin, wp, jb):
            key = (m, l, p, b)
            c = out.get(key, 0) + c
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return ExpPoly(ring, out)


class ExpPoly:
    """Canonical exponential polynomial.  Immutable."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- construction helpers -------------------------------------------
    def _new(self, terms) -> "ExpPoly":
        return ExpPoly(self.ring, terms)

    def _check(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            if other.ring != self.ring:
                raise ConfigurationError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            c = out.get(k, 0) + c
            if c:
                out[k] = c
            else:
                del out[k]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self._new({})
            return self._new({k: c * other for k, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = self._check(other)
        if len(other.terms) != 1:
            raise ZeroDivisionError("can only divide by a single scalar monomial")
        ((mono, lin, wp, jb), c), = other.terms.items()
        if mono or lin:
            raise ZeroDivisionError("can only divide by a scalar")
        inv = self.ring.scalar(Fraction(1) / c, -wp)
        if jb:
            inv = inv * self.ring.j_inverse()
        return self * inv

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(not m and not l for (m, l, _, _) in self.terms)

    def variables(self) -> set:
        out = set()
        for m, l, _, _ in self.terms:
            out.update(v for v, _ in m)
            out.update(e[0] for e in l)
        return out

    def exp_variables(self) -> set:
        out = set()
        for _, l, _, _ in self.terms:
            out.update(e[0] for e in l)
        return out

    def has_unit_part(self) -> bool:
        return any(jb or any(e[3] for e in l) for (_, l, _, jb) in self.terms)

    def param_powers(self) -> set:
        return {k[2] for k in self.terms}

    def degree(self, variables=None) -> int:
        """Largest polynomial degree over ``variables`` (all by default)."""
        best = 0
        for m, _, _, _ in self.terms:
            d = sum(e for v, e in m if variables is None or v in variables)
            best = max(best, d)
        return best

    def map_variables(self, fn: Callable) -> "ExpPoly":
        """Rename variables (must be injective on this element's support)."""
        out = {}
        for (m, l, wp, jb), c in self.terms.items():
            m2 = tuple(sorted(((fn(v), e) for v, e in m), key=lambda t: _sort_key(t[0])))
            l2 = tuple(sorted(((fn(e[0]), *e[1:]) for e in l), key=lambda t: _sort_key(t[0])))
            out[(m2, l2, wp, jb)] = c
        return self._new(out)

    def conjugate(self) -> "ExpPoly":
        """The automorphism j -> -j."""
        return canonicalize(
            self.ring,
            [
                (-c if jb else c, m, tuple((v, p, re, -im) for v, p, re, im in l), wp, jb)
                for (m, l, wp, jb), c in self.terms.items()
            ],
        )

    def scalar_coefficients(self) -> dict:
        """Group by (mono, lin): maps the non-scalar key to its scalar part."""
        out: dict = {}
        for (m, l, wp, jb), c in self.terms.items():
            out.setdefault((m, l), {})[(wp, jb)] = c
        return {
            k: ExpPoly(self.ring, {((), (), wp, jb): c for (wp, jb), c in v.items()})
            for k, v in out.items()
        }

    def coefficient(self, mono: tuple = (), lin: tuple = ()) -> "ExpPoly":
        """Scalar coefficient of the basis element ``mono * exp(lin)``."""
        return ExpPoly(
            self.ring,
            {((), (), wp, jb): c for (m, l, wp, jb), c in self.terms.items() if m == mono and l == lin},
        )

    def to_text(self, name: Callable = str, ordered: bool = False) -> str:
        return render(self, name, ordered)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"ExpPoly({render(self)})"

    # operation shortcuts
    def diff(self, var):
        return partial_derivative(self, var)

    def series(self, order: int, blocks=None):
        return expand_series(self, order, blocks)

    def subs(self, mapping):
        return substitute(self, mapping)


def multiply(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    if f.ring != g.ring:
        raise ConfigurationError(f"ring mismatch: {f.ring} vs {g.ring}")
    s = f.ring.s
    out: dict = {}
    for (m1, l1, p1, b1), c1 in f.terms.items():
        for (m2, l2, p2, b2), c2 in g.terms.items():
            c = c1 * c2
            if b1 and b2:
                if s == 0:
                    continue
                c *= s
                b = 0
            else:
                b = b1 | b2
            key = (_mono_mul(m1, m2), _lin_add(l1, l2, s), p1 + p2, b)
            c = out.get(key, 0) + c
            if c:
                out[key] = c
            else:
                del out[key]
    return ExpPoly(f.ring, out)


def _lin_scalar(ring: Ring, p, re, im) -> ExpPoly:
    t = {}
    if re:
        t[((), (), p, 0)] = re
    if im:
        t[((), (), p, 1)] = im
    return ExpPoly(ring, t)


def partial_derivative(f: ExpPoly, var) -> ExpPoly:
    """Derivative in one ring variable (Leibniz on monomials, chain rule on exp)."""
    ring = f.ring
    out = ring.zero()
    raw = []
    for (m, l, wp, jb), c in f.terms.items():
        md = dict(m)
        e = md.get(var, 0)
        if e:
            md[var] = e - 1
            raw.append((c * e, md, l, wp, jb))
        for v, p, re, im in l:
            if v == var:
                base = ExpPoly(ring, {(m, l, wp, jb): c})
                out = out + base * _lin_scalar(ring, p, re, im)
    return out + canonicalize(ring, raw)


@lru_cache(maxsize=None)
def _exp_series(ring: Ring, var, p, re, im, order: int) -> ExpPoly:
    coef = _lin_scalar(ring, p, re, im)
    x = ring.var(var)
    total = ring.zero()
    term = ring.one()
    for n in range(order + 1):
        total = total + term * Fraction(1, factorial(n))
        term = term * coef * x
    return total


def _truncate(f: ExpPoly, order: int, blocks) -> ExpPoly:
    def ok(mono):
        if blocks is None:
            return sum(e for _, e in mono) <= order
        for block in blocks:
            if sum(e for v, e in mono if v in block) > order:
                return False
        return True

    return ExpPoly(f.ring, {k: c for k, c in f.terms.items() if ok(k[0])})


def expand_series(f: ExpPoly, order: int, blocks=None) -> ExpPoly:
    """Replace every exponential by its Taylor polynomial.

    Terms whose variable degree exceeds ``order`` are dropped.  ``blocks``
    optionally gives a list of variable sets bounded separately (one per
    tensor leg, say); by default the total degree is bounded.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    ring = f.ring
    out = ring.zero()
    for (m, l, wp, jb), c in f.terms.items():
        t = ExpPoly(ring, {(m, (), wp, jb): c})
        for v, p, re, im in l:
            t = _truncate(t * _exp_series(ring, v, p, re, im, order), order, blocks)
        out = out + _truncate(t, order, blocks)
    return out


def substitute(f: ExpPoly, mapping: Mapping) -> ExpPoly:
    """Ring homomorphism sending variables to elements.

    A variable occurring inside an exponential may only be sent to a
    homogeneous linear form with single-power scalar coefficients.
    """
    ring = f.ring
    images = {v: ring.coerce(img) for v, img in mapping.items()}
    linear = {}
    for v in f.exp_variables():
        if v in images:
            try:
                linear[v] = {
                    y: _lin_coefficient(ring, c) for y, c in _as_linear(images[v]).items()
                }
            except (UnsupportedSubstitution, ConfigurationError) as exc:
                raise UnsupportedSubstitution(
                    f"cannot substitute {images[v]} for {v!r} inside an exponential"
                ) from exc
    pow_cache: dict = {}
    out = ring.zero()
    for (m, l, wp, jb), c in f.terms.items():
        raw_mono = []
        factor = ring.one()
        for v, e in m:
            if v in images:
                key = (v, e)
                if key not in pow_cache:
                    pow_cache[key] = images[v] ** e
                factor = factor * pow_cache[key]
            else:
                raw_mono.append((v, e))
        new_lin = []
        for v, p, re, im in l:
            if v in linear:
                for y, coef in linear[v].items():
                    if coef is None:
                        continue
                    cp, cre, cim = coef
                    s = ring.s or 0
                    new_lin.append(((y, p + cp, re * cre + s * im * cim, re * cim + im * cre),))
            else:
                new_lin.append(((v, p, re, im),))
        lin = ()
        for (entry,) in new_lin:
            lin = _lin_add(lin, (entry,), ring.s)
        t = canonicalize(ring, [(c, raw_mono, lin, wp, jb)])
        out = out + t * factor
    return out


def param_series(f: ExpPoly, order: int) -> ExpPoly:
    """Expand in the deformation parameter, keeping powers <= ``order``.

    Exponentials whose coefficient carries a positive parameter power are
    expanded; parameter-free exponentials are kept; negative powers inside an
    exponent raise :class:`DivergentLimit`.
    """
    ring = f.ring
    out = ring.zero()
    for (m, l, wp, jb), c in f.terms.items():
        keep = []
        expand = []
        for e in l:
            if e[1] < 0:
                raise DivergentLimit(
                    f"exponent with negative power of {ring.param}", ExpPoly(ring, {(m, l, wp, jb): c})
                )
            (expand if e[1] > 0 else keep).append(e)
        t = ExpPoly(ring, {(m, tuple(keep), wp, jb): c})
        for v, p, re, im in expand:
            budget = order - min(k[2] for k in t.terms) if t.terms else 0
            nmax = max(budget // p, 0)
            t = t * _exp_series(ring, v, p, re, im, nmax)
            t = ExpPoly(ring, {k: cc for k, cc in t.terms.items() if k[2] <= order})
        out = out + ExpPoly(ring, {k: cc for k, cc in t.terms.items() if k[2] <= order})
    return out


def limit_param(f: ExpPoly, order: int | None = None) -> ExpPoly:
    """The parameter -> 0 limit, i.e. the parameter**0 coefficient.

    Raises :class:`DivergentLimit` if negative powers survive the expansion.
    """
    ring = f.ring
    if order is None:
        order = 0
    expanded = param_series(f, order)
    bad = {k: c for k, c in expanded.terms.items() if k[2] < 0}
    if bad:
        raise DivergentLimit(
            f"negative powers of {ring.param} survive as {ring.param} -> 0", ExpPoly(ring, bad)
        )
    return ExpPoly(ring, {k: c for k, c in expanded.terms.items() if k[2] == 0})


def param_coefficient(f: ExpPoly, power: int) -> ExpPoly:
    """Coefficient of ``param**power`` (no expansion performed)."""
    return ExpPoly(
        f.ring, {(m, l, 0, jb): c for (m, l, wp, jb), c in f.terms.items() if wp == power}
    )


def change_ring(f: ExpPoly, ring: Ring, param_image: ExpPoly | None = None) -> ExpPoly:
    """Move ``f`` into ``ring``.

    The old parameter is sent to ``param_image`` (default: the new ring's
    parameter), which must be a product of an invertible scalar and
    variables/parameter when negative powers occur.
    """
    if param_image is None:
        param_image = ring.p
    param_image = ring.coerce(param_image)
    if any(e[1] != 0 for (_, l, _, _) in f.terms for e in l) and param_image != ring.p:
        raise UnsupportedSubstitution("parameter occurs inside an exponential")
    inv = None
    out = ring.zero()
    for (m, l, wp, jb), c in f.terms.items():
        if jb and not ring.has_unit:
            raise ConfigurationError("target ring has no unit j")
        if any(e[3] for e in l) and not ring.has_unit:
            raise ConfigurationError("target ring has no unit j")
        base = canonicalize(ring, [(c, m, l, 0, jb)])
        if wp >= 0:
            out = out + base * param_image ** wp
        else:
            if inv is None:
                if param_image.is_scalar():
                    inv = ring.one() / param_image
                else:
                    raise UnsupportedSubstitution(
                        "negative parameter power cannot map to a non-invertible element"
                    )
            out = out + base * inv ** (-wp)
    return out


def variable_to_param(f: ExpPoly, var, ring: Ring) -> ExpPoly:
    """Turn a central polynomial variable into the parameter of ``ring``.

    ``f`` must be free of its own parameter.
    """
    raw = []
    for (m, l, wp, jb), c in f.terms.items():
        if wp:
            raise ConfigurationError("element still depends on its parameter")
        md = dict(m)
        k = md.pop(var, 0)
        if any(e[0] == var for e in l):
            raise UnsupportedSubstitution(f"{var!r} occurs in an exponential")
        if any(e[1] for e in l):
            raise ConfigurationError("exponent depends on the parameter")
        raw.append((c, md, l, k, jb))
    return canonicalize(ring, raw)


# --------------------------------------------------------------------------
# rendering


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _scalar_text(ring: Ring, p: int, re: Fraction, im: Fraction) -> str:
    parts = []
    if re:
        parts.append(_fmt_frac(re))
    if im:
        parts.append(f"{_fmt_frac(im)}*j")
    body = parts[0] if len(parts) == 1 else "(" + " + ".join(parts) + ")"
    if p:
        pw = ring.param if p == 1 else f"{ring.param}^{p}"
        body = pw if body == "1" else f"{body}*{pw}"
    return body


def _term_sort_key(key):
    m, l, wp, jb = key
    deg = sum(e for _, e in m)
    return (deg, tuple((repr(v), -e) for v, e in m), repr(l), wp, jb)


def render(f: ExpPoly, name: Callable = str, ordered: bool = False) -> str:
    """Deterministic text; graded lexicographic term order.

    With ``ordered`` each exponential is printed next to its own variable,
    in variable order (the word reading used for noncommutative symbols).
    """
    if not f.terms:
        return "0"
    pieces = []
    for key in sorted(f.terms, key=_term_sort_key):
        m, l, wp, jb = key
        c = f.terms[key]
        factors = []
        if wp:
            factors.append(f.ring.param if wp == 1 else f"{f.ring.param}^{wp}")
        if jb:
            factors.append("j")
        word = [(v, 0, name(v) if e == 1 else f"{name(v)}^{e}") for v, e in m]
        parts = []
        for v, p, re, im in l:
            coef = _scalar_text(f.ring, p, re, im)
            if coef == "1":
                parts.append((v, 1, name(v)))
            elif coef == "-1":
                parts.append((v, 1, f"-{name(v)}"))
            elif coef.startswith("-1*"):
                parts.append((v, 1, f"-{coef[3:]}*{name(v)}"))
            else:
                parts.append((v, 1, f"{coef}*{name(v)}"))
        if ordered:
            word += [(v, k, f"exp({t})") for v, k, t in parts]
            word.sort(key=lambda t: (_sort_key(t[0]), t[1]))
        elif parts:
            lin = " + ".join(t for _, _, t in parts).replace("+ -", "- ")
            word.append((None, 1, f"exp({lin})"))
        factors += [t for _, _, t in word]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{_fmt_frac(mag)}*{body}"
        else:
            body = _fmt_frac(mag)
        pieces.append((sign, body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def binomial(n: int, k: int) -> int:
    return comb(n, k)
