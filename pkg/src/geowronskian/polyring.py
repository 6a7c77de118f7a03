"""Exact sparse multivariate polynomials and truncated power series over Q.

Coefficients are kept as ``int`` when integral and ``Fraction`` otherwise, so
integer-heavy determinant work stays on the fast path.  The first ``p``
variables of a polynomial are the germ variables ``z1..zp``; any further
variables are parameters (symbolic coefficients) and are never differentiated
by word operators unless asked to.
"""
from __future__ import annotations

import enum
import itertools
import random
import re
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from . import linalg
from .wordcomb import word_key


class PrecisionError(ArithmeticError):
    """A truncated-series operation would need terms beyond the truncation."""


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _coerce(c):
    if isinstance(c, (int, Fraction)):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError(f"cannot use {c!r} as a rational coefficient")


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Sparse polynomial: ``{exponent tuple: nonzero rational}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping | None = None, nvars: int | None = None):
        terms = dict(terms or {})
        if nvars is None:
            if not terms:
                raise ValueError("nvars is required for the zero polynomial")
            nvars = len(next(iter(terms)))
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong arity (expected {nvars})")
            c = _coerce(c)
            if c:
                clean[e] = c
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        c = _coerce(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        """The ``i``-th variable, 0-based."""
        e = tuple(int(j == i) for j in range(nvars))
        return cls._raw({e: 1}, nvars)

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1, nvars: int | None = None) -> "Polynomial":
        e = tuple(exponent)
        if nvars is not None and nvars > len(e):
            e = e + (0,) * (nvars - len(e))
        c = _coerce(coeff)
        return cls._raw({e: c} if c else {}, len(e))

    # basic protocol -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * self.nvars: _norm(Fraction(other))} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, nvars={self.nvars})"

    def __str__(self):
        return format_poly(self)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return Polynomial._raw(t, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm(Fraction(other)) if isinstance(other, Fraction) else other
            if not other:
                return Polynomial._raw({}, self.nvars)
            return Polynomial._raw({e: _norm(c * other) for e, c in self.terms.items()}, self.nvars)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t: dict = {}
        get = t.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                t[e] = get(e, 0) + ca * cb
        return Polynomial._raw({e: _norm(c) for e, c in t.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # queries ------------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self, nvars: int | None = None) -> int:
        """Total degree in the first ``nvars`` variables (all by default); -1 for 0."""
        k = self.nvars if nvars is None else nvars
        return max((sum(e[:k]) for e in self.terms), default=-1)

    def coefficient(self, exponent: Sequence[int]):
        return self.terms.get(tuple(exponent), 0)

    # calculus -----------------------------------------------------------
    def diff(self, alpha: Sequence[int]) -> "Polynomial":
        """``d^alpha``: partial derivative, ``alpha`` covers leading variables."""
        alpha = tuple(alpha) + (0,) * (self.nvars - len(alpha))
        if len(alpha) != self.nvars:
            raise ValueError("derivative multi-index longer than variable count")
        t = {}
        for e, c in self.terms.items():
            coef = c
            ne = []
            for x, a in zip(e, alpha):
                if a > x:
                    coef = 0
                    break
                if a:
                    for j in range(a):
                        coef *= x - j
                ne.append(x - a)
            if coef:
                ne = tuple(ne)
                t[ne] = t.get(ne, 0) + coef
        return Polynomial._raw({e: _norm(c) for e, c in t.items() if c}, self.nvars)

    def evaluate(self, point: Sequence):
        """Evaluate at a full point (rationals or polynomials)."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = 0
        powers: dict = {}
        for e, c in self.terms.items():
            term = c
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in powers:
                        powers[key] = point[i] ** a
                    term = term * powers[key]
            total = total + term
        return _norm(total) if isinstance(total, (int, Fraction)) else total

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Replace some variables (0-based index -> rational or Polynomial)."""
        out = Polynomial.zero(self.nvars)
        cache: dict = {}
        for e, c in self.terms.items():
            rest = list(e)
            term = Polynomial.constant(c, self.nvars)
            for i, v in values.items():
                a = e[i]
                if a:
                    rest[i] = 0
                    key = (i, a)
                    if key not in cache:
                        cache[key] = v ** a
                    term = term * cache[key]
            out = out + term * Polynomial._raw({tuple(rest): 1}, self.nvars)
        return out

    def extend(self, nvars: int) -> "Polynomial":
        """Append unused variables."""
        pad = (0,) * (nvars - self.nvars)
        return Polynomial._raw({e + pad: c for e, c in self.terms.items()}, nvars)

    def shift(self, x: Sequence) -> "Polynomial":
        """``z -> f(x + z)`` in the leading ``len(x)`` variables."""
        vals = {i: Polynomial.variable(i, self.nvars) + xi for i, xi in enumerate(x) if xi}
        return self.substitute(vals) if vals else self

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        other = self._lift(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e = max(other.terms)
        lead_c = Fraction(other.terms[lead_e])
        rem = self
        q: dict = {}
        while rem:
            e = max(rem.terms)
            if any(a < b for a, b in zip(e, lead_e)):
                raise ArithmeticError("polynomial division is not exact")
            qe = tuple(a - b for a, b in zip(e, lead_e))
            qc = _norm(rem.terms[e] / lead_c)
            q[qe] = qc
            rem = rem - other * Polynomial._raw({qe: qc}, self.nvars)
        return Polynomial._raw(q, self.nvars)


def poly_vars(nvars: int) -> list[Polynomial]:
    return [Polynomial.variable(i, nvars) for i in range(nvars)]


# ---------------------------------------------------------------------------
# exponent orders

class ExponentOrder(enum.Enum):
    """Total orders on exponent vectors used to define the series order."""

    LEX = "lex"            # coordinate 1 most significant
    LEX_LAST = "lex_last"  # coordinate p most significant

    def key(self, e: Sequence[int]):
        e = tuple(e)
        return e if self is ExponentOrder.LEX else e[::-1]


ZERO = "zero"


def series_order(f, order: ExponentOrder = ExponentOrder.LEX):
    """Least exponent present in ``f`` under ``order``; ``ZERO`` for 0."""
    poly = f.poly if isinstance(f, TruncatedSeries) else f
    if not poly.terms:
        return ZERO
    return min(poly.terms, key=order.key)


def leading_coefficient(f, order: ExponentOrder = ExponentOrder.LEX):
    e = series_order(f, order)
    if e == ZERO:
        return 0
    poly = f.poly if isinstance(f, TruncatedSeries) else f
    return poly.terms[e]


# ---------------------------------------------------------------------------
# truncated series

class TruncatedSeries:
    """A power series known modulo terms of total degree > ``trunc``."""

    __slots__ = ("poly", "trunc")

    def __init__(self, poly: Polynomial, trunc: int):
        if trunc < 0:
            raise PrecisionError("negative truncation order")
        self.trunc = trunc
        self.poly = _truncate(poly, trunc)

    @property
    def nvars(self):
        return self.poly.nvars

    def __repr__(self):
        return f"TruncatedSeries({format_poly(self.poly)!r} + O({self.trunc + 1}))"

    def __bool__(self):
        return bool(self.poly)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            t = min(self.trunc, other.trunc)
            return _truncate(self.poly, t) == _truncate(other.poly, t)
        if isinstance(other, (Polynomial, int, Fraction)):
            return self == _as_series(other, self.trunc, self.nvars)
        return NotImplemented

    def _other(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (Polynomial, int, Fraction)):
            return _as_series(other, self.trunc, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.poly + other.poly, min(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.poly, self.trunc)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.poly - other.poly, min(self.trunc, other.trunc))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.poly * other, self.trunc)
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        t = min(self.trunc, other.trunc)
        return TruncatedSeries(_mul_trunc(self.poly, other.poly, t), t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = TruncatedSeries(Polynomial.constant(1, self.nvars), self.trunc)
        for _ in range(n):
            result = result * self
        return result

    def diff(self, alpha: Sequence[int]) -> "TruncatedSeries":
        ell = sum(alpha)
        if ell > self.trunc:
            raise PrecisionError(
                f"derivative of order {ell} of a series truncated at {self.trunc}")
        return TruncatedSeries(self.poly.diff(alpha), self.trunc - ell)

    def constant_term(self):
        return self.poly.constant_term()


def _truncate(poly: Polynomial, trunc: int) -> Polynomial:
    if all(sum(e) <= trunc for e in poly.terms):
        return poly
    return Polynomial._raw({e: c for e, c in poly.terms.items() if sum(e) <= trunc}, poly.nvars)


def _mul_trunc(a: Polynomial, b: Polynomial, trunc: int) -> Polynomial:
    t: dict = {}
    for ea, ca in a.terms.items():
        da = sum(ea)
        if da > trunc:
            continue
        for eb, cb in b.terms.items():
            if da + sum(eb) > trunc:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            t[e] = t.get(e, 0) + ca * cb
    return Polynomial._raw({e: _norm(c) for e, c in t.items() if c}, a.nvars)


def _as_series(f, trunc: int, nvars: int | None = None) -> TruncatedSeries:
    if isinstance(f, TruncatedSeries):
        return f
    if isinstance(f, Polynomial):
        return TruncatedSeries(f, trunc)
    return TruncatedSeries(Polynomial.constant(f, nvars), trunc)


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(\d+)|(z_?\{?\d+\}?)|(\*\*|[-+*/^()−]))")


def _tokenize(expr: str):
    pos = 0
    toks = []
    while pos < len(expr):
        if expr[pos:].strip() == "":
            break
        m = _TOKEN.match(expr, pos)
        if not m:
            raise ParseError(f"unexpected character {expr[pos]!r}", pos)
        start = m.start(m.lastindex)
        num, var, op = m.groups()
        if num is not None:
            toks.append(("num", int(num), start))
        elif var is not None:
            toks.append(("var", int(re.sub(r"\D", "", var)), start))
        else:
            toks.append(("op", "^" if op == "**" else ("-" if op == "−" else op), start))
        pos = m.end()
    toks.append(("end", None, len(expr)))
    return toks


def parse_poly(expr: str, p: int) -> Polynomial:
    """Parse ``expr`` over the variables ``z1..zp``.

    Grammar: integers, ``a/b`` literals, ``+ - * ^``, parentheses.
    """
    toks = _tokenize(expr)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, val=None):
        nonlocal i
        t = toks[i]
        if kind and t[0] != kind or val is not None and t[1] != val:
            want = val if val is not None else kind
            raise ParseError(f"expected {want!r}", t[2])
        i += 1
        return t

    def expression():
        left = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            right = term()
            left = left + right if op == "+" else left - right
        return left

    def term():
        left = unary()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            left = left * unary()
        return left

    def unary():
        t = peek()
        if t[0] == "op" and t[1] in "+-":
            take()
            v = unary()
            return -v if t[1] == "-" else v
        return power()

    def power():
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            sign = 1
            if peek()[0] == "op" and peek()[1] in "+-":
                sign = -1 if take()[1] == "-" else 1
            t = take("num")
            if sign < 0 and t[1] != 0:
                raise ParseError("negative exponent", t[2])
            base = base ** t[1]
        return base

    def atom():
        t = peek()
        if t[0] == "num":
            take()
            val = Fraction(t[1])
            if peek()[0] == "op" and peek()[1] == "/":
                take()
                d = take("num")
                if d[1] == 0:
                    raise ParseError("division by zero", d[2])
                val = val / d[1]
            return Polynomial.constant(val, p)
        if t[0] == "var":
            take()
            if not 1 <= t[1] <= p:
                raise ParseError(f"unknown variable z{t[1]} (p={p})", t[2])
            return Polynomial.variable(t[1] - 1, p)
        if t[0] == "op" and t[1] == "(":
            take()
            v = expression()
            take("op", ")")
            return v
        raise ParseError("unexpected token" if t[0] != "end" else "unexpected end of input", t[2])

    result = expression()
    if peek()[0] != "end":
        raise ParseError("trailing input", peek()[2])
    return result


def format_coeff(c) -> str:
    c = _norm(Fraction(c))
    return str(c)


def format_poly(f: Polynomial, names: Sequence[str] | None = None,
                order: ExponentOrder = ExponentOrder.LEX) -> str:
    """Canonical printer: terms in descending order, reduced fractions."""
    if not f.terms:
        return "0"
    if names is None:
        names = [f"z{i + 1}" for i in range(f.nvars)]
    out = []
    for e in sorted(f.terms, key=order.key, reverse=True):
        c = Fraction(f.terms[e])
        mon = "*".join(
            names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a)
        neg = c < 0
        a = -c if neg else c
        if not mon:
            body = format_coeff(a)
        elif a == 1:
            body = mon
        else:
            body = f"{format_coeff(a)}*{mon}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# word derivatives, Leibniz rule

def partial_derivative(f, u: Sequence[int]):
    """``d_u f`` for a Polynomial, TruncatedSeries or anything with ``diff``."""
    return f.diff(tuple(u))


def leibniz_constant(a: Sequence[int], b: Sequence[int]) -> int:
    c = 1
    for x, y in zip(a, b):
        c *= comb(x + y, x)
    return c


def leibniz_terms(u: Sequence[int]) -> list[tuple[tuple, tuple, int]]:
    """Decompositions ``u = a . b`` (empty words allowed) with their constants."""
    out = []
    for a in itertools.product(*(range(x + 1) for x in u)):
        b = tuple(x - y for x, y in zip(u, a))
        out.append((a, b, leibniz_constant(a, b)))
    return out


def leibniz_expand(f, g, u: Sequence[int]):
    total = None
    for a, b, c in leibniz_terms(u):
        term = f.diff(a) * g.diff(b) * c
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# composition

def compose_series(f: Polynomial, phi: Sequence, trunc: int | None = None) -> TruncatedSeries:
    """``f(phi_1, ..., phi_n)`` truncated at total degree ``trunc``.

    ``phi`` entries may be TruncatedSeries or Polynomials (exact).
    """
    if len(phi) != f.nvars:
        raise ValueError(f"f has {f.nvars} variables but phi has {len(phi)} components")
    if not phi:
        raise ValueError("empty substitution")
    known = [s.trunc for s in phi if isinstance(s, TruncatedSeries)]
    nv = phi[0].nvars if hasattr(phi[0], "nvars") else None
    if trunc is None:
        if not known:
            raise ValueError("trunc is required when every phi is exact")
        trunc = min(known)
    if known and min(known) < trunc:
        raise PrecisionError(f"phi truncated at {min(known)} < requested {trunc}")
    series = [_as_series(s, trunc, nv) for s in phi]
    series = [TruncatedSeries(s.poly, trunc) for s in series]
    one = TruncatedSeries(Polynomial.constant(1, series[0].nvars), trunc)
    powers = [[one] for _ in series]
    total = TruncatedSeries(Polynomial.zero(series[0].nvars), trunc)
    for e, c in f.terms.items():
        term = one * c
        for j, a in enumerate(e):
            while len(powers[j]) <= a:
                powers[j].append(powers[j][-1] * series[j])
            if a:
                term = term * powers[j][a]
        total = total + term
    return total


def chain_rule_table(phi: Sequence, u: Sequence[int]) -> dict[tuple, object]:
    """Coefficients ``c_beta`` with ``d_u(f o phi) = sum_beta (d_beta f o phi) c_beta``.

    Built one letter at a time from the first-order chain rule; the
    coefficients are polynomials / truncated series in the phi variables.
    """
    n = len(phi)
    letters = [i for i, a in enumerate(u) for _ in range(a)]
    p = len(u)
    nv = phi[0].nvars
    if isinstance(phi[0], TruncatedSeries):
        one = TruncatedSeries(Polynomial.constant(1, nv), phi[0].trunc)
    else:
        one = Polynomial.constant(1, nv)
    table: dict[tuple, object] = {(0,) * n: one}
    first = {}
    for i in letters:
        e_i = tuple(int(j == i) for j in range(p))
        nxt: dict[tuple, object] = {}
        for beta, c in table.items():
            dc = c.diff(e_i)
            if dc:
                nxt[beta] = nxt[beta] + dc if beta in nxt else dc
            for j in range(n):
                key = (i, j)
                if key not in first:
                    first[key] = phi[j].diff(e_i)
                d = first[key]
                if not d:
                    continue
                b2 = beta[:j] + (beta[j] + 1,) + beta[j + 1:]
                term = c * d
                nxt[b2] = nxt[b2] + term if b2 in nxt else term
        table = {b: c for b, c in nxt.items() if c}
    return table


def derivative_of_composition(f: Polynomial, phi: Sequence, u: Sequence[int],
                              trunc: int | None = None) -> TruncatedSeries:
    """``d_u(f o phi)`` via the recursive chain rule.

    The result is truncated at ``trunc`` (default: phi truncation minus the
    length of ``u``); phi must carry ``len(u) + trunc`` orders of precision.
    """
    ell = sum(u)
    known = [s.trunc for s in phi if isinstance(s, TruncatedSeries)]
    if trunc is None:
        if not known:
            raise ValueError("trunc is required when every phi is exact")
        trunc = min(known) - ell
    if trunc < 0 or (known and min(known) < trunc + ell):
        raise PrecisionError(
            f"phi truncation {min(known) if known else None} too small for "
            f"a derivative of order {ell} with output truncation {trunc}")
    nv = phi[0].nvars
    phi_s = [TruncatedSeries(_as_series(s, trunc + ell, nv).poly, trunc + ell) for s in phi]
    table = chain_rule_table(phi_s, u)
    total = TruncatedSeries(Polynomial.zero(nv), trunc)
    for beta, c in table.items():
        outer = compose_series(f.diff(beta), phi_s, trunc)
        total = total + outer * TruncatedSeries(c.poly, trunc)
    return total


def multiset_partitions(u: Sequence[int]) -> list[tuple[tuple, ...]]:
    """Unordered decompositions of ``u`` into nonzero words (parts sorted)."""
    u = tuple(u)
    parts_all = sorted((v for v in itertools.product(*(range(a + 1) for a in u)) if any(v)),
                       key=word_key)
    out = []

    def rec(rest, start, acc):
        if not any(rest):
            out.append(tuple(acc))
            return
        for idx in range(start, len(parts_all)):
            v = parts_all[idx]
            if all(a <= b for a, b in zip(v, rest)):
                acc.append(v)
                rec(tuple(b - a for a, b in zip(v, rest)), idx, acc)
                acc.pop()

    rec(u, 0, [])
    return out


def _rand_frac(rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 3))


def random_polynomial(nvars: int, degree: int, rng: random.Random, density: float = 1.0,
                      lo: int = -5, hi: int = 5, integral: bool = False) -> Polynomial:
    terms = {}
    for e in itertools.product(range(degree + 1), repeat=nvars):
        if sum(e) <= degree and rng.random() < density:
            terms[e] = rng.randint(lo, hi) if integral else _rand_frac(rng, lo, hi)
    return Polynomial(terms, nvars)


def _composition_basis_value(part_list, f: Polynomial, phi: Sequence[Polynomial], at0):
    """``sum_{i_1..i_k} d_{i_1..i_k} f(phi(0)) prod_j d_{a_j} phi_{i_j}(0)``."""
    n = f.nvars
    k = len(part_list)
    total = Fraction(0)
    phi0 = [s.evaluate(at0) for s in phi]
    dphi = {}
    for idx in itertools.product(range(n), repeat=k):
        beta = [0] * n
        for i in idx:
            beta[i] += 1
        fval = f.diff(beta).evaluate(phi0)
        if not fval:
            continue
        prod = Fraction(fval)
        for a, i in zip(part_list, idx):
            key = (a, i)
            if key not in dphi:
                dphi[key] = phi[i].diff(a).evaluate(at0)
            prod *= dphi[key]
            if not prod:
                break
        total += prod
    return total


def infer_composition_constants(p: int, n: int, u: Sequence[int], seed: int = 0,
                                max_samples: int | None = None,
                                verify: int = 5) -> dict[tuple, Fraction]:
    """Recover the universal constants of the higher chain rule by a linear solve.

    Both sides of the expansion are evaluated at the origin on random
    polynomial ``f`` (``n`` variables) and ``phi`` (``p`` variables); each
    sample gives one linear equation in the unknown constants, indexed by the
    unordered decompositions of ``u``.  The table is then checked on
    ``verify`` fresh random inputs.
    """
    u = tuple(u)
    if len(u) != p:
        raise ValueError("word arity does not match p")
    ell = sum(u)
    if ell == 0:
        raise ValueError("empty word")
    parts = multiset_partitions(u)
    rng = random.Random(seed)
    at0 = (0,) * p
    rows, rhs = [], []
    max_samples = max_samples or 6 * len(parts) + 10

    def sample():
        f = random_polynomial(n, ell, rng, density=0.8)
        phi = [random_polynomial(p, ell, rng, density=0.8) for _ in range(n)]
        return f, phi

    def lhs(f, phi):
        comp = compose_series(f, phi, ell)
        return Fraction(comp.poly.diff(u).evaluate(at0))

    for _ in range(max_samples):
        f, phi = sample()
        rows.append([_composition_basis_value(pl, f, phi, at0) for pl in parts])
        rhs.append(lhs(f, phi))
        if len(rows) >= len(parts) and linalg.rank(rows) == len(parts):
            break
    if linalg.rank(rows) < len(parts):
        raise ValueError(
            f"underdetermined: rank {linalg.rank(rows)} < {len(parts)} unknowns "
            f"after {len(rows)} samples")
    sol = linalg.solve(rows, rhs)
    table = {pl: _norm(x) for pl, x in zip(parts, sol)}
    for _ in range(verify):
        f, phi = sample()
        pred = sum((table[pl] * _composition_basis_value(pl, f, phi, at0) for pl in parts),
                   Fraction(0))
        if pred != lhs(f, phi):
            raise ArithmeticError("inferred composition constants fail on a fresh input")
    return table


def apply_composition_constants(table: Mapping, f: Polynomial, phi: Sequence[Polynomial],
                                at: Sequence | None = None) -> Fraction:
    """Evaluate ``d_u(f o phi)`` at ``at`` from an inferred constant table."""
    p = phi[0].nvars
    at = tuple(at) if at is not None else (0,) * p
    return sum((c * _composition_basis_value(pl, f, phi, at) for pl, c in table.items()),
               Fraction(0))


def multinomial(alpha: Sequence[int]) -> int:
    out = factorial(sum(alpha))
    for a in alpha:
        out //= factorial(a)
    return out
