"""Differential polynomials in jet variables.

A jet variable ``(j, alpha)`` stands for the raw derivative ``d^alpha f_j`` of
the ``j``-th germ at the base point (no factorial normalisation).  A
``DiffPoly`` is a polynomial in finitely many jet variables; the formal
derivative ``D_i`` sends ``(j, alpha)`` to ``(j, alpha + e_i)`` and extends by
the product rule, so evaluating a Wronskian on the generic jets
``u_{j,0}`` gives its universal expression in the jet coordinates.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polyring import _coerce, _norm

JetVar = tuple  # (j, alpha)
Monomial = tuple  # sorted tuple of (JetVar, power)


class JetOrderError(ArithmeticError):
    """A formal derivative would exceed the declared jet order."""


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, pa = a[i]
        vb, pb = b[j]
        if va == vb:
            out.append((va, pa + pb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a: Monomial, b: Monomial):
    """``a / b`` if ``b`` divides ``a``, else ``None``."""
    da = dict(a)
    for v, pw in b:
        have = da.get(v, 0)
        if have < pw:
            return None
        if have == pw:
            del da[v]
        else:
            da[v] = have - pw
    return tuple(sorted(da.items()))


def _mono_key(m: Monomial):
    # lex order on exponent vectors with larger jet variables more significant;
    # compatible with multiplication, used for exact division
    return tuple(sorted(m, reverse=True))


class DiffPoly:
    """Polynomial in jet variables over Q, with ``p`` letters and jet order ``k``.

    ``k=None`` means no bound on derivative length.
    """

    __slots__ = ("p", "k", "terms")

    def __init__(self, terms: Mapping | None = None, p: int = 1, k: int | None = None):
        self.p = p
        self.k = k
        clean = {}
        for mono, c in (terms or {}).items():
            c = _coerce(c)
            if c:
                mono = tuple(sorted((tuple((v[0], tuple(v[1]))), pw) for v, pw in mono if pw))
                for (j, alpha), _ in mono:
                    if len(alpha) != p:
                        raise ValueError(f"jet variable {(j, alpha)} does not have {p} letters")
                    if k is not None and sum(alpha) > k:
                        raise JetOrderError(f"jet variable {(j, alpha)} exceeds order {k}")
                clean[mono] = _norm(clean.get(mono, 0) + c)
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, terms: dict, p: int, k: int | None) -> "DiffPoly":
        obj = cls.__new__(cls)
        obj.p, obj.k, obj.terms = p, k, terms
        return obj

    @classmethod
    def constant(cls, c, p: int, k: int | None = None) -> "DiffPoly":
        c = _coerce(c)
        return cls._raw({(): c} if c else {}, p, k)

    def _k(self, other: "DiffPoly"):
        if self.k is None or other.k is None:
            return self.k if other.k is None else other.k
        return max(self.k, other.k)

    def _lift(self, other):
        if isinstance(other, DiffPoly):
            if other.p != self.p:
                raise ValueError("letter count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.constant(other, self.p, self.k)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"DiffPoly({format_diffpoly(self)!r})"

    __str__ = lambda self: format_diffpoly(self)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = _norm(v)
            else:
                t.pop(m, None)
        return DiffPoly._raw(t, self.p, self._k(other))

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self.terms.items()}, self.p, self.k)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return DiffPoly._raw({}, self.p, self.k)
            return DiffPoly._raw({m: _norm(c * other) for m, c in self.terms.items()},
                                 self.p, self.k)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        t: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                t[m] = t.get(m, 0) + ca * cb
        return DiffPoly._raw({m: _norm(c) for m, c in t.items() if c}, self.p, self._k(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = DiffPoly.constant(1, self.p, self.k)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def diff(self, alpha: Sequence[int]) -> "DiffPoly":
        """Apply ``D^alpha`` (one formal derivation per letter)."""
        out = self
        for i, a in enumerate(alpha):
            for _ in range(a):
                out = formal_derivative(out, i + 1)
        return out

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def evaluate(self, values: Mapping):
        """Substitute rationals (or ring elements) for every jet variable."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for v, pw in m:
                term = term * values[v] ** pw
            total = total + term
        return _norm(total) if isinstance(total, (int, Fraction)) else total

    def exact_div(self, other: "DiffPoly") -> "DiffPoly":
        other = self._lift(other)
        if not other:
            raise ZeroDivisionError("division by zero DiffPoly")
        if len(other.terms) == 1:
            (lead, lc), = other.terms.items()
            q = {}
            for m, c in self.terms.items():
                qm = _mono_div(m, lead)
                if qm is None:
                    raise ArithmeticError("DiffPoly division is not exact")
                q[qm] = _norm(Fraction(c) / lc)
            return DiffPoly._raw(q, self.p, self.k)
        lead = max(other.terms, key=_mono_key)
        lc = Fraction(other.terms[lead])
        rem = self
        q: dict = {}
        while rem:
            m = max(rem.terms, key=_mono_key)
            qm = _mono_div(m, lead)
            if qm is None:
                raise ArithmeticError("DiffPoly division is not exact")
            qc = _norm(rem.terms[m] / lc)
            q[qm] = q.get(qm, 0) + qc
            rem = rem - other * DiffPoly._raw({qm: qc}, self.p, self.k)
        return DiffPoly._raw({m: c for m, c in q.items() if c}, self.p, self.k)


def substitute_jets(P: DiffPoly, values: Mapping) -> DiffPoly:
    """Replace some jet variables by rationals or DiffPolys; others stay."""
    total = DiffPoly.constant(0, P.p, P.k)
    for m, c in P.terms.items():
        keep = []
        term = DiffPoly.constant(c, P.p, P.k)
        for v, pw in m:
            if v in values:
                term = term * (values[v] ** pw)
                if not term:
                    break
            else:
                keep.append((v, pw))
        if term:
            total = total + term * DiffPoly._raw({tuple(keep): 1}, P.p, P.k)
    return total


def jet_var(j: int, alpha: Sequence[int], p: int | None = None, k: int | None = None,
            power: int = 1) -> DiffPoly:
    alpha = tuple(alpha)
    return DiffPoly._raw({(((j, alpha), power),): 1}, p or len(alpha), k)


def make_generic_jet(p: int, k: int | None, count: int, start: int = 0) -> list[DiffPoly]:
    """Generic germs ``f_start, ..., f_{start+count-1}`` as undifferentiated jet variables."""
    if p < 1 or (k is not None and k < 0):
        raise ValueError("need p >= 1 and k >= 0")
    return [jet_var(j, (0,) * p, p, k) for j in range(start, start + count)]


def jet_variables(p: int, k: int, count: int) -> list[JetVar]:
    from .wordcomb import words_up_to
    alphas = [(0,) * p] + words_up_to(p, k)
    return [(j, a) for j in range(count) for a in alphas]


def formal_derivative(P: DiffPoly, i: int) -> DiffPoly:
    """Total derivative in the letter ``i`` (1-based)."""
    if not 1 <= i <= P.p:
        raise ValueError(f"letter {i} outside 1..{P.p}")
    idx = i - 1
    t: dict = {}
    for m, c in P.terms.items():
        for pos, ((j, alpha), pw) in enumerate(m):
            na = alpha[:idx] + (alpha[idx] + 1,) + alpha[idx + 1:]
            if P.k is not None and sum(na) > P.k:
                raise JetOrderError(f"derivative of jet variable {(j, alpha)} exceeds order {P.k}")
            rest = m[:pos] + (((j, alpha), pw - 1),) + m[pos + 1:] if pw > 1 else m[:pos] + m[pos + 1:]
            nm = _mono_mul(rest, (((j, na), 1),))
            t[nm] = t.get(nm, 0) + c * pw
    return DiffPoly._raw({m: _norm(c) for m, c in t.items() if c}, P.p, P.k)


def torus_multidegree(P: DiffPoly):
    """Common torus weight of all monomials, or ``"mixed"``."""
    if not P:
        raise ValueError("the zero DiffPoly has no multidegree")
    degs = set()
    for m in P.terms:
        beta = [0] * P.p
        for (_, alpha), pw in m:
            for i, a in enumerate(alpha):
                beta[i] += a * pw
        degs.add(tuple(beta))
        if len(degs) > 1:
            return "mixed"
    return degs.pop()


def deg_u_degree(P: DiffPoly, u: Sequence[int]) -> int:
    """Largest total power of jet variables with derivative index ``u``."""
    u = tuple(u)
    if P.k is not None and sum(u) != P.k:
        raise ValueError(f"word length {sum(u)} differs from jet order {P.k}")
    return max((sum(pw for (_, alpha), pw in m if alpha == u) for m in P.terms), default=0)


def random_diffpoly(p: int, k: int, count: int, rng: random.Random, nterms: int = 4,
                    max_factors: int = 3) -> DiffPoly:
    vars_ = jet_variables(p, k, count)
    t = {}
    for _ in range(nterms):
        mono = {}
        for _ in range(rng.randint(0, max_factors)):
            v = rng.choice(vars_)
            mono[v] = mono.get(v, 0) + 1
        t[tuple(mono.items())] = rng.randint(-5, 5)
    return DiffPoly(t, p, k)


# ---------------------------------------------------------------------------
# serialisation

def diffpoly_to_json(P: DiffPoly) -> list:
    out = []
    for m in sorted(P.terms, key=_mono_key, reverse=True):
        out.append({
            "coeff": str(P.terms[m]),
            "factors": [{"j": j, "alpha": list(alpha), "power": pw} for (j, alpha), pw in m],
        })
    return out


def diffpoly_from_json(obj: Iterable, p: int, k: int | None = None) -> DiffPoly:
    t = {}
    for term in obj:
        mono = tuple(((f["j"], tuple(f["alpha"])), f["power"]) for f in term["factors"])
        t[mono] = Fraction(term["coeff"])
    return DiffPoly(t, p, k)


def format_jet_var(j: int, alpha: Sequence[int]) -> str:
    return f"u{j}[{','.join(map(str, alpha))}]"


def format_diffpoly(P: DiffPoly) -> str:
    if not P.terms:
        return "0"
    parts = []
    for m in sorted(P.terms, key=_mono_key, reverse=True):
        c = Fraction(P.terms[m])
        mono = "*".join(format_jet_var(j, a) + (f"^{pw}" if pw > 1 else "") for (j, a), pw in m)
        neg = c < 0
        a = -c if neg else c
        body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
        if parts:
            parts.append((" - " if neg else " + ") + body)
        else:
            parts.append(("-" if neg else "") + body)
    return "".join(parts)
