"""Generalized Wronskians: assembly, evaluation, geometricity and group actions.

A pure Wronskian ``W_U`` has the functions as its top row and their ``d_u``
derivatives below, one row per word of ``U`` in canonical order.  Inputs can
be Polynomials, TruncatedSeries or generic jets (DiffPoly); the determinant
is taken over whichever ring they live in.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .jetdiff import DiffPoly, jet_var, make_generic_jet
from .polyring import (
    Polynomial,
    PrecisionError,
    TruncatedSeries,
    _norm,
    chain_rule_table,
    format_poly,
)
from .wordcomb import (
    DEFAULT_ENUMERATION_CAP,
    WordSet,
    canonical_full_set,
    charseq_key,
    enumerate_full_sets,
    is_full,
    words_up_to,
)


class BudgetExhausted(RuntimeError):
    """An exact computation grew past its configured term budget."""


# ---------------------------------------------------------------------------
# combinations

class WronskianCombination:
    """A rational linear combination of pure Wronskians of a common size ``m``."""

    def __init__(self, terms: Iterable[tuple], p: int | None = None):
        merged: dict[WordSet, Fraction] = {}
        order: list[WordSet] = []
        sizes = set()
        terms = list(terms)
        if not terms:
            raise ValueError("a Wronskian combination needs at least one term")
        for coeff, ws in terms:
            if not isinstance(ws, WordSet):
                ws = WordSet.from_json(ws, p)
            if p is None:
                p = ws.p
            if ws.p != p:
                raise ValueError("mixed letter counts in combination")
            sizes.add(ws.m)
            if ws not in merged:
                order.append(ws)
                merged[ws] = Fraction(0)
            merged[ws] += Fraction(coeff)
        if len(sizes) != 1:
            raise ValueError(f"sets of different sizes {sorted(sizes)} in combination")
        kept = [(merged[ws], ws) for ws in sorted(order, key=WordSet.sort_key) if merged[ws]]
        if not kept:
            raise ValueError("the zero combination is not a valid Wronskian")
        self.p = p
        self.m = sizes.pop()
        self.terms: list[tuple[Fraction, WordSet]] = kept

    @classmethod
    def pure(cls, ws: WordSet) -> "WronskianCombination":
        return cls([(1, ws)])

    @property
    def order(self) -> int:
        return max(ws.k for _, ws in self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self):
        inner = " + ".join(f"{c}*W{ws}" for c, ws in self.terms)
        return f"WronskianCombination({inner})"

    def to_json(self) -> dict:
        return {"m": self.m,
                "terms": [{"coeff": str(c), "set": [list(u) for u in ws.words]}
                          for c, ws in self.terms]}

    @classmethod
    def from_json(cls, obj: Mapping, p: int | None = None) -> "WronskianCombination":
        terms = []
        for t in obj["terms"]:
            words = [tuple(u) for u in t["set"]]
            q = p if p is not None else (len(words[0]) if words else None)
            if q is None:
                raise ValueError("p is required for an empty word set")
            terms.append((Fraction(t["coeff"]), WordSet(q, tuple(words))))
        comb = cls(terms, p)
        if comb.m != obj.get("m", comb.m):
            raise ValueError("declared m does not match the sets")
        return comb


def _as_combination(W) -> WronskianCombination:
    if isinstance(W, WronskianCombination):
        return W
    if isinstance(W, WordSet):
        return WronskianCombination.pure(W)
    raise TypeError(f"expected a WordSet or WronskianCombination, got {type(W).__name__}")


# ---------------------------------------------------------------------------
# evaluation

def _check_inputs(U: WordSet, fs: Sequence):
    if len(fs) != U.m + 1:
        raise ValueError(f"{len(fs)} functions given for a set of size {U.m} "
                         f"(need {U.m + 1})")
    kinds = {type(f) for f in fs}
    if len(kinds) != 1:
        raise TypeError("functions must all be of the same kind")
    kind = kinds.pop()
    if kind is TruncatedSeries:
        low = min(f.trunc for f in fs)
        if low < U.k:
            raise PrecisionError(f"series truncated at {low} < order {U.k} of the set")
    elif kind is Polynomial:
        if len({f.nvars for f in fs}) != 1 or fs[0].nvars < U.p:
            raise ValueError("polynomials must share variables, at least p of them")
    elif kind is DiffPoly:
        if any(f.p != U.p for f in fs):
            raise ValueError("generic jets have the wrong letter count")


def wronskian_matrix(U: WordSet, fs: Sequence, cache: dict | None = None) -> list[list]:
    """Rows: ``fs`` then ``d_u fs`` for ``u`` in canonical order."""
    _check_inputs(U, fs)
    rows = [list(fs)]
    for u in U.words:
        if cache is not None:
            row = cache.get(u)
            if row is None:
                row = cache[u] = [f.diff(u) for f in fs]
        else:
            row = [f.diff(u) for f in fs]
        rows.append(row)
    return rows


def _zero_of(fs: Sequence):
    return fs[0] * 0


def eval_wronskian(W, fs: Sequence, cache: dict | None = None, method: str = "auto"):
    """Exact value of a pure Wronskian or a combination on ``fs``.

    ``cache`` (word -> derivative row) may be shared across calls with the
    same ``fs``; a set containing an identically zero row short-circuits.
    """
    comb = _as_combination(W)
    if not fs:
        raise ValueError("no functions given")
    total = None
    for c, U in comb.terms:
        if cache is not None:
            _check_inputs(U, fs)
            zero_row = False
            for u in U.words:
                row = cache.get(u)
                if row is None:
                    row = cache[u] = [f.diff(u) for f in fs]
                if not any(row):
                    zero_row = True
                    break
            if zero_row:
                continue
        M = wronskian_matrix(U, fs, cache)
        d = linalg.det(M, method=method)
        term = d * c
        total = term if total is None else total + term
    return _zero_of(fs) if total is None else total


# ---------------------------------------------------------------------------
# geometricity

@dataclass
class GeometricityResult:
    geometric: bool
    mode: str
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.geometric


RANDOM_NUMERATORS = range(-9, 10)
RANDOM_DENOMINATORS = (1, 2, 3)


def _rand_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(RANDOM_NUMERATORS), rng.choice(RANDOM_DENOMINATORS))


def _random_poly(p: int, degree: int, rng: random.Random) -> Polynomial:
    terms = {}
    for e in itertools.product(range(degree + 1), repeat=p):
        if sum(e) <= degree:
            terms[e] = _rand_rational(rng)
    return Polynomial(terms, p)


def _eval_at(W: WronskianCombination, fs: Sequence[Polynomial], x: Sequence) -> Fraction:
    """``W(fs)(x)`` via rational derivative values, no symbolic determinant."""
    total = Fraction(0)
    cache: dict = {}
    for c, U in W.terms:
        rows = [[f.evaluate(x) for f in fs]]
        for u in U.words:
            if u not in cache:
                cache[u] = [f.diff(u).evaluate(x) for f in fs]
            rows.append(cache[u])
        total += c * linalg.det_gauss(rows)
    return total


def _randomized_geometric(W: WronskianCombination, trials: int, seed: int):
    rng = random.Random(seed)
    p, m = W.p, W.m
    deg = W.order + 1
    for t in range(trials):
        g = _random_poly(p, deg, rng)
        fs = [_random_poly(p, deg, rng) for _ in range(m + 1)]
        x = [_rand_rational(rng) for _ in range(p)]
        lhs = _eval_at(W, [g * f for f in fs], x)
        rhs = Fraction(g.evaluate(x)) ** (m + 1) * _eval_at(W, fs, x)
        if lhs != rhs:
            return {
                "trial": t,
                "g": format_poly(g),
                "fs": [format_poly(f) for f in fs],
                "point": [str(v) for v in x],
                "lhs": str(lhs),
                "rhs": str(rhs),
            }
    return None


def is_geometric(W, mode: str = "exact", budget: int | None = None, trials: int = 16,
                 seed: int = 0) -> GeometricityResult:
    """Test ``W(g f_0, ..., g f_m) = g^(m+1) W(f_0, ..., f_m)``.

    Exact mode evaluates both sides on generic jets (independent jet
    variables for ``g`` and every ``f_j``).  Both sides are polynomials in
    the jets at the base point, and every jet is realised by some polynomial
    germ, so equality of the two differential polynomials is the identity
    for all germs.  ``budget`` caps the number of monomials of the expanded
    left side.

    Randomized mode samples polynomials of degree ``order + 1`` and a point
    with coordinates from a fixed finite set of rationals; a mismatch is a
    proof of non-geometricity, agreement on every trial is only evidence.
    """
    comb = _as_combination(W)
    p, m = comb.p, comb.m
    if mode == "randomized":
        cex = _randomized_geometric(comb, trials, seed)
        if cex is None:
            return GeometricityResult(True, mode, {"trials": trials, "seed": seed})
        return GeometricityResult(False, mode, {"seed": seed, "counterexample": cex})
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    fs = make_generic_jet(p, None, m + 1)
    g = jet_var(m + 1, (0,) * p, p)
    lhs = eval_wronskian(comb, [g * f for f in fs])
    if budget is not None and len(lhs.terms) > budget:
        raise BudgetExhausted(f"{len(lhs.terms)} monomials exceed budget {budget}")
    rhs = g ** (m + 1) * eval_wronskian(comb, fs)
    if lhs == rhs:
        return GeometricityResult(True, mode, {"monomials": len(lhs.terms)})
    cert = {"residual_monomials": len((lhs - rhs).terms)}
    for s in range(seed, seed + 8):
        cex = _randomized_geometric(comb, trials, s)
        if cex is not None:
            cert["counterexample"] = cex
            cert["seed"] = s
            break
    return GeometricityResult(False, mode, cert)


# ---------------------------------------------------------------------------
# actions of biholomorphisms

def _jacobian_at_zero(phi: Sequence) -> list[list]:
    p = len(phi)
    rows = []
    for i in range(p):
        poly = phi[i].poly if isinstance(phi[i], TruncatedSeries) else phi[i]
        rows.append([poly.diff(tuple(int(a == j) for a in range(p))).constant_term()
                     for j in range(p)])
    return rows


def _check_phi(phi: Sequence, p: int):
    if len(phi) != p:
        raise ValueError(f"phi needs {p} components")
    for s in phi:
        poly = s.poly if isinstance(s, TruncatedSeries) else s
        if poly.constant_term():
            raise ValueError("phi must fix the origin")
    if not linalg.det_gauss(_jacobian_at_zero(phi)):
        raise ValueError("phi has a non-invertible linear part")


def act_biholomorphism(W, phi: Sequence, fs: Sequence[Polynomial], x: Sequence | None = None):
    """``(phi . W)_x(fs) = W_0(f_0(x + phi), ..., f_m(x + phi))``."""
    comb = _as_combination(W)
    p = comb.p
    _check_phi(phi, p)
    k = comb.order
    x = tuple(x) if x is not None else (0,) * p
    series = []
    for s in phi:
        if isinstance(s, TruncatedSeries):
            if s.trunc < k:
                raise PrecisionError(f"phi truncated at {s.trunc} < order {k}")
            series.append(TruncatedSeries(s.poly, k))
        else:
            series.append(TruncatedSeries(s, k))
    from .polyring import compose_series
    composed = []
    for f in fs:
        if f.nvars != p:
            raise ValueError("functions must be polynomials in the p germ variables")
        composed.append(compose_series(f.shift(x), series, k))
    return Fraction(eval_wronskian(comb, composed).constant_term())


def act_on_generic_jets(W, phi: Sequence[Polynomial]) -> DiffPoly:
    """``phi . W`` on generic jets: rows ``d_u(f o phi)(0)`` via the chain-rule table."""
    comb = _as_combination(W)
    p, m = comb.p, comb.m
    _check_phi(phi, p)
    origin = (0,) * p
    fs_rows: dict = {}

    def row(u):
        if u not in fs_rows:
            table = chain_rule_table(list(phi), u)
            entries = []
            for j in range(m + 1):
                acc = DiffPoly.constant(0, p)
                for beta, c in table.items():
                    c0 = c.evaluate(origin)
                    if c0:
                        acc = acc + jet_var(j, beta, p) * c0
                entries.append(acc)
            fs_rows[u] = entries
        return fs_rows[u]

    top = make_generic_jet(p, None, m + 1)
    total = DiffPoly.constant(0, p)
    for c, U in comb.terms:
        M = [top] + [row(u) for u in U.words]
        total = total + linalg.det(M) * c
    return total


def generic_wronskian(W, p: int | None = None) -> DiffPoly:
    comb = _as_combination(W)
    return eval_wronskian(comb, make_generic_jet(comb.p, None, comb.m + 1))


def linear_map(A: Sequence[Sequence], nvars: int | None = None) -> list[Polynomial]:
    """Components of ``z -> A z`` as polynomials."""
    p = len(A)
    nv = nvars or p
    zs = [Polynomial.variable(i, nv) for i in range(p)]
    return [sum((zs[j] * Fraction(A[i][j]) for j in range(p)), Polynomial.zero(nv))
            for i in range(p)]


def compose_linear(f: Polynomial, A: Sequence[Sequence]) -> Polynomial:
    """``f(A z)``."""
    comps = linear_map(A, f.nvars)
    return f.substitute({i: comps[i] for i in range(len(A))})


def det_power_law_check(p: int, n: int, A: Sequence[Sequence], fs: Sequence[Polynomial],
                        method: str = "auto") -> bool:
    """``W_{U_n}(f o A) = det(A)^(w(U_n)/p) * W_{U_n}(f) o A``, exactly.

    ``symbolic`` expands both determinants.  ``grid`` compares them at every
    ``x`` in ``N^p`` with ``|x| <= D``, where ``D`` bounds the total degree of
    either side; that point set is unisolvent for polynomials of total degree
    at most ``D``, so agreement there is also a proof.  ``auto`` picks the grid when the
    matrix is larger than 6x6.
    """
    d = linalg.det_gauss(A)
    if not d:
        raise ValueError("A is singular")
    U = canonical_full_set(p, n)
    if len(fs) != U.m + 1:
        raise ValueError(f"need {U.m + 1} functions")
    if method == "auto":
        method = "grid" if U.m + 1 > 6 else "symbolic"
    scale = d ** (U.w // p)
    if method == "symbolic":
        lhs = eval_wronskian(U, [compose_linear(f, A) for f in fs])
        rhs = compose_linear(eval_wronskian(U, list(fs)), A) * scale
        return lhs == rhs
    if method != "grid":
        raise ValueError(f"unknown method {method!r}")
    bound = max(0, sum(max(f.total_degree(), 0) for f in fs) - U.w)
    left = wronskian_matrix(U, [compose_linear(f, A) for f in fs])
    right = [[compose_linear(_as_poly(e, p), A) for e in row] for row in wronskian_matrix(U, fs)]
    for x in itertools.product(range(bound + 1), repeat=p):
        if sum(x) > bound:
            continue
        lv = linalg.det_gauss([[_as_poly(e, p).evaluate(x) for e in row] for row in left])
        rv = linalg.det_gauss([[e.evaluate(x) for e in row] for row in right])
        if lv != rv * scale:
            return False
    return True


def _as_poly(e, p: int) -> Polynomial:
    return e if isinstance(e, Polynomial) else Polynomial.constant(e, p)


# ---------------------------------------------------------------------------
# the monomial basis and U_n

def monomial_basis(p: int, n: int) -> list[Polynomial]:
    """``1`` followed by ``z^u`` for ``u`` in ``U_n``, canonical order."""
    return [Polynomial.constant(1, p)] + [Polynomial.monomial(u) for u in words_up_to(p, n)]


def wronskian_on_basis(p: int, n: int, fs: Sequence[Polynomial] | None = None) -> Polynomial:
    fs = list(fs) if fs is not None else monomial_basis(p, n)
    U = canonical_full_set(p, n)
    return eval_wronskian(U, fs)


def other_full_sets_on_basis(p: int, n: int, fs: Sequence[Polynomial] | None = None,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> dict:
    """Evaluate ``W_U(fs)`` for every full set ``U != U_n`` of size ``|U_n|``.

    Returns the number of sets checked and those giving a nonzero value.
    """
    fs = list(fs) if fs is not None else monomial_basis(p, n)
    Un = canonical_full_set(p, n)
    cache: dict = {}
    checked = 0
    nonzero = []
    for U in enumerate_full_sets(p, Un.m, cap):
        if U == Un:
            continue
        checked += 1
        if eval_wronskian(U, fs, cache):
            nonzero.append(U)
    return {"checked": checked, "nonzero": nonzero}


# ---------------------------------------------------------------------------
# strata

def stratum(W) -> tuple:
    """Largest characteristic sequence among the pure terms."""
    comb = _as_combination(W)
    return max((ws.charseq for _, ws in comb.terms), key=charseq_key)


def expand_in_pure_basis(P: DiffPoly, p: int, m: int, k: int) -> dict[WordSet, Fraction]:
    """Write a differential polynomial as a combination of pure Wronskians.

    Candidates are all sets of ``m`` words of length at most ``k``; the
    coefficients come from an exact linear solve on monomial coefficients.
    """
    words = words_up_to(p, k)
    fs = make_generic_jet(p, None, m + 1)
    cands = []
    columns = []
    for combo in itertools.combinations(words, m):
        U = WordSet(p, combo)
        val = eval_wronskian(U, fs)
        if val:
            cands.append(U)
            columns.append(val)
    monos = sorted({mono for v in columns for mono in v.terms} | set(P.terms))
    A = [[v.terms.get(mono, 0) for v in columns] for mono in monos]
    b = [P.terms.get(mono, 0) for mono in monos]
    if not cands:
        if P:
            raise ValueError("no candidate sets but a nonzero target")
        return {}
    R, piv = linalg.rref([row + [bv] for row, bv in zip(A, b)])
    if len(columns) in piv:
        raise ValueError("target is not in the span of pure Wronskians")
    sol = {}
    for i, c in enumerate(piv):
        if R[i][len(columns)]:
            sol[cands[c]] = R[i][len(columns)]
    return sol


def stratification_check(U: WordSet, A: Sequence[Sequence]) -> dict:
    """Expand ``A . W_U`` (linear ``A``) in pure Wronskians; every term must
    lie in a stratum no larger than that of ``U``."""
    acted = act_on_generic_jets(U, linear_map(A))
    expansion = expand_in_pure_basis(acted, U.p, U.m, U.k)
    top = max((V.charseq for V in expansion), key=charseq_key, default=())
    ok = all(charseq_key(V.charseq) <= charseq_key(U.charseq) for V in expansion)
    return {"ok": ok, "terms": len(expansion), "stratum": top}
