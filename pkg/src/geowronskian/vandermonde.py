"""Geometric Vandermonde determinants and their zero sets.

Columns are vectors ``C_l = (x_{1,l}, ..., x_{p,l})``; the row attached to a
word ``u`` has entries ``prod_j x_{j,l}^{alpha_j(u)}``.  ``V_U`` puts a row of
ones on top of the rows of ``U``; ``V~_U`` omits it.  Entries may be
rationals or Polynomials (symbolic columns).
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from . import linalg
from .polyring import Polynomial
from .wordcomb import (
    DEFAULT_ENUMERATION_CAP,
    WordSet,
    enumerate_full_sets,
)


class CertificationFailure(AssertionError):
    """A forward sample had no nonvanishing Vandermonde: the zero-set characterization is refuted."""

    def __init__(self, msg: str, report: dict):
        super().__init__(msg)
        self.report = report


def symbolic_columns(p: int, ncols: int, extra: int = 0) -> list[list[Polynomial]]:
    """Columns of independent parameters; ``x_{j,l}`` is variable ``l*p + j``.

    ``extra`` reserves further variables after the column parameters.
    """
    nv = p * ncols + extra
    return [[Polynomial.variable(l * p + j, nv) for j in range(p)] for l in range(ncols)]


def row_X(u: Sequence[int], cols: Sequence[Sequence]) -> list:
    """Entries ``prod_j x_{j,l}^{alpha_j(u)}``; the empty word gives ones."""
    out = []
    for col in cols:
        if len(col) != len(u):
            raise ValueError("column length does not match the word")
        v = 1
        for x, a in zip(col, u):
            if a:
                v = v * x ** a
        out.append(v)
    return out


def vandermonde_matrix(U: WordSet, cols: Sequence[Sequence], with_ones: bool = True) -> list[list]:
    need = U.m + 1 if with_ones else U.m
    if len(cols) != need:
        raise ValueError(f"{len(cols)} columns given, {need} needed")
    rows = [row_X((0,) * U.p, cols)] if with_ones else []
    rows += [row_X(u, cols) for u in U.words]
    return rows


def eval_V(U: WordSet, cols: Sequence[Sequence]):
    return linalg.det(vandermonde_matrix(U, cols, True))


def eval_V_tilde(U: WordSet, cols: Sequence[Sequence]):
    return linalg.det(vandermonde_matrix(U, cols, False))


def translation_invariance_check(U: WordSet) -> bool:
    """``V_U(C_0 + C, ..., C_m + C) = V_U(C_0, ..., C_m)`` with symbolic ``C``."""
    p, n = U.p, U.m + 1
    cols = symbolic_columns(p, n, extra=p)
    nv = p * n + p
    shift = [Polynomial.variable(p * n + j, nv) for j in range(p)]
    moved = [[x + s for x, s in zip(col, shift)] for col in cols]
    return eval_V(U, cols) == eval_V(U, moved)


def _last_column_cofactor(M: Sequence[Sequence]):
    """Cofactor expansion along the last column (independent of the sign rule)."""
    n = len(M)
    total = None
    for r in range(n):
        entry = M[r][n - 1]
        if not entry:
            continue
        minor = [row[:n - 1] for i, row in enumerate(M) if i != r]
        term = entry * linalg.det(minor) * (-1) ** (r + n - 1)
        total = term if total is None else total + term
    return total if total is not None else 0


def rec_relation_check(U: WordSet) -> dict:
    """``V_U(C_0, ..., C_{m-1}, 0) = (-1)^m V~_U(C_0, ..., C_{m-1})`` symbolically.

    The sign is first read off an explicit expansion along the zero column,
    then the closed form is compared.
    """
    p, m = U.p, U.m
    cols = symbolic_columns(p, m)
    zero_col = [Polynomial.zero(p * m)] * p
    M = vandermonde_matrix(U, cols + [zero_col])
    V = linalg.det(M)
    Vt = eval_V_tilde(U, cols)
    expanded = _last_column_cofactor(M)
    if Vt:
        sign = 1 if expanded == Vt else (-1 if expanded == -Vt else None)
    else:
        sign = (-1) ** m if not expanded else None
    return {"ok": V == expanded and sign == (-1) ** m and V == Vt * (-1) ** m,
            "sign": sign}


def _wronskian_on_monomials_at_one(U: WordSet, alphas: Sequence[Sequence[int]]) -> Fraction:
    fs = [Polynomial.monomial(a) for a in alphas]
    one = (1,) * U.p
    rows = [[f.evaluate(one) for f in fs]]
    for u in U.words:
        rows.append([f.diff(u).evaluate(one) for f in fs])
    return linalg.det_gauss(rows)


def key_identity_check(U: WordSet, alphas: Sequence[Sequence[int]], shift: str = "auto") -> bool:
    """``W_U(z^alpha_0, ..., z^alpha_m)(1, ..., 1) = V_U(alpha_0, ..., alpha_m)``.

    With ``shift="auto"``, when some derivative kills a monomial the left side
    is also recomputed on ``z^(alpha_i + s)``: by geometricity that equals
    ``z^((m+1)s) W_U(z^alpha)`` whose value at ``1`` is unchanged, and both
    must agree.  ``"always"`` forces the shifted path, ``"never"`` skips it.
    """
    alphas = [tuple(a) for a in alphas]
    if len(alphas) != U.m + 1 or any(len(a) != U.p for a in alphas):
        raise ValueError("need m+1 exponent vectors of length p")
    right = eval_V(U, [[Fraction(x) for x in a] for a in alphas])
    left = _wronskian_on_monomials_at_one(U, alphas)
    if left != right:
        return False
    small = any(x < U.k for a in alphas for x in a)
    if shift == "always" or (shift == "auto" and small):
        s = (U.k,) * U.p
        shifted = [tuple(x + y for x, y in zip(a, s)) for a in alphas]
        if _wronskian_on_monomials_at_one(U, shifted) != right:
            return False
    elif shift not in ("auto", "never"):
        raise ValueError(f"unknown shift mode {shift!r}")
    return True


# ---------------------------------------------------------------------------
# zero-set certification

def _coincidence_patterns(ncols: int, variant: str):
    pats = [("eq", i, j) for i, j in itertools.combinations(range(ncols), 2)]
    if variant == "B":
        pats = [("zero", i, None) for i in range(ncols)] + pats
    return pats


def _pattern_str(pat) -> str:
    kind, i, j = pat
    return f"C{i}=0" if kind == "zero" else f"C{i}=C{j}"


def _apply_pattern(cols, pat, p: int):
    kind, i, j = pat
    cols = [list(c) for c in cols]
    if kind == "zero":
        nv = cols[0][0].nvars
        cols[i] = [Polynomial.zero(nv)] * p
    else:
        cols[j] = list(cols[i])
    return cols


def zero_set_certify(p: int, m: int, direction: str = "both", samples: int = 100,
                     variant: str = "A", seed: int = 0, grid: int | None = None,
                     cap: int = DEFAULT_ENUMERATION_CAP, strict: bool = True) -> dict:
    """Certify that the common zeros of ``V_U`` (variant A) or ``V~_U``
    (variant B), ``U`` over all full sets of size ``m``, are exactly the
    column coincidences (and zero columns for B).

    converse: under each coincidence pattern every determinant is the zero
    polynomial.  forward: ``samples`` random column tuples avoiding every
    pattern each have a full set with a nonzero determinant (the first one in
    enumeration order is reported).
    """
    if variant not in ("A", "B"):
        raise ValueError("variant must be 'A' or 'B'")
    if direction not in ("forward", "converse", "both"):
        raise ValueError("direction must be forward, converse or both")
    sets = enumerate_full_sets(p, m, cap)
    ncols = m + 1 if variant == "A" else m
    det_fn = eval_V if variant == "A" else eval_V_tilde
    report: dict = {"p": p, "m": m, "variant": variant, "seed": seed,
                    "full_sets": len(sets), "converse": [], "forward": []}
    ok = True
    if direction in ("converse", "both"):
        base = symbolic_columns(p, ncols)
        for pat in _coincidence_patterns(ncols, variant):
            cols = _apply_pattern(base, pat, p)
            nonvanishing = [ws for ws in sets if det_fn(ws, cols)]
            report["converse"].append({
                "pattern": _pattern_str(pat),
                "all_vanish": not nonvanishing,
                "nonvanishing": [[list(u) for u in ws.words] for ws in nonvanishing],
            })
            ok &= not nonvanishing
    if direction in ("forward", "both"):
        size = grid if grid is not None else 2 * (m + 1)
        if size < 2 * (m + 1):
            raise ValueError(f"grid size must be at least {2 * (m + 1)}")
        values = [Fraction(v) for v in range(-(size // 2), size - size // 2)]
        rng = random.Random(seed)
        failures = 0
        for _ in range(samples):
            while True:
                cols = [tuple(rng.choice(values) for _ in range(p)) for _ in range(ncols)]
                distinct = len(set(cols)) == ncols
                nonzero = variant == "A" or all(any(c) for c in cols)
                if distinct and nonzero:
                    break
            witness = next((ws for ws in sets if det_fn(ws, cols)), None)
            entry = {"columns": [[str(x) for x in c] for c in cols],
                     "witness": None if witness is None else [list(u) for u in witness.words]}
            report["forward"].append(entry)
            if witness is None:
                failures += 1
        report["forward_failures"] = failures
        ok &= failures == 0
    report["ok"] = bool(ok)
    report["totals"] = {
        "patterns": len(report["converse"]),
        "patterns_vanishing": sum(r["all_vanish"] for r in report["converse"]),
        "samples": len(report["forward"]),
        "witnessed": sum(r["witness"] is not None for r in report["forward"]),
    }
    if strict and not ok:
        raise CertificationFailure(f"certification failed for p={p}, m={m}, variant {variant}",
                                   report)
    return report
