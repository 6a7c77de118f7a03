"""Deciding linear dependence of polynomial families with Wronskians.

A family of ``m+1`` polynomials is independent exactly when some full set
of size ``m`` gives a nonzero Wronskian.  Rank over Q of the coefficient
matrix is kept as an independent ground truth.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .polyring import (
    ExponentOrder,
    Polynomial,
    TruncatedSeries,
    ZERO,
    leading_coefficient,
    series_order,
)
from .vandermonde import eval_V
from .wordcomb import DEFAULT_ENUMERATION_CAP, WordSet, enumerate_full_sets
from .wronskian import eval_wronskian


class DependentFamily(ValueError):
    """The operation needs a linearly independent family."""


class InapplicableError(ValueError):
    """A precondition of the least-order formula fails."""


def rank_oracle(fs: Sequence[Polynomial]) -> int:
    monos = sorted({e for f in fs for e in f.terms})
    if not monos:
        return 0
    return linalg.rank([[f.terms.get(e, 0) for e in monos] for f in fs])


@dataclass
class ReductionResult:
    ts: list
    A: list[list[Fraction]]
    steps: list[dict] = field(default_factory=list)

    def orders(self, order: ExponentOrder = ExponentOrder.LEX) -> list:
        return [series_order(t, order) for t in self.ts]


def combine(fs: Sequence, A: Sequence[Sequence]) -> list:
    """``(f_0, ..., f_m) . A``: column ``j`` gives ``sum_i f_i A[i][j]``."""
    n = len(fs)
    out = []
    for j in range(n):
        acc = fs[0] * 0
        for i in range(n):
            if A[i][j]:
                acc = acc + fs[i] * A[i][j]
        out.append(acc)
    return out


def distinct_order_reduction(fs: Sequence[Polynomial],
                             order: ExponentOrder = ExponentOrder.LEX) -> ReductionResult:
    """Transvections until the series orders are pairwise distinct.

    Each step takes the first pair of slots with equal order (slots sorted
    by order, then index) and cancels the leading term of the later one.
    The order of that slot strictly increases and stays inside the finite
    set of exponents of the inputs, so the loop terminates.  The result is
    sorted by increasing order; ``A`` includes that permutation.
    """
    fs = list(fs)
    n = len(fs)
    if rank_oracle(fs) < n:
        raise DependentFamily("the family is linearly dependent")
    ts = list(fs)
    A = linalg.identity(n)
    steps: list[dict] = []
    while True:
        keys = [order.key(series_order(t, order)) for t in ts]
        idx = sorted(range(n), key=lambda s: (keys[s], s))
        tie = next(((a, b) for a, b in zip(idx, idx[1:]) if keys[a] == keys[b]), None)
        if tie is None:
            break
        a, b = tie
        lam = Fraction(leading_coefficient(ts[b], order)) / leading_coefficient(ts[a], order)
        ts[b] = ts[b] - ts[a] * lam
        for row in A:
            row[b] -= lam * row[a]
        steps.append({"op": "transvection", "target": b, "source": a, "lambda": str(lam)})
    perm = sorted(range(n), key=lambda s: order.key(series_order(ts[s], order)))
    if perm != list(range(n)):
        steps.append({"op": "permutation", "order": perm})
    ts = [ts[s] for s in perm]
    A = [[row[s] for s in perm] for row in A]
    return ReductionResult(ts, A, steps)


def _numeric_nonzero(U: WordSet, fs: Sequence[Polynomial], point, cache: dict) -> bool:
    rows = [[f.evaluate(point) for f in fs]]
    for u in U.words:
        if u not in cache:
            cache[u] = [f.diff(u).evaluate(point) for f in fs]
        rows.append(cache[u])
    return bool(linalg.det_gauss(rows))


def independence_witness(fs: Sequence[Polynomial], p: int | None = None,
                         cap: int = DEFAULT_ENUMERATION_CAP, seed: int = 0):
    """First full set (enumeration order) whose Wronskian of ``fs`` is nonzero.

    A nonzero value at a random rational point already proves the Wronskian
    nonzero; otherwise the determinant is expanded symbolically.  Returns
    ``None`` when every Wronskian vanishes identically.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("empty family")
    p = p if p is not None else fs[0].nvars
    m = len(fs) - 1
    rng = random.Random(seed)
    point = [Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(fs[0].nvars)]
    num_cache: dict = {}
    sym_cache: dict = {}
    for U in enumerate_full_sets(p, m, cap):
        if _numeric_nonzero(U, fs, point, num_cache):
            return U
        if eval_wronskian(U, fs, sym_cache):
            return U
    return None


def decide(fs: Sequence[Polynomial], p: int | None = None,
           cap: int = DEFAULT_ENUMERATION_CAP, seed: int = 0) -> dict:
    witness = independence_witness(fs, p, cap, seed)
    return {"independent": witness is not None, "witness": witness, "rank": rank_oracle(fs)}


def least_order_check(U: WordSet, alphas: Sequence[Sequence[int]],
                      tails: Sequence | None = None, trunc: int | None = None,
                      order: ExponentOrder = ExponentOrder.LEX) -> bool:
    """``order(W_U(f_0, ..., f_m)) = sum(alpha_i) - beta(U)`` for
    ``f_i = z^alpha_i + tail_i`` with each tail of strictly larger order.

    With ``trunc`` the inputs are truncated series and the predicted order
    must fit inside the truncation of the result.
    """
    alphas = [tuple(a) for a in alphas]
    p = U.p
    if len(alphas) != U.m + 1:
        raise ValueError("need m+1 exponent vectors")
    if not eval_V(U, [[Fraction(x) for x in a] for a in alphas]):
        raise InapplicableError("V_U vanishes at these exponents")
    fs = []
    for i, a in enumerate(alphas):
        f = Polynomial.monomial(a)
        if tails is not None and tails[i] is not None:
            tail = tails[i]
            for e in tail.terms:
                if order.key(e) <= order.key(a):
                    raise ValueError(f"tail term {e} is not above {a}")
            f = f + tail
        fs.append(f)
    predicted = tuple(sum(a[j] for a in alphas) - U.beta[j] for j in range(p))
    if any(x < 0 for x in predicted):
        raise InapplicableError("negative predicted order")
    if trunc is not None:
        out_trunc = trunc - U.k
        if sum(predicted) > out_trunc:
            raise ValueError(f"predicted order {predicted} beyond truncation {out_trunc}")
        fs = [TruncatedSeries(f, trunc) for f in fs]
    W = eval_wronskian(U, fs)
    got = series_order(W, order)
    return got != ZERO and tuple(got) == predicted
