"""Wronskians of Fermat sections ``X_1^delta, ..., X_N^delta`` on generic jets.

In the affine chart ``X_0 = 1`` a germ of a p-dimensional map is given by
``N`` functions; jet index ``j`` (1..N) stands for ``X_j`` and index 0 for
the extra column ``c_0`` used by the restriction identity.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .jetdiff import DiffPoly, jet_var, substitute_jets, torus_multidegree
from .polyring import Polynomial, random_polynomial
from .wordcomb import WordSet, enumerate_full_sets, words_up_to
from .wronskian import eval_wronskian


@dataclass(frozen=True)
class FermatConfig:
    N: int
    p: int
    delta: int

    def __post_init__(self):
        if not 1 <= self.p <= self.N - 1:
            raise ValueError(f"need 1 <= p <= N-1 (got N={self.N}, p={self.p})")
        if self.delta < 1:
            raise ValueError("delta must be positive")

    @property
    def threshold(self) -> int:
        return (self.N + 1) * (self.N - self.p)

    @property
    def meets_threshold(self) -> bool:
        return self.delta > self.threshold


def _units(p: int) -> list[tuple]:
    return [tuple(int(i == j) for j in range(p)) for i in range(p)]


def partition_fullsets(N: int, p: int) -> tuple[list[WordSet], list[WordSet]]:
    """Split full sets of size ``N-1`` by whether they contain every letter."""
    if not 1 <= p <= N - 1:
        raise ValueError("need 1 <= p <= N-1")
    units = _units(p)
    plus, minus = [], []
    for U in enumerate_full_sets(p, N - 1):
        (plus if all(e in U for e in units) else minus).append(U)
    return plus, minus


def missing_letter(U: WordSet):
    """A letter (1-based) used by no word of ``U``, or ``None``."""
    for i in range(U.p):
        if all(u[i] == 0 for u in U.words):
            return i + 1
    return None


def _sections(cfg: FermatConfig, k: int) -> list[DiffPoly]:
    zero = (0,) * cfg.p
    return [jet_var(j, zero, cfg.p, k) ** cfg.delta for j in range(1, cfg.N + 1)]


def fermat_wronskian(cfg: FermatConfig, U: WordSet) -> DiffPoly:
    if U.p != cfg.p or U.m != cfg.N - 1:
        raise ValueError("U must be a full set of size N-1 over p letters")
    return eval_wronskian(U, _sections(cfg, U.k))


def factor_columns(cfg: FermatConfig, U: WordSet, W: DiffPoly | None = None):
    """Divide out ``prod_j u_{j,0}^e`` with ``e = max(0, delta - order(U))``.

    Every entry of column ``j`` is a derivative of order at most ``k`` of
    ``u_{j,0}^delta`` and so keeps at least ``delta - k`` undifferentiated
    factors.  Returns the exponents and the exact cofactor.
    """
    if W is None:
        W = fermat_wronskian(cfg, U)
    e = max(0, cfg.delta - U.k)
    exps = [e] * cfg.N
    zero = (0,) * cfg.p
    divisor = DiffPoly.constant(1, cfg.p, U.k)
    for j, ej in zip(range(1, cfg.N + 1), exps):
        if ej:
            divisor = divisor * jet_var(j, zero, cfg.p, U.k, power=ej)
    cofactor = W.exact_div(divisor)
    if cofactor * divisor != W:
        raise ArithmeticError("column factorization certificate failed")
    return exps, cofactor


def restriction_identity_check(cfg: FermatConfig, U: WordSet, powers: bool = True) -> bool:
    """``W_U(c_1, ..., c_{N-1}, -c_0 - sum c_i) = W_U(c_1, ..., c_{N-1}, -c_0)``.

    Columns are generic jets (raised to ``delta`` when ``powers``).
    """
    zero = (0,) * cfg.p
    cols = [jet_var(j, zero, cfg.p, U.k) for j in range(cfg.N)]
    if powers:
        cols = [c ** cfg.delta for c in cols]
    c0, rest = cols[0], cols[1:]
    relation = -c0
    for c in rest:
        relation = relation - c
    return eval_wronskian(U, rest + [relation]) == eval_wronskian(U, rest + [-c0])


def _graph_jet_values(cfg: FermatConfig, k: int) -> dict:
    """Jets of the coordinate functions ``z_1..z_p`` at a generic point.

    Function ``i`` (1..p) has ``d_{e_i} = 1`` and all other nonzero
    derivatives 0; its value stays the free symbol ``u_{i,0}``.
    """
    vals = {}
    for i in range(1, cfg.p + 1):
        for a in words_up_to(cfg.p, k):
            vals[(i, a)] = 1 if sum(a) == 1 and a[i - 1] == 1 else 0
    return vals


def fminus_vanishing_check(cfg: FermatConfig, U: WordSet, tails: str = "symbolic",
                           trunc: int = 2, seed: int = 0) -> bool:
    """``W_U(z_1^d, ..., z_p^d, g_{p+1}^d, ..., g_{N-1}^d, -1) = 0`` for ``U``
    missing a letter.

    ``symbolic``: the ``g_j`` are generic jets and the ``z_i`` specialised
    jets, so the statement is an identity of differential polynomials.
    ``random``: the ``g_j`` are random rational polynomials of degree
    ``trunc`` and the Wronskian is a polynomial in ``z``.
    """
    if missing_letter(U) is None:
        raise ValueError("U contains every letter; it is not in F-")
    p, N, d = cfg.p, cfg.N, cfg.delta
    if tails == "symbolic":
        zero = (0,) * p
        fs = [jet_var(j, zero, p) ** d for j in range(1, N)]
        fs.append(DiffPoly.constant(-1, p))
        vals = _graph_jet_values(cfg, U.k)
        rows = [fs] + [[f.diff(u) for f in fs] for u in U.words]
        M = [[substitute_jets(x, vals) for x in row] for row in rows]
        return not linalg.det(M)
    if tails == "random":
        rng = random.Random(seed)
        zs = [Polynomial.variable(i, p) ** d for i in range(p)]
        gs = [random_polynomial(p, trunc, rng) ** d for _ in range(N - 1 - p)]
        fs = zs + gs + [Polynomial.constant(-1, p)]
        return not eval_wronskian(U, fs)
    raise ValueError(f"unknown tails mode {tails!r}")


def degree_report(N: int, p: int, deltas: Sequence[int] | None = None) -> dict:
    threshold = (N + 1) * (N - p)
    deltas = list(deltas) if deltas is not None else list(range(1, threshold + 3))
    return {"N": N, "p": p, "threshold": threshold,
            "min_delta": threshold + 1,
            "table": [{"delta": d, "qualifies": d > threshold} for d in deltas]}


def fermat_report(cfg: FermatConfig, check: str = "all", seed: int = 0) -> dict:
    """Run the requested checks for every full set of size ``N-1``."""
    plus, minus = partition_fullsets(cfg.N, cfg.p)
    rows = []
    ok = True
    for U in sorted(plus + minus, key=WordSet.sort_key):
        entry: dict = {"set": [list(u) for u in U.words], "part": "plus" if U in plus else "minus",
                       "order": U.k}
        if check in ("factor", "all"):
            W = fermat_wronskian(cfg, U)
            try:
                exps, _ = factor_columns(cfg, U, W)
                entry["factor"] = {"ok": True, "exponents": exps}
            except ArithmeticError:
                entry["factor"] = {"ok": False}
                ok = False
            md = torus_multidegree(W) if W else None
            entry["multidegree"] = list(md) if isinstance(md, tuple) else md
            entry["multidegree_ok"] = md == U.beta
            ok &= entry["multidegree_ok"]
        if check in ("restrict", "all"):
            entry["restrict"] = restriction_identity_check(cfg, U)
            ok &= entry["restrict"]
        if check in ("fminus", "all") and U in minus:
            entry["fminus"] = (fminus_vanishing_check(cfg, U, "symbolic")
                               and fminus_vanishing_check(cfg, U, "random", seed=seed))
            ok &= entry["fminus"]
        rows.append(entry)
    return {"N": cfg.N, "p": cfg.p, "delta": cfg.delta, "threshold": cfg.threshold,
            "meets_threshold": cfg.meets_threshold, "sets": rows, "ok": bool(ok)}
