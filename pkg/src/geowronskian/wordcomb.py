"""Words, word sets and their combinatorics.

A word over the alphabet ``{1, ..., p}`` is stored as its exponent vector
``alpha`` (a tuple of ``p`` non-negative integers): the word ``1^a1 ... p^ap``
is determined by how many times each letter occurs.  A subword is then just a
componentwise smaller exponent vector.

Word sets are listed in the canonical row order used throughout the package:
by increasing length, then lexicographically on the letter strings (so, at a
fixed length, ``11 < 12 < 22``; on exponent vectors this is *decreasing* lex).
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

Word = tuple  # exponent vector, tuple[int, ...]


class EnumerationTooLarge(RuntimeError):
    """Raised when an enumeration would exceed its configured cap."""


DEFAULT_ENUMERATION_CAP = 1_000_000


# ---------------------------------------------------------------------------
# single words

def make_word(alpha: Iterable[int]) -> Word:
    w = tuple(int(a) for a in alpha)
    if not w or any(a < 0 for a in w):
        raise ValueError(f"invalid exponent vector {w!r}")
    if not any(w):
        raise ValueError("the empty word is not allowed here")
    return w


def word_from_letters(letters: Iterable[int] | str, p: int) -> Word:
    """Build a word from its letters, e.g. ``"112"`` or ``[1, 1, 2]``."""
    alpha = [0] * p
    for ch in letters:
        i = int(ch)
        if not 1 <= i <= p:
            raise ValueError(f"letter {i} outside alphabet 1..{p}")
        alpha[i - 1] += 1
    return make_word(alpha)


def word_letters(u: Word) -> tuple[int, ...]:
    """Letters of ``u`` in lex-sorted form, e.g. ``(2, 1) -> (1, 1, 2)``."""
    return tuple(i + 1 for i, a in enumerate(u) for _ in range(a))


def word_str(u: Word) -> str:
    if not any(u):
        return "∅"
    parts = []
    for i, a in enumerate(u):
        if a == 1:
            parts.append(str(i + 1))
        elif a > 1:
            parts.append(f"{i + 1}^{a}")
    return "".join(parts) if all(a <= 1 for a in u) else "·".join(parts)


def length(u: Word) -> int:
    return sum(u)


@lru_cache(maxsize=None)
def word_key(u: Word) -> tuple:
    """Sort key of the canonical row order (length, then letter-string lex)."""
    return (sum(u),) + tuple(-a for a in u)


def is_subword(v: Word, u: Word) -> bool:
    return all(a <= b for a, b in zip(v, u))


def subwords(u: Word, proper: bool = False) -> Iterator[Word]:
    """Nonzero exponent vectors below ``u`` (including ``u`` unless proper)."""
    for v in itertools.product(*(range(a + 1) for a in u)):
        if any(v) and (not proper or v != tuple(u)):
            yield v


def words_of_length(p: int, n: int) -> list[Word]:
    """All words of length exactly ``n`` in canonical order."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, slots - 1)

    rec((), n, p)
    return out


def words_up_to(p: int, n: int) -> list[Word]:
    return [u for j in range(1, n + 1) for u in words_of_length(p, j)]


def count_words_of_length(p: int, n: int) -> int:
    return comb(p + n - 1, p - 1)


# ---------------------------------------------------------------------------
# word sets

@dataclass(frozen=True)
class WordSet:
    """A finite set of distinct nonempty words, in canonical order.

    Cached statistics follow the usual definitions: ``m`` is the size, ``k``
    the order (maximal length), ``w`` the weight (sum of lengths), ``beta``
    the characteristic exponent (letter counts summed over the set) and
    ``charseq`` the number of words of each length ``1..k``.
    """

    p: int
    words: tuple
    m: int = field(init=False)
    k: int = field(init=False)
    w: int = field(init=False)
    beta: tuple = field(init=False)
    charseq: tuple = field(init=False)

    def __post_init__(self):
        words = tuple(sorted((tuple(u) for u in self.words), key=word_key))
        for u in words:
            if len(u) != self.p:
                raise ValueError(f"word {u!r} does not have {self.p} letters")
            make_word(u)
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in word set")
        k = max((sum(u) for u in words), default=0)
        beta = tuple(sum(u[i] for u in words) for i in range(self.p))
        charseq = tuple(sum(1 for u in words if sum(u) == j) for j in range(1, k + 1))
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "m", len(words))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "w", sum(beta))
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "charseq", charseq)

    @classmethod
    def _trusted(cls, p: int, words: tuple) -> "WordSet":
        """Skip validation: ``words`` are distinct, valid and canonically sorted."""
        obj = object.__new__(cls)
        k = max((sum(u) for u in words), default=0)
        beta = tuple(map(sum, zip(*words))) if words else (0,) * p
        counts = [0] * k
        for u in words:
            counts[sum(u) - 1] += 1
        for name, val in (("p", p), ("words", words), ("m", len(words)), ("k", k),
                          ("w", sum(beta)), ("beta", beta), ("charseq", tuple(counts))):
            object.__setattr__(obj, name, val)
        return obj

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return self.m

    def __contains__(self, u):
        return tuple(u) in self.words

    def __str__(self):
        return "{" + ", ".join(word_str(u) for u in self.words) + "}"

    def sort_key(self):
        return (self.m,) + tuple(word_key(u) for u in self.words)

    def stats(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "w": self.w,
            "beta": list(self.beta),
            "charseq": list(self.charseq),
        }

    def to_json(self) -> dict:
        return {"words": [list(u) for u in self.words], "stats": self.stats()}

    @classmethod
    def from_json(cls, obj, p: int | None = None) -> "WordSet":
        words = obj["words"] if isinstance(obj, dict) else obj
        words = [tuple(u) for u in words]
        if p is None:
            if not words:
                raise ValueError("cannot infer p from an empty word list")
            p = len(words[0])
        return cls(p, tuple(words))


def set_stats(words: Sequence[Word], p: int | None = None) -> WordSet:
    words = [tuple(u) for u in words]
    if p is None:
        if not words:
            raise ValueError("p is required for an empty word set")
        p = len(words[0])
    return WordSet(p, tuple(words))


def word_set_from_letters(words: Iterable, p: int) -> WordSet:
    return WordSet(p, tuple(word_from_letters(str(u) if isinstance(u, int) else u, p)
                            for u in words))


def is_admissible(ws: WordSet) -> bool:
    # If some ordering satisfies len(u_i) <= i, its first i words all have
    # length <= i, so the i-th shortest word has length <= i as well: the
    # length-sorted ordering is a witness whenever any ordering is.
    return all(sum(u) <= i for i, u in enumerate(ws.words, start=1))


def is_full(ws: WordSet) -> bool:
    members = set(ws.words)
    for u in ws.words:
        for i, a in enumerate(u):
            if a:
                v = u[:i] + (a - 1,) + u[i + 1:]
                if any(v) and v not in members:
                    return False
    return True


def enumerate_full_sets(p: int, m: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[WordSet]:
    """All full sets of size ``m`` over ``p`` letters (order ideals of N^p - 0).

    Each ideal is produced once, by adding elements in increasing canonical
    order: the canonically largest element of an ideal is always maximal in the
    subword order, and removing it leaves an ideal.
    """
    if p < 1 or m < 0:
        raise ValueError("need p >= 1 and m >= 0")
    if m == 0:
        return [WordSet(p, ())]
    units = [tuple(int(i == j) for j in range(p)) for i in range(p)]
    out: list[tuple] = []

    def addable_after(ideal: set, new: Word, addable: set) -> set:
        nxt = set(addable)
        nxt.discard(new)
        for i in range(p):
            c = new[:i] + (new[i] + 1,) + new[i + 1:]
            ok = True
            for j in range(p):
                if c[j] and j != i:
                    d = c[:j] + (c[j] - 1,) + c[j + 1:]
                    if d not in ideal:
                        ok = False
                        break
            if ok:
                nxt.add(c)
        return nxt

    def rec(ideal: set, order: list, last_key, addable: set):
        if len(order) == m:
            out.append(tuple(order))
            if len(out) > cap:
                raise EnumerationTooLarge(
                    f"more than {cap} full sets for p={p}, m={m}")
            return
        for c in sorted(addable, key=word_key):
            if last_key is not None and word_key(c) <= last_key:
                continue
            ideal.add(c)
            order.append(c)
            rec(ideal, order, word_key(c), addable_after(ideal, c, addable))
            order.pop()
            ideal.discard(c)

    rec(set(), [], None, set(units))
    # elements were added in increasing canonical order
    sets = [WordSet._trusted(p, ws) for ws in out]
    sets.sort(key=WordSet.sort_key)
    return sets


def canonical_full_set(p: int, n: int) -> WordSet:
    """``U_n``: every word of length at most ``n``."""
    return WordSet(p, tuple(words_up_to(p, n)))


def canonical_size(p: int, n: int) -> int:
    return sum(comb(p + i - 1, p - 1) for i in range(1, n + 1))


def canonical_weight(p: int, n: int) -> int:
    return sum(i * comb(p + i - 1, p - 1) for i in range(1, n + 1))


# ---------------------------------------------------------------------------
# characteristic sequences

def charseq_weight(n: Sequence[int]) -> int:
    return sum(j * nj for j, nj in enumerate(n, start=1))


def charseq_feasible(n: Sequence[int], p: int) -> bool:
    return all(0 <= nj <= count_words_of_length(p, j) for j, nj in enumerate(n, start=1))


def compare_char_sequences(a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1.  Shorter sequences come first; at equal order the
    lexicographically *larger* sequence is the smaller one."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    if a == b:
        return 0
    return -1 if a > b else 1


def charseq_key(n: Sequence[int]) -> tuple:
    """Sort key realising :func:`compare_char_sequences`."""
    return (len(n),) + tuple(-x for x in n)


def min_weight_for_size(p: int, m: int) -> tuple[tuple[int, ...], int]:
    seq = []
    left = m
    j = 1
    while left > 0:
        take = min(left, count_words_of_length(p, j))
        seq.append(take)
        left -= take
        j += 1
    return tuple(seq), charseq_weight(seq)


def foliation_ratio(p: int, C: int, n: int) -> Fraction:
    """``r(n) (m(n) + 1) / w_min(n)`` with ``m(n) = |U_n|`` and ``r(n)`` the
    least integer with ``C r^(p+1) > m(n)``."""
    m = canonical_size(p, n)
    r = max(1, int(round((m / C) ** (1.0 / (p + 1)))) - 1)
    while C * r ** (p + 1) <= m:
        r += 1
    while r > 1 and C * (r - 1) ** (p + 1) > m:
        r -= 1
    _, w_min = min_weight_for_size(p, m)
    return Fraction(r * (m + 1), w_min)


def foliation_data(p: int, C: int, n: int) -> dict:
    m = canonical_size(p, n)
    seq, w_min = min_weight_for_size(p, m)
    ratio = foliation_ratio(p, C, n)
    r = ratio * w_min / (m + 1)
    return {"m": m, "r": int(r), "w_min": w_min, "charseq": list(seq), "ratio": ratio}
