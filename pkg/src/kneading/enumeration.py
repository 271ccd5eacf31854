"""Finite kneading sequences of a given length, and their closed-form count."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvariantError, RangeError
from .words import Word, _is_shift_maximal_str, parity_lex_key


def mobius(d: int) -> int:
    """Moebius function by trial division."""
    if d < 1:
        raise RangeError(f"mobius is defined for d >= 1, got {d}")
    sign = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            sign = -sign
        p += 1
    if d > 1:
        sign = -sign
    return sign


def count_kneading(n: int) -> int:
    """Number of kneading words of length ``n``.

    ``(1 / 2n) * sum mobius(d) * 2**(n/d)`` over the odd square-free divisors
    ``d`` of ``n``.
    """
    if not 1 <= n <= 62:
        raise RangeError(f"n must lie in [1, 62], got {n}")
    total = sum(mobius(d) * 2 ** (n // d) for d in range(1, n + 1, 2) if n % d == 0)
    q, r = divmod(total, 2 * n)
    if r:
        raise InvariantError(f"formula sum {total} not divisible by {2 * n}")
    return q


@dataclass
class KneadingCensus:
    n: int
    formula_count: int
    enumerated: list

    @property
    def agrees(self) -> bool:
        return len(self.enumerated) == self.formula_count


def kneading_words(n: int):
    """All shift-maximal words of length ``n`` ending in C, unsorted."""
    for head in itertools.product("LR", repeat=n - 1):
        s = "".join(head) + "C"
        if _is_shift_maximal_str(s):
            yield s


def enumerate_kneading(n: int, check: bool = True) -> KneadingCensus:
    """Brute-force census of length-``n`` kneading words in parity-lex order.

    With ``check`` set, a disagreement with :func:`count_kneading` raises
    :class:`InvariantError`.
    """
    if not 1 <= n <= 20:
        raise RangeError(f"n must lie in [1, 20], got {n}")
    words = sorted(kneading_words(n), key=parity_lex_key)
    census = KneadingCensus(n, count_kneading(n), [Word(s) for s in words])
    if check and not census.agrees:
        raise InvariantError(
            f"n={n}: enumerated {len(words)} words, formula gives {census.formula_count}"
        )
    return census
