"""Words over {L, C, R}, the parity-lexicographic order and the shift map.

A word records on which side of the critical point each iterate falls.  The
symbol ``C`` marks a hit on the critical point itself and may only appear as
the last symbol.  Words are immutable and serialize as plain ASCII strings
such as ``"RLLC"``.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Union

from .errors import InvariantError, ParseError, PrefixIncomparable, RangeError

SYMBOLS = "LCR"
_RANK = {"L": 0, "C": 1, "R": 2}


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@functools.total_ordering
@dataclass(frozen=True)
class Word:
    """A finite, nonempty sequence of symbols with ``C`` only in last position.

    Rich comparisons use the parity-lexicographic order, so ``sorted`` on a
    list of kneading words returns them in parameter order.
    """

    symbols: str

    def __post_init__(self):
        s = self.symbols
        if not isinstance(s, str) or not s:
            raise ParseError("a word needs at least one symbol")
        bad = set(s) - set(SYMBOLS)
        if bad:
            raise ParseError(f"invalid symbol(s) {''.join(sorted(bad))!r} in {s!r}")
        if "C" in s[:-1]:
            raise InvariantError(f"C may only be the final symbol: {s!r}")

    def __str__(self):
        return self.symbols

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, item):
        return self.symbols[item]

    def __iter__(self):
        return iter(self.symbols)

    def __lt__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return compare_parity_lex(self, other) is Ordering.LESS

    @property
    def is_terminal(self) -> bool:
        """True when the word ends on the critical point."""
        return self.symbols[-1] == "C"

    def r_count(self) -> int:
        return self.symbols.count("R")


WordLike = Union[Word, str]


def parse_word(text: str) -> Word:
    return Word(text)


def format_word(w: WordLike) -> str:
    return str(w)


def as_word(w: WordLike) -> Word:
    return w if isinstance(w, Word) else Word(w)


def _symbols(w: WordLike) -> str:
    return w.symbols if isinstance(w, Word) else w


def _compare_str(a: str, b: str) -> int:
    parity = 0
    for x, y in zip(a, b):
        if x != y:
            less = _RANK[x] < _RANK[y]
            if parity:
                less = not less
            return -1 if less else 1
        if x == "R":
            parity ^= 1
    if len(a) == len(b):
        return 0
    raise PrefixIncomparable(f"{a!r} and {b!r} agree on their whole overlap")


def compare_parity_lex(a: WordLike, b: WordLike) -> Ordering:
    """Compare two words in the parity-lexicographic order.

    At the first differing position the base order ``L < C < R`` is used,
    reversed when the common prefix before it holds an odd number of ``R``.

    Raises :class:`PrefixIncomparable` when one word strictly prefixes the
    other; this cannot happen for two kneading words.
    """
    return Ordering(_compare_str(_symbols(a), _symbols(b)))


def compare_truncated(a: WordLike, b: WordLike) -> Ordering:
    """Compare two truncated itineraries on their common length.

    Agreement on the whole overlap counts as ``EQUAL``: a finite truncation
    cannot order two extensions it does not see.
    """
    sa, sb = _symbols(a), _symbols(b)
    m = min(len(sa), len(sb))
    return Ordering(_compare_str(sa[:m], sb[:m]))


parity_lex_key = functools.cmp_to_key(lambda a, b: _compare_str(_symbols(a), _symbols(b)))


def shift(w: WordLike, k: int = 1) -> Word:
    """Drop the first ``k`` symbols of ``w``."""
    s = _symbols(w)
    if k < 0 or k >= len(s):
        raise RangeError(f"shift count {k} outside [0, {len(s)})")
    return Word(s[k:])


def _is_shift_maximal_str(s: str) -> bool:
    for k in range(1, len(s)):
        if _compare_str(s[k:], s) != -1:
            return False
    return True


def is_shift_maximal(w: WordLike) -> bool:
    """True iff every proper shift of ``w`` is strictly smaller than ``w``."""
    return _is_shift_maximal_str(_symbols(as_word(w)))


def first_non_maximal_shift(w: WordLike):
    """Return the smallest ``k >= 1`` whose shift is not below ``w``, else None."""
    s = _symbols(as_word(w))
    for k in range(1, len(s)):
        if _compare_str(s[k:], s) != -1:
            return k
    return None
