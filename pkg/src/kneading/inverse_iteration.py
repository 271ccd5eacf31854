"""Level functions: inverse branches composed along a word, evaluated at ``c``.

For a word ``w = w1 w2 ... wk`` over {L, R} the level function is

    g_w(mu) = F^-1_{w1} o F^-1_{w2} o ... o F^-1_{wk} (c),   F = mu * f,

a point in phase space that moves with the parameter.  A fixed point
``g_w(mu) = mu`` makes ``c`` periodic with kneading word ``wC``; this module
locates those superstable parameters by bracketed bisection.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .enumeration import enumerate_kneading
from .errors import (
    DomainViolation,
    InvariantError,
    PreconditionError,
    RangeError,
    SolveFailure,
)
from .family import TOL_C, UnimodalFamily
from .words import (
    Ordering,
    WordLike,
    as_word,
    compare_parity_lex,
    first_non_maximal_shift,
    is_shift_maximal,
    parity_lex_key,
)

BRACKET_TOL = 1e-13
LEMMA_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LevelFunction:
    """``g_w`` for a fixed family and a word ``w`` over {L, R}."""

    family: UnimodalFamily
    word: str

    def __post_init__(self):
        w = str(self.word)
        if set(w) - {"L", "R"}:
            raise InvariantError(f"level-function words use only L and R, got {w!r}")
        object.__setattr__(self, "word", w)

    def __call__(self, mu: float) -> float:
        return g_eval(self, mu)


@dataclass(frozen=True)
class SuperstableRecord:
    word: str
    mu_star: float
    residual: float
    bracket: float

    def csv_row(self):
        return [self.word, f"{self.mu_star:.17g}", f"{self.residual:.17g}", f"{self.bracket:.17g}"]


CSV_HEADER = ["word", "mu_star", "residual", "bracket_width"]


def g_eval(spec: LevelFunction, mu: float) -> float:
    """Evaluate ``g_w(mu)``, raising :class:`DomainViolation` outside its domain."""
    if not 0.0 < mu <= 1.0:
        raise RangeError(f"parameter {mu} outside (0, 1]")
    fam = spec.family
    branch = fam.branch
    y = fam.c
    for side in reversed(spec.word):
        if y > mu:
            raise DomainViolation(f"g_{spec.word} undefined at mu={mu!r}")
        y = float(branch(side, y / mu))
    return y


def sigma_compat_check(spec: LevelFunction, mu: float, k: int) -> float:
    """Residual of ``f^k(g_w(mu)) = g_{shift^k w}(mu)``."""
    w = spec.word
    if not 0 <= k <= len(w):
        raise RangeError(f"shift count {k} outside [0, {len(w)}]")
    if k == 0:
        return 0.0
    fam = spec.family
    lhs = fam.iterate(mu, g_eval(spec, mu), k)
    rhs = g_eval(LevelFunction(fam, w[k:]), mu)
    return abs(lhs - rhs)


def _h(fam, omega, mu):
    return g_eval(LevelFunction(fam, omega), mu) - mu


def _defined_on(fam, omega, lb):
    spec = LevelFunction(fam, omega)
    for j in range(1, 41):
        try:
            g_eval(spec, lb + (1.0 - lb) * 2.0 ** -j)
        except DomainViolation:
            return False
    return True


def _scan_lower_bound(fam: UnimodalFamily, omega: str) -> float:
    """March down from ``mu = 1``, halving the step at every domain violation."""
    spec = LevelFunction(fam, omega)
    valid = 1.0
    step = (1.0 - fam.c) / 8.0
    while step > BRACKET_TOL:
        trial = valid - step
        if trial <= fam.c:
            step /= 2.0
            continue
        try:
            g_eval(spec, trial)
        except DomainViolation:
            step /= 2.0
            continue
        valid = trial
    if valid - fam.c <= 2 * BRACKET_TOL:
        return fam.c
    return valid


def _lower_bound(fam: UnimodalFamily, omega: str):
    """Return ``(bound, how)`` where ``how`` is 'critical', 'prefix' or 'scan'."""
    if len(omega) <= 1:
        return fam.c, "critical"
    parent = omega[:-1] + "C"
    if is_shift_maximal(parent):
        try:
            lb = _solve(fam, parent).mu_star
        except SolveFailure:
            lb = None
        if lb is not None and _defined_on(fam, omega, lb):
            return lb, "prefix"
    return _scan_lower_bound(fam, omega), "scan"


def domain_lower_bound(spec: LevelFunction) -> float:
    """A parameter ``lb`` with ``g_w`` defined on ``(lb, 1]``.

    Follows the induction on prefixes: the superstable parameter of the
    parent word ``w[:-1] + 'C'`` when that word is admissible and the level
    function is defined above it; otherwise a downward scan from ``mu = 1``.
    """
    if not spec.word:
        raise RangeError("the empty word has no domain bound")
    return _lower_bound(spec.family, spec.word)[0]


def _find_positive(fam, omega, lb, hi):
    """Halve towards ``lb`` from ``hi`` until ``h > 0``; return (lo, hi) or None."""
    a, b = lb, hi
    while b - a > BRACKET_TOL:
        m = a + 0.5 * (b - a)
        if m <= a or m >= b:
            break
        try:
            v = _h(fam, omega, m)
        except DomainViolation:
            return None
        if v > 0.0:
            return m, b
        b = m
    return None


def _bisect(fam, omega, lo, hi):
    """Bisect ``h`` on ``[lo, hi]`` down to adjacent floats."""
    while True:
        m = lo + 0.5 * (hi - lo)
        if m <= lo or m >= hi:
            break
        v = _h(fam, omega, m)
        if v > 0.0:
            lo = m
        elif v < 0.0:
            hi = m
        else:
            return m, m, m
    hl, hh = _h(fam, omega, lo), _h(fam, omega, hi)
    mu = lo if abs(hl) <= abs(hh) else hi
    return lo, hi, mu


@functools.lru_cache(maxsize=None)
def _solve(fam: UnimodalFamily, word: str) -> SuperstableRecord:
    if word == "C":
        return SuperstableRecord("C", fam.c, abs(fam.iterate(fam.c, fam.c, 1) - fam.c), 0.0)
    omega = word[:-1]
    if _h(fam, omega, 1.0) >= 0.0:
        raise SolveFailure(f"{word}: no sign change at mu = 1")

    lb, how = _lower_bound(fam, omega)
    bracket = _find_positive(fam, omega, lb, 1.0)
    if bracket is None and how == "prefix":
        lb = _scan_lower_bound(fam, omega)
        bracket = _find_positive(fam, omega, lb, 1.0)
    if bracket is None:
        raise SolveFailure(f"{word}: level function never exceeds the diagonal above {lb!r}")

    lo, hi, mu = _bisect(fam, omega, *bracket)
    if mu - lb < TOL_C:
        raise SolveFailure(f"{word}: root {mu!r} sits on the domain boundary {lb!r}")
    residual = abs(fam.iterate(mu, fam.c, len(word)) - fam.c)
    if residual > LEMMA_TOL:
        raise InvariantError(f"{word}: |f^n(c) - c| = {residual:.3g} at mu = {mu!r}")
    return SuperstableRecord(word, mu, residual, hi - lo)


def solve_superstable(fam: UnimodalFamily, w: WordLike) -> SuperstableRecord:
    """Superstable parameter whose kneading word is ``w`` (which ends in C).

    Solves ``g_omega(mu) = mu`` for ``omega = w[:-1]`` by bisection between a
    point of the domain where ``g_omega`` lies above the diagonal and
    ``mu = 1`` where it lies below, then checks ``|f^n(c) - c| < 1e-8``.
    """
    w = as_word(w)
    if not w.is_terminal:
        raise PreconditionError(f"{w} does not end in C")
    k = first_non_maximal_shift(w)
    if k is not None:
        raise PreconditionError(f"{w} is not shift-maximal (shift {k}: {w[k:]})")
    return _solve(fam, str(w))


def superstable_table(fam: UnimodalFamily, n_max: int):
    """Solve every kneading word of length ``1..n_max``; sorted by parameter.

    Raises :class:`InvariantError` if the parameter order disagrees with the
    parity-lexicographic order of the words.
    """
    if not 1 <= n_max <= 12:
        raise RangeError("n_max must lie in [1, 12]")
    records = []
    for n in range(1, n_max + 1):
        for w in enumerate_kneading(n).enumerated:
            try:
                records.append(_solve(fam, str(w)))
            except SolveFailure as exc:
                raise SolveFailure(f"while solving {w}: {exc}") from exc
    records.sort(key=lambda r: r.mu_star)
    bad = order_inversions(records)
    if bad:
        a, b = bad[0]
        raise InvariantError(f"order inversion: {a.word} ({a.mu_star}) before {b.word} ({b.mu_star})")
    return records


def order_inversions(records):
    """Adjacent pairs (sorted by mu) whose words are not increasing."""
    return [
        (a, b)
        for a, b in zip(records, records[1:])
        if compare_parity_lex(a.word, b.word) is not Ordering.LESS
    ]


def sort_by_word(records):
    return sorted(records, key=lambda r: parity_lex_key(r.word))


def realize_ivt(fam: UnimodalFamily, w: WordLike, mu1: float, mu2: float,
                depth: int = 25, tol_c: float = TOL_C) -> float:
    """Find ``mu`` in ``(mu1, mu2)`` whose kneading word is ``w``.

    Bisects on the parameter, keeping ``K(lo) < w < K(hi)``, until the
    kneading word at the midpoint equals ``w``.
    """
    w = as_word(w)
    if not (w.is_terminal and is_shift_maximal(w)):
        raise PreconditionError(f"{w} is not a shift-maximal word ending in C")
    if depth < len(w):
        raise PreconditionError(f"depth {depth} shorter than the word {w}")
    if not 0.0 <= mu1 < mu2 <= 1.0:
        raise PreconditionError(f"need 0 <= mu1 < mu2 <= 1, got {mu1}, {mu2}")

    def K(mu):
        return fam.kneading_sequence(mu, depth, tol_c)

    if not (compare_parity_lex(K(mu1), w) is Ordering.LESS
            and compare_parity_lex(w, K(mu2)) is Ordering.LESS):
        raise PreconditionError(f"K({mu1}) < {w} < K({mu2}) does not hold")
    lo, hi = mu1, mu2
    while hi - lo > 1e-14:
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            break
        order = compare_parity_lex(K(mid), w)
        if order is Ordering.EQUAL:
            return mid
        if order is Ordering.LESS:
            lo = mid
        else:
            hi = mid
    raise SolveFailure(f"bracket around {w} collapsed without a match")
