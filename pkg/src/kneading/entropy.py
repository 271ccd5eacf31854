"""Topological entropy from lap growth, and monotonicity sweeps over the parameter.

The turning points of ``f^n`` are the points mapped onto ``c`` by one of the
first ``n - 1`` iterates, so ``lap(f^n) = 1 + #(c, f^-1 c, ..., f^-(n-1) c)``.
The preimage tree is expanded level by level with the inverse branches; only
nodes strictly below the critical value have preimages.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, RangeError
from .family import TOL_C, UnimodalFamily
from .words import Ordering, compare_truncated

NODE_CAP = 2_000_000
MAX_DEPTH = 4000
TAIL = 5
ZERO_CLAMP = 1e-4
ENTROPY_TOL = 5e-3


def preimage_levels(fam: UnimodalFamily, mu: float, n_levels: int, node_cap: int = NODE_CAP):
    """Sizes of the first ``n_levels`` levels of the preimage tree of ``c``.

    Returns ``(sizes, cap_hit)``; expansion stops before the total node count
    would exceed ``node_cap``.
    """
    if n_levels < 1 or node_cap < 1:
        raise RangeError("n_levels and node_cap must be positive")
    level = np.array([fam.c])
    sizes = [1]
    total = 1
    while len(sizes) < n_levels:
        live = level[level < mu]
        if live.size == 0:
            sizes.append(0)
            level = live
            continue
        if total + 2 * live.size > node_cap:
            return sizes, True
        t = live / mu
        level = np.concatenate((fam.branch("L", t), fam.branch("R", t)))
        sizes.append(level.size)
        total += level.size
    return sizes, False


def _laps(sizes):
    return [1 + s for s in itertools.accumulate(sizes)]


def lap_count(fam: UnimodalFamily, mu: float, n: int, node_cap: int = NODE_CAP) -> int:
    """Number of laps of the ``n``-th iterate of ``mu * f``."""
    if n < 1:
        raise RangeError("n must be at least 1")
    sizes, cap_hit = preimage_levels(fam, mu, n, node_cap)
    if cap_hit:
        raise CapExceeded(f"node cap {node_cap} reached at level {len(sizes)}", sizes)
    return 1 + sum(sizes)


@dataclass
class EntropyReport:
    mu: float
    lap_counts: list
    h_estimate: float
    depth: int
    cap_hit: bool


def _estimate_from_laps(laps, tail=TAIL):
    ratios = [math.log(b / a) for a, b in zip(laps, laps[1:])][-tail:]
    if not ratios:
        return 0.0
    h = sum(ratios) / len(ratios)
    return 0.0 if h < ZERO_CLAMP else h


def entropy_estimate(fam: UnimodalFamily, mu: float, max_depth: int = MAX_DEPTH,
                     node_cap: int = NODE_CAP) -> EntropyReport:
    """Lap-growth estimate of the topological entropy of ``mu * f`` (nats).

    The estimate is the mean of ``log(lap(n+1) / lap(n))`` over the last five
    levels reached, clamped to zero below 1e-4.  Depth stops at ``max_depth``
    or when the next level would break ``node_cap``.
    """
    if max_depth < 5:
        raise RangeError("max_depth must be at least 5")
    if mu <= fam.c:
        # every preimage chain dies at the first step: two laps at every order
        sizes, cap_hit = [1] + [0] * (max_depth - 1), False
    else:
        sizes, cap_hit = preimage_levels(fam, mu, max_depth, node_cap)
    laps = list(_laps(sizes))
    return EntropyReport(mu, laps, _estimate_from_laps(laps), len(laps), cap_hit)


@dataclass
class SweepReport:
    family: str
    mus: list
    words: list
    entropies: list
    depths: list
    kneading_violations: list = field(default_factory=list)
    entropy_violations: list = field(default_factory=list)
    entropy_deltas: list = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return not self.kneading_violations and not self.entropy_violations


def sweep(fam: UnimodalFamily, mu_min: float, mu_max: float, grid_points: int = 1000,
          depth: int = 25, max_depth: int = MAX_DEPTH, node_cap: int = NODE_CAP,
          tol_c: float = TOL_C, entropy_tol: float = ENTROPY_TOL,
          with_entropy: bool = True) -> SweepReport:
    """Kneading words and entropy on a uniform grid, plus every adjacent decrease.

    Kneading words are compared on their common truncation; agreement counts
    as non-decreasing.  Entropy drops larger than ``entropy_tol`` are recorded
    as violations, and every signed difference is kept in ``entropy_deltas``.
    """
    if not 0.0 < mu_min < mu_max <= 1.0:
        raise RangeError(f"need 0 < mu_min < mu_max <= 1, got {mu_min}, {mu_max}")
    if grid_points < 2:
        raise RangeError("grid_points must be at least 2")
    mus = [float(m) for m in np.linspace(mu_min, mu_max, grid_points)]
    words = [fam.kneading_sequence(mu, depth, tol_c) for mu in mus]
    entropies, depths = [], []
    if with_entropy:
        for mu in mus:
            rep = entropy_estimate(fam, mu, max_depth, node_cap)
            entropies.append(rep.h_estimate)
            depths.append(rep.depth)
    report = SweepReport(fam.name, mus, words, entropies, depths)
    for i in range(grid_points - 1):
        if compare_truncated(words[i], words[i + 1]) is Ordering.GREATER:
            report.kneading_violations.append((i, i + 1, str(words[i]), str(words[i + 1])))
    for i in range(len(entropies) - 1):
        delta = entropies[i + 1] - entropies[i]
        report.entropy_deltas.append(delta)
        if -delta > entropy_tol:
            report.entropy_violations.append((i, i + 1, delta))
    return report
