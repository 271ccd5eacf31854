"""Scaled unimodal families ``x -> mu * f(x)`` on the unit interval.

``f`` has a single interior critical point ``c`` and is normalised so that
``f(0) = f(1) = 0`` and ``f(c) = 1``; the critical value of ``mu * f`` is then
``mu`` itself.  Each family carries analytic derivative oracles and,
optionally, closed-form inverse branches of ``f`` on ``[0, c]`` and ``[c, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainViolation, RangeError, SingularPoint
from .words import Word

TOL_C = 1e-9
VALIDATION_TOL = 1e-12
BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200

Func = Callable[[float], float]


def _bisect_branch(f, t, a, b, increasing):
    """Vectorised monotone bisection for ``f(x) = t`` on ``[a, b]``."""
    t = np.asarray(t, dtype=float)
    lo = np.full(t.shape, a, dtype=float)
    hi = np.full(t.shape, b, dtype=float)
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        below = f(mid) < t
        if not increasing:
            below = ~below
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo < BISECT_TOL * 1e-3):
            break
    out = 0.5 * (lo + hi)
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class UnimodalFamily:
    """The one-parameter family ``mu * f`` for a scaled unimodal ``f``.

    ``value`` and the derivative oracles must accept numpy arrays as well as
    floats.  ``inverse_left``/``inverse_right`` map ``t`` in ``[0, 1]`` to the
    preimage of ``t`` under ``f`` on the respective side of ``c``; when they
    are omitted a monotone bisection is used instead.
    """

    name: str
    c: float
    value: Func
    d1: Func
    d2: Func
    d3: Func
    inverse_left: Optional[Func] = None
    inverse_right: Optional[Func] = None
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.validate:
            self._validate()

    def _validate(self):
        c = self.c
        if not 0.0 < c < 1.0:
            raise RangeError(f"critical point {c} not in (0, 1)")
        f = self.value
        for x, want in ((0.0, 0.0), (1.0, 0.0), (c, 1.0)):
            got = float(f(x))
            if abs(got - want) > VALIDATION_TOL:
                raise RangeError(f"{self.name}: f({x}) = {got}, expected {want}")
        left = np.linspace(0.0, c, 257)
        right = np.linspace(c, 1.0, 257)
        if not (np.all(np.diff(f(left)) > 0) and np.all(np.diff(f(right)) < 0)):
            raise RangeError(f"{self.name}: f is not unimodal on the sampled grid")
        grid = np.linspace(0.0, 1.0, 513)
        for d in (self.d1, self.d2, self.d3):
            if not np.all(np.isfinite(d(grid))):
                raise RangeError(f"{self.name}: derivative oracle not finite on [0, 1]")

    # -- forward map -------------------------------------------------------

    def eval(self, mu: float, x: float) -> float:
        """Return ``mu * f(x)``."""
        if not 0.0 <= mu <= 1.0:
            raise RangeError(f"parameter {mu} outside [0, 1]")
        if not 0.0 <= x <= 1.0:
            raise RangeError(f"point {x} outside [0, 1]")
        return mu * float(self.value(x))

    def iterate(self, mu: float, x: float, n: int) -> float:
        """Return the ``n``-fold composite of ``mu * f`` applied to ``x``."""
        if n < 0:
            raise RangeError("iteration count must be nonnegative")
        if n == 0:
            return x
        y = self.eval(mu, x)
        f = self.value
        for _ in range(n - 1):
            y = mu * float(f(y))
        return y

    # -- inverse branches --------------------------------------------------

    def branch(self, side: str, t):
        """Preimage of ``t`` under ``f`` (not ``mu * f``) on ``side``.

        Vectorised; ``t`` must lie in ``[0, 1]``.
        """
        if side == "L":
            if self.inverse_left is not None:
                return self.inverse_left(t)
            return _bisect_branch(self.value, t, 0.0, self.c, True)
        if side == "R":
            if self.inverse_right is not None:
                return self.inverse_right(t)
            return _bisect_branch(self.value, t, self.c, 1.0, False)
        raise RangeError(f"branch side must be 'L' or 'R', got {side!r}")

    def inverse_branch(self, mu: float, side: str, y: float) -> float:
        """Solve ``mu * f(x) = y`` with ``x`` on the given side of ``c``."""
        if not 0.0 < mu <= 1.0:
            raise RangeError(f"parameter {mu} outside (0, 1]")
        if y > mu:
            raise DomainViolation(f"{y!r} exceeds the critical value {mu!r}")
        if y < 0.0:
            raise RangeError(f"target {y} is negative")
        return float(self.branch(side, y / mu))

    # -- symbolic dynamics -------------------------------------------------

    def itinerary(self, mu: float, x: float, depth: int, tol_c: float = TOL_C) -> Word:
        """Symbols of the first ``depth`` orbit points of ``x``, stopping at C."""
        if depth < 1:
            raise RangeError("depth must be at least 1")
        if tol_c <= 0:
            raise RangeError("tol_c must be positive")
        c, f = self.c, self.value
        out = []
        y = x
        for _ in range(depth):
            if abs(y - c) < tol_c:
                out.append("C")
                break
            out.append("L" if y < c else "R")
            y = mu * float(f(y))
        return Word("".join(out))

    def kneading_sequence(self, mu: float, depth: int = 25, tol_c: float = TOL_C) -> Word:
        """Itinerary of the critical value ``mu``."""
        return self.itinerary(mu, mu, depth, tol_c)

    # -- Schwarzian derivatives -------------------------------------------

    def schwarzian(self, mu: float, x: float) -> float:
        """Schwarzian derivative of ``mu * f`` at ``x`` (independent of ``mu``)."""
        d1 = float(self.d1(x))
        if x == self.c or d1 == 0.0:
            raise SingularPoint(f"f' vanishes at {x}")
        a = float(self.d2(x)) / d1
        return float(self.d3(x)) / d1 - 1.5 * a * a

    def schwarzian_inverse_branch(self, mu: float, side: str, y: float) -> float:
        """Schwarzian of the inverse branch at ``y``, by the pullback identity.

        Differentiating ``F(F^-1(y)) = y`` gives ``S(F^-1)(y) = -S(F)(x) / F'(x)^2``
        with ``x = F^-1(y)``.
        """
        x = self.inverse_branch(mu, side, y)
        slope = mu * float(self.d1(x))
        if slope == 0.0:
            raise SingularPoint(f"preimage of {y} is the critical point")
        return -self.schwarzian(mu, x) / (slope * slope)

    def branch_jet(self, mu: float, side: str, y: float):
        """Value and first three derivatives of the inverse branch at ``y``."""
        x = self.inverse_branch(mu, side, y)
        F1 = mu * float(self.d1(x))
        if F1 == 0.0:
            raise SingularPoint(f"preimage of {y} is the critical point")
        F2 = mu * float(self.d2(x))
        F3 = mu * float(self.d3(x))
        g1 = 1.0 / F1
        g2 = -F2 * g1 ** 3
        g3 = -F3 * g1 ** 4 - 3.0 * F2 * g1 * g1 * g2
        return x, g1, g2, g3


def composed_inverse_jet(fam: UnimodalFamily, mu: float, word: str, y: float):
    """3-jet of ``F^-1_{w1} o ... o F^-1_{wk}`` at ``y`` (last symbol applied first)."""
    v, j1, j2, j3 = y, 1.0, 0.0, 0.0
    for side in reversed(word):
        u, b1, b2, b3 = fam.branch_jet(mu, side, v)
        j1, j2, j3 = (
            b1 * j1,
            b2 * j1 * j1 + b1 * j2,
            b3 * j1 ** 3 + 3.0 * b2 * j1 * j2 + b1 * j3,
        )
        v = u
    return v, j1, j2, j3


def schwarzian_from_jet(jet) -> float:
    _, j1, j2, j3 = jet
    a = j2 / j1
    return j3 / j1 - 1.5 * a * a


def composed_inverse_schwarzian(fam: UnimodalFamily, mu: float, word: str, y: float) -> float:
    """Schwarzian of the composed inverse branches along ``word`` at ``y``."""
    return schwarzian_from_jet(composed_inverse_jet(fam, mu, word, y))


def composed_inverse(fam: UnimodalFamily, mu: float, word: str, y: float) -> float:
    for side in reversed(word):
        y = fam.inverse_branch(mu, side, y)
    return y


# -- built-in families -----------------------------------------------------


def _logistic_left(t):
    return 0.5 * (1.0 - np.sqrt(1.0 - t))


def _logistic_right(t):
    return 0.5 * (1.0 + np.sqrt(1.0 - t))


LOGISTIC = UnimodalFamily(
    name="logistic",
    c=0.5,
    value=lambda x: 4.0 * x * (1.0 - x),
    d1=lambda x: 4.0 - 8.0 * x,
    d2=lambda x: -8.0 + 0.0 * x,
    d3=lambda x: 0.0 * x,
    inverse_left=_logistic_left,
    inverse_right=_logistic_right,
)

SINE = UnimodalFamily(
    name="sine",
    c=0.5,
    value=lambda x: np.sin(math.pi * x),
    d1=lambda x: math.pi * np.cos(math.pi * x),
    d2=lambda x: -math.pi ** 2 * np.sin(math.pi * x),
    d3=lambda x: -math.pi ** 3 * np.cos(math.pi * x),
    inverse_left=lambda t: np.arcsin(t) / math.pi,
    inverse_right=lambda t: 1.0 - np.arcsin(t) / math.pi,
)

FAMILIES = {fam.name: fam for fam in (LOGISTIC, SINE)}


def get_family(name: str) -> UnimodalFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None


def register_family(fam: UnimodalFamily) -> None:
    FAMILIES[fam.name] = fam


# -- class C checks --------------------------------------------------------


@dataclass
class ClassCReport:
    """Outcome of the sampled class-C checks for one family.

    ``property2_sufficient_ok`` only covers the negative-Schwarzian sufficient
    condition; the asymptotic behaviour of the critical orbit is not tested.
    """

    family: str
    mu_samples: list
    property1_ok: bool
    property2_sufficient_ok: bool
    property3_ok: bool
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.property1_ok and self.property2_sufficient_ok and self.property3_ok


def default_mu_grid(fam: UnimodalFamily, n: int = 100):
    # the fixed point leaves (0, 1) for small mu, so sample above the critical point
    return list(np.linspace(fam.c, 1.0, n + 1)[1:])


def default_x_grid(n: int = 200):
    return list(np.linspace(0.0, 1.0, n + 2)[1:-1])


def check_class_C(fam: UnimodalFamily, mu_grid=None, x_grid=None) -> ClassCReport:
    """Sampled check of the three class-C properties.

    1. ``mu*f(x) - x`` changes sign exactly once on the interior of ``x_grid``.
    2. ``S(f) < 0`` on ``x_grid`` minus the critical point (sufficient condition).
    3. Both inverse branches have positive Schwarzian at ``y = mu*t`` for ``t``
       in the interior of ``x_grid``.
    """
    mu_grid = default_mu_grid(fam) if mu_grid is None else list(mu_grid)
    x_grid = default_x_grid() if x_grid is None else list(x_grid)
    if not mu_grid or not x_grid:
        raise RangeError("grids must be nonempty")
    witnesses = []
    xs = np.array([x for x in x_grid if 0.0 < x < 1.0])

    p1 = True
    for mu in mu_grid:
        g = mu * fam.value(xs) - xs
        s = np.sign(g)
        s = s[s != 0]
        crossings = int(np.count_nonzero(s[1:] != s[:-1]))
        if crossings != 1:
            p1 = False
            witnesses.append(("property1", float(mu), None, float(crossings)))

    p2 = True
    for x in x_grid:
        if x == fam.c:
            continue
        s = fam.schwarzian(1.0, x)
        if not s < 0.0:
            p2 = False
            witnesses.append(("property2", None, float(x), s))

    p3 = True
    ts = [t for t in x_grid if 0.0 < t < 1.0]
    for mu in mu_grid:
        for t in ts:
            y = mu * t
            for side in "LR":
                s = fam.schwarzian_inverse_branch(mu, side, y)
                if not s > 0.0:
                    p3 = False
                    witnesses.append(("property3" + side, float(mu), float(y), s))

    return ClassCReport(
        family=fam.name,
        mu_samples=[float(m) for m in mu_grid],
        property1_ok=p1,
        property2_sufficient_ok=p2,
        property3_ok=p3,
        witnesses=witnesses,
    )
