"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from kneading.cli import main
from kneading.entropy import sweep, entropy_estimate
from kneading.enumeration import count_kneading, enumerate_kneading
from kneading.errors import DomainViolation
from kneading.family import LOGISTIC, SINE, composed_inverse_schwarzian
from kneading.inverse_iteration import (
    _solve,
    LevelFunction,
    g_eval,
    order_inversions,
    realize_ivt,
    sigma_compat_check,
    solve_superstable,
    sort_by_word,
    superstable_table,
)

FAMILIES = [LOGISTIC, SINE]
LOG_GOLDEN = math.log((1 + math.sqrt(5)) / 2)


def forward_root(fam, k, a, b):
    """Bisection on f^k(c) - c using forward iteration only."""

    def p(mu):
        x = fam.c
        for _ in range(k):
            x = mu * float(fam.value(x))
        return x - fam.c

    pa = p(a)
    assert pa * p(b) < 0
    for _ in range(200):
        m = 0.5 * (a + b)
        if (p(m) > 0) == (pa > 0):
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def test_01_count_formula_matches_enumeration(acceptance):
    t0 = time.perf_counter()
    pairs = [(len(enumerate_kneading(n, check=False).enumerated), count_kneading(n)) for n in range(1, 15)]
    elapsed = time.perf_counter() - t0
    ok = all(a == b for a, b in pairs) and [b for _, b in pairs[:8]] == [1, 1, 1, 2, 3, 5, 9, 16]
    ok = ok and elapsed < 10
    acceptance("1 count formula vs enumeration", ok, f"n=1..14, {elapsed:.2f}s")
    assert ok, pairs


def test_02_solver_ground_truth(acceptance):
    _solve.cache_clear()  # time a cold solve
    t0 = time.perf_counter()
    c = solve_superstable(LOGISTIC, "C").mu_star
    rc = solve_superstable(LOGISTIC, "RC").mu_star
    rlc = solve_superstable(LOGISTIC, "RLC").mu_star
    elapsed = time.perf_counter() - t0
    oracle = forward_root(LOGISTIC, 3, 0.93, 0.97)
    errs = (abs(rc - (1 + math.sqrt(5)) / 4), abs(rlc - oracle))
    ok = c == 0.5 and errs[0] < 1e-10 and errs[1] < 1e-8 and elapsed < 1.0
    acceptance("2 solver ground truth", ok, f"|RC err|={errs[0]:.1e} |RLC err|={errs[1]:.1e} {elapsed:.3f}s")
    assert ok


def test_03_lemma_residuals(acceptance):
    _solve.cache_clear()  # time a cold solve
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for fam in FAMILIES:
        for rec in superstable_table(fam, 10):
            x = fam.c
            for _ in range(len(rec.word)):
                x = rec.mu_star * float(fam.value(x))
            worst = max(worst, abs(x - fam.c))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 60
    acceptance("3 lemma residuals", ok, f"{count} records, max residual {worst:.1e}, {elapsed:.1f}s")
    assert ok


def test_04_parameter_order_equals_word_order(acceptance):
    _solve.cache_clear()  # time a cold solve
    t0 = time.perf_counter()
    inversions = 0
    for fam in FAMILIES:
        recs = superstable_table(fam, 10)
        by_mu = [r.word for r in sorted(recs, key=lambda r: r.mu_star)]
        by_word = [r.word for r in sort_by_word(recs)]
        inversions += len(order_inversions(recs)) + (by_mu != by_word)
    elapsed = time.perf_counter() - t0
    ok = inversions == 0 and elapsed < 120
    acceptance("4 order agreement", ok, f"n_max=10, inversions={inversions}, {elapsed:.1f}s")
    assert ok


def test_05_sigma_compatibility(acceptance):
    rng = np.random.default_rng(2008)
    worst = 0.0
    for fam in FAMILIES:
        done = 0
        while done < 100:
            n = int(rng.integers(0, 9))
            word = "".join(rng.choice(list("LR"), n)) if n else ""
            mu = float(rng.uniform(fam.c, 1.0))
            spec = LevelFunction(fam, word)
            try:
                g_eval(spec, mu)
            except DomainViolation:
                continue
            k = int(rng.integers(0, n + 1))
            worst = max(worst, sigma_compat_check(spec, mu, k))
            done += 1
    ok = worst < 1e-9
    acceptance("5 sigma compatibility", ok, f"max residual {worst:.1e} over 200 samples")
    assert ok


def test_06_schwarzian_signs(acceptance):
    bad = []
    mus = np.linspace(0.01, 1.0, 100)
    ts = np.linspace(0.0, 1.0, 101)[:-1]
    for fam in FAMILIES:
        for mu in mus:
            for t in ts:
                y = mu * t
                for side in "LR":
                    x = fam.inverse_branch(mu, side, y)
                    if not fam.schwarzian(mu, x) < 0:
                        bad.append((fam.name, "S(f)", mu, x))
                    if not fam.schwarzian_inverse_branch(mu, side, y) > 0:
                        bad.append((fam.name, "S(inv)", mu, y))
    composed = 0
    for fam in FAMILIES:
        for n in range(1, 9):
            for word in map("".join, itertools.product("LR", repeat=n)):
                for mu in (0.6, 0.8, 1.0):
                    for t in (0.05, 0.35, 0.65, 0.95):
                        try:
                            s = composed_inverse_schwarzian(fam, mu, word, mu * t)
                        except DomainViolation:
                            continue
                        composed += 1
                        if not s > 0:
                            bad.append((fam.name, word, mu, t))
    # at mu = 1 every composition is defined: 2 families x 510 words x 4 points
    ok = not bad and composed >= 4080
    acceptance("6 schwarzian signs", ok, f"{len(bad)} failures, {composed} composed samples")
    assert ok, bad[:5]


@pytest.fixture(scope="module")
def full_sweeps():
    out = {}
    for fam in FAMILIES:
        t0 = time.perf_counter()
        rep = sweep(fam, 0.5, 1.0, 1000, depth=25)
        out[fam.name] = (rep, time.perf_counter() - t0)
    return out


def test_07_kneading_monotone(acceptance):
    t0 = time.perf_counter()
    violations = 0
    for fam in FAMILIES:
        rep = sweep(fam, 0.5, 1.0, 1000, depth=25, with_entropy=False)
        violations += len(rep.kneading_violations)
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60
    acceptance("7 kneading monotonicity", ok, f"{violations} strict decreases, {elapsed:.1f}s")
    assert ok


def test_08_entropy(acceptance, full_sweeps):
    h1 = entropy_estimate(LOGISTIC, 1.0).h_estimate
    h07 = entropy_estimate(LOGISTIC, 0.7).h_estimate
    h3 = entropy_estimate(LOGISTIC, solve_superstable(LOGISTIC, "RLC").mu_star).h_estimate
    worst_drop = 0.0
    violations = 0
    elapsed = 0.0
    for rep, dt in full_sweeps.values():
        violations += len(rep.entropy_violations) + len(rep.kneading_violations)
        worst_drop = max([worst_drop] + [-d for d in rep.entropy_deltas])
        elapsed += dt
    ok = (abs(h1 - math.log(2)) < 1e-3 and h07 < 1e-3 and abs(h3 - LOG_GOLDEN) < 2e-2
          and violations == 0 and worst_drop <= 5e-3 and elapsed < 300)
    acceptance("8 entropy values and monotonicity", ok,
               f"h(1)={h1:.5f} h(0.7)={h07:.1e} h(RLC)={h3:.4f} max drop={worst_drop:.1e} {elapsed:.0f}s")
    assert ok


def test_09_theorem_a_realisation(acceptance):
    errs = [abs(realize_ivt(LOGISTIC, "RLC", 0.81, 1.0) - solve_superstable(LOGISTIC, "RLC").mu_star)]
    rng = np.random.default_rng(15)
    pool = [str(w) for n in range(1, 7) for w in enumerate_kneading(n).enumerated]
    for fam in FAMILIES:
        for word in rng.choice(pool, 10, replace=False):
            mu1 = 0.3 if word == "C" else fam.c + 1e-3
            mu = realize_ivt(fam, word, mu1, 1.0)
            errs.append(abs(mu - solve_superstable(fam, word).mu_star))
    ok = max(errs) < 1e-6
    acceptance("9 theorem A realisation", ok, f"{len(errs)} words, max |diff|={max(errs):.1e}")
    assert ok


CLI_RUNS = [
    ["enumerate", "--n", "8"],
    ["count", "--n", "14", "--all"],
    ["solve", "--family", "logistic", "--word", "RLRRC"],
    ["table", "--family", "sine", "--n-max", "8"],
    ["sweep", "--family", "logistic", "--grid", "1000", "--depth", "25",
     "--max-depth", "200", "--node-cap", "200000"],
    ["entropy", "--family", "sine", "--mu", "0.93"],
    ["check", "--family", "logistic"],
    ["ivt", "--family", "sine", "--word", "RLC", "--mu1", "0.8", "--mu2", "1.0"],
]


def test_10_cli_determinism(acceptance, tmp_path):
    mismatched = []
    for i, argv in enumerate(CLI_RUNS):
        for fmt in ("csv", "json"):
            blobs = []
            for run in range(2):
                path = tmp_path / f"{i}-{fmt}-{run}"
                code = main(argv + ["--format", fmt, "--out", str(path)])
                assert code == 0, argv
                blobs.append(path.read_bytes())
            if blobs[0] != blobs[1]:
                mismatched.append((argv[0], fmt))
    ok = not mismatched
    acceptance("10 CLI determinism", ok, f"{len(CLI_RUNS)} commands x 2 formats, mismatches={mismatched}")
    assert ok
