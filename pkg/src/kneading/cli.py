"""Command-line interface.

Exit codes: 0 success, 2 verification-level violation, 3 solver failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from . import entropy as ent
from .enumeration import count_kneading, enumerate_kneading
from .errors import (
    InvariantError,
    KneadingError,
    ParseError,
    PreconditionError,
    RangeError,
    SolveFailure,
)
from .family import TOL_C, check_class_C, default_mu_grid, default_x_grid, get_family
from .inverse_iteration import (
    CSV_HEADER,
    order_inversions,
    realize_ivt,
    solve_superstable,
    superstable_table,
)
from .words import first_non_maximal_shift, parse_word

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_SOLVER = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    return f"{x:.17g}"


@dataclass
class RunConfig:
    command: str
    family: str = "logistic"
    fmt: str = "csv"
    out: str | None = None
    tol_c: float = TOL_C
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if not self.tol_c > 0:
            raise UsageError("tolerances must be positive")
        for key in ("mu_min", "mu_max", "mu", "mu1", "mu2"):
            v = self.params.get(key)
            if v is not None and not 0.0 < v <= 1.0 and not (key == "mu1" and v == 0.0):
                raise UsageError(f"--{key.replace('_', '-')} must lie in (0, 1]")
        for key in ("entropy_tol",):
            v = self.params.get(key)
            if v is not None and not v > 0:
                raise UsageError("tolerances must be positive")


class Output:
    """Collects rows or a JSON document and writes them in one go."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.buf = io.StringIO()
        self.writer = csv.writer(self.buf, lineterminator="\n")

    def row(self, *cells):
        self.writer.writerow(cells)

    def document(self, obj):
        self.buf.write(json.dumps(obj, indent=2, sort_keys=True))
        self.buf.write("\n")

    def flush(self):
        text = self.buf.getvalue()
        if self.cfg.out:
            with open(self.cfg.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _family(cfg):
    try:
        return get_family(cfg.family)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def cmd_enumerate(cfg: RunConfig) -> int:
    n = cfg.params["n"]
    if not 1 <= n <= 20:
        raise UsageError("--n must lie in [1, 20]")
    census = enumerate_kneading(n, check=False)
    words = [str(w) for w in census.enumerated]
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document({"n": n, "count_formula": census.formula_count,
                      "count_enumerated": len(words), "words": words})
    else:
        out.row("n", "count_formula", "count_enumerated")
        out.row(n, census.formula_count, len(words))
        for w in words:
            out.row(w)
    out.flush()
    return EXIT_OK if census.agrees else EXIT_VIOLATION


def cmd_count(cfg: RunConfig) -> int:
    n = cfg.params["n"]
    if not 1 <= n <= 62:
        raise UsageError("--n must lie in [1, 62]")
    ns = range(1, n + 1) if cfg.params.get("all") else [n]
    rows = [(k, count_kneading(k)) for k in ns]
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document([{"n": k, "count": v} for k, v in rows])
    else:
        out.row("n", "count")
        for k, v in rows:
            out.row(k, v)
    out.flush()
    return EXIT_OK


def _parse_kneading_word(text):
    try:
        w = parse_word(text)
    except (ParseError, InvariantError) as exc:
        raise UsageError(str(exc)) from None
    if not w.is_terminal:
        raise UsageError(f"{w} does not end in C")
    k = first_non_maximal_shift(w)
    if k is not None:
        raise UsageError(f"{w} is not shift-maximal: shift {k} gives {w[k:]}")
    return w


def _records_out(cfg, records):
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document([{"word": r.word, "mu_star": r.mu_star, "residual": r.residual,
                       "bracket_width": r.bracket} for r in records])
    else:
        out.row(*CSV_HEADER)
        for r in records:
            out.row(*r.csv_row())
    out.flush()


def cmd_solve(cfg: RunConfig) -> int:
    fam = _family(cfg)
    w = _parse_kneading_word(cfg.params["word"])
    rec = solve_superstable(fam, w)
    _records_out(cfg, [rec])
    return EXIT_OK


def cmd_table(cfg: RunConfig) -> int:
    fam = _family(cfg)
    n_max = cfg.params["n_max"]
    if not 1 <= n_max <= 12:
        raise UsageError("--n-max must lie in [1, 12]")
    try:
        records = superstable_table(fam, n_max)
    except InvariantError as exc:
        print(f"order violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    _records_out(cfg, records)
    return EXIT_OK if not order_inversions(records) else EXIT_VIOLATION


def cmd_sweep(cfg: RunConfig) -> int:
    fam = _family(cfg)
    p = cfg.params
    if not p["mu_min"] < p["mu_max"]:
        raise UsageError("--min must be below --max")
    if p["grid"] < 2 or p["depth"] < 1 or p["max_depth"] < 5 or p["node_cap"] < 1:
        raise UsageError("--grid >= 2, --depth >= 1, --max-depth >= 5, --node-cap >= 1")
    rep = ent.sweep(fam, p["mu_min"], p["mu_max"], p["grid"], p["depth"],
                    max_depth=p["max_depth"], node_cap=p["node_cap"], tol_c=cfg.tol_c,
                    entropy_tol=p["entropy_tol"], with_entropy=not p["no_entropy"])
    entropies = rep.entropies or [None] * len(rep.mus)
    depths = rep.depths or [None] * len(rep.mus)
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document({
            "family": rep.family,
            "points": [{"mu": m, "kneading_word": str(w), "entropy": h, "lap_depth_reached": d}
                       for m, w, h, d in zip(rep.mus, rep.words, entropies, depths)],
            "kneading_violations": [list(v) for v in rep.kneading_violations],
            "entropy_violations": [list(v) for v in rep.entropy_violations],
        })
    else:
        out.row("mu", "kneading_word", "entropy", "lap_depth_reached")
        for m, w, h, d in zip(rep.mus, rep.words, entropies, depths):
            out.row(_num(m), str(w), "" if h is None else _num(h), "" if d is None else d)
    out.flush()

    vbuf = io.StringIO()
    vw = csv.writer(vbuf, lineterminator="\n")
    vw.writerow(["kind", "i", "j", "detail"])
    for i, j, a, b in rep.kneading_violations:
        vw.writerow(["kneading", i, j, f"{a}>{b}"])
    for i, j, d in rep.entropy_violations:
        vw.writerow(["entropy", i, j, _num(d)])
    if p.get("violations"):
        with open(p["violations"], "w", newline="") as fh:
            fh.write(vbuf.getvalue())
    elif not rep.monotone:
        sys.stderr.write(vbuf.getvalue())
    return EXIT_OK if rep.monotone else EXIT_VIOLATION


def cmd_entropy(cfg: RunConfig) -> int:
    fam = _family(cfg)
    p = cfg.params
    if p["max_depth"] < 5 or p["node_cap"] < 1:
        raise UsageError("--max-depth >= 5 and --node-cap >= 1")
    rep = ent.entropy_estimate(fam, p["mu"], p["max_depth"], p["node_cap"])
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document({"mu": rep.mu, "entropy": rep.h_estimate, "lap_depth_reached": rep.depth,
                      "cap_hit": rep.cap_hit, "lap_counts": rep.lap_counts})
    else:
        out.row("mu", "entropy", "lap_depth_reached", "cap_hit")
        out.row(_num(rep.mu), _num(rep.h_estimate), rep.depth, int(rep.cap_hit))
    out.flush()
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    fam = _family(cfg)
    p = cfg.params
    if p["mu_points"] < 1 or p["x_points"] < 1:
        raise UsageError("grid sizes must be positive")
    rep = check_class_C(fam, default_mu_grid(fam, p["mu_points"]), default_x_grid(p["x_points"]))
    results = [("property1_unique_fixed_point", rep.property1_ok),
               ("property2_negative_schwarzian_sufficient", rep.property2_sufficient_ok),
               ("property3_inverse_branch_schwarzian_positive", rep.property3_ok)]
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document({"family": rep.family, "mu_samples": len(rep.mu_samples),
                      **{k: v for k, v in results},
                      "witnesses": [list(w) for w in rep.witnesses]})
    else:
        out.row("property", "ok")
        for k, v in results:
            out.row(k, int(v))
        for w in rep.witnesses:
            out.row("witness", *["" if x is None else x for x in w])
    out.flush()
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_ivt(cfg: RunConfig) -> int:
    fam = _family(cfg)
    p = cfg.params
    w = _parse_kneading_word(p["word"])
    try:
        mu = realize_ivt(fam, w, p["mu1"], p["mu2"], p["depth"], cfg.tol_c)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    out = Output(cfg)
    if cfg.fmt == "json":
        out.document({"word": str(w), "mu": mu, "mu1": p["mu1"], "mu2": p["mu2"]})
    else:
        out.row("word", "mu", "mu1", "mu2")
        out.row(str(w), _num(mu), _num(p["mu1"]), _num(p["mu2"]))
    out.flush()
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "count": cmd_count,
    "solve": cmd_solve,
    "table": cmd_table,
    "sweep": cmd_sweep,
    "entropy": cmd_entropy,
    "check": cmd_check,
    "ivt": cmd_ivt,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kneading", description="Kneading sequences of unimodal families.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, family=True):
        p = sub.add_parser(name, help=help)
        if family:
            p.add_argument("--family", default="logistic", help="logistic or sine")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write to this path instead of stdout")
        p.add_argument("--tol-c", type=float, default=TOL_C,
                       help="band around c that counts as a hit (default 1e-9)")
        return p

    p = add("enumerate", "list kneading words of one length", family=False)
    p.add_argument("--n", type=int, required=True)

    p = add("count", "closed-form number of kneading words", family=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--all", action="store_true", help="list every length up to --n")

    p = add("solve", "superstable parameter of one word")
    p.add_argument("--word", required=True)

    p = add("table", "superstable parameters of every word up to a length")
    p.add_argument("--n-max", type=int, required=True)

    p = add("sweep", "kneading words and entropy over a parameter grid")
    p.add_argument("--min", dest="mu_min", type=float, default=0.5)
    p.add_argument("--max", dest="mu_max", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--depth", type=int, default=25)
    p.add_argument("--max-depth", type=int, default=ent.MAX_DEPTH)
    p.add_argument("--node-cap", type=int, default=ent.NODE_CAP)
    p.add_argument("--entropy-tol", type=float, default=ent.ENTROPY_TOL)
    p.add_argument("--no-entropy", action="store_true", help="kneading words only")
    p.add_argument("--violations", help="write the violations CSV here")

    p = add("entropy", "lap-growth entropy estimate at one parameter")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--max-depth", type=int, default=ent.MAX_DEPTH)
    p.add_argument("--node-cap", type=int, default=ent.NODE_CAP)

    p = add("check", "sampled class-C checks")
    p.add_argument("--mu-points", type=int, default=100)
    p.add_argument("--x-points", type=int, default=200)

    p = add("ivt", "realise a word between two parameters by bisection")
    p.add_argument("--word", required=True)
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--depth", type=int, default=25)
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    cfg = RunConfig(command, family=args.pop("family", "logistic"), fmt=args.pop("fmt"),
                    out=args.pop("out"), tol_c=args.pop("tol_c"), params=args)
    try:
        cfg.validate()
        return COMMANDS[command](cfg)
    except (UsageError, RangeError, PreconditionError) as exc:
        print(f"kneading {command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolveFailure as exc:
        print(f"kneading {command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except KneadingError as exc:
        print(f"kneading {command}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
