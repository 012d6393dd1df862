"""``er-lab`` command line.

Exit codes: 0 success, 1 usage error, 2 a verification/report comparison failed.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from fractions import Fraction

from . import bounds as bnd
from .components import component_profile
from .experiments import ExperimentConfig, decimal_grid, run_experiment, verify_bound_dominance
from .oracle import MAX_EXACT_N, exact_component_distribution
from .sampler import SampleSpec, read_edge_list, sample_gnp, write_edge_list

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _grid(text: str) -> list[Fraction]:
    """Comma list "0.1,0.5" or inclusive range "start:stop:step"."""
    try:
        if ":" in text:
            start, stop, step = text.split(":")
            return decimal_grid(start, stop, step)
        return [Fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad p grid: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="er-lab", description="Component-counting experiments on G(n, p).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="draw one G(n, p) and write its edge list")
    s.add_argument("--n", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=float)
    g.add_argument("--C", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output path (default: stdout)")

    c = sub.add_parser("components", help="print the component size profile of an edge-list file")
    c.add_argument("--in", dest="infile", required=True)

    e = sub.add_parser("exact", help="exact P(#C_1 = r) against the tree bound, as CSV")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--p", type=_rational, required=True)

    b = sub.add_parser("bounds", help="tree, simplified and exact log-bounds per r, as CSV")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--C", type=_rational, required=True)
    b.add_argument("--r-max", type=int, default=None)

    x = sub.add_parser("experiment", help="run a Monte Carlo experiment from a JSON config")
    x.add_argument("--config", required=True)
    x.add_argument("--out-dir", default=".", help="where report.csv and trials.csv go")

    v = sub.add_parser("verify", help="tree-bound dominance over n <= n-max and a p grid")
    v.add_argument("--n-max", type=int, default=12)
    v.add_argument("--p-grid", type=_grid, default=decimal_grid("0.05", "0.95", "0.05"))
    return parser


def _cmd_sample(args, out) -> int:
    spec = SampleSpec(args.n, args.p, args.seed) if args.p is not None else SampleSpec.from_C(args.n, args.C, args.seed)
    g = sample_gnp(spec)
    if args.out:
        write_edge_list(g, args.out)
    else:
        write_edge_list(g, out)
    return EXIT_OK


def _cmd_components(args, out) -> int:
    profile = component_profile(read_edge_list(args.infile))
    out.write(" ".join(map(str, profile.sizes)) + "\n")
    return EXIT_OK


def _cmd_exact(args, out) -> int:
    dist = exact_component_distribution(args.n, args.p)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["r", "exact_prob", "tree_bound", "ratio"])
    for r, pr in enumerate(dist.probs, start=1):
        tb = bnd.tree_bound_exact(args.n, args.p, r)
        w.writerow([r, _fmt(pr), _fmt(tb), _fmt(pr / tb) if tb else ""])
    return EXIT_OK


def _cmd_bounds(args, out) -> int:
    n, C = args.n, args.C
    if n < 1 or C < 0 or C > n:
        raise UsageError("need n >= 1 and 0 <= C <= n")
    exact = exact_component_distribution(n, C / n).probs if 2 <= n <= MAX_EXACT_N else None
    report = bnd.bound_table(n, C, args.r_max, exact)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["r", "log_tree_bound", "log_simplified_bound", "exact_log_prob", "dominance_ok"])
    for row in report.rows:
        w.writerow([
            row.r,
            _fmt(row.log_tree_bound),
            _fmt(row.log_simplified_bound),
            _fmt(row.exact_log_prob),
            str(row.dominance_ok).lower(),
        ])
    return EXIT_OK if report.ok else EXIT_FAILED


def _cmd_experiment(args, out) -> int:
    config = ExperimentConfig.from_json(args.config)
    report = run_experiment(config)
    os.makedirs(args.out_dir, exist_ok=True)
    text = report.report_csv()
    with open(os.path.join(args.out_dir, "report.csv"), "w", newline="") as fh:
        fh.write(text)
    with open(os.path.join(args.out_dir, "trials.csv"), "w", newline="") as fh:
        fh.write(report.trials_csv())
    out.write(text)
    print(f"{config.trials} trials in {report.runtime_s:.2f}s", file=sys.stderr)
    return EXIT_FAILED if report.failed else EXIT_OK


def _cmd_verify(args, out) -> int:
    report = verify_bound_dominance(args.n_max, args.p_grid)
    bad = report.violations
    out.write(f"checked {len(report.rows)} (n, p, r) triples, {len(bad)} violations\n")
    for row in bad:
        out.write(f"violation n={row.n} p={row.p!r} r={row.r} log_tree={row.log_tree_bound!r} log_exact={row.exact_log_prob!r}\n")
    return EXIT_FAILED if bad else EXIT_OK


COMMANDS = {
    "sample": _cmd_sample,
    "components": _cmd_components,
    "exact": _cmd_exact,
    "bounds": _cmd_bounds,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"er-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
