"""Command-line interface: ``twobit <subcommand> [options]``.

Exit codes: 0 success or pass, 1 domain failure (violation, uncorrected
pattern, no threshold), 2 budget truncation, 64 usage error, 65 malformed
input data, 66 missing input file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .decoders import (
    TwoBitRule,
    UnresolvedScheduleError,
    extract_lookup_tables,
    format_decoder,
    lookup_tables_csv,
    parse_decoder,
)
from .density import find_threshold, sweep_csv, threshold_sweep
from .expansion import (
    DEFAULT_BUDGET,
    FIXTURE_KINDS,
    ExpansionConditionSet,
    FixtureError,
    check_expansion,
    construct_fixture,
)
from .graph import AlistError, read_alist, serialize_alist
from .guarantee import verify_guarantee
from .simulation import FER_CSV_HEADER, SimConfig, estimate_fer, fer_csv, fer_sweep, worker_count

EXIT_OK, EXIT_FAIL, EXIT_TRUNCATED = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _decoder(text: str):
    try:
        return parse_decoder(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args, text: str, payload) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.json else text
    if getattr(args, "out", None):
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _graph(path: str):
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(path)
    return read_alist(p)


# --------------------------------------------------------------------------
# subcommands

def cmd_lut(args) -> int:
    rule = TwoBitRule(args.c, args.s, args.w, strict_override=not args.loose)
    tables = extract_lookup_tables(rule, args.gamma)
    decision = tables.decision if args.all_decisions else tables.decision_flips()
    payload = {
        "rule": format_decoder(rule),
        "gamma": args.gamma,
        "update": [list(r) for r in tables.update] if args.table != "decision" else None,
        "decision": [list(r) for r in decision] if args.table != "update" else None,
    }
    _emit(args, lookup_tables_csv(tables, args.table, flips_only=not args.all_decisions), payload)
    return EXIT_OK


def cmd_threshold(args) -> int:
    res = find_threshold(args.decoder, args.gamma, args.rho, args.precision)
    payload = {
        "decoder": format_decoder(args.decoder),
        "gamma": args.gamma,
        "rho": args.rho,
        "threshold": res.threshold if res.found else None,
        "iterations": res.iterations_at_threshold,
        "schedule": list(res.schedule) if res.schedule else None,
    }
    if res.found:
        text = f"{payload['decoder']} gamma={args.gamma} rho={args.rho} threshold={res.threshold:.5f}"
        if res.schedule:
            text += " schedule=" + ",".join(map(str, res.schedule[:20]))
    else:
        text = f"{payload['decoder']} gamma={args.gamma} rho={args.rho} no threshold found"
    _emit(args, text + "\n", payload)
    return EXIT_OK if res.found else EXIT_FAIL


def cmd_sweep(args) -> int:
    rules = []
    for line in Path(args.rules_file).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                rules.append(parse_decoder(line))
            except ValueError as exc:
                raise UsageError(f"{args.rules_file}: {exc}") from None
    rows = threshold_sweep(rules, args.gamma, args.rho, args.precision, worker_count(args.threads))
    _emit(args, sweep_csv(rows), rows)
    return EXIT_OK if all(r["threshold"] is not None for r in rows) else EXIT_FAIL


def cmd_check_graph(args) -> int:
    g = _graph(args.graph)
    try:
        conds = ExpansionConditionSet.parse(args.conditions)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = check_expansion(g, conds, args.budget, find_all=args.all, workers=worker_count(args.threads))
    payload = {"graph": args.graph, "conditions": conds.name, **rep.to_dict()}
    inconclusive = rep.truncated and not rep.violations and rep.girth6
    status = "PASS" if rep.passed else "TRUNCATED" if inconclusive else "FAIL"
    lines = [f"{args.graph}: {status} ({conds.name})"]
    if not rep.girth6:
        v0, v1, c0, c1 = rep.four_cycle
        lines.append(f"  4-cycle: variables {v0},{v1} share checks {c0},{c1}")
    for subset, k in rep.violations:
        bound = conds.bound(len(subset))
        lines.append(f"  subset {list(subset)} has {k} check neighbors, needs {bound}")
    if rep.truncated:
        lines.append(f"  truncated after {rep.checked_subset_count} subsets")
    _emit(args, "\n".join(lines) + "\n", payload)
    if inconclusive:
        return EXIT_TRUNCATED
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_make_fixture(args) -> int:
    try:
        g = construct_fixture(args.kind, n=args.n, seed=args.seed, m=args.m)
    except FixtureError as exc:
        print(f"make-fixture: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = serialize_alist(g)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.kind} n={g.n_variables} m={g.n_checks} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _graph(args.graph)
    rep = verify_guarantee(g, args.decoder, args.weight, args.iters, args.first_failure,
                           workers=worker_count(args.threads))
    payload = {"graph": args.graph, "decoder": format_decoder(args.decoder), **rep.to_dict()}
    lines = [
        f"{args.graph}: {format_decoder(args.decoder)} weight<={args.weight} iters={args.iters}: "
        f"{rep.patterns_checked} patterns, "
        + ("all corrected" if rep.all_corrected else f"{len(rep.failures)} uncorrected")
    ]
    if rep.classified_counts:
        lines.append("  weight-3 cases: " + ", ".join(f"{k}:{v}" for k, v in rep.classified_counts.items()))
    for p, _ in rep.failures[:50]:
        lines.append(f"  uncorrected {list(p.flipped_variables)}")
    _emit(args, "\n".join(lines) + "\n", payload)
    return EXIT_OK if rep.all_corrected else EXIT_FAIL


def _sim_config(args, decoder: str, alpha: float) -> SimConfig:
    try:
        return SimConfig(
            crossover=alpha,
            trials=args.trials,
            target_errors=args.target_errors if args.target_errors > 0 else None,
            max_iterations=args.max_iters,
            seed=args.seed,
            decoder=decoder,
            fixed_weight=args.fixed_weight,
            random_codeword=args.random_codeword,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    g = _graph(args.graph)
    rep = estimate_fer(g, _sim_config(args, format_decoder(args.decoder), args.alpha), args.threads)
    _emit(args, f"{FER_CSV_HEADER}\n{rep.csv_row()}\n", rep.to_dict())
    return EXIT_OK


def cmd_fer_sweep(args) -> int:
    g = _graph(args.graph)
    decoders = [format_decoder(d) for d in args.decoder]
    base = _sim_config(args, decoders[0] if decoders else "twobit:2,2,1", 0.0)
    reports = fer_sweep(g, decoders, args.alphas, base, args.threads)
    _emit(args, fer_csv(reports), [r.to_dict() for r in reports])
    return EXIT_OK


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes; TWOBIT_THREADS overrides")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")

    p = _Parser(prog="twobit", description="Two-bit LDPC decoders on the binary symmetric channel.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true", default=False)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("lut", parents=[common], help="update and decision lookup tables")
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--gamma", type=int, default=4)
    s.add_argument("--table", choices=("update", "decision", "both"), default="both")
    s.add_argument("--all-decisions", action="store_true",
                   help="list every decision row, not only those that flip the received bit")
    s.add_argument("--loose", action="store_true", help="strong output whenever |t| >= S")
    s.add_argument("--out")
    s.set_defaults(func=cmd_lut)

    s = sub.add_parser("threshold", parents=[common], help="density-evolution threshold")
    s.add_argument("--decoder", type=_decoder, default="twobit:2,2,1")
    s.add_argument("--gamma", type=int, default=4)
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--precision", type=float, default=1e-5)
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("sweep", parents=[common], help="thresholds for a file of decoders")
    s.add_argument("--rules-file", required=True, help="one decoder spec per line")
    s.add_argument("--gamma", type=int, default=4)
    s.add_argument("--rho", type=_ints, required=True, help="comma-separated check degrees")
    s.add_argument("--precision", type=float, default=1e-5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("check-graph", parents=[common], help="certify expansion conditions")
    s.add_argument("graph", help="alist file")
    s.add_argument("--conditions", default="theorem1",
                   help="theorem1, gallagerB-08CKVM or custom:s:b,s:b,...")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--all", action="store_true", help="report every violating subset")
    s.set_defaults(func=cmd_check_graph)

    s = sub.add_parser("make-fixture", parents=[common], help="generate a test graph")
    s.add_argument("--kind", choices=FIXTURE_KINDS, required=True)
    s.add_argument("--n", type=int, default=40)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_make_fixture)

    s = sub.add_parser("verify", parents=[common], help="exhaustive low-weight correction check")
    s.add_argument("graph")
    s.add_argument("--decoder", type=_decoder, default="twobit:2,2,1")
    s.add_argument("--weight", type=int, default=3)
    s.add_argument("--iters", type=int, default=3)
    s.add_argument("--first-failure", action="store_true")
    s.set_defaults(func=cmd_verify)

    def sim_options(s):
        s.add_argument("graph")
        s.add_argument("--trials", type=int, default=10_000)
        s.add_argument("--target-errors", type=int, default=100, help="0 disables early stopping")
        s.add_argument("--max-iters", type=int, default=100)
        s.add_argument("--fixed-weight", type=int, default=None)
        s.add_argument("--random-codeword", action="store_true")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo FER at one crossover")
    sim_options(s)
    s.add_argument("--decoder", type=_decoder, default="twobit:2,2,1")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("fer-sweep", parents=[common], help="FER over decoders x crossovers")
    sim_options(s)
    s.add_argument("--decoder", type=_decoder, action="append", required=True,
                   help="repeat for several decoders")
    s.add_argument("--alphas", type=_floats, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fer_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"twobit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"twobit {args.command}: no such file: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except AlistError as exc:
        print(f"twobit {args.command}: malformed alist: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UnresolvedScheduleError, ValueError) as exc:
        print(f"twobit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
