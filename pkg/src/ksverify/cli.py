"""Command-line interface.

Exit status: 0 on success or the expected verdict, 1 on usage or input errors,
2 when an internal consistency check fails (including a SAT verdict, which
would mean the construction is wrong).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .coloring import (
    MODES,
    Assignment,
    export_dimacs,
    max_satisfiable,
    pattern_valid,
    prove_noncolorable,
    uncovered_pairs,
)
from .geometry import (
    NUM_COMPLETIONS,
    NUM_RAYS,
    ConstructionError,
    build_ray_system,
    enumerate_bases,
    orthogonal_pairs,
)
from .protocol import SCHEDULES, Predictor, ProtocolError, refute, run_campaign
from .rng import SplitMix64

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_predictor_file(path: str | Path) -> Assignment:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read predictor file: {exc}") from None
    bits = "".join(text.split())
    if set(bits) - {"0", "1"}:
        raise UsageError("predictor file may contain only '0', '1' and whitespace")
    if len(bits) == NUM_RAYS:
        return Assignment(tuple(map(int, bits)))
    if len(bits) == NUM_RAYS + NUM_COMPLETIONS:
        return Assignment(tuple(map(int, bits[:NUM_RAYS])), tuple(map(int, bits[NUM_RAYS:])))
    raise UsageError(
        f"predictor file has {len(bits)} bits; expected {NUM_RAYS} "
        f"(or {NUM_RAYS + NUM_COMPLETIONS} with completing directions)"
    )


def parse_predictor(source: str) -> Predictor:
    """``all_ones``, ``all_zeros``, ``random:SEED``, ``file:PATH`` or a bare path."""
    if source == "all_ones":
        return Predictor(Assignment.constant(1), source)
    if source == "all_zeros":
        return Predictor(Assignment.constant(0), source)
    if source.startswith("random:"):
        try:
            seed = int(source.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad random predictor seed in {source!r}") from None
        return Predictor(Assignment(SplitMix64(seed).bits(NUM_RAYS)), source)
    path = source[5:] if source.startswith("file:") else source
    return Predictor(read_predictor_file(path), f"file:{path}")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_rays(args) -> int:
    rs = build_ray_system()
    rays = rs.directions if args.completions else rs.rays
    if args.format == "records":
        sys.stdout.write(formats.rays_records(rays))
    else:
        sys.stdout.write(formats.rays_table(rays))
    return EXIT_OK


def cmd_triples(args) -> int:
    rs = build_ray_system()
    bases = enumerate_bases(rs)
    if args.format == "records":
        sys.stdout.write(formats.triples_records(bases))
    else:
        sys.stdout.write(formats.triples_table(bases, rs))
    return EXIT_OK


def cmd_verify(args) -> int:
    rs = build_ray_system()
    bases = enumerate_bases(rs)
    pairs = []
    if args.mode == "triples_and_pairs":
        pairs = uncovered_pairs(bases, orthogonal_pairs(rs.directions))
    report = prove_noncolorable(bases, pairs)
    lines = [
        f"result: {report.result}",
        f"mode: {args.mode}",
        f"bases: {len(bases)}",
        f"extra_pairs: {len(pairs)}",
        f"nodes_visited: {report.nodes_visited}",
        f"max_depth: {report.max_depth}",
    ]
    if report.witness is not None:
        lines.append(f"witness: {report.witness.to_string()}")
    if args.timing:
        lines.append(f"elapsed_s: {report.elapsed:.6f}")
    print("\n".join(lines))
    return EXIT_OK if report.result == "UNSAT" else EXIT_INTERNAL


def cmd_cnf(args) -> int:
    rs = build_ray_system()
    bases = enumerate_bases(rs)
    doc = export_dimacs(bases, args.mode, orthogonal_pairs(rs.directions))
    _emit(doc.render(), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    predictors = [parse_predictor(s) for s in args.predictor]
    report = run_campaign(
        args.trials, args.seed, args.schedule, predictors, keep_trials=args.verbose
    )
    sys.stdout.write(report.to_text())
    if report.invalid_patterns or report.twin_agreement_rate != 1.0:
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_refute(args) -> int:
    p = parse_predictor(args.predictor)
    rec = refute(p, rng=SplitMix64(args.seed))
    print(f"predictor: {rec.predictor}")
    print(f"k: {rec.k}")
    print(f"predicted: {''.join(map(str, rec.predicted))}")
    print(f"measured: {''.join(map(str, rec.measured))}")
    return EXIT_OK


def cmd_maxsat(args) -> int:
    bases = enumerate_bases(build_ray_system())
    count, witness = max_satisfiable(bases)
    failing = [b.rank for b in bases if not pattern_valid(witness.triple(b))]
    print(f"max_valid_bases: {count}")
    print(f"bases: {len(bases)}")
    print(f"failing_keys: {' '.join(map(str, failing))}")
    print(f"witness: {witness.to_string()}")
    return EXIT_OK if count < len(bases) else EXIT_INTERNAL


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ksverify",
        description="Exact checks and simulations for the 33-direction, 40-triple configuration.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rays", help="list the 33 symmetry axes")
    p.add_argument("--format", choices=formats.FORMATS, default="table")
    p.add_argument("--completions", action="store_true",
                   help="also list the 24 completing directions")
    p.set_defaults(func=cmd_rays)

    p = sub.add_parser("triples", help="list the 40 orthogonal triples in key order")
    p.add_argument("--format", choices=formats.FORMATS, default="table")
    p.set_defaults(func=cmd_triples)

    p = sub.add_parser("verify", help="search for an assignment valid on every triple")
    p.add_argument("--mode", choices=MODES[:2], default="triples_only")
    p.add_argument("--timing", action="store_true", help="report wall-clock time")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cnf", help="write the constraints as DIMACS CNF")
    p.add_argument("--mode", choices=MODES, default="triples_only")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_cnf)

    p = sub.add_parser("simulate", help="run a seeded twin-experiment campaign")
    p.add_argument("--trials", type=_pos_int, required=True)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--schedule", choices=SCHEDULES, default="random")
    p.add_argument("--predictor", action="append", default=[],
                   help="predictor to refute after the trials (repeatable)")
    p.add_argument("--verbose", action="store_true", help="include every trial record")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("refute", help="run the 40-key protocol against a predictor")
    p.add_argument("--predictor", required=True,
                   help="all_ones, all_zeros, random:SEED, file:PATH or a path")
    p.add_argument("--seed", type=_nonneg_int, required=True,
                   help="seed for the measured triple")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("maxsat", help="most triples one assignment can satisfy")
    p.set_defaults(func=cmd_maxsat)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ksverify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, ProtocolError) as exc:
        print(f"ksverify: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
