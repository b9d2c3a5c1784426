"""Command-line entry point.

Subcommands wire the library end to end: ``match`` writes a value-match
report, ``integrate`` produces the integrated table (fuzzy by default,
``--regular`` for plain equality joins), ``eval`` scores a match report
against gold pairs, and ``bench`` runs the scaling benchmark.

Exit codes are stable: 0 success, 1 runtime failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import evaluation
from .embedding import DictionaryEmbedder, EmbeddingProvider, NgramEmbedder, RemoteEmbedder
from .errors import (AlignmentError, EmbeddingError, FuzzyFDError, GoldFormatError,
                     PermutationCapError, TableFormatError)
from .fd import DEFAULT_PERMUTATION_CAP, full_disjunction, write_integrated
from .matching import (DEFAULT_THETA, MatcherConfig, match_all, read_match_report,
                       rewrite_tables, write_match_report)
from .tables import DEFAULT_NULL_MARKERS, load_relation_set

log = logging.getLogger("fuzzyfd")

REMOTE_URL_ENV = "FUZZYFD_EMBED_URL"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def make_provider(spec: str) -> EmbeddingProvider:
    """Build a provider from ``ngram``, ``dictionary:<path>`` or ``remote:<url>``.

    The ``FUZZYFD_EMBED_URL`` environment variable overrides the remote
    URL when set.
    """
    kind, _, arg = spec.partition(":")
    if kind == "ngram":
        return NgramEmbedder()
    if kind == "dictionary":
        if not arg:
            raise EmbeddingError("dictionary provider needs a path: dictionary:<path>")
        return DictionaryEmbedder.from_json_file(arg)
    if kind == "remote":
        url = os.environ.get(REMOTE_URL_ENV) or arg
        if not url:
            raise EmbeddingError(
                f"remote provider needs a URL: remote:<url> or ${REMOTE_URL_ENV}"
            )
        return RemoteEmbedder(url)
    raise EmbeddingError(f"unknown provider {spec!r} (expected ngram, dictionary:, remote:)")


def _add_input_args(p: argparse.ArgumentParser, *, tables_required: bool = True) -> None:
    p.add_argument("--tables", nargs="*" if not tables_required else "+", default=[],
                   metavar="CSV", help="input tables, integration order = table ids")
    p.add_argument("--alignment", required=True, metavar="JSON",
                   help="alignment spec: attribute -> aligned columns")
    p.add_argument("--delimiter", default=",", help="cell delimiter (default ,)")
    p.add_argument("--null-marker", action="append", default=[], metavar="TEXT",
                   help="extra cell spelling treated as null (repeatable)")


def _add_matcher_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float, default=DEFAULT_THETA,
                   help="match threshold on cosine distance (default 0.7)")
    p.add_argument("--provider", default="ngram",
                   help="ngram | dictionary:<path> | remote:<url>")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="attribute-matching workers (default: machine parallelism)")


def _load_set(args):
    markers = list(DEFAULT_NULL_MARKERS) + list(args.null_marker)
    return load_relation_set(args.tables, args.alignment,
                             delimiter=args.delimiter, null_markers=markers)


def _run_matching(args, relset):
    provider = make_provider(args.provider)
    config = MatcherConfig(provider=provider, theta=args.theta)
    return match_all(relset, config, jobs=args.jobs)


def cmd_match(args) -> int:
    relset = _load_set(args)
    result = _run_matching(args, relset)
    write_match_report(result, args.out)
    n_sets = sum(len(m.sets) for m in result.attributes.values())
    n_merged = sum(1 for m in result.attributes.values()
                   for s in m.sets if len(s.members) > 1)
    print(f"matched {len(result.attributes)} attributes: "
          f"{n_sets} value sets ({n_merged} with matches) -> {args.out}")
    return EXIT_OK


def cmd_integrate(args) -> int:
    relset = _load_set(args)
    if args.regular:
        working = relset
    else:
        result = _run_matching(args, relset)
        if args.match_report:
            write_match_report(result, args.match_report)
        working = rewrite_tables(relset, result.representative_map())
    integrated = full_disjunction(working, perm_cap=args.perm_cap)
    write_integrated(integrated, args.out, delimiter=args.delimiter,
                     include_provenance=args.provenance)
    mode = "regular" if args.regular else "fuzzy"
    print(f"{mode} integration: {sum(t.n_rows for t in relset.tables)} input tuples "
          f"-> {len(integrated)} integrated tuples -> {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    predicted = read_match_report(args.report)
    gold = evaluation.load_gold(args.gold)
    report = evaluation.matching_prf(predicted, gold)
    rows = list(report.per_attribute.items()) + [("macro", report.macro),
                                                 ("micro", report.micro)]
    width = max(len(name) for name, _ in rows)
    print(f"{'attribute':<{width}}  precision  recall  f1")
    for name, score in rows:
        print(f"{name:<{width}}  {score.precision:9.3f}  {score.recall:6.3f}  {score.f1:6.3f}")
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.out:
        import json
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    report = evaluation.bench_scaling(
        sizes, modes=modes, repeats=args.repeats, overlap=args.overlap,
        corruption=args.corruption, theta=args.theta, seed=args.seed,
        timeout_seconds=args.timeout, perm_cap=args.perm_cap,
    )
    os.makedirs(args.out_dir, exist_ok=True)
    evaluation.write_bench_csv(report, os.path.join(args.out_dir, "bench.csv"))
    evaluation.write_bench_series(report, os.path.join(args.out_dir, "bench_series.csv"))
    evaluation.write_bench_json(report, os.path.join(args.out_dir, "bench.json"))
    print(f"{'size':>8}  {'regular_s':>10}  {'fuzzy_s':>10}  {'matcher_s':>10}")
    for p in report.points:
        def fmt(v):
            return f"{v:10.3f}" if v is not None else " " * 10
        flag = "  (censored)" if p.censored else ""
        print(f"{p.size:>8}  {fmt(p.regular_seconds)}  {fmt(p.fuzzy_seconds)}  "
              f"{fmt(p.matcher_seconds)}{flag}")
    print(f"wrote bench.csv, bench_series.csv, bench.json -> {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzyfd",
        description="Integrate tables whose join values disagree in surface form",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="resolve fuzzy value matches, write a report")
    _add_input_args(p)
    _add_matcher_args(p)
    p.add_argument("--out", required=True, help="match report (JSON) output path")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("integrate", help="produce the integrated table")
    _add_input_args(p, tables_required=False)
    _add_matcher_args(p)
    p.add_argument("--out", required=True, help="integrated table (CSV) output path")
    p.add_argument("--regular", action="store_true",
                   help="skip value matching, join on exact equality only")
    p.add_argument("--provenance", action="store_true",
                   help="append a provenance column listing contributing table:row pairs")
    p.add_argument("--match-report", default=None,
                   help="also write the match report here")
    p.add_argument("--perm-cap", type=int, default=DEFAULT_PERMUTATION_CAP,
                   help="refuse sets with more tables than this (default 7)")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("eval", help="score a match report against gold pairs")
    p.add_argument("--report", required=True, help="match report from the match command")
    p.add_argument("--gold", required=True, help="gold pairs JSON")
    p.add_argument("--out", default=None, help="optional JSON score output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time regular vs fuzzy integration across sizes")
    p.add_argument("--sizes", default="5000,10000,20000,30000",
                   help="comma-separated input tuple counts")
    p.add_argument("--modes", default="regular,fuzzy")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--overlap", type=float, default=0.5,
                   help="chance an entity appears in a given table")
    p.add_argument("--corruption", type=float, default=0.0,
                   help="chance a repeated occurrence is a typo variant")
    p.add_argument("--theta", type=float, default=DEFAULT_THETA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=None,
                   help="per-run budget in seconds; slower points are censored")
    p.add_argument("--perm-cap", type=int, default=DEFAULT_PERMUTATION_CAP)
    p.add_argument("--out-dir", default="bench_out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except PermutationCapError as exc:
        print(f"error: {exc} (use --perm-cap to allow more tables)", file=sys.stderr)
        return EXIT_USAGE
    except (TableFormatError, AlignmentError, GoldFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmbeddingError as exc:
        # Misconfigured providers are usage errors; live transport
        # failures against a configured service are runtime failures.
        from .errors import RemoteEmbeddingError
        code = EXIT_RUNTIME if isinstance(exc, RemoteEmbeddingError) else EXIT_USAGE
        print(f"error: {exc}", file=sys.stderr)
        return code
    except FuzzyFDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
