"""Command line driver: ingest corpora, export community reports, generate
synthetic test corpora, and run the query service.

Exit codes: 0 success, 1 runtime failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import socket
import sys
import time

from citetree.errors import CiteTreeError
from citetree.ingest import export_corpus, ingest_corpus
from citetree.metrics import Verdict, detect_communities, format_report
from citetree.model import MatrixConvention
from citetree.service import ServiceConfig, ServiceState, create_app
from citetree.store import DEFAULT_MAX_ADVISORS, snapshot_load, snapshot_save
from citetree.synth import generate_plan, write_plan


def _add_metric_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold-lower", type=float, default=None,
                        help="override the lower threshold bound")
    parser.add_argument("--threshold-upper", type=float, default=None,
                        help="override the upper threshold bound")
    parser.add_argument("--include-self", action="store_true",
                        help="count self-citations in an author's total")
    parser.add_argument("--no-siblings", action="store_true",
                        help="exclude siblings from the genealogical member sets")
    parser.add_argument("--min-mutual", type=int, default=1,
                        help="citations per direction for a copious pair (default 1)")


def _service_config(args: argparse.Namespace, cors: tuple[str, ...] = ("*",)) -> ServiceConfig:
    lower, upper = args.threshold_lower, args.threshold_upper
    if lower is not None and upper is not None and lower > upper:
        raise ValueError(f"--threshold-lower {lower} exceeds --threshold-upper {upper}")
    for name, value in (("--threshold-lower", lower), ("--threshold-upper", upper)):
        if value is not None and not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    if args.min_mutual < 1:
        raise ValueError("--min-mutual must be at least 1")
    return ServiceConfig(
        threshold_lower=lower,
        threshold_upper=upper,
        include_self=args.include_self,
        include_siblings=not args.no_siblings,
        min_each_direction=args.min_mutual,
        cors_origins=cors,
    )


def cmd_ingest(args: argparse.Namespace) -> int:
    if args.author_pairs is not None:
        if args.articles is not None or args.citations is not None:
            raise ValueError("--author-pairs replaces the articles and citations files")
    elif args.articles is None or args.citations is None:
        raise ValueError("need an articles file and a citations file, or --author-pairs")

    snapshot, resolution = ingest_corpus(
        args.authors,
        article_file=args.articles,
        citation_file=args.citations,
        author_pairs_file=args.author_pairs,
        convention=MatrixConvention(args.convention),
        max_advisors=args.max_advisors,
    )
    snapshot_save(snapshot, args.out)
    print(
        f"authors={snapshot.author_count} articles={snapshot.article_count} "
        f"citations={len(snapshot.cited_by)} advisor_edges={len(snapshot.parent_of)}"
    )
    cases = resolution.case_counts()
    print("cases: " + " ".join(f"{name}={count}" for name, count in sorted(cases.items())))
    print(f"snapshot written to {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = _service_config(args)
    snapshot = snapshot_load(args.snapshot)
    started = time.perf_counter()
    state = ServiceState.from_snapshot(snapshot, config)
    reports = detect_communities(
        snapshot,
        state.matrix,
        state.threshold,
        members=config.members,
        include_self=config.include_self,
        min_each_direction=config.min_each_direction,
    )
    elapsed_ms = int((time.perf_counter() - started) * 1000)

    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(format_report(reports, snapshot))
    else:
        sys.stdout.write(format_report(reports, snapshot))
    flagged = sum(1 for r in reports if r.verdict is Verdict.LINEAGE_DEPENDENT)
    print(f"threshold lower={state.threshold.lower} upper={state.threshold.upper}")
    print(f"lineage_dependent={flagged}")
    print(f"N={snapshot.author_count} elapsed_ms={elapsed_ms}")
    return 0


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    plan = generate_plan(
        args.authors,
        n_cartels=args.cartels,
        seed=args.seed,
        intensity=args.intensity,
    )
    write_plan(plan, args.out)
    print(
        f"authors={len(plan.author_names)} articles={len(plan.articles)} "
        f"citations={len(plan.citations)} cartels={len(plan.cartels)}"
    )
    print(f"corpus written to {args.out}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    snapshot = snapshot_load(args.snapshot)
    export_corpus(snapshot, args.out)
    print(f"corpus files written to {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    config = _service_config(args, cors=tuple(args.cors_origin))
    snapshot = snapshot_load(args.snapshot)
    state = ServiceState.from_snapshot(snapshot, config)
    app = create_app(state)

    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"--listen must look like HOST:PORT, got {args.listen!r}")
    port = int(port_text)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    finally:
        probe.close()

    import uvicorn

    print(f"serving {args.snapshot} ({snapshot.author_count} authors) on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citetree",
        description="Academic genealogy citation analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse a corpus and write a snapshot")
    ingest.add_argument("authors", help="authors file (JSON lines)")
    ingest.add_argument("articles", nargs="?", default=None, help="articles file (JSON lines)")
    ingest.add_argument("citations", nargs="?", default=None,
                        help="citations file (citing cited, one pair per line)")
    ingest.add_argument("--author-pairs", default=None,
                        help="pair-count file replacing articles and citations")
    ingest.add_argument("--convention", choices=[c.value for c in MatrixConvention],
                        default=MatrixConvention.CITED_ROWS.value,
                        help="column order of the pair-count file")
    ingest.add_argument("--max-advisors", type=int, default=DEFAULT_MAX_ADVISORS)
    ingest.add_argument("--out", required=True, help="snapshot output path")
    ingest.set_defaults(func=cmd_ingest)

    report = sub.add_parser("report", help="write the per-author community report")
    report.add_argument("--snapshot", required=True)
    report.add_argument("--out", default=None, help="report path (default stdout)")
    _add_metric_flags(report)
    report.set_defaults(func=cmd_report)

    synth = sub.add_parser("gen-synthetic", help="generate a synthetic corpus")
    synth.add_argument("--authors", type=int, required=True)
    synth.add_argument("--cartels", type=int, default=0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--intensity", type=int, default=8,
                       help="citations per directed pair inside a cartel")
    synth.add_argument("--out", required=True, help="output directory")
    synth.set_defaults(func=cmd_gen_synthetic)

    export = sub.add_parser("export", help="write a snapshot back out as corpus files")
    export.add_argument("--snapshot", required=True)
    export.add_argument("--out", required=True, help="output directory")
    export.set_defaults(func=cmd_export)

    serve = sub.add_parser("serve", help="run the query service")
    serve.add_argument("--snapshot", required=True)
    serve.add_argument("--listen", default="127.0.0.1:8000")
    serve.add_argument("--cors-origin", action="append", default=["*"],
                       help="allowed CORS origin (repeatable)")
    _add_metric_flags(serve)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return 2
    except (CiteTreeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
