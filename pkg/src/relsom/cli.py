"""Command-line entry points: extract, simulate, evaluate, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .corpus import load_corpus
from .errors import RelsomError
from .evaluation import run_protocol
from .features import cache_path, descriptor_by_name, extract_all, registered_descriptors, save_matrix
from .session import SessionConfig, load_features, load_session, simulate, start_session

TRUTHY_GT = {"1", "true", "relevant", "+", "yes"}


def _master_seed(cli_seed: int) -> int:
    env = os.environ.get("FDIVE_SEED")
    if env is not None:
        return int(env)
    return cli_seed


def _oracle_from_ground_truth(corpus, target: str | None) -> dict:
    gt = corpus.ground_truth_map()
    missing = [i for i in corpus.ids if i not in gt]
    if missing:
        raise RelsomError(f"{len(missing)} items lack ground truth (e.g. {missing[:3]})")
    if target is not None:
        return {i: g == target for i, g in gt.items()}
    return {i: g.lower() in TRUTHY_GT for i, g in gt.items()}


def cmd_extract(args) -> int:
    corpus, identity = load_corpus(args.manifest)
    if corpus.kind == "vectors":
        print("vector corpus: identity blocks need no extraction", file=sys.stderr)
        return 0
    if args.descriptors:
        descriptors = [descriptor_by_name(n.strip()) for n in args.descriptors.split(",")]
    else:
        descriptors = registered_descriptors()
    features = extract_all(corpus, descriptors, workers=args.workers)
    os.makedirs(args.out, exist_ok=True)
    for descriptor, matrix in features.items():
        path = cache_path(args.out, descriptor)
        save_matrix(matrix, path)
        print(f"{descriptor.name}: {len(matrix)} x {matrix.dim} -> {path}")
    return 0


def cmd_simulate(args) -> int:
    corpus, identity = load_corpus(args.manifest)
    features = load_features(corpus, identity, cache_dir=args.cache, workers=args.workers)
    oracle = _oracle_from_ground_truth(corpus, args.target)
    config = SessionConfig(master_seed=_master_seed(args.seed), state_path=args.state)
    session, trace = simulate(corpus, features, oracle, args.iterations, config)
    for record in trace:
        print(
            f"iteration {record['iteration']}: {record['descriptor']} (p={record['p']:g}), "
            f"{record['relevant']}+/{record['irrelevant']}- labels, "
            f"query of {len(record['query'])}"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(trace, fh, indent=2)
        print(f"trace written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    corpus, identity = load_corpus(args.manifest)
    features = load_features(corpus, identity, cache_dir=args.cache, workers=args.workers)
    targets = [t.strip() for t in args.targets.split(",") if t.strip()]
    budgets = tuple(int(b) for b in args.budgets.split(",")) if args.budgets else None
    kwargs = {"master_seed": _master_seed(args.seed), "jobs": args.jobs}
    if budgets:
        kwargs["budgets"] = budgets
    report = run_protocol(corpus, features, targets, **kwargs)
    print(report.format_table())
    if args.out:
        report.write_csv(args.out)
        print(f"report written to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    config = SessionConfig(master_seed=_master_seed(args.seed), state_path=args.state)
    if args.state and os.path.isfile(args.state):
        session = load_session(args.state, cache_dir=args.cache, workers=args.workers)
    else:
        corpus, identity = load_corpus(args.manifest)
        features = load_features(corpus, identity, cache_dir=args.cache, workers=args.workers)
        session = start_session(corpus, features, config, manifest_path=os.path.abspath(args.manifest))
    app = create_app(session)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relsom")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="compute descriptor matrices and cache them")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="cache directory")
    p.add_argument("--descriptors", help="comma-separated names (default: all)")
    p.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 2))
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("simulate", help="headless labeling loop driven by ground truth")
    p.add_argument("--manifest", required=True)
    p.add_argument("--oracle", choices=["ground-truth"], default="ground-truth")
    p.add_argument("--target", help="ground-truth value treated as relevant")
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache", help="feature cache directory")
    p.add_argument("--state", help="persist the session here after each advance")
    p.add_argument("--out", help="write the iteration trace as JSON")
    p.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 2))
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("evaluate", help="advisor-vs-baseline F1 protocol")
    p.add_argument("--manifest", required=True)
    p.add_argument("--targets", required=True, help="comma-separated class labels")
    p.add_argument("--budgets", help="comma-separated label budgets per side")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=max(1, os.cpu_count() or 2))
    p.add_argument("--cache", help="feature cache directory")
    p.add_argument("--out", help="write the report CSV here")
    p.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 2))
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("serve", help="run the HTTP/JSON session API")
    p.add_argument("--manifest", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--state", help="session state file (reloaded when present)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache", help="feature cache directory")
    p.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 2))
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RelsomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
