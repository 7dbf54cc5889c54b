"""The synthelite command line: index, plan, search, benchmark, validate, serve."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .chem import Stock
from .index import TemplateIndex, describe_templates, get_embedder, load_template_library
from .llm import backend_from_spec
from .phase1 import PlannerConfig, blueprint_from_dict
from .phase2 import ScoringParams, run_search
from .routes import (
    ConstraintChecker, check_constraint, is_solved, route_loads,
)
from .routes.harness import DEFAULT_KS, run_benchmark, score_results
from .service import JobStore, Worker, load_resources, run_job, submit_job

logger = logging.getLogger(__name__)


def _read_prompt(value: str | None) -> str | None:
    if value and value.startswith("@"):
        return Path(value[1:]).read_text(encoding="utf-8").strip()
    return value


def _load_index(args) -> TemplateIndex:
    if getattr(args, "index", None):
        return TemplateIndex.load(args.index)
    return TemplateIndex.build(load_template_library(args.templates))


def cmd_index_build(args) -> int:
    records = load_template_library(args.templates)
    if any(not r.description for r in records):
        llm = backend_from_spec(args.llm)
        records = describe_templates(records, llm)
    index = TemplateIndex.build(records, get_embedder(args.embedder))
    index.save(args.out)
    print(f"indexed {len(index)} of {len(records)} templates -> {args.out}")
    return 0


def cmd_index_query(args) -> int:
    index = TemplateIndex.load(args.index)
    for hit in index.search(args.text, args.k):
        rec = index.record(hit.template_id)
        print(f"{hit.similarity:+.4f}  {hit.template_id}  {rec.description}")
    return 0


def cmd_plan(args) -> int:
    config = {
        "stock_file": args.stock,
        "llm": args.llm or os.environ.get("SYNTHELITE_LLM", ""),
        "attempts": args.attempts,
        "max_steps": args.max_steps,
        "iterations": args.iterations,
        "alpha": args.alpha,
        "c": args.c,
    }
    if args.index:
        config["index_dir"] = args.index
    else:
        config["templates_file"] = args.templates
    store = JobStore(args.out)
    job_id = submit_job(store, args.target, _read_prompt(args.prompt), config,
                        dedup_key=f"plan:{args.target}")
    job = run_job(store, job_id)
    if job.status != "done":
        print(f"planning failed: {job.error}", file=sys.stderr)
        return 1
    routes = store.load_final_routes(job_id)
    print(f"job {job_id}: {len(routes)} routes "
          f"({sum(c.solved for c in routes)} solved) in {store.job_dir(job_id)}")
    return 0


def cmd_search(args) -> int:
    from .chem import Molecule

    data = json.loads(Path(args.blueprint).read_text(encoding="utf-8"))
    blueprint = blueprint_from_dict(data["blueprint"] if "blueprint" in data else data)
    stock = Stock.from_file(args.stock)
    index = _load_index(args)
    if blueprint.steps:
        target = blueprint.steps[0].ref_reaction.product
    elif args.target:
        target = Molecule(args.target)
    else:
        print("empty blueprint needs --target", file=sys.stderr)
        return 2
    params = ScoringParams(alpha=args.alpha, scale_c=args.c, iterations=args.iterations)
    candidates = run_search(blueprint, target, stock, index, params,
                            attempt_index=args.attempt_index)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "routes.jsonl").open("w", encoding="utf-8") as f:
        for cand in candidates:
            f.write(json.dumps(cand.to_dict(), sort_keys=True) + "\n")
    print(f"{len(candidates)} candidates -> {out / 'routes.jsonl'}")
    return 0


def cmd_benchmark_run(args) -> int:
    stock = Stock.from_file(args.stock)
    index = _load_index(args)
    llm = backend_from_spec(args.llm)
    planner = PlannerConfig(attempts=args.attempts, max_steps=args.max_steps)
    scoring = ScoringParams(iterations=args.iterations)
    report = run_benchmark(args.manifest, stock, index, llm, args.out,
                           planner, scoring)
    print(json.dumps(report["recall_curve"], sort_keys=True))
    return 0


def cmd_benchmark_score(args) -> int:
    ks = tuple(int(k) for k in args.k.split(","))
    report = score_results(args.results, ks)
    print(json.dumps(report, sort_keys=True, indent=1))
    return 0


def cmd_validate(args) -> int:
    route = route_loads(Path(args.route).read_text(encoding="utf-8"))
    checker = ConstraintChecker.from_file(args.checker)
    ok = check_constraint(route, checker)
    solved = is_solved(route)
    print(json.dumps({"constraint": ok, "solved": solved}))
    return 0 if ok else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service.api import create_app

    default_config = {}
    if args.stock:
        default_config["stock_file"] = args.stock
    if args.index:
        default_config["index_dir"] = args.index
    if args.llm:
        default_config["llm"] = args.llm
    app = create_app(args.store, default_config=default_config, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_worker(args) -> int:
    store = JobStore(args.store)
    worker = Worker(store, concurrency=args.concurrency)
    n = worker.enqueue_pending()
    print(f"resuming {n} pending job(s)")
    worker.drain_once()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="synthelite",
                                description="steerable retrosynthesis planning")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add_index_source(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--index", help="built index directory")
        g.add_argument("--templates", help="raw template library file")

    sp = sub.add_parser("index", help="build or query the template index")
    isub = sp.add_subparsers(dest="index_command", required=True)
    b = isub.add_parser("build")
    b.add_argument("--templates", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--embedder", default=None)
    b.add_argument("--llm", default=None)
    b.set_defaults(fn=cmd_index_build)
    q = isub.add_parser("query")
    q.add_argument("--index", required=True)
    q.add_argument("--text", required=True)
    q.add_argument("-k", type=int, default=5)
    q.set_defaults(fn=cmd_index_query)

    pl = sub.add_parser("plan", help="run the full two-phase planner")
    pl.add_argument("--target", required=True)
    pl.add_argument("--prompt", default=None, help="text or @FILE")
    pl.add_argument("--stock", required=True)
    add_index_source(pl)
    pl.add_argument("--attempts", type=int, default=3)
    pl.add_argument("--max-steps", type=int, default=25)
    pl.add_argument("--iterations", type=int, default=300)
    pl.add_argument("--alpha", type=float, default=0.5)
    pl.add_argument("--c", type=float, default=100.0)
    pl.add_argument("--llm", default=None)
    pl.add_argument("--out", required=True)
    pl.set_defaults(fn=cmd_plan)

    se = sub.add_parser("search", help="phase-2 search over a saved blueprint")
    se.add_argument("--blueprint", required=True)
    se.add_argument("--stock", required=True)
    add_index_source(se)
    se.add_argument("--iterations", type=int, default=300)
    se.add_argument("--alpha", type=float, default=0.5)
    se.add_argument("--c", type=float, default=100.0)
    se.add_argument("--attempt-index", type=int, default=1)
    se.add_argument("--target", default=None)
    se.add_argument("--out", required=True)
    se.set_defaults(fn=cmd_search)

    be = sub.add_parser("benchmark", help="run or score benchmark manifests")
    bsub = be.add_subparsers(dest="benchmark_command", required=True)
    br = bsub.add_parser("run")
    br.add_argument("--manifest", required=True)
    br.add_argument("--stock", required=True)
    add_index_source(br)
    br.add_argument("--llm", default=None)
    br.add_argument("--attempts", type=int, default=3)
    br.add_argument("--max-steps", type=int, default=25)
    br.add_argument("--iterations", type=int, default=300)
    br.add_argument("--out", required=True)
    br.set_defaults(fn=cmd_benchmark_run)
    bs = bsub.add_parser("score")
    bs.add_argument("--results", required=True)
    bs.add_argument("-k", default=",".join(str(k) for k in DEFAULT_KS))
    bs.set_defaults(fn=cmd_benchmark_score)

    va = sub.add_parser("validate", help="check one route against one checker")
    va.add_argument("--route", required=True)
    va.add_argument("--checker", required=True)
    va.set_defaults(fn=cmd_validate)

    sv = sub.add_parser("serve", help="HTTP API plus optional static UI")
    sv.add_argument("--port", type=int, default=8000)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--store", default=os.environ.get("SYNTHELITE_STORE", "./store"))
    sv.add_argument("--stock", default=None)
    sv.add_argument("--index", default=None)
    sv.add_argument("--llm", default=None)
    sv.add_argument("--ui", default=None)
    sv.set_defaults(fn=cmd_serve)

    wo = sub.add_parser("worker", help="drain pending jobs once and exit")
    wo.add_argument("--store", default=os.environ.get("SYNTHELITE_STORE", "./store"))
    wo.add_argument("--concurrency", type=int, default=2)
    wo.set_defaults(fn=cmd_worker)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
