"""Benchmark harness: manifests in, per-case routes and report.json out.

Manifest: a JSON list of cases, each
  {"case_id": ..., "target_smiles": ..., "prompt": ...,
   "checker_file": ... | "checker": {...} | "building_block_smiles": ...,
   "require_solved": true}
A route passes its case when the declared check holds and (by default) the
route reaches the stock.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from ..chem import Molecule, Stock
from ..index import TemplateIndex
from ..llm import LlmBackend
from ..phase1 import PlannerConfig, PlannerContext, run_phase1
from ..phase2 import RouteCandidate, ScoringParams, rank_routes, run_search
from .metrics import BenchmarkCase, build_report
from .model import Route, is_solved, route_from_dict, route_to_dict
from .validate import ConstraintChecker, check_constraint, contains_building_block

logger = logging.getLogger(__name__)

DEFAULT_KS = (1, 5, 10, 20, 30)


@dataclass
class CaseSpec:
    case_id: str
    target: str
    prompt: str
    checker: ConstraintChecker | None = None
    building_block: str | None = None
    require_solved: bool = True

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path) -> "CaseSpec":
        checker = None
        if "checker" in data:
            checker = ConstraintChecker.from_dict(data["checker"])
        elif "checker_file" in data:
            checker = ConstraintChecker.from_file(base_dir / data["checker_file"])
        return cls(
            case_id=str(data["case_id"]),
            target=str(data["target_smiles"]),
            prompt=str(data.get("prompt", "")),
            checker=checker,
            building_block=data.get("building_block_smiles"),
            require_solved=bool(data.get("require_solved", True)),
        )

    def route_passes(self, route: Route) -> bool:
        if self.require_solved and not is_solved(route):
            return False
        if self.checker is not None and not check_constraint(route, self.checker):
            return False
        if self.building_block is not None and not contains_building_block(
                route, Molecule(self.building_block)):
            return False
        return True


def load_manifest(path: str | Path) -> list[CaseSpec]:
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    return [CaseSpec.from_dict(d, path.parent) for d in data]


def run_case(spec: CaseSpec, stock: Stock, index: TemplateIndex,
             llm: LlmBackend, planner_config: PlannerConfig,
             scoring: ScoringParams) -> list[RouteCandidate]:
    target = Molecule(spec.target)
    ctx = PlannerContext(stock=stock, index=index, llm=llm, config=planner_config)
    attempts = run_phase1(target, spec.prompt, ctx)
    candidates: list[RouteCandidate] = []
    for attempt in attempts:
        candidates.extend(run_search(attempt.blueprint, target, stock, index,
                                     scoring, attempt_index=attempt.index))
    return rank_routes(candidates, total_attempts=planner_config.attempts)


def run_benchmark(manifest_path: str | Path, stock: Stock, index: TemplateIndex,
                  llm: LlmBackend, out_dir: str | Path,
                  planner_config: PlannerConfig | None = None,
                  scoring: ScoringParams | None = None,
                  ks: tuple[int, ...] = DEFAULT_KS) -> dict:
    planner_config = planner_config or PlannerConfig()
    scoring = scoring or ScoringParams()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    specs = load_manifest(manifest_path)
    cases: list[BenchmarkCase] = []
    for spec in specs:
        ranked = run_case(spec, stock, index, llm, planner_config, scoring)
        routes = [c.route for c in ranked]
        passes = [spec.route_passes(r) for r in routes]
        cases.append(BenchmarkCase(case_id=spec.case_id, routes=routes, passes=passes))
        with (out / f"case_{spec.case_id}.json").open("w", encoding="utf-8") as f:
            json.dump({
                "case_id": spec.case_id,
                "routes": [route_to_dict(r) for r in routes],
                "passes": passes,
            }, f, sort_keys=True, indent=1)
        logger.info("case %s: %d routes, %d passing", spec.case_id,
                    len(routes), sum(passes))
    report = build_report(cases, list(ks)).to_dict()
    (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=1),
                                     encoding="utf-8")
    return report


def score_results(results_dir: str | Path, ks: tuple[int, ...] = DEFAULT_KS) -> dict:
    """Recompute aggregate metrics from persisted per-case files."""
    results_dir = Path(results_dir)
    cases = []
    for path in sorted(results_dir.glob("case_*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        cases.append(BenchmarkCase(
            case_id=data["case_id"],
            routes=[route_from_dict(r) for r in data["routes"]],
            passes=[bool(p) for p in data["passes"]],
        ))
    report = build_report(cases, list(ks)).to_dict()
    (results_dir / "report.json").write_text(
        json.dumps(report, sort_keys=True, indent=1), encoding="utf-8")
    return report
