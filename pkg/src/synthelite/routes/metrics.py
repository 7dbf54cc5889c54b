"""Benchmark metrics: recall@K, precision, solve rate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .model import Route


class EmptyBenchmarkError(ValueError):
    """Metrics need at least one case (or one route, for precision)."""


@dataclass
class BenchmarkCase:
    case_id: str
    routes: list[Route] = field(default_factory=list)
    # pass/fail per route, aligned with routes; computed by the harness
    passes: list[bool] = field(default_factory=list)

    def passing_in_top(self, k: int) -> bool:
        return any(self.passes[:k])


def recall_at_k(cases: list[BenchmarkCase], k: int) -> float:
    """Fraction of cases with at least one passing route among the first k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not cases:
        raise EmptyBenchmarkError("no cases")
    return sum(1 for c in cases if c.passing_in_top(k)) / len(cases)


def precision(cases: list[BenchmarkCase]) -> float:
    """Passing routes over all emitted routes, pooled across cases."""
    total = sum(len(c.passes) for c in cases)
    if total == 0:
        raise EmptyBenchmarkError("no routes")
    passing = sum(sum(1 for p in c.passes if p) for c in cases)
    return passing / total


def precision_macro(cases: list[BenchmarkCase]) -> float:
    """Per-case precision averaged over cases that emitted routes."""
    scored = [c for c in cases if c.passes]
    if not scored:
        raise EmptyBenchmarkError("no routes")
    return sum(sum(1 for p in c.passes if p) / len(c.passes) for c in scored) / len(scored)


def solve_rate(cases: list[BenchmarkCase],
               predicate: Callable[[Route], bool]) -> float:
    """Fraction of cases where any route satisfies the predicate."""
    if not cases:
        raise EmptyBenchmarkError("no cases")
    solved = sum(1 for c in cases if any(predicate(r) for r in c.routes))
    return solved / len(cases)


@dataclass
class EvalReport:
    case_ids: list[str]
    ks: list[int]
    recall_curve: dict[int, float]
    precision_pooled: float
    precision_per_case: float
    per_case_top1: dict[str, bool]
    solve_rate_value: float | None = None
    feasibility: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case_ids": self.case_ids,
            "ks": self.ks,
            "recall_curve": {str(k): v for k, v in self.recall_curve.items()},
            "precision_pooled": self.precision_pooled,
            "precision_per_case": self.precision_per_case,
            "per_case_top1": self.per_case_top1,
            "solve_rate": self.solve_rate_value,
            "feasibility": self.feasibility,
        }


def build_report(cases: list[BenchmarkCase], ks: list[int]) -> EvalReport:
    return EvalReport(
        case_ids=[c.case_id for c in cases],
        ks=list(ks),
        recall_curve={k: recall_at_k(cases, k) for k in ks},
        precision_pooled=precision(cases),
        precision_per_case=precision_macro(cases),
        per_case_top1={c.case_id: c.passing_in_top(1) for c in cases},
    )
