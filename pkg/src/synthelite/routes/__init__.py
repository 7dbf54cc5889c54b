"""Route model, validators, metrics and the feasibility-judge protocol."""

from .judge import JUDGE_RUNS, ScoreParseError, judge_feasibility
from .metrics import (
    BenchmarkCase, EmptyBenchmarkError, EvalReport, build_report, precision,
    precision_macro, recall_at_k, solve_rate,
)
from .model import (
    MolNode, Route, RxnNode, SchemaError, is_solved, route_dumps,
    route_from_dict, route_from_reactions, route_loads, route_to_dict,
)
from .validate import (
    ConstraintChecker, Rule, check_constraint, contains_building_block,
    plugin, register_plugin,
)

__all__ = [
    "JUDGE_RUNS", "ScoreParseError", "judge_feasibility",
    "BenchmarkCase", "EmptyBenchmarkError", "EvalReport", "build_report",
    "precision", "precision_macro", "recall_at_k", "solve_rate",
    "MolNode", "Route", "RxnNode", "SchemaError", "is_solved", "route_dumps",
    "route_from_dict", "route_from_reactions", "route_loads", "route_to_dict",
    "ConstraintChecker", "Rule", "check_constraint", "contains_building_block",
    "plugin", "register_plugin",
]
