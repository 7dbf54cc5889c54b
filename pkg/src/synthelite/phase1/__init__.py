"""Phase 1: greedy stepwise planning with feedback-chained attempts."""

from .planner import (
    BACKEND_FAILURE, DEAD_END, MAX_STEPS, STEP_FAILURE, STOP_SIGNAL,
    AttemptResult, Blueprint, BlueprintStep, PlannerConfig, PlannerContext,
    PlannerState, StepOutcome, plan_step, replay_frontier, run_attempt,
    run_phase1, self_evaluate,
)
from .serialize import (
    attempt_from_dict, attempt_to_dict, blueprint_from_dict, blueprint_to_dict,
    reaction_from_dict, reaction_to_dict,
)

__all__ = [
    "AttemptResult", "Blueprint", "BlueprintStep", "PlannerConfig",
    "PlannerContext", "PlannerState", "StepOutcome", "plan_step",
    "replay_frontier", "run_attempt", "run_phase1", "self_evaluate",
    "STOP_SIGNAL", "MAX_STEPS", "DEAD_END", "BACKEND_FAILURE", "STEP_FAILURE",
    "attempt_from_dict", "attempt_to_dict", "blueprint_from_dict",
    "blueprint_to_dict", "reaction_from_dict", "reaction_to_dict",
]
