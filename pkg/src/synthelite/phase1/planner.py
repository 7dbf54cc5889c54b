"""Greedy stepwise planning: stop check, strategy, next step, selection.

Each step issues one combined LLM call (stop signal + overall plan + next
transformation) and, when candidates survive site filtering, one selection
call.  Three feedback-chained attempts produce the blueprints that seed the
phase-2 search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

from ..chem import (
    Molecule, RetroReaction, Stock, apply_template, map_atoms, site_matches,
)
from ..index import TemplateIndex
from ..llm import (
    BackendError, CallLedger, Feedback, FormatError, LlmBackend,
    PlanParseError, TagMissingError, complete, extract_tag, parse_feedback,
    parse_int_list, parse_plan, parse_stop,
)
from .prompting import (
    CORRECTION_NOTE, combined_messages, evaluation_messages, selection_messages,
)

logger = logging.getLogger(__name__)

STOP_SIGNAL = "StopSignal"
MAX_STEPS = "MaxSteps"
DEAD_END = "DeadEnd"
BACKEND_FAILURE = "BackendFailure"
STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class PlannerConfig:
    max_steps: int = 25
    attempts: int = 3
    max_candidates: int = 20
    select_count: int = 3
    step_retry: int = 1
    retrieve_k: int = 50
    llm_retry_budget: int = 2

    def __post_init__(self):
        if min(self.max_steps, self.attempts, self.max_candidates,
               self.select_count) < 0:
            raise ValueError("config values must be non-negative")
        if self.max_candidates < self.select_count:
            raise ValueError("max_candidates must be >= select_count")


@dataclass
class PlannerState:
    target: Molecule
    frontier: list[tuple[Molecule, bool]]
    reactions: list[RetroReaction] = field(default_factory=list)

    @property
    def step(self) -> int:
        return len(self.reactions)

    def solved(self) -> bool:
        return all(avail for _, avail in self.frontier)

    def apply(self, reaction: RetroReaction, stock: Stock) -> "PlannerState":
        idx = next(i for i, (m, _) in enumerate(self.frontier)
                   if m.smiles == reaction.product.smiles)
        frontier = self.frontier[:idx] + self.frontier[idx + 1:]
        frontier = frontier + [(m, m in stock) for m in reaction.reactants]
        return PlannerState(self.target, frontier, self.reactions + [reaction])


def replay_frontier(target: Molecule, reactions: list[RetroReaction],
                    stock: Stock) -> list[tuple[Molecule, bool]]:
    """Recompute the frontier from scratch; the state must always agree."""
    state = PlannerState(target, [(target, target in stock)])
    for rxn in reactions:
        state = state.apply(rxn, stock)
    return state.frontier


@dataclass(frozen=True)
class BlueprintStep:
    depth: int
    ref_reaction: RetroReaction
    query: str  # the forward-reaction text used against the search engine


@dataclass(frozen=True)
class Blueprint:
    steps: tuple[BlueprintStep, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.steps)

    def step_at(self, depth: int) -> BlueprintStep:
        return self.steps[depth - 1]


@dataclass
class AttemptResult:
    index: int  # 1-based
    blueprint: Blueprint
    final_state: PlannerState
    solved: bool
    stop_reason: str
    feedback: Feedback | None = None
    user_feedback: str = ""


@dataclass
class PlannerContext:
    stock: Stock
    index: TemplateIndex
    llm: LlmBackend
    config: PlannerConfig = field(default_factory=PlannerConfig)
    ledger: CallLedger = field(default_factory=CallLedger)


@dataclass
class StepOutcome:
    kind: str  # "applied" | "stop" | "dead_end" | "step_failure"
    state: PlannerState | None = None
    blueprint_step: BlueprintStep | None = None


class _StepAbort(Exception):
    def __init__(self, kind: str, reason: str):
        super().__init__(reason)
        self.kind = kind


def _task2_fields(response: str) -> tuple[str, str, int, list[int]]:
    parse_plan(response)  # Task 1 must be present and well-formed
    retro_text = extract_tag(response, "next_retro_transformation")
    forward_text = extract_tag(response, "next_forward_reaction")
    mol_index = parse_int_list(response, "expandable_molecule_index")
    atom_indices = parse_int_list(response, "reaction_atom_indices")
    if len(mol_index) != 1:
        raise FormatError("expandable_molecule_index must be a single integer")
    if not atom_indices:
        raise FormatError("reaction_atom_indices must not be empty")
    if not retro_text or not forward_text:
        raise TagMissingError("empty transformation description")
    return retro_text, forward_text, mol_index[0], atom_indices


def plan_step(state: PlannerState, user_prompt: str,
              history: list[AttemptResult], ctx: PlannerContext) -> StepOutcome:
    """One planning iteration; may issue up to two extra corrective calls."""
    cfg = ctx.config
    conversation = combined_messages(state, user_prompt, history)
    response = complete(ctx.llm, conversation, cfg.llm_retry_budget, ctx.ledger)

    if parse_stop(response):
        return StepOutcome(kind="stop", state=state)

    def reask(reason: str) -> str:
        note = CORRECTION_NOTE.format(reason=reason)
        messages = conversation + [
            {"role": "assistant", "content": response},
            {"role": "user", "content": note},
        ]
        return complete(ctx.llm, messages, cfg.llm_retry_budget, ctx.ledger)

    try:
        try:
            fields = _task2_fields(response)
        except (TagMissingError, PlanParseError, FormatError) as exc:
            response = reask(f"structured output problem ({exc})")
            if parse_stop(response):
                return StepOutcome(kind="stop", state=state)
            fields = _task2_fields(response)
    except (TagMissingError, PlanParseError, FormatError) as exc:
        logger.warning("step failed after re-ask: %s", exc)
        return StepOutcome(kind="step_failure", state=state)

    _, forward_text, mol_index, atom_indices = fields
    if not (0 <= mol_index < len(state.frontier)):
        try:
            response = reask(
                f"expandable_molecule_index {mol_index} is out of range")
            if parse_stop(response):
                return StepOutcome(kind="stop", state=state)
            _, forward_text, mol_index, atom_indices = _task2_fields(response)
        except (TagMissingError, PlanParseError, FormatError):
            return StepOutcome(kind="step_failure", state=state)
        if not (0 <= mol_index < len(state.frontier)):
            return StepOutcome(kind="dead_end", state=state)

    def gather(forward: str, chosen: int, indices: list[int]) -> list[RetroReaction]:
        molecule = state.frontier[chosen][0]
        hits = ctx.index.search(forward, cfg.retrieve_k)
        requested = set(indices)
        out: list[RetroReaction] = []
        seen: set[tuple] = set()
        for hit in hits:
            record = ctx.index.record(hit.template_id)
            for rxn in apply_template(record.template, molecule):
                if not site_matches(rxn, requested):
                    continue
                key = (rxn.template_id, tuple(sorted(rxn.site)),
                       tuple(m.smiles for m in rxn.reactants))
                if key in seen:
                    continue
                seen.add(key)
                out.append(rxn)
        return out[:cfg.max_candidates]

    candidates = gather(forward_text, mol_index, atom_indices)
    if not candidates:
        try:
            response = reask(
                "no reaction template matched the described transformation at "
                "the given reaction site; describe the step differently or "
                "pick another site")
            if parse_stop(response):
                return StepOutcome(kind="stop", state=state)
            _, forward_text, mol_index, atom_indices = _task2_fields(response)
        except (TagMissingError, PlanParseError, FormatError):
            return StepOutcome(kind="step_failure", state=state)
        if 0 <= mol_index < len(state.frontier):
            candidates = gather(forward_text, mol_index, atom_indices)
        if not candidates:
            return StepOutcome(kind="dead_end", state=state)

    select_conv = selection_messages(conversation, response, candidates,
                                     ctx.index, min(cfg.select_count, len(candidates)))
    selection_response = complete(ctx.llm, select_conv, cfg.llm_retry_budget, ctx.ledger)
    try:
        ranked = parse_int_list(selection_response, "selected_reaction_indices")
    except (TagMissingError, FormatError):
        ranked = []
    valid = [i for i in ranked if 0 <= i < len(candidates)]
    if not valid:
        retry = complete(ctx.llm, select_conv + [
            {"role": "assistant", "content": selection_response},
            {"role": "user", "content": CORRECTION_NOTE.format(
                reason="selected_reaction_indices missing or out of range")},
        ], cfg.llm_retry_budget, ctx.ledger)
        try:
            ranked = parse_int_list(retry, "selected_reaction_indices")
        except (TagMissingError, FormatError):
            ranked = []
        valid = [i for i in ranked if 0 <= i < len(candidates)]
        if not valid:
            return StepOutcome(kind="dead_end", state=state)

    # rank-1 applies; later ranks exist as structural fallbacks
    chosen_rxn = candidates[valid[0]]
    new_state = state.apply(chosen_rxn, ctx.stock)
    step = BlueprintStep(depth=state.step + 1, ref_reaction=chosen_rxn,
                         query=forward_text)
    return StepOutcome(kind="applied", state=new_state, blueprint_step=step)


def run_attempt(target: Molecule, user_prompt: str,
                history: list[AttemptResult], ctx: PlannerContext,
                attempt_index: int) -> AttemptResult:
    state = PlannerState(target, [(target, target in ctx.stock)])
    steps: list[BlueprintStep] = []
    stop_reason = MAX_STEPS
    while True:
        if state.step >= ctx.config.max_steps:
            stop_reason = MAX_STEPS
            break
        try:
            outcome = plan_step(state, user_prompt, history, ctx)
        except BackendError as exc:
            logger.warning("attempt %d: backend failure: %s", attempt_index, exc)
            stop_reason = BACKEND_FAILURE
            break
        if outcome.kind == "applied":
            state = outcome.state
            steps.append(outcome.blueprint_step)
            continue
        stop_reason = {
            "stop": STOP_SIGNAL, "dead_end": DEAD_END,
            "step_failure": STEP_FAILURE,
        }[outcome.kind]
        break
    return AttemptResult(
        index=attempt_index,
        blueprint=Blueprint(steps=tuple(steps)),
        final_state=state,
        solved=state.solved(),
        stop_reason=stop_reason,
    )


def self_evaluate(attempt: AttemptResult, target: Molecule, user_prompt: str,
                  ctx: PlannerContext) -> Feedback:
    """Best-effort critique of a finished attempt; failures yield empty feedback."""
    if not attempt.blueprint.steps:
        return Feedback()
    messages = evaluation_messages(target, user_prompt, attempt)
    for round_ in range(2):
        try:
            response = complete(ctx.llm, messages, ctx.config.llm_retry_budget,
                                ctx.ledger)
            return parse_feedback(response)
        except (TagMissingError, PlanParseError) as exc:
            if round_ == 0:
                messages = messages + [
                    {"role": "user", "content": CORRECTION_NOTE.format(
                        reason=f"feedback block problem ({exc})")}]
                continue
            logger.warning("self-evaluation unusable after retry: %s", exc)
        except BackendError as exc:
            logger.warning("self-evaluation backend failure: %s", exc)
            break
    return Feedback()


def run_phase1(target: Molecule, user_prompt: str, ctx: PlannerContext,
               completed: list[AttemptResult] | None = None,
               on_attempt: Callable[[AttemptResult], str | None] | None = None,
               ) -> list[AttemptResult]:
    """All planning attempts, later ones seeing earlier routes and feedback.

    ``completed`` carries attempts persisted by a previous (interrupted) run;
    ``on_attempt`` is called after each attempt's evaluation and may return
    user feedback text to weave into the next attempt's context.
    """
    history: list[AttemptResult] = list(completed or [])
    results: list[AttemptResult] = list(history)
    for k in range(len(history) + 1, ctx.config.attempts + 1):
        attempt = run_attempt(target, user_prompt, history, ctx, attempt_index=k)
        attempt.feedback = self_evaluate(attempt, target, user_prompt, ctx)
        if on_attempt is not None:
            user_text = on_attempt(attempt)
            if user_text:
                attempt.user_feedback = user_text
        history.append(attempt)
        results.append(attempt)
    return results
