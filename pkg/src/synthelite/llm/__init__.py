"""LLM gateway: rendering, tagged-output parsing, backends and call records."""

from .backend import (
    CallableBackend, CallLedger, LlmBackend, Message, RateLimiter, complete,
    messages_text,
)
from .errors import (
    BackendError, FormatError, GatewayError, MissingVarError, PlanParseError,
    TagMissingError,
)
from .parse import (
    Feedback, FeedbackItem, PlanStep, SynthesisPlan, extract_tag,
    parse_feedback, parse_int_list, parse_plan, parse_stop,
)
from .providers import backend_from_spec
from .scripted import FlakyBackend, ScriptedBackend, SequenceBackend
from .templates import PromptTemplate, load_prompt, neutral_prompt, render

__all__ = [
    "CallableBackend", "CallLedger", "LlmBackend", "Message", "RateLimiter",
    "complete", "messages_text",
    "BackendError", "FormatError", "GatewayError", "MissingVarError",
    "PlanParseError", "TagMissingError",
    "Feedback", "FeedbackItem", "PlanStep", "SynthesisPlan", "extract_tag",
    "parse_feedback", "parse_int_list", "parse_plan", "parse_stop",
    "backend_from_spec", "FlakyBackend", "ScriptedBackend", "SequenceBackend",
    "PromptTemplate", "load_prompt", "neutral_prompt", "render",
]
