"""Template records, library file ingestion and LLM description generation."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from ..chem import RetroTemplate
from ..llm import (
    CallLedger, LlmBackend, TagMissingError, complete, extract_tag, load_prompt,
    render,
)

logger = logging.getLogger(__name__)

IMPLAUSIBLE_SENTENCE = (
    "This reaction template represents a chemically implausible transformation.")

DESCRIBE_RETRIES = 2


@dataclass(frozen=True)
class TemplateRecord:
    template: RetroTemplate
    count: int
    description: str = ""
    implausible: bool = False

    @property
    def id(self) -> str:
        return self.template.id


def load_template_library(path: str | Path) -> list[TemplateRecord]:
    """Line-delimited library: JSONL objects or TSV ``id<TAB>smarts<TAB>count``.

    An optional description column/field marks pre-described libraries.
    """
    records: list[TemplateRecord] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("{"):
            data = json.loads(line)
            tid, smarts = str(data["id"]), str(data["smarts"])
            count = int(data.get("count", 0))
            description = str(data.get("description", ""))
        else:
            parts = line.split("\t")
            if len(parts) < 3:
                raise ValueError(f"{path}:{lineno}: expected id<TAB>smarts<TAB>count")
            tid, smarts, count = parts[0], parts[1], int(parts[2])
            description = parts[3] if len(parts) > 3 else ""
        if count < 0:
            raise ValueError(f"{path}:{lineno}: negative count")
        records.append(TemplateRecord(
            template=RetroTemplate(smarts=smarts, id=tid),
            count=count,
            description=description,
            implausible=description == IMPLAUSIBLE_SENTENCE,
        ))
    return records


def _forward_smarts(template: RetroTemplate) -> str:
    """Templates are stored retro; the describe protocol expects forward."""
    product, reactants = template.smarts.split(">>", 1)
    return f"{reactants}>>{product}"


def _describe_prompt(template: RetroTemplate) -> list[dict]:
    role = load_prompt("describe_role").body
    body = "\n".join([
        render(load_prompt("describe_input"),
               {"SMARTS_REACTION": _forward_smarts(template)}),
        load_prompt("describe_instruction").body,
        load_prompt("describe_examples").body,
    ])
    return [{"role": "system", "content": role}, {"role": "user", "content": body}]


def _normalize_description(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        text = text[1:-1].strip()
    return text


def describe_one(record: TemplateRecord, llm: LlmBackend,
                 ledger: CallLedger | None = None) -> TemplateRecord:
    messages = _describe_prompt(record.template)
    for attempt in range(DESCRIBE_RETRIES + 1):
        response = complete(llm, messages, retry_budget=2, ledger=ledger)
        try:
            description = _normalize_description(extract_tag(response, "description"))
        except TagMissingError:
            if attempt < DESCRIBE_RETRIES:
                continue
            logger.warning("template %s: no <description> after %d tries; marking implausible",
                           record.id, DESCRIBE_RETRIES + 1)
            return replace(record, description=IMPLAUSIBLE_SENTENCE, implausible=True)
        return replace(record, description=description,
                       implausible=description == IMPLAUSIBLE_SENTENCE)
    raise AssertionError("unreachable")


def describe_templates(records: list[TemplateRecord], llm: LlmBackend,
                       ledger: CallLedger | None = None,
                       parallelism: int = 4) -> list[TemplateRecord]:
    """Generate one-sentence descriptions for every record, order-preserving."""
    if not records:
        return []
    for rec in records:
        rec.template.validate()
    if parallelism <= 1 or len(records) == 1:
        return [describe_one(r, llm, ledger) for r in records]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(lambda r: describe_one(r, llm, ledger), records))
