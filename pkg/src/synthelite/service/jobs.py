"""Job records, the file-backed store, and the resumable planning pipeline.

Every stage boundary (an attempt finished, a search finished) lands on disk
via atomic temp+rename writes before the pipeline moves on, so a killed
process resumes exactly where the files say it stopped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..chem import Molecule, ParseError, Stock
from ..index import TemplateIndex, load_template_library
from ..llm import CallLedger, backend_from_spec, neutral_prompt
from ..phase1 import (
    AttemptResult, PlannerConfig, PlannerContext, attempt_from_dict,
    attempt_to_dict, run_attempt, self_evaluate,
)
from ..phase2 import RouteCandidate, ScoringParams, rank_routes, run_search
from .errors import NotFoundError, ValidationError, WrongStateError

logger = logging.getLogger(__name__)

QUEUED = "queued"
RUNNING = "running"
AWAITING_FEEDBACK = "awaiting_feedback"
DONE = "done"
FAILED = "failed"

_TRANSITIONS = {
    QUEUED: {RUNNING},
    RUNNING: {AWAITING_FEEDBACK, DONE, FAILED, RUNNING},
    AWAITING_FEEDBACK: {RUNNING, QUEUED},
    DONE: set(),
    FAILED: set(),
}


@dataclass
class Job:
    id: str
    target: str
    prompt: str
    config: dict = field(default_factory=dict)
    interactive: bool = False
    status: str = QUEUED
    attempts_done: int = 0
    searches_done: int = 0
    created_ts: float = 0.0
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id, "target": self.target, "prompt": self.prompt,
            "config": self.config, "interactive": self.interactive,
            "status": self.status, "attempts_done": self.attempts_done,
            "searches_done": self.searches_done, "created_ts": self.created_ts,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Job":
        return cls(**{k: data[k] for k in (
            "id", "target", "prompt", "config", "interactive", "status",
            "attempts_done", "searches_done", "created_ts", "error")})


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


class JobStore:
    """One directory per job; everything reloadable after restart."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, job_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(job_id, threading.Lock())

    def job_dir(self, job_id: str) -> Path:
        return self.root / job_id

    def save_job(self, job: Job) -> None:
        with self._lock(job.id):
            self.job_dir(job.id).mkdir(parents=True, exist_ok=True)
            _atomic_write(self.job_dir(job.id) / "job.json",
                          json.dumps(job.to_dict(), sort_keys=True, indent=1))

    def load_job(self, job_id: str) -> Job:
        path = self.job_dir(job_id) / "job.json"
        if not path.exists():
            raise NotFoundError(f"job {job_id} does not exist")
        return Job.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def set_status(self, job: Job, status: str) -> None:
        if status != job.status and status not in _TRANSITIONS[job.status]:
            raise WrongStateError(f"cannot move job from {job.status} to {status}")
        job.status = status
        self.save_job(job)

    def list_jobs(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir()
                      if (p / "job.json").exists())

    # -- stage artifacts -----------------------------------------------------

    def save_attempt(self, job_id: str, attempt: AttemptResult) -> None:
        _atomic_write(self.job_dir(job_id) / f"attempt_{attempt.index}.json",
                      json.dumps(attempt_to_dict(attempt), sort_keys=True, indent=1))

    def load_attempts(self, job_id: str) -> list[AttemptResult]:
        out = []
        k = 1
        while (path := self.job_dir(job_id) / f"attempt_{k}.json").exists():
            out.append(attempt_from_dict(json.loads(path.read_text(encoding="utf-8"))))
            k += 1
        return out

    def save_search(self, job_id: str, attempt_index: int,
                    candidates: list[RouteCandidate]) -> None:
        lines = [json.dumps(c.to_dict(), sort_keys=True) for c in candidates]
        _atomic_write(self.job_dir(job_id) / f"routes_{attempt_index}.jsonl",
                      "\n".join(lines) + ("\n" if lines else ""))

    def load_search(self, job_id: str, attempt_index: int) -> list[RouteCandidate]:
        path = self.job_dir(job_id) / f"routes_{attempt_index}.jsonl"
        if not path.exists():
            return []
        return [RouteCandidate.from_dict(json.loads(line))
                for line in path.read_text(encoding="utf-8").splitlines() if line]

    def save_final_routes(self, job_id: str, ranked: list[RouteCandidate]) -> None:
        lines = [json.dumps(c.to_dict(), sort_keys=True) for c in ranked]
        _atomic_write(self.job_dir(job_id) / "routes.jsonl",
                      "\n".join(lines) + ("\n" if lines else ""))

    def load_final_routes(self, job_id: str) -> list[RouteCandidate]:
        path = self.job_dir(job_id) / "routes.jsonl"
        if not path.exists():
            return []
        return [RouteCandidate.from_dict(json.loads(line))
                for line in path.read_text(encoding="utf-8").splitlines() if line]


def submit_job(store: JobStore, target: str, prompt: str | None = None,
               config: dict | None = None, interactive: bool = False,
               dedup_key: str | None = None) -> str:
    """Validate, persist and queue a job; returns its id.

    A client-supplied dedup key makes submission idempotent.
    """
    try:
        canonical = Molecule(target).smiles
    except ParseError as exc:
        raise ValidationError(f"bad target SMILES: {exc}") from exc
    prompt = (prompt or "").strip() or neutral_prompt()
    if dedup_key:
        job_id = hashlib.sha256(dedup_key.encode("utf-8")).hexdigest()[:16]
        try:
            store.load_job(job_id)
            return job_id
        except NotFoundError:
            pass
    else:
        job_id = uuid.uuid4().hex[:16]
    job = Job(id=job_id, target=canonical, prompt=prompt,
              config=dict(config or {}), interactive=interactive,
              status=QUEUED, created_ts=time.time())
    store.save_job(job)
    return job_id


def add_feedback(store: JobStore, job_id: str, text: str) -> None:
    """Weave expert feedback into the paused attempt, then resume the job."""
    job = store.load_job(job_id)
    if job.status != AWAITING_FEEDBACK:
        raise WrongStateError(
            f"job {job_id} is {job.status}, not awaiting feedback")
    text = (text or "").strip()
    if text:
        attempts = store.load_attempts(job_id)
        if attempts:
            last = attempts[-1]
            last.user_feedback = text
            store.save_attempt(job_id, last)
    store.set_status(job, QUEUED)


@dataclass
class JobResources:
    stock: Stock
    index: TemplateIndex
    llm: object
    planner_config: PlannerConfig
    scoring: ScoringParams


def load_resources(config: dict) -> JobResources:
    stock = Stock.from_file(config["stock_file"])
    index = TemplateIndex.load(config["index_dir"]) if "index_dir" in config \
        else TemplateIndex.build(load_template_library(config["templates_file"]))
    llm = backend_from_spec(config.get("llm"))
    planner = PlannerConfig(
        max_steps=int(config.get("max_steps", 25)),
        attempts=int(config.get("attempts", 3)),
        max_candidates=int(config.get("max_candidates", 20)),
        select_count=int(config.get("select_count", 3)),
    )
    scoring = ScoringParams(
        alpha=float(config.get("alpha", 0.5)),
        scale_c=float(config.get("c", 100.0)),
        iterations=int(config.get("iterations", 300)),
    )
    return JobResources(stock=stock, index=index, llm=llm,
                        planner_config=planner, scoring=scoring)


def run_job(store: JobStore, job_id: str,
            resources: JobResources | None = None) -> Job:
    """Advance the job pipeline as far as it can go right now.

    Completed stages are detected from the persisted artifacts and skipped,
    which is both the resume path after a crash and the continue path after
    feedback.
    """
    job = store.load_job(job_id)
    if job.status in (DONE, FAILED):
        return job
    res = resources or load_resources(job.config)
    store.set_status(job, RUNNING)
    target = Molecule(job.target)
    try:
        ctx = PlannerContext(stock=res.stock, index=res.index, llm=res.llm,
                             config=res.planner_config, ledger=CallLedger())
        attempts = store.load_attempts(job_id)
        total = res.planner_config.attempts
        while len(attempts) < total or job.searches_done < len(attempts):
            k = job.searches_done + 1
            if k > len(attempts):
                attempt = run_attempt(target, job.prompt, attempts, ctx,
                                      attempt_index=len(attempts) + 1)
                attempt.feedback = self_evaluate(attempt, target, job.prompt, ctx)
                store.save_attempt(job_id, attempt)
                attempts.append(attempt)
                job.attempts_done = len(attempts)
                store.save_job(job)
            attempt = attempts[k - 1]
            if not (store.job_dir(job_id) / f"routes_{k}.jsonl").exists():
                candidates = run_search(attempt.blueprint, target, res.stock,
                                        res.index, res.scoring, attempt_index=k)
                store.save_search(job_id, k, candidates)
            job.searches_done = k
            store.save_job(job)
            if job.interactive and k < total:
                store.set_status(job, AWAITING_FEEDBACK)
                return job
        everything = [c for k in range(1, job.searches_done + 1)
                      for c in store.load_search(job_id, k)]
        ranked = rank_routes(everything, total_attempts=total)
        store.save_final_routes(job_id, ranked)
        store.set_status(job, DONE)
    except Exception as exc:  # failure is a terminal, persisted state
        logger.exception("job %s failed", job_id)
        job.error = str(exc)
        store.set_status(job, FAILED)
    return job


class Worker:
    """Single-process pool draining the job queue; default two lanes."""

    def __init__(self, store: JobStore, concurrency: int = 2,
                 resources: JobResources | None = None):
        self.store = store
        self.concurrency = concurrency
        self.resources = resources
        self._queue: "queue.Queue[str]" = queue.Queue()
        self._threads: list[threading.Thread] = []
        self._stop = threading.Event()

    def enqueue(self, job_id: str) -> None:
        self._queue.put(job_id)

    def enqueue_pending(self) -> int:
        n = 0
        for job_id in self.store.list_jobs():
            job = self.store.load_job(job_id)
            if job.status in (QUEUED, RUNNING):
                self.enqueue(job_id)
                n += 1
        return n

    def _loop(self) -> None:
        while not self._stop.is_set():
            try:
                job_id = self._queue.get(timeout=0.2)
            except queue.Empty:
                continue
            try:
                run_job(self.store, job_id, self.resources)
            finally:
                self._queue.task_done()

    def start(self) -> None:
        for i in range(self.concurrency):
            t = threading.Thread(target=self._loop, name=f"worker-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        self._stop.set()
        for t in self._threads:
            t.join(timeout=2.0)

    def drain_once(self) -> None:
        """Run queued work on the calling thread until the queue is empty."""
        while True:
            try:
                job_id = self._queue.get_nowait()
            except queue.Empty:
                return
            try:
                run_job(self.store, job_id, self.resources)
            finally:
                self._queue.task_done()
