"""Job orchestration, persistence and the HTTP API."""

from .api import create_app
from .errors import NotFoundError, ServiceError, ValidationError, WrongStateError
from .jobs import (
    AWAITING_FEEDBACK, DONE, FAILED, QUEUED, RUNNING, Job, JobResources,
    JobStore, Worker, add_feedback, load_resources, run_job, submit_job,
)

__all__ = [
    "create_app",
    "NotFoundError", "ServiceError", "ValidationError", "WrongStateError",
    "Job", "JobResources", "JobStore", "Worker", "add_feedback",
    "load_resources", "run_job", "submit_job",
    "QUEUED", "RUNNING", "AWAITING_FEEDBACK", "DONE", "FAILED",
]
