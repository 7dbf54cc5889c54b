"""HTTP surface: job submission, status, routes, feedback, health.

All payloads are JSON; errors come back as {"code": ..., "message": ...}.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import NotFoundError, ServiceError, ValidationError, WrongStateError
from .jobs import JobResources, JobStore, Worker, add_feedback, submit_job


class SubmitBody(BaseModel):
    target_smiles: str
    prompt: str | None = None
    config: dict | None = None
    interactive: bool = False
    dedup_key: str | None = None


class FeedbackBody(BaseModel):
    text: str = ""


_STATUS_CODES = {
    ValidationError: 400,
    NotFoundError: 404,
    WrongStateError: 409,
}


def create_app(store_root: str | Path, default_config: dict | None = None,
               resources: JobResources | None = None,
               worker_concurrency: int = 2,
               ui_dir: str | Path | None = None) -> FastAPI:
    store = JobStore(store_root)
    worker = Worker(store, concurrency=worker_concurrency, resources=resources)
    app = FastAPI(title="synthelite")
    app.state.store = store
    app.state.worker = worker
    default_config = default_config or {}

    @app.exception_handler(ServiceError)
    async def service_error(_: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(
            status_code=_STATUS_CODES.get(type(exc), 500),
            content={"code": exc.code, "message": str(exc)})

    @app.on_event("startup")
    def start_worker() -> None:
        worker.enqueue_pending()
        worker.start()

    @app.on_event("shutdown")
    def stop_worker() -> None:
        worker.stop()

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/jobs")
    def submit(body: SubmitBody) -> dict:
        config = {**default_config, **(body.config or {})}
        job_id = submit_job(store, body.target_smiles, body.prompt, config,
                            interactive=body.interactive, dedup_key=body.dedup_key)
        worker.enqueue(job_id)
        return {"id": job_id}

    @app.get("/api/jobs/{job_id}")
    def status(job_id: str) -> dict:
        job = store.load_job(job_id)
        view = job.to_dict()
        view.pop("config", None)
        view["n_routes"] = len(store.load_final_routes(job_id))
        return view

    @app.get("/api/jobs/{job_id}/routes")
    def routes(job_id: str, k: int = 10) -> dict:
        store.load_job(job_id)  # 404 on unknown id
        ranked = store.load_final_routes(job_id)
        return {"routes": [c.to_dict() for c in ranked[:max(0, k)]]}

    @app.post("/api/jobs/{job_id}/feedback")
    def feedback(job_id: str, body: FeedbackBody) -> dict:
        add_feedback(store, job_id, body.text)
        worker.enqueue(job_id)
        return {"status": "resumed"}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
