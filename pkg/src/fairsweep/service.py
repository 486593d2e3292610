"""HTTP facade: dataset upload, exploration jobs, progress polling, and
result retrieval.

Records are persisted once per job as JSON under the data root; every
frontier, report, and export response is recomputed from those bytes on
demand, so repeated reads are byte-identical. Jobs run on a single
background thread in FIFO order; progress is a lock-protected counter
the poll endpoint reads without touching the running job.
"""
from __future__ import annotations

import json
import os
import queue
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .data import DataError, Dataset, load_csv
from .grid import EvaluationRecord, ProgressSink, grid_size
from .metrics import METRIC_IDS
from .models import FAMILIES
from .pareto import GROUPINGS, MODES, ObjectivePair, extract_frontier
from .pipeline import (
    ConfigError,
    canonical_config,
    config_json_bytes,
    exploration_task_total,
    family_spaces,
    prepare_dataset,
    records_json_bytes,
    run_exploration,
    validate_data_section,
)
from .report import build_table, generate_report, json_bytes

DEFAULT_MAX_UPLOAD = 50 * 1024 * 1024


@dataclass(frozen=True)
class Settings:
    data_root: Path
    host: str = "127.0.0.1"
    port: int = 8765
    workers: int = 1
    grid_cap: int = 10**6
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    static_dir: Path | None = None

    @staticmethod
    def from_env() -> "Settings":
        static = os.environ.get("FAIRSWEEP_STATIC_DIR")
        return Settings(
            data_root=Path(os.environ.get("FAIRSWEEP_DATA_ROOT", "./fairsweep-data")),
            host=os.environ.get("FAIRSWEEP_HOST", "127.0.0.1"),
            port=int(os.environ.get("FAIRSWEEP_PORT", "8765")),
            workers=int(os.environ.get("FAIRSWEEP_WORKERS", "1")),
            grid_cap=int(os.environ.get("FAIRSWEEP_GRID_CAP", str(10**6))),
            max_upload_bytes=int(
                os.environ.get("FAIRSWEEP_MAX_UPLOAD_BYTES", str(DEFAULT_MAX_UPLOAD))
            ),
            static_dir=Path(static) if static else None,
        )


def _new_id() -> str:
    return uuid.uuid4().hex[:12]


class DatasetStore:
    """Uploaded datasets, encoded at upload time and kept as JSON docs."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)

    def save(self, csv_bytes: bytes, data_section: dict) -> dict:
        """Prepare and persist; raises DataError/ConfigError on bad input."""
        violations = validate_data_section(data_section)
        if violations:
            raise ConfigError(violations)
        raw = load_csv(csv_bytes, missing_codes=tuple(
            str(c) for c in data_section.get("missing_codes", [])
        ))
        # canonical_config validates the full document, so wrap the
        # section in a minimal config to reuse it
        canonical = canonical_config({"data": data_section})
        d = prepare_dataset(csv_bytes, canonical)
        ds_id = _new_id()
        target = canonical["data"]["task"]["target"]
        n_pos = int((d.target == 1).sum())
        n_g0 = int((d.sensitive == 0).sum())
        summary = {
            "id": ds_id,
            "n_rows": d.n_rows,
            "columns": [
                {"name": c.name, "kind": c.kind} for c in raw.columns
            ],
            "feature_columns": list(d.feature_matrix()[1]),
            "class_counts": {"positive": n_pos, "negative": d.n_rows - n_pos},
            "group_counts": {"group0": n_g0, "group1": d.n_rows - n_g0},
            "target": target,
        }
        ddir = self.root / ds_id
        ddir.mkdir(parents=True)
        (ddir / "dataset.json").write_bytes(json_bytes(d.to_json_dict()))
        (ddir / "meta.json").write_bytes(json_bytes(
            {"summary": summary, "data_section": canonical["data"]}
        ))
        return summary

    def load(self, ds_id: str):
        ddir = self.root / ds_id
        if not (ddir / "meta.json").exists():
            return None
        meta = json.loads((ddir / "meta.json").read_bytes())
        d = Dataset.from_json_dict(json.loads((ddir / "dataset.json").read_bytes()))
        return d, meta["data_section"]


@dataclass
class Job:
    id: str
    dataset_id: str
    canonical: dict
    state: str = "pending"
    completed: int = 0
    total: int = 0
    error: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def progress_doc(self) -> dict:
        with self.lock:
            total = self.total
            completed = self.completed
            state = self.state
            error = self.error
        fraction = 1.0 if state == "finished" else (completed / total if total else 0.0)
        doc = {
            "state": state,
            "fraction": fraction,
            "completed": completed,
            "total": total,
        }
        if error is not None:
            doc["error"] = error
        return doc


class JobManager:
    """FIFO background execution with per-job directories on disk."""

    def __init__(self, settings: Settings, store: DatasetStore):
        self.settings = settings
        self.store = store
        self.root = settings.data_root / "jobs"
        self.root.mkdir(parents=True, exist_ok=True)
        self.jobs: dict[str, Job] = {}
        self._jobs_lock = threading.Lock()
        self._queue: "queue.Queue[str]" = queue.Queue()
        self._worker = threading.Thread(target=self._run_loop, daemon=True)
        self._worker.start()

    def submit(self, dataset_id: str, canonical: dict) -> Job:
        job = Job(
            id=_new_id(),
            dataset_id=dataset_id,
            canonical=canonical,
            total=exploration_task_total(canonical),
        )
        with self._jobs_lock:
            self.jobs[job.id] = job
        self._queue.put(job.id)
        return job

    def get(self, job_id: str) -> Job | None:
        with self._jobs_lock:
            job = self.jobs.get(job_id)
        if job is not None:
            return job
        return self._load_from_disk(job_id)

    def _load_from_disk(self, job_id: str) -> Job | None:
        jdir = self.root / job_id
        doc_path = jdir / "job.json"
        if not doc_path.exists():
            return None
        doc = json.loads(doc_path.read_bytes())
        job = Job(
            id=doc["id"],
            dataset_id=doc["dataset_id"],
            canonical=doc["config"],
            state=doc["state"],
            completed=doc["completed"],
            total=doc["total"],
            error=doc.get("error"),
        )
        with self._jobs_lock:
            self.jobs.setdefault(job_id, job)
        return job

    def records_bytes(self, job: Job) -> bytes | None:
        path = self.root / job.id / "records.json"
        if not path.exists():
            return None
        return path.read_bytes()

    def _persist(self, job: Job):
        jdir = self.root / job.id
        jdir.mkdir(parents=True, exist_ok=True)
        with job.lock:
            doc = {
                "id": job.id,
                "dataset_id": job.dataset_id,
                "config": job.canonical,
                "state": job.state,
                "completed": job.completed,
                "total": job.total,
                "error": job.error,
            }
        (jdir / "job.json").write_bytes(json_bytes(doc))

    def _run_loop(self):
        while True:
            job_id = self._queue.get()
            with self._jobs_lock:
                job = self.jobs.get(job_id)
            if job is None:
                continue
            self._execute(job)

    def _execute(self, job: Job):
        with job.lock:
            job.state = "running"
        try:
            loaded = self.store.load(job.dataset_id)
            if loaded is None:
                raise DataError(f"dataset {job.dataset_id} no longer exists")
            dataset, _ = loaded

            def on_change(done, total):
                with job.lock:
                    job.completed = done

            sink = ProgressSink(total=job.total, on_change=on_change)
            records = run_exploration(
                dataset,
                job.canonical,
                progress=sink,
                cap=self.settings.grid_cap,
            )
            jdir = self.root / job.id
            jdir.mkdir(parents=True, exist_ok=True)
            (jdir / "records.json").write_bytes(records_json_bytes(records))
            with job.lock:
                job.state = "finished"
                job.completed = job.total
        except Exception as e:  # noqa: BLE001 - job must reach a terminal state
            with job.lock:
                job.state = "failed"
                job.error = str(e)
        self._persist(job)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def _violations(status: int, violations) -> JSONResponse:
    return JSONResponse({"violations": list(violations)}, status_code=status)


def _load_records(manager: JobManager, job: Job) -> list[EvaluationRecord]:
    raw = manager.records_bytes(job)
    doc = json.loads(raw)
    return [EvaluationRecord.from_json_dict(r) for r in doc["records"]]


def create_app(settings: Settings | None = None) -> FastAPI:
    settings = settings or Settings.from_env()
    store = DatasetStore(settings.data_root / "datasets")
    manager = JobManager(settings, store)
    app = FastAPI(title="fairsweep", docs_url=None, redoc_url=None)
    app.state.settings = settings
    app.state.manager = manager

    @app.post("/datasets")
    async def upload_dataset(
        file: UploadFile = File(...), config: str = Form(...)
    ):
        csv_bytes = await file.read()
        if len(csv_bytes) > settings.max_upload_bytes:
            return _error(
                413,
                f"upload of {len(csv_bytes)} bytes exceeds the cap of "
                f"{settings.max_upload_bytes}",
            )
        try:
            data_section = json.loads(config)
        except json.JSONDecodeError as e:
            return _error(400, f"config part is not valid JSON: {e}")
        try:
            summary = store.save(csv_bytes, data_section)
        except ConfigError as e:
            return _violations(400, e.violations)
        except DataError as e:
            return _error(400, str(e))
        return JSONResponse(summary, status_code=201)

    @app.post("/explorations")
    async def create_exploration(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError as e:
            return _error(400, f"body is not valid JSON: {e}")
        if not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        dataset_id = body.get("dataset_id")
        if not isinstance(dataset_id, str):
            return _error(400, "dataset_id: required string missing")
        loaded = store.load(dataset_id)
        if loaded is None:
            return _error(404, f"unknown dataset: {dataset_id}")
        _, data_section = loaded
        doc = {k: v for k, v in body.items() if k != "dataset_id"}
        doc["data"] = data_section
        try:
            canonical = canonical_config(doc)
        except ConfigError as e:
            return _violations(422, e.violations)
        violations = _cap_violations(canonical, settings.grid_cap)
        if violations:
            return _violations(422, violations)
        job = manager.submit(dataset_id, canonical)
        return JSONResponse({"id": job.id}, status_code=202)

    def _job_or_none(job_id: str) -> Job | None:
        return manager.get(job_id)

    @app.get("/explorations/{job_id}/progress")
    def get_progress(job_id: str):
        job = _job_or_none(job_id)
        if job is None:
            return _error(404, f"unknown exploration: {job_id}")
        return JSONResponse(job.progress_doc())

    @app.get("/explorations/{job_id}/records")
    def get_records(job_id: str):
        job = _job_or_none(job_id)
        if job is None:
            return _error(404, f"unknown exploration: {job_id}")
        if job.progress_doc()["state"] != "finished":
            return _error(409, "exploration has not finished")
        raw = manager.records_bytes(job)
        return Response(content=raw, media_type="application/json")

    @app.get("/explorations/{job_id}/frontier")
    def get_frontier(
        job_id: str,
        metric: str,
        grouping: str = "per_family",
        mode: str | None = None,
    ):
        job = _job_or_none(job_id)
        if job is None:
            return _error(404, f"unknown exploration: {job_id}")
        if job.progress_doc()["state"] != "finished":
            return _error(409, "exploration has not finished")
        if metric not in METRIC_IDS:
            return _error(400, f"unknown fairness metric: {metric!r}")
        if metric not in job.canonical["metrics"]:
            return _error(400, f"metric {metric!r} was not computed in this exploration")
        if grouping not in GROUPINGS:
            return _error(400, f"unknown grouping: {grouping!r}")
        mode = mode or job.canonical["mode"]
        if mode not in MODES:
            return _error(400, f"unknown dominance mode: {mode!r}")
        records = _load_records(manager, job)
        pair = ObjectivePair(x=job.canonical["accuracy_objective"], y=metric)
        sets = extract_frontier(records, pair, mode=mode, grouping=grouping)
        if grouping == "all_families":
            payload = sets[0].to_json_dict()
        else:
            payload = [p.to_json_dict() for p in sets]
        return Response(content=json_bytes(payload), media_type="application/json")

    @app.get("/explorations/{job_id}/report")
    def get_report(job_id: str):
        job = _job_or_none(job_id)
        if job is None:
            return _error(404, f"unknown exploration: {job_id}")
        if job.progress_doc()["state"] != "finished":
            return _error(409, "exploration has not finished")
        records = _load_records(manager, job)
        text = generate_report(
            records,
            metric_ids=tuple(job.canonical["metrics"]),
            mode=job.canonical["mode"],
            config_json=config_json_bytes(job.canonical),
            accuracy_objective=job.canonical["accuracy_objective"],
        )
        return Response(content=text.encode("utf-8"), media_type="text/markdown")

    @app.get("/explorations/{job_id}/export/{fmt}")
    def get_export(
        job_id: str,
        fmt: str,
        metric: str,
        family: str | None = None,
        mode: str | None = None,
    ):
        job = _job_or_none(job_id)
        if job is None:
            return _error(404, f"unknown exploration: {job_id}")
        if job.progress_doc()["state"] != "finished":
            return _error(409, "exploration has not finished")
        if fmt not in ("csv", "json"):
            return _error(400, f"unknown export format: {fmt!r}")
        if metric not in METRIC_IDS:
            return _error(400, f"unknown fairness metric: {metric!r}")
        if metric not in job.canonical["metrics"]:
            return _error(400, f"metric {metric!r} was not computed in this exploration")
        if family is not None and family not in FAMILIES:
            return _error(400, f"unknown model family: {family!r}")
        mode = mode or job.canonical["mode"]
        if mode not in MODES:
            return _error(400, f"unknown dominance mode: {mode!r}")
        records = _load_records(manager, job)
        pair = ObjectivePair(x=job.canonical["accuracy_objective"], y=metric)
        if family is None:
            pset = extract_frontier(records, pair, mode=mode, grouping="all_families")[0]
        else:
            sets = extract_frontier(records, pair, mode=mode, grouping="per_family")
            match = [p for p in sets if p.family == family]
            if not match:
                return _error(400, f"family {family!r} has no records in this exploration")
            pset = match[0]
        table = build_table(pset, metric_ids=tuple(job.canonical["metrics"]))
        if fmt == "csv":
            return Response(content=table.to_csv_bytes(), media_type="text/csv")
        return Response(content=table.to_json_bytes(), media_type="application/json")

    if settings.static_dir is not None and settings.static_dir.is_dir():
        app.mount("/", StaticFiles(directory=settings.static_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return JSONResponse({"service": "fairsweep", "ui": "not bundled"})

    return app


def _cap_violations(canonical: dict, cap: int) -> list[str]:
    out = []
    for family, space in family_spaces(canonical).items():
        size = grid_size(space)
        if size > cap:
            out.append(
                f"spaces.{family}: grid of {size} assignments exceeds the cap of {cap}"
            )
    return out


def main():
    import uvicorn

    settings = Settings.from_env()
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)


if __name__ == "__main__":
    main()
