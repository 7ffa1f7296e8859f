"""JSON API over the worksheet generator and the consultation engine.

The HTTP layer stays a thin adapter: handlers translate payloads and map
library errors to {code, message, details} bodies; no inference or
generation logic lives here.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .. import esengine, eskb, worksheet
from ..controls import Checkbox, ControlPanel, InputBox, InputValueType, LayoutSpec, render_form_spec
from ..esengine import NO_RESPONSE, CFValue, Question, Session, Status

DEFAULT_SESSION_TIMEOUT = 30 * 60.0


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


@dataclass
class KbEntry:
    kb_id: str
    title: str
    text: str
    kb: eskb.KnowledgeBase
    source: str  # bundled | directory | upload


class KbRegistry:
    """Bundled and uploaded knowledge bases, addressed by content hash."""

    def __init__(self):
        self._entries: dict[str, KbEntry] = {}
        self._aliases: dict[str, str] = {}
        self._lock = threading.Lock()

    def register(self, text: str, source: str, alias: Optional[str] = None) -> KbEntry:
        kb = eskb.parse_kb(text)
        kb_id = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
        entry = KbEntry(kb_id, kb.title, text, kb, source)
        with self._lock:
            self._entries[kb_id] = entry
            if alias:
                self._aliases[alias] = kb_id
        return entry

    def get(self, key: str) -> KbEntry:
        with self._lock:
            kb_id = self._aliases.get(key, key)
            entry = self._entries.get(kb_id)
        if entry is None:
            raise ApiError(404, "UnknownKB", f"no knowledge base {key!r}")
        return entry

    def list(self) -> list[KbEntry]:
        with self._lock:
            return list(self._entries.values())


@dataclass
class StoredSession:
    session: Session
    kb_id: str
    last_activity: float = field(default_factory=time.monotonic)


class SessionStore:
    """In-memory sessions with idle expiry; mutation is serialized."""

    def __init__(self, timeout: float = DEFAULT_SESSION_TIMEOUT):
        self.timeout = timeout
        self._sessions: dict[str, StoredSession] = {}
        self._lock = threading.RLock()

    def _prune(self):
        deadline = time.monotonic() - self.timeout
        for sid in [s for s, e in self._sessions.items() if e.last_activity < deadline]:
            del self._sessions[sid]

    def create(self, session: Session, kb_id: str) -> str:
        with self._lock:
            self._prune()
            sid = secrets.token_urlsafe(16)  # 128-bit, URL-safe
            self._sessions[sid] = StoredSession(session, kb_id)
            return sid

    def get(self, sid: str) -> StoredSession:
        with self._lock:
            self._prune()
            entry = self._sessions.get(sid)
            if entry is None:
                raise ApiError(404, "UnknownSession", f"no session {sid!r}")
            entry.last_activity = time.monotonic()
            return entry

    def lock(self) -> threading.RLock:
        return self._lock


class WorksheetBody(BaseModel):
    template: str
    num_variants: int
    seed: int = 0
    show_answers: bool = False


class ConsultationBody(BaseModel):
    kb_id: str


class AnswerItem(BaseModel):
    value: object
    cf: int = 100


class AnswerBody(BaseModel):
    values: Optional[list[AnswerItem]] = None
    no_response: bool = False


def question_obj(q: Question) -> dict:
    return {
        "attr": q.attr,
        "prompt": q.prompt,
        "prompt_type": q.prompt_type.value,
        "choices": list(q.choices),
        "allow_no_response": q.allow_no_response,
        "cf_options": list(q.cf_options),
    }


def session_obj(sid: str, session: Session) -> dict:
    return {
        "session_id": sid,
        "status": session.status.value,
        "question": question_obj(session.pending) if session.pending else None,
        "conclusions": [
            {"goal": c.goal, "value": c.value, "cf": c.cf, "accepted": c.accepted}
            for c in session.conclusions
        ]
        if session.status is not Status.IN_PROGRESS
        else None,
        "trace_cursor": len(session.trace),
    }


def request_form_spec() -> dict:
    """The worksheet request form, expressed as a control panel."""
    panel = ControlPanel(
        controls={
            "num_variants": InputBox("2", "Кількість варіантів", InputValueType.INTEGER, width=6),
            "seed": InputBox("0", "Початкове зерно", InputValueType.INTEGER, width=10),
            "show_answers": Checkbox(False, "Показувати відповідь"),
        },
        layout=LayoutSpec(top=(("num_variants", "seed"),), bottom=(("show_answers",),)),
    )
    return render_form_spec(panel)


_ENGINE_ERRORS = {
    esengine.NotPending: (409, "WrongState"),
    esengine.NotFinished: (409, "WrongState"),
    esengine.WrongAttribute: (400, "WrongAttribute"),
    esengine.BadValue: (400, "BadValue"),
    esengine.BadCF: (400, "BadCF"),
    esengine.InvalidKB: (400, "InvalidKB"),
}


def _map_engine_error(err: Exception) -> ApiError:
    for kind, (status, code) in _ENGINE_ERRORS.items():
        if isinstance(err, kind):
            return ApiError(status, code, str(err))
    raise err


def _fallback_index() -> str:
    return (
        "<!DOCTYPE html><html><head><meta charset='utf-8'>"
        "<title>mathforge</title></head><body>"
        "<h1>mathforge service</h1>"
        "<p>API під /api; веб-інтерфейс не встановлено (запустіть serve зі "
        "--static-dir).</p></body></html>"
    )


def create_app(
    kb_dir: Optional[str] = None,
    static_dir: Optional[str] = None,
    session_timeout: float = DEFAULT_SESSION_TIMEOUT,
) -> FastAPI:
    app = FastAPI(title="mathforge", docs_url=None, redoc_url=None)
    registry = KbRegistry()
    store = SessionStore(session_timeout)

    bundled = resources.files("mathforge").joinpath("data/kb")
    for entry in sorted(bundled.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".kb"):
            text = eskb._decode(entry.read_bytes())
            registry.register(text, "bundled", alias=Path(entry.name).stem)
    if kb_dir:
        for path in sorted(Path(kb_dir).glob("*.kb")):
            text = eskb._decode(path.read_bytes())
            registry.register(text, "directory", alias=path.stem)

    @app.exception_handler(ApiError)
    async def on_api_error(_request: Request, err: ApiError):
        body = {"code": err.code, "message": err.message}
        if err.details is not None:
            body["details"] = err.details
        return JSONResponse(status_code=err.status, content=body)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/templates")
    def list_templates():
        return {
            "templates": [
                {
                    "id": t.id,
                    "title": t.title,
                    "tasks": list(t.task_kinds),
                    "answer_stride": t.answer_stride,
                }
                for t in worksheet.builtin_templates().values()
            ],
            "form_spec": request_form_spec(),
        }

    @app.post("/api/worksheets")
    def make_worksheet(body: WorksheetBody):
        try:
            template = worksheet.get_template(body.template)
        except worksheet.UnknownTemplate as err:
            raise ApiError(404, "UnknownTemplate", str(err))
        try:
            request = worksheet.WorksheetRequest(
                template_id=body.template,
                num_variants=body.num_variants,
                seed=body.seed,
                show_answers=body.show_answers,
            )
        except worksheet.BadParams as err:
            raise ApiError(400, "BadRequest", str(err))
        try:
            doc = worksheet.build_worksheet(template, request)
        except worksheet.NonGenerable as err:
            raise ApiError(
                422,
                "NonGenerable",
                str(err),
                details={"variant": err.variant, "task": err.task},
            )
        return {
            "html": worksheet.render_html(doc, request.show_answers),
            "latex": worksheet.render_latex(doc, request.show_answers),
            "answer_key": worksheet.answer_key_obj(doc),
        }

    @app.post("/api/kb/validate")
    async def kb_validate(request: Request):
        raw = await request.body()
        try:
            kb = eskb.parse_kb(raw)
        except eskb.EncodingError as err:
            raise ApiError(400, "EncodingError", str(err))
        except eskb.KbError as err:
            return {
                "valid": False,
                "diagnostics": [{"code": type(err).__name__, "message": str(err), "subject": ""}],
            }
        diagnostics = eskb.validate_kb(kb)
        return {
            "valid": not diagnostics,
            "diagnostics": [
                {"code": d.code, "message": d.message, "subject": d.subject}
                for d in diagnostics
            ],
        }

    @app.post("/api/kb", status_code=201)
    async def kb_upload(request: Request):
        raw = await request.body()
        try:
            text = eskb._decode(raw)
            entry = registry.register(text, "upload")
        except eskb.EncodingError as err:
            raise ApiError(400, "EncodingError", str(err))
        except eskb.KbError as err:
            raise ApiError(400, type(err).__name__, str(err))
        return {"kb_id": entry.kb_id, "title": entry.title}

    @app.get("/api/kb")
    def kb_list():
        return {
            "knowledge_bases": [
                {"id": e.kb_id, "title": e.title, "source": e.source}
                for e in registry.list()
            ]
        }

    def _merged_translations(session: Session) -> dict:
        table = esengine.default_translations()
        table.update(session.kb.translations)
        return table

    @app.post("/api/consultations", status_code=201)
    def consultation_create(body: ConsultationBody):
        entry = registry.get(body.kb_id)
        try:
            session = esengine.start(entry.kb)
        except esengine.EngineError as err:
            raise _map_engine_error(err)
        sid = store.create(session, entry.kb_id)
        payload = session_obj(sid, session)
        payload["kb"] = {
            "id": entry.kb_id,
            "title": entry.title,
            "translations": _merged_translations(session),
        }
        return payload

    @app.post("/api/consultations/{sid}/answers")
    def consultation_answer(sid: str, body: AnswerBody):
        with store.lock():
            entry = store.get(sid)
            session = entry.session
            if session.pending is None:
                raise ApiError(409, "WrongState", "consultation is not awaiting an answer")
            if body.no_response:
                values = NO_RESPONSE
            else:
                if not body.values:
                    raise ApiError(400, "BadValue", "values are required unless no_response is set")
                try:
                    values = [
                        CFValue(
                            str(item.value) if isinstance(item.value, float) else item.value,
                            item.cf,
                        )
                        for item in body.values
                    ]
                except esengine.BadCF as err:
                    raise ApiError(400, "BadCF", str(err))
            try:
                esengine.answer(session, session.pending.attr, values)
            except esengine.EngineError as err:
                raise _map_engine_error(err)
            return session_obj(sid, session)

    @app.get("/api/consultations/{sid}/why")
    def consultation_why(sid: str):
        with store.lock():
            entry = store.get(sid)
            try:
                return {"text": esengine.why_ask(entry.session)}
            except esengine.EngineError as err:
                raise _map_engine_error(err)

    @app.get("/api/consultations/{sid}/explain")
    def consultation_explain(sid: str):
        with store.lock():
            entry = store.get(sid)
            try:
                return {"text": esengine.explain(entry.session)}
            except esengine.EngineError as err:
                raise _map_engine_error(err)

    @app.post("/api/consultations/{sid}/restart")
    def consultation_restart(sid: str):
        with store.lock():
            entry = store.get(sid)
            entry.session = esengine.restart(entry.session)
            return session_obj(sid, entry.session)

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _fallback_index()

    return app
