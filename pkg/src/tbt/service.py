"""HTTP/JSON service over the session engine.

One writer at a time per session: ops take the session's lock and swap an
immutable Session value, so concurrent op posts linearize and reads never
block. All response bodies are emitted through the canonical JSON encoder,
which makes repeated GETs byte-identical.

Error envelope: {"error": {"code", "message", "detail"}} with
bad_request -> 400, not_found -> 404, conflict -> 409, internal -> 500.
"""

from __future__ import annotations

import threading
from typing import Any, Optional

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import Response

from . import jsonutil
from . import session as S
from .boosting import core
from .boosting.core import FitParams
from .data import (
    DataError,
    Dataset,
    dataset_from_json,
    group_features,
    load_csv,
    sniff_label_column,
    split_train_test,
)

DEFAULT_PORT = 8642

_STATUS = {"bad_request": 400, "not_found": 404, "conflict": 409, "internal": 500}


class ApiError(Exception):
    def __init__(self, code: str, message: str, detail: Any = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail


def _err_response(code: str, message: str, detail: Any = None) -> Response:
    body = {"error": {"code": code, "message": message, "detail": detail}}
    return Response(
        content=jsonutil.dumps(body),
        status_code=_STATUS.get(code, 500),
        media_type="application/json",
    )


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(content=jsonutil.dumps(payload), status_code=status_code, media_type="application/json")


class _Box:
    """One live session plus its writer lock."""

    def __init__(self, sess: S.Session):
        self.session = sess
        self.lock = threading.Lock()


class _DatasetEntry:
    def __init__(self, source):
        self.source = source  # Dataset | (train, test) | path str
        self.lock = threading.Lock()

    def load(self) -> Dataset | tuple[Dataset, Dataset]:
        with self.lock:
            if isinstance(self.source, str):
                self.source = _load_csv_auto(self.source)
            return self.source


def _load_csv_auto(path: str) -> Dataset:
    return load_csv(path, label_column=sniff_label_column(path))


def _opt(payload: dict, key: str, typ, default):
    if key not in payload or payload[key] is None:
        return default
    v = payload[key]
    try:
        return typ(v)
    except (TypeError, ValueError):
        raise ApiError("bad_request", f"bad value for {key!r}: {v!r}", {"argument": key}) from None


def create_app(datasets: dict[str, Any] | None = None, ui_dir: str | None = None) -> FastAPI:
    """App factory. datasets maps registry names to a Dataset, a
    (train, test) pair, or a CSV path loaded lazily on first use.
    ui_dir, when given, is served statically at / (the browser client)."""
    app = FastAPI(title="tbt", docs_url=None, redoc_url=None, openapi_url=None)
    registry: dict[str, _Box] = {}
    data_registry: dict[str, _DatasetEntry] = {
        name: _DatasetEntry(src) for name, src in (datasets or {}).items()
    }

    @app.exception_handler(ApiError)
    async def _on_api_error(_req: Request, exc: ApiError):
        return _err_response(exc.code, exc.message, exc.detail)

    @app.exception_handler(S.OperationError)
    async def _on_op_error(_req: Request, exc: S.OperationError):
        return _err_response(exc.code, exc.message, exc.detail)

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(_req: Request, exc: RequestValidationError):
        return _err_response("bad_request", "malformed request body", str(exc))

    @app.exception_handler(Exception)
    async def _on_internal(_req: Request, exc: Exception):
        return _err_response("internal", f"{type(exc).__name__}: {exc}")

    def _box(sid: str) -> _Box:
        box = registry.get(sid)
        if box is None:
            raise ApiError("not_found", f"unknown session {sid!r}", {"session_id": sid})
        return box

    def _registry_dataset(name: str) -> Dataset | tuple[Dataset, Dataset]:
        entry = data_registry.get(name)
        if entry is None:
            raise ApiError("not_found", f"unknown dataset {name!r}", {"dataset": name})
        try:
            return entry.load()
        except (OSError, DataError) as exc:
            raise ApiError("internal", f"failed to load dataset {name!r}: {exc}") from None

    def _resolve_datasets(payload: dict) -> tuple[Dataset, Dataset]:
        test_fraction = _opt(payload, "test_fraction", float, 0.3)
        seed = _opt(payload, "seed", int, 42)
        if "dataset" in payload:
            d = _registry_dataset(str(payload["dataset"]))
            if isinstance(d, tuple):
                return d
            return split_train_test(d, test_fraction, seed)
        if "dataset_json" in payload:
            d = dataset_from_json(payload["dataset_json"])
            return split_train_test(d, test_fraction, seed)
        if "train_json" in payload and "test_json" in payload:
            train = dataset_from_json(payload["train_json"])
            test = dataset_from_json(payload["test_json"])
            if [(f.name, f.kind) for f in train.features] != [(f.name, f.kind) for f in test.features] or \
                    train.categories != test.categories or train.label_names != test.label_names:
                raise ApiError("bad_request", "train/test feature spaces differ")
            return train, test
        raise ApiError("bad_request", "need one of: dataset, dataset_json, train_json+test_json")

    @app.get("/datasets")
    def list_datasets():
        return _json_response({"datasets": sorted(data_registry)})

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)):
        try:
            train, test = _resolve_datasets(payload)
            params = FitParams(
                trees=_opt(payload, "trees", int, 5),
                depth=_opt(payload, "depth", int, 3),
                eta=_opt(payload, "eta", float, 0.3),
                lam=_opt(payload, "lambda", float, 1.0),
                min_leaf=_opt(payload, "min_leaf", int, 1),
                min_gain=_opt(payload, "min_gain", float, 1e-6),
                max_trees=_opt(payload, "max_trees", int, 512),
            )
            grouping = group_features(train, str(payload.get("grouping", "single-group")))
        except (DataError, core.BoostingError) as exc:
            raise ApiError("bad_request", str(exc)) from None
        try:
            sess = S.create_session(train, test, grouping, params)
        except core.BoostingError as exc:
            raise ApiError("internal", f"initial fit failed: {exc}") from None
        registry[sess.id] = _Box(sess)
        rec = sess.history[0]
        return _json_response(
            {
                "session_id": sess.id,
                "history_length": len(sess.history),
                "n_trees": len(sess.model.trees),
                "train_error": rec.train_error,
                "test_error": rec.test_error,
            },
            status_code=201,
        )

    @app.post("/sessions/import")
    def import_session(payload: dict = Body(...)):
        sess = S.import_session(payload)
        registry[sess.id] = _Box(sess)
        return _json_response(
            {"session_id": sess.id, "history_length": len(sess.history)}, status_code=201
        )

    @app.get("/sessions/{sid}/views/feature")
    def view_feature(sid: str):
        return _json_response(S.build_view(_box(sid).session, "feature"))

    @app.get("/sessions/{sid}/views/forest")
    def view_forest(sid: str):
        return _json_response(S.build_view(_box(sid).session, "forest"))

    @app.get("/sessions/{sid}/views/tree/{tree}")
    def view_tree(sid: str, tree: str):
        return _json_response(S.build_view(_box(sid).session, "tree", tree=_as_int(tree, "tree")))

    @app.get("/sessions/{sid}/views/path-purity")
    def view_purity(sid: str, tree: str, leaf: str):
        return _json_response(
            S.build_view(_box(sid).session, "path-purity", tree=_as_int(tree, "tree"), leaf=_as_int(leaf, "leaf"))
        )

    @app.get("/sessions/{sid}/views/history")
    def view_history(sid: str):
        return _json_response(S.build_view(_box(sid).session, "history"))

    @app.post("/sessions/{sid}/ops")
    def post_op(sid: str, payload: dict = Body(...)):
        box = _box(sid)
        with box.lock:
            before = box.session
            after = S.apply(before, payload)
            box.session = after
        rec = after.history[-1]
        return _json_response(
            {
                "history_length": len(after.history),
                "record": {
                    "index": rec.index,
                    "operation": rec.operation,
                    "train_error": rec.train_error,
                    "test_error": rec.test_error,
                },
                "changed_trees": S.changed_tree_indices(before.model, after.model),
                "n_trees": len(after.model.trees),
            }
        )

    @app.get("/sessions/{sid}/export")
    def export(sid: str):
        return _json_response(S.export_session(_box(sid).session))

    if ui_dir is not None:
        from starlette.staticfiles import StaticFiles

        # mounted last so the API routes above keep precedence
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _as_int(raw: str, name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ApiError("bad_request", f"{name} must be an integer, got {raw!r}", {"argument": name}) from None


def run(
    app: FastAPI,
    host: str = "127.0.0.1",
    port: int = DEFAULT_PORT,
    log_level: str = "warning",
) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level=log_level)
