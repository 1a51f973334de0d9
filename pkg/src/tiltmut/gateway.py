"""JSON-over-HTTP facade for the explorer UI.

Presentations travel by value (canonical grammar text) in every request;
sessions are an optional convenience holding a replayable move tree.  All
scalars in responses are exact rational strings.  Domain errors surface as
422 with a machine-readable code, schema violations as 400, unknown
sessions as 404.
"""

from __future__ import annotations

import itertools
import threading

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import fixtures
from .algebra import FDAlgebra, build_table, validate
from .errors import TiltmutError
from .msob import (mutate_system_left, mutate_system_right, simples_system,
                   system_from_json, system_to_json)
from .mutation import mutate, presentation_iso
from .quiver import ParseError, parse_presentation, print_presentation
from .render import mutation_json, presentation_json, validation_json

SCHEMAS = {
    "presentation": {
        "type": "object",
        "properties": {"text": {"type": "string"}},
        "required": ["text"],
    },
    "parseRequest": {
        "type": "object",
        "properties": {"text": {"type": "string"}},
        "required": ["text"],
    },
    "mutateRequest": {
        "type": "object",
        "properties": {
            "presentation": {"$ref": "#/presentation"},
            "vertex": {"type": "string"},
            "side": {"enum": ["left", "right"]},
            "reduce": {"type": "boolean"},
            "checked": {"type": "boolean"},
        },
        "required": ["presentation", "vertex"],
    },
    "msobMutateRequest": {
        "type": "object",
        "properties": {
            "presentation": {"$ref": "#/presentation"},
            "system": {"type": "object"},
            "vertex": {"type": "string"},
            "side": {"enum": ["left", "right"]},
        },
        "required": ["presentation", "vertex"],
    },
    "sessionCreate": {
        "type": "object",
        "properties": {"presentation": {"$ref": "#/presentation"}},
        "required": ["presentation"],
    },
    "sessionMove": {
        "type": "object",
        "properties": {
            "node": {"type": "integer"},
            "vertex": {"type": "string"},
            "side": {"enum": ["left", "right"]},
        },
        "required": ["vertex"],
    },
}


class SessionStore:
    """Move trees; every node's presentation is reproducible by replaying
    moves from the root."""

    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, dict] = {}
        self._counter = itertools.count(1)

    def create(self, text: str) -> dict:
        with self._lock:
            sid = str(next(self._counter))
            session = {"id": sid,
                       "nodes": [{"id": 0, "parent": None, "move": None,
                                  "presentation": text}]}
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> dict:
        with self._lock:
            if sid not in self._sessions:
                raise KeyError(sid)
            return self._sessions[sid]

    def add_node(self, sid: str, parent: int, move: dict, text: str) -> dict:
        with self._lock:
            session = self._sessions[sid]
            node = {"id": len(session["nodes"]), "parent": parent,
                    "move": move, "presentation": text}
            session["nodes"].append(node)
            return node


def _parse_or_400(payload, key="presentation"):
    if not isinstance(payload, dict):
        raise HTTPException(400, detail={"code": "SchemaViolation",
                                         "message": "body must be an object"})
    pres_obj = payload.get(key)
    if isinstance(pres_obj, str):
        text = pres_obj
    elif isinstance(pres_obj, dict) and isinstance(pres_obj.get("text"), str):
        text = pres_obj["text"]
    else:
        raise HTTPException(400, detail={"code": "SchemaViolation",
                                         "message": f"missing {key}.text"})
    try:
        return parse_presentation(text)
    except ParseError as e:
        raise HTTPException(422, detail={"code": "ParseError", "message": str(e),
                                         "line": e.line, "col": e.col})


def _domain(e: TiltmutError) -> HTTPException:
    return HTTPException(422, detail={"code": e.code, "message": str(e)})


def create_app() -> FastAPI:
    app = FastAPI(title="tiltmut gateway", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store = SessionStore()

    @app.get("/api/schema")
    def schema():
        return SCHEMAS

    @app.get("/api/examples")
    def examples():
        return [{"name": name, "text": fixtures.builtin_text(name)}
                for name in fixtures.builtin_names()]

    @app.post("/api/parse")
    def parse(payload: dict = Body(...)):
        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            raise HTTPException(400, detail={"code": "SchemaViolation",
                                             "message": "missing text"})
        try:
            pres = parse_presentation(payload["text"])
        except ParseError as e:
            return {"errors": [{"message": str(e), "line": e.line, "col": e.col}]}
        return {"presentation": presentation_json(pres)}

    @app.post("/api/validate")
    def validate_ep(payload: dict = Body(...)):
        pres = _parse_or_400(payload)
        return validation_json(validate(pres))

    @app.post("/api/mutate")
    def mutate_ep(payload: dict = Body(...)):
        pres = _parse_or_400(payload)
        vertex = payload.get("vertex")
        if not isinstance(vertex, str):
            raise HTTPException(400, detail={"code": "SchemaViolation",
                                             "message": "missing vertex"})
        side = payload.get("side", "left")
        if side not in ("left", "right"):
            raise HTTPException(400, detail={"code": "SchemaViolation",
                                             "message": "side must be left/right"})
        try:
            alg = FDAlgebra(build_table(pres))
            checked = bool(payload.get("checked", True)) and alg.dim <= 200
            result = mutate(alg, vertex, side=side,
                            reduce=bool(payload.get("reduce", True)),
                            checked=checked)
        except TiltmutError as e:
            raise _domain(e)
        except ValueError as e:
            raise HTTPException(422, detail={"code": "BadVertex", "message": str(e)})
        data = mutation_json(result, alg)
        base = parse_presentation(print_presentation(pres))
        iso = presentation_iso(result.reduced, base, budget=50000)
        data["isomorphicToInput"] = iso is not None
        return data

    @app.post("/api/msob/mutate")
    def msob_ep(payload: dict = Body(...)):
        pres = _parse_or_400(payload)
        vertex = payload.get("vertex")
        if not isinstance(vertex, str):
            raise HTTPException(400, detail={"code": "SchemaViolation",
                                             "message": "missing vertex"})
        try:
            alg = FDAlgebra(build_table(pres))
            if vertex not in alg.quiver.vertex_index:
                raise HTTPException(422, detail={"code": "BadVertex",
                                                 "message": f"unknown vertex {vertex}"})
            sys0 = system_from_json(alg, payload["system"]) \
                if payload.get("system") else simples_system(alg)
            i = alg.quiver.vertices.index(vertex)
            side = payload.get("side", "left")
            mutated = mutate_system_left(sys0, i) if side == "left" \
                else mutate_system_right(sys0, i)
        except TiltmutError as e:
            raise _domain(e)
        return system_to_json(mutated)

    @app.post("/api/session")
    def session_create(payload: dict = Body(...)):
        pres = _parse_or_400(payload)
        session = store.create(print_presentation(pres))
        return session

    @app.get("/api/session/{sid}")
    def session_get(sid: str):
        try:
            return store.get(sid)
        except KeyError:
            raise HTTPException(404, detail={"code": "UnknownSession", "message": sid})

    @app.post("/api/session/{sid}/move")
    def session_move(sid: str, payload: dict = Body(...)):
        try:
            session = store.get(sid)
        except KeyError:
            raise HTTPException(404, detail={"code": "UnknownSession", "message": sid})
        vertex = payload.get("vertex")
        side = payload.get("side", "left")
        parent = payload.get("node", len(session["nodes"]) - 1)
        if not isinstance(vertex, str) or side not in ("left", "right") \
                or not isinstance(parent, int) or not (0 <= parent < len(session["nodes"])):
            raise HTTPException(400, detail={"code": "SchemaViolation",
                                             "message": "bad move body"})
        text = session["nodes"][parent]["presentation"]
        pres = parse_presentation(text)
        try:
            alg = FDAlgebra(build_table(pres))
            result = mutate(alg, vertex, side=side, reduce=True,
                            checked=alg.dim <= 200)
        except TiltmutError as e:
            raise _domain(e)
        except ValueError as e:
            raise HTTPException(422, detail={"code": "BadVertex", "message": str(e)})
        new_text = print_presentation(result.reduced)
        node = store.add_node(sid, parent, {"vertex": vertex, "side": side}, new_text)
        return {"node": node, "mutation": mutation_json(result, alg, with_simples=False)}

    _mount_frontend(app)
    return app


def _mount_frontend(app: FastAPI) -> None:
    """Serve the built explorer UI when the checkout has one."""
    import pathlib

    from fastapi.responses import FileResponse
    from fastapi.staticfiles import StaticFiles

    root = pathlib.Path(__file__).resolve().parents[2] / "frontend"
    index = root / "index.html"
    dist = root / "dist"
    if not index.exists():
        return

    @app.get("/")
    def home():
        return FileResponse(index)

    if dist.exists():
        app.mount("/dist", StaticFiles(directory=dist), name="dist")
