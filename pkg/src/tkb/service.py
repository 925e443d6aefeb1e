"""HTTP consultation and entry service.

Every response is wrapped in an envelope: {"status": "ok", "data": ...} or
{"status": "error", "error": {"code", "message", "entities"}}, the code being
the domain error class name. Unknown ids map to 404, ViewpointConflict and
CycleWouldForm to 409, other domain errors to 422, malformed requests to 400.

Mutations are serialized through one lock and persisted to the knowledge-base
file (atomic rewrite) before the response is sent; reads take the same lock,
so no request ever observes a torn state. Single tenant, no authentication.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import store, views
from .errors import (
    CycleWouldForm,
    TkbError,
    UnknownEntity,
    ViewpointConflict,
)


def _status_for(exc: TkbError) -> int:
    if isinstance(exc, UnknownEntity):
        return 404
    if isinstance(exc, (ViewpointConflict, CycleWouldForm)):
        return 409
    return 422


def _ok(data):
    return {"status": "ok", "data": data}


def _error_body(code: str, message: str, entities=()):
    return {"status": "error",
            "error": {"code": code, "message": message,
                      "entities": list(entities)}}


class TermIn(BaseModel):
    surface: str
    language: str
    grammatical_category: str = ""
    gender: str | None = None
    number: str | None = None
    form_variants: list[str] = []
    decomposition: list[dict] | None = None
    source: str = "corpus"


class ViewpointIn(BaseModel):
    name: str
    description: str = ""


class ConceptIn(BaseModel):
    label: str
    description: str = ""
    attributes: list[dict] | dict[str, str] = {}
    parents: list[str] = []


class ParentIn(BaseModel):
    parent: str


class RelationIn(BaseModel):
    relation_type: str
    target: str
    definition_text: str = ""


class RelationTypeIn(BaseModel):
    name: str
    definition: str


class LinkIn(BaseModel):
    term: str
    concept: str
    viewpoint: str


class UsageIn(BaseModel):
    unit: str
    start: int
    end: int


class DocumentIn(BaseModel):
    title: str
    source_note: str = ""
    text: str


def create_app(kb_path, *, usage_span_mode: str = "strict",
               static_dir=None) -> FastAPI:
    kb_path = Path(kb_path)
    kb = store.load(kb_path, usage_span_mode=usage_span_mode)
    lock = threading.RLock()

    app = FastAPI(title="tkb", docs_url=None, redoc_url=None)
    app.state.kb = kb
    app.state.kb_path = kb_path
    # single-tenant, unauthenticated service: let a separately served UI
    # (dev server, file://) consult it
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def persist():
        store.save(kb, kb_path)

    @app.exception_handler(TkbError)
    async def tkb_error_handler(_request: Request, exc: TkbError):
        return JSONResponse(status_code=_status_for(exc),
                            content=_error_body(exc.code, str(exc), exc.entities))

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content=_error_body("MalformedRequest", str(exc)))

    @app.exception_handler(ValueError)
    async def value_error_handler(_request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content=_error_body("MalformedRequest", str(exc)))

    # ------------------------------------------------------------- reads

    @app.get("/concepts")
    def get_concepts():
        with lock:
            return _ok(views.concept_list(kb))

    @app.get("/concepts/{concept_id}")
    def get_concept(concept_id: str):
        with lock:
            return _ok(views.concept_summary(kb, concept_id))

    @app.get("/concepts/{concept_id}/frame")
    def get_frame(concept_id: str):
        with lock:
            return _ok(views.frame(kb, concept_id))

    @app.get("/concepts/{concept_id}/designators")
    def get_designators(concept_id: str):
        with lock:
            return _ok(views.designators(kb, concept_id))

    @app.get("/terms")
    def get_terms():
        with lock:
            return _ok(views.term_list(kb))

    @app.get("/terms/{term_id}")
    def get_term(term_id: str):
        with lock:
            return _ok(views.term_summary(kb, term_id))

    @app.get("/terms/{term_id}/meanings")
    def get_meanings(term_id: str):
        with lock:
            return _ok(views.meanings(kb, term_id))

    @app.get("/terms/{term_id}/synonyms")
    def get_synonyms(term_id: str, viewpoint: str):
        with lock:
            return _ok(views.synonyms(kb, term_id, viewpoint))

    @app.get("/terms/{term_id}/grammatical-relations")
    def get_grammatical_relations(term_id: str):
        with lock:
            return _ok(views.grammatical_relations(kb, term_id))

    @app.get("/graph")
    def get_graph(mode: str = "full"):
        with lock:
            return _ok(views.graph(kb, mode))

    @app.get("/network")
    def get_network(mode: str = "full"):
        with lock:
            return _ok(views.network(kb, mode))

    @app.get("/units/{unit_id}/highlighted")
    def get_highlighted(unit_id: str):
        with lock:
            return _ok(views.highlighted(kb, unit_id))

    @app.get("/links/{link_id}")
    def get_link(link_id: str):
        with lock:
            return _ok(views.link_detail(kb, link_id))

    @app.get("/links/{link_id}/contexts")
    def get_contexts(link_id: str, window: int = 40):
        if window < 0:
            raise ValueError("window must be >= 0")
        with lock:
            return _ok(views.contexts(kb, link_id, window))

    @app.get("/search")
    def get_search(q: str):
        with lock:
            return _ok(views.search(kb, q))

    @app.get("/diagnostics")
    def get_diagnostics():
        with lock:
            return _ok(views.diagnostics(kb))

    @app.get("/viewpoints")
    def get_viewpoints():
        with lock:
            return _ok(views.viewpoint_list(kb))

    @app.get("/documents")
    def get_documents():
        with lock:
            return _ok(views.document_list(kb))

    @app.get("/documents/{document_id}")
    def get_document(document_id: str):
        with lock:
            return _ok(views.document_detail(kb, document_id))

    @app.get("/relation-types")
    def get_relation_types():
        with lock:
            return _ok(views.relation_type_list(kb))

    # --------------------------------------------------------- mutations

    @app.post("/terms")
    def post_term(body: TermIn):
        with lock:
            decomposition = None
            if body.decomposition is not None:
                decomposition = [(p.get("role"), p.get("term"))
                                 for p in body.decomposition]
            term_id = kb.create_term(
                body.surface, body.language,
                grammatical_category=body.grammatical_category,
                gender=body.gender, number=body.number,
                variants=body.form_variants,
                decomposition=decomposition,
                source=body.source)
            persist()
            return _ok({"id": term_id})

    @app.post("/viewpoints")
    def post_viewpoint(body: ViewpointIn):
        with lock:
            viewpoint_id = kb.create_viewpoint(body.name, body.description)
            persist()
            return _ok({"id": viewpoint_id})

    @app.post("/concepts")
    def post_concept(body: ConceptIn):
        with lock:
            attributes = body.attributes
            if isinstance(attributes, list):
                attributes = [(a.get("key"), a.get("value")) for a in attributes]
            concept_id = kb.create_concept(
                body.label, body.description, attributes, body.parents)
            persist()
            return _ok({"id": concept_id})

    @app.post("/concepts/{concept_id}/parents")
    def post_parent(concept_id: str, body: ParentIn):
        with lock:
            kb.add_parent(concept_id, body.parent)
            persist()
            return _ok({"child": concept_id, "parent": body.parent})

    @app.post("/concepts/{concept_id}/relations")
    def post_relation(concept_id: str, body: RelationIn):
        with lock:
            kb.add_assertional_relation(
                concept_id, body.relation_type, body.target, body.definition_text)
            persist()
            return _ok({"src": concept_id, "relation_type": body.relation_type,
                        "target": body.target})

    @app.post("/relation-types")
    def post_relation_type(body: RelationTypeIn):
        with lock:
            kb.register_relation_type(body.name, body.definition)
            persist()
            return _ok({"name": body.name})

    @app.post("/links")
    def post_link(body: LinkIn):
        with lock:
            link_id = kb.link(body.term, body.concept, body.viewpoint)
            persist()
            return _ok({"id": link_id})

    @app.post("/links/{link_id}/usages")
    def post_usage(link_id: str, body: UsageIn):
        with lock:
            kb.add_usage(link_id, body.unit, body.start, body.end)
            persist()
            return _ok({"link": link_id, "unit": body.unit,
                        "start": body.start, "end": body.end})

    @app.post("/documents")
    def post_document(body: DocumentIn):
        with lock:
            document_id = kb.ingest_document(body.title, body.source_note,
                                             body.text)
            persist()
            return _ok({"id": document_id})

    @app.delete("/entities/{entity_id}")
    def delete_entity(entity_id: str):
        with lock:
            kb.delete_entity(entity_id)
            persist()
            return _ok({"deleted": entity_id})

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app


def serve(kb_path, port: int = 8787, host: str = "127.0.0.1", *,
          usage_span_mode: str = "strict", static_dir=None) -> None:
    import uvicorn

    app = create_app(kb_path, usage_span_mode=usage_span_mode,
                     static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
