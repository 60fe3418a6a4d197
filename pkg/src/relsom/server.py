"""HTTP/JSON API over a single live session.

One writer at a time: label submission and advance serialize through a
lock; reads serve the latest completed snapshot.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse

from .errors import InsufficientLabelsError, UnknownItemsError
from .projection import mds_embed, overlay
from .seeding import derive_seed
from .session import Session, advance, submit_labels
from .som import node_layers


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="relsom session API")
    write_lock = threading.Lock()
    app.state.session = session

    # -- session ------------------------------------------------------------

    @app.get("/api/session/status")
    def get_status():
        return session.status()

    @app.get("/api/query")
    def get_query():
        items = []
        for item_id in session.current_query:
            entry = {"id": item_id, "label": session.labels.label_of(item_id)}
            if session.corpus.kind == "images":
                entry["thumbnail"] = f"/api/items/{item_id}/thumbnail"
            items.append(entry)
        return {"ids": list(session.current_query), "items": items}

    @app.post("/api/labels")
    def post_labels(body: dict):
        assignments = body.get("assignments", {})
        if not isinstance(assignments, dict):
            raise HTTPException(status_code=422, detail="body must carry an 'assignments' object")
        with write_lock:
            try:
                status = submit_labels(session, assignments)
            except UnknownItemsError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
        return status

    @app.post("/api/advance")
    def post_advance(body: dict | None = None):
        body = body or {}
        override = None
        if body.get("override"):
            spec = body["override"]
            try:
                override = session.measure_by_key(spec["descriptor"], float(spec["p"]))
            except (KeyError, TypeError) as exc:
                raise HTTPException(status_code=400, detail=f"unknown override measure: {spec}") from exc
        with write_lock:
            try:
                result = advance(session, override)
            except InsufficientLabelsError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {
            "ranking": result.ranking.to_json(),
            "treeId": f"tree-{session.iteration}",
            "queryIds": list(result.query),
            "selected": {"descriptor": result.measure.descriptor.name, "p": result.measure.p},
            "override": result.override,
        }

    # -- advisor ------------------------------------------------------------

    @app.get("/api/advisor/ranking")
    def get_ranking():
        if not session.history:
            raise HTTPException(status_code=404, detail="no ranking yet; advance first")
        ranking = dict(session.history[-1]["ranking"])
        for entry in ranking["measures"]:
            entry["embedding"] = (
                f"/api/projection?overlay=labels&measure={entry['descriptor']}&p={entry['p']}"
            )
        return ranking

    # -- model --------------------------------------------------------------

    def _require_tree():
        if session.tree is None:
            raise HTTPException(status_code=404, detail="no model trained yet; advance first")
        return session.tree

    @app.get("/api/model/tree")
    def get_tree(full: int = 0):
        tree = _require_tree()
        payload = tree.to_json(include_assignments=bool(full))
        for node_id, node in tree.nodes.items():
            layers = node_layers(node, tree.p, tree.hyperparams.q_t)
            blob = payload["nodes"][node_id]
            blob["layers"] = {
                "label_quality": list(layers.label_quality),
                "insufficient": list(layers.insufficient),
                "quantization_error": list(layers.quantization_error),
                "u_matrix": list(layers.u_matrix),
            }
            if full:
                blob["layers"]["feature_histogram"] = [list(v) for v in layers.feature_histogram]
            else:
                blob.pop("prototypes", None)
        payload["q_t"] = tree.hyperparams.q_t
        payload["m_t"] = tree.hyperparams.m_t
        return payload

    @app.get("/api/model/node/{node_id:path}/cell/{cell}/items")
    def get_cell_items(node_id: str, cell: int):
        tree = _require_tree()
        if node_id not in tree.nodes:
            raise HTTPException(status_code=404, detail=f"unknown node {node_id!r}")
        node = tree.nodes[node_id]
        if not 0 <= cell < node.grid.cells:
            raise HTTPException(status_code=404, detail=f"cell {cell} out of range")
        members = node.grid.members(cell)
        return {
            "node": node_id,
            "cell": cell,
            "ids": members,
            "labels": {i: session.labels.label_of(i) for i in members},
            "classification": {i: session.classification.get(i) for i in members},
        }

    # -- projections ---------------------------------------------------------

    @app.get("/api/projection")
    def get_projection(overlay_kind: str = Query("labels", alias="overlay"),
                       measure: str | None = None, p: float | None = None):
        if overlay_kind not in ("labels", "classification"):
            raise HTTPException(status_code=422, detail="overlay must be labels or classification")
        if measure is not None:
            # advisor thumbnail: small seeded subsample, computed on demand
            try:
                m = session.measure_by_key(measure, p if p is not None else 2.0)
            except KeyError as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
            key = m.key
            if key not in session._thumbnails:
                space = session.space_for(m)
                embedding = mds_embed(
                    space, session.corpus.ids,
                    seed=derive_seed(session.config.master_seed, "thumb", *key),
                    max_points=session.config.thumbnail_points,
                )
                session._thumbnails[key] = embedding
            return overlay(session._thumbnails[key], session.labels)
        if overlay_kind not in session.projections:
            raise HTTPException(status_code=404, detail="no projection yet; advance first")
        return session.projections[overlay_kind]

    # -- item payloads --------------------------------------------------------

    @app.get("/api/items/{item_id}/thumbnail")
    def get_thumbnail(item_id: str):
        try:
            item = session.corpus.item(item_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=f"unknown item {item_id!r}") from exc
        if session.corpus.kind != "images" or not item.path:
            raise HTTPException(status_code=404, detail="corpus has no image payloads")
        media = "image/png" if item.path.lower().endswith(".png") else "image/jpeg"
        return FileResponse(item.path, media_type=media)

    @app.exception_handler(Exception)
    def on_error(_, exc):  # pragma: no cover - last-resort handler
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    return app
