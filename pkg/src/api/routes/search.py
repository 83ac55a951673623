"""Seeded search routes: POST /api/connect, /api/find-cycle, /api/find-tkt.

A search that gives up answers 404 with the failure code; that is never a
statement that the structure does not exist.
"""

import json

from fastapi import APIRouter, HTTPException, status

from api.routes.graphs import load_graph
from rainbow.certificates import certificate_to_json, cycle_to_json, path_to_json
from rainbow.expansion import ForbiddenSet
from rainbow.rainbow_search import build_tkt, connect, find_rainbow_cycle
from shared.models import ConnectRequest, SearchRequest

router = APIRouter()


@router.post("/api/connect")
def connect_pair(req: ConnectRequest):
    g = load_graph(req.graph)
    for endpoint in (req.u, req.v):
        if not 0 <= endpoint < g.n:
            raise HTTPException(
                status_code=status.HTTP_400_BAD_REQUEST,
                detail=f"Vertex {endpoint} is outside [0, {g.n})",
            )
    if req.u == req.v:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="u and v must differ")

    path = connect(g, req.u, req.v, ForbiddenSet.empty(g.n, g.color_count), req.params)
    return json.loads(path_to_json(path))


@router.post("/api/find-cycle")
def find_cycle(req: SearchRequest):
    g = load_graph(req.graph)
    return json.loads(cycle_to_json(find_rainbow_cycle(g, req.params)))


@router.post("/api/find-tkt")
def find_tkt(req: SearchRequest):
    g = load_graph(req.graph)
    cert = build_tkt(g, req.t, req.params)
    return json.loads(certificate_to_json(cert)) | {
        "stats": {
            "rounds_used": cert.stats.rounds_used,
            "connect_calls": cert.stats.connect_calls,
            "attempts": cert.stats.attempts,
        }
    }
