"""Graph inspection routes: POST /api/stats, POST /api/maximal."""

from fastapi import APIRouter, HTTPException, status

from rainbow.colored_graph import ColoredGraph, induced_subgraph, stats
from rainbow.graph_io import from_edges
from rainbow.omega_maximal import OmegaFunction, brute_force_maximal, check_min_degree, extract_maximal
from shared.errors import GraphError
from shared.models import GraphPayload, MaximalRequest

router = APIRouter()


# ── Helpers ────────────────────────────────────────────────────────────────────

def load_graph(payload: GraphPayload) -> ColoredGraph:
    """Build the request graph or fail with 400 naming the offending edge."""
    try:
        return from_edges(payload.n, payload.edges)
    except GraphError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=exc.to_dict())


# ── Routes ─────────────────────────────────────────────────────────────────────

@router.post("/api/stats")
def graph_stats(payload: GraphPayload):
    g = load_graph(payload)
    return stats(g).as_json() | {"colors": g.color_count}


@router.post("/api/maximal")
def maximal_subgraph(req: MaximalRequest):
    g = load_graph(req.graph)
    if req.omega == "power":
        if req.alpha is None:
            raise HTTPException(
                status_code=status.HTTP_400_BAD_REQUEST, detail="omega=power needs alpha"
            )
        try:
            omega = OmegaFunction("power", req.alpha)
        except ValueError as exc:
            raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    else:
        omega = OmegaFunction()

    result = brute_force_maximal(g, omega) if req.exact else extract_maximal(g, omega)
    body = result.as_json()
    if result.certified_optimal:
        sub, _ = induced_subgraph(g, result.vertices)
        body["min_degree_condition"] = check_min_degree(sub, omega)
    return body
