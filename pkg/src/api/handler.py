"""
HTTP front end for the rainbow search library.

Local dev:
    PYTHONPATH=src uv run uvicorn api.handler:app --reload --port 8001

Graphs travel inline as ``{"n": ..., "edges": [[u, v, color], ...]}``.
"""

import logging

from fastapi import FastAPI, Request, status
from fastapi.responses import JSONResponse

from api.routes import graphs, search, verify
from shared.errors import BudgetExceededError, RainbowError, SearchFailure, TooLargeError

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Rainbow Subdivision API",
    description="Seeded search and independent verification of rainbow clique subdivisions.",
    version="0.1.0",
    docs_url="/docs",
    redoc_url="/redoc",
)

app.include_router(graphs.router)
app.include_router(search.router)
app.include_router(verify.router)


def status_for(exc: RainbowError) -> int:
    if isinstance(exc, SearchFailure):
        return status.HTTP_404_NOT_FOUND
    if isinstance(exc, (BudgetExceededError, TooLargeError)):
        return status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
    return status.HTTP_400_BAD_REQUEST


@app.exception_handler(RainbowError)
def rainbow_error_handler(request: Request, exc: RainbowError) -> JSONResponse:
    logger.info("%s %s -> %s: %s", request.method, request.url.path, exc.code, exc.detail)
    return JSONResponse(status_code=status_for(exc), content={"detail": exc.to_dict()})


@app.get("/health", include_in_schema=False)
def health():
    return {"status": "ok"}
