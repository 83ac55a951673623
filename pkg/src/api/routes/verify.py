"""Verification routes: POST /api/verify, POST /api/oracle-cycle."""

from fastapi import APIRouter, HTTPException, status
from pydantic import ValidationError

from api.routes.graphs import load_graph
from rainbow.certificates import certificate_from_model
from rainbow.structures import RainbowCycle
from rainbow.verifier import rainbow_cycle_oracle, verify_cycle, verify_subdivision
from shared.errors import ParseError
from shared.models import CertificateJSON, CycleJSON, OracleRequest, Verdict, VerifyRequest

router = APIRouter()


@router.post("/api/verify", response_model=Verdict)
def verify_certificate(req: VerifyRequest):
    """A TK_t certificate (has ``branch``) or a closed cycle certificate."""
    g = load_graph(req.graph)
    try:
        if "branch" in req.certificate:
            cert = certificate_from_model(CertificateJSON.model_validate(req.certificate))
            return verify_subdivision(g, cert)
        cycle = CycleJSON.model_validate(req.certificate)
    except (ValidationError, ParseError) as exc:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST, detail=f"Malformed certificate: {exc}"
        )
    return verify_cycle(g, RainbowCycle(tuple(cycle.vertices), tuple(cycle.colors)))


@router.post("/api/oracle-cycle")
def oracle_cycle(req: OracleRequest):
    g = load_graph(req.graph)
    witness = rainbow_cycle_oracle(g)
    if witness is None:
        return {"result": "none"}
    return {"result": "cycle", "vertices": list(witness.vertices), "colors": list(witness.colors)}
