"""
JSON wire format for paths, cycles and TK_t certificates.

    {"branch": [ids], "paths": [{"pair": [i, j], "vertices": [...], "colors": [...]}]}
    {"vertices": [...closed...], "colors": [...]}

Output is byte-stable: pairs sorted, keys in model order, fixed separators.
"""

import json
from pathlib import Path

from pydantic import ValidationError

from rainbow.structures import RainbowCycle, RainbowPath, SubdivisionCertificate
from shared.errors import GraphIOError, ParseError
from shared.models import CertificateJSON, CycleJSON, PathJSON


def _dump(model) -> str:
    return json.dumps(model.model_dump(mode="json", exclude_none=True), separators=(",", ":")) + "\n"


def certificate_model(cert: SubdivisionCertificate) -> CertificateJSON:
    return CertificateJSON(
        branch=list(cert.branch),
        paths=[
            PathJSON(pair=pair, vertices=list(p.vertices), colors=list(p.colors))
            for pair, p in sorted(cert.paths.items())
        ],
    )


def certificate_to_json(cert: SubdivisionCertificate) -> str:
    return _dump(certificate_model(cert))


def cycle_to_json(cycle: RainbowCycle) -> str:
    return _dump(CycleJSON(vertices=list(cycle.vertices), colors=list(cycle.colors)))


def path_to_json(path: RainbowPath) -> str:
    return _dump(PathJSON(vertices=list(path.vertices), colors=list(path.colors)))


def certificate_from_model(model: CertificateJSON) -> SubdivisionCertificate:
    paths: dict[tuple[int, int], RainbowPath] = {}
    for entry in model.paths:
        if entry.pair is None:
            raise ParseError("Certificate path is missing its pair", line=0)
        i, j = entry.pair
        paths[(min(i, j), max(i, j))] = RainbowPath(tuple(entry.vertices), tuple(entry.colors))
    return SubdivisionCertificate(branch=tuple(model.branch), paths=paths)


def certificate_from_json(text: str) -> SubdivisionCertificate:
    """Parse a TK_t certificate; pairs may be given in either orientation."""
    try:
        return certificate_from_model(CertificateJSON.model_validate_json(text))
    except ValidationError as exc:
        raise ParseError(f"Malformed certificate JSON: {exc.errors()[0]['msg']}", line=0)


def cycle_from_json(text: str) -> RainbowCycle:
    try:
        model = CycleJSON.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"Malformed cycle JSON: {exc.errors()[0]['msg']}", line=0)
    return RainbowCycle(tuple(model.vertices), tuple(model.colors))


def load_certificate(path: str | Path) -> SubdivisionCertificate | RainbowCycle:
    """A TK_t certificate if the file has a ``branch`` key, else a cycle."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphIOError(f"Cannot read certificate {path}: {exc}")
    try:
        is_tkt = "branch" in json.loads(text)
    except (json.JSONDecodeError, TypeError):
        raise ParseError(f"{path} is not a JSON object", line=0)
    return certificate_from_json(text) if is_tkt else cycle_from_json(text)


def save_text(text: str, path: str | Path) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise GraphIOError(f"Cannot write {path}: {exc}")
