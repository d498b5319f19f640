"""HTTP service exposing the toolkit to scripts and the browser editor.

Stateless by construction: the registry and body model load once at
startup and every handler is a pure function of the request body, so
equal requests produce byte-identical responses. JSON in, JSON out;
an optional static directory serves the built editor bundle.

Status codes: 400 malformed JSON, 404 unknown path, 422 validation or
domain failure (the report/error object is the body).
"""

from __future__ import annotations

import dataclasses
import json
import mimetypes
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import unquote, urlsplit

from .assembler import compile_garment, export_svg, serialize_pattern
from .body import DEFAULT_BODY, BodyModel
from .codec import decode_merge, encode_vector
from .config import parse_config, validate_config
from .errors import PatterncError
from .registry import load_registry
from .sampler import make_edit_pair
from .simparams import (
    DescriptorScores,
    IDENTITY_PRESERVING,
    LITERAL,
    map_material,
)

_MODES = {"identity": IDENTITY_PRESERVING, "literal": LITERAL}


@dataclasses.dataclass(frozen=True)
class ServiceConfig:
    port: int = 8080
    host: str = "127.0.0.1"
    registry_path: str | None = None
    body_path: str | None = None
    static_dir: str | None = None

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port must lie in 1..65535, got {self.port}")


@dataclasses.dataclass
class _State:
    registry: object
    body: BodyModel
    static_root: Path | None


def _load_state(config: ServiceConfig) -> _State:
    registry = load_registry(config.registry_path)
    body = DEFAULT_BODY
    if config.body_path is not None:
        body = BodyModel.from_dict(json.loads(Path(config.body_path).read_text()))
    static_root = None
    if config.static_dir is not None:
        static_root = Path(config.static_dir).resolve()
        if not static_root.is_dir():
            raise ValueError(f"static dir {config.static_dir!r} does not exist")
    return _State(registry, body, static_root)


# ---------------------------------------------------------------------------
# endpoint handlers: payload dict -> (status, response dict)


def _ep_validate(state: _State, payload) -> tuple:
    report = validate_config(parse_config(payload), state.registry)
    return 200, report.to_dict()


def _ep_compile(state: _State, payload) -> tuple:
    result = compile_garment(parse_config(payload), state.body,
                             registry=state.registry)
    if not result.ok:
        return 422, {
            "ok": False,
            "report": result.report.to_dict() if result.report else None,
            "validity": result.validity.to_dict() if result.validity else None,
        }
    return 200, {
        "pattern": json.loads(serialize_pattern(result.pattern)),
        "svg": export_svg(result.pattern),
        "validity": result.validity.to_dict(),
    }


def _ep_encode(state: _State, payload) -> tuple:
    values, mask = encode_vector(parse_config(payload), state.registry)
    return 200, {"values": values, "mask": mask}


def _ep_decode(state: _State, payload) -> tuple:
    missing = {"skeleton", "values", "mask"} - set(payload)
    if missing:
        raise ValueError(f"decode body is missing {sorted(missing)}")
    merged = decode_merge(parse_config(payload["skeleton"]),
                          payload["values"], payload["mask"], state.registry)
    return 200, merged.to_dict()


def _ep_simparams(state: _State, payload) -> tuple:
    if "material" not in payload:
        raise ValueError("simparams body needs a material name")
    target = payload.get("target")
    scores = DescriptorScores.from_dict(target) if target is not None else None
    mode = payload.get("mode", "identity")
    pairing = payload.get("pairing", "prose")
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {sorted(_MODES)}")
    params, base = map_material(payload["material"], scores,
                                mode=_MODES[mode], pairing=pairing)
    return 200, {
        "material": str(payload["material"]).strip().lower(),
        "mode": mode,
        "pairing": pairing,
        "base_scores": base.to_dict(),
        "target_scores": (scores or base).to_dict(),
        "params": params.to_dict(),
    }


def _ep_editpair(state: _State, payload) -> tuple:
    missing = {"a", "b"} - set(payload)
    if missing:
        raise ValueError(f"editpair body is missing {sorted(missing)}")
    record = make_edit_pair(parse_config(payload["a"]),
                            parse_config(payload["b"]), state.registry)
    return 200, record.to_dict()


_POST_ROUTES = {
    "/validate": _ep_validate,
    "/compile": _ep_compile,
    "/encode": _ep_encode,
    "/decode": _ep_decode,
    "/simparams": _ep_simparams,
    "/editpair": _ep_editpair,
}


# ---------------------------------------------------------------------------
# request dispatch


def _json_bytes(doc) -> bytes:
    return (json.dumps(doc, indent=2) + "\n").encode()


def _static_file(root: Path, url_path: str):
    rel = unquote(url_path).lstrip("/") or "index.html"
    target = (root / rel).resolve()
    if not target.is_relative_to(root) or not target.is_file():
        return None
    ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
    return ctype, target.read_bytes()


def handle_request(state: _State, method: str, path: str,
                   body: bytes) -> tuple:
    """(status, content type, payload bytes) for one request."""
    path = urlsplit(path).path
    if method == "GET":
        if path == "/schema":
            return 200, "application/json", _json_bytes(state.registry.to_dict())
        if state.static_root is not None:
            hit = _static_file(state.static_root, path)
            if hit is not None:
                return 200, hit[0], hit[1]
        return 404, "application/json", _json_bytes(
            {"code": "NOT_FOUND", "message": f"no such path: {path}"})

    endpoint = _POST_ROUTES.get(path)
    if endpoint is None:
        return 404, "application/json", _json_bytes(
            {"code": "NOT_FOUND", "message": f"no such path: {path}"})
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        return 400, "application/json", _json_bytes(
            {"code": "BAD_JSON", "message": exc.msg})
    try:
        status, doc = endpoint(state, payload)
    except PatterncError as exc:
        return 422, "application/json", _json_bytes(exc.to_dict())
    except (KeyError, TypeError, ValueError) as exc:
        return 422, "application/json", _json_bytes(
            {"code": "BAD_REQUEST", "message": str(exc)})
    return status, "application/json", _json_bytes(doc)


class _Handler(BaseHTTPRequestHandler):
    state: _State  # bound by make_server
    server_version = "patternc"
    protocol_version = "HTTP/1.1"

    def log_message(self, *args):  # keep test output clean
        pass

    def _respond(self, status: int, ctype: str, payload: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        self._respond(*handle_request(self.state, "GET", self.path, b""))

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length)
        self._respond(*handle_request(self.state, "POST", self.path, body))


def make_server(config: ServiceConfig) -> ThreadingHTTPServer:
    state = _load_state(config)
    handler = type("PatterncHandler", (_Handler,), {"state": state})
    server = ThreadingHTTPServer((config.host, config.port), handler)
    server.daemon_threads = True
    return server


def run_service(config: ServiceConfig) -> None:
    server = make_server(config)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
