# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Registry Service
================

Flask application serving a registry over HTTP. Bodies are canonical JSON.

Public endpoints: the lookups, ``GET /trustlist`` and ``POST /detect``. The
latter is rate limited per client (``X-Client-Id`` header, remote address
otherwise) and only tells whether a watermark is detected.

Internal endpoints need ``Authorization: Bearer <AUTH_TOKEN>``:
``POST /entries``, ``POST /faults`` and ``POST /internal/detect`` which
returns the full detection result.

Configuration keys, also read from the ``MEDIASEAL_*`` environment:

``DATA_DIR``
    directory of the registry log (required)
``TRUST_LIST``
    path of the trust list file
``WATERMARK_KEY``
    path of the watermark key file
``AUTH_TOKEN``
    bearer token of the internal endpoints, they are closed without one
``RATE_LIMIT``, ``RATE_WINDOW``
    detections granted per client and window (seconds), 10 per 60 by default

"""

import base64
import binascii
import hmac
import logging
from functools import wraps

from flask import Flask, Response, current_app, request

from ..exception import (
    DuplicateWatermarkId,
    MappingError,
    RegistryError,
    ValidationError,
)
from ..models import canonical
from ..models import trust as trust_model
from ..models.backend import MediaSealBackend, load_components
from ..models.container import parse_asset
from ..models.fingerprint import Fingerprint
from ..models.watermark import DETECTED, UNDETECTABLE, WatermarkKey, decode_watermark
from .rate_limit import TokenBucket
from .store import FaultInjection

_logger = logging.getLogger(__name__)

DEFAULTS = {
    "DATA_DIR": None,
    "TRUST_LIST": None,
    "WATERMARK_KEY": None,
    "AUTH_TOKEN": None,
    "RATE_LIMIT": 10,
    "RATE_WINDOW": 60.0,
}


def _json(payload, status=200, headers=None):
    return Response(
        canonical.dumps(payload), status=status, headers=headers, mimetype="application/json"
    )


def _error(message, status):
    return _json({"error": message}, status)


def _body():
    values = request.get_json(silent=True)
    if not isinstance(values, dict):
        raise MappingError("the body must be a JSON object")
    return values


def internal(view):
    """Reserve a view to the holders of the bearer token"""

    @wraps(view)
    def wrapper(*args, **kwargs):
        token = current_app.config["AUTH_TOKEN"]
        given = request.headers.get("Authorization", "")
        if not token or not hmac.compare_digest(given, "Bearer %s" % token):
            _logger.warning("refused internal request on %s", request.path)
            return _error("unauthorized", 401)
        return view(*args, **kwargs)

    return wrapper


def _backend_from_config(config):
    trust = None
    if config["TRUST_LIST"]:
        with open(config["TRUST_LIST"], "rb") as trust_file:
            trust = trust_model.load_trust_list(trust_file.read())
    key = config["WATERMARK_KEY"]
    if key and not isinstance(key, WatermarkKey):
        with open(key, "rb") as key_file:
            key = WatermarkKey.from_bytes(key_file.read())
    backend = MediaSealBackend(
        trust=trust,
        watermark_key=key or None,
        data_dir=config["DATA_DIR"],
        components_registry=config.get("COMPONENTS_REGISTRY") or load_components(),
    )
    # the store is opened at startup, a corrupted log stops the service
    backend.registry_store()
    return backend


def create_app(config=None):
    """Build the service application

    ``config`` overrides the environment. ``COMPONENTS_REGISTRY`` may give
    the component registry to use, ``BACKEND`` a ready backend.
    """
    app = Flask(__name__)
    app.config.update(DEFAULTS)
    app.config.from_prefixed_env("MEDIASEAL")
    app.config.update(config or {})
    backend = app.config.get("BACKEND")
    if backend is None:
        if not app.config["DATA_DIR"]:
            raise RegistryError("the service needs a DATA_DIR")
        backend = _backend_from_config(app.config)
    bucket = TokenBucket(int(app.config["RATE_LIMIT"]), float(app.config["RATE_WINDOW"]))
    app.extensions["mediaseal"] = {"backend": backend, "bucket": bucket}

    def adapter():
        with backend.work_on("registry.entry") as work:
            return work.component(usage="backend.adapter")

    def exporter():
        with backend.work_on("registry.entry") as work:
            return work.component(usage="export.mapper")

    def exported(entry):
        return exporter().map_record(entry).values() if entry is not None else None

    def read_asset():
        try:
            return parse_asset(base64.b64decode(_body()["asset"], validate=True))
        except (KeyError, TypeError, binascii.Error) as exc:
            raise MappingError("the body must hold a base64 asset") from exc

    @app.errorhandler(DuplicateWatermarkId)
    def duplicate(exc):
        return _error(str(exc), 409)

    @app.errorhandler(ValidationError)
    @app.errorhandler(MappingError)
    def refused(exc):
        return _error(str(exc), 400)

    @app.errorhandler(RegistryError)
    def unavailable(exc):
        _logger.error("registry error: %s", exc)
        return _error(str(exc), 503)

    @app.post("/entries")
    @internal
    def store_entry():
        with backend.work_on("registry.entry") as work:
            importer = work.component(usage="import.mapper")
            entry = importer.build_entry(_body(), for_create=True)
        adapter().store(entry)
        return _json({"content_hash": entry.content_hash.hex()}, 201)

    @app.get("/entries/by-hash/<content_hash>")
    def lookup_by_hash(content_hash):
        try:
            digest = bytes.fromhex(content_hash)
        except ValueError:
            return _error("content hashes are hex", 400)
        if len(digest) != 32 or digest.hex() != content_hash:
            return _error("content hashes are 64 lowercase hex digits", 400)
        outcome = adapter().lookup_by_hash(digest)
        return _json({"entry": exported(outcome.entry), "status": outcome.status})

    @app.get("/entries/by-watermark/<int:watermark_id>")
    def lookup_by_watermark(watermark_id):
        outcome = adapter().lookup_by_watermark(watermark_id)
        return _json({"entry": exported(outcome.entry), "status": outcome.status})

    @app.post("/entries/by-fingerprint")
    def lookup_by_fingerprint():
        values = _body()
        tau = values.get("tau", backend.tau)
        if not isinstance(tau, int) or isinstance(tau, bool) or tau < 0:
            return _error("tau must be a positive integer", 400)
        try:
            fingerprint = Fingerprint.from_text(values["fingerprint"])
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            return _error("invalid fingerprint: %s" % exc, 400)
        outcome = adapter().lookup_by_fingerprint(fingerprint, tau)
        candidates = [
            {"distance": candidate.distance, "entry": exported(candidate.entry)}
            for candidate in outcome.candidates
        ]
        return _json({"candidates": candidates, "status": outcome.status})

    @app.get("/trustlist")
    def trust_list():
        return Response(trust_model.save_trust_list(backend.trust), mimetype="application/json")

    @app.post("/faults")
    @internal
    def set_faults():
        faults = FaultInjection.from_dict(_body())
        adapter().set_faults(faults)
        return _json(faults.to_dict())

    @app.post("/detect")
    def detect():
        client = request.headers.get("X-Client-Id") or request.remote_addr or "anonymous"
        if not bucket.allow(client):
            retry = bucket.retry_after(client)
            return _json(
                {"error": "rate limited"}, 429, headers={"Retry-After": str(int(retry) + 1)}
            )
        if backend.watermark_key is None:
            raise RegistryError("the service has no watermark key")
        result = decode_watermark(read_asset().image, backend.watermark_key)
        # neither payload nor confidence
        return _json({"watermark": DETECTED if result.detected else UNDETECTABLE})

    @app.post("/internal/detect")
    @internal
    def internal_detect():
        if backend.watermark_key is None:
            raise RegistryError("the service has no watermark key")
        return _json(decode_watermark(read_asset().image, backend.watermark_key).to_dict())

    return app


def serve(config=None, host="127.0.0.1", port=8080):
    """Run the service until interrupted

    :raises RegistryError: the store cannot be opened
    :raises OSError: the port is busy
    """
    app = create_app(config)
    _logger.info("registry service listening on %s:%d", host, port)
    app.run(host=host, port=port, threaded=True)

