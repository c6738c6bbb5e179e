# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Backend Adapter
===============

An adapter has a common interface to speak with a registry. It translates
the basic orders (store, lookups, fault modes) to the protocol used by the
registry: calls on the local log store of the backend's ``data_dir``, or
HTTP requests to the service at the backend's ``registry_url``.

The adapter of ``trust.list`` loads, saves and pulls trust lists.

"""

import base64
import logging

import requests

from component.core import AbstractComponent, Component

from ..exception import MissingContext, NetworkError, RateLimited, RegistryError
from ..models import canonical
from ..models import trust as trust_model
from ..registry.store import (
    FOUND,
    NO_ACCESS,
    FaultInjection,
    FingerprintCandidate,
    LookupOutcome,
)

_logger = logging.getLogger(__name__)


class BackendAdapter(AbstractComponent):
    """Base Backend Adapter for the toolkit"""

    _name = "base.backend.adapter"
    _inherit = "base.mediaseal"
    _usage = "backend.adapter"


class RegistryAdapter(AbstractComponent):
    """Registry interface

    This is an empty shell, the local and the remote adapters implement it.
    Lookups never raise on registry faults, they return a
    :class:`~mediaseal.registry.store.LookupOutcome`.

    """

    _name = "mediaseal.registry.adapter"
    _inherit = "base.backend.adapter"
    _apply_on = "registry.entry"

    def store(self, entry):
        """Persist a :class:`~mediaseal.registry.store.RegistryEntry`"""
        raise NotImplementedError

    def lookup_by_hash(self, content_hash):
        raise NotImplementedError

    def lookup_by_watermark(self, watermark_id):
        raise NotImplementedError

    def lookup_by_fingerprint(self, fingerprint, tau=None):
        raise NotImplementedError

    def set_faults(self, faults):
        raise NotImplementedError


class LocalRegistryAdapter(Component):
    """Registry in the ``data_dir`` of the backend

    Without a ``data_dir`` the lookups are ``no_access`` and the writes raise
    :class:`MissingContext`.
    """

    _name = "mediaseal.registry.adapter.local"
    _inherit = "mediaseal.registry.adapter"

    @classmethod
    def _component_match(cls, work, usage=None, model_name=None, **kw):
        return not getattr(work.collection, "registry_url", None)

    @property
    def registry_store(self):
        if not self.backend_record.data_dir:
            raise MissingContext("the backend has neither a data_dir nor a registry_url")
        return self.backend_record.registry_store()

    def _lookup(self, method, *args):
        if not self.backend_record.data_dir:
            _logger.warning("no registry configured, %s is no_access", method)
            return LookupOutcome(NO_ACCESS)
        return getattr(self.registry_store, method)(*args)

    def store(self, entry):
        return self.registry_store.store_entry(entry)

    def lookup_by_hash(self, content_hash):
        return self._lookup("lookup_by_hash", content_hash)

    def lookup_by_watermark(self, watermark_id):
        return self._lookup("lookup_by_watermark", watermark_id)

    def lookup_by_fingerprint(self, fingerprint, tau=None):
        if tau is None:
            tau = self.backend_record.tau
        return self._lookup("lookup_by_fingerprint", fingerprint, tau)

    def set_faults(self, faults):
        self.registry_store.set_faults(faults)

    def storage_bytes(self):
        return self.registry_store.storage_bytes()


class RemoteRegistryAdapter(Component):
    """Registry served over HTTP by :mod:`mediaseal.registry.service`

    A lookup that cannot reach the service is a ``no_access`` outcome, as a
    registry timeout seen by a validator. Writes raise :class:`NetworkError`.
    """

    _name = "mediaseal.registry.adapter.remote"
    _inherit = "mediaseal.registry.adapter"

    @classmethod
    def _component_match(cls, work, usage=None, model_name=None, **kw):
        return bool(getattr(work.collection, "registry_url", None))

    def __init__(self, work_context):
        super().__init__(work_context)
        self._session = None

    @property
    def session(self):
        """The HTTP session of the adapter, opened on first use"""
        if self._session is None:
            self._session = requests.Session()
            self._session.headers["Accept"] = "application/json"
        return self._session

    def _request(self, method, path, body=None, internal=False):
        backend = self.backend_record
        url = backend.registry_url.rstrip("/") + path
        headers = {}
        data = None
        if body is not None:
            data = canonical.dumps(body)
            headers["Content-Type"] = "application/json"
        if internal:
            if not backend.auth_token:
                raise MissingContext("an auth token is required for %s" % path)
            headers["Authorization"] = "Bearer %s" % backend.auth_token
        _logger.debug("%s %s", method, url)
        try:
            response = self.session.request(
                method, url, data=data, headers=headers, timeout=backend.timeout
            )
        except requests.RequestException as exc:
            _logger.error("registry %s unreachable: %s", url, exc)
            raise NetworkError("registry %s unreachable: %s" % (url, exc)) from exc
        if response.status_code == 429:
            raise RateLimited("rate limited by %s" % url)
        try:
            payload = response.json() if response.content else None
        except ValueError:
            payload = None
        return response.status_code, payload

    def _entry(self, values):
        importer = self.component(usage="import.mapper", model_name="registry.entry")
        return importer.build_entry(values)

    def _lookup(self, path, body=None):
        try:
            if body is None:
                status, payload = self._request("GET", path)
            else:
                status, payload = self._request("POST", path, body)
        except NetworkError:
            return LookupOutcome(NO_ACCESS)
        if status >= 500 or not isinstance(payload, dict):
            return LookupOutcome(NO_ACCESS)
        return payload

    def store(self, entry):
        exporter = self.component(usage="export.mapper", model_name="registry.entry")
        status, payload = self._request(
            "POST", "/entries", exporter.map_record(entry).values(), internal=True
        )
        if status != 201:
            message = (payload or {}).get("error", "status %d" % status)
            raise RegistryError("entry refused by the registry: %s" % message)
        return entry

    def lookup_by_hash(self, content_hash):
        payload = self._lookup("/entries/by-hash/%s" % content_hash.hex())
        if isinstance(payload, LookupOutcome):
            return payload
        return self._single(payload)

    def lookup_by_watermark(self, watermark_id):
        payload = self._lookup("/entries/by-watermark/%d" % watermark_id)
        if isinstance(payload, LookupOutcome):
            return payload
        return self._single(payload)

    def _single(self, payload):
        if payload["status"] == FOUND:
            return LookupOutcome(FOUND, self._entry(payload["entry"]))
        return LookupOutcome(payload["status"])

    def lookup_by_fingerprint(self, fingerprint, tau=None):
        if tau is None:
            tau = self.backend_record.tau
        payload = self._lookup(
            "/entries/by-fingerprint", {"fingerprint": str(fingerprint), "tau": tau}
        )
        if isinstance(payload, LookupOutcome):
            return payload
        if payload["status"] != FOUND:
            return LookupOutcome(payload["status"])
        candidates = tuple(
            FingerprintCandidate(self._entry(item["entry"]), item["distance"])
            for item in payload["candidates"]
        )
        return LookupOutcome(FOUND, candidates[0].entry, candidates)

    def set_faults(self, faults):
        status, payload = self._request(
            "POST", "/faults", faults.to_dict(), internal=True
        )
        if status != 200:
            raise RegistryError("faults refused by the registry: status %d" % status)
        return FaultInjection.from_dict(payload)

    def trust_list(self):
        status, payload = self._request("GET", "/trustlist")
        if status != 200:
            raise RegistryError("no trust list served: status %d" % status)
        return trust_model.load_trust_list(canonical.dumps(payload))

    def detect(self, data, internal=False):
        """Ask the service to detect the watermark of MIAC ``data``"""
        path = "/internal/detect" if internal else "/detect"
        status, payload = self._request(
            "POST", path, {"asset": base64.b64encode(data).decode("ascii")}, internal
        )
        if status != 200:
            raise RegistryError("detection refused: status %d" % status)
        return payload


class TrustListAdapter(Component):
    """Load, save and pull the trust list of the backend"""

    _name = "mediaseal.trust.list.adapter"
    _inherit = "base.backend.adapter"
    _apply_on = "trust.list"

    def load(self, path):
        with open(path, "rb") as trust_file:
            trust = trust_model.load_trust_list(trust_file.read())
        _logger.debug("trust list %s loaded, version %d", path, trust.version)
        return trust

    def save(self, trust, path):
        with open(path, "wb") as trust_file:
            trust_file.write(trust_model.save_trust_list(trust))

    def pull(self):
        """Fetch the list served by the registry, used when newer

        :raises MalformedTrustList: the served list is older than ours
        """
        if not self.backend_record.registry_url:
            raise MissingContext("pulling a trust list needs a registry_url")
        incoming = self.adapter_for("registry.entry").trust_list()
        return self.backend_record.update_trust(incoming)
