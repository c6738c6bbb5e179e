# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Backend
=======

The collection of the toolkit: it carries the configuration of a run (trust
list, watermark key, registry location, fingerprint settings) and is the
entry point of the components::

    backend = MediaSealBackend(trust=trust, watermark_key=key, data_dir=path)
    with backend.work_on("media.asset") as work:
        report = work.component(usage="validator").validate(asset)

"""

import logging
import threading

from component.builder import ComponentBuilder
from component.models.collection import Collection
from component.utils import get_component_registry, is_component_registry_ready
from component_event.models.base import EventSource

from ..models import trust as trust_model
from ..models.fingerprint import BLOCK_MEAN, DEFAULT_TAU
from ..registry.store import RegistryStore

_logger = logging.getLogger(__name__)


class MediaSealBackend(Collection, EventSource):
    _name = "mediaseal.backend"

    registry_name = "mediaseal"

    def __init__(
        self,
        trust=None,
        watermark_key=None,
        data_dir=None,
        registry_url=None,
        auth_token=None,
        tau=DEFAULT_TAU,
        fingerprint_algorithm=BLOCK_MEAN,
        store_thumbnails=True,
        timeout=5.0,
        audit=True,
        components_registry=None,
    ):
        self.trust = trust if trust is not None else trust_model.TrustList()
        self.watermark_key = watermark_key
        self.data_dir = data_dir
        self.registry_url = registry_url
        self.auth_token = auth_token
        self.tau = tau
        self.fingerprint_algorithm = fingerprint_algorithm
        self.store_thumbnails = store_thumbnails
        self.timeout = timeout
        self.audit = audit
        if components_registry is not None:
            self.components_registry = components_registry
        self._store = None
        self._store_lock = threading.Lock()

    def __repr__(self):
        return "<MediaSealBackend %s>" % (self.registry_url or self.data_dir or "offline")

    def registry_store(self):
        """The log store of ``data_dir``, opened once per backend

        Its records are mapped by the ``registry.entry`` mappers.
        """
        with self._store_lock:
            if self._store is None:
                with self.work_on("registry.entry") as work:
                    exporter = work.component(usage="export.mapper")
                    importer = work.component(usage="import.mapper")
                self._store = RegistryStore(
                    self.data_dir,
                    encode=lambda entry: exporter.map_record(entry).values(),
                    decode=importer.build_entry,
                    store_thumbnails=self.store_thumbnails,
                    collection=self,
                    components_registry=self.components_registry,
                )
            return self._store

    def notify(self, name, *args):
        """Send an event to the listeners of the backend"""
        self._event(name, collection=self).notify(*args)

    def update_trust(self, trust):
        """Switch to a new trust list, refused when older than the current"""
        self.trust = trust_model.accept_update(self.trust, trust)
        return self.trust

    def revoke_certificate(self, certificate_id, at):
        self.trust = trust_model.revoke(self.trust, certificate_id, at)
        record = self.trust.records[certificate_id]
        self.notify("on_certificate_revoked", record, self.trust)
        return record


def load_components(registry_name=MediaSealBackend.registry_name):
    """The published component registry of the toolkit, built on first use"""
    if is_component_registry_ready(registry_name):
        return get_component_registry(registry_name)
    registry = ComponentBuilder(["mediaseal"], registry_name=registry_name).build()
    _logger.debug("component registry %s built", registry_name)
    return registry
