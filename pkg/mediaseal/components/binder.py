# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Binders
=======

Binders are components that know how to find the registry entry of a
watermark id, the watermark id of a content hash, and how to create the
binding between them.

"""

import logging
from dataclasses import replace

import numpy as np

from component.core import AbstractComponent, Component

from ..models.manifest import MAX_WATERMARK_ID
from ..registry.store import FOUND

_logger = logging.getLogger(__name__)


class Binder(AbstractComponent):
    """For one record of a model, capable to find an external or
    internal id, or create the binding (link) between them
    """

    _name = "base.binder"
    _inherit = "base.mediaseal"
    _usage = "binder"

    def to_internal(self, external_id):
        raise NotImplementedError

    def to_external(self, internal_id):
        raise NotImplementedError

    def bind(self, external_id, record):
        raise NotImplementedError


class WatermarkBinder(Component):
    """Binds the watermark ids to the registry entries

    The external id is the 64-bit watermark id, the internal one is the
    content hash of the entry.
    """

    _name = "mediaseal.watermark.binder"
    _inherit = "base.binder"
    _apply_on = "registry.entry"

    def to_internal(self, watermark_id):
        """Give the lookup outcome of a watermark id

        :return: a :class:`~mediaseal.registry.store.LookupOutcome`, its
                 ``entry`` is set when found
        """
        return self.adapter_for("registry.entry").lookup_by_watermark(watermark_id)

    def to_external(self, content_hash):
        """Give the watermark id bound to a content hash, or None"""
        outcome = self.adapter_for("registry.entry").lookup_by_hash(content_hash)
        if outcome.status != FOUND:
            return None
        return outcome.entry.watermark_id

    def bind(self, watermark_id, entry):
        """Store the entry with the watermark id

        :raises DuplicateWatermarkId: the id is bound to another content hash
        """
        # Prevent None but not 0
        assert watermark_id is not None and entry, "watermark id or entry missing"
        entry = replace(entry, watermark_id=watermark_id)
        self.adapter_for("registry.entry").store(entry)
        _logger.debug("watermark id %d bound to %s", watermark_id, entry.content_hash.hex())
        return entry

    def new_watermark_id(self, seed=None):
        """Draw a watermark id unknown to the registry"""
        rng = np.random.default_rng(seed)
        while True:
            candidate = int(rng.integers(0, MAX_WATERMARK_ID, endpoint=True, dtype="uint64"))
            if self.to_internal(candidate).status != FOUND:
                return candidate
