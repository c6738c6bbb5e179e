# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Exporter
========

An exporter orchestrates the publication of an asset: it glues the
watermark, the signature of the manifest and the registration of the entry.
It uses the binder to draw and bind the watermark id and the backend adapter
to store the entry.

"""

import logging
import time
from collections import namedtuple

from component.core import AbstractComponent, Component

from ..exception import HashMismatch, ImageTooSmall, MissingContext
from ..models import fingerprint as fingerprint_model
from ..models.manifest import Manifest, embed_manifest, hard_hash, sign_manifest
from ..models.watermark import WatermarkPayload, embed_watermark
from ..registry.store import RegistryEntry

_logger = logging.getLogger(__name__)

Publication = namedtuple("Publication", "asset signed_manifest entry")


class Exporter(AbstractComponent):
    """Base class for exporters"""

    _name = "base.exporter"
    _inherit = "base.mediaseal"
    _usage = "record.exporter"

    def __init__(self, work_context):
        super().__init__(work_context)
        self._backend_adapter = None
        self._binder = None

    def run(self, *args, **kwargs):
        raise NotImplementedError

    @property
    def binder(self):
        """The binder of the registry entries, instantiated on first use"""
        if self._binder is None:
            self._binder = self.binder_for("registry.entry")
        return self._binder

    @property
    def backend_adapter(self):
        if self._backend_adapter is None:
            self._backend_adapter = self.adapter_for("registry.entry")
        return self._backend_adapter


class AssetExporter(Component):
    """Sign an asset, optionally watermark it and register it

    The watermark is embedded before the signature, so the manifest content
    hash is the one of the watermarked pixels.
    """

    _name = "mediaseal.asset.exporter"
    _inherit = "base.exporter"
    _apply_on = "media.asset"

    def run(
        self,
        asset,
        signing_key,
        certificate_id,
        assertions=(),
        actions=(),
        ingredients=(),
        security_level=None,
        signer_name=None,
        issued_at=None,
        watermark=False,
        watermark_id=None,
        register=False,
        seed=None,
    ):
        """Publish the asset

        :param watermark: embed a watermark with the key of the backend; its
                          id is drawn when ``watermark_id`` is not given
        :param register: store the entry in the registry
        :return: a :class:`Publication`
        :raises UnknownCertificate: the certificate is not trusted by the backend
        :raises KeyMismatch: the key does not belong to the certificate
        """
        backend = self.backend_record
        record = backend.trust.records.get(certificate_id)
        if watermark:
            if backend.watermark_key is None:
                raise MissingContext("watermarking needs the watermark key of the backend")
            if watermark_id is None:
                watermark_id = self.binder.new_watermark_id(seed)
            asset = asset.with_image(
                embed_watermark(asset.image, WatermarkPayload(watermark_id), backend.watermark_key)
            )
        else:
            watermark_id = None
        manifest = Manifest(
            signer_name=signer_name or (record.owner_name if record else certificate_id),
            content_hash=hard_hash(asset.image),
            issued_at=issued_at or int(time.time()),
            assertions=tuple(assertions),
            actions=tuple(actions),
            ingredients=tuple(ingredients),
            watermark_id=watermark_id,
            security_level=security_level or (record.security_level if record else "cloud_high"),
        )
        signed = sign_manifest(manifest, signing_key, certificate_id, trust=backend.trust)
        asset = embed_manifest(asset, signed)
        entry = None
        if register:
            entry = self.register(asset, signed)
        _logger.info(
            "asset %s signed by %s (watermark id %s, registered: %s)",
            manifest.content_hash.hex(),
            certificate_id,
            watermark_id,
            register,
        )
        return Publication(asset, signed, entry)

    def register(self, asset, signed):
        """Store the registry entry of a signed asset

        The entry is bound to the watermark id declared by the manifest.

        :raises HashMismatch: the manifest is not the one of these pixels
        """
        if hard_hash(asset.image) != signed.manifest.content_hash:
            raise HashMismatch("the manifest content hash does not match the pixels")
        fingerprints = ()
        thumbnail = None
        try:
            fingerprints = tuple(
                fingerprint_model.compute_fingerprint(asset.image, algorithm)
                for algorithm in fingerprint_model.ALGORITHMS
            )
            thumbnail = fingerprint_model.thumbnail(asset.image)
        except ImageTooSmall:
            _logger.warning("image too small to be fingerprinted, registered without")
        entry = RegistryEntry(
            content_hash=signed.manifest.content_hash,
            signed_manifest=signed,
            fingerprints=fingerprints,
            thumbnail=thumbnail,
            stored_at=int(time.time()),
        )
        if signed.manifest.watermark_id is not None:
            return self.binder.bind(signed.manifest.watermark_id, entry)
        return self.backend_adapter.store(entry)
