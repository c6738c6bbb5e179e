# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Registry entry records
======================

A registry entry is stored and transferred as::

    {"content_hash": "<hex>",
     "fingerprints": [{"algorithm": "block_mean", "bits": "<16 hex>"}],
     "signed_manifest": {"certificate_id": ..., "manifest": {...},
                         "signature": "<hex>"},
     "stored_at": 1700000000,
     "thumbnail": "<hex>" | null,
     "watermark_id": 42 | null}

"""

import time

from component.core import Component

from ..exception import MalformedManifestSegment, MappingError
from ..models import canonical
from ..models.fingerprint import Fingerprint
from ..models.manifest import parse_signed_manifest, serialize_signed_manifest
from ..registry.store import RegistryEntry
from .mapper import from_hex, mapping, only_create, read_field, to_hex

ENTRY_FIELDS = (
    "content_hash",
    "fingerprints",
    "signed_manifest",
    "stored_at",
    "thumbnail",
    "watermark_id",
)


class FingerprintExportMapper(Component):
    _name = "mediaseal.fingerprint.export.mapper"
    _inherit = "base.export.mapper"
    _apply_on = "fingerprint"

    direct = [("algorithm", "algorithm")]

    @mapping
    def bits(self, record):
        return {"bits": "%016x" % record.bits}


class FingerprintImportMapper(Component):
    _name = "mediaseal.fingerprint.import.mapper"
    _inherit = "base.import.mapper"
    _apply_on = "fingerprint"

    direct = [("algorithm", "algorithm")]

    @mapping
    def bits(self, record):
        text = read_field(record, "bits")
        if not isinstance(text, str) or len(text) != 16 or text != text.lower():
            raise MappingError("fingerprint bits are 16 lowercase hex digits")
        return {"bits": int(text, 16)}


class FingerprintImportMapChild(Component):
    """Build the :class:`Fingerprint` objects of the imported values"""

    _name = "mediaseal.fingerprint.import.map.child"
    _inherit = "base.map.child.import"
    _apply_on = "fingerprint"

    def format_items(self, items_values):
        return tuple(Fingerprint(**values) for values in items_values)


class RegistryEntryExportMapper(Component):
    _name = "mediaseal.registry.entry.export.mapper"
    _inherit = "base.export.mapper"
    _apply_on = "registry.entry"

    direct = [
        (to_hex("content_hash"), "content_hash"),
        (to_hex("thumbnail"), "thumbnail"),
        ("watermark_id", "watermark_id"),
        ("stored_at", "stored_at"),
    ]

    children = [("fingerprints", "fingerprints", "fingerprint")]

    @mapping
    def signed_manifest(self, record):
        # the segment encoding, kept as a JSON value
        data = serialize_signed_manifest(record.signed_manifest)
        return {"signed_manifest": canonical.loads(data)}


class RegistryEntryImportMapper(Component):
    _name = "mediaseal.registry.entry.import.mapper"
    _inherit = "base.import.mapper"
    _apply_on = "registry.entry"

    direct = [
        (from_hex("content_hash"), "content_hash"),
        (from_hex("thumbnail"), "thumbnail"),
        ("watermark_id", "watermark_id"),
    ]

    children = [("fingerprints", "fingerprints", "fingerprint")]

    @mapping
    def signed_manifest(self, record):
        values = read_field(record, "signed_manifest")
        try:
            signed = parse_signed_manifest(canonical.dumps(values))
        except MalformedManifestSegment as exc:
            raise MappingError("invalid signed manifest: %s" % exc) from exc
        return {"signed_manifest": signed}

    @mapping
    def stored_at(self, record):
        value = record.get("stored_at")
        if value is None:
            return None
        if not isinstance(value, int) or isinstance(value, bool):
            raise MappingError("stored_at must be an integer")
        return {"stored_at": value}

    @only_create
    @mapping
    def stored_now(self, record):
        # new entries received without a time are stamped on arrival
        if record.get("stored_at") is None:
            return {"stored_at": int(time.time())}

    def finalize(self, map_record, values):
        unknown = set(map_record.source) - set(ENTRY_FIELDS)
        if unknown:
            raise MappingError("unknown entry fields: %s" % ", ".join(sorted(unknown)))
        return values

    def build_entry(self, record, for_create=False):
        """The :class:`RegistryEntry` of a record"""
        values = self.map_record(record).values(for_create=for_create)
        values.setdefault("stored_at", 0)
        return RegistryEntry(**values)
