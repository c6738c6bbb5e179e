# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

from unittest import mock

from ..exception import MappingError
from ..models import canonical
from ..models.fingerprint import BLOCK_MEAN, Fingerprint
from .common import MediaSealComponentCase, photo_asset


class TestEntryMappers(MediaSealComponentCase):
    def setUp(self):
        super().setUp()
        self.entry = self.publish(photo_asset(1), watermark=True, register=True, seed=2).entry

    def export(self, entry):
        with self.backend.work_on("registry.entry") as work:
            return work.component(usage="export.mapper").map_record(entry).values()

    def build(self, values, for_create=False):
        with self.backend.work_on("registry.entry") as work:
            return work.component(usage="import.mapper").build_entry(values, for_create)

    def test_export(self):
        values = self.export(self.entry)
        self.assertEqual(
            {"content_hash", "fingerprints", "signed_manifest", "stored_at", "thumbnail", "watermark_id"},
            set(values),
        )
        self.assertEqual(self.entry.content_hash.hex(), values["content_hash"])
        self.assertEqual(self.entry.watermark_id, values["watermark_id"])
        self.assertEqual(
            {"algorithm": BLOCK_MEAN, "bits": "%016x" % self.entry.fingerprints[0].bits},
            values["fingerprints"][0],
        )
        self.assertTrue(canonical.is_canonical(canonical.dumps(values)))

    def test_import(self):
        self.assertEqual(self.entry, self.build(self.export(self.entry)))

    def test_without_thumbnail(self):
        entry = self.entry.without_thumbnail()
        values = self.export(entry)
        self.assertIsNone(values["thumbnail"])
        self.assertEqual(entry, self.build(values))

    def test_stamped_on_create(self):
        values = self.export(self.entry)
        del values["stored_at"]
        with mock.patch("mediaseal.components.entry_mapper.time.time", return_value=1234.5):
            self.assertEqual(1234, self.build(values, for_create=True).stored_at)
        self.assertEqual(0, self.build(values).stored_at)

    def test_refused(self):
        values = self.export(self.entry)
        for changes in (
            {"colour": "red"},
            {"stored_at": "yesterday"},
            {"fingerprints": [{"algorithm": BLOCK_MEAN, "bits": "ABCDEF0123456789"}]},
            {"signed_manifest": {"manifest": {}}},
        ):
            with self.assertRaises(MappingError):
                self.build(dict(values, **changes))

    def test_fingerprint_mappers(self):
        fingerprint = Fingerprint(BLOCK_MEAN, 0xBEEF)
        with self.backend.work_on("fingerprint") as work:
            values = work.component(usage="export.mapper").map_record(fingerprint).values()
            self.assertEqual({"algorithm": BLOCK_MEAN, "bits": "000000000000beef"}, values)
            imported = work.component(usage="import.mapper").map_record(values).values()
        self.assertEqual({"algorithm": BLOCK_MEAN, "bits": 0xBEEF}, imported)
