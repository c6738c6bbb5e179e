# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

from unittest import mock

from ..components.validator import WATERMARK_ONLY, WATERMARK_ONLY_CONCERN
from ..models import fingerprint as fingerprint_model
from ..models import outcome
from ..models.container import MediaAsset
from ..models.decision import default_table
from ..models.manifest import (
    NOT_PRESENT,
    PRESENT_HASH_MATCH,
    PRESENT_HASH_NO_MATCH,
    REVOKED,
    hard_hash,
    serialize_signed_manifest,
)
from ..models.transformation import Transformation, apply_transformation
from ..models.watermark import WatermarkPayload, embed_watermark, forge_watermark
from ..registry.store import MISSING_MANIFEST, NO_ACCESS, NORMAL, FaultInjection, RegistryEntry
from .common import ISSUED_AT, MediaSealComponentCase, photo_asset


class ValidatorCase(MediaSealComponentCase):
    def setUp(self):
        super().setUp()
        self.publication = self.publish(
            photo_asset(1, meta={"author": "Jane"}),
            assertions=("camera_captured",),
            watermark=True,
            register=True,
            seed=5,
        )
        self.asset = self.publication.asset

    def validate(self, asset, mode=outcome.SHORT_CIRCUIT, backend=None, **kwargs):
        backend = backend or self.backend
        with backend.work_on("media.asset") as work:
            return work.component(usage="validator", **kwargs).validate(asset, mode)

    def assertDecidedByTable(self, report):
        row = default_table().get(report.triple)
        self.assertIsNotNone(row, report.triple)
        self.assertEqual(row.row, report.row)
        self.assertEqual((row.result, row.confidence), (report.result, report.confidence))


class TestSequentialValidator(ValidatorCase):
    def test_short_circuit_on_manifest(self):
        report = self.validate(self.asset)
        self.assertEqual((PRESENT_HASH_MATCH, None, None), report.triple)
        self.assertEqual((outcome.MEDIA_VALIDATES, outcome.HIGH), (report.result, report.confidence))
        self.assertFalse(report.extra_tabular)
        self.assertFalse(report.needs_human_review)
        self.assertEqual("manifest", report.display.source)
        self.assertEqual("Camera Co", report.display.signer)
        self.assertEqual(("camera_captured",), report.display.assertions)
        self.assertEqual("device_secure", report.display.security_level)

    def test_full(self):
        report = self.validate(self.asset, outcome.FULL)
        self.assertEqual((PRESENT_HASH_MATCH, "Det/Match", "Valid/Match"), report.triple)
        self.assertDecidedByTable(report)
        self.assertEqual(self.publication.signed_manifest.manifest.watermark_id, report.watermark.watermark_id)
        self.assertEqual(0, report.fingerprint.distance)
        # a valid fingerprint is never trusted alone
        self.assertTrue(report.needs_human_review)
        self.assertEqual((), report.concerns)

    def test_stripped_manifest_watermark_match(self):
        stripped = apply_transformation(self.asset, Transformation.strip_metadata())
        report = self.validate(stripped)
        self.assertEqual((NOT_PRESENT, "Det/Match", None), report.triple)
        self.assertEqual((outcome.MATCH, outcome.HIGH), (report.result, report.confidence))
        self.assertEqual("registry", report.display.source)
        self.assertEqual("Camera Co", report.display.signer)

    def test_registry_no_access(self):
        with self.backend.work_on("registry.entry") as work:
            work.component(usage="backend.adapter").set_faults(
                FaultInjection(watermark_lookup=NO_ACCESS)
            )
        stripped = apply_transformation(self.asset, Transformation.strip_metadata())
        report = self.validate(stripped, outcome.FULL)
        self.assertEqual((NOT_PRESENT, "NoAccess", "Valid/Match"), report.triple)
        self.assertDecidedByTable(report)
        self.assertEqual(outcome.POSSIBLE_MATCH, report.result)
        self.assertTrue(report.needs_human_review)
        self.assertIsNone(report.display)

    def test_manifest_lookup_fault_ignored(self):
        with self.backend.work_on("registry.entry") as work:
            work.component(usage="backend.adapter").set_faults(
                FaultInjection(manifest_lookup=NO_ACCESS)
            )
        self.assertEqual(outcome.MEDIA_VALIDATES, self.validate(self.asset).result)

    def test_unknown_asset(self):
        report = self.validate(photo_asset(2), outcome.FULL)
        self.assertEqual((NOT_PRESENT, "Undetectable", "Invalid"), report.triple)
        self.assertDecidedByTable(report)
        self.assertEqual(outcome.CANNOT_BE_ASSERTED, report.confidence)
        self.assertIsNone(report.display)

    def test_without_registry(self):
        backend = self.make_backend(data_dir=None)
        report = self.validate(photo_asset(2), outcome.FULL, backend=backend)
        self.assertEqual((NOT_PRESENT, "Undetectable", "NoAccess"), report.triple)
        self.assertDecidedByTable(report)

    def test_revoked_signer(self):
        self.backend.revoke_certificate("camera-1", ISSUED_AT + 100)
        report = self.validate(self.asset)
        self.assertEqual(NOT_PRESENT, report.c2pa.state)
        self.assertEqual(REVOKED, report.concerns[0])
        self.assertEqual((outcome.MATCH, outcome.HIGH), (report.result, report.confidence))

    def test_display_lowered_to_certificate(self):
        publication = self.publish(photo_asset(3), security_level="cloud_high")
        display = self.validate(publication.asset).display
        self.assertEqual("device_secure", display.security_level)
        self.assertFalse(display.low_security_caveat)
        publication = self.publish(photo_asset(3), security_level="device_low")
        self.assertTrue(self.validate(publication.asset).display.low_security_caveat)

    def test_disagreement(self):
        publication = self.publish(photo_asset(4))
        report = self.validate(publication.asset, outcome.FULL)
        self.assertEqual(outcome.MEDIA_VALIDATES, report.result)
        self.assertEqual((PRESENT_HASH_MATCH, "Undetectable", "Invalid"), report.triple)
        self.assertIn("secondary signals disagree", report.concerns[-1])

    def test_unknown_mode(self):
        with self.assertRaises(ValueError):
            self.validate(self.asset, "lenient")

    def test_report_dict(self):
        values = self.validate(self.asset, outcome.FULL).to_dict()
        self.assertEqual("camera-1", values["c2pa"]["certificate_id"])
        self.assertEqual("Det/Match", values["watermark"]["label"])
        self.assertEqual("Valid/Match", values["fingerprint"]["label"])
        self.assertEqual(45, values["row"])


class TestWatermarkOnlyValidator(ValidatorCase):
    def test_match_is_low(self):
        report = self.validate(self.asset, kind=WATERMARK_ONLY)
        self.assertEqual((outcome.MATCH, outcome.LOW), (report.result, report.confidence))
        self.assertEqual((WATERMARK_ONLY_CONCERN,), report.concerns)
        self.assertIsNone(report.display)
        self.assertIsNone(report.fingerprint)

    def test_echo_metadata(self):
        with self.backend.work_on("media.asset") as work:
            validator = work.component(usage="validator", kind=WATERMARK_ONLY)
            report = validator.validate(self.asset, echo_metadata=True)
        self.assertIn("author: Jane", report.concerns)

    def test_undetectable(self):
        report = self.validate(photo_asset(2), kind=WATERMARK_ONLY)
        self.assertEqual(
            (outcome.INDETERMINATE, outcome.CANNOT_BE_ASSERTED), (report.result, report.confidence)
        )


class TestAuditListener(ValidatorCase):
    def test_validation_logged(self):
        with self.assertLogs("mediaseal.components.listener", "INFO") as logs:
            self.validate(self.asset)
        self.assertIn("Media Validates / High", logs.output[0])

    def test_revocation_logged(self):
        with self.assertLogs("mediaseal.components.listener", "INFO") as logs:
            self.backend.revoke_certificate("editor-1", ISSUED_AT)
        self.assertIn("certificate editor-1 revoked", logs.output[0])

    def test_silenced(self):
        backend = self.make_backend(audit=False)
        with mock.patch("mediaseal.components.listener._logger") as logger:
            self.validate(self.asset, backend=backend)
            backend.revoke_certificate("editor-1", ISSUED_AT)
        logger.info.assert_not_called()


class TestOutcomeTableRows(ValidatorCase):
    """Every row of the outcome table, reached by a real asset"""

    def setUp(self):
        super().setUp()
        key = self.watermark_key
        marked = self.asset.image
        self.registered = self.publication.entry
        unmarked = self.publish(photo_asset(2), register=True)
        self.unmarked_entry = unmarked.entry
        self.images = {
            "marked": marked,
            "marked_flipped": self.flipped(marked),
            "forged": forge_watermark(marked, photo_asset(4).image, key),
            "marked_unknown": embed_watermark(
                photo_asset(5).image, WatermarkPayload(self.registered.watermark_id ^ 1), key
            ),
            "unmarked": unmarked.asset.image,
            "unmarked_flipped": self.flipped(unmarked.asset.image),
            "plain": photo_asset(6).image,
        }
        self.foreign_manifest = self.publish(photo_asset(7)).signed_manifest

    @staticmethod
    def flipped(image):
        return apply_transformation(MediaAsset(image), Transformation.pixel_flip(1, seed=3)).image

    def entry_of(self, image):
        """An entry of the flipped pixels themselves, stored before the others"""
        signed = self.publish(MediaAsset(image)).signed_manifest
        return RegistryEntry(
            content_hash=hard_hash(image),
            signed_manifest=signed,
            fingerprints=tuple(
                fingerprint_model.compute_fingerprint(image, algorithm)
                for algorithm in fingerprint_model.ALGORITHMS
            ),
        )

    @staticmethod
    def image_name(watermark, fingerprint):
        if watermark == "Det/Match":
            return "marked"
        if watermark == "Undetectable":
            return {"Invalid": "plain", "Valid/NoMatch": "unmarked_flipped"}.get(
                fingerprint, "unmarked"
            )
        if fingerprint == "Invalid":
            return "forged" if watermark == "Det/NoMatch" else "marked_unknown"
        if watermark == "Det/NoMatch" or fingerprint == "Valid/NoMatch":
            return "marked_flipped"
        return "marked"

    def build(self, c2pa, watermark, fingerprint):
        """(backend, asset) giving the labels of a row"""
        name = self.image_name(watermark, fingerprint)
        image = self.images[name]
        entries = []
        if watermark == "Det/NoMatch" and fingerprint == "Valid/Match":
            entries.append(self.entry_of(image))
        if name in ("marked", "marked_flipped", "forged"):
            entries.append(self.registered)
        elif name in ("unmarked", "unmarked_flipped"):
            entries.append(self.unmarked_entry)
        watermark_mode = {"NoAccess": NO_ACCESS}.get(watermark, NORMAL)
        if watermark == "Det/Missing" and name != "marked_unknown":
            watermark_mode = MISSING_MANIFEST
        fingerprint_mode = {"NoAccess": NO_ACCESS, "Valid/Missing": MISSING_MANIFEST}.get(
            fingerprint, NORMAL
        )
        backend = self.make_backend(data_dir=self.make_data_dir())
        with backend.work_on("registry.entry") as work:
            adapter = work.component(usage="backend.adapter")
            for entry in entries:
                adapter.store(entry)
            adapter.set_faults(
                FaultInjection(watermark_lookup=watermark_mode, fingerprint_lookup=fingerprint_mode)
            )
        if c2pa == PRESENT_HASH_MATCH:
            asset = self.publish(MediaAsset(image)).asset
        elif c2pa == PRESENT_HASH_NO_MATCH:
            segment = serialize_signed_manifest(self.foreign_manifest)
            asset = MediaAsset(image, manifest_segment=segment)
        else:
            asset = MediaAsset(image)
        return backend, asset

    def test_all_rows(self):
        table = default_table()
        self.assertEqual(60, len(table))
        for row in table:
            triple = (row.c2pa, row.watermark, row.fingerprint)
            with self.subTest(row=row.row):
                backend, asset = self.build(*triple)
                report = self.validate(asset, outcome.FULL, backend=backend)
                self.assertEqual(triple, report.triple)
                self.assertEqual(row.row, report.row)
                self.assertEqual((row.result, row.confidence), (report.result, report.confidence))
                self.assertFalse(report.extra_tabular)
