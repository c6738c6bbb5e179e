# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import hashlib
import struct
import unittest
from collections import Counter
from dataclasses import replace

from ..exception import HashMismatch, InvariantViolation, KeyMismatch, UnknownCertificate
from ..models import trust as trust_model
from ..models.container import MediaAsset, PixelImage, parse_asset, serialize_asset
from ..models.manifest import (
    BAD_SIGNATURE,
    MALFORMED,
    NOT_PRESENT,
    PRESENT_HASH_MATCH,
    PRESENT_HASH_NO_MATCH,
    REVOKED,
    UNTRUSTED_SIGNER,
    Action,
    EditRegion,
    Ingredient,
    Manifest,
    canonical_bytes,
    embed_manifest,
    extract_manifest,
    hard_hash,
    sign_manifest,
    validate_manifest,
    verify_signature,
)
from ..models.transformation import Transformation, apply_transformation
from .common import ISSUED_AT, random_image


class ManifestCase(unittest.TestCase):
    def setUp(self):
        super().setUp()
        self.key, self.record = trust_model.issue_certificate(
            "camera-1", "Camera Co", "device_secure", seed=1
        )
        self.trust = trust_model.add_certificate(trust_model.TrustList(), self.record)
        self.asset = MediaAsset(random_image(1, width=4, height=4, channels=1))

    def manifest_for(self, asset, **values):
        values.setdefault("assertions", ("camera_captured",))
        return Manifest(
            signer_name="Camera Co",
            content_hash=hard_hash(asset.image),
            issued_at=ISSUED_AT,
            security_level="device_secure",
            **values
        )

    def signed_asset(self, asset=None, **values):
        asset = asset or self.asset
        signed = sign_manifest(self.manifest_for(asset, **values), self.key, "camera-1", self.trust)
        return embed_manifest(asset, signed), signed


class TestManifestTypes(ManifestCase):
    def test_region_required(self):
        with self.assertRaises(InvariantViolation):
            Action("ai_inpainted")
        with self.assertRaises(InvariantViolation):
            Action("deleted_content", tool="eraser")
        Action("ai_inpainted", region=EditRegion(0, 0, 1, 1))
        Action("color_edit")

    def test_unknown_action(self):
        with self.assertRaises(InvariantViolation):
            Action("teleported")

    def test_empty_region(self):
        with self.assertRaises(InvariantViolation):
            EditRegion(5, 0, 5, 1)
        with self.assertRaises(InvariantViolation):
            EditRegion(0, 3, 1, 2)

    def test_thumbnail_hash_size(self):
        with self.assertRaises(InvariantViolation):
            Ingredient("original", b"\x00" * 31)
        Ingredient("original", b"\x00" * 32)

    def test_manifest_fields(self):
        with self.assertRaises(InvariantViolation):
            self.manifest_for(self.asset, watermark_id=1 << 64)
        with self.assertRaises(InvariantViolation):
            Manifest("x", b"\x00" * 32, 0)
        with self.assertRaises(InvariantViolation):
            Manifest("x", b"\x00" * 31, ISSUED_AT)

    def test_canonical_bytes_distinct(self):
        first = self.manifest_for(self.asset)
        seen = {canonical_bytes(first)}
        for variant in (
            replace(first, assertions=("camera_captured", "")),
            replace(first, assertions=()),
            replace(first, issued_at=ISSUED_AT + 1),
            replace(first, watermark_id=0),
            replace(first, signer_name="Camera Co "),
            replace(first, actions=(Action("color_edit"),)),
            replace(first, ingredients=(Ingredient("original"),)),
        ):
            data = canonical_bytes(variant)
            self.assertNotIn(data, seen)
            seen.add(data)


class TestHardHash(ManifestCase):
    def test_pixl_payload(self):
        image = PixelImage(2, 2, 1, bytes([0, 64, 128, 255]))
        expected = hashlib.sha256(struct.pack(">IIB", 2, 2, 1) + bytes([0, 64, 128, 255]))
        self.assertEqual(expected.digest(), hard_hash(image))

    def test_metadata_excluded(self):
        asset, __ = self.signed_asset()
        self.assertEqual(hard_hash(self.asset.image), hard_hash(asset.image))

    def test_pixel_flip(self):
        flipped = apply_transformation(self.asset, Transformation.pixel_flip(1, seed=0))
        self.assertNotEqual(hard_hash(self.asset.image), hard_hash(flipped.image))


class TestSignature(ManifestCase):
    def test_sign_verify(self):
        __, signed = self.signed_asset()
        self.assertTrue(verify_signature(signed, self.record.public_key))

    def test_deterministic(self):
        manifest = self.manifest_for(self.asset)
        self.assertEqual(
            sign_manifest(manifest, self.key, "camera-1").signature,
            sign_manifest(manifest, self.key, "camera-1").signature,
        )

    def test_mutated_assertion(self):
        __, signed = self.signed_asset()
        forged = replace(signed, manifest=replace(signed.manifest, assertions=("ai_generated",)))
        self.assertFalse(verify_signature(forged, self.record.public_key))

    def test_key_mismatch(self):
        other_key, __ = trust_model.issue_certificate("other", "Other", seed=9)
        with self.assertRaises(KeyMismatch):
            sign_manifest(self.manifest_for(self.asset), other_key, "camera-1", self.trust)

    def test_unknown_certificate(self):
        with self.assertRaises(UnknownCertificate):
            sign_manifest(self.manifest_for(self.asset), self.key, "nobody", self.trust)


class TestEmbed(ManifestCase):
    def test_round_trip(self):
        asset, signed = self.signed_asset()
        self.assertEqual(signed, extract_manifest(parse_asset(serialize_asset(asset))))
        self.assertEqual(self.asset.image, asset.image)

    def test_stale_hash(self):
        __, signed = self.signed_asset()
        other = MediaAsset(random_image(2, width=4, height=4, channels=1))
        with self.assertRaises(HashMismatch):
            embed_manifest(other, signed)

    def test_unsigned(self):
        self.assertIsNone(extract_manifest(self.asset))


class TestValidateManifest(ManifestCase):
    def test_not_present(self):
        outcome = validate_manifest(self.asset, self.trust)
        self.assertEqual(NOT_PRESENT, outcome.state)
        self.assertEqual((), outcome.concerns)
        self.assertIsNone(outcome.manifest)

    def test_hash_match(self):
        asset, signed = self.signed_asset()
        outcome = validate_manifest(asset, self.trust)
        self.assertEqual(PRESENT_HASH_MATCH, outcome.state)
        self.assertEqual(signed.manifest, outcome.manifest)
        self.assertEqual(self.record, outcome.certificate)

    def test_noise_breaks_hash(self):
        asset, __ = self.signed_asset()
        noisy = apply_transformation(asset, Transformation.gaussian_noise(8.0, seed=1))
        self.assertEqual(PRESENT_HASH_NO_MATCH, validate_manifest(noisy, self.trust).state)

    def test_revoked(self):
        asset, __ = self.signed_asset()
        trust = trust_model.revoke(self.trust, "camera-1", ISSUED_AT + 10)
        outcome = validate_manifest(asset, trust)
        self.assertEqual(NOT_PRESENT, outcome.state)
        self.assertEqual((REVOKED,), outcome.concerns)

    def test_untrusted_signer(self):
        asset, __ = self.signed_asset()
        outcome = validate_manifest(asset, trust_model.TrustList())
        self.assertEqual(NOT_PRESENT, outcome.state)
        self.assertEqual((UNTRUSTED_SIGNER,), outcome.concerns)
        self.assertIsNotNone(outcome.signed)

    def test_malformed(self):
        asset = replace(self.asset, manifest_segment=b"{not json")
        outcome = validate_manifest(asset, self.trust)
        self.assertEqual(NOT_PRESENT, outcome.state)
        self.assertEqual((MALFORMED,), outcome.concerns)
        self.assertIsNone(outcome.signed)

    def test_manifest_byte_sweep(self):
        asset, __ = self.signed_asset(actions=(Action("created", tool="camera"),))
        segment = asset.manifest_segment
        reasons = Counter()
        for index in range(len(segment)):
            for mask in (0x01, 0x20):
                mutated = bytearray(segment)
                mutated[index] ^= mask
                outcome = validate_manifest(replace(asset, manifest_segment=bytes(mutated)), self.trust)
                self.assertEqual(NOT_PRESENT, outcome.state, index)
                self.assertEqual(1, len(outcome.concerns), index)
                reasons.update(outcome.concerns)
        self.assertLessEqual(set(reasons), {BAD_SIGNATURE, MALFORMED, UNTRUSTED_SIGNER})
        self.assertGreater(reasons[BAD_SIGNATURE], reasons[UNTRUSTED_SIGNER])

    def test_pixel_byte_sweep(self):
        asset, __ = self.signed_asset()
        samples = asset.image.samples
        for index in range(len(samples)):
            mutated = bytearray(samples)
            mutated[index] ^= 0x01
            image = replace(asset.image, samples=bytes(mutated))
            outcome = validate_manifest(asset.with_image(image), self.trust)
            self.assertEqual(PRESENT_HASH_NO_MATCH, outcome.state, index)

    def test_stable_through_container(self):
        asset, __ = self.signed_asset()
        reparsed = parse_asset(serialize_asset(asset))
        self.assertEqual(validate_manifest(asset, self.trust), validate_manifest(reparsed, self.trust))
