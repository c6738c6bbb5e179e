# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Signed Manifests
================

The secure provenance record bound to an asset. A manifest is signed with
Ed25519 over its canonical JSON bytes, and its ``content_hash`` is the
SHA-256 of the PIXL segment payload, the manifest itself being excluded.

The C2PM segment payload is the canonical JSON object::

    {"certificate_id": "...", "manifest": {...}, "signature": "<hex>"}

Validation runs three steps: presence of a decodable segment, signature
and trust of the signer, then comparison of the hard hash.

"""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PublicKey

from ..exception import (
    HashMismatch,
    InvariantViolation,
    KeyMismatch,
    MalformedManifestSegment,
    UnknownCertificate,
)
from . import canonical, trust as trust_model

_logger = logging.getLogger(__name__)

ACTION_KINDS = (
    "created",
    "opened",
    "ai_generated",
    "ai_inpainted",
    "color_edit",
    "deleted_content",
    "imported",
)
REGION_REQUIRED = ("ai_inpainted", "deleted_content")

NOT_PRESENT = "NotPresent"
PRESENT_HASH_MATCH = "PresentHashMatch"
PRESENT_HASH_NO_MATCH = "PresentHashNoMatch"

# concerns of a manifest that does not count as present
BAD_SIGNATURE = "bad_signature"
UNTRUSTED_SIGNER = "untrusted_signer"
REVOKED = "revoked"
MALFORMED = "malformed"

MAX_WATERMARK_ID = (1 << 64) - 1


def _exact_keys(values, keys):
    if not isinstance(values, dict) or set(values) != set(keys):
        raise ValueError("expected the keys %s" % ", ".join(sorted(keys)))


def _text(value):
    if not isinstance(value, str):
        raise ValueError("expected a string, got %r" % (value,))
    return value


def _integer(value):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError("expected an integer, got %r" % (value,))
    return value


@dataclass(frozen=True)
class EditRegion:
    left: int
    top: int
    right: int
    bottom: int

    def __post_init__(self):
        if not (0 <= self.left < self.right and 0 <= self.top < self.bottom):
            raise InvariantViolation("empty or negative edit region %s" % (self.as_box(),))

    def as_box(self):
        return (self.left, self.top, self.right, self.bottom)

    def to_dict(self):
        return {
            "bottom": self.bottom,
            "left": self.left,
            "right": self.right,
            "top": self.top,
        }

    @classmethod
    def from_dict(cls, values):
        _exact_keys(values, ("left", "top", "right", "bottom"))
        return cls(*(_integer(values[key]) for key in ("left", "top", "right", "bottom")))


@dataclass(frozen=True)
class Action:
    kind: str
    tool: str = ""
    timestamp: int = 0
    region: Optional[EditRegion] = None

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise InvariantViolation("unknown action %r" % (self.kind,))
        if self.kind in REGION_REQUIRED and self.region is None:
            raise InvariantViolation("action %s must carry a region" % self.kind)

    def to_dict(self):
        return {
            "kind": self.kind,
            "region": self.region.to_dict() if self.region else None,
            "timestamp": self.timestamp,
            "tool": self.tool,
        }

    @classmethod
    def from_dict(cls, values):
        _exact_keys(values, ("kind", "region", "timestamp", "tool"))
        region = values["region"]
        return cls(
            kind=_text(values["kind"]),
            tool=_text(values["tool"]),
            timestamp=_integer(values["timestamp"]),
            region=EditRegion.from_dict(region) if region is not None else None,
        )


@dataclass(frozen=True)
class Ingredient:
    description: str
    thumbnail_hash: Optional[bytes] = None

    def __post_init__(self):
        if self.thumbnail_hash is not None and len(self.thumbnail_hash) != 32:
            raise InvariantViolation("ingredient thumbnail hashes are 32 bytes")

    def to_dict(self):
        return {
            "description": self.description,
            "thumbnail_hash": self.thumbnail_hash.hex() if self.thumbnail_hash else None,
        }

    @classmethod
    def from_dict(cls, values):
        _exact_keys(values, ("description", "thumbnail_hash"))
        digest = values["thumbnail_hash"]
        return cls(
            description=_text(values["description"]),
            thumbnail_hash=_hex(digest) if digest is not None else None,
        )


def _hex(value):
    # bytes.fromhex accepts upper case and spaces, neither is canonical
    text = _text(value)
    digest = bytes.fromhex(text)
    if digest.hex() != text:
        raise ValueError("digests are lowercase hex")
    return digest


@dataclass(frozen=True)
class Manifest:
    signer_name: str
    content_hash: bytes = field(repr=False)
    issued_at: int
    assertions: Tuple[str, ...] = ()
    actions: Tuple[Action, ...] = ()
    ingredients: Tuple[Ingredient, ...] = ()
    watermark_id: Optional[int] = None
    security_level: str = "cloud_high"

    def __post_init__(self):
        for name in ("assertions", "actions", "ingredients"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.content_hash) != 32:
            raise InvariantViolation("content hashes are 32 bytes")
        if self.issued_at <= 0:
            raise InvariantViolation("issued_at must be positive")
        if self.security_level not in trust_model.SECURITY_LEVELS:
            raise InvariantViolation("unknown security level %r" % self.security_level)
        if self.watermark_id is not None and not 0 <= self.watermark_id <= MAX_WATERMARK_ID:
            raise InvariantViolation("watermark ids are 64-bit unsigned integers")

    def to_dict(self):
        return {
            "actions": [action.to_dict() for action in self.actions],
            "assertions": list(self.assertions),
            "content_hash": self.content_hash.hex(),
            "ingredients": [ingredient.to_dict() for ingredient in self.ingredients],
            "issued_at": self.issued_at,
            "security_level": self.security_level,
            "signer_name": self.signer_name,
            "watermark_id": self.watermark_id,
        }

    @classmethod
    def from_dict(cls, values):
        _exact_keys(
            values,
            (
                "actions",
                "assertions",
                "content_hash",
                "ingredients",
                "issued_at",
                "security_level",
                "signer_name",
                "watermark_id",
            ),
        )
        watermark_id = values["watermark_id"]
        return cls(
            signer_name=_text(values["signer_name"]),
            content_hash=_hex(values["content_hash"]),
            issued_at=_integer(values["issued_at"]),
            assertions=tuple(_text(value) for value in values["assertions"]),
            actions=tuple(Action.from_dict(value) for value in values["actions"]),
            ingredients=tuple(
                Ingredient.from_dict(value) for value in values["ingredients"]
            ),
            watermark_id=_integer(watermark_id) if watermark_id is not None else None,
            security_level=_text(values["security_level"]),
        )


@dataclass(frozen=True)
class SignedManifest:
    manifest: Manifest
    certificate_id: str
    signature: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.signature) != 64:
            raise InvariantViolation("signatures are 64 bytes")


@dataclass(frozen=True)
class C2paOutcome:
    """Result of the manifest validation

    ``signed`` is set for both present states, and for a NotPresent outcome
    whose segment could be decoded. ``certificate`` is the signer record
    when the signer is in the trust list.
    """

    state: str = NOT_PRESENT
    signed: Optional[SignedManifest] = None
    certificate: Optional[trust_model.CertificateRecord] = None
    concerns: Tuple[str, ...] = ()

    @property
    def manifest(self):
        if self.state == NOT_PRESENT or self.signed is None:
            return None
        return self.signed.manifest

    @property
    def is_present(self):
        return self.state != NOT_PRESENT


def canonical_bytes(manifest):
    return canonical.dumps(manifest.to_dict())


def hard_hash(image):
    """SHA-256 of the PIXL segment payload of the image"""
    return hashlib.sha256(image.pixl_payload()).digest()


def sign_manifest(manifest, signing_key, certificate_id, trust=None):
    """Sign with Ed25519 over the canonical bytes

    When a trust list is given, the key must be the one of the certificate.

    :raises UnknownCertificate: the certificate is not in ``trust``
    :raises KeyMismatch: the key does not belong to the certificate
    """
    if trust is not None:
        record = trust.records.get(certificate_id)
        if record is None:
            raise UnknownCertificate("unknown certificate %r" % certificate_id)
        if trust_model.public_key_bytes(signing_key) != record.public_key:
            raise KeyMismatch("the key does not belong to %r" % certificate_id)
    signature = signing_key.sign(canonical_bytes(manifest))
    return SignedManifest(manifest, certificate_id, signature)


def serialize_signed_manifest(signed):
    return canonical.dumps(
        {
            "certificate_id": signed.certificate_id,
            "manifest": signed.manifest.to_dict(),
            "signature": signed.signature.hex(),
        }
    )


def parse_signed_manifest(data):
    """:raises MalformedManifestSegment: not a canonical signed manifest"""
    if not canonical.is_canonical(data):
        raise MalformedManifestSegment("manifest segment is not canonical JSON")
    try:
        values = canonical.loads(data)
        _exact_keys(values, ("certificate_id", "manifest", "signature"))
        return SignedManifest(
            manifest=Manifest.from_dict(values["manifest"]),
            certificate_id=_text(values["certificate_id"]),
            signature=_hex(values["signature"]),
        )
    except (ValueError, TypeError, KeyError, InvariantViolation) as exc:
        raise MalformedManifestSegment("invalid manifest segment: %s" % exc) from exc


def extract_manifest(asset):
    """The signed manifest of an asset, or None

    :raises MalformedManifestSegment: the C2PM segment cannot be decoded
    """
    if asset.manifest_segment is None:
        return None
    return parse_signed_manifest(asset.manifest_segment)


def embed_manifest(asset, signed):
    """Bind a signed manifest to an asset with the same pixels

    :raises HashMismatch: the manifest was signed for other pixels
    """
    if signed.manifest.content_hash != hard_hash(asset.image):
        raise HashMismatch("the manifest content hash does not match the pixels")
    return replace(asset, manifest_segment=serialize_signed_manifest(signed))


def verify_signature(signed, public_key):
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(
            signed.signature, canonical_bytes(signed.manifest)
        )
    except InvalidSignature:
        return False
    return True


def validate_manifest(asset, trust):
    """Presence, signature and trust, then hard hash

    A manifest that cannot be trusted counts as not present, the reason is
    kept in the concerns. A concern names a check that ran and failed, so a
    segment that cannot be decoded is only ``malformed`` and a manifest of
    an unknown certificate, whose signature cannot be checked, is only
    ``untrusted_signer``.
    """
    if asset.manifest_segment is None:
        return C2paOutcome()
    try:
        signed = parse_signed_manifest(asset.manifest_segment)
    except MalformedManifestSegment as exc:
        _logger.warning("malformed manifest segment: %s", exc)
        return C2paOutcome(concerns=(MALFORMED,))

    status, record = trust_model.lookup(trust, signed.certificate_id)
    if status == trust_model.UNKNOWN:
        _logger.warning("manifest signed by unknown certificate %r", signed.certificate_id)
        return C2paOutcome(signed=signed, concerns=(UNTRUSTED_SIGNER,))
    concerns = []
    if not verify_signature(signed, record.public_key):
        _logger.warning("bad signature on manifest of %r", signed.manifest.signer_name)
        concerns.append(BAD_SIGNATURE)
    if status == trust_model.REVOKED:
        _logger.warning("manifest signed by revoked certificate %r", record.certificate_id)
        concerns.append(REVOKED)
    if concerns:
        return C2paOutcome(signed=signed, certificate=record, concerns=tuple(concerns))

    if signed.manifest.content_hash == hard_hash(asset.image):
        state = PRESENT_HASH_MATCH
    else:
        state = PRESENT_HASH_NO_MATCH
    return C2paOutcome(state=state, signed=signed, certificate=record)
