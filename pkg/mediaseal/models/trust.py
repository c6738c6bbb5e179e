# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Trust List
==========

Signer certificates, their security level and their revocation. A
:class:`TrustList` is an immutable value: every mutation returns a new list
with a greater version.

File format: canonical JSON ``{"records": [...], "version": n}`` with records
sorted by certificate id.

"""

import hashlib
import logging
from collections import namedtuple
from dataclasses import dataclass, field, replace

from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey

from ..exception import (
    InvariantViolation,
    KeyMismatch,
    MalformedTrustList,
    UnknownCertificate,
)
from . import canonical

_logger = logging.getLogger(__name__)

# ascending order of assurance
SECURITY_LEVELS = ("device_low", "device_secure", "cloud_high")

TRUSTED = "trusted"
REVOKED = "revoked"
UNKNOWN = "unknown"

TrustLookup = namedtuple("TrustLookup", "status record")


def lower_security_level(first, second):
    return min(first, second, key=SECURITY_LEVELS.index)


@dataclass(frozen=True)
class CertificateRecord:
    certificate_id: str
    public_key: bytes = field(repr=False)
    owner_name: str
    security_level: str = "cloud_high"
    revoked: bool = False
    revoked_at: int = None

    def __post_init__(self):
        if len(self.public_key) != 32:
            raise InvariantViolation("public keys are 32 bytes")
        if self.security_level not in SECURITY_LEVELS:
            raise InvariantViolation("unknown security level %r" % self.security_level)
        if self.revoked and self.revoked_at is None:
            raise InvariantViolation("a revoked certificate has a revocation time")

    def to_dict(self):
        return {
            "certificate_id": self.certificate_id,
            "owner_name": self.owner_name,
            "public_key": self.public_key.hex(),
            "revoked": self.revoked,
            "revoked_at": self.revoked_at,
            "security_level": self.security_level,
        }

    @classmethod
    def from_dict(cls, values):
        return cls(
            certificate_id=str(values["certificate_id"]),
            public_key=bytes.fromhex(values["public_key"]),
            owner_name=str(values["owner_name"]),
            security_level=values["security_level"],
            revoked=bool(values["revoked"]),
            revoked_at=values.get("revoked_at"),
        )


@dataclass(frozen=True)
class TrustList:
    records: dict = field(default_factory=dict)
    version: int = 0

    def __iter__(self):
        return iter(sorted(self.records.values(), key=lambda r: r.certificate_id))

    def __len__(self):
        return len(self.records)

    def __contains__(self, certificate_id):
        return certificate_id in self.records


def lookup(trust, certificate_id):
    record = trust.records.get(certificate_id)
    if record is None:
        return TrustLookup(UNKNOWN, None)
    if record.revoked:
        return TrustLookup(REVOKED, record)
    return TrustLookup(TRUSTED, record)


def revoke(trust, certificate_id, at):
    """Return a new list where the certificate is revoked

    Revoking twice keeps the first revocation time.

    :raises UnknownCertificate: the id is not in the list
    """
    record = trust.records.get(certificate_id)
    if record is None:
        raise UnknownCertificate("unknown certificate %r" % certificate_id)
    if not record.revoked:
        record = replace(record, revoked=True, revoked_at=at)
    records = dict(trust.records)
    records[certificate_id] = record
    _logger.info("certificate %s revoked at %s", certificate_id, record.revoked_at)
    return TrustList(records=records, version=trust.version + 1)


def add_certificate(trust, record):
    if record.certificate_id in trust.records:
        raise MalformedTrustList("duplicate certificate id %r" % record.certificate_id)
    records = dict(trust.records)
    records[record.certificate_id] = record
    return TrustList(records=records, version=trust.version + 1)


def accept_update(current, incoming):
    """Versioned pull: the newer list wins, an older one is refused"""
    if incoming.version < current.version:
        raise MalformedTrustList(
            "trust list version %d is older than %d" % (incoming.version, current.version)
        )
    if incoming.version > current.version:
        _logger.info("trust list updated to version %d", incoming.version)
        return incoming
    return current


def save_trust_list(trust):
    return canonical.dumps(
        {"records": [record.to_dict() for record in trust], "version": trust.version}
    )


def load_trust_list(data):
    """:raises MalformedTrustList: undecodable bytes or duplicate ids"""
    try:
        values = canonical.loads(data)
        version = values["version"]
        if not isinstance(version, int) or isinstance(version, bool) or version < 0:
            raise ValueError("bad version %r" % (version,))
        records = {}
        for item in values["records"]:
            record = CertificateRecord.from_dict(item)
            if record.certificate_id in records:
                raise MalformedTrustList(
                    "duplicate certificate id %r" % record.certificate_id
                )
            records[record.certificate_id] = record
    except MalformedTrustList:
        raise
    except (ValueError, TypeError, KeyError, AttributeError, InvariantViolation) as exc:
        raise MalformedTrustList("invalid trust list: %s" % exc) from exc
    return TrustList(records=records, version=version)


# keys


def public_key_bytes(private_key):
    return private_key.public_key().public_bytes(
        serialization.Encoding.Raw, serialization.PublicFormat.Raw
    )


def issue_certificate(certificate_id, owner_name, security_level="cloud_high", seed=None):
    """Generate a signing key and its certificate record

    With a ``seed`` the key is derived deterministically.
    """
    if seed is None:
        private_key = Ed25519PrivateKey.generate()
    else:
        private_key = Ed25519PrivateKey.from_private_bytes(
            hashlib.sha256(b"mediaseal-signing-key:%d" % seed).digest()
        )
    record = CertificateRecord(
        certificate_id=certificate_id,
        public_key=public_key_bytes(private_key),
        owner_name=owner_name,
        security_level=security_level,
    )
    return private_key, record


def private_key_to_pem(private_key):
    return private_key.private_bytes(
        serialization.Encoding.PEM,
        serialization.PrivateFormat.PKCS8,
        serialization.NoEncryption(),
    )


def load_private_key(pem):
    try:
        key = serialization.load_pem_private_key(pem, password=None)
    except (ValueError, TypeError) as exc:
        raise KeyMismatch("cannot read the signing key: %s" % exc) from exc
    if not isinstance(key, Ed25519PrivateKey):
        raise KeyMismatch("signing keys are Ed25519 keys")
    return key
