# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Registry Store
==============

Single node manifest store: the entries are kept in an append-only log of
canonical JSON records, one per line, and indexed in memory by content hash,
watermark id and fingerprint.

The store does not know the record format of an entry, it receives an
``encode`` and a ``decode`` callable. They are the ``export.mapper`` and
``import.mapper`` components of ``registry.entry`` when the store is opened
through a backend (see :class:`..components.backend_adapter.LocalRegistryAdapter`).

Writes are serialized by a lock and ``fsync``'ed before the indexes are
swapped; reads work on the immutable snapshot current when they start.

On open, the log is replayed. A last line without its newline is the trace of
an interrupted write: it is dropped and the file truncated, as it is before
every append. Any other line that cannot be decoded raises
:class:`StoreCorrupted`.

"""

import logging
import os
import threading
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from component_event.models.base import EventSource

from ..exception import (
    DuplicateWatermarkId,
    InvariantViolation,
    MappingError,
    StoreCorrupted,
)
from ..models import canonical
from ..models.fingerprint import Fingerprint, hamming_distance
from ..models.manifest import MAX_WATERMARK_ID, SignedManifest

_logger = logging.getLogger(__name__)

LOG_NAME = "registry.log"

NORMAL = "normal"
NO_ACCESS = "no_access"
MISSING_MANIFEST = "missing_manifest"
FAULT_MODES = (NORMAL, NO_ACCESS, MISSING_MANIFEST)

FOUND = "found"
NOT_FOUND = "not_found"
MISSING = "missing"


@dataclass(frozen=True)
class RegistryEntry:
    content_hash: bytes = field(repr=False)
    signed_manifest: SignedManifest
    watermark_id: Optional[int] = None
    fingerprints: Tuple[Fingerprint, ...] = ()
    thumbnail: Optional[bytes] = field(default=None, repr=False)
    stored_at: int = 0

    def __post_init__(self):
        object.__setattr__(self, "fingerprints", tuple(self.fingerprints))
        if len(self.content_hash) != 32:
            raise InvariantViolation("content hashes are 32 bytes")
        if self.signed_manifest.manifest.content_hash != self.content_hash:
            raise InvariantViolation("the manifest is not the one of this content hash")
        if self.watermark_id is not None:
            if not 0 <= self.watermark_id <= MAX_WATERMARK_ID:
                raise InvariantViolation("watermark ids are 64-bit unsigned integers")
            declared = self.signed_manifest.manifest.watermark_id
            if declared is not None and declared != self.watermark_id:
                raise InvariantViolation("the manifest declares another watermark id")
        if self.thumbnail is not None and len(self.thumbnail) != 64:
            raise InvariantViolation("thumbnails are 8x8 luma blocks")
        if self.stored_at < 0:
            raise InvariantViolation("stored_at must be positive")

    @property
    def manifest(self):
        return self.signed_manifest.manifest

    def without_thumbnail(self):
        return replace(self, thumbnail=None)


@dataclass(frozen=True)
class FaultInjection:
    manifest_lookup: str = NORMAL
    watermark_lookup: str = NORMAL
    fingerprint_lookup: str = NORMAL

    def __post_init__(self):
        for name in ("manifest_lookup", "watermark_lookup", "fingerprint_lookup"):
            if getattr(self, name) not in FAULT_MODES:
                raise InvariantViolation(
                    "%s must be one of %s" % (name, ", ".join(FAULT_MODES))
                )

    def to_dict(self):
        return {
            "fingerprint_lookup": self.fingerprint_lookup,
            "manifest_lookup": self.manifest_lookup,
            "watermark_lookup": self.watermark_lookup,
        }

    @classmethod
    def from_dict(cls, values):
        unknown = set(values) - {"manifest_lookup", "watermark_lookup", "fingerprint_lookup"}
        if unknown:
            raise InvariantViolation("unknown subsystems: %s" % ", ".join(sorted(unknown)))
        return cls(**values)


@dataclass(frozen=True)
class FingerprintCandidate:
    entry: RegistryEntry
    distance: int
    needs_human_review: bool = True


@dataclass(frozen=True)
class LookupOutcome:
    """In-band result of a lookup

    ``entry`` is set when ``status`` is ``found`` for the hash and watermark
    lookups; ``candidates`` holds the fingerprint matches, nearest first.
    """

    status: str
    entry: Optional[RegistryEntry] = None
    candidates: Tuple[FingerprintCandidate, ...] = ()

    @property
    def found(self):
        return self.status == FOUND


@dataclass(frozen=True)
class _Snapshot:
    by_hash: dict
    by_watermark: dict


class RegistryStore(EventSource):
    _name = "registry.entry"

    def __init__(
        self,
        data_dir,
        encode,
        decode,
        store_thumbnails=True,
        collection=None,
        components_registry=None,
    ):
        self.data_dir = data_dir
        self.path = os.path.join(data_dir, LOG_NAME)
        self.encode = encode
        self.decode = decode
        self.store_thumbnails = store_thumbnails
        self.collection = collection
        if components_registry is not None:
            self.components_registry = components_registry
        self.faults = FaultInjection()
        self._write_lock = threading.Lock()
        self._snapshot = _Snapshot({}, {})
        self._open()

    # persistence

    def _open(self):
        os.makedirs(self.data_dir, exist_ok=True)
        if not os.path.exists(self.path):
            open(self.path, "ab").close()
            return
        with open(self.path, "rb") as log:
            data = log.read()
        complete, __, tail = data.rpartition(b"\n")
        if tail:
            _logger.warning(
                "dropping %d bytes of an interrupted write at the end of %s",
                len(tail),
                self.path,
            )
            with open(self.path, "r+b") as log:
                log.truncate(len(data) - len(tail))
                log.flush()
                os.fsync(log.fileno())
        by_hash, by_watermark = {}, {}
        for number, line in enumerate(complete.split(b"\n") if complete else (), 1):
            try:
                entry = self.decode(canonical.loads(line))
            except (ValueError, TypeError, KeyError, InvariantViolation, MappingError) as exc:
                raise StoreCorrupted(
                    "%s: line %d cannot be decoded: %s" % (self.path, number, exc)
                ) from exc
            self._index_into(by_hash, by_watermark, entry)
        self._snapshot = _Snapshot(by_hash, by_watermark)
        _logger.debug("registry %s opened with %d entries", self.path, len(by_hash))

    def _drop_partial_line(self, log):
        """Truncate the unterminated tail a failed write left behind"""
        size = log.seek(0, os.SEEK_END)
        if not size:
            return
        log.seek(size - 1)
        if log.read(1) == b"\n":
            return
        log.seek(0)
        keep = log.read().rfind(b"\n") + 1
        _logger.warning(
            "dropping %d bytes of an interrupted write at the end of %s", size - keep, self.path
        )
        log.truncate(keep)
        log.seek(keep)

    def _append(self, record):
        line = canonical.dumps(record) + b"\n"
        try:
            with open(self.path, "r+b") as log:
                self._drop_partial_line(log)
                log.write(line)
                log.flush()
                os.fsync(log.fileno())
        except OSError as exc:
            _logger.error("cannot append to %s: %s", self.path, exc)
            raise
        return len(line)

    @staticmethod
    def _index_into(by_hash, by_watermark, entry):
        previous = by_hash.get(entry.content_hash)
        if previous is not None and previous.watermark_id is not None:
            by_watermark.pop(previous.watermark_id, None)
        by_hash[entry.content_hash] = entry
        if entry.watermark_id is not None:
            by_watermark[entry.watermark_id] = entry.content_hash

    @classmethod
    def _index(cls, snapshot, entry):
        by_hash = dict(snapshot.by_hash)
        by_watermark = dict(snapshot.by_watermark)
        cls._index_into(by_hash, by_watermark, entry)
        return _Snapshot(by_hash, by_watermark)

    def storage_bytes(self):
        return os.path.getsize(self.path)

    def __len__(self):
        return len(self._snapshot.by_hash)

    def entries(self):
        return sorted(self._snapshot.by_hash.values(), key=lambda entry: entry.stored_at)

    # writes

    def store_entry(self, entry):
        """Persist the entry and update the indexes

        Storing again a content hash replaces its entry.

        :raises DuplicateWatermarkId: the watermark id is bound to another hash
        """
        if not self.store_thumbnails:
            entry = entry.without_thumbnail()
        with self._write_lock:
            snapshot = self._snapshot
            if entry.watermark_id is not None:
                bound = snapshot.by_watermark.get(entry.watermark_id)
                if bound is not None and bound != entry.content_hash:
                    raise DuplicateWatermarkId(
                        "watermark id %d is bound to %s" % (entry.watermark_id, bound.hex())
                    )
            self._append(self.encode(entry))
            self._snapshot = self._index(snapshot, entry)
        _logger.info(
            "registry entry %s stored (watermark id %s)",
            entry.content_hash.hex(),
            entry.watermark_id,
        )
        self._event("on_entry_stored", collection=self.collection).notify(entry)
        return entry

    def set_faults(self, faults):
        self.faults = faults
        _logger.info("registry fault modes: %s", faults.to_dict())
        self._event("on_faults_changed", collection=self.collection).notify(faults)

    # lookups

    @staticmethod
    def _faulted(mode, outcome):
        if mode == NO_ACCESS:
            return LookupOutcome(NO_ACCESS)
        if mode == MISSING_MANIFEST and outcome.status == FOUND:
            return LookupOutcome(MISSING)
        return outcome

    def lookup_by_hash(self, content_hash):
        entry = self._snapshot.by_hash.get(content_hash)
        outcome = LookupOutcome(FOUND, entry) if entry else LookupOutcome(NOT_FOUND)
        return self._faulted(self.faults.manifest_lookup, outcome)

    def lookup_by_watermark(self, watermark_id):
        snapshot = self._snapshot
        content_hash = snapshot.by_watermark.get(watermark_id)
        if content_hash is None:
            outcome = LookupOutcome(NOT_FOUND)
        else:
            outcome = LookupOutcome(FOUND, snapshot.by_hash[content_hash])
        _logger.debug("watermark id %d lookup: %s", watermark_id, outcome.status)
        return self._faulted(self.faults.watermark_lookup, outcome)

    def lookup_by_fingerprint(self, fingerprint, tau):
        """Every entry holding a fingerprint within ``tau``

        Sorted by distance, then by storage time.
        """
        candidates = []
        for entry in self._snapshot.by_hash.values():
            distances = [
                hamming_distance(fingerprint, stored)
                for stored in entry.fingerprints
                if stored.algorithm == fingerprint.algorithm
            ]
            if distances and min(distances) <= tau:
                candidates.append(FingerprintCandidate(entry, min(distances)))
        candidates.sort(key=lambda candidate: (candidate.distance, candidate.entry.stored_at))
        if candidates:
            outcome = LookupOutcome(FOUND, candidates[0].entry, tuple(candidates))
        else:
            outcome = LookupOutcome(NOT_FOUND)
        _logger.debug("fingerprint %s lookup: %d candidates", fingerprint, len(candidates))
        return self._faulted(self.faults.fingerprint_lookup, outcome)
