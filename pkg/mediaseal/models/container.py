# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Media Container
===============

The MIAC container, big-endian throughout::

    magic  "MIA1"
    segment*  tag (4 ASCII bytes) + length (u32) + payload

``PIXL`` (exactly one, first) carries ``width u32, height u32, channels u8``
then the samples, row-major and channel-interleaved. ``META`` (zero or one)
carries the insecure metadata as a canonical JSON object. ``C2PM`` (zero or
one) carries a serialized signed manifest. Unknown segments are kept as
opaque bytes.

Segments are always written in the order PIXL, META, C2PM, then the unknown
segments in the order they were read. META is written only when the
insecure metadata is not empty.

"""

import logging
import struct
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from ..exception import InvariantViolation, MalformedContainer
from . import canonical

_logger = logging.getLogger(__name__)

MAGIC = b"MIA1"
TAG_PIXELS = b"PIXL"
TAG_META = b"META"
TAG_MANIFEST = b"C2PM"

_SEGMENT_HEADER = struct.Struct(">4sI")
_PIXL_HEADER = struct.Struct(">IIB")

MAX_DIMENSION = 65535


@dataclass(frozen=True)
class PixelImage:
    width: int
    height: int
    channels: int
    samples: bytes = field(repr=False)

    def __post_init__(self):
        if not (1 <= self.width <= MAX_DIMENSION and 1 <= self.height <= MAX_DIMENSION):
            raise InvariantViolation(
                "image size %sx%s out of range" % (self.width, self.height)
            )
        if self.channels not in (1, 3):
            raise InvariantViolation("channels must be 1 or 3, got %s" % self.channels)
        if not isinstance(self.samples, bytes):
            object.__setattr__(self, "samples", bytes(self.samples))
        expected = self.width * self.height * self.channels
        if len(self.samples) != expected:
            raise InvariantViolation(
                "%s samples declared, %s found" % (expected, len(self.samples))
            )

    @classmethod
    def from_array(cls, array):
        """Build an image from an array of shape (h, w) or (h, w, c)

        Values are rounded and clamped to [0, 255].
        """
        array = np.asarray(array)
        if array.ndim == 2:
            array = array[:, :, np.newaxis]
        if array.ndim != 3:
            raise InvariantViolation("pixel arrays have 2 or 3 dimensions")
        if array.dtype != np.uint8:
            array = np.clip(np.rint(array), 0, 255).astype(np.uint8)
        height, width, channels = array.shape
        return cls(width, height, channels, np.ascontiguousarray(array).tobytes())

    def to_array(self):
        """Return a (h, w, c) uint8 copy of the samples"""
        return (
            np.frombuffer(self.samples, dtype=np.uint8)
            .reshape(self.height, self.width, self.channels)
            .copy()
        )

    def luma(self):
        """Float luma plane, BT.601 weights for color images"""
        array = self.to_array().astype(np.float64)
        if self.channels == 1:
            return array[:, :, 0]
        return array @ np.array([0.299, 0.587, 0.114])

    @property
    def sample_count(self):
        return len(self.samples)

    def pixl_payload(self):
        return _PIXL_HEADER.pack(self.width, self.height, self.channels) + self.samples


@dataclass(frozen=True)
class InsecureMetadata:
    """Unsigned key/value metadata (capture time, device model...)

    Entries are kept sorted by key, the order they are serialized in.
    """

    entries: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        entries = self.entries
        if isinstance(entries, dict):
            entries = entries.items()
        entries = tuple((key, value) for key, value in entries)
        keys = [key for key, __ in entries]
        if len(set(keys)) != len(keys):
            raise InvariantViolation("insecure metadata keys must be unique")
        for key, value in entries:
            if not isinstance(key, str) or not isinstance(value, str):
                raise InvariantViolation("insecure metadata is text only")
            try:
                key.encode("utf-8")
                value.encode("utf-8")
            except UnicodeEncodeError as exc:
                raise InvariantViolation("insecure metadata must be UTF-8") from exc
        object.__setattr__(
            self, "entries", tuple(sorted(entries, key=lambda e: e[0].encode("utf-8")))
        )

    def __bool__(self):
        return bool(self.entries)

    def __len__(self):
        return len(self.entries)

    def get(self, key, default=None):
        return dict(self.entries).get(key, default)

    def as_dict(self):
        return dict(self.entries)

    def with_entry(self, key, value):
        entries = dict(self.entries)
        entries[key] = value
        return InsecureMetadata(tuple(entries.items()))


@dataclass(frozen=True)
class MediaAsset:
    image: PixelImage
    insecure_meta: InsecureMetadata = InsecureMetadata()
    manifest_segment: Optional[bytes] = field(default=None, repr=False)
    #: unknown segments as (tag, payload) pairs, in reading order
    extra_segments: Tuple[Tuple[bytes, bytes], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.manifest_segment is not None and not isinstance(
            self.manifest_segment, bytes
        ):
            object.__setattr__(self, "manifest_segment", bytes(self.manifest_segment))
        for tag, __ in self.extra_segments:
            if tag in (TAG_PIXELS, TAG_META, TAG_MANIFEST) or len(tag) != 4:
                raise InvariantViolation("invalid extra segment tag %r" % (tag,))

    def with_image(self, image):
        return replace(self, image=image)

    def without_manifest(self):
        return replace(self, manifest_segment=None)


def _segment(tag, payload):
    return _SEGMENT_HEADER.pack(tag, len(payload)) + payload


def serialize_asset(asset):
    """Return the MIAC bytes of an asset"""
    parts = [MAGIC, _segment(TAG_PIXELS, asset.image.pixl_payload())]
    if asset.insecure_meta:
        parts.append(_segment(TAG_META, canonical.dumps(asset.insecure_meta.as_dict())))
    if asset.manifest_segment is not None:
        parts.append(_segment(TAG_MANIFEST, asset.manifest_segment))
    for tag, payload in asset.extra_segments:
        parts.append(_segment(tag, payload))
    return b"".join(parts)


def _parse_pixels(payload):
    if len(payload) < _PIXL_HEADER.size:
        raise MalformedContainer("PIXL segment too short")
    width, height, channels = _PIXL_HEADER.unpack_from(payload)
    return PixelImage(width, height, channels, payload[_PIXL_HEADER.size :])


def _parse_meta(payload):
    try:
        values = canonical.loads(payload)
    except ValueError as exc:
        raise MalformedContainer("META segment is not JSON: %s" % exc) from exc
    if not isinstance(values, dict) or not all(
        isinstance(value, str) for value in values.values()
    ):
        raise MalformedContainer("META segment must be an object of strings")
    return InsecureMetadata(tuple(values.items()))


def _iter_segments(data):
    offset = len(MAGIC)
    while offset < len(data):
        if len(data) - offset < _SEGMENT_HEADER.size:
            raise MalformedContainer("truncated segment header at %d" % offset)
        tag, length = _SEGMENT_HEADER.unpack_from(data, offset)
        offset += _SEGMENT_HEADER.size
        if length > len(data) - offset:
            raise MalformedContainer(
                "segment %r declares %d bytes, %d left" % (tag, length, len(data) - offset)
            )
        try:
            tag.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedContainer("segment tag %r is not ASCII" % (tag,)) from exc
        yield tag, data[offset : offset + length]
        offset += length


def parse_asset(data):
    """Parse MIAC bytes

    :raises MalformedContainer: bad magic, truncated or misplaced segments
    :raises InvariantViolation: pixel header and samples disagree
    """
    data = bytes(data)
    if data[: len(MAGIC)] != MAGIC:
        raise MalformedContainer("bad magic")
    image = None
    meta = None
    manifest = None
    extra = []
    for index, (tag, payload) in enumerate(_iter_segments(data)):
        if tag == TAG_PIXELS:
            if index != 0:
                raise MalformedContainer("PIXL must be the first and only once")
            image = _parse_pixels(payload)
        elif index == 0:
            raise MalformedContainer("first segment must be PIXL, got %r" % (tag,))
        elif tag == TAG_META:
            if meta is not None:
                raise MalformedContainer("more than one META segment")
            meta = _parse_meta(payload)
        elif tag == TAG_MANIFEST:
            if manifest is not None:
                raise MalformedContainer("more than one C2PM segment")
            manifest = payload
        else:
            _logger.debug("keeping unknown segment %r (%d bytes)", tag, len(payload))
            extra.append((tag, payload))
    if image is None:
        raise MalformedContainer("no PIXL segment")
    return MediaAsset(
        image=image,
        insecure_meta=meta if meta is not None else InsecureMetadata(),
        manifest_segment=manifest,
        extra_segments=tuple(extra),
    )
