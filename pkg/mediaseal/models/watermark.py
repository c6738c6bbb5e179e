# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Watermarks
==========

Imperceptible marks carrying a 64-bit reference id, and a perceptible corner
stamp.

Robust mode
-----------

The 80-bit codeword (id then CRC-16/CCITT-FALSE of the id) is written three
times in a tile of 4 × 6 blocks of 8×8 luma pixels, ten coefficients per
block: 240 slots, each bit owning three key-chosen slots. The tile repeats
over the image, a 64×64 image holds it two and a half times.

A bit is embedded by quantization index modulation: the coefficient is moved
to the closest point of the lattice ``16 k + 8 b + d`` where ``d`` is a keyed
dither of the slot. The luma shift is kept within ±3.5. Decoding sums
``cos(2π (c - d) / 16)`` over the copies of a slot, then over the slots of a
bit. A payload is detected when its CRC verifies and the number of slots
agreeing with the decoded bits is at least four standard deviations above
what unmarked content yields.

The decoder first reads the image as is, then tries the 64 pixel offsets of
the block grid with the 24 phases of the tile (crops), then sizes the image
may have had before a downscale.

Fragile mode
------------

The codeword is written in the least significant bits of key-permuted
samples, followed by a 128-bit HMAC-SHA256 tag over the dimensions and every
sample, the tag bits being cleared. Any change of a sample breaks the tag.

"""

import binascii
import hashlib
import hmac
import logging
import math
import secrets
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import stats

from ..exception import BadKey, ImageTooSmall, InvariantViolation
from . import blocks
from .container import PixelImage
from .transformation import resize

_logger = logging.getLogger(__name__)

ROBUST = "robust"
FRAGILE = "fragile"
MODES = (ROBUST, FRAGILE)

DETECTED = "detected"
UNDETECTABLE = "undetectable"
NO_ACCESS = "no_access"

ID_BITS = 64
CRC_BITS = 16
CODEWORD_BITS = ID_BITS + CRC_BITS
ROUNDS = 3

STEP = 16.0
# u, v >= 1: a blur along a block border only moves row 0 and column 0
BAND = ((1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1), (1, 4), (2, 3), (3, 2), (4, 1))
TILE_ROWS = 4
TILE_COLUMNS = 6
TILE_SLOTS = TILE_ROWS * TILE_COLUMNS * len(BAND)
MAX_SHIFT = 3.5
EMBED_PASSES = 3
MIN_ROBUST_SIZE = 64
SIGMA_GATE = 4.0
MIN_RESCALE = 0.75

TAG_BITS = 128
FRAGILE_BITS = CODEWORD_BITS + TAG_BITS

GLYPH = 8


def crc16(data):
    """CRC-16/CCITT-FALSE"""
    return binascii.crc_hqx(data, 0xFFFF)


@dataclass(frozen=True)
class WatermarkPayload:
    id: int
    crc: int = None

    def __post_init__(self):
        if not 0 <= self.id < 1 << ID_BITS:
            raise InvariantViolation("watermark ids are 64-bit unsigned integers")
        expected = crc16(self.id.to_bytes(8, "big"))
        if self.crc is None:
            object.__setattr__(self, "crc", expected)
        elif self.crc != expected:
            raise InvariantViolation("crc %#06x does not match id %d" % (self.crc, self.id))

    def codeword(self):
        """80 bits, most significant first"""
        value = (self.id << CRC_BITS) | self.crc
        return np.array(
            [(value >> shift) & 1 for shift in range(CODEWORD_BITS - 1, -1, -1)],
            dtype=np.uint8,
        )

    @classmethod
    def from_codeword(cls, bits):
        """Payload of a codeword, None when the CRC does not verify"""
        value = int.from_bytes(np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes(), "big")
        ident, crc = value >> CRC_BITS, value & 0xFFFF
        if crc16(ident.to_bytes(8, "big")) != crc:
            return None
        return cls(ident, crc)


@dataclass(frozen=True)
class WatermarkKey:
    secret: bytes = field(repr=False)
    mode: str = ROBUST

    def __post_init__(self):
        if not isinstance(self.secret, bytes) or len(self.secret) != 16:
            raise BadKey("watermark secrets are 16 bytes")
        if self.mode not in MODES:
            raise BadKey("unknown watermark mode %r" % (self.mode,))

    @classmethod
    def generate(cls, mode=ROBUST, seed=None):
        if seed is None:
            secret = secrets.token_bytes(16)
        else:
            secret = hashlib.sha256(b"mediaseal-watermark-key:%d" % seed).digest()[:16]
        return cls(secret, mode)

    def to_bytes(self):
        return self.secret + bytes([MODES.index(self.mode)])

    @classmethod
    def from_bytes(cls, data):
        if len(data) != 17 or data[16] >= len(MODES):
            raise BadKey("key files are 16 secret bytes and one mode byte")
        return cls(bytes(data[:16]), MODES[data[16]])

    def rng(self, purpose):
        digest = hashlib.sha256(self.secret + b":" + purpose).digest()
        return np.random.default_rng(int.from_bytes(digest, "big"))


@dataclass(frozen=True)
class DetectionResult:
    status: str = UNDETECTABLE
    payload: Optional[WatermarkPayload] = None
    #: internal confidence, never exposed by the public endpoint
    raw_bit_agreement: float = 0.0

    @property
    def detected(self):
        return self.status == DETECTED

    def to_dict(self):
        return {
            "crc": self.payload.crc if self.payload else None,
            "payload_id": self.payload.id if self.payload else None,
            # canonical JSON has no floats
            "raw_bit_agreement": "%.6f" % self.raw_bit_agreement,
            "status": self.status,
        }


# robust mode


class _RobustLayout:
    """Keyed tile of slots repeated over the block grid

    A slot is one coefficient of one block of the tile. ``dithers`` and
    ``bit_of_slot`` are indexed by slot, each codeword bit owning ``ROUNDS``
    slots of the tile.
    """

    def __init__(self, key):
        rng = key.rng(b"robust")
        order = rng.permutation(TILE_SLOTS)
        self.bit_of_slot = np.empty(TILE_SLOTS, dtype=np.intp)
        self.bit_of_slot[order] = np.arange(TILE_SLOTS) % CODEWORD_BITS
        self.assignment = np.eye(CODEWORD_BITS)[self.bit_of_slot]
        self.dithers = rng.uniform(0.0, STEP, size=TILE_SLOTS)
        self.band_rows = np.array([u for u, __ in BAND])
        self.band_cols = np.array([v for __, v in BAND])
        self._phases = {}

    def slots(self, rows, cols, phase_row=0, phase_col=0):
        """Slot of every (block row, block col, coefficient)"""
        i = (np.arange(rows)[:, np.newaxis] + phase_row) % TILE_ROWS
        j = (np.arange(cols)[np.newaxis, :] + phase_col) % TILE_COLUMNS
        block = i * TILE_COLUMNS + j
        return block[:, :, np.newaxis] * len(BAND) + np.arange(len(BAND))

    def phase_slots(self, rows, cols):
        """Slots of every tile phase, shape (phases, rows, cols, coefficients)"""
        if (rows, cols) not in self._phases:
            self._phases[rows, cols] = np.stack(
                [
                    self.slots(rows, cols, phase_row, phase_col)
                    for phase_row in range(TILE_ROWS)
                    for phase_col in range(TILE_COLUMNS)
                ]
            )
        return self._phases[rows, cols]

    def values(self, luma):
        """Band coefficients of the complete blocks, shape (rows, cols, coefficients)"""
        return blocks.forward(luma)[:, :, self.band_rows, self.band_cols]

    def soft(self, values, slots):
        return np.cos(2 * np.pi * (values - self.dithers[slots]) / STEP)


def _check_robust_size(image):
    if image.width < MIN_ROBUST_SIZE or image.height < MIN_ROBUST_SIZE:
        raise ImageTooSmall(
            "robust watermarks need %dx%d pixels" % (MIN_ROBUST_SIZE, MIN_ROBUST_SIZE)
        )


def _embed_robust_bits(image, bits, key):
    _check_robust_size(image)
    layout = _RobustLayout(key)
    luma = image.luma()
    rows, cols = blocks.block_grid(luma)
    slots = layout.slots(rows, cols)
    offset = bits[layout.bit_of_slot[slots]] * (STEP / 2) + layout.dithers[slots]
    shift = np.zeros_like(luma)
    for __ in range(EMBED_PASSES):
        coefficients = blocks.forward(luma + shift)
        current = coefficients[:, :, layout.band_rows, layout.band_cols]
        delta = np.zeros_like(coefficients)
        delta[:, :, layout.band_rows, layout.band_cols] = (
            STEP * np.round((current - offset) / STEP) + offset - current
        )
        shift = np.clip(shift + blocks.inverse(delta, np.zeros_like(luma)), -MAX_SHIFT, MAX_SHIFT)
    array = image.to_array().astype(np.float64) + shift[:, :, np.newaxis]
    return PixelImage.from_array(array)


_chance_cache = {}


def _chance_moments(observations):
    """Mean and variance of max(k, m - k) for k ~ Bin(m, 1/2)"""
    if observations not in _chance_cache:
        k = np.arange(observations + 1)
        pmf = stats.binom.pmf(k, observations, 0.5)
        agree = np.maximum(k, observations - k)
        mean = float(np.sum(pmf * agree))
        _chance_cache[observations] = (mean, float(np.sum(pmf * agree**2)) - mean**2)
    return _chance_cache[observations]


def _agreement_threshold(counts):
    mean = variance = 0.0
    for observations in counts:
        bit_mean, bit_variance = _chance_moments(int(observations))
        mean += bit_mean
        variance += bit_variance
    return mean + SIGMA_GATE * math.sqrt(variance)


def _vote(layout, values, slots):
    """Decode coefficient values read through ``slots``: (bits, DetectionResult)

    Copies of a slot are summed first. Bits of slots lying outside the image
    are voted by the slots present, a bit without any slot reads 0.
    """
    soft = layout.soft(values, slots).ravel()
    slots = slots.ravel()
    slot_sums = np.bincount(slots, weights=soft, minlength=TILE_SLOTS)
    seen = np.bincount(slots, minlength=TILE_SLOTS) > 0
    bit_sums = np.bincount(layout.bit_of_slot, weights=slot_sums, minlength=CODEWORD_BITS)
    bits = (bit_sums < 0).astype(np.uint8)
    signs = 1.0 - 2.0 * bits[layout.bit_of_slot[slots]]
    raw = float(np.mean((1.0 + soft * signs) / 2.0))
    payload = WatermarkPayload.from_codeword(bits)
    if payload is None:
        return bits, DetectionResult(raw_bit_agreement=raw)
    agreeing = (slot_sums < 0) == bits[layout.bit_of_slot].astype(bool)
    agreement = int(np.sum(agreeing & seen))
    counts = np.bincount(layout.bit_of_slot[seen], minlength=CODEWORD_BITS)
    if agreement < _agreement_threshold(counts):
        return bits, DetectionResult(raw_bit_agreement=raw)
    return bits, DetectionResult(DETECTED, payload, raw)


def _read_robust(image, key):
    """Direct decoding, the block grid and the tile starting at the origin"""
    layout = _RobustLayout(key)
    luma = image.luma()
    rows, cols = blocks.block_grid(luma)
    if not rows or not cols:
        return None, DetectionResult()
    return _vote(layout, layout.values(luma), layout.slots(rows, cols))


def _search_alignment(image, key):
    """Try every pixel offset of the block grid and every phase of the tile

    Recovers marks of cropped images. Only phases whose bits pass the CRC
    are voted.
    """
    layout = _RobustLayout(key)
    luma = image.luma()
    for offset_row in range(blocks.BLOCK):
        for offset_col in range(blocks.BLOCK):
            plane = luma[offset_row:, offset_col:]
            rows, cols = blocks.block_grid(plane)
            if not rows or not cols:
                continue
            values = layout.values(plane)
            phases = layout.phase_slots(rows, cols)
            soft = layout.soft(values[np.newaxis], phases).reshape(len(phases), -1)
            flat = phases.reshape(len(phases), -1)
            flat = flat + np.arange(len(phases))[:, np.newaxis] * TILE_SLOTS
            slot_sums = np.bincount(
                flat.ravel(), weights=soft.ravel(), minlength=len(phases) * TILE_SLOTS
            ).reshape(len(phases), TILE_SLOTS)
            bit_sums = slot_sums @ layout.assignment
            for phase, bits in enumerate((bit_sums < 0).astype(np.uint8)):
                if WatermarkPayload.from_codeword(bits) is None:
                    continue
                __, result = _vote(layout, values, phases[phase])
                if result.detected:
                    _logger.debug(
                        "watermark found at offset (%d, %d), tile phase %d",
                        offset_row,
                        offset_col,
                        phase,
                    )
                    return result
    return None


def _sync_candidates(image):
    """Sizes the image may have had before a downscale"""
    largest = math.ceil(image.width / MIN_RESCALE)
    for width in range(largest, image.width, -1):
        height = int(round(image.height * width / image.width))
        yield width, height


def _decode_robust(image, key):
    __, result = _read_robust(image, key)
    if result.detected:
        return result
    found = _search_alignment(image, key)
    if found is not None:
        return found
    if image.width < MIN_ROBUST_SIZE * MIN_RESCALE or image.height < MIN_ROBUST_SIZE * MIN_RESCALE:
        return result
    array = image.to_array()
    for width, height in _sync_candidates(image):
        resampled = PixelImage.from_array(resize(array, width, height))
        __, candidate = _read_robust(resampled, key)
        if candidate.detected:
            _logger.debug("watermark found after resampling to %dx%d", width, height)
            return candidate
    return result


# fragile mode


def _fragile_positions(image, key):
    if image.sample_count < FRAGILE_BITS:
        raise ImageTooSmall("fragile watermarks need %d samples" % FRAGILE_BITS)
    positions = key.rng(b"fragile").permutation(image.sample_count)[:FRAGILE_BITS]
    return positions[:CODEWORD_BITS], positions[CODEWORD_BITS:]


def _fragile_tag(image, samples, tag_positions, key):
    cleared = samples.copy()
    cleared[tag_positions] &= 0xFE
    header = b"%d:%d:%d:" % (image.width, image.height, image.channels)
    digest = hmac.new(key.secret, header + cleared.tobytes(), hashlib.sha256).digest()
    return np.unpackbits(np.frombuffer(digest[: TAG_BITS // 8], dtype=np.uint8))


def _embed_fragile_bits(image, bits, key):
    payload_positions, tag_positions = _fragile_positions(image, key)
    samples = np.frombuffer(image.samples, dtype=np.uint8).copy()
    samples[payload_positions] = (samples[payload_positions] & 0xFE) | bits
    tag = _fragile_tag(image, samples, tag_positions, key)
    samples[tag_positions] = (samples[tag_positions] & 0xFE) | tag
    return replace(image, samples=samples.tobytes())


def _read_fragile_bits(image, key):
    payload_positions, __ = _fragile_positions(image, key)
    samples = np.frombuffer(image.samples, dtype=np.uint8)
    return samples[payload_positions] & 1


def _decode_fragile(image, key):
    try:
        payload_positions, tag_positions = _fragile_positions(image, key)
    except ImageTooSmall:
        return DetectionResult()
    samples = np.frombuffer(image.samples, dtype=np.uint8)
    expected = _fragile_tag(image, samples, tag_positions, key)
    found = samples[tag_positions] & 1
    raw = float(np.mean(expected == found))
    if not np.array_equal(expected, found):
        return DetectionResult(raw_bit_agreement=raw)
    payload = WatermarkPayload.from_codeword(samples[payload_positions] & 1)
    if payload is None:
        return DetectionResult(raw_bit_agreement=raw)
    return DetectionResult(DETECTED, payload, raw)


# public api


def embed_watermark(image, payload, key):
    """Embed the payload, in luma for the robust mode

    :raises ImageTooSmall: robust marks need 64×64, fragile ones 208 samples
    """
    if key.mode == ROBUST:
        return _embed_robust_bits(image, payload.codeword(), key)
    return _embed_fragile_bits(image, payload.codeword(), key)


def decode_watermark(image, key):
    if key.mode == ROBUST:
        return _decode_robust(image, key)
    return _decode_fragile(image, key)


def forge_watermark(source, target, key):
    """Copy the mark read from ``source`` under ``key`` into ``target``

    The bits are transplanted as read, so a key that did not embed the
    source mark yields a target on which nothing is detected.
    """
    if key.mode == ROBUST:
        _check_robust_size(source)
        bits, __ = _read_robust(source, key)
        return _embed_robust_bits(target, bits, key)
    return _embed_fragile_bits(target, _read_fragile_bits(source, key), key)


# perceptible mark


def _glyph(byte):
    y, x = np.mgrid[0:GLYPH, 0:GLYPH]
    pattern = ((byte >> x) ^ y) & 1
    pattern[0, :] = 1
    pattern[:, 0] ^= 1
    return np.where(pattern, 255, 0).astype(np.uint8)


def apply_perceptible_mark(image, text):
    """Stamp one 8×8 glyph per UTF-8 byte of ``text`` in the bottom-right corner"""
    data = text.encode("utf-8")
    if not data:
        raise InvariantViolation("the stamp needs some text")
    width = GLYPH * len(data)
    if image.width < width or image.height < GLYPH:
        raise ImageTooSmall("a %d byte stamp needs %dx%d pixels" % (len(data), width, GLYPH))
    array = image.to_array()
    stamp = np.hstack([_glyph(byte) for byte in data])
    array[-GLYPH:, image.width - width :, :] = stamp[:, :, np.newaxis]
    return PixelImage.from_array(array)


def _is_glyph(block):
    values = np.unique(block)
    return len(values) == 2 and values[0] == 0 and values[1] == 255


def _stamp_width(image):
    if image.width < GLYPH or image.height < GLYPH:
        return 0
    array = image.to_array()
    width = 0
    while width + GLYPH <= image.width:
        right = image.width - width
        if not _is_glyph(array[-GLYPH:, right - GLYPH : right, :]):
            break
        width += GLYPH
    return width


def has_perceptible_mark(image):
    return _stamp_width(image) > 0


def remove_perceptible_mark(image):
    """Fill the stamp with the mean of its neighbourhood

    Images without a stamp are returned unchanged.
    """
    width = _stamp_width(image)
    if not width:
        return image
    array = image.to_array()
    left = image.width - width
    top = image.height - GLYPH
    if top >= GLYPH:
        neighbourhood = array[top - GLYPH : top, max(left - GLYPH, 0) :, :]
    else:
        neighbourhood = array[:, : max(left, 1), :]
    fill = np.rint(neighbourhood.reshape(-1, image.channels).mean(axis=0))
    array[top:, left:, :] = fill.astype(np.uint8)
    _logger.debug("removed a %d pixel wide stamp", width)
    return PixelImage.from_array(array)
