# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Fingerprints
============

64-bit soft hashes of the luma plane, compared by Hamming distance.

* ``block_mean``: box average to an 8×8 grid, each cell compared to the
  median of the 64 means.
* ``dct_wave``: box average to a 32×32 grid, orthonormal 2-D DCT-II, the 8×8
  block of rows/columns 1..8 with the (1, 1) entry replaced by (0, 1),
  rounded to 6 decimals and compared to its median.

A cell equal to the median gives a 1. Bits are row-major, first cell in the
most significant bit. Luma is the integer ``299 R + 587 G + 114 B`` (``1000
v`` for gray images) so that box sums are exact.

"""

import logging
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import fft

from ..exception import AlgorithmMismatch, BudgetExhausted, ImageTooSmall, InvariantViolation
from .container import PixelImage

_logger = logging.getLogger(__name__)

BLOCK_MEAN = "block_mean"
DCT_WAVE = "dct_wave"
ALGORITHMS = (BLOCK_MEAN, DCT_WAVE)

DEFAULT_TAU = 10
MIN_SIZE = 8

VALID_MATCH = "valid_match"
VALID_NO_MATCH = "valid_no_match"
MISSING_MANIFEST = "missing_manifest"
INVALID = "invalid"
NO_ACCESS = "no_access"

LUMA_WEIGHTS = np.array([299, 587, 114], dtype=np.int64)

CollisionResult = namedtuple("CollisionResult", "image distance iterations")


@dataclass(frozen=True)
class Fingerprint:
    algorithm: str
    bits: int

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvariantViolation("unknown fingerprint algorithm %r" % (self.algorithm,))
        if not 0 <= self.bits < 1 << 64:
            raise InvariantViolation("fingerprints are 64-bit values")

    def __str__(self):
        return "%s:%016x" % (self.algorithm, self.bits)

    @classmethod
    def from_text(cls, text):
        algorithm, __, value = text.partition(":")
        if len(value) != 16 or value != value.lower():
            raise InvariantViolation("fingerprints read <algorithm>:<16 hex digits>")
        try:
            bits = int(value, 16)
        except ValueError as exc:
            raise InvariantViolation("bad fingerprint %r" % text) from exc
        return cls(algorithm, bits)

    def bit_array(self):
        return np.array([(self.bits >> (63 - i)) & 1 for i in range(64)], dtype=np.uint8)

    @classmethod
    def from_bit_array(cls, algorithm, bits):
        value = 0
        for bit in bits:
            value = (value << 1) | int(bit)
        return cls(algorithm, value)


@dataclass(frozen=True)
class MatchResult:
    status: str
    manifest_ref: Optional[bytes] = None
    distance: Optional[int] = None
    needs_human_review: bool = False

    def __post_init__(self):
        if self.status == VALID_MATCH and not self.needs_human_review:
            raise InvariantViolation("every automated match needs a human review")


def integer_luma(image):
    """Luma scaled by 1000, as int64"""
    array = image.to_array().astype(np.int64)
    if image.channels == 1:
        return array[:, :, 0] * 1000
    return array @ LUMA_WEIGHTS


def _cell_edges(length, cells):
    starts = (np.arange(cells) * length) // cells
    ends = np.maximum((np.arange(1, cells + 1) * length) // cells, starts + 1)
    return starts, ends


def box_means(plane, cells):
    """Mean of each of ``cells`` × ``cells`` boxes of the plane"""
    height, width = plane.shape
    table = np.zeros((height + 1, width + 1), dtype=np.int64)
    table[1:, 1:] = plane.cumsum(axis=0).cumsum(axis=1)
    r0, r1 = _cell_edges(height, cells)
    c0, c1 = _cell_edges(width, cells)
    sums = (
        table[np.ix_(r1, c1)] - table[np.ix_(r0, c1)] - table[np.ix_(r1, c0)] + table[np.ix_(r0, c0)]
    )
    counts = np.outer(r1 - r0, c1 - c0)
    return sums / counts


def _threshold(values):
    return (values >= np.median(values)).astype(np.uint8).ravel()


def _dct_region(plane):
    coefficients = fft.dctn(box_means(plane, 32), norm="ortho")
    region = coefficients[1:9, 1:9].copy()
    region[0, 0] = coefficients[0, 1]
    return np.round(region, 6)


def compute_fingerprint(image, algorithm=BLOCK_MEAN):
    """:raises ImageTooSmall: below 8×8"""
    if algorithm not in ALGORITHMS:
        raise InvariantViolation("unknown fingerprint algorithm %r" % (algorithm,))
    if image.width < MIN_SIZE or image.height < MIN_SIZE:
        raise ImageTooSmall("fingerprints need %dx%d pixels" % (MIN_SIZE, MIN_SIZE))
    plane = integer_luma(image)
    if algorithm == BLOCK_MEAN:
        bits = _threshold(box_means(plane, 8))
    else:
        bits = _threshold(_dct_region(plane))
    return Fingerprint.from_bit_array(algorithm, bits)


def hamming_distance(a, b):
    if a.algorithm != b.algorithm:
        raise AlgorithmMismatch("cannot compare %s with %s" % (a.algorithm, b.algorithm))
    return bin(a.bits ^ b.bits).count("1")


def thumbnail(image):
    """8×8 luma thumbnail, 64 bytes"""
    if image.width < MIN_SIZE or image.height < MIN_SIZE:
        raise ImageTooSmall("thumbnails need %dx%d pixels" % (MIN_SIZE, MIN_SIZE))
    means = box_means(integer_luma(image), 8) / 1000
    return np.clip(np.rint(means), 0, 255).astype(np.uint8).tobytes()


# collisions


def _shift_box(array, rows, cols, delta):
    region = array[rows[0] : rows[1], cols[0] : cols[1], :].astype(np.int64) + delta
    array[rows[0] : rows[1], cols[0] : cols[1], :] = np.clip(region, 0, 255)


def _luma_shift(mean, median, raise_):
    # whole pixel units, one past the median
    gap = (median - mean) / 1000.0
    if raise_:
        return int(np.ceil(gap)) + 1
    return int(np.floor(gap)) - 1


def _block_mean_step(array, target_bits):
    """Move the disagreeing cells closest to the median across it

    A cell that must become 1 is paired with one that must become 0 so
    that the number of cells above the median is kept.
    """
    height, width = array.shape[:2]
    image = PixelImage.from_array(array)
    means = box_means(integer_luma(image), 8).ravel()
    median = np.median(means)
    current = (means >= median).astype(np.uint8)
    distance = np.abs(means - median)
    order = np.argsort(distance, kind="stable")
    wrong = [cell for cell in order if current[cell] != target_bits[cell]]
    raise_ = [cell for cell in wrong if target_bits[cell]]
    lower = [cell for cell in wrong if not target_bits[cell]]
    moves = []
    if raise_ and lower:
        moves = [(raise_[0], True), (lower[0], False)]
    elif wrong:
        moves = [(wrong[0], bool(target_bits[wrong[0]]))]
    r0, r1 = _cell_edges(height, 8)
    c0, c1 = _cell_edges(width, 8)
    for cell, up in moves:
        row, col = divmod(int(cell), 8)
        delta = _luma_shift(means[cell], median, up)
        _shift_box(array, (r0[row], r1[row]), (c0[col], c1[col]), delta)


def _dct_wave_step(array, target, best, step):
    """Best single 8×8-grid box shift, or None when no shift helps"""
    height, width = array.shape[:2]
    r0, r1 = _cell_edges(height, 8)
    c0, c1 = _cell_edges(width, 8)
    best_move = None
    evaluations = 0
    for row in range(8):
        for col in range(8):
            for delta in (step, -step):
                candidate = array.copy()
                _shift_box(candidate, (r0[row], r1[row]), (c0[col], c1[col]), delta)
                distance = hamming_distance(
                    compute_fingerprint(PixelImage.from_array(candidate), DCT_WAVE), target
                )
                evaluations += 1
                if distance < best:
                    best, best_move = distance, candidate
    return best_move, best, evaluations


def craft_collision(target, base, budget=10000):
    """Perturb ``base`` until its fingerprint equals ``target``

    ``target`` must be realizable, e.g. the fingerprint of another image.
    Returns a :class:`CollisionResult`.

    :raises BudgetExhausted: with the best effort result attached
    """
    current = compute_fingerprint(base, target.algorithm)
    distance = hamming_distance(current, target)
    if distance == 0:
        return CollisionResult(base, 0, 0)
    array = base.to_array()
    iterations = 0
    if target.algorithm == BLOCK_MEAN:
        target_bits = target.bit_array()
        best = CollisionResult(base, distance, 0)
        while iterations < budget:
            _block_mean_step(array, target_bits)
            iterations += 1
            image = PixelImage.from_array(array)
            distance = hamming_distance(compute_fingerprint(image, BLOCK_MEAN), target)
            if distance < best.distance:
                best = CollisionResult(image, distance, iterations)
            if distance == 0:
                return CollisionResult(image, 0, iterations)
    else:
        step = 16
        best = CollisionResult(base, distance, 0)
        while iterations < budget and step >= 1:
            move, distance, evaluations = _dct_wave_step(array, target, best.distance, step)
            iterations += evaluations
            if move is None:
                step //= 2
                continue
            array = move
            best = CollisionResult(PixelImage.from_array(array), distance, iterations)
            if distance == 0:
                return best
    _logger.debug("collision search stopped at distance %d", best.distance)
    raise BudgetExhausted(
        "distance %d after %d iterations" % (best.distance, iterations), result=best
    )


def perturbation_target(image, tau=DEFAULT_TAU):
    """A realizable block_mean fingerprint more than ``tau`` bits away

    Equal numbers of cells closest to the median are moved each way.
    """
    means = box_means(integer_luma(image), 8).ravel()
    median = np.median(means)
    bits = (means >= median).astype(np.uint8)
    pairs = tau // 2 + 1
    above = [cell for cell in np.argsort(means, kind="stable") if bits[cell]]
    below = [cell for cell in np.argsort(-means, kind="stable") if not bits[cell]]
    if min(len(above), len(below)) < pairs:
        raise InvariantViolation("too few cells to move the fingerprint past tau")
    for cell in above[:pairs]:
        bits[cell] = 0
    for cell in below[:pairs]:
        bits[cell] = 1
    return Fingerprint.from_bit_array(BLOCK_MEAN, bits)
