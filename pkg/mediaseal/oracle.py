# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Oracle Attack
=============

Simulation of an attacker removing a watermark with nothing but a detection
endpoint. The attacker hill-climbs: it adds a small sign pattern to a random
block, asks the endpoint, and keeps the change when the mark looks weaker.
It stops as soon as the endpoint answers that nothing is detected.

``internal_confidence``
    answers with the raw bit agreement of the decoder, the attacker compares
    it with the one of its current image.

``public_rate_limited``
    answers detected or undetectable only, behind a token bucket. The
    attacker estimates how weak the mark is by the number of detections on
    copies of the candidate dithered with a little noise, each copy costing
    a query. A refused query is waited for.

Time is simulated: every granted query lasts ``SECONDS_PER_QUERY``, so the
cost of both attacks can be compared in windows of the rate limiter. The
proposals are the same for both endpoints given a seed.

"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .components.scenario import scene_image
from .exception import BudgetExhausted, InvariantViolation
from .models.container import PixelImage
from .models.watermark import WatermarkKey, WatermarkPayload, decode_watermark, embed_watermark
from .registry.rate_limit import TokenBucket

_logger = logging.getLogger(__name__)

INTERNAL_CONFIDENCE = "internal_confidence"
PUBLIC_RATE_LIMITED = "public_rate_limited"
ENDPOINTS = (INTERNAL_CONFIDENCE, PUBLIC_RATE_LIMITED)

SECONDS_PER_QUERY = 1.0
CLIENT_ID = "attacker"


@dataclass(frozen=True)
class OracleResult:
    endpoint: str
    success: bool
    #: granted queries
    queries: int
    #: queries refused by the rate limiter
    refused: int = 0
    #: simulated seconds spent
    elapsed: float = 0.0
    #: rate limiter windows spent
    windows: int = 0
    #: mean squared error of the attacked image
    distortion: float = 0.0
    #: simulated time of every granted query
    grants: Tuple[float, ...] = ()

    def max_grants_per_window(self, window):
        """Largest number of grants in any window of length ``window``"""
        times = self.grants
        best = start = 0
        for end, time_ in enumerate(times):
            while time_ - times[start] >= window:
                start += 1
            best = max(best, end - start + 1)
        return best

    def to_dict(self):
        return {
            "distortion": "%.6f" % self.distortion,
            "elapsed": "%.6f" % self.elapsed,
            "endpoint": self.endpoint,
            "queries": self.queries,
            "refused": self.refused,
            "success": self.success,
            "windows": self.windows,
        }


class _Clock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


class _Endpoint:
    """Counts the queries of an attack and stops it at ``budget``"""

    def __init__(self, key, budget, clock):
        self.key = key
        self.budget = budget
        self.clock = clock
        self.queries = 0
        self.refused = 0
        self.grants = []

    def _take(self):
        if self.queries >= self.budget:
            raise BudgetExhausted("%d queries spent" % self.queries)
        self._wait()
        self.grants.append(self.clock.now)
        self.queries += 1
        self.clock.now += SECONDS_PER_QUERY

    def _wait(self):
        pass

    def _decode(self, array):
        self._take()
        return decode_watermark(PixelImage.from_array(array), self.key)


class _InternalEndpoint(_Endpoint):
    def query(self, array):
        """(detected, raw bit agreement)"""
        result = self._decode(array)
        return result.detected, result.raw_bit_agreement


class _PublicEndpoint(_Endpoint):
    def __init__(self, key, budget, clock, bucket):
        super().__init__(key, budget, clock)
        self.bucket = bucket

    def _wait(self):
        while not self.bucket.allow(CLIENT_ID):
            self.refused += 1
            self.clock.now += max(self.bucket.retry_after(CLIENT_ID), SECONDS_PER_QUERY)

    def query(self, array):
        return self._decode(array).detected


def _propose(array, rng, amplitude):
    """A copy of ``array`` with a ±amplitude pattern on a random 8×8 block"""
    rows, cols = array.shape[0] // 8, array.shape[1] // 8
    row, col = int(rng.integers(rows)), int(rng.integers(cols))
    pattern = rng.choice((-amplitude, amplitude), size=(8, 8))
    candidate = array.astype(np.float64)
    candidate[row * 8 : row * 8 + 8, col * 8 : col * 8 + 8, :] += pattern[:, :, np.newaxis]
    return np.clip(np.rint(candidate), 0, 255).astype(np.uint8)


def _confidence_attack(endpoint, original, rng, amplitude):
    current = original
    detected, best = endpoint.query(current)
    while detected:
        candidate = _propose(current, rng, amplitude)
        detected, score = endpoint.query(candidate)
        if not detected:
            return candidate
        if score < best:
            current, best = candidate, score
    return current


def _binary_attack(
    endpoint, original, rng, dither_rng, amplitude, queries_per_estimate, dither
):
    def detections(array):
        count = 0
        for __ in range(queries_per_estimate - 1):
            noisy = array + dither_rng.normal(0.0, dither, array.shape)
            count += endpoint.query(np.clip(np.rint(noisy), 0, 255).astype(np.uint8))
        return count

    current = original
    if not endpoint.query(current):
        return current
    best = detections(current)
    while True:
        candidate = _propose(current, rng, amplitude)
        if not endpoint.query(candidate):
            return candidate
        count = detections(candidate)
        # flat answers carry no information, the change is kept
        if count <= best:
            current, best = candidate, count


def oracle_attack_simulation(
    endpoint,
    seed=0,
    budget=5000,
    rate_limit=10,
    rate_window=60.0,
    amplitude=4.0,
    queries_per_estimate=16,
    dither=2.0,
):
    """Queries an attacker needs to remove a watermark through ``endpoint``

    :param endpoint: ``internal_confidence`` or ``public_rate_limited``
    :param budget: queries the attacker may spend, 0 exhausts it at once
    :param rate_limit: queries granted per ``rate_window`` seconds by the
                       public endpoint
    :param queries_per_estimate: queries per estimate of the public attacker
    :return: an :class:`OracleResult`, deterministic per seed
    """
    if endpoint not in ENDPOINTS:
        raise InvariantViolation("unknown endpoint %r" % (endpoint,))
    if rate_limit < 1:
        raise InvariantViolation("the public endpoint grants at least one query per window")
    if queries_per_estimate < 1:
        raise InvariantViolation("the public attacker needs at least one query per estimate")
    proposal_seed, dither_seed, mark_seed = np.random.SeedSequence(seed).spawn(3)
    rng = np.random.default_rng(proposal_seed)
    key = WatermarkKey.generate(seed=seed)
    payload = WatermarkPayload(int(np.random.default_rng(mark_seed).integers(0, 1 << 63)))
    original = embed_watermark(scene_image(seed), payload, key).to_array()

    clock = _Clock()
    if endpoint == INTERNAL_CONFIDENCE:
        oracle = _InternalEndpoint(key, budget, clock)
    else:
        bucket = TokenBucket(rate_limit, rate_window, clock=clock)
        oracle = _PublicEndpoint(key, budget, clock, bucket)
    success = True
    try:
        if endpoint == INTERNAL_CONFIDENCE:
            attacked = _confidence_attack(oracle, original, rng, amplitude)
        else:
            attacked = _binary_attack(
                oracle,
                original,
                rng,
                np.random.default_rng(dither_seed),
                amplitude,
                queries_per_estimate,
                dither,
            )
    except BudgetExhausted as exc:
        _logger.info("oracle attack on %s stopped: %s", endpoint, exc)
        success = False
        attacked = original
    distortion = float(np.mean((attacked.astype(np.float64) - original) ** 2))
    result = OracleResult(
        endpoint=endpoint,
        success=success,
        queries=oracle.queries,
        refused=oracle.refused,
        elapsed=clock.now,
        windows=math.ceil(clock.now / rate_window) if clock.now else 0,
        distortion=distortion,
        grants=tuple(oracle.grants),
    )
    _logger.debug("oracle attack on %s: %s", endpoint, result.to_dict())
    return result
