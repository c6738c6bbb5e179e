# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Checkers
========

The three validation stages of an asset. A checker never raises on a
registry fault or an undecodable signal, the failure is its outcome.

"""

import logging

from component.core import AbstractComponent, Component

from ..exception import ImageTooSmall
from ..models import fingerprint as fingerprint_model
from ..models import outcome
from ..models.manifest import hard_hash, validate_manifest
from ..models.watermark import decode_watermark
from ..registry.store import FOUND, MISSING, NO_ACCESS, NOT_FOUND

_logger = logging.getLogger(__name__)


class Checker(AbstractComponent):
    _name = "mediaseal.checker"
    _inherit = "base.mediaseal"
    _apply_on = "media.asset"

    def check(self, asset):
        raise NotImplementedError

    @staticmethod
    def _hash_state(entry, asset):
        if entry.content_hash == hard_hash(asset.image):
            return outcome.HASH_MATCH
        return outcome.HASH_NO_MATCH


class C2paChecker(Component):
    _name = "mediaseal.c2pa.checker"
    _inherit = "mediaseal.checker"
    _usage = "c2pa.checker"

    def check(self, asset):
        return validate_manifest(asset, self.backend_record.trust)


class WatermarkChecker(Component):
    _name = "mediaseal.watermark.checker"
    _inherit = "mediaseal.checker"
    _usage = "watermark.checker"

    def check(self, asset):
        key = self.backend_record.watermark_key
        if key is None:
            _logger.debug("no watermark key, the watermark stage is undetectable")
            return outcome.WatermarkOutcome(outcome.UNDETECTABLE)
        detection = decode_watermark(asset.image, key)
        if not detection.detected:
            return outcome.WatermarkOutcome(outcome.UNDETECTABLE)
        watermark_id = detection.payload.id
        lookup = self.binder_for("registry.entry").to_internal(watermark_id)
        if lookup.status == NO_ACCESS:
            return outcome.WatermarkOutcome(outcome.NO_ACCESS, watermark_id=watermark_id)
        if lookup.status in (NOT_FOUND, MISSING):
            _logger.warning("watermark id %d is not in the registry", watermark_id)
            return outcome.WatermarkOutcome(
                outcome.DETECTABLE, outcome.HASH_MISSING, watermark_id
            )
        return outcome.WatermarkOutcome(
            outcome.DETECTABLE,
            self._hash_state(lookup.entry, asset),
            watermark_id,
            entry=lookup.entry,
        )


class FingerprintChecker(Component):
    _name = "mediaseal.fingerprint.checker"
    _inherit = "mediaseal.checker"
    _usage = "fingerprint.checker"

    def match(self, asset):
        """(MatchResult, fingerprint, best entry) of the asset

        The fingerprint is None when the image is too small to compute one.
        """
        backend = self.backend_record
        try:
            fingerprint = fingerprint_model.compute_fingerprint(
                asset.image, backend.fingerprint_algorithm
            )
        except ImageTooSmall:
            return fingerprint_model.MatchResult(fingerprint_model.INVALID), None, None
        lookup = self.adapter_for("registry.entry").lookup_by_fingerprint(
            fingerprint, backend.tau
        )
        if lookup.status == NO_ACCESS:
            status = fingerprint_model.NO_ACCESS
        elif lookup.status == MISSING:
            status = fingerprint_model.MISSING_MANIFEST
        elif lookup.status != FOUND:
            status = fingerprint_model.INVALID
        else:
            best = lookup.candidates[0]
            if self._hash_state(best.entry, asset) == outcome.HASH_MATCH:
                status = fingerprint_model.VALID_MATCH
            else:
                status = fingerprint_model.VALID_NO_MATCH
            result = fingerprint_model.MatchResult(
                status, best.entry.content_hash, best.distance, needs_human_review=True
            )
            return result, fingerprint, best.entry
        return fingerprint_model.MatchResult(status), fingerprint, None

    def check(self, asset):
        match, fingerprint, entry = self.match(asset)
        states = {
            fingerprint_model.VALID_MATCH: (outcome.VALID, outcome.HASH_MATCH),
            fingerprint_model.VALID_NO_MATCH: (outcome.VALID, outcome.HASH_NO_MATCH),
            fingerprint_model.MISSING_MANIFEST: (outcome.VALID, outcome.HASH_MISSING),
            fingerprint_model.INVALID: (outcome.INVALID, None),
            fingerprint_model.NO_ACCESS: (outcome.NO_ACCESS, None),
        }
        state, registry_hash = states[match.status]
        return outcome.FingerprintOutcome(
            state,
            registry_hash,
            str(fingerprint) if fingerprint is not None else None,
            match.distance,
            entry=entry,
        )
