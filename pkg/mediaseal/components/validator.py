# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Validators
==========

A validator runs the checkers of an asset and decides the result with the
outcome table.

``sequential`` (the default) checks C2PA, then the watermark, then the
fingerprint. In ``short_circuit`` mode it stops at the first stage giving a
High confidence row (a matching manifest or a detected watermark matching
the registry); the skipped stages are absent from the report. In ``full``
mode all the stages run.

``watermark_only`` stands for a low confidence validation site: it reads the
watermark alone and never shows the manifest context. Scenarios use it to
show what such a site misses. It may echo the insecure metadata of the
asset (``echo_metadata``), as a careless site would.

Usage::

    with backend.work_on("media.asset") as work:
        report = work.component(usage="validator").validate(asset)
        low = work.component(usage="validator", kind="watermark_only")

"""

import logging

from component.core import AbstractComponent, Component

from ..models import outcome
from ..models import trust as trust_model
from ..models.decision import decide
from ..models.manifest import PRESENT_HASH_MATCH, C2paOutcome

_logger = logging.getLogger(__name__)

SEQUENTIAL = "sequential"
WATERMARK_ONLY = "watermark_only"

WATERMARK_ONLY_CONCERN = "Watermark-only validation, no manifest context available"


class Validator(AbstractComponent):
    _name = "mediaseal.validator"
    _inherit = "base.mediaseal"
    _usage = "validator"
    _apply_on = "media.asset"

    _kind = None

    @classmethod
    def _component_match(cls, work, usage=None, model_name=None, **kw):
        return kw.get("kind", SEQUENTIAL) == cls._kind

    def validate(self, asset, mode=outcome.SHORT_CIRCUIT):
        raise NotImplementedError

    def _checker(self, usage):
        return self.component(usage=usage, model_name="media.asset")

    def _notify(self, report):
        self.backend_record.notify("on_asset_validated", report)
        return report


class SequentialValidator(Component):
    _name = "mediaseal.validator.sequential"
    _inherit = "mediaseal.validator"

    _kind = SEQUENTIAL

    def validate(self, asset, mode=outcome.SHORT_CIRCUIT):
        if mode not in outcome.MODES:
            raise ValueError("unknown validation mode %r" % (mode,))
        c2pa = self._checker("c2pa.checker").check(asset)
        watermark = fingerprint = None
        if mode == outcome.FULL or c2pa.state != PRESENT_HASH_MATCH:
            watermark = self._checker("watermark.checker").check(asset)
            if mode == outcome.FULL or watermark.label != "Det/Match":
                fingerprint = self._checker("fingerprint.checker").check(asset)
        triple = (
            c2pa.state,
            watermark.label if watermark else None,
            fingerprint.label if fingerprint else None,
        )
        decision = decide(triple)
        concerns = list(c2pa.concerns) + list(decision.concerns)
        disagreement = self._disagreement(decision.result, watermark, fingerprint)
        if disagreement:
            concerns.append(disagreement)
        display = None
        if decision.confidence == outcome.HIGH:
            display = self._display(c2pa, watermark)
        report = outcome.ValidationReport(
            c2pa=c2pa,
            watermark=watermark,
            fingerprint=fingerprint,
            result=decision.result,
            confidence=decision.confidence,
            concerns=tuple(concerns),
            display=display,
            needs_human_review=(
                decision.result == outcome.POSSIBLE_MATCH
                or (fingerprint is not None and fingerprint.state == outcome.VALID)
            ),
            row=decision.row,
            extra_tabular=decision.extra_tabular,
            mode=mode,
        )
        _logger.debug("asset validated: %s / %s (row %s)", report.result, report.confidence, report.row)
        return self._notify(report)

    @staticmethod
    def _disagreement(result, watermark, fingerprint):
        if result != outcome.MEDIA_VALIDATES:
            return None
        watermark_ok = watermark is None or watermark.label == "Det/Match"
        fingerprint_ok = fingerprint is None or fingerprint.label == "Valid/Match"
        if watermark_ok and fingerprint_ok:
            return None
        return "secondary signals disagree (watermark=%s, fingerprint=%s)" % (
            watermark.label if watermark else "skipped",
            fingerprint.label if fingerprint else "skipped",
        )

    def _display(self, c2pa, watermark):
        """What a validation site may show, from the asset's own manifest
        or from the registry entry the watermark points to"""
        if c2pa.state == PRESENT_HASH_MATCH:
            signed, certificate, source = c2pa.signed, c2pa.certificate, "manifest"
        elif watermark is not None and watermark.entry is not None:
            signed = watermark.entry.signed_manifest
            __, certificate = trust_model.lookup(
                self.backend_record.trust, signed.certificate_id
            )
            source = "registry"
        else:
            return None
        manifest = signed.manifest
        level = manifest.security_level
        if certificate is not None:
            level = trust_model.lower_security_level(level, certificate.security_level)
        return outcome.DisplayPayload(
            signer=manifest.signer_name,
            assertions=manifest.assertions,
            actions=tuple(action.to_dict() for action in manifest.actions),
            ingredient_thumbnails=tuple(
                ingredient.thumbnail_hash.hex()
                for ingredient in manifest.ingredients
                if ingredient.thumbnail_hash
            ),
            security_level=level,
            low_security_caveat=level == trust_model.SECURITY_LEVELS[0],
            source=source,
        )


class WatermarkOnlyValidator(Component):
    _name = "mediaseal.validator.watermark.only"
    _inherit = "mediaseal.validator"

    _kind = WATERMARK_ONLY

    _results = {
        "Det/Match": (outcome.MATCH, outcome.LOW),
        "Det/NoMatch": (outcome.MEDIA_MODIFIED, outcome.LOW),
    }

    def validate(self, asset, mode=outcome.SHORT_CIRCUIT, echo_metadata=False):
        watermark = self._checker("watermark.checker").check(asset)
        result, confidence = self._results.get(
            watermark.label, (outcome.INDETERMINATE, outcome.CANNOT_BE_ASSERTED)
        )
        concerns = [WATERMARK_ONLY_CONCERN]
        if echo_metadata:
            concerns.extend(
                "%s: %s" % (key, value) for key, value in asset.insecure_meta.as_dict().items()
            )
        report = outcome.ValidationReport(
            c2pa=C2paOutcome(),
            watermark=watermark,
            result=result,
            confidence=confidence,
            concerns=tuple(concerns),
            extra_tabular=True,
            mode=mode,
        )
        return self._notify(report)
