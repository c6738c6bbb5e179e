# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Validation Outcomes
===================

Outcomes of the three validation stages, the final report and what may be
displayed to the public. Labels are the ones of the outcome table
(``mediaseal/data/outcome_table.csv``).

"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..exception import InvariantViolation
from .manifest import PRESENT_HASH_MATCH

INDETERMINATE = "Indeterminate"
MEDIA_MODIFIED = "Media Modified"
POSSIBLE_MATCH = "Possible Match"
MATCH = "Match"
MEDIA_VALIDATES = "Media Validates"
# from the most to the least pessimistic
RESULTS = (INDETERMINATE, MEDIA_MODIFIED, POSSIBLE_MATCH, MATCH, MEDIA_VALIDATES)

CANNOT_BE_ASSERTED = "Cannot Be Asserted"
LOWEST = "Lowest"
LOW = "Low"
HIGH = "High"
CONFIDENCES = (CANNOT_BE_ASSERTED, LOWEST, LOW, HIGH)

# registry hash comparison of the watermark and fingerprint stages
HASH_MATCH = "match"
HASH_NO_MATCH = "no_match"
HASH_MISSING = "missing"
_HASH_LABELS = {HASH_MATCH: "Match", HASH_NO_MATCH: "NoMatch", HASH_MISSING: "Missing"}

DETECTABLE = "detectable"
UNDETECTABLE = "undetectable"
VALID = "valid"
INVALID = "invalid"
NO_ACCESS = "no_access"

SHORT_CIRCUIT = "short_circuit"
FULL = "full"
MODES = (SHORT_CIRCUIT, FULL)


@dataclass(frozen=True)
class WatermarkOutcome:
    state: str
    registry_hash: Optional[str] = None
    watermark_id: Optional[int] = None
    #: registry entry the watermark id resolved to
    entry: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.state not in (DETECTABLE, NO_ACCESS, UNDETECTABLE):
            raise InvariantViolation("unknown watermark outcome %r" % (self.state,))
        if (self.state == DETECTABLE) != (self.registry_hash is not None):
            raise InvariantViolation("only a detected watermark has a registry hash")

    @property
    def label(self):
        if self.state == DETECTABLE:
            return "Det/%s" % _HASH_LABELS[self.registry_hash]
        return "NoAccess" if self.state == NO_ACCESS else "Undetectable"

    def to_dict(self):
        return {"label": self.label, "watermark_id": self.watermark_id}


@dataclass(frozen=True)
class FingerprintOutcome:
    state: str
    registry_hash: Optional[str] = None
    fingerprint: Optional[str] = None
    distance: Optional[int] = None
    entry: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.state not in (VALID, NO_ACCESS, INVALID):
            raise InvariantViolation("unknown fingerprint outcome %r" % (self.state,))
        if (self.state == VALID) != (self.registry_hash is not None):
            raise InvariantViolation("only a valid fingerprint has a registry hash")

    @property
    def label(self):
        if self.state == VALID:
            return "Valid/%s" % _HASH_LABELS[self.registry_hash]
        return "NoAccess" if self.state == NO_ACCESS else "Invalid"

    def to_dict(self):
        return {
            "distance": self.distance,
            "fingerprint": self.fingerprint,
            "label": self.label,
        }


@dataclass(frozen=True)
class DisplayPayload:
    """What a validation site may show, high confidence only"""

    signer: str
    assertions: Tuple[str, ...] = ()
    actions: Tuple[dict, ...] = ()
    ingredient_thumbnails: Tuple[str, ...] = ()
    security_level: str = "cloud_high"
    low_security_caveat: bool = False
    source: str = "manifest"

    def to_dict(self):
        return {
            "actions": list(self.actions),
            "assertions": list(self.assertions),
            "ingredient_thumbnails": list(self.ingredient_thumbnails),
            "low_security_caveat": self.low_security_caveat,
            "security_level": self.security_level,
            "signer": self.signer,
            "source": self.source,
        }


@dataclass(frozen=True)
class ValidationReport:
    c2pa: object
    watermark: Optional[WatermarkOutcome] = None
    fingerprint: Optional[FingerprintOutcome] = None
    result: str = INDETERMINATE
    confidence: str = CANNOT_BE_ASSERTED
    concerns: Tuple[str, ...] = ()
    display: Optional[DisplayPayload] = None
    needs_human_review: bool = False
    row: Optional[int] = None
    extra_tabular: bool = False
    mode: str = FULL

    def __post_init__(self):
        if self.result not in RESULTS or self.confidence not in CONFIDENCES:
            raise InvariantViolation("unknown result %r / %r" % (self.result, self.confidence))
        if self.result == MEDIA_VALIDATES and (
            self.confidence != HIGH or self.c2pa.state != PRESENT_HASH_MATCH
        ):
            raise InvariantViolation("media only validates on a matching manifest")
        if self.display is not None and self.confidence != HIGH:
            raise InvariantViolation("only high confidence results are displayed")
        if self.result == POSSIBLE_MATCH and not self.needs_human_review:
            raise InvariantViolation("a possible match needs a human review")

    @property
    def triple(self):
        return (
            self.c2pa.state,
            self.watermark.label if self.watermark else None,
            self.fingerprint.label if self.fingerprint else None,
        )

    def to_dict(self):
        c2pa = self.c2pa
        return {
            "c2pa": {
                "certificate_id": c2pa.signed.certificate_id if c2pa.signed else None,
                "concerns": list(c2pa.concerns),
                "state": c2pa.state,
            },
            "concerns": list(self.concerns),
            "confidence": self.confidence,
            "display": self.display.to_dict() if self.display else None,
            "extra_tabular": self.extra_tabular,
            "fingerprint": self.fingerprint.to_dict() if self.fingerprint else None,
            "mode": self.mode,
            "needs_human_review": self.needs_human_review,
            "result": self.result,
            "row": self.row,
            "watermark": self.watermark.to_dict() if self.watermark else None,
        }
