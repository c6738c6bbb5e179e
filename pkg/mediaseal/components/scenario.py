# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Scenarios
=========

Social attacks played end to end: a scenario publishes assets, attacks them
with the catalog of :mod:`.attack` and validates the result. Whether the
attack is mitigated is decided by a predicate on the validation reports.

A scenario runs in a world of its own: a backend with a temporary registry,
a trust list and keys derived from the seed, so a result only depends on
the seed::

    with backend.work_on("scenario.result") as work:
        result = work.component(usage="scenario", scenario_name="scenario-2").run(seed=7)

"""

import hashlib
import logging
import tempfile
from contextlib import contextmanager

import numpy as np

from component.core import AbstractComponent, Component
from component.exception import NoComponentError

from ..exception import UnknownAttack
from ..models import outcome
from ..models import trust as trust_model
from ..models.backend import MediaSealBackend
from ..models.container import InsecureMetadata, MediaAsset, PixelImage
from ..models.fingerprint import thumbnail
from ..models.manifest import NOT_PRESENT, REVOKED, Action, EditRegion, Ingredient
from ..models.scenario import AttackSpec, ScenarioResult
from ..models.transformation import screenshot
from ..models.watermark import WatermarkKey
from ..validation import validate
from .attack import run_attack

_logger = logging.getLogger(__name__)

SCENARIO_NAMES = ("scenario-1", "scenario-2", "scenario-3")

# fixed so that reports only depend on the seed
ISSUED_AT = 1700000000
REVOKED_AT = 1700003600


def scene_image(seed, size=64, channels=3):
    """A synthetic photograph: 8×8 flat cells with a little grain"""
    rng = np.random.default_rng(seed)
    cells = rng.integers(32, 224, size=(8, 8, channels)).astype(np.float64)
    array = np.repeat(np.repeat(cells, size // 8, axis=0), size // 8, axis=1)
    return PixelImage.from_array(array + rng.normal(0.0, 3.0, array.shape))


# mitigation predicates


def context_displayed(report, region, thumbnail_hash):
    """The edit region and the ingredient thumbnail are shown to the public"""
    display = report.display
    if display is None:
        return False
    shown = any(
        action["kind"] == "ai_inpainted" and action["region"] == region.to_dict()
        for action in display.actions
    )
    return shown and thumbnail_hash.hex() in display.ingredient_thumbnails


def forgery_refused(report):
    """The re-signed manifest is refused and nothing is vouched for"""
    return (
        report.c2pa.state == NOT_PRESENT
        and REVOKED in report.c2pa.concerns
        and report.confidence != outcome.HIGH
        and report.display is None
    )


def metadata_ignored(before, after, value):
    """Outcomes unchanged by the tampering, tampered value never shown"""
    if (before.result, before.confidence, before.triple) != (
        after.result,
        after.confidence,
        after.triple,
    ):
        return False
    shown = list(after.concerns)
    if after.display is not None:
        display = after.display
        shown.extend(display.assertions)
        shown.append(display.signer)
        shown.extend(str(action) for action in display.actions)
    return not any(value in text for text in shown)


class Scenario(AbstractComponent):
    _name = "mediaseal.scenario"
    _inherit = "base.mediaseal"
    _usage = "scenario"
    _apply_on = "scenario.result"

    _scenario_name = None

    @classmethod
    def _component_match(cls, work, usage=None, model_name=None, **kw):
        return kw.get("scenario_name") == cls._scenario_name

    def run(self, seed=0, **params):
        raise NotImplementedError

    @contextmanager
    def _world(self, seed, *certificates):
        """Backend with a temporary registry trusting ``certificates``

        ``certificates`` are (certificate id, owner, security level); yields
        the backend and the signing keys by certificate id.
        """
        trust = trust_model.TrustList()
        keys = {}
        for index, (certificate_id, owner, level) in enumerate(certificates):
            key, record = trust_model.issue_certificate(
                certificate_id, owner, level, seed=seed * 16 + index
            )
            trust = trust_model.add_certificate(trust, record)
            keys[certificate_id] = key
        with tempfile.TemporaryDirectory(prefix="mediaseal-scenario-") as data_dir:
            backend = MediaSealBackend(
                trust=trust,
                watermark_key=WatermarkKey.generate(seed=seed),
                data_dir=data_dir,
                tau=self.backend_record.tau,
                fingerprint_algorithm=self.backend_record.fingerprint_algorithm,
                audit=self.backend_record.audit,
                components_registry=self.work.components_registry,
            )
            yield backend, keys

    @staticmethod
    def _publish(backend, asset, key, certificate_id, seed, **values):
        with backend.work_on("media.asset") as work:
            exporter = work.component(usage="record.exporter")
            return exporter.run(
                asset,
                key,
                certificate_id,
                issued_at=ISSUED_AT,
                watermark=True,
                register=True,
                seed=seed,
                **values
            )

    @staticmethod
    def _attack(backend, asset, spec, **context):
        with backend.work_on("media.asset") as work:
            return run_attack(work, asset, spec, **context)

    def _result(self, spec, before, after, mitigated, variants=()):
        result = ScenarioResult(
            scenario=self._scenario_name,
            attack_applied=spec,
            report_before=before,
            report_after=after,
            mitigated=mitigated,
            variants=tuple(variants),
        )
        _logger.info("%s: mitigated=%s", self._scenario_name, mitigated)
        return result


class AuthenticFakedAsAi(Component):
    """An authentic capture, subtly edited with a generative fill, is
    passed off as AI generated

    A high confidence validation shows where the edit is and the thumbnail
    of the original capture. A watermark-only validation shows nothing of
    it (``watermark_only`` variant).
    """

    _name = "mediaseal.scenario.authentic.faked.as.ai"
    _inherit = "mediaseal.scenario"
    _scenario_name = "scenario-1"

    def run(self, seed=0, region=(24, 24, 32, 32)):
        # refused before anything runs: a zero area edit is no edit
        region = EditRegion(*region)
        with self._world(
            seed,
            ("camera", "Camera maker", "device_secure"),
            ("editor", "Cloud photo editor", "cloud_high"),
        ) as (backend, keys):
            original = self._publish(
                backend,
                MediaAsset(scene_image(seed)),
                keys["camera"],
                "camera",
                seed,
                assertions=("camera_captured",),
                actions=(Action("created", tool="camera", timestamp=ISSUED_AT),),
            ).asset
            before = validate(backend, original)

            array = original.image.to_array()
            box = array[region.top : region.bottom, region.left : region.right]
            box[...] = np.rint(box.mean(axis=(0, 1)))
            edited = original.without_manifest().with_image(PixelImage.from_array(array))
            thumbnail_hash = hashlib.sha256(thumbnail(original.image)).digest()
            edited = self._publish(
                backend,
                edited,
                keys["editor"],
                "editor",
                seed + 1,
                actions=(
                    Action("opened", tool="photo editor", timestamp=ISSUED_AT),
                    Action(
                        "ai_inpainted",
                        tool="generative fill",
                        timestamp=ISSUED_AT,
                        region=region,
                    ),
                ),
                ingredients=(Ingredient("original capture", thumbnail_hash),),
            ).asset

            after = validate(backend, edited)
            low = validate(backend, edited, kind="watermark_only")
        spec = AttackSpec("ai_inpainted_edit", {"region": region.as_box()}, seed)
        variant = self._result(
            spec, before, low, context_displayed(low, region, thumbnail_hash)
        )
        return self._result(
            spec,
            before,
            after,
            context_displayed(after, region, thumbnail_hash),
            variants=(("watermark_only", variant),),
        )


class AiFakedAsAuthentic(Component):
    """An AI generated image is screenshot, its watermark removed, and
    re-signed with a stolen camera certificate claiming a capture

    Mitigated once the stolen certificate is revoked; the
    ``pre_revocation`` variant shows the forgery validating before.

    :param context: attack context, the stolen ``signing_key`` and
                    ``certificate_id`` by default
    """

    _name = "mediaseal.scenario.ai.faked.as.authentic"
    _inherit = "mediaseal.scenario"
    _scenario_name = "scenario-2"

    def run(self, seed=0, context=None):
        with self._world(
            seed,
            ("ai-generator", "Image generator", "cloud_high"),
            ("stolen-camera", "Camera maker", "device_secure"),
        ) as (backend, keys):
            if context is None:
                context = {
                    "signing_key": keys["stolen-camera"],
                    "certificate_id": "stolen-camera",
                }
            generated = self._publish(
                backend,
                MediaAsset(scene_image(seed)),
                keys["ai-generator"],
                "ai-generator",
                seed,
                assertions=("ai_generated",),
                actions=(Action("ai_generated", tool="image generator", timestamp=ISSUED_AT),),
            ).asset
            before = validate(backend, generated)

            stripped = self._attack(
                backend, screenshot(generated), AttackSpec("remove_watermark", seed=seed)
            )
            spec = AttackSpec(
                "resign_with_cert",
                {
                    "assertions": ("camera_captured",),
                    "issued_at": ISSUED_AT,
                    "security_level": "device_secure",
                    "signer_name": "Camera maker",
                },
                seed,
            )
            forged = self._attack(backend, stripped, spec, **context)
            trusted = validate(backend, forged)
            backend.revoke_certificate(context["certificate_id"], REVOKED_AT)
            after = validate(backend, forged)
        variant = self._result(spec, before, trusted, forgery_refused(trusted))
        return self._result(
            spec,
            before,
            after,
            forgery_refused(after),
            variants=(("pre_revocation", variant),),
        )


class ManipulatedMetadata(Component):
    """The capture time of a signed asset is changed in its insecure
    metadata

    High confidence validation never reads the insecure metadata. A
    validation site echoing it shows the forged time (``echo_metadata``
    variant).
    """

    _name = "mediaseal.scenario.manipulated.metadata"
    _inherit = "mediaseal.scenario"
    _scenario_name = "scenario-3"

    def run(self, seed=0, key="capture_time", value="2020-01-01T00:00:00Z"):
        with self._world(seed, ("camera", "Camera maker", "device_secure")) as (
            backend,
            keys,
        ):
            asset = MediaAsset(
                scene_image(seed),
                insecure_meta=InsecureMetadata(
                    {"capture_time": "2023-11-14T22:13:20Z", "device_model": "MS-1"}
                ),
            )
            asset = self._publish(
                backend,
                asset,
                keys["camera"],
                "camera",
                seed,
                assertions=("camera_captured",),
                actions=(Action("created", tool="camera", timestamp=ISSUED_AT),),
            ).asset
            spec = AttackSpec("tamper_insecure_metadata", {"key": key, "value": value}, seed)
            tampered = self._attack(backend, asset, spec)
            before = validate(backend, asset)
            after = validate(backend, tampered)
            echo_before = validate(backend, asset, kind="watermark_only", echo_metadata=True)
            echo_after = validate(backend, tampered, kind="watermark_only", echo_metadata=True)
        variant = self._result(
            spec, echo_before, echo_after, metadata_ignored(echo_before, echo_after, value)
        )
        return self._result(
            spec,
            before,
            after,
            metadata_ignored(before, after, value),
            variants=(("echo_metadata", variant),),
        )


def run_scenario(work, name, seed=0, **params):
    """:raises UnknownAttack: no scenario of this name"""
    try:
        scenario = work.component(
            usage="scenario", model_name="scenario.result", scenario_name=name
        )
    except NoComponentError as exc:
        raise UnknownAttack("unknown scenario %r" % name) from exc
    return scenario.run(seed=seed, **params)


def run_scenarios(work, seed=0):
    """Results of all the scenarios, in order"""
    return [run_scenario(work, name, seed) for name in SCENARIO_NAMES]
