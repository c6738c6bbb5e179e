# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Attacks
=======

The attack catalog. One ``media.attack`` component per attack, found by its
``attack_name``::

    with backend.work_on("media.asset") as work:
        attacked = run_attack(work, asset, AttackSpec("strip_manifest"))

An attack returns a new asset and never modifies the given one. The keys
and certificates an attack assumes (a stolen signing key, a source asset)
are given as keyword context.

"""

import logging
from dataclasses import replace

from component.core import AbstractComponent, Component
from component.exception import NoComponentError

from ..exception import BudgetExhausted, MissingContext, UnknownAttack
from ..models import fingerprint as fingerprint_model
from ..models.container import PixelImage
from ..models.fingerprint import DEFAULT_TAU
from ..models.manifest import (
    Manifest,
    embed_manifest,
    extract_manifest,
    hard_hash,
    sign_manifest,
)
from ..models.transformation import Transformation, apply_transformation
from ..models.watermark import apply_perceptible_mark, forge_watermark
from ..registry.store import FaultInjection

_logger = logging.getLogger(__name__)


def run_attack(work, asset, spec, **context):
    """Apply the attack described by ``spec`` to ``asset``

    :raises UnknownAttack: no attack of this name in the catalog
    """
    try:
        attack = work.component(
            usage="media.attack", model_name="media.asset", attack_name=spec.name
        )
    except NoComponentError as exc:
        raise UnknownAttack("unknown attack %r" % spec.name) from exc
    _logger.debug("running attack %s (seed %d)", spec.name, spec.seed)
    return attack.run(asset, spec, **context)


def attack_names(work):
    """Names of the attacks of the catalog, sorted"""
    classes = work.components_registry.lookup(
        work.collection_name, usage="media.attack", model_name="media.asset"
    )
    return sorted(cls._attack_name for cls in classes)


class Attack(AbstractComponent):
    _name = "mediaseal.attack"
    _inherit = "base.mediaseal"
    _usage = "media.attack"
    _apply_on = "media.asset"

    _attack_name = None

    @classmethod
    def _component_match(cls, work, usage=None, model_name=None, **kw):
        return kw.get("attack_name") == cls._attack_name

    def run(self, asset, spec, **context):
        raise NotImplementedError

    @staticmethod
    def _require(context, name, attack):
        value = context.get(name)
        if value is None:
            raise MissingContext("%s needs a %s" % (attack, name))
        return value

    def _sign(self, asset, manifest, context):
        """Sign ``manifest`` with the key of the context and embed it"""
        signing_key = self._require(context, "signing_key", self._attack_name)
        certificate_id = self._require(context, "certificate_id", self._attack_name)
        signed = sign_manifest(manifest, signing_key, certificate_id)
        return embed_manifest(asset, signed)


class StripManifest(Component):
    _name = "mediaseal.attack.strip.manifest"
    _inherit = "mediaseal.attack"
    _attack_name = "strip_manifest"

    def run(self, asset, spec, **context):
        return asset.without_manifest()


class ResignWithCert(Component):
    """Injection or manipulation of content then re-signing

    Parameters: ``signer_name``, ``assertions`` (list), ``issued_at``,
    ``security_level``. Context: ``signing_key``, ``certificate_id``.
    """

    _name = "mediaseal.attack.resign"
    _inherit = "mediaseal.attack"
    _attack_name = "resign_with_cert"

    def run(self, asset, spec, **context):
        manifest = Manifest(
            signer_name=spec.get("signer_name", "attacker"),
            content_hash=hard_hash(asset.image),
            issued_at=int(spec.get("issued_at", 1)),
            assertions=tuple(spec.get("assertions", ())),
            security_level=spec.get("security_level", "cloud_high"),
        )
        return self._sign(asset.without_manifest(), manifest, context)


class RetroactiveFalseAssertion(Component):
    """Re-sign the manifest of the asset with an extra assertion"""

    _name = "mediaseal.attack.false.assertion"
    _inherit = "mediaseal.attack"
    _attack_name = "retroactive_false_assertion"

    def run(self, asset, spec, **context):
        signed = extract_manifest(asset)
        if signed is None:
            raise MissingContext("retroactive_false_assertion needs a signed asset")
        manifest = replace(
            signed.manifest,
            assertions=signed.manifest.assertions + (spec.get("assertion", "camera_captured"),),
        )
        return self._sign(asset, manifest, context)


class ForgePerceptibleMark(Component):
    _name = "mediaseal.attack.forge.perceptible.mark"
    _inherit = "mediaseal.attack"
    _attack_name = "forge_perceptible_mark"

    def run(self, asset, spec, **context):
        image = apply_perceptible_mark(asset.image, spec.get("text", "AI"))
        return asset.with_image(image)


class CopyPasteRegion(Component):
    """Transplant a region of the ``source`` asset into the asset

    Parameters: ``box`` (left, top, right, bottom) in the source, ``at``
    (left, top) in the target, (0, 0) by default. The manifest of the target
    is kept, it no longer matches the pixels.
    """

    _name = "mediaseal.attack.copy.paste.region"
    _inherit = "mediaseal.attack"
    _attack_name = "copy_paste_region"

    def run(self, asset, spec, **context):
        source = self._require(context, "source", self._attack_name)
        left, top, right, bottom = spec.get("box", (0, 0, 8, 8))
        at_left, at_top = spec.get("at", (0, 0))
        patch = source.image.to_array()[top:bottom, left:right]
        array = asset.image.to_array().copy()
        height = min(patch.shape[0], array.shape[0] - at_top)
        width = min(patch.shape[1], array.shape[1] - at_left)
        if height <= 0 or width <= 0 or patch.shape[2] != array.shape[2]:
            raise MissingContext("the source region does not fit in the asset")
        array[at_top : at_top + height, at_left : at_left + width] = patch[:height, :width]
        return asset.with_image(PixelImage.from_array(array))


class TamperInsecureMetadata(Component):
    """Change the value of an existing insecure metadata key

    A key the asset does not have is left alone.
    """

    _name = "mediaseal.attack.tamper.metadata"
    _inherit = "mediaseal.attack"
    _attack_name = "tamper_insecure_metadata"

    def run(self, asset, spec, **context):
        key = spec.get("key", "capture_time")
        if asset.insecure_meta.get(key) is None:
            _logger.debug("no insecure metadata %r to tamper with", key)
            return asset
        meta = asset.insecure_meta.with_entry(key, str(spec.get("value", "")))
        return replace(asset, insecure_meta=meta)


class RemoveWatermark(Component):
    """Noise then rescale recipe

    Parameters: ``sigma`` (default 32), ``factor`` (default 1, no rescale).
    """

    _name = "mediaseal.attack.remove.watermark"
    _inherit = "mediaseal.attack"
    _attack_name = "remove_watermark"

    def run(self, asset, spec, **context):
        attacked = apply_transformation(
            asset, Transformation.gaussian_noise(spec.get("sigma", 32.0), seed=spec.seed)
        )
        factor = spec.get("factor", 1.0)
        if factor != 1.0:
            attacked = apply_transformation(attacked, Transformation.rescale(factor))
        return attacked


class ForgeWatermark(Component):
    """Copy the watermark of the ``source`` asset into the asset

    The attacker reads the mark with ``watermark_key`` (context), the key of
    the backend by default.
    """

    _name = "mediaseal.attack.forge.watermark"
    _inherit = "mediaseal.attack"
    _attack_name = "forge_watermark"

    def run(self, asset, spec, **context):
        source = self._require(context, "source", self._attack_name)
        key = context.get("watermark_key") or self.backend_record.watermark_key
        if key is None:
            raise MissingContext("forge_watermark needs a watermark_key")
        return asset.with_image(forge_watermark(source.image, asset.image, key))


class PerturbFingerprint(Component):
    """Move the block_mean fingerprint more than ``tau`` bits away

    Parameters: ``tau`` (backend's by default), ``budget``.
    """

    _name = "mediaseal.attack.perturb.fingerprint"
    _inherit = "mediaseal.attack"
    _attack_name = "perturb_fingerprint"

    def run(self, asset, spec, **context):
        tau = spec.get("tau", self.backend_record.tau or DEFAULT_TAU)
        target = fingerprint_model.perturbation_target(asset.image, tau)
        try:
            result = fingerprint_model.craft_collision(
                target, asset.image, spec.get("budget", 10000)
            )
        except BudgetExhausted as exc:
            _logger.warning("fingerprint perturbation incomplete: %s", exc)
            result = exc.result
        return asset.with_image(result.image)


class CraftHashCollision(Component):
    """Make the asset collide with the fingerprint of ``source`` (context)

    Parameters: ``algorithm`` (backend's by default), ``budget``.
    :raises BudgetExhausted: the best effort asset is in ``result``
    """

    _name = "mediaseal.attack.hash.collision"
    _inherit = "mediaseal.attack"
    _attack_name = "craft_hash_collision"

    def run(self, asset, spec, **context):
        source = self._require(context, "source", self._attack_name)
        algorithm = spec.get("algorithm", self.backend_record.fingerprint_algorithm)
        target = fingerprint_model.compute_fingerprint(source.image, algorithm)
        try:
            result = fingerprint_model.craft_collision(
                target, asset.image, spec.get("budget", 10000)
            )
        except BudgetExhausted as exc:
            raise BudgetExhausted(str(exc), result=asset.with_image(exc.result.image)) from exc
        return asset.with_image(result.image)


class RegistryDos(Component):
    """Denial of service on the registry, modeled by its fault modes

    Parameters: ``manifest_lookup``, ``watermark_lookup``,
    ``fingerprint_lookup`` (``no_access`` for the ones not given).
    """

    _name = "mediaseal.attack.registry.dos"
    _inherit = "mediaseal.attack"
    _attack_name = "registry_dos"

    def run(self, asset, spec, **context):
        faults = FaultInjection(
            manifest_lookup=spec.get("manifest_lookup", "no_access"),
            watermark_lookup=spec.get("watermark_lookup", "no_access"),
            fingerprint_lookup=spec.get("fingerprint_lookup", "no_access"),
        )
        self.adapter_for("registry.entry").set_faults(faults)
        return asset
