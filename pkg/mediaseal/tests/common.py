# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import tempfile

import numpy as np

from component.tests.common import ComponentCase

from ..components.scenario import scene_image
from ..models import trust as trust_model
from ..models.backend import MediaSealBackend
from ..models.container import InsecureMetadata, MediaAsset, PixelImage
from ..models.watermark import WatermarkKey

ISSUED_AT = 1700000000


def random_image(seed, width=16, height=16, channels=3):
    rng = np.random.default_rng(seed)
    return PixelImage.from_array(
        rng.integers(0, 256, size=(height, width, channels), dtype=np.uint8)
    )


def photo_asset(seed=0, size=64, meta=None):
    """A synthetic photograph, smooth enough to carry a robust watermark"""
    return MediaAsset(scene_image(seed, size=size), InsecureMetadata(meta or {}))


class MediaSealComponentCase(ComponentCase):
    """Backend with a trusted camera, a registry directory and the components

    ``self.backend`` is built for every test, its registry lives in a
    temporary directory removed afterwards.
    """

    def setUp(self):
        super().setUp()
        self.camera_key, camera = trust_model.issue_certificate(
            "camera-1", "Camera Co", "device_secure", seed=1
        )
        self.editor_key, editor = trust_model.issue_certificate(
            "editor-1", "Editor Inc", "cloud_high", seed=2
        )
        trust = trust_model.add_certificate(trust_model.TrustList(), camera)
        self.trust = trust_model.add_certificate(trust, editor)
        self.watermark_key = WatermarkKey.generate(seed=3)
        self.data_dir = self.make_data_dir()
        self.backend = self.make_backend()

    def make_data_dir(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        return directory.name

    def make_backend(self, **kwargs):
        values = {
            "trust": self.trust,
            "watermark_key": self.watermark_key,
            "data_dir": self.data_dir,
            "components_registry": self._components_registry,
        }
        values.update(kwargs)
        return MediaSealBackend(**values)

    def publish(self, asset, key=None, certificate_id="camera-1", backend=None, **kwargs):
        """Sign ``asset`` with the camera by default, return the publication"""
        backend = backend or self.backend
        kwargs.setdefault("issued_at", ISSUED_AT)
        with backend.work_on("media.asset") as work:
            return work.component(usage="record.exporter").run(
                asset, key or self.camera_key, certificate_id, **kwargs
            )
