# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Transformations
===============

Benign edits and removal attacks applied to the pixels of an asset. Pixel
transformations keep the manifest segment untouched so that a hash mismatch
can be observed afterwards. Stochastic kinds take an explicit seed.

"""

import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from ..exception import BadTransformParams
from . import blocks
from .container import InsecureMetadata, MediaAsset, PixelImage

_logger = logging.getLogger(__name__)

KINDS = (
    "gaussian_noise",
    "rescale",
    "crop",
    "quantize",
    "pixel_flip",
    "strip_metadata",
    "identity",
)

_SEED_MASK = (1 << 64) - 1


def make_rng(seed):
    return np.random.default_rng(int(seed) & _SEED_MASK)


@dataclass(frozen=True)
class Transformation:
    kind: str = "identity"
    sigma: float = 0.0
    factor: float = 1.0
    box: tuple = ()
    step: int = 1
    count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadTransformParams("unknown transformation %r" % (self.kind,))

    @classmethod
    def gaussian_noise(cls, sigma, seed=0):
        return cls("gaussian_noise", sigma=float(sigma), seed=seed)

    @classmethod
    def rescale(cls, factor):
        return cls("rescale", factor=float(factor))

    @classmethod
    def crop(cls, left, top, right, bottom):
        return cls("crop", box=(int(left), int(top), int(right), int(bottom)))

    @classmethod
    def quantize(cls, step):
        return cls("quantize", step=step)

    @classmethod
    def pixel_flip(cls, count, seed=0):
        return cls("pixel_flip", count=count, seed=seed)

    @classmethod
    def strip_metadata(cls):
        return cls("strip_metadata")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def from_text(cls, text, seed=0):
        """Parse ``kind[:value[,value...]]``, e.g. ``crop:0,0,60,60``"""
        kind, __, args = text.partition(":")
        values = [value for value in args.split(",") if value]
        try:
            if kind == "gaussian_noise":
                return cls.gaussian_noise(float(values[0]), seed=seed)
            if kind == "rescale":
                return cls.rescale(float(values[0]))
            if kind == "crop":
                return cls.crop(*(int(value) for value in values))
            if kind == "quantize":
                return cls.quantize(int(values[0]))
            if kind == "pixel_flip":
                return cls.pixel_flip(int(values[0]) if values else 1, seed=seed)
        except (IndexError, TypeError, ValueError) as exc:
            raise BadTransformParams("bad parameters for %r" % (text,)) from exc
        if values:
            raise BadTransformParams("%s takes no parameters" % kind)
        return cls(kind)


def resize(array, width, height):
    """Bilinear resampling of a (h, w, c) array with pixel-center alignment"""
    src_height, src_width = array.shape[:2]
    rows = (np.arange(height) + 0.5) * (src_height / height) - 0.5
    cols = (np.arange(width) + 0.5) * (src_width / width) - 0.5
    grid = np.meshgrid(rows, cols, indexing="ij")
    channels = [
        ndimage.map_coordinates(
            array[:, :, channel].astype(np.float64), grid, order=1, mode="nearest"
        )
        for channel in range(array.shape[2])
    ]
    return np.stack(channels, axis=2)


def _gaussian_noise(image, t):
    if not t.sigma >= 0:
        raise BadTransformParams("sigma must be >= 0")
    array = image.to_array().astype(np.float64)
    array += make_rng(t.seed).normal(0.0, t.sigma, array.shape)
    return PixelImage.from_array(array)


def _rescale(image, t):
    if not t.factor > 0:
        raise BadTransformParams("rescale factor must be > 0")
    width = int(round(image.width * t.factor))
    height = int(round(image.height * t.factor))
    if width < 1 or height < 1:
        raise BadTransformParams("rescaled image would be empty")
    if (width, height) == (image.width, image.height):
        return image
    return PixelImage.from_array(resize(image.to_array(), width, height))


def _crop(image, t):
    if len(t.box) != 4:
        raise BadTransformParams("crop needs left, top, right, bottom")
    left, top, right, bottom = t.box
    if not (0 <= left < right <= image.width and 0 <= top < bottom <= image.height):
        raise BadTransformParams(
            "crop box %s outside %sx%s" % (t.box, image.width, image.height)
        )
    return PixelImage.from_array(image.to_array()[top:bottom, left:right])


def _quantize(image, t):
    if int(t.step) != t.step or t.step < 1:
        raise BadTransformParams("quantize step must be an integer >= 1")
    array = image.to_array().astype(np.float64)
    for channel in range(image.channels):
        plane = array[:, :, channel]
        if not all(blocks.block_grid(plane)):
            break
        coefficients = blocks.forward(plane)
        coefficients = np.round(coefficients / t.step) * t.step
        array[:, :, channel] = blocks.inverse(coefficients, plane)
    return PixelImage.from_array(array)


def _pixel_flip(image, t):
    if int(t.count) != t.count or not 1 <= t.count <= image.sample_count:
        raise BadTransformParams(
            "pixel_flip count must be in [1, %d]" % image.sample_count
        )
    samples = np.frombuffer(image.samples, dtype=np.uint8).copy()
    positions = make_rng(t.seed).choice(image.sample_count, size=t.count, replace=False)
    samples[positions] ^= 1
    return replace(image, samples=samples.tobytes())


_PIXEL_TRANSFORMS = {
    "gaussian_noise": _gaussian_noise,
    "rescale": _rescale,
    "crop": _crop,
    "quantize": _quantize,
    "pixel_flip": _pixel_flip,
}


def apply_transformation(asset, t):
    """Return a new asset, ``asset`` is never modified

    :raises BadTransformParams: parameters out of range for this asset
    """
    if t.kind == "identity":
        return asset
    if t.kind == "strip_metadata":
        return replace(asset, manifest_segment=None, insecure_meta=InsecureMetadata())
    _logger.debug("applying %s to a %dx%d image", t.kind, asset.image.width, asset.image.height)
    return asset.with_image(_PIXEL_TRANSFORMS[t.kind](asset.image, t))


def screenshot(asset):
    """Pixels only: manifest, insecure metadata and unknown segments are lost"""
    return MediaAsset(image=asset.image)
