# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)


class MediaSealException(Exception):
    """Base Exception for the media integrity toolkit"""


# Domain errors, the input is refused


class ValidationError(MediaSealException):
    """Input refused by a domain rule"""


class MalformedContainer(ValidationError):
    """The bytes are not a MIAC container"""


class InvariantViolation(ValidationError):
    """A value breaks an invariant of its type"""


class BadTransformParams(ValidationError):
    """Parameters of a transformation are out of range"""


class KeyMismatch(ValidationError):
    """The signing key does not belong to the certificate"""


class HashMismatch(ValidationError):
    """The manifest content hash disagrees with the pixels"""


class MalformedManifestSegment(ValidationError):
    """The C2PM payload cannot be decoded"""


class UnknownCertificate(ValidationError):
    """The certificate id is not in the trust list"""


class MalformedTrustList(ValidationError):
    """The trust list bytes cannot be decoded"""


class ImageTooSmall(ValidationError):
    """The image is too small for the operation"""


class BadKey(ValidationError):
    """The watermark key is unusable"""


class AlgorithmMismatch(ValidationError):
    """Fingerprints of different algorithms are compared"""


class DuplicateWatermarkId(ValidationError):
    """The watermark id is already bound to another content hash"""


class MissingContext(ValidationError):
    """An attack needs a key or a certificate that was not supplied"""


class UnknownAttack(ValidationError):
    """No attack with this name"""


class BudgetExhausted(MediaSealException):
    """A search ran out of iterations

    The best effort result is kept in :attr:`result`.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class MappingError(MediaSealException):
    """An error occurred during a mapping transformation."""


# I/O errors


class RegistryError(MediaSealException):
    """The registry could not be read or written"""


class StoreCorrupted(RegistryError):
    """The registry log cannot be replayed"""


class NetworkError(RegistryError):
    """A remote registry could not be reached"""


class RateLimited(RegistryError):
    """A rate limited endpoint refused the request"""
