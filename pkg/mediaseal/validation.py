# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""Validation entry point"""

from .components.validator import SEQUENTIAL
from .models.outcome import SHORT_CIRCUIT


def validate(backend, asset, mode=SHORT_CIRCUIT, kind=SEQUENTIAL, **options):
    """Validate ``asset`` with the trust list, key and registry of ``backend``

    :param mode: ``short_circuit`` or ``full``
    :param kind: ``sequential`` or ``watermark_only``
    :return: a :class:`~mediaseal.models.outcome.ValidationReport`
    """
    with backend.work_on("media.asset") as work:
        validator = work.component(usage="validator", kind=kind)
        return validator.validate(asset, mode, **options)
