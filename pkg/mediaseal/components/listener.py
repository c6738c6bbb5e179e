# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Listeners
=========

Listeners are Components notified when events happen.
Documentation in :mod:`component_event.components.event`

The audit listener logs the state changes of the registry and of the trust
list, and the validated assets. A backend created with ``audit=False``
silences it.

"""

import logging

from component.core import AbstractComponent, Component
from component_event import skip_if

_logger = logging.getLogger(__name__)


def _audit_disabled(listener, *args, **kwargs):
    return not getattr(listener.work.collection, "audit", True)


class MediaSealListener(AbstractComponent):
    """Base listener of the toolkit"""

    _name = "base.mediaseal.listener"
    _inherit = ["base.mediaseal", "base.event.listener"]


class AuditListener(Component):
    _name = "mediaseal.audit.listener"
    _inherit = "base.mediaseal.listener"

    @skip_if(_audit_disabled)
    def on_entry_stored(self, entry):
        _logger.info(
            "audit: entry %s stored, signed by %s",
            entry.content_hash.hex(),
            entry.signed_manifest.certificate_id,
        )

    @skip_if(_audit_disabled)
    def on_certificate_revoked(self, record, trust):
        _logger.info(
            "audit: certificate %s revoked at %s, trust list version %d",
            record.certificate_id,
            record.revoked_at,
            trust.version,
        )

    @skip_if(_audit_disabled)
    def on_faults_changed(self, faults):
        _logger.info("audit: registry fault modes %s", faults.to_dict())

    @skip_if(_audit_disabled)
    def on_asset_validated(self, report):
        _logger.info(
            "audit: asset validated, %s / %s (row %s)",
            report.result,
            report.confidence,
            report.row,
        )
