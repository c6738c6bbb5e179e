# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Base Component
==============

Every component of the toolkit inherits from ``base.mediaseal``, which gives
access to the backend and shortcuts to the other components.

Components are organized according to their usage. Alongside with the
collection (the backend) and the model name, the usage is used to find the
needed component for a task.

:py:class:`~mediaseal.components.backend_adapter.RegistryAdapter`
  The ``backend.adapter`` of ``registry.entry`` talks with the registry,
  a local log store or the HTTP service. The one of ``trust.list`` loads
  and pulls trust lists.

:py:class:`~mediaseal.components.binder.WatermarkBinder`
  The ``binder`` resolves a watermark id to a registry entry and binds a
  new one.

:py:class:`~mediaseal.components.mapper.Mapper`
  The ``export.mapper`` and ``import.mapper`` transform a record into its
  canonical JSON values and conversely.

:py:class:`~mediaseal.components.checker.Checker`
  The ``c2pa.checker``, ``watermark.checker`` and ``fingerprint.checker``
  are the three validation stages.

:py:class:`~mediaseal.components.validator.Validator`
  The ``validator`` runs the stages in sequence and decides the result.

:py:class:`~mediaseal.components.attack.Attack`
  The ``media.attack`` components are the attack catalog, the ``scenario``
  components chain attacks and validations.

"""

from component.core import AbstractComponent


class BaseMediaSealComponent(AbstractComponent):
    """Base component for the toolkit

    Is inherited by every component of the toolkit (Binder, Mapper,
    Checker, ...) and adds a few methods of common usage.

    """

    _name = "base.mediaseal"

    @property
    def backend_record(self):
        """Backend we are working with"""
        return self.work.collection

    def binder_for(self, model=None):
        """Shortcut to get Binder for a model

        Equivalent to: ``self.component(usage='binder', model_name='xxx')``

        """
        return self.component(usage="binder", model_name=model)

    def adapter_for(self, model=None):
        """Shortcut to get the backend adapter of a model"""
        return self.component(usage="backend.adapter", model_name=model)
