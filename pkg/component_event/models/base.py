# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Event Source
============

Mixin giving an :meth:`EventSource._event` method to any object.


"""

from component.core import DEFAULT_REGISTRY_NAME, _component_registries

from ..components.event import CollectedEvents
from ..core import EventWorkContext


class EventSource:
    """Mixin for the objects notifying events

    The ``_name`` of the class is the model name given to the listeners
    lookup, so a listener with an ``_apply_on`` only hears the events of
    this kind of object.

    """

    _name = None

    #: registry used when none is given to :meth:`_event`
    components_registry = None
    registry_name = DEFAULT_REGISTRY_NAME

    def _event(self, name, collection=None, components_registry=None):
        """Collect events for notifications

        Usage::

            def revoke(self, certificate_id, at):
                ...
                self._event('on_certificate_revoked').notify(record, trust)

        With this line, every listener having a ``on_certificate_revoked``
        method will be called with the record and the list.

        See: :mod:`..components.event`

        :param name: name of the event, start with 'on_'
        :param collection: optional collection to filter on, only
                           listeners with similar ``_collection`` will be
                           notified
        :param components_registry: component registry for lookups,
                                    mainly used for tests
        :type components_registry: :class:`component.core.ComponentRegistry`

        """
        comp_registry = (
            components_registry
            or self.components_registry
            or getattr(collection, "components_registry", None)
            or _component_registries.get(self.registry_name)
        )
        if not comp_registry or not comp_registry.ready:
            # events notified while the components are being built are
            # dropped
            return CollectedEvents([])
        if not comp_registry.get("base.event.collecter"):
            return CollectedEvents([])

        work = EventWorkContext(
            collection=collection,
            model_name=self._name,
            components_registry=comp_registry,
        )
        collecter = comp_registry["base.event.collecter"](work)
        return collecter.collect_events(name)
