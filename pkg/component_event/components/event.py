# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Events
======

The registry store and the backend notify what happens to them (an entry
durably written, faults changed, a certificate revoked); listener
components react to it.

A notifier inherits from :class:`..models.base.EventSource`::

    class RegistryStore(EventSource):
        _name = 'registry.entry'

        def store_entry(self, entry):
            ...
            self._event('on_entry_stored', collection=backend).notify(entry)

A listener inherits from ``'base.event.listener'`` and names its methods
after the events, restricted by ``_collection`` and ``_apply_on`` like any
component::

    class AuditListener(Component):
        _name = 'mediaseal.audit.listener'
        _inherit = 'base.event.listener'
        _apply_on = 'registry.entry'

        @skip_if(lambda self, entry: not self.collection.audit)
        def on_entry_stored(self, entry):
            _logger.info("%s stored", entry.content_hash.hex())

"""

import logging
import operator
from functools import wraps

from component.core import AbstractComponent, Component

_logger = logging.getLogger(__name__)

try:
    from cachetools import LRUCache, cachedmethod
except ImportError:
    _logger.debug("Cannot import 'cachetools'.")

__all__ = ["skip_if"]

# (collection, model, event name) keys kept by a collecter class
DEFAULT_EVENT_CACHE_SIZE = 512


def skip_if(cond):
    """Skip the listener when ``cond``, called with the listener's
    arguments, is true"""

    def skip_if_decorator(func):
        @wraps(func)
        def func_wrapper(*args, **kwargs):
            if cond(*args, **kwargs):
                return None
            return func(*args, **kwargs)

        return func_wrapper

    return skip_if_decorator


class CollectedEvents:
    """Bound listener methods of one event"""

    def __init__(self, events):
        self.events = events

    def notify(self, *args, **kwargs):
        for event in self.events:
            event(*args, **kwargs)


class EventCollecter(Component):
    """Finds the listeners of an event

    Works on a :class:`component_event.core.EventWorkContext`, the
    collection is optional. The listener classes found are cached on the
    built class, so a new registry build starts empty.
    """

    _name = "base.event.collecter"

    @classmethod
    def _complete_component_build(cls):
        super()._complete_component_build()
        cls._cache = LRUCache(maxsize=DEFAULT_EVENT_CACHE_SIZE)

    @cachedmethod(operator.attrgetter("_cache"))
    def _listener_classes(self, collection_name, model_name, name):
        return [
            cls
            for cls in self.work.components_registry.lookup(
                collection_name=collection_name,
                usage="event.listener",
                model_name=model_name,
            )
            if cls.has_event(name)
        ]

    def collect_events(self, name):
        if not name.startswith("on_"):
            raise ValueError("an event name always starts with 'on_'")
        classes = self._listener_classes(
            self.work.collection_name, self.work.model_name, name
        )
        return CollectedEvents([getattr(cls(self.work), name) for cls in classes])


class EventListener(AbstractComponent):
    """Base of the listeners, their events are the methods named ``on_*``"""

    _name = "base.event.listener"
    _usage = "event.listener"

    @classmethod
    def has_event(cls, name):
        return name in cls._events

    @classmethod
    def _complete_component_build(cls):
        super()._complete_component_build()
        if cls._abstract:
            cls._events = set()
        else:
            cls._events = {name for name in dir(cls) if name.startswith("on_")}
