# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Events Internals
================

Core classes for the events system.


"""


from component.core import WorkContext


class EventWorkContext(WorkContext):
    """Work context used by the Events internals

    Should not be used outside of the events internals.
    The work context to use generally is
    :class:`component.core.WorkContext` or your own subclass.

    Events are not necessarily attached to a collection: an event notified
    without collection reaches every listener. Such a work context must then
    be given its components registry explicitly.

    Without collection, the methods getting components cannot be used, but
    :meth:`work_on` switches back to a :class:`component.core.WorkContext`
    with a collection, which is what a listener does when it needs a
    component of a collection.

    """

    def __init__(
        self, model_name=None, collection=None, components_registry=None, **kwargs
    ):
        if collection is None and components_registry is None:
            raise ValueError("collection or components_registry is required")
        super().__init__(
            model_name=model_name,
            collection=collection,
            components_registry=components_registry,
            **kwargs
        )

    @property
    def collection(self):
        if self._collection is not None:
            return self._collection
        raise ValueError("No collection, it is optional for EventWorkContext")

    @collection.setter
    def collection(self, value):
        self._collection = value

    @property
    def collection_name(self):
        return getattr(self._collection, "_name", None)

    def work_on(self, model_name=None, collection=None, **kwargs):
        """Switch back to a normal WorkContext

        It means we are inside an event listener and we want to get a
        component, which needs a collection.
        """
        if self._collection is None and collection is None:
            raise ValueError("you must provide a collection to work with")
        values = {
            attr_name: getattr(self, attr_name)
            for attr_name in self._propagate_kwargs
            if attr_name != "collection"
        }
        values["collection"] = collection if collection is not None else self._collection
        if model_name is not None:
            values["model_name"] = model_name
        values.update(kwargs)
        return WorkContext(**values)

    def _switch(self, model_name):
        if self._collection is None:
            raise TypeError(
                "Can't be used on an EventWorkContext without collection. "
                "The collection must be known to find components.\n"
                "Hint: you can set the collection and get a component with:\n"
                ">>> work.work_on(collection=backend).component(usage=usage)"
            )
        return self.work_on(collection=self._collection, model_name=model_name)

    def component_by_name(self, name, model_name=None):
        return self._switch(model_name).component_by_name(name, model_name=model_name)

    def component(self, usage=None, model_name=None, **kw):
        return self._switch(model_name).component(
            usage=usage, model_name=model_name, **kw
        )

    def __repr__(self):
        return "EventWorkContext({!r}, {})".format(self._collection, self.model_name)
