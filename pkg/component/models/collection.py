# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Collection
==========

Base class shared by all the Collections.
A collection is the object holding the configuration a work is done with,
a backend. The `_name` given to the Collection will be the name
to use in the `_collection` of the Components usable for the Backend.

"""

from contextlib import contextmanager

from ..core import WorkContext


class Collection:
    """The object on which components are subscribed

    Example::

        class MediaSealBackend(Collection):
            _name = 'mediaseal.backend'  # name of the collection


        class WatermarkChecker(Component):
            _name = 'mediaseal.watermark.checker'
            _apply_on = 'media.asset'
            _collection = 'mediaseal.backend'  # name of the collection
            _usage = 'watermark.checker'

    Use it::

        >>> backend = MediaSealBackend(...)
        >>> with backend.work_on('media.asset') as work:
        ...     checker = work.component(usage='watermark.checker')

    See also: :class:`component.core.WorkContext`

    """

    _name = "collection.base"

    #: name of the published component registry to use
    registry_name = "default"

    #: explicit registry, takes precedence over ``registry_name``
    components_registry = None

    @contextmanager
    def work_on(self, model_name, **kwargs):
        """Entry-point for the components, context manager

        Start a work using the components on the model.
        Any keyword argument will be assigned to the work context.

        Subclasses open the resources of a work session here and
        propagate them::

            @contextmanager
            def work_on(self, model_name, **kwargs):
                with open_store(self.data_dir) as store:
                    with super().work_on(model_name, store=store, **kwargs) as work:
                        yield work

        """
        if self.components_registry is not None:
            kwargs.setdefault("components_registry", self.components_registry)
        yield WorkContext(model_name=model_name, collection=self, **kwargs)
