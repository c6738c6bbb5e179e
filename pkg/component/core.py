# Copyright 2017 Camptocamp SA
# Copyright 2017 Odoo
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Core
====

Components are plain classes assembled at load time from their ``_inherit``
chain:

* :class:`AbstractComponent` and :class:`Component` are the bases of every
  checker, mapper, adapter or listener of the toolkit;
* a :class:`ComponentRegistry` keeps the built classes by ``_name``;
* a :class:`WorkContext` finds them back for a collection (the backend
  holding the configuration) and a kind of record (``media.asset``,
  ``registry.entry``).

"""

import logging
import operator
from collections import defaultdict

from .exception import NoComponentError, RegistryNotReadyError, SeveralComponentError

_logger = logging.getLogger(__name__)

try:
    from cachetools import LRUCache, cachedmethod
except ImportError:
    _logger.debug("Cannot import 'cachetools'.")


# Lookup results kept by a registry.
DEFAULT_CACHE_SIZE = 512

DEFAULT_REGISTRY_NAME = "default"


def _get_addon_name(full_name):
    """Top-level package of a dotted module path, components are grouped
    by it"""
    return full_name.split(".")[0]


class ComponentRegistry:
    """Built component classes by ``_name``, in load order

    ``ready`` is set once every addon is loaded; event sources stay silent
    before.
    """

    def __init__(self, cachesize=DEFAULT_CACHE_SIZE):
        self._cache = LRUCache(maxsize=cachesize)
        self._components = {}
        self._loaded_modules = set()
        self.ready = False

    def __getitem__(self, key):
        return self._components[key]

    def __setitem__(self, key, value):
        self._components[key] = value

    def __contains__(self, key):
        return key in self._components

    def get(self, key, default=None):
        return self._components.get(key, default)

    def load_components(self, module):
        if module in self._loaded_modules:
            return
        for component_class in MetaComponent._modules_components[module]:
            component_class._build_component(self)
        self._loaded_modules.add(module)
        _logger.debug("components of %s loaded", module)

    @cachedmethod(operator.attrgetter("_cache"))
    def lookup(self, collection_name=None, usage=None, model_name=None):
        """Concrete components for a collection, a usage and a model

        A component without ``_collection`` or ``_apply_on`` matches any
        collection or model. A criterion left to None is not filtered on.
        """
        found = []
        for component in self._components.values():
            if component._abstract:
                continue
            if collection_name is not None and component._collection not in (
                collection_name,
                None,
            ):
                continue
            if usage is not None and component._usage != usage:
                continue
            models = component.apply_on_models
            if model_name is not None and models is not None and model_name not in models:
                continue
            found.append(component)
        return found


# Filled by :class:`component.builder.ComponentBuilder`, keyed by registry
# name.
_component_registries = {}


class WorkContext:
    """What the components work with

    ``collection`` is the backend, its ``_name`` is matched against the
    ``_collection`` of the components. ``model_name`` is the kind of record
    looked up for. Extra keyword arguments become attributes and follow
    into the contexts opened with :meth:`work_on`::

        with backend.work_on('media.asset', attack_budget=40) as work:
            validator = work.component(usage='validator')
            entries = work.work_on('registry.entry')
            assert entries.attack_budget == 40

    Without ``components_registry``, the registry published under the
    collection's ``registry_name`` is used.
    """

    def __init__(
        self, model_name=None, collection=None, components_registry=None, **kwargs
    ):
        self.collection = collection
        self.model_name = model_name
        if components_registry is None:
            registry_name = getattr(collection, "registry_name", DEFAULT_REGISTRY_NAME)
            components_registry = _component_registries.get(registry_name)
            if components_registry is None:
                msg = (
                    "No component registry named %s. "
                    "Probably because the components have not been built yet."
                )
                _logger.error(msg, registry_name)
                raise RegistryNotReadyError(msg % registry_name)
        self.components_registry = components_registry
        self._propagate_kwargs = ["collection", "model_name", "components_registry"]
        for attr_name, value in kwargs.items():
            setattr(self, attr_name, value)
            self._propagate_kwargs.append(attr_name)

    @property
    def collection_name(self):
        return getattr(self.collection, "_name", None)

    def work_on(self, model_name=None, collection=None, **kwargs):
        """Same context for another model or collection"""
        values = {name: getattr(self, name) for name in self._propagate_kwargs}
        if collection is not None:
            values["collection"] = collection
        if model_name is not None:
            values["model_name"] = model_name
        values.update(kwargs)
        return self.__class__(**values)

    def _for_model(self, model_name):
        if model_name == self.model_name:
            return self
        return self.work_on(model_name)

    def component_by_name(self, name, model_name=None):
        """Instance of the component named ``name``

        :exc:`component.exception.NoComponentError` is raised when it does
        not exist or when its ``_collection`` or ``_apply_on`` exclude the
        current context; ``model_name`` switches to another model.
        """
        component_class = self.components_registry.get(name)
        if not component_class:
            raise NoComponentError("No component with name '%s' found." % name)
        work_model = model_name or self.model_name
        if (
            component_class._collection
            and self.collection_name != component_class._collection
        ):
            raise NoComponentError(
                "Component with name '%s' can't be used for collection '%s'."
                % (name, self.collection_name)
            )
        models = component_class.apply_on_models
        if models and work_model not in models:
            raise NoComponentError(
                "Component with name '%s' can't be used for model '%s'. "
                "Hint: component_by_name('%s', model_name=...) with one of %r"
                % (name, work_model, name, models)
            )
        return component_class(self._for_model(work_model))

    def component(self, usage=None, model_name=None, **kw):
        """Instance of the one component for ``usage`` and the model

        Candidates come from :meth:`ComponentRegistry.lookup`, then
        :meth:`AbstractComponent._component_match` sees the keyword
        arguments. Among several, one registered in the current collection
        wins over a shared one, then one applying on the model wins over a
        generic one.

        :exc:`component.exception.NoComponentError` is raised when none
        matches, :exc:`component.exception.SeveralComponentError` when the
        tie remains.
        """
        model_name = model_name or self.model_name
        candidates = [
            cls
            for cls in self.components_registry.lookup(
                self.collection_name, usage=usage, model_name=model_name
            )
            if cls._component_match(self, usage=usage, model_name=model_name, **kw)
        ]
        if not candidates:
            raise NoComponentError(
                "No component found for collection '%s', "
                "usage '%s', model_name '%s'."
                % (self.collection_name, usage, model_name)
            )
        if len(candidates) > 1:
            candidates = [c for c in candidates if c._collection == self.collection_name]
        if len(candidates) > 1:
            candidates = [
                c
                for c in candidates
                if c.apply_on_models and model_name in c.apply_on_models
            ]
        if len(candidates) != 1:
            raise SeveralComponentError(
                "Several components found for collection '%s', "
                "usage '%s', model_name '%s'. Found: %r"
                % (self.collection_name, usage or "", model_name or "", candidates)
            )
        return candidates[0](self._for_model(model_name))

    def __repr__(self):
        return "WorkContext({}, {!r})".format(self.model_name, self.collection)


class MetaComponent(type):
    """Records every component class under its addon for the builder"""

    _modules_components = defaultdict(list)

    def __init__(cls, name, bases, attrs):
        if not cls._register:
            cls._register = True
            super().__init__(name, bases, attrs)
            return

        # components of test modules are built by the tests themselves
        if "tests" in cls.__module__.split("."):
            return

        if not hasattr(cls, "_module"):
            cls._module = _get_addon_name(cls.__module__)

        cls._modules_components[cls._module].append(cls)

    @property
    def apply_on_models(cls):
        # None means all models
        if cls._apply_on is None:
            return None
        if isinstance(cls._apply_on, str):
            return [cls._apply_on]
        return cls._apply_on


class AbstractComponent(metaclass=MetaComponent):
    """Base of the components, never returned by a lookup

    A class with a new ``_name`` declares a component; a class with an
    ``_inherit`` naming an existing component and no other ``_name``
    extends it in place::

        class C2paChecker(Component):
            _inherit = 'mediaseal.c2pa.checker'

            def check(self, asset):
                outcome = super().check(asset)
                ...

    With both, a new component gets the behavior of its parents. Every
    component inherits from ``'base'``.

    Lookups use ``_collection`` (``mediaseal.backend``; None for a shared
    component), ``_apply_on`` (a record name or a list of them; None for
    all) and ``_usage`` (``validator``, ``binder``, ``export.mapper``...)::

        >>> with backend.work_on('media.asset') as work:
        ...     work.component(usage='watermark.checker').check(asset)

    """

    _register = False
    _abstract = True

    _name = None

    #: name or list of names of the components to inherit from
    _inherit = None

    _collection = None

    #: None means any record, can be a list ['media.asset', ...]
    _apply_on = None

    _usage = None

    def __init__(self, work_context):
        super().__init__()
        self.work = work_context

    @classmethod
    def _component_match(cls, work, usage=None, model_name=None, **kw):
        """Last filter of a lookup, not cached

        Receives the keyword arguments given to :meth:`component`, so one
        usage can be served by several components (one per scenario, one
        per adapter kind).
        """
        return True

    @property
    def collection(self):
        return self.work.collection

    @property
    def model_name(self):
        return self.work.model_name

    def component_by_name(self, name, model_name=None):
        return self.work.component_by_name(name, model_name=model_name)

    def component(self, usage=None, model_name=None, **kw):
        return self.work.component(usage=usage, model_name=model_name, **kw)

    def __repr__(self):
        return "Component(%s)" % self._name

    @classmethod
    def _build_component(cls, registry):
        """Build the class used for ``_name`` and store it in ``registry``

        The ``__bases__`` of the built class follow the ``_inherit`` chain,
        an extension of a component is then seen by all its children::

            class A1(Component):                    Component
                _name = 'a'                           / | \\
                                                     A3 A2 A1
            class A2(Component):                      \\ | /
                _inherit = 'a'                    ComponentClass

            class A3(Component):
                _inherit = 'a'

        """
        parents = cls._inherit
        if isinstance(parents, str):
            parents = [parents]
        elif parents is None:
            parents = []

        if cls._name in registry and not parents:
            raise TypeError(
                "Component %r (in class %r) already exists. "
                "Consider using _inherit instead of _name "
                "or using a different _name." % (cls._name, cls)
            )

        name = cls._name or (len(parents) == 1 and parents[0])
        if not name:
            raise TypeError("Component %r must have a _name" % cls)

        if name != "base":
            parents = list(parents) + ["base"]

        if name in parents:
            if name not in registry:
                raise TypeError("Component %r does not exist in registry." % name)
            ComponentClass = registry[name]
            if ComponentClass._abstract and not cls._abstract:
                raise TypeError(
                    "%s transforms the abstract component %r into a "
                    "non-abstract component. Inherit from AbstractComponent "
                    "or set a different '_name'." % (cls, name)
                )
            child = ComponentClass
        else:
            ComponentClass = type(
                name,
                (AbstractComponent,),
                {"_name": name, "_register": False, "_inherit_children": {}},
            )
            child = cls

        # ordered set where a re-added base moves to the end
        bases = {cls: None}
        for parent in parents:
            if parent not in registry:
                raise TypeError(
                    "Component %r inherits from non-existing component %r."
                    % (name, parent)
                )
            parent_class = registry[parent]
            if parent == name:
                for base in parent_class.__bases__:
                    bases.pop(base, None)
                    bases[base] = None
                continue
            if child._abstract and not parent_class._abstract:
                raise TypeError(
                    "In %s, the abstract Component %r cannot inherit "
                    "from the non-abstract Component %r."
                    % (cls, child._name, parent_class._name)
                )
            bases.pop(parent_class, None)
            bases[parent_class] = None
            parent_class._inherit_children[name] = None
        ComponentClass.__bases__ = tuple(bases)

        ComponentClass._complete_component_build()

        registry[name] = ComponentClass
        return ComponentClass

    @classmethod
    def _complete_component_build(cls):
        """Hook run once the class has its bases

        The mappers collect their mapping methods here, the listeners their
        events.
        """


class Component(AbstractComponent):
    """Concrete component, found by the lookups"""

    _register = False
    _abstract = False
