# Copyright 2019 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Components Builder
==================

Build a registry of components from a list of addons and their
dependencies.

"""

import ast
import importlib
import logging
from graphlib import CycleError, TopologicalSorter
from pathlib import Path

from .core import DEFAULT_CACHE_SIZE, ComponentRegistry, _component_registries
from .exception import AddonCycleError

_logger = logging.getLogger(__name__)

MANIFEST_NAME = "__manifest__.py"


def read_manifest(addon):
    """Return the manifest dict of an importable addon package"""
    package = importlib.import_module(addon)
    path = Path(package.__file__).parent / MANIFEST_NAME
    if not path.exists():
        return {"name": addon, "depends": []}
    return ast.literal_eval(path.read_text(encoding="utf-8"))


class ComponentBuilder:
    """Build the component classes

    And register them in a global registry.

    The addons are ordered following the ``depends`` key of their manifest,
    so the components of an addon are always built after the ones of the
    addons it depends on, and extensions (``_inherit``) find their parents.
    Each addon package is imported, which declares its components, then
    its components are built in the registry.

    """

    _components_registry_cache_size = DEFAULT_CACHE_SIZE

    def __init__(self, addons, registry_name="default"):
        if isinstance(addons, str):
            addons = [addons]
        self.addons = list(addons)
        self.registry_name = registry_name

    def build(self):
        """Build a fresh registry and publish it under ``registry_name``"""
        components_registry = self._init_global_registry()
        self.build_registry(components_registry)
        components_registry.ready = True
        return components_registry

    def _init_global_registry(self):
        components_registry = ComponentRegistry(
            cachesize=self._components_registry_cache_size
        )
        _component_registries[self.registry_name] = components_registry
        return components_registry

    def addons_graph(self):
        """Return the addons and all their dependencies, dependencies first"""
        sorter = TopologicalSorter()
        pending = list(self.addons)
        seen = set()
        while pending:
            addon = pending.pop()
            if addon in seen:
                continue
            seen.add(addon)
            depends = read_manifest(addon).get("depends", [])
            sorter.add(addon, *depends)
            pending.extend(depends)
        try:
            return list(sorter.static_order())
        except CycleError as exc:
            raise AddonCycleError(
                "Circular dependency between addons: %s" % (exc.args[1],)
            ) from exc

    def build_registry(self, components_registry, exclude_addons=None):
        exclude_addons = set(exclude_addons or ())
        for addon in self.addons_graph():
            if addon in exclude_addons:
                continue
            importlib.import_module(addon)
            self.load_components(addon, components_registry=components_registry)

    def load_components(self, module, components_registry=None):
        """Build every component known by MetaComponent for an addon

        :param module: the name of the addon for which we want to load
                       the components
        :param components_registry: the registry in which we want to put
                                    the components, the published one by
                                    default
        """
        components_registry = (
            components_registry or _component_registries[self.registry_name]
        )
        components_registry.load_components(module)
        _logger.debug(
            "addon %s loaded in component registry %s", module, self.registry_name
        )
