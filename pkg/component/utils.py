# Copyright 2023 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

from .core import _component_registries


def get_component_registry(registry_name):
    """The registry published under ``registry_name``, None if never built"""
    return _component_registries.get(registry_name)


def is_component_registry_ready(registry_name):
    comp_registry = get_component_registry(registry_name)
    return bool(comp_registry is not None and comp_registry.ready)
