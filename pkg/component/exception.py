# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)


class ComponentException(Exception):
    """Base error of the component system"""


class NoComponentError(ComponentException):
    """The lookup matched no component"""


class SeveralComponentError(ComponentException):
    """The lookup matched more than one component, it has to be narrowed"""


class RegistryNotReadyError(ComponentException):
    """The registry is not built yet, or was reset"""


class AddonCycleError(ComponentException):
    """The ``depends`` of the manifests form a cycle"""
