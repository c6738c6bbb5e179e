# Copyright 2017 Camptocamp SA
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import copy
import unittest

from component.builder import ComponentBuilder
from component.core import ComponentRegistry, MetaComponent, _get_addon_name
from component.models.collection import Collection


class ComponentMixin:
    """Build a registry with all the components of the tested addon

    The registry is built once per test class and given to the
    collections through their ``components_registry`` attribute.
    """

    @classmethod
    def setUpComponent(cls):
        current_addon = _get_addon_name(cls.__module__)
        builder = ComponentBuilder([current_addon], registry_name=current_addon)
        cls._components_registry = builder.build()

    def setUp(self):
        super().setUp()
        self._components_registry.ready = True


class ComponentCase(ComponentMixin, unittest.TestCase):
    """A TestCase that loads all the components

    It ensures that all the components of the current addon and its
    dependencies are loaded.

    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.setUpComponent()


class ComponentRegistryCase:
    """This test case can be used as a base for writings tests on components

    This test case is meant to test components in a special component registry,
    where you want to have maximum control on which components are loaded
    or not, or when you want to create additional components in your tests.

    If you only want to *use* the components of the tested addon in your tests,
    then consider using :class:`ComponentCase`.

    The registry created here loads all the components of the dependencies,
    but not the components of the current addon. In your tests, you can add
    more components in 2 manners.

    All the components of an addon::

        self._load_module_components('mediaseal')

    Only specific components::

        self._build_components(MyComponent1, MyComponent2)

    The registry must be given explicitly to the :class:`WorkContext`::

        work = WorkContext(model_name='media.asset',
                           collection=self.collection,
                           components_registry=self.comp_registry)

    """

    @staticmethod
    def _setup_registry(class_or_instance):
        # keep the original classes registered by the metaclass
        # so we'll restore them at the end of the tests, it avoid
        # to pollute it with Stub / Test components
        class_or_instance._original_components = copy.deepcopy(
            MetaComponent._modules_components
        )

        # it will be our temporary component registry for our test session
        class_or_instance.comp_registry = ComponentRegistry()

        class_or_instance.comp_registry.load_components("component")
        current_addon = _get_addon_name(class_or_instance.__module__)
        builder = ComponentBuilder([current_addon])
        builder.build_registry(
            class_or_instance.comp_registry, exclude_addons=[current_addon]
        )

        # components are added later by the tests, we don't mind
        class_or_instance.comp_registry.ready = True
        collection = Collection()
        collection.components_registry = class_or_instance.comp_registry
        class_or_instance.collection = collection

    @staticmethod
    def _teardown_registry(class_or_instance):
        # restore the original metaclass' classes
        MetaComponent._modules_components = class_or_instance._original_components

    def _load_module_components(self, module):
        self.comp_registry.load_components(module)

    def _build_components(self, *classes):
        for cls in classes:
            cls._build_component(self.comp_registry)


class RegistryComponentCase(unittest.TestCase, ComponentRegistryCase):
    """Registry test case with a fresh registry per test

    class MyTestCase(RegistryComponentCase):
        def test_something(self):
            self._build_components(MyComponent)
            ...
    """

    def setUp(self):
        super().setUp()
        self._setup_registry(self)

    def tearDown(self):
        self._teardown_registry(self)
        super().tearDown()
