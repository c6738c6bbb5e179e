# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""

Mappers
=======

Mappers are the components responsible to transform the records of the
toolkit (registry entries, fingerprints) into their canonical JSON values
and conversely.

A source record is either a mapping or an object whose attributes are read.

"""

import logging
from collections.abc import Mapping

from component.core import AbstractComponent
from component.exception import NoComponentError

from ..exception import MappingError

_logger = logging.getLogger(__name__)


__all__ = [
    "Mapper",
    "ImportMapper",
    "ExportMapper",
    "mapping",
    "only_create",
    "to_hex",
    "from_hex",
    "MapRecord",
    "MapChild",
    "ImportMapChild",
    "ExportMapChild",
]


def mapping(func):
    """Decorator, declare that a method is a mapping method.

    It is then used by the :py:class:`Mapper` to convert the records.

    Usage::

        @mapping
        def any(self, record):
            return {'output_field': record['input_field']}

    """
    func.is_mapping = True
    return func


def only_create(func):
    """Decorator for the mapping methods (:py:func:`mapping`)

    The mapping is applied only when the values are built for a new record
    (``for_create``).
    """
    func.only_create = True
    return func


def read_field(record, field):
    """Value of a field of a mapping or an object"""
    if isinstance(record, Mapping):
        return record[field]
    try:
        return getattr(record, field)
    except AttributeError as exc:
        raise KeyError(field) from exc


def _modifier(field, convert):
    def modifier(self, record, to_attr):
        value = read_field(record, field)
        if value is None:
            return None
        return convert(field, value)

    modifier.field = field
    return modifier


def _from_hex(field, value):
    if not isinstance(value, str):
        raise MappingError("%s: hex text expected, got %r" % (field, value))
    data = bytes.fromhex(value)
    if data.hex() != value:
        raise MappingError("%s: hex must be lowercase without spaces" % field)
    return data


def to_hex(field):
    """``direct`` modifier: bytes to lowercase hex, None stays None"""
    return _modifier(field, lambda __, value: bytes(value).hex())


def from_hex(field):
    """``direct`` modifier: lowercase hex to bytes, None stays None"""
    return _modifier(field, _from_hex)


class MapChild(AbstractComponent):
    """Convert the items of a record, the fingerprints of an entry for
    instance, with the mapper of their model.

    The default children components are :py:class:`ImportMapChild` and
    :py:class:`ExportMapChild`; a model may register its own to build the
    item objects back (:py:meth:`format_items`).
    """

    _name = "base.map.child"
    _inherit = "base.mediaseal"

    def _child_mapper(self):
        raise NotImplementedError

    def get_items(self, items, parent, for_create):
        mapper = self._child_mapper()
        mapped = [
            mapper.map_record(item, parent=parent).values(for_create=for_create)
            for item in items
        ]
        return self.format_items([values for values in mapped if values])

    def format_items(self, items_values):
        return items_values


class ImportMapChild(AbstractComponent):
    _name = "base.map.child.import"
    _inherit = "base.map.child"
    _usage = "import.map.child"

    def _child_mapper(self):
        return self.component(usage="import.mapper")


class ExportMapChild(AbstractComponent):
    _name = "base.map.child.export"
    _inherit = "base.map.child"
    _usage = "export.map.child"

    def _child_mapper(self):
        return self.component(usage="export.mapper")


class Mapper(AbstractComponent):
    """A Mapper translates a record of the toolkit to its canonical JSON
    values and conversely. The output of a Mapper is a ``dict``.

    Direct Mappings
        ``direct = [('source', 'target')]`` copies a field. The source may
        be a modifier such as ``to_hex('content_hash')``.

    Method Mappings
        Methods decorated with :py:func:`mapping` return a dict of fields;
        with :py:func:`only_create` they run for new records only.

    Submappings
        ``children = [('fingerprints', 'fingerprints', 'fingerprint')]``
        converts the items with the mapper of the ``fingerprint`` model.

    Usage::

        >>> mapper = self.component(usage='export.mapper')
        >>> values = mapper.map_record(entry).values()

    """

    _name = "base.mapper"
    _inherit = "base.mediaseal"
    _usage = "mapper"

    direct = []  # (from_attr, to_attr)
    children = []  # (from_attr, to_attr, model)

    _map_methods = None

    _map_child_usage = None
    _map_child_fallback = None

    @classmethod
    def _complete_component_build(cls):
        super()._complete_component_build()
        map_methods = {}
        for name in dir(cls):
            attr = getattr(cls, name, None)
            if getattr(attr, "is_mapping", False):
                map_methods[name] = getattr(attr, "only_create", False)
        cls._map_methods = map_methods

    def _get_map_child_component(self, model_name):
        try:
            return self.component(usage=self._map_child_usage, model_name=model_name)
        except NoComponentError:
            return self.component_by_name(self._map_child_fallback, model_name=model_name)

    def map_record(self, record, parent=None):
        """A :py:class:`MapRecord` of ``record``, ready to be converted"""
        return MapRecord(self, record, parent=parent)

    def _apply(self, map_record, for_create=False):
        _logger.debug("converting a record of %s with %s", self.model_name, self._name)
        source = map_record.source
        result = {}
        for from_attr, to_attr in self.direct:
            try:
                if callable(from_attr):
                    result[to_attr] = from_attr(self, source, to_attr)
                else:
                    result[to_attr] = read_field(source, from_attr)
            except (KeyError, ValueError, TypeError) as exc:
                name = getattr(from_attr, "field", from_attr)
                raise MappingError("%s: cannot map %s: %s" % (self._name, name, exc)) from exc

        for name, create_only in sorted(self._map_methods.items()):
            if create_only and not for_create:
                continue
            values = getattr(self, name)(source)
            if not values:
                continue
            if not isinstance(values, dict):
                raise ValueError("%s: invalid return value for the mapping method %s" % (values, name))
            result.update(values)

        for from_attr, to_attr, model_name in self.children:
            child = self._get_map_child_component(model_name)
            result[to_attr] = child.get_items(read_field(source, from_attr), map_record, for_create)

        return self.finalize(map_record, result)

    def finalize(self, map_record, values):
        """Hook called with the mapped values, returns the final values"""
        return values


class ImportMapper(AbstractComponent):
    """Canonical JSON values to a record of the toolkit"""

    _name = "base.import.mapper"
    _inherit = "base.mapper"
    _usage = "import.mapper"

    _map_child_usage = "import.map.child"
    _map_child_fallback = "base.map.child.import"


class ExportMapper(AbstractComponent):
    """A record of the toolkit to canonical JSON values"""

    _name = "base.export.mapper"
    _inherit = "base.mapper"
    _usage = "export.mapper"

    _map_child_usage = "export.map.child"
    _map_child_fallback = "base.map.child.export"


class MapRecord:
    """A record prepared by :py:meth:`Mapper.map_record`

    Usage::

        >>> map_record = mapper.map_record(record)
        >>> output_values = map_record.values(for_create=True)

    """

    def __init__(self, mapper, source, parent=None):
        self._source = source
        self._mapper = mapper
        self._parent = parent

    @property
    def source(self):
        """Source record to be converted"""
        return self._source

    @property
    def parent(self):
        """Parent record if the current record is an item"""
        return self._parent

    def values(self, for_create=False):
        """The mapped values, the ``only_create`` mappings included when
        ``for_create``"""
        return self._mapper._apply(self, for_create=bool(for_create))
