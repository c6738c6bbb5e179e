# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Canonical JSON
==============

Every byte sequence that is signed, hashed, stored or compared is encoded
the same way: keys sorted, no insignificant whitespace, UTF-8, integers in
base 10 and digests as lowercase hex. Floats are refused, a canonical form
must not depend on float formatting.

"""

import json

from ..exception import InvariantViolation


def _check(value):
    if isinstance(value, float):
        raise InvariantViolation("floats have no canonical form: %r" % (value,))
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise InvariantViolation("object keys must be strings: %r" % (key,))
            _check(item)
    elif isinstance(value, (list, tuple)):
        for item in value:
            _check(item)


def _sort_key(item):
    # lexicographic on UTF-8 bytes, which differs from str ordering for
    # characters outside the BMP
    return item[0].encode("utf-8")


def _sorted(value):
    if isinstance(value, dict):
        return {key: _sorted(item) for key, item in sorted(value.items(), key=_sort_key)}
    if isinstance(value, (list, tuple)):
        return [_sorted(item) for item in value]
    return value


def dumps(value):
    """Return the canonical JSON bytes of ``value``"""
    _check(value)
    return json.dumps(
        _sorted(value), separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def loads(data):
    """Decode JSON bytes, duplicate keys are refused"""

    def no_duplicates(pairs):
        result = {}
        for key, value in pairs:
            if key in result:
                raise ValueError("duplicate key %r" % key)
            result[key] = value
        return result

    if isinstance(data, (bytes, bytearray)):
        data = bytes(data).decode("utf-8")
    return json.loads(data, object_pairs_hook=no_duplicates)


def is_canonical(data):
    try:
        return dumps(loads(data)) == bytes(data)
    except (ValueError, InvariantViolation):
        return False
