"""Flat ``key = value`` text format.

Used for configuration files, interferogram sidecar metadata and run
manifests. One entry per line, UTF-8, LF line endings, ``#`` starts a
comment line. Lists are comma separated. Floats are written with
:func:`repr`, so a dump/load round trip restores them bit for bit.

Keys ending in ``_deg`` or ``_rad`` name an angle field in that unit; the
suffix is removed and the unit is attached to each value::

    >>> loads('gammas_deg = 0, 90\\nseed = 3\\n')
    {'gammas': '0 deg, 90 deg', 'seed': '3'}
"""
import io
import logging

import six

from ..errors import ValidationError


log = logging.getLogger(__name__)

UNIT_SUFFIXES = {'_deg': 'deg', '_rad': 'rad'}


def _format_scalar(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, six.integer_types):
        return str(value)
    if hasattr(value, 'dtype'):
        # numpy scalars
        return _format_scalar(value.item())
    return six.text_type(value)


def format_value(value):
    """Render one value in the text format."""
    if isinstance(value, (list, tuple)):
        return ', '.join(_format_scalar(item) for item in value)
    return _format_scalar(value)


def dumps(mapping):
    """Render a flat mapping, one ``key = value`` line per entry.

    Nested mappings (serialised sub-records) are flattened into the same
    namespace; their keys must not collide with outer keys.
    """
    lines = []
    seen = set()
    for key, value in _flatten(mapping):
        if key in seen:
            raise ValidationError(key, 'duplicate key')
        seen.add(key)
        lines.append('{0} = {1}\n'.format(key, format_value(value)))
    return ''.join(lines)


def _flatten(mapping):
    for key, value in mapping.items():
        if isinstance(value, dict):
            for item in _flatten(value):
                yield item
        else:
            yield key, value


def loads(text):
    """Parse the text format into a dict of raw string values."""
    result = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ValidationError(None, 'line {0}: expected "key = value", got {1!r}'.format(
                number, raw))
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ValidationError(None, 'line {0}: missing key'.format(number))
        for suffix, unit in UNIT_SUFFIXES.items():
            if key.endswith(suffix):
                key = key[:-len(suffix)]
                value = ', '.join('{0} {1}'.format(item.strip(), unit)
                                  for item in value.split(',') if item.strip())
                break
        if key in result:
            raise ValidationError(key, 'line {0}: duplicate key'.format(number))
        result[key] = value
    return result


def dump(mapping, path):
    """Write :func:`dumps` output to ``path`` (UTF-8, LF)."""
    with io.open(path, 'w', encoding='utf-8', newline='\n') as stream:
        stream.write(dumps(mapping))
    log.debug('wrote %s', path)


def load(path):
    """Read a key-value file written by :func:`dump` or by hand."""
    with io.open(path, 'r', encoding='utf-8') as stream:
        return loads(stream.read())
