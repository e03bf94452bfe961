import math
import numbers
import re

import six

from ...errors import ValidationError


NOT_SET = object()

_ANGLE = re.compile(
    r'^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(rad|deg)?\s*$')


class Field(object):
    """Base class for all field types.

    A field holds no instance data; it converts and validates values on
    their way into a :class:`~spinpath.schema.Model` and back out to plain
    serial values. ``default`` may be a value or a zero-argument callable.
    """
    def __init__(self, default=NOT_SET, required=False):
        self.name = None
        self.default = default
        self.required = required

    def has_default(self):
        return self.default is not NOT_SET

    def get_default(self):
        return self.default() if callable(self.default) else self.default

    def convert(self, data):
        """Run :meth:`to_python`, reporting failures against this field."""
        try:
            return self.to_python(data)
        except ValidationError as exc:
            if exc.field is None:
                raise ValidationError(self.name, exc.message)
            raise
        except (TypeError, ValueError) as exc:
            raise ValidationError(self.name, str(exc))

    def to_python(self, data):
        """Cast the source data into a Python object.

        The default behavior is to return the source data unchanged.
        """
        return data

    def to_serial(self, data):
        """The opposite of :meth:`to_python`: return a string, boolean,
        number, list or dictionary.
        """
        return data


class CharField(Field):
    """Field to represent a simple Unicode string value."""

    def to_python(self, data):
        if data is None:
            return six.u('')
        return six.text_type(data).strip()


class ChoiceField(CharField):
    """A string restricted to a fixed set of choices."""

    def __init__(self, choices, **kwargs):
        super(ChoiceField, self).__init__(**kwargs)
        self.choices = tuple(choices)

    def to_python(self, data):
        value = super(ChoiceField, self).to_python(data)
        if value not in self.choices:
            raise ValidationError(None, '{0!r} is not one of {1}'.format(
                value, ', '.join(self.choices)))
        return value


class _BoundedMixin(object):

    def _check_bounds(self, value):
        if self.minimum is not None:
            if self.exclusive_minimum and not value > self.minimum:
                raise ValidationError(
                    None, 'must be > {0!r}, got {1!r}'.format(self.minimum, value))
            if value < self.minimum:
                raise ValidationError(
                    None, 'must be >= {0!r}, got {1!r}'.format(self.minimum, value))
        if self.maximum is not None and value > self.maximum:
            raise ValidationError(
                None, 'must be <= {0!r}, got {1!r}'.format(self.maximum, value))
        return value


class IntegerField(_BoundedMixin, Field):
    """Field to represent an integer value, optionally bounded."""

    def __init__(self, minimum=None, maximum=None, exclusive_minimum=False,
                 **kwargs):
        super(IntegerField, self).__init__(**kwargs)
        self.minimum = minimum
        self.maximum = maximum
        self.exclusive_minimum = exclusive_minimum

    def to_python(self, data):
        if data is None:
            return self._check_bounds(0)
        if isinstance(data, bool):
            raise ValidationError(None, 'expected an integer, got a boolean')
        if isinstance(data, six.string_types):
            try:
                value = int(data.strip())
            except ValueError:
                number = float(data)
                if not number.is_integer():
                    raise ValidationError(None, 'not an integer: {0!r}'.format(data))
                value = int(number)
        else:
            value = int(data)
            if value != data:
                raise ValidationError(None, 'not an integer: {0!r}'.format(data))
        return self._check_bounds(value)


class FloatField(_BoundedMixin, Field):
    """Field to represent a finite floating point value, optionally bounded."""

    def __init__(self, minimum=None, maximum=None, exclusive_minimum=False,
                 **kwargs):
        super(FloatField, self).__init__(**kwargs)
        self.minimum = minimum
        self.maximum = maximum
        self.exclusive_minimum = exclusive_minimum

    def to_python(self, data):
        if data is None:
            return self._check_bounds(0.0)
        if isinstance(data, bool):
            raise ValidationError(None, 'expected a number, got a boolean')
        value = float(data)
        if not math.isfinite(value):
            raise ValidationError(None, 'must be finite, got {0!r}'.format(value))
        return self._check_bounds(value)


class BooleanField(Field):
    """Field to represent a boolean.

    Python's truth rules apply to non-strings. Strings "false", "no", "off",
    "0" and the empty string (case insensitive) are False.
    """

    def to_python(self, data):
        if isinstance(data, six.string_types):
            return data.strip().lower() not in ('false', 'no', 'off', '0', '')
        return bool(data)


class AngleField(Field):
    """An angle in radians.

    Accepts numbers (radians) and strings carrying an optional ``rad`` or
    ``deg`` unit suffix. ``wrap='2pi'`` reduces into [0, 2π), ``wrap='pi'``
    into [0, π); the default keeps the value as given. With ``null=True``,
    None and the empty string stay None (an unused angle). ::

        >>> round(AngleField().to_python('180 deg'), 12)
        3.14159265359
        >>> round(AngleField(wrap='2pi').to_python('-90deg') / math.pi, 12)
        1.5
    """
    PERIODS = {'2pi': 2.0 * math.pi, 'pi': math.pi}

    def __init__(self, wrap=None, null=False, **kwargs):
        super(AngleField, self).__init__(**kwargs)
        if wrap is not None and wrap not in self.PERIODS:
            raise ValueError('wrap must be one of {0}'.format(sorted(self.PERIODS)))
        self.wrap = wrap
        self.null = null

    @staticmethod
    def parse(data):
        """Return radians for a number or a unit-suffixed string."""
        if isinstance(data, bool):
            raise ValidationError(None, 'expected an angle, got a boolean')
        if isinstance(data, six.string_types):
            match = _ANGLE.match(data)
            if not match:
                raise ValidationError(None, 'not an angle: {0!r}'.format(data))
            value = float(match.group(1))
            if match.group(2) == 'deg':
                value = math.radians(value)
            return value
        return float(data)

    def to_python(self, data):
        if self.null and (data is None or data == ''):
            return None
        if data is None:
            return 0.0
        value = self.parse(data)
        if not math.isfinite(value):
            raise ValidationError(None, 'must be finite, got {0!r}'.format(value))
        if self.wrap:
            period = self.PERIODS[self.wrap]
            value = value % period
            # float modulo can land exactly on the period
            if value >= period:
                value = 0.0
        return value


class SignField(Field):
    """Measurement outcome sign, stored as +1 or -1."""
    TOKENS = {'+': 1, '-': -1, '+1': 1, '1': 1, '-1': -1}

    def to_python(self, data):
        if isinstance(data, six.string_types):
            token = data.strip()
            if token not in self.TOKENS:
                raise ValidationError(None, 'not a sign: {0!r}'.format(data))
            return self.TOKENS[token]
        if data in (1, -1) and not isinstance(data, bool):
            return int(data)
        raise ValidationError(None, 'not a sign: {0!r}'.format(data))

    def to_serial(self, data):
        return '+' if data > 0 else '-'


class CountField(Field):
    """A non-negative detector count.

    Integers (drawn counts) stay ``int``; floats (expected counts of the
    infinite-statistics mode) stay ``float``.
    """

    def to_python(self, data):
        if data is None:
            return 0
        if isinstance(data, bool):
            raise ValidationError(None, 'expected a count, got a boolean')
        if isinstance(data, six.string_types):
            text = data.strip()
            value = int(text) if text.lstrip('+-').isdigit() else float(text)
        elif isinstance(data, numbers.Integral):
            value = int(data)
        else:
            value = float(data)
        if isinstance(value, float) and not math.isfinite(value):
            raise ValidationError(None, 'must be finite, got {0!r}'.format(value))
        if value < 0:
            raise ValidationError(None, 'must be >= 0, got {0!r}'.format(value))
        return value
